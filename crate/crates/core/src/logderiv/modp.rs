//! Dense row reduction over `F_p` for `p < 2^62` on raw residues.

#[derive(Clone)]
pub(crate) struct ModMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    a: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i128) as u64
}

/// `dst += f * src (mod p)` using a precomputed Shoup quotient for `f`.
#[inline]
fn axpy(dst: &mut [u64], src: &[u64], f: u64, p: u64) {
    let f_sh = (((f as u128) << 64) / p as u128) as u64;
    for (d, &x) in dst.iter_mut().zip(src) {
        if x == 0 {
            continue;
        }
        let q = ((f_sh as u128 * x as u128) >> 64) as u64;
        let prod = f.wrapping_mul(x).wrapping_sub(q.wrapping_mul(p));
        let mut s = *d + prod;
        if s >= p {
            s -= p;
        }
        if s >= p {
            s -= p;
        }
        *d = s;
    }
}

#[inline]
fn scale(row: &mut [u64], f: u64, p: u64) {
    let f_sh = (((f as u128) << 64) / p as u128) as u64;
    for x in row.iter_mut() {
        let q = ((f_sh as u128 * *x as u128) >> 64) as u64;
        let mut r = f.wrapping_mul(*x).wrapping_sub(q.wrapping_mul(p));
        if r >= p {
            r -= p;
        }
        *x = r;
    }
}

impl ModMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        assert!(p >= 2 && p < (1 << 62));
        Self { p, rows, cols, a: vec![0; rows * cols] }
    }

    pub fn from_rows(p: u64, cols: usize, rows: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut a = Vec::new();
        let mut n = 0;
        for r in rows {
            debug_assert_eq!(r.len(), cols);
            a.extend(r);
            n += 1;
        }
        Self { p, rows: n, cols, a }
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: u64) {
        let x = &mut self.a[r * self.cols + c];
        *x = (*x + v) % self.p;
    }

    fn two_rows(&mut self, i: usize, j: usize) -> (&mut [u64], &mut [u64]) {
        let n = self.cols;
        debug_assert_ne!(i, j);
        if i < j {
            let (lo, hi) = self.a.split_at_mut(j * n);
            (&mut lo[i * n..(i + 1) * n], &mut hi[..n])
        } else {
            let (lo, hi) = self.a.split_at_mut(i * n);
            (&mut hi[..n], &mut lo[j * n..(j + 1) * n])
        }
    }

    /// Row echelon form in place, reduced (zeros above pivots too) when
    /// `reduced`. Pivot rows are normalized to 1. Returns the pivot columns.
    pub fn echelon(&mut self, reduced: bool) -> Vec<usize> {
        let (p, n) = (self.p, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == self.rows {
                break;
            }
            let Some(i) = (r..self.rows).find(|&i| self.a[i * n + c] != 0) else {
                continue;
            };
            if i != r {
                let (x, y) = self.two_rows(i, r);
                x.swap_with_slice(y);
            }
            let inv = inv_mod(self.a[r * n + c], p);
            scale(&mut self.a[r * n + c..(r + 1) * n], inv, p);
            let start = if reduced { 0 } else { r + 1 };
            for i in start..self.rows {
                if i == r {
                    continue;
                }
                let v = self.a[i * n + c];
                if v == 0 {
                    continue;
                }
                let (dst, src) = self.two_rows(i, r);
                axpy(&mut dst[c..], &src[c..], p - v, p);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(mut self) -> usize {
        // eliminate along the shorter side
        if self.rows > self.cols {
            self = self.transpose();
        }
        self.echelon(false).len()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.a[j * self.rows + i] = self.a[i * self.cols + j];
            }
        }
        t
    }

    /// Canonical kernel basis from the reduced row echelon form: one vector
    /// per free column `j`, with 1 at `j`, 0 at the other free columns.
    pub fn kernel(mut self) -> (Vec<usize>, Vec<Vec<u64>>) {
        let p = self.p;
        let pivots = self.echelon(true);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for j in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![0u64; self.cols];
            v[j] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                let x = self.a[r * self.cols + j];
                v[c] = if x == 0 { 0 } else { p - x };
            }
            basis.push(v);
        }
        (pivots, basis)
    }
}

/// Incremental echelon basis of row vectors mod `p`, for greedy selection.
pub(crate) struct ModEchelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    pub fn new(p: u64) -> Self {
        Self { p, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// True if `v` was independent of the rows so far (and is now added).
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (c, row) in &self.rows {
            let x = v[*c];
            if x != 0 {
                axpy(&mut v[*c..], &row[*c..], p - x, p);
            }
        }
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[c], p);
        scale(&mut v[c..], inv, p);
        self.rows.push((c, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::linalg;
    use crate::scalar::{Field, PrimeField};

    #[test]
    fn small_rank_and_kernel() {
        let m = ModMatrix::from_rows(7, 3, vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.clone().rank(), 2);
        let (pivots, ker) = m.kernel();
        assert_eq!(pivots, vec![0, 1]);
        // x + 2y + 3z = 0, y + z = 0  =>  (-1, -1, 1)
        assert_eq!(ker, vec![vec![6, 6, 1]]);
    }

    proptest! {
        #[test]
        fn agrees_with_generic_echelon(
            rows in 1usize..8, cols in 1usize..8, seed in prop::collection::vec(0u64..101, 64),
        ) {
            let p = 101;
            let f = PrimeField::new(p);
            let data: Vec<Vec<u64>> = (0..rows).map(|i| (0..cols).map(|j| seed[(i * 8 + j) % 64] % 3).collect()).collect();
            let m = ModMatrix::from_rows(p, cols, data.clone());
            prop_assert_eq!(m.clone().rank(), linalg::rank(&f, cols, data.clone()));
            let (_, ker) = m.kernel();
            prop_assert_eq!(ker.len(), cols - linalg::rank(&f, cols, data.clone()));
            for v in &ker {
                for r in &data {
                    let dot = r.iter().zip(v).fold(0, |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
                    prop_assert_eq!(dot, 0);
                }
            }
        }

        #[test]
        fn large_prime_arithmetic(a in 1u64..(1 << 31) - 1, b in 0u64..(1 << 31) - 1) {
            let p = (1u64 << 31) - 1;
            let mut dst = vec![b];
            axpy(&mut dst, &[a], a, p);
            prop_assert_eq!(dst[0], ((b as u128 + a as u128 * a as u128) % p as u128) as u64);
            prop_assert_eq!(inv_mod(a, p) as u128 * a as u128 % p as u128, 1);
        }
    }
}
