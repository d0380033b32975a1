//! Dense exact linear algebra over a [`Field`].
//!
//! Everything is built on [`Echelon`], an incrementally grown row-echelon
//! basis. Ranks, span tests and kernels all reduce to inserting vectors.

use crate::scalar::Field;

struct Row<E> {
    pivot: usize,
    data: Vec<E>,
}

/// Row-echelon basis of a growing subspace of `F^width`. Each stored row has
/// a unit pivot and zeros in the pivot columns of all earlier rows.
pub struct Echelon<F: Field> {
    field: F,
    width: usize,
    pivot_limit: usize,
    rows: Vec<Row<F::Elem>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, width: usize) -> Self {
        Self { field, width, pivot_limit: width, rows: Vec::new() }
    }

    /// Pivots are only taken in columns `< pivot_limit`; the trailing columns
    /// ride along (used for tracking combinations).
    pub fn with_pivot_limit(field: F, width: usize, pivot_limit: usize) -> Self {
        assert!(pivot_limit <= width);
        Self { field, width, pivot_limit, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn reduce(&self, v: &mut [F::Elem]) {
        debug_assert_eq!(v.len(), self.width);
        let f = &self.field;
        for row in &self.rows {
            if f.is_zero(&v[row.pivot]) {
                continue;
            }
            let c = v[row.pivot].clone();
            for (x, r) in v[row.pivot..].iter_mut().zip(&row.data[row.pivot..]) {
                if !f.is_zero(r) {
                    f.sub_mul_assign(x, &c, r);
                }
            }
        }
    }

    /// Inserts `v`. Returns `Ok(pivot)` if it was independent of the rows so
    /// far, otherwise `Err(residue)` with the reduced vector (zero in all
    /// pivot-eligible columns).
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> Result<usize, Vec<F::Elem>> {
        self.reduce(&mut v);
        let f = &self.field;
        let Some(pivot) = (0..self.pivot_limit).find(|&j| !f.is_zero(&v[j])) else {
            return Err(v);
        };
        let inv = f.inv(&v[pivot]).expect("pivot is nonzero");
        for x in v[pivot..].iter_mut() {
            if !f.is_zero(x) {
                *x = f.mul(x, &inv);
            }
        }
        self.rows.push(Row { pivot, data: v });
        Ok(pivot)
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w[..self.pivot_limit].iter().all(|x| self.field.is_zero(x))
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.pivot)
    }
}

pub fn rank<F: Field>(field: &F, width: usize, vectors: impl IntoIterator<Item = Vec<F::Elem>>) -> usize {
    let mut ech = Echelon::new(field.clone(), width);
    for v in vectors {
        let _ = ech.insert(v);
        if ech.rank() == width {
            break;
        }
    }
    ech.rank()
}

/// Basis of `{c : sum_i c_i * images[i] = 0}`.
pub fn kernel<F: Field>(field: &F, width: usize, images: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let n = images.len();
    let mut ech = Echelon::with_pivot_limit(field.clone(), width + n, width);
    let mut out = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let mut v = Vec::with_capacity(width + n);
        v.extend(img.iter().cloned());
        v.extend((0..n).map(|j| if j == i { field.one() } else { field.zero() }));
        if let Err(residue) = ech.insert(v) {
            out.push(residue[width..].to_vec());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    use super::*;
    use crate::scalar::{PrimeField, Rationals};

    fn qv(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn rank_of_small_rational_matrix() {
        let rows = vec![qv(&[1, 2, 3]), qv(&[2, 4, 6]), qv(&[0, 1, 1])];
        assert_eq!(rank(&Rationals, 3, rows), 2);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let images = vec![qv(&[1, 0, 2]), qv(&[0, 1, 1]), qv(&[1, 1, 3]), qv(&[2, 0, 4])];
        let ker = kernel(&Rationals, 3, &images);
        assert_eq!(ker.len(), 2);
        for c in &ker {
            let mut sum = qv(&[0, 0, 0]);
            for (ci, img) in c.iter().zip(&images) {
                for (s, x) in sum.iter_mut().zip(img) {
                    *s += ci * x;
                }
            }
            assert!(sum.iter().all(|x| *x == BigRational::from_integer(0.into())));
        }
    }

    proptest! {
        // rank + nullity = number of vectors
        #[test]
        fn rank_nullity_mod_p(entries in prop::collection::vec(0u64..5, 30)) {
            let f = PrimeField::new(5);
            let images: Vec<Vec<u64>> = entries.chunks(5).map(|c| c.to_vec()).collect();
            let r = rank(&f, 5, images.clone());
            let k = kernel(&f, 5, &images);
            prop_assert_eq!(r + k.len(), images.len());
        }
    }
}
