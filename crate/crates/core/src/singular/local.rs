use super::SingularError;
use crate::linalg;
use crate::poly::HomogeneousPoly;
use crate::scalar::Field;

type AffineTerms<K> = Vec<((u32, u32), <K as Field>::Elem)>;

/// Position of `u^i v^j` among the monomials ordered by degree.
fn index(i: u32, j: u32) -> usize {
    let n = (i + j) as usize;
    n * (n + 1) / 2 + j as usize
}

/// `dim k[u,v] / (I + m^n)` for `I` generated by `gens`.
fn truncated_dim<K: Field>(k: &K, gens: &[AffineTerms<K>], n: u32) -> usize {
    let cols = index(n, 0);
    let mut rows = Vec::new();
    for g in gens {
        let Some(ord) = g.iter().map(|((i, j), _)| i + j).min() else {
            continue;
        };
        for s in 0..n.saturating_sub(ord) {
            for b in 0..=s {
                let a = s - b;
                let mut row = vec![k.zero(); cols];
                for ((i, j), c) in g {
                    if a + i + b + j < n {
                        row[index(a + i, b + j)] = c.clone();
                    }
                }
                rows.push(row);
            }
        }
    }
    cols - linalg::rank(k, cols, rows)
}

/// Dimension of the local algebra `k[u,v]_m / I` at `point`, where each
/// generator is an affine polynomial in `u = x`, `v = y` given homogenized
/// in `z`.
///
/// The truncations `D_n = dim k[u,v]/(I + m^n)` increase strictly until
/// they repeat, and the repeated value is the local dimension. `guard`
/// bounds both `n` and `D_n`; exceeding it means the point is not isolated.
pub fn local_algebra_dim<K: Field>(
    gens: &[HomogeneousPoly<K>],
    point: [K::Elem; 2],
    guard: u32,
) -> Result<usize, SingularError> {
    let Some(first) = gens.first() else {
        return Err(SingularError::NonIsolated(guard));
    };
    let k = first.field().clone();
    let [a, b] = point;
    let shift = [[k.one(), k.zero(), a], [k.zero(), k.one(), b], [k.zero(), k.zero(), k.one()]];
    let affine: Vec<AffineTerms<K>> = gens
        .iter()
        .map(|g| {
            let g = g.compose_linear(&shift);
            g.terms().filter(|(_, c)| !k.is_zero(c)).map(|(m, c)| ((m.0[0], m.0[1]), c.clone())).collect()
        })
        .collect();
    let mut prev = None;
    for n in 1..=guard {
        let d = truncated_dim(&k, &affine, n);
        if d > guard as usize {
            break;
        }
        debug_assert!(prev.map_or(true, |p| p <= d), "truncations decrease");
        if prev == Some(d) {
            return Ok(d);
        }
        prev = Some(d);
    }
    Err(SingularError::NonIsolated(guard))
}
