//! The graded pieces of the map `(a, b, c) -> a f_x + b f_y + c f_z` and of
//! the span of monomial multiples of known derivations, as sparse columns.

use crate::poly::{basis, dim_s, Monomial};

/// Sparse coefficients of the three components of a derivation.
pub(crate) type Triple<C> = [Vec<(Monomial, C)>; 3];

/// Index of `(k, m)` in the coordinates of `(S_e)^3`.
pub(crate) fn coord(e: u32, k: usize, m: &Monomial) -> usize {
    k * dim_s(e as i64) + m.dense_index()
}

/// Columns of the map `(S_e)^3 -> S_{e+d-1}`, ordered as [`coord`].
pub(crate) fn jacobian_columns<C: Clone>(partials: &Triple<C>, e: u32) -> Vec<Vec<(usize, C)>> {
    let mons = basis(e);
    let mut cols = Vec::with_capacity(3 * mons.len());
    for part in partials {
        for m in &mons {
            cols.push(part.iter().map(|(pm, c)| (m.mul(pm).dense_index(), c.clone())).collect());
        }
    }
    cols
}

/// `mu * theta` for every monomial `mu` of degree `e - deg theta`, as
/// sparse vectors in the coordinates of `(S_e)^3`.
pub(crate) fn multiples<C: Clone>(theta: &Triple<C>, degree: u32, e: u32) -> Vec<Vec<(usize, C)>> {
    if degree > e {
        return Vec::new();
    }
    basis(e - degree)
        .iter()
        .map(|mu| {
            (0..3)
                .flat_map(|k| theta[k].iter().map(move |(m, c)| (coord(e, k, &mu.mul(m)), c.clone())))
                .collect()
        })
        .collect()
}

/// Splits a dense vector of `(S_e)^3` into its three components.
pub(crate) fn to_triple<C: Clone>(e: u32, v: &[C], is_zero: impl Fn(&C) -> bool) -> Triple<C> {
    let mons = basis(e);
    let n = mons.len();
    std::array::from_fn(|k| {
        mons.iter()
            .enumerate()
            .filter(|(i, _)| !is_zero(&v[k * n + i]))
            .map(|(i, m)| (*m, v[k * n + i].clone()))
            .collect()
    })
}

/// Number of rows of the Jacobian map in degree `e`.
pub(crate) fn target_dim(e: u32, d: u32) -> usize {
    dim_s(e as i64 + d as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_and_shapes() {
        let m = Monomial([0, 0, 1]);
        assert_eq!(coord(1, 0, &m), 2);
        assert_eq!(coord(1, 2, &Monomial([1, 0, 0])), 6);
        // f = x y: partials (y, x, 0)
        let parts: Triple<i64> = [vec![(Monomial([0, 1, 0]), 1)], vec![(Monomial([1, 0, 0]), 1)], vec![]];
        let cols = jacobian_columns(&parts, 1);
        assert_eq!(cols.len(), 9);
        assert_eq!(target_dim(1, 2), 6);
        assert!(cols[6..].iter().all(|c| c.is_empty()));
        let theta: Triple<i64> = [vec![], vec![], vec![(Monomial::ONE, 1)]];
        let mults = multiples(&theta, 0, 1);
        assert_eq!(mults.len(), 3);
        assert_eq!(mults[0], vec![(6, 1)]);
    }
}
