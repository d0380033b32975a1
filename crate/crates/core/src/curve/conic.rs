use super::CurveError;
use crate::poly::{BinaryForm, HomogeneousPoly, Monomial, PolyError};
use crate::scalar::Field;

/// `H = 2M` where `q = v^T M v`; integral for integral `q`.
pub fn conic_hessian<F: Field>(q: &HomogeneousPoly<F>) -> [[F::Elem; 3]; 3] {
    let f = q.field();
    let mut h: [[F::Elem; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| f.zero()));
    for i in 0..3 {
        for j in 0..3 {
            let mut e = [0u32; 3];
            e[i] += 1;
            e[j] += 1;
            let c = q.coeff(&Monomial(e));
            h[i][j] = if i == j { f.add(&c, &c) } else { c };
        }
    }
    h
}

fn det3<F: Field>(f: &F, m: &[[F::Elem; 3]; 3]) -> F::Elem {
    let minor = |a: usize, b: usize, c: usize, d: usize| {
        f.sub(&f.mul(&m[1][a], &m[2][b]), &f.mul(&m[1][c], &m[2][d]))
    };
    let t0 = f.mul(&m[0][0], &minor(1, 2, 2, 1));
    let t1 = f.mul(&m[0][1], &minor(0, 2, 2, 0));
    let t2 = f.mul(&m[0][2], &minor(0, 1, 1, 0));
    f.add(&f.sub(&t0, &t1), &t2)
}

/// `det M != 0`.
pub fn is_smooth_conic<F: Field>(q: &HomogeneousPoly<F>) -> Result<bool, CurveError> {
    if q.degree() != 2 {
        return Err(PolyError::DegreeMismatch { left: 2, right: q.degree() }.into());
    }
    Ok(!q.field().is_zero(&det3(q.field(), &conic_hessian(q))))
}

/// Solves `q(u, v, w) = 0` for `w`.
fn solve_last<F: Field>(q: &HomogeneousPoly<F>, u: &F::Elem, v: &F::Elem) -> Option<F::Elem> {
    let f = q.field();
    let at = |w: i64| q.eval(&[u.clone(), v.clone(), f.from_i64(w)]);
    // q(u, v, w) = a w^2 + b w + c
    let c = at(0);
    let p1 = at(1);
    let m1 = at(-1);
    let two = f.from_i64(2);
    let a = f.div(&f.sub(&f.add(&p1, &m1), &f.add(&c, &c)), &two)?;
    let b = f.div(&f.sub(&p1, &m1), &two)?;
    if f.is_zero(&a) {
        return if f.is_zero(&b) { None } else { Some(f.neg(&f.div(&c, &b)?)) };
    }
    let four = f.from_i64(4);
    let disc = f.sub(&f.mul(&b, &b), &f.mul(&four, &f.mul(&a, &c)));
    let r = f.sqrt(&disc)?;
    f.div(&f.sub(&r, &b), &f.add(&a, &a))
}

/// A point on the conic. Over `Q` the first two coordinates range over
/// integers of height at most `height_bound`; over `F_p` the search runs
/// until a point is found, which always happens.
pub fn find_conic_point<F: Field>(q: &HomogeneousPoly<F>, height_bound: u64) -> Option<[F::Elem; 3]> {
    let f = q.field();
    let e3 = [f.zero(), f.zero(), f.one()];
    if f.is_zero(&q.eval(&e3)) {
        return Some(e3);
    }
    let p = f.characteristic();
    let limit = if p == 0 { height_bound } else { p };
    for h in 1..=limit as i64 {
        for u in -h..=h {
            for v in -h..=h {
                if u.abs().max(v.abs()) != h {
                    continue;
                }
                let (fu, fv) = (f.from_i64(u), f.from_i64(v));
                if let Some(w) = solve_last(q, &fu, &fv) {
                    return Some([fu, fv, w]);
                }
            }
        }
    }
    None
}

/// A projective frame carrying `y^2 - x z` to the conic:
/// `q(T v) = lambda (y^2 - x z)` and `param = T (s^2, s t, t^2)`.
pub struct ConicFrame<F: Field> {
    /// Rows of `T`; row `i` is the linear form substituted for variable `i`.
    pub t: [[F::Elem; 3]; 3],
    pub lambda: F::Elem,
    pub param: [BinaryForm<F>; 3],
}

impl<F: Field> std::fmt::Debug for ConicFrame<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConicFrame").field("param", &self.param).finish_non_exhaustive()
    }
}

fn bilinear<F: Field>(f: &F, h: &[[F::Elem; 3]; 3], a: &[F::Elem; 3], b: &[F::Elem; 3]) -> F::Elem {
    let mut acc = f.zero();
    for i in 0..3 {
        for j in 0..3 {
            acc = f.add(&acc, &f.mul(&a[i], &f.mul(&h[i][j], &b[j])));
        }
    }
    acc
}

fn mat_vec<F: Field>(f: &F, h: &[[F::Elem; 3]; 3], v: &[F::Elem; 3]) -> [F::Elem; 3] {
    std::array::from_fn(|i| (0..3).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(&h[i][j], &v[j]))))
}

fn cross<F: Field>(f: &F, a: &[F::Elem; 3], b: &[F::Elem; 3]) -> [F::Elem; 3] {
    std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        f.sub(&f.mul(&a[j], &b[k]), &f.mul(&a[k], &b[j]))
    })
}

fn param_from_rows<F: Field>(f: &F, t: &[[F::Elem; 3]; 3]) -> [BinaryForm<F>; 3] {
    std::array::from_fn(|i| BinaryForm::new(f.clone(), t[i].to_vec()))
}

fn standard_conic<F: Field>(f: &F) -> HomogeneousPoly<F> {
    HomogeneousPoly::from_terms(f.clone(), 2, [(Monomial([0, 2, 0]), f.one()), (Monomial([1, 0, 1]), f.from_i64(-1))])
        .expect("homogeneous")
}

/// Finds `T` with `q o T = lambda (y^2 - x z)`. With a point `P` on the
/// conic and `Q'` a second point, `R` is the pole of the line `P Q'` and
/// `T` has columns `(alpha P, R, Q')`.
pub fn normalize_conic<F: Field>(q: &HomogeneousPoly<F>, height_bound: u64) -> Result<ConicFrame<F>, CurveError> {
    if !is_smooth_conic(q)? {
        return Err(CurveError::SingularConicDeclaredSmooth(0));
    }
    let f = q.field();
    let std = standard_conic(f);
    if q.is_associate(&std) {
        let t = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { f.one() } else { f.zero() }));
        let lambda = q.coeff(&Monomial([0, 2, 0]));
        let param = param_from_rows(f, &t);
        return Ok(ConicFrame { t, lambda, param });
    }
    let p = find_conic_point(q, height_bound).ok_or(CurveError::NoRationalPointFound(height_bound))?;
    normalize_conic_at(q, &p)
}

/// [`normalize_conic`] with a given point `p` on the conic.
pub fn normalize_conic_at<F: Field>(q: &HomogeneousPoly<F>, p: &[F::Elem; 3]) -> Result<ConicFrame<F>, CurveError> {
    if !is_smooth_conic(q)? {
        return Err(CurveError::SingularConicDeclaredSmooth(0));
    }
    debug_assert!(q.field().is_zero(&q.eval(p)));
    let f = q.field();
    let std = standard_conic(f);
    let h = conic_hessian(q);
    let p = p.clone();
    let basis: [[F::Elem; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { f.one() } else { f.zero() }));
    let (qv, bpq) = basis
        .iter()
        .map(|e| (e.clone(), bilinear(f, &h, &p, e)))
        .find(|(_, b)| !f.is_zero(b))
        .expect("a smooth conic has no point orthogonal to everything");
    // q(Q) = B(Q, Q) / 2 with B the polar form of H; shift Q onto the conic.
    let two = f.from_i64(2);
    let q_of_q = f.div(&bilinear(f, &h, &qv, &qv), &two).expect("odd characteristic");
    let shift = f.div(&q_of_q, &bpq).unwrap();
    let q2: [F::Elem; 3] = std::array::from_fn(|i| f.sub(&qv[i], &f.mul(&shift, &p[i])));
    let r = cross(f, &mat_vec(f, &h, &p), &mat_vec(f, &h, &q2));
    let lambda = f.div(&bilinear(f, &h, &r, &r), &two).unwrap();
    let alpha = f.neg(&f.div(&lambda, &bpq).unwrap());
    let t: [[F::Elem; 3]; 3] =
        std::array::from_fn(|i| [f.mul(&alpha, &p[i]), r[i].clone(), q2[i].clone()]);
    debug_assert!(q.compose_linear(&t) == std.scale(&lambda));
    let param = param_from_rows(f, &t);
    Ok(ConicFrame { t, lambda, param })
}
