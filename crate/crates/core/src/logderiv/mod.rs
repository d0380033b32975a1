//! The module `D_0(C)` of derivations killing `f_C`: graded dimensions,
//! minimal generator and relation degrees, and the free / plus-one
//! generated / neither classification.
//!
//! Dimensions are obtained one degree at a time from the linear map
//! `(a, b, c) -> a f_x + b f_y + c f_z`. New minimal generators in degree
//! `e` are the kernel dimension minus the dimension of the span of monomial
//! multiples of the earlier generators. Since `D_0` is reflexive of rank 2
//! its syzygy module is free, so relation degrees follow from the syzygy
//! dimensions among those multiples.

mod certified;
mod engine;
mod modp;
mod system;
mod vote;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::curve::ReducedCurve;
use crate::linalg;
use crate::poly::{basis, dim_s, HomogeneousPoly, Monomial, Var};
use crate::scalar::{Backend, Field, FieldElement, PrimeField, Rationals};
use engine::{Engine, Witness};

pub use vote::{vote_over_primes, Vote};

/// Working prime of the certified rational engine.
pub const SHADOW_PRIME: u64 = 2_147_483_647;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogDerivError {
    #[error("degree cap {cap} reached before the classification was settled (generators so far: {generators:?})")]
    CapTooSmall { cap: u32, generators: Vec<u32> },
    #[error("inconsistent resolution: {0}")]
    InconsistentResolution(String),
    #[error("a resolution needs at least one generator")]
    EmptyModule,
    #[error("no classification engine over {0}")]
    UnsupportedField(String),
    #[error("exact lifting did not stabilize after {0} primes")]
    LiftFailed(usize),
}

/// `dim D_0(C)_e` for `e = 0..=bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub dims: Vec<usize>,
}

impl GradedDims {
    /// Largest computed degree.
    pub fn bound(&self) -> u32 {
        self.dims.len().saturating_sub(1) as u32
    }

    pub fn get(&self, e: u32) -> Option<usize> {
        self.dims.get(e as usize).copied()
    }
}

/// Degrees of minimal generators and of minimal relations, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionData {
    pub generators: Vec<u32>,
    pub relations: Vec<u32>,
}

impl ResolutionData {
    pub fn rank_defect(&self) -> i64 {
        self.generators.len() as i64 - self.relations.len() as i64
    }

    /// `sum d_i - sum e_j`.
    pub fn degree_balance(&self) -> i64 {
        self.generators.iter().map(|&d| d as i64).sum::<i64>() - self.relations.iter().map(|&e| e as i64).sum::<i64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CurveClass {
    Free { a: u32, b: u32 },
    PlusOneGenerated { a: u32, b: u32, level: u32 },
    Neither { d1: u32, d2: u32 },
}

impl CurveClass {
    pub fn is_free(&self) -> bool {
        matches!(self, CurveClass::Free { .. })
    }

    /// The two smallest generator degrees.
    pub fn exponents(&self) -> (u32, u32) {
        match *self {
            CurveClass::Free { a, b } | CurveClass::PlusOneGenerated { a, b, .. } => (a, b),
            CurveClass::Neither { d1, d2 } => (d1, d2),
        }
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveClass::Free { a, b } => write!(f, "free with exponents ({a}, {b})"),
            CurveClass::PlusOneGenerated { a, b, level } => {
                write!(f, "plus-one generated with exponents ({a}, {b}) and level {level}")
            }
            CurveClass::Neither { d1, d2 } => write!(f, "neither free nor plus-one generated (d1, d2) = ({d1}, {d2})"),
        }
    }
}

/// `numerator(t) / (1 - t)^3` with integer numerator coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    pub numerator: BTreeMap<u32, i64>,
}

impl HilbertSeries {
    /// Sum of `sign * t^k` terms with cancellations performed.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut numerator = BTreeMap::new();
        for (k, c) in terms {
            *numerator.entry(k).or_insert(0) += c;
        }
        numerator.retain(|_, c| *c != 0);
        Self { numerator }
    }

    /// Coefficient of `t^e` in the expansion.
    pub fn coefficient(&self, e: u32) -> i64 {
        self.numerator.iter().map(|(&k, &c)| c * dim_s(e as i64 - k as i64) as i64).sum()
    }

    pub fn expand(&self, bound: u32) -> Vec<i64> {
        (0..=bound).map(|e| self.coefficient(e)).collect()
    }

    /// First degree in `0..=dims.bound()` where the expansion disagrees.
    pub fn first_mismatch(&self, dims: &GradedDims) -> Option<u32> {
        (0..=dims.bound()).find(|&e| self.coefficient(e) != dims.dims[e as usize] as i64)
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        f.write_str("(")?;
        for (&k, &c) in &self.numerator {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let mono = match k {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if a == 1 {
                f.write_str(&mono)?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        f.write_str(")/(1-t)^3")
    }
}

pub fn hilbert_series_from_resolution(res: &ResolutionData) -> Result<HilbertSeries, LogDerivError> {
    if res.generators.is_empty() {
        return Err(LogDerivError::EmptyModule);
    }
    Ok(HilbertSeries::from_terms(
        res.generators.iter().map(|&d| (d, 1)).chain(res.relations.iter().map(|&e| (e, -1))),
    ))
}

/// A derivation `a ∂x + b ∂y + c ∂z` with homogeneous coefficients of
/// degree `degree`.
#[derive(Clone)]
pub struct Derivation<F: Field> {
    pub degree: u32,
    pub components: [HomogeneousPoly<F>; 3],
}

impl<F: Field> fmt::Debug for Derivation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for Derivation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.components;
        write!(f, "({a}, {b}, {c})")
    }
}

impl<F: Field> Derivation<F> {
    /// `a f_x + b f_y + c f_z`.
    pub fn apply(&self, f: &HomogeneousPoly<F>) -> HomogeneousPoly<F> {
        let mut acc = HomogeneousPoly::zero(f.field().clone(), self.degree + f.degree().saturating_sub(1));
        for (k, v) in Var::ALL.into_iter().enumerate() {
            let term = self.components[k].mul(&f.partial(v));
            if !term.is_zero() {
                acc = acc.add(&term).expect("same degree");
            }
        }
        acc
    }

    fn from_terms<C>(field: &F, degree: u32, triple: &[Vec<(Monomial, C)>; 3], conv: impl Fn(&C) -> F::Elem) -> Self {
        let components = std::array::from_fn(|k| {
            HomogeneousPoly::from_terms(field.clone(), degree, triple[k].iter().map(|(m, c)| (*m, conv(c))))
                .expect("homogeneous")
        });
        Self { degree, components }
    }
}

fn make_engine<F: Field>(f: &HomogeneousPoly<F>) -> Result<Engine, LogDerivError> {
    let field = f.field();
    match field.backend() {
        Backend::Rational => {
            let q = f.map_field(&Rationals, |c| Rationals.from_element(&field.to_element(c))).expect("rational backend");
            Ok(Engine::rational(&q, SHADOW_PRIME))
        }
        Backend::Prime { p } => {
            let fp = PrimeField::new(p);
            let g = f.map_field(&fp, |c| fp.from_element(&field.to_element(c))).expect("prime backend");
            Ok(Engine::modular(&g))
        }
        other => Err(LogDerivError::UnsupportedField(other.to_string())),
    }
}

fn witness_derivation<F: Field>(field: &F, w: &Witness) -> Derivation<F> {
    match &w.exact {
        Some(exact) => Derivation::from_terms(field, w.degree, exact, |c| {
            field.from_rational(&BigRational::from_integer(c.clone())).expect("integer coefficient")
        }),
        None => {
            let p = field.characteristic();
            Derivation::from_terms(field, w.degree, &w.modp, |c| {
                field.from_element(&FieldElement::Prime { value: *c, p }).expect("prime field element")
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Largest degree scanned; defaults to `2d`.
    pub cap: Option<u32>,
    /// Keep scanning up to the cap after the class is settled, so that the
    /// whole resolution and the Hilbert identity are checked on `0..=cap`.
    pub full_range: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { cap: None, full_range: true }
    }
}

pub struct Classification<F: Field> {
    pub class: CurveClass,
    pub resolution: ResolutionData,
    pub dims: GradedDims,
    pub witnesses: Vec<Derivation<F>>,
    /// Degree at which the stopping rule fired.
    pub settled_at: u32,
    /// True when the resolution is known to be complete: the scan reached
    /// the cap, or the class is free or plus-one generated.
    pub complete: bool,
}

impl<F: Field> fmt::Debug for Classification<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Classification")
            .field("class", &self.class)
            .field("resolution", &self.resolution)
            .field("dims", &self.dims.dims)
            .finish_non_exhaustive()
    }
}

fn inconsistent(msg: String) -> LogDerivError {
    LogDerivError::InconsistentResolution(msg)
}

/// The stopping rule: decides the class once the degrees seen so far
/// determine it.
fn settle(d: u32, gens: &[u32], rels: &[u32], e: u32) -> Result<Option<CurveClass>, LogDerivError> {
    if gens.len() < 2 {
        return Ok(None);
    }
    let (a, b) = (gens[0], gens[1]);
    let sum = a + b;
    if sum + 1 < d {
        return Err(inconsistent(format!("d1 + d2 = {sum} < d - 1 = {}", d - 1)));
    }
    if sum + 1 == d {
        if gens.len() > 2 || !rels.is_empty() {
            return Err(inconsistent(format!("free exponents ({a}, {b}) but generators {gens:?}")));
        }
        return Ok(Some(CurveClass::Free { a, b }));
    }
    if sum == d {
        let Some(&level) = gens.get(2) else {
            return Ok(None);
        };
        if e <= level {
            return Ok(None);
        }
        if gens.len() != 3 || rels != [level + 1] {
            return Err(inconsistent(format!(
                "d1 + d2 = d but generators {gens:?} and relations {rels:?} do not have the plus-one shape"
            )));
        }
        return Ok(Some(CurveClass::PlusOneGenerated { a, b, level }));
    }
    Ok(Some(CurveClass::Neither { d1: a, d2: b }))
}

/// Classifies `C` by scanning degrees `0..=cap`.
pub fn classify<F: Field>(curve: &ReducedCurve<F>, opts: ClassifyOptions) -> Result<Classification<F>, LogDerivError> {
    classify_poly(curve.poly(), opts)
}

pub fn classify_poly<F: Field>(f: &HomogeneousPoly<F>, opts: ClassifyOptions) -> Result<Classification<F>, LogDerivError> {
    let d = f.degree();
    let cap = opts.cap.unwrap_or(2 * d);
    let mut engine = make_engine(f)?;
    let mut dims = Vec::new();
    let mut gens: Vec<u32> = Vec::new();
    let mut rels: Vec<u32> = Vec::new();
    let mut settled: Option<(u32, CurveClass)> = None;
    for e in 0..=cap {
        let step = engine.step(e)?;
        dims.push(step.dim);
        let syz = (step.multiples - step.span) as i64;
        let old: i64 = rels.iter().map(|&r| dim_s(e as i64 - r as i64) as i64).sum();
        let new_rels = syz - old;
        if new_rels < 0 {
            return Err(inconsistent(format!("degree {e}: syzygies of dimension {syz} below the {old} forced by relations")));
        }
        gens.extend(std::iter::repeat(e).take(step.new));
        rels.extend(std::iter::repeat(e).take(new_rels as usize));
        match settled {
            None => settled = settle(d, &gens, &rels, e)?.map(|c| (e, c)),
            Some((_, class)) => {
                let extra = match class {
                    CurveClass::Free { .. } => gens.len() > 2 || !rels.is_empty(),
                    CurveClass::PlusOneGenerated { .. } => gens.len() > 3 || rels.len() > 1,
                    CurveClass::Neither { .. } => false,
                };
                if extra {
                    return Err(inconsistent(format!(
                        "{class} settled, but degree {e} brings generators {gens:?} and relations {rels:?}"
                    )));
                }
            }
        }
        if settled.is_some() && !opts.full_range {
            break;
        }
    }
    let Some((settled_at, class)) = settled else {
        return Err(LogDerivError::CapTooSmall { cap, generators: gens });
    };
    let dims = GradedDims { dims };
    let resolution = ResolutionData { generators: gens, relations: rels };
    let scanned_all = dims.bound() == cap;
    let complete = scanned_all || !matches!(class, CurveClass::Neither { .. });
    if complete {
        let r = resolution.generators.len() as i64;
        let balance = resolution.degree_balance();
        if resolution.relations.len() as i64 != r - 2 || balance != d as i64 - 1 {
            let msg = format!(
                "generators {:?}, relations {:?}: expected r - 2 relations and degree balance {}",
                resolution.generators,
                resolution.relations,
                d as i64 - 1
            );
            return Err(if cap < 2 * d { LogDerivError::CapTooSmall { cap, generators: resolution.generators } } else { inconsistent(msg) });
        }
    }
    let series = hilbert_series_from_resolution(&resolution)?;
    if let Some(e) = series.first_mismatch(&dims) {
        return Err(inconsistent(format!("Hilbert identity fails in degree {e}")));
    }
    let field = f.field().clone();
    let witnesses: Vec<Derivation<F>> = engine.witnesses.iter().map(|w| witness_derivation(&field, w)).collect();
    for w in &witnesses {
        if !w.apply(f).is_zero() {
            return Err(inconsistent(format!("generator {w} does not annihilate f")));
        }
    }
    Ok(Classification { class, resolution, dims, witnesses, settled_at, complete })
}

/// `dim D_0(C)_e` by exact elimination over `F` on the monomial basis.
/// Independent of the classification engine; intended for small degrees.
pub fn d0_graded_dim<F: Field>(curve: &ReducedCurve<F>, e: u32) -> usize {
    d0_graded_dim_poly(curve.poly(), e)
}

pub fn d0_graded_dim_poly<F: Field>(f: &HomogeneousPoly<F>, e: u32) -> usize {
    let field = f.field();
    let width = dim_s(e as i64 + f.degree() as i64 - 1);
    let images: Vec<Vec<F::Elem>> = Var::ALL
        .iter()
        .flat_map(|&v| {
            let part = f.partial(v);
            basis(e).into_iter().map(move |m| {
                let mut img = vec![field.zero(); width];
                for (pm, c) in part.terms() {
                    img[m.mul(pm).dense_index()] = c.clone();
                }
                img
            })
        })
        .collect();
    linalg::kernel(field, width, &images).len()
}

/// Minimal generator degrees with witnesses (see [`classify`]).
pub fn minimal_generator_degrees<F: Field>(
    curve: &ReducedCurve<F>,
    cap: Option<u32>,
) -> Result<(Vec<u32>, Vec<Derivation<F>>), LogDerivError> {
    let c = classify(curve, ClassifyOptions { cap, full_range: true })?;
    Ok((c.resolution.generators, c.witnesses))
}

/// Minimal relation degrees (see [`classify`]).
pub fn minimal_relation_degrees<F: Field>(curve: &ReducedCurve<F>, cap: Option<u32>) -> Result<Vec<u32>, LogDerivError> {
    Ok(classify(curve, ClassifyOptions { cap, full_range: true })?.resolution.relations)
}

#[cfg(test)]
mod tests;
