//! Reduced plane curves as ordered lists of components, smooth conics and
//! their parametrizations, intersection counts and intersection points.

mod conic;
mod file;
mod points;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use conic::{conic_hessian, find_conic_point, is_smooth_conic, normalize_conic, normalize_conic_at, ConicFrame};
pub use file::{parse_curve_file, CurveSpec};
pub use points::{
    component_parametrization, conic_intersection_count, conic_point_over_quadratic, eval_at, line_intersection_count,
    pairwise_intersection_points, points_on_host, BaseField, IntersectionPoint, ProjPoint, Root,
};
pub(crate) use points::point_from_root;

use crate::linalg;
use crate::poly::{HomogeneousPoly, PolyError};
use crate::scalar::Field;

/// Default height bound for the rational point search on conics.
pub const DEFAULT_HEIGHT_BOUND: u64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("components {0} and {1} are scalar multiples of each other")]
    DuplicateComponent(usize, usize),
    #[error("component {0} is declared a smooth conic but its matrix is singular")]
    SingularConicDeclaredSmooth(usize),
    #[error("component {0} is not reduced (square of a linear form)")]
    NonReduced(usize),
    #[error("component {index} is declared a {kind} but has degree {degree}")]
    KindMismatch { index: usize, kind: ComponentKind, degree: u32 },
    #[error("component {0} is a constant")]
    ConstantComponent(usize),
    #[error("the curve has no components")]
    EmptyCurve,
    #[error("no rational point of height <= {0} on the conic")]
    NoRationalPointFound(u64),
    #[error("the conic is a component of the curve")]
    ComponentEqualsConic,
    #[error("the line is a component of the curve")]
    ComponentEqualsLine,
    #[error("component {0} is neither a line nor a smooth conic")]
    NonSmoothComponent(usize),
    #[error("intersection points of degree {0} over Q are not supported; rerun with --modular")]
    UnsupportedPointField(usize),
    #[error("a coefficient has no image in {0}")]
    BadReduction(String),
    #[error("line {line}: {msg}")]
    File { line: usize, msg: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Line,
    Conic,
    General,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComponentKind::Line => "line",
            ComponentKind::Conic => "conic",
            ComponentKind::General => "component",
        })
    }
}

pub struct Component<F: Field> {
    pub poly: HomogeneousPoly<F>,
    pub kind: ComponentKind,
}

impl<F: Field> Clone for Component<F> {
    fn clone(&self) -> Self {
        Self { poly: self.poly.clone(), kind: self.kind }
    }
}

impl<F: Field> fmt::Debug for Component<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.poly)
    }
}

impl<F: Field> Component<F> {
    /// Kind inferred from the polynomial: degree 1 is a line, a smooth
    /// quadric is a conic, anything else is general.
    pub fn infer(poly: HomogeneousPoly<F>) -> Self {
        let kind = match poly.degree() {
            1 => ComponentKind::Line,
            2 if is_smooth_conic(&poly).unwrap_or(false) => ComponentKind::Conic,
            _ => ComponentKind::General,
        };
        Self { poly, kind }
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self.kind, ComponentKind::Line | ComponentKind::Conic)
    }
}

/// A reduced curve: pairwise non-associate components and their product.
pub struct ReducedCurve<F: Field> {
    components: Vec<Component<F>>,
    product: HomogeneousPoly<F>,
}

impl<F: Field> Clone for ReducedCurve<F> {
    fn clone(&self) -> Self {
        Self { components: self.components.clone(), product: self.product.clone() }
    }
}

impl<F: Field> fmt::Debug for ReducedCurve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}

impl<F: Field> ReducedCurve<F> {
    pub fn new(components: Vec<Component<F>>) -> Result<Self, CurveError> {
        let first = components.first().ok_or(CurveError::EmptyCurve)?;
        let field = first.poly.field().clone();
        validate_reduced(&components)?;
        let one = HomogeneousPoly::constant(field.clone(), field.one());
        let product = components.iter().fold(one, |acc, c| acc.mul(&c.poly));
        Ok(Self { components, product })
    }

    pub fn from_polys(polys: Vec<HomogeneousPoly<F>>) -> Result<Self, CurveError> {
        Self::new(polys.into_iter().map(Component::infer).collect())
    }

    pub fn components(&self) -> &[Component<F>] {
        &self.components
    }

    pub fn field(&self) -> &F {
        self.product.field()
    }

    /// `f_C`, the product of the components.
    pub fn poly(&self) -> &HomogeneousPoly<F> {
        &self.product
    }

    pub fn degree(&self) -> u32 {
        self.product.degree()
    }

    /// Index of the component associate to `g`.
    pub fn find_component(&self, g: &HomogeneousPoly<F>) -> Option<usize> {
        self.components.iter().position(|c| c.poly.is_associate(g))
    }

    /// The curve with component `index` removed.
    pub fn without(&self, index: usize) -> Result<Self, CurveError> {
        let mut comps = self.components.clone();
        comps.remove(index);
        Self::new(comps)
    }

    /// The curve with `c` appended.
    pub fn with(&self, c: Component<F>) -> Result<Self, CurveError> {
        let mut comps = self.components.clone();
        comps.push(c);
        Self::new(comps)
    }

    /// Product of all components except `index`.
    pub fn product_without(&self, index: usize) -> HomogeneousPoly<F> {
        let field = self.field().clone();
        let one = HomogeneousPoly::constant(field.clone(), field.one());
        self.components
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .fold(one, |acc, (_, c)| acc.mul(&c.poly))
    }
}

/// Rank of the symmetric matrix of a quadratic form.
fn quadric_rank<F: Field>(q: &HomogeneousPoly<F>) -> usize {
    let h = conic_hessian(q);
    linalg::rank(q.field(), 3, h.iter().map(|r| r.to_vec()))
}

/// Checks declared kinds, degree-2 reducedness and pairwise non-associate
/// components.
pub fn validate_reduced<F: Field>(components: &[Component<F>]) -> Result<(), CurveError> {
    for (i, c) in components.iter().enumerate() {
        let degree = c.poly.degree();
        if degree == 0 || c.poly.is_zero() {
            return Err(CurveError::ConstantComponent(i));
        }
        match c.kind {
            ComponentKind::Line if degree != 1 => {
                return Err(CurveError::KindMismatch { index: i, kind: c.kind, degree })
            }
            ComponentKind::Conic if degree != 2 => {
                return Err(CurveError::KindMismatch { index: i, kind: c.kind, degree })
            }
            ComponentKind::Conic if quadric_rank(&c.poly) < 3 => {
                return Err(CurveError::SingularConicDeclaredSmooth(i))
            }
            _ => {}
        }
        if degree == 2 && quadric_rank(&c.poly) == 1 {
            return Err(CurveError::NonReduced(i));
        }
    }
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            if components[i].poly.is_associate(&components[j].poly) {
                return Err(CurveError::DuplicateComponent(i, j));
            }
        }
    }
    Ok(())
}
