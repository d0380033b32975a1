use num_rational::BigRational;

use super::{is_smooth_conic, Component, ComponentKind, CurveError, ReducedCurve};
use crate::poly::{parse_rational_poly, RationalPoly};
use crate::scalar::{parse_rational, Field};

/// Contents of a curve file: one `line:`, `conic:` or `component:` entry per
/// component and optional `point: [a:b:c]` entries. `#` starts a comment.
#[derive(Debug, Clone, Default)]
pub struct CurveSpec {
    pub components: Vec<(RationalPoly, ComponentKind)>,
    pub points: Vec<[BigRational; 3]>,
}

fn parse_point(src: &str) -> Option<[BigRational; 3]> {
    let inner = src.trim().strip_prefix('[')?.strip_suffix(']')?;
    let parts: Vec<&str> = inner.split(':').collect();
    if parts.len() != 3 {
        return None;
    }
    let mut out = Vec::with_capacity(3);
    for p in parts {
        out.push(parse_rational(p).ok()?);
    }
    let [a, b, c] = <[BigRational; 3]>::try_from(out).ok()?;
    Some([a, b, c])
}

pub fn parse_curve_file(text: &str) -> Result<CurveSpec, CurveError> {
    let mut spec = CurveSpec::default();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| CurveError::File { line, msg };
        let (key, rest) = content.split_once(':').ok_or_else(|| err("expected `kind: polynomial`".into()))?;
        let kind = match key.trim() {
            "line" => ComponentKind::Line,
            "conic" => ComponentKind::Conic,
            "component" => ComponentKind::General,
            "point" => {
                let p = parse_point(rest).ok_or_else(|| err(format!("bad point `{}`", rest.trim())))?;
                if p.iter().all(|c| c == &BigRational::from_integer(0.into())) {
                    return Err(err("the zero vector is not a point".into()));
                }
                spec.points.push(p);
                continue;
            }
            other => return Err(err(format!("unknown entry `{other}`"))),
        };
        let poly = parse_rational_poly(rest).map_err(|e| err(e.to_string()))?;
        spec.components.push((poly, kind));
    }
    if spec.components.is_empty() {
        return Err(CurveError::EmptyCurve);
    }
    Ok(spec)
}

impl CurveSpec {
    /// The curve over `field`. Declared kinds are kept; a conic that becomes
    /// singular after reduction is reported as a bad reduction.
    pub fn to_curve<F: Field>(&self, field: &F) -> Result<ReducedCurve<F>, CurveError> {
        let mut comps = Vec::with_capacity(self.components.len());
        for (i, (poly, kind)) in self.components.iter().enumerate() {
            let p = poly
                .map_field(field, |c| field.from_rational(c))
                .ok_or_else(|| CurveError::BadReduction(field.backend().to_string()))?;
            if p.is_zero() || (*kind == ComponentKind::Conic && field.characteristic() != 0 && !is_smooth_conic(&p)?) {
                return Err(CurveError::BadReduction(format!("{} (component {i})", field.backend())));
            }
            comps.push(Component { poly: p, kind: *kind });
        }
        ReducedCurve::new(comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{PrimeField, Rationals};

    #[test]
    fn parses_entries_and_comments() {
        let text = "# a test curve\nline: x - y\nconic: x^2 + y^2 - z^2  # circle\n\ncomponent: 2*y^2 - z^2\npoint: [1:-2:1/3]\n";
        let spec = parse_curve_file(text).unwrap();
        assert_eq!(spec.components.len(), 3);
        assert_eq!(spec.components[1].1, ComponentKind::Conic);
        assert_eq!(spec.points[0][2], parse_rational("1/3").unwrap());
        let c = spec.to_curve(&Rationals).unwrap();
        assert_eq!(c.degree(), 5);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(parse_curve_file("line: x\nbogus: y\n"), Err(CurveError::File { line: 2, .. })));
        assert!(matches!(parse_curve_file("line: x +\n"), Err(CurveError::File { line: 1, .. })));
        assert!(matches!(parse_curve_file("point: [1:2]\nline: x"), Err(CurveError::File { line: 1, .. })));
        assert!(matches!(parse_curve_file("# nothing\n"), Err(CurveError::EmptyCurve)));
        assert!(matches!(
            parse_curve_file("line: x^2").unwrap().to_curve(&Rationals),
            Err(CurveError::KindMismatch { .. })
        ));
    }

    #[test]
    fn reduction_mod_p() {
        let spec = parse_curve_file("line: 1/7*x + y\nconic: x^2 + y^2 - z^2").unwrap();
        assert!(matches!(spec.to_curve(&PrimeField::new(7)), Err(CurveError::BadReduction(_))));
        let spec = parse_curve_file("conic: x^2 + y^2 + 5*z^2").unwrap();
        assert!(matches!(spec.to_curve(&PrimeField::new(5)), Err(CurveError::BadReduction(_))));
        assert!(spec.to_curve(&PrimeField::new(11)).is_ok());
    }
}
