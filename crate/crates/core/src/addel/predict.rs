use serde::{Deserialize, Serialize};

use crate::logderiv::{CurveClass, HilbertSeries};

/// Outcome predicted for the target of a deletion or an addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Predicted {
    Free { a: u32, b: u32 },
    PlusOneGenerated { a: u32, b: u32, level: u32 },
    Neither,
    /// Excluded by the count constraints for a free source: reaching it
    /// means an upstream computation is wrong.
    ImpossibleForFreeSource,
}

impl Predicted {
    fn free(a: u32, b: u32) -> Self {
        Predicted::Free { a: a.min(b), b: a.max(b) }
    }

    fn pog(a: u32, b: u32, level: u32) -> Self {
        Predicted::PlusOneGenerated { a: a.min(b), b: a.max(b), level }
    }

    pub fn agrees_with(&self, class: &CurveClass) -> bool {
        match (*self, *class) {
            (Predicted::Free { a, b }, CurveClass::Free { a: x, b: y }) => (a, b) == (x, y),
            (Predicted::PlusOneGenerated { a, b, level }, CurveClass::PlusOneGenerated { a: x, b: y, level: l }) => {
                (a, b, level) == (x, y, l)
            }
            (Predicted::Neither, CurveClass::Neither { .. }) => true,
            _ => false,
        }
    }
}

impl std::fmt::Display for Predicted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Predicted::Free { a, b } => write!(f, "free with exponents ({a}, {b})"),
            Predicted::PlusOneGenerated { a, b, level } => {
                write!(f, "plus-one generated with exponents ({a}, {b}) and level {level}")
            }
            Predicted::Neither => write!(f, "neither free nor plus-one generated"),
            Predicted::ImpossibleForFreeSource => write!(f, "impossible for a free source"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub outcome: Predicted,
    /// Which case fired, e.g. `deletion/even/plus-one`.
    pub case: String,
    pub k: u32,
    pub m: u32,
    /// Closed-form Hilbert series of the target's `D_0`, when all its
    /// exponents are nonnegative.
    pub series: Option<HilbertSeries>,
}

fn split(k: u32) -> (bool, u32) {
    (k % 2 == 0, k / 2)
}

fn series(terms: &[(i64, i64)]) -> Option<HilbertSeries> {
    let terms: Option<Vec<(u32, i64)>> = terms.iter().map(|&(e, c)| Some((u32::try_from(e).ok()?, c))).collect();
    Some(HilbertSeries::from_terms(terms?))
}

/// Series of `D_0(C')` after deleting a conic with `k` effective
/// intersection points from a free curve of degree `d` with exponents
/// `(a, b)`.
pub fn hs_deleted(a: u32, b: u32, d: u32, k: u32) -> Option<HilbertSeries> {
    let (even, m) = split(k);
    let (a, b, d, m) = (a as i64, b as i64, d as i64, m as i64);
    if even {
        series(&[(a, 1), (b, 1), (d - 3 - m, 1), (d - 1 - m, -1)])
    } else {
        series(&[(a, 1), (b, 1), (d - 3 - m, 2), (d - 2 - m, -2)])
    }
}

/// Series of `D_0(C)` after adding a conic with `k` effective intersection
/// points to a free curve with exponents `(a', b')`.
pub fn hs_added(a: u32, b: u32, k: u32) -> Option<HilbertSeries> {
    let (even, m) = split(k);
    let (a, b, m) = (a as i64, b as i64, m as i64);
    if even {
        series(&[(a + 2, 1), (b + 2, 1), (m, 1), (m + 2, -1)])
    } else {
        series(&[(a + 2, 1), (b + 2, 1), (m + 1, 2), (m + 2, -2)])
    }
}

/// Class of `C' = C \ C_0` for a free `C` with exponents `a <= b`.
pub fn predict_deletion(a: u32, b: u32, k: u32) -> Prediction {
    let (a, b) = (a.min(b), a.max(b));
    let (even, m) = split(k);
    let (outcome, case) = if even {
        if m == a {
            (Predicted::free(a, b.saturating_sub(2)), "deletion/even/free")
        } else if m == b && a >= 2 {
            (Predicted::free(a - 2, b), "deletion/even/free")
        } else if m + 1 == a {
            (Predicted::pog(a, b - 1, b), "deletion/even/plus-one")
        } else if m + 2 <= a {
            (Predicted::Neither, "deletion/even/neither")
        } else {
            (Predicted::ImpossibleForFreeSource, "deletion/even/excluded")
        }
    } else if a == m + 1 && b == m + 1 {
        (Predicted::free(m, m), "deletion/odd/free")
    } else if m + 1 == a {
        (Predicted::pog(a, b - 1, b - 1), "deletion/odd/plus-one")
    } else if m + 2 <= a {
        (Predicted::Neither, "deletion/odd/neither")
    } else {
        (Predicted::ImpossibleForFreeSource, "deletion/odd/excluded")
    };
    Prediction { outcome, case: case.into(), k, m, series: hs_deleted(a, b, a + b + 1, k) }
}

/// Class of `C = C' ∪ C_0` for a free `C'` with exponents `a' <= b'`.
pub fn predict_addition(a: u32, b: u32, k: u32) -> Prediction {
    let (a, b) = (a.min(b), a.max(b));
    let (even, m) = split(k);
    let (outcome, case) = if even {
        if m == a {
            (Predicted::free(a, b + 2), "addition/even/free")
        } else if m == b {
            (Predicted::free(a + 2, b), "addition/even/free")
        } else if m == b + 1 {
            (Predicted::pog(a + 2, b + 1, b + 2), "addition/even/plus-one")
        } else if m >= b + 2 {
            (Predicted::Neither, "addition/even/neither")
        } else {
            (Predicted::ImpossibleForFreeSource, "addition/even/excluded")
        }
    } else if a == m && b == m {
        (Predicted::free(m + 1, m + 1), "addition/odd/free")
    } else if m == b {
        (Predicted::pog(a + 2, b + 1, b + 1), "addition/odd/plus-one")
    } else if m > b {
        (Predicted::Neither, "addition/odd/neither")
    } else {
        (Predicted::ImpossibleForFreeSource, "addition/odd/excluded")
    };
    Prediction { outcome, case: case.into(), k, m, series: hs_added(a, b, k) }
}

/// Whether the conic is a component of the free curve or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Incidence {
    Component,
    NonComponent,
}

/// The values of `m` (with `k = 2m` or `2m + 1`) allowed for a smooth conic
/// against a free curve with exponents `(a, b)`. `k` counts the
/// intersection points with the rest of the curve (component) or with the
/// curve (non-component), plus the defect.
pub fn check_conic_count_constraints(a: u32, b: u32, k: u32, incidence: Incidence) -> bool {
    let (a, b) = (a.min(b), a.max(b));
    let (even, m) = split(k);
    match (incidence, even) {
        (Incidence::Component, true) => m == b || m <= a,
        (Incidence::Component, false) => m + 1 <= a,
        (Incidence::NonComponent, true) => m == a || m >= b,
        (Incidence::NonComponent, false) => (m == a && m == b) || m >= b,
    }
}

/// The line restriction constraints in terms of `n = |C' ∩ L|` (component)
/// or `|C ∩ L|` (non-component) and the defect `eps`. `None` when no
/// statement applies to the class.
pub fn check_line_count_constraints(class: &CurveClass, n: usize, eps: i64, incidence: Incidence) -> Option<bool> {
    let n = n as i64;
    match (*class, incidence) {
        (CurveClass::Free { a, b }, Incidence::Component) => Some(n == b as i64 + 1 - eps || n <= a as i64 + 1 - eps),
        (CurveClass::Free { a, b }, Incidence::NonComponent) => Some(n == a as i64 + 1 - eps || n >= b as i64 + 1 - eps),
        (CurveClass::PlusOneGenerated { a, b, level }, Incidence::Component) => {
            let s = n + eps;
            Some(s <= a as i64 + 1 || [b, b + 1, level + 1].iter().any(|&v| s == v as i64))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deletion(a: u32, b: u32, k: u32) -> Predicted {
        predict_deletion(a, b, k).outcome
    }

    fn addition(a: u32, b: u32, k: u32) -> Predicted {
        predict_addition(a, b, k).outcome
    }

    #[test]
    fn deletion_cases() {
        assert_eq!(deletion(2, 5, 4), Predicted::Free { a: 2, b: 3 });
        assert_eq!(deletion(3, 5, 5), Predicted::PlusOneGenerated { a: 3, b: 4, level: 4 });
        assert_eq!(deletion(6, 7, 8), Predicted::Neither);
        assert_eq!(deletion(6, 7, 14), Predicted::Free { a: 4, b: 7 });
        assert_eq!(deletion(6, 7, 11), Predicted::PlusOneGenerated { a: 6, b: 6, level: 6 });
        assert_eq!(deletion(4, 4, 7), Predicted::Free { a: 3, b: 3 });
        assert_eq!(deletion(3, 6, 4), Predicted::PlusOneGenerated { a: 3, b: 5, level: 6 });
        assert_eq!(deletion(2, 5, 8), Predicted::ImpossibleForFreeSource);
        assert_eq!(deletion(2, 5, 7), Predicted::ImpossibleForFreeSource);
        assert_eq!(predict_deletion(3, 5, 5).case, "deletion/odd/plus-one");
    }

    #[test]
    fn addition_cases() {
        assert_eq!(addition(2, 5, 4), Predicted::Free { a: 2, b: 7 });
        assert_eq!(addition(2, 5, 12), Predicted::PlusOneGenerated { a: 4, b: 6, level: 7 });
        assert_eq!(addition(2, 5, 16), Predicted::Neither);
        assert_eq!(addition(3, 3, 7), Predicted::Free { a: 4, b: 4 });
        assert_eq!(addition(2, 5, 10), Predicted::Free { a: 4, b: 5 });
        assert_eq!(addition(2, 5, 11), Predicted::PlusOneGenerated { a: 4, b: 6, level: 6 });
        assert_eq!(addition(2, 5, 13), Predicted::Neither);
        assert_eq!(addition(2, 5, 6), Predicted::ImpossibleForFreeSource);
        assert_eq!(predict_addition(2, 5, 16).case, "addition/even/neither");
    }

    #[test]
    fn closed_form_series() {
        assert_eq!(hs_deleted(2, 5, 8, 4).unwrap().to_string(), "(t^2 + t^3)/(1-t)^3");
        assert_eq!(hs_deleted(3, 5, 9, 5).unwrap().to_string(), "(t^3 + 2*t^4 - t^5)/(1-t)^3");
        assert_eq!(hs_deleted(4, 4, 9, 7).unwrap().to_string(), "(2*t^3)/(1-t)^3");
        assert_eq!(hs_added(2, 5, 4).unwrap().to_string(), "(t^2 + t^7)/(1-t)^3");
        assert_eq!(hs_added(2, 5, 12).unwrap().to_string(), "(t^4 + t^6 + t^7 - t^8)/(1-t)^3");
        assert_eq!(hs_added(3, 3, 7).unwrap().to_string(), "(2*t^4)/(1-t)^3");
    }

    #[test]
    fn conic_constraints() {
        assert!(!check_conic_count_constraints(2, 5, 8, Incidence::Component));
        assert!(check_conic_count_constraints(2, 5, 10, Incidence::Component));
        assert!(check_conic_count_constraints(6, 7, 11, Incidence::Component));
        assert!(check_conic_count_constraints(2, 5, 16, Incidence::NonComponent));
        assert!(!check_conic_count_constraints(2, 5, 6, Incidence::NonComponent));
        assert!(check_conic_count_constraints(3, 3, 7, Incidence::NonComponent));
    }

    #[test]
    fn line_constraints() {
        let free = CurveClass::Free { a: 1, b: 1 };
        assert_eq!(check_line_count_constraints(&free, 2, 0, Incidence::Component), Some(true));
        let free = CurveClass::Free { a: 2, b: 5 };
        assert_eq!(check_line_count_constraints(&free, 5, 0, Incidence::NonComponent), Some(false));
        assert_eq!(check_line_count_constraints(&free, 6, 0, Incidence::NonComponent), Some(true));
        let pog = CurveClass::PlusOneGenerated { a: 2, b: 3, level: 5 };
        assert_eq!(check_line_count_constraints(&pog, 6, 0, Incidence::Component), Some(true));
        assert_eq!(check_line_count_constraints(&pog, 5, 0, Incidence::Component), Some(false));
        assert_eq!(check_line_count_constraints(&pog, 5, 0, Incidence::NonComponent), None);
    }

    #[test]
    fn series_match_predicted_classes() {
        // a free or plus-one generated prediction has the series of its
        // resolution
        for (a, b) in [(2, 5), (3, 5), (6, 7), (4, 4), (1, 3)] {
            for k in 1..=2 * (a + b + 2) {
                let p = predict_deletion(a, b, k);
                let Some(s) = p.series else { continue };
                let expected = match p.outcome {
                    Predicted::Free { a, b } => HilbertSeries::from_terms([(a, 1), (b, 1)]),
                    Predicted::PlusOneGenerated { a, b, level } => {
                        HilbertSeries::from_terms([(a, 1), (b, 1), (level, 1), (level + 1, -1)])
                    }
                    _ => continue,
                };
                assert_eq!(s, expected, "deletion ({a}, {b}) k = {k}");
            }
        }
    }
}
