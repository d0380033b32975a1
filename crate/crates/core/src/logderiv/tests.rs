use super::*;
use crate::poly::parse_poly;
use crate::testutil::{curve, OCTIC_2_5, CURVE_6_7};



#[test]
fn single_line() {
    let c = curve(&["x"]);
    assert_eq!(d0_graded_dim(&c, 0), 2);
    let cl = classify(&c, ClassifyOptions::default()).unwrap();
    assert_eq!(cl.resolution.generators, vec![0, 0]);
    assert_eq!(cl.class, CurveClass::Free { a: 0, b: 0 });
}

#[test]
fn smooth_conic() {
    let c = curve(&["y^2 - x*z"]);
    assert_eq!(d0_graded_dim(&c, 0), 0);
    assert_eq!(d0_graded_dim(&c, 1), 3);
    let cl = classify(&c, ClassifyOptions::default()).unwrap();
    assert_eq!(cl.resolution.generators, vec![1, 1, 1]);
    assert_eq!(cl.resolution.relations, vec![2]);
    assert_eq!(cl.class, CurveClass::PlusOneGenerated { a: 1, b: 1, level: 1 });
    assert_eq!(&cl.dims.dims[..4], &[0, 3, 8, 15]);
    assert_eq!(cl.settled_at, 2);
}

#[test]
fn triangle_is_free() {
    let cl = classify(&curve(&["x", "y", "z"]), ClassifyOptions::default()).unwrap();
    assert_eq!(cl.class, CurveClass::Free { a: 1, b: 1 });
    assert!(cl.resolution.relations.is_empty());
}

#[test]
fn first_example_base() {
    let c = curve(&OCTIC_2_5);
    assert_eq!(d0_graded_dim(&c, 1), 0);
    assert_eq!(d0_graded_dim(&c, 2), 1);
    let cl = classify(&c, ClassifyOptions::default()).unwrap();
    assert_eq!(cl.class, CurveClass::Free { a: 2, b: 5 });
    assert_eq!(cl.dims.bound(), 16);
    assert_eq!(cl.witnesses.len(), 2);
    for w in &cl.witnesses {
        assert!(w.apply(c.poly()).is_zero());
    }
    let series = hilbert_series_from_resolution(&cl.resolution).unwrap();
    assert_eq!(series.to_string(), "(t^2 + t^5)/(1-t)^3");
    assert_eq!(series.first_mismatch(&cl.dims), None);
}

#[test]
fn engine_dims_match_generic_elimination() {
    let c = curve(&["x - y", "x + y", "x^2 + y^2 - z^2", "y + z"]);
    let cl = classify(&c, ClassifyOptions::default()).unwrap();
    for e in 0..=6 {
        assert_eq!(cl.dims.get(e), Some(d0_graded_dim(&c, e)), "degree {e}");
    }
}

#[test]
fn modular_matches_rational() {
    let p = PrimeField::new(2_147_483_629);
    let polys: Vec<_> = OCTIC_2_5.iter().map(|s| parse_poly(&p, s).unwrap()).collect();
    let cm = ReducedCurve::from_polys(polys).unwrap();
    let m = classify(&cm, ClassifyOptions::default()).unwrap();
    let r = classify(&curve(&OCTIC_2_5), ClassifyOptions::default()).unwrap();
    assert_eq!(m.class, r.class);
    assert_eq!(m.dims, r.dims);
    assert_eq!(m.resolution, r.resolution);
}

#[test]
fn early_stop_and_small_cap() {
    let c = curve(&OCTIC_2_5);
    let cl = classify(&c, ClassifyOptions { cap: None, full_range: false }).unwrap();
    assert_eq!(cl.settled_at, 5);
    assert_eq!(cl.dims.bound(), 5);
    assert!(matches!(
        classify(&c, ClassifyOptions { cap: Some(3), full_range: true }),
        Err(LogDerivError::CapTooSmall { cap: 3, .. })
    ));
}

#[test]
fn series_from_resolution() {
    let pog = ResolutionData { generators: vec![1, 1, 1], relations: vec![2] };
    let s = hilbert_series_from_resolution(&pog).unwrap();
    assert_eq!(s.to_string(), "(3*t - t^2)/(1-t)^3");
    assert_eq!(s.expand(3), vec![0, 3, 8, 15]);
    let empty = ResolutionData { generators: vec![], relations: vec![] };
    assert_eq!(hilbert_series_from_resolution(&empty), Err(LogDerivError::EmptyModule));
}

#[test]
fn concurrent_lines() {
    // lines through [0:0:1] are killed by the z derivative
    let c = curve(&["x", "y", "x + y", "x - y", "x + 2*y"]);
    let cl = classify(&c, ClassifyOptions::default()).unwrap();
    assert_eq!(cl.class, CurveClass::Free { a: 0, b: 4 });
}

#[test]
fn degree_fourteen_free() {
    let c = curve(&CURVE_6_7);
    assert_eq!(c.degree(), 14);
    let t = std::time::Instant::now();
    let cl = classify(&c, ClassifyOptions::default()).unwrap();
    eprintln!("degree 14 classification: {:?}", t.elapsed());
    assert_eq!(cl.class, CurveClass::Free { a: 6, b: 7 });
    assert_eq!(cl.dims.bound(), 28);
}
