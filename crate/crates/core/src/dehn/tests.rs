use super::*;
use crate::exactnum::NumberFieldSpec;
use proptest::prelude::*;

fn curve(terms: &[(i64, i64, i64)]) -> PlaneCurveSpec {
    let t = terms.iter().map(|&(c, a, b)| (BigInt::from(c), [a, b])).collect();
    PlaneCurveSpec::new("test", "unit test", false, t).unwrap()
}

fn fc(p: i64, q: i64) -> FillingCoefficient {
    FillingCoefficient::new(p, q).unwrap()
}

fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64s(c)
}

#[test]
fn specialize_examples() {
    // M L - 1 at (1, 0)
    assert_eq!(specialize(&curve(&[(1, 1, 1), (-1, 0, 0)]), fc(1, 0)).unwrap(), p(&[-1, 1]));
    // M + L - 2 at (1, 1)
    let f = curve(&[(1, 1, 0), (1, 0, 1), (-2, 0, 0)]);
    assert_eq!(specialize(&f, fc(1, 1)).unwrap(), p(&[1, -2, 1]));
    // L M^2 - 1 at (2, 3)
    let f = curve(&[(1, 2, 1), (-1, 0, 0)]);
    assert_eq!(specialize(&f, fc(2, 3)).unwrap(), p(&[-1, 0, 0, 0, 1]));
    // demo curve at (1, 2)
    let demo = PlaneCurveSpec::bundled("demo").unwrap();
    assert_eq!(specialize(&demo, fc(1, 2)).unwrap(), p(&[-1, 0, -1, 0, 1, 1]));
}

#[test]
fn specialize_errors() {
    let f = curve(&[(1, 1, 0), (-1, 0, 1)]);
    assert_eq!(specialize(&f, fc(-1, 1)), Err(DehnError::ZeroSpecialization(-1, 1)));
    assert_eq!(specialize(&f, FillingCoefficient { p: 2, q: 4 }), Err(DehnError::NotCoprime(2, 4)));
    let bad = PlaneCurveSpec::new("x", "", false, vec![(BigInt::from(1), [1, 0])]);
    assert!(matches!(bad, Err(DehnError::NotThroughOne(_))));
    let bad = PlaneCurveSpec::new(
        "x",
        "",
        false,
        vec![(BigInt::from(2), [1, 0]), (BigInt::from(-2), [0, 0])],
    );
    assert!(matches!(bad, Err(DehnError::Curve(_))));
}

#[test]
fn curve_json_round_trip() {
    for name in ["demo", "figure-eight"] {
        let c = PlaneCurveSpec::bundled(name).unwrap();
        assert_eq!(PlaneCurveSpec::from_json(&c.to_json()).unwrap(), c);
    }
    assert!(PlaneCurveSpec::bundled("figure-eight").unwrap().symmetric);
}

#[test]
fn filling_point_examples() {
    let f = curve(&[(1, 1, 0), (1, 0, 1), (-2, 0, 0)]);
    assert!(filling_points(&f, fc(1, 1)).unwrap().is_empty());
    let demo = PlaneCurveSpec::bundled("demo").unwrap();
    assert!(filling_points(&demo, fc(1, 0)).unwrap().is_empty());
    let g = specialize(&demo, fc(1, 2)).unwrap();
    let pts = filling_points(&demo, fc(1, 2)).unwrap();
    assert!(!pts.is_empty());
    for fp in &pts {
        assert!(g.div_exact(&fp.t.minpoly).is_some());
        assert!(fp.t.root_of_unity.is_none());
        let t = fp.t.approx();
        assert!((t.norm() - 1.0).abs() > 1e-6);
        assert!(g.eval_complex(t).norm() < 1e-6);
        let (m, l) = fp.point();
        assert!((m - t.powi(-2)).norm() < 1e-12 && (l - t).norm() < 1e-12);
    }
    // every off-circle root of g is reported
    let roots = find_roots(&g.squarefree_part(), 1e-12).unwrap();
    let off = roots.iter().filter(|b| (b.center_c64().norm() - 1.0).abs() > 1e-6).count();
    assert_eq!(pts.len(), off);
}

#[test]
fn reciprocal_factor_roots_on_circle() {
    // Lehmer's polynomial has two real roots and eight on the unit circle
    let f = p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
    let fz = factor_with(&f, &pipeline_options()).unwrap();
    let fac = &fz.factors[0];
    assert!(fac.irreducible);
    let pos: Vec<CirclePosition> = (0..10).map(|i| locate(fac, i).unwrap().0).collect();
    assert_eq!(pos.iter().filter(|&&x| x == CirclePosition::On).count(), 8);
    assert_eq!(pos.iter().filter(|&&x| x == CirclePosition::Inside).count(), 1);
    assert_eq!(pos.iter().filter(|&&x| x == CirclePosition::Outside).count(), 1);
}

#[test]
fn recover_t_examples() {
    let q = NumberFieldSpec::gaussian();
    let el = |a: i64, b: i64| {
        FieldElement::from_coords(&q, vec![Rational::from_integer(a.into()), Rational::from_integer(b.into())])
            .unwrap()
    };
    let t = el(1, 1);
    for (pp, qq) in [(1, 0), (0, 1), (5, 3), (-2, 7)] {
        let c = fc(pp, qq);
        let m = t.pow(-qq).unwrap();
        let l = t.pow(pp).unwrap();
        assert_eq!(recover_t(&m, &l, c).unwrap(), t);
        let (x, y) = c.bezout();
        assert_eq!(-qq * x + pp * y, 1);
    }
    assert_eq!(recover_t(&el(1, 0), &t, fc(1, 0)).unwrap(), t); // L itself
    assert_eq!(recover_t(&t, &el(1, 0), fc(0, 1)).unwrap(), t.inverse().unwrap());
    assert_eq!(recover_t(&el(2, 0), &el(3, 0), fc(1, 1)), Err(DehnError::NotOnLine));
}

use crate::exactnum::Rational;

#[test]
fn core_trace_examples() {
    let t = AlgebraicNumber::from_int(2);
    let fp = FillingPoint { t, coeff: fc(1, 0), class: 0, position: CirclePosition::Outside };
    let ct = core_trace(&fp).unwrap();
    assert_eq!(ct.s.minpoly, p(&[-9, 0, 2]));
    assert!((ct.height.lower - 3.0).abs() < 1e-9 && (ct.height.upper - 3.0).abs() < 1e-9);
    assert!(ct.height.upper <= 2.0 * 4.0);
    let on = FillingPoint { position: CirclePosition::On, ..fp };
    assert!(core_trace(&on).is_err());
}

#[test]
fn core_trace_identity_on_demo_points() {
    let demo = PlaneCurveSpec::bundled("demo").unwrap();
    for c in [fc(1, 2), fc(3, 1), fc(-2, 3)] {
        for fp in filling_points(&demo, c).unwrap().iter().filter(|fp| fp.t.irreducible) {
            let ct = core_trace(fp).unwrap();
            let w = &ct.transform.w.minpoly;
            assert_eq!(ct.s_poly, w.taylor_shift(&BigInt::from(-2)).inflate(2).squarefree_part());
            assert!(ct.s_poly.div_exact(&ct.s.minpoly).is_some());
            let s = ct.s.approx();
            let t = fp.t.approx();
            assert!((s * s - 2.0 - (t + 1.0 / t)).norm() < 1e-8);
            assert!((ct.neg_s.center_c64() + s).norm() < 1e-8);
            let ht = height_of(&fp.t, 1e-12).unwrap();
            assert!(ct.height.upper <= 2.0 * ht.upper * ht.upper);
        }
    }
}

#[test]
fn hodgson_and_sgi_bounds() {
    assert_eq!(hodgson_bound(&curve(&[(1, 1, 0), (1, 0, 1), (-2, 0, 0)])), BigInt::from(32));
    assert_eq!(hodgson_bound(&curve(&[(1, 1, 1), (-1, 0, 0)])), BigInt::from(8));
    let demo = PlaneCurveSpec::bundled("demo").unwrap();
    assert_eq!(hodgson_bound(&demo), BigInt::from(32));
    assert_eq!(sgi_bound(std::slice::from_ref(&demo)).unwrap(), hodgson_bound(&demo));
    let l = |x: i64| BigInt::from(x);
    assert_eq!(bound_from_lengths(&[l(3), l(4)]).unwrap(), l(32));
    assert_eq!(bound_from_lengths(&[l(4), l(3)]).unwrap(), l(32));
    let fig8 = PlaneCurveSpec::bundled("figure-eight").unwrap();
    let a = sgi_bound(&[demo.clone(), fig8.clone()]).unwrap();
    assert_eq!(a, sgi_bound(&[fig8, demo]).unwrap());
    assert_eq!(sgi_bound(&[]), Err(DehnError::Empty));
}

#[test]
fn chain_holds_on_small_demo_box() {
    let demo = PlaneCurveSpec::bundled("demo").unwrap();
    for c in survey::coefficients(6) {
        let r = verify_height_chain(&demo, c).unwrap();
        assert!(r.passed(), "{:?}: {:?}", c, r.failures);
    }
}

#[test]
fn chain_is_vacuous_without_points() {
    let f = curve(&[(1, 1, 0), (1, 0, 1), (-2, 0, 0)]);
    let r = verify_height_chain(&f, fc(1, 1)).unwrap();
    assert!(r.passed() && r.entries.is_empty() && r.points == 0);
}

#[test]
fn corrupted_mahler_interval_is_detected() {
    let demo = PlaneCurveSpec::bundled("demo").unwrap();
    let r = verify_height_chain(&demo, fc(3, 2)).unwrap();
    let mut e = r.entries[0].clone();
    assert!(check_entry(&e).is_empty());
    e.mahler_g.upper = 1.0;
    e.mahler_g.lower = 1.0;
    assert!(check_entry(&e).contains(&"H(t)^deg <= M(g)"));
    let mut e = r.entries[0].clone();
    e.heights.hs.upper = 1e9;
    assert!(check_entry(&e).contains(&"H(s) <= 2 L(f)^2"));
}

#[test]
fn symmetric_curve_pairs_t_with_inverse() {
    let fig8 = PlaneCurveSpec::bundled("figure-eight").unwrap();
    for c in [fc(5, 1), fc(-3, 2), fc(1, 3)] {
        let r = verify_height_chain(&fig8, c).unwrap();
        assert!(r.passed(), "{:?}: {:?}", c, r.failures);
        assert!(r.g.is_reciprocal());
    }
}

#[test]
fn survey_is_deterministic_and_bounded() {
    let demo = PlaneCurveSpec::bundled("demo").unwrap();
    let a = survey(&demo, 6, 4).unwrap();
    let b = survey(&demo, 6, 4).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.summary_json(), b.summary_json());
    assert!(a.summary.passed() && a.summary.errors.is_empty());
    assert!(a.rows.iter().all(|r| r.hodgson_ok));
    assert!(a.summary.max_hs_upper <= 32.0);
    let keys: Vec<(i64, i64, usize)> = a.rows.iter().map(|r| (r.p, r.q, r.root_index)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(keys, sorted);
    // one representative per ± pair
    assert!(a.rows.iter().all(|r| r.q > 0 || (r.q == 0 && r.p == 1)));
    assert!(a.to_csv().starts_with(survey::CSV_HEADER));
    assert!(matches!(survey(&demo, 0, 4), Err(DehnError::Bound(_))));
}

#[test]
fn opposite_coefficients_give_reversed_specializations() {
    let demo = PlaneCurveSpec::bundled("demo").unwrap();
    for (a, b) in [(3, 2), (-5, 1), (1, 0)] {
        let g = specialize(&demo, fc(a, b)).unwrap();
        let r = g.reverse();
        let r = if r.lc().sign() == num_bigint::Sign::Minus { -r } else { r };
        assert_eq!(specialize(&demo, fc(-a, -b)).unwrap(), r);
        assert_eq!(fc(-a, -b).canonical(), fc(a, b).canonical());
    }
}

fn small_curve() -> impl Strategy<Value = PlaneCurveSpec> {
    prop::collection::vec((-3i64..=3, 0i64..=3, 0i64..=3), 1..5).prop_filter_map("valid", |ts| {
        let mut terms: Vec<(BigInt, [i64; 2])> =
            ts.iter().map(|&(c, a, b)| (BigInt::from(c), [a, b])).collect();
        let s: i64 = ts.iter().map(|t| t.0).sum();
        terms.push((BigInt::from(-s), [0, 0]));
        PlaneCurveSpec::new("random", "proptest", false, terms).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn specialization_length_and_divisibility(f in small_curve(), pp in -6i64..=6, qq in 0i64..=6) {
        prop_assume!(pp.gcd(&qq) == 1);
        let c = fc(pp, qq);
        match specialize(&f, c) {
            Err(DehnError::ZeroSpecialization(..)) => {}
            Err(e) => prop_assert!(false, "{e}"),
            Ok(g) => {
                prop_assert!(length(&g) <= f.length());
                if g.deg() >= 1 {
                    for fp in filling_points(&f, c).unwrap() {
                        prop_assert!(g.div_exact(&fp.t.minpoly).is_some());
                    }
                    let r = verify_height_chain(&f, c).unwrap();
                    prop_assert!(r.passed(), "{:?}", r.failures);
                }
            }
        }
    }
}
