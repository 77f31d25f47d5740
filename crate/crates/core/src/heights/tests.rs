use super::*;
use crate::exactnum::parse_rational;
use proptest::prelude::*;

fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64s(c)
}

fn close(h: &HeightBound, x: f64, tol: f64) -> bool {
    h.lower <= x + tol && x - tol <= h.upper && h.upper - h.lower <= tol
}

fn alg(f: &IntPoly, near: (f64, f64)) -> AlgebraicNumber {
    let d = Disk::new(num_complex::Complex64::new(near.0, near.1), 1e-2);
    AlgebraicNumber::select(f, &d, &FactorOptions::default()).unwrap()
}

#[test]
fn length_examples() {
    assert_eq!(length(&p(&[-1, -1, 1])), BigInt::from(3));
    assert_eq!(length(&p(&[3, 2])), BigInt::from(5));
    assert_eq!(length(&p(&[1, 0, -2, 0, 1])), BigInt::from(4));
}

#[test]
fn mahler_examples() {
    assert!(close(&mahler_measure(&p(&[-2, 1]), 1e-12).unwrap(), 2.0, 1e-11));
    let m = mahler_measure(&p(&[1, 1, 1]), 1e-12).unwrap();
    assert_eq!((m.lower, m.upper), (1.0, 1.0));
    let g = mahler_measure(&p(&[-1, -1, 1]), 1e-12).unwrap();
    assert!(close(&g, 1.618_033_988_749_895, 1e-11));
    assert!(g.exact && g.lower >= 1.0);
    assert!(matches!(mahler_measure(&IntPoly::zero(), 1e-9), Err(HeightError::ZeroPolynomial)));
}

#[test]
fn mahler_with_content_and_multiplicity() {
    // 3 x (x - 2)^2 (x^2 + 1): M = 3 * 4
    let f = &(&(&p(&[-2, 1]) * &p(&[-2, 1])) * &p(&[1, 0, 1])) * &p(&[0, 3]);
    assert!(close(&mahler_measure(&f, 1e-12).unwrap(), 12.0, 1e-10));
    // Lehmer's polynomial
    let lehmer = p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
    assert!(close(&mahler_measure(&lehmer, 1e-12).unwrap(), 1.176_280_818_259_917, 1e-11));
}

#[test]
fn height_examples() {
    let two = AlgebraicNumber::from_int(2);
    assert!(close(&height_of(&two, 1e-12).unwrap(), 2.0, 1e-10));
    let half = AlgebraicNumber::from_rational(&parse_rational("1/2").unwrap());
    let h = height_of(&half, 1e-12).unwrap();
    assert!(close(&h, 2.0, 1e-10) && h.exact);
    let phi = alg(&p(&[-1, -1, 1]), (1.618, 0.0));
    assert!(close(&height_of(&phi, 1e-12).unwrap(), 1.272_019_649_514_069, 1e-10));
    let one = AlgebraicNumber::from_int(1);
    assert_eq!(height_of(&one, 1e-12).unwrap(), HeightBound::ONE);
    let zeta = alg(&p(&[1, 1, 1]), (-0.5, 0.866));
    assert_eq!(height_of(&zeta, 1e-12).unwrap(), HeightBound::ONE);
}

#[test]
fn tuple_examples() {
    let two = AlgebraicNumber::from_int(2);
    let half = AlgebraicNumber::from_rational(&parse_rational("1/2").unwrap());
    let one = AlgebraicNumber::from_int(1);
    let a = tuple_height_bounds(&[two.clone()], 1e-12).unwrap();
    assert!((a.lower - 2.0).abs() < 1e-9 && (a.upper - 2.0).abs() < 1e-9 && !a.exact);
    let b = tuple_height_bounds(&[two, half], 1e-12).unwrap();
    assert!((b.lower - 2.0).abs() < 1e-9 && (b.upper - 4.0).abs() < 1e-9);
    let c = tuple_height_bounds(&[one.clone(), one], 1e-12).unwrap();
    assert_eq!((c.lower, c.upper), (1.0, 1.0));
}

#[test]
fn trace_transform_examples() {
    // t = 2
    let b = find_roots(&p(&[-2, 1]), 1e-14).unwrap();
    let tt = minpoly_trace_transform(&p(&[-2, 1]), &b[0]).unwrap();
    assert_eq!(tt.w.minpoly, p(&[-5, 2]));
    assert_eq!(tt.s.minpoly, p(&[-9, 0, 2]));
    assert!(tt.s.approx().re > 0.0);
    assert!((tt.s.approx().re - 4.5f64.sqrt()).abs() < 1e-12);
    assert!((tt.neg_s_box.center_c64().re + 4.5f64.sqrt()).abs() < 1e-12);
    // H(s) = M(2s^2 - 9)^{1/2} = sqrt(9)^{1/2}... = (2 * 4.5)^{1/2} = 3
    assert!(close(&tt.s_height, 3.0, 1e-9));
    // t = 1: w = 2, s = 2 on the nonnegative branch
    let b = find_roots(&p(&[-1, 1]), 1e-14).unwrap();
    let tt = minpoly_trace_transform(&p(&[-1, 1]), &b[0]).unwrap();
    assert_eq!(tt.w.minpoly, p(&[-2, 1]));
    assert_eq!(tt.s.minpoly, p(&[-2, 1]));
    // t a root of t^2 - 3t + 1: w = 3, s^2 = 5
    let f = p(&[1, -3, 1]);
    let b = find_roots(&f, 1e-14).unwrap();
    for r in &b {
        let tt = minpoly_trace_transform(&f, r).unwrap();
        assert_eq!(tt.w.minpoly, p(&[-3, 1]));
        assert_eq!(tt.s.minpoly, p(&[-5, 0, 1]));
        assert!(tt.s.approx().re > 0.0);
    }
}

#[test]
fn trace_transform_negative_one_and_complex() {
    // t = -1: w = -2, s = 0
    let b = find_roots(&p(&[1, 1]), 1e-14).unwrap();
    let tt = minpoly_trace_transform(&p(&[1, 1]), &b[0]).unwrap();
    assert_eq!(tt.w.minpoly, p(&[2, 1]));
    assert_eq!(tt.s.minpoly, p(&[0, 1]));
    // non-reciprocal cubic t^3 - t - 1
    let f = p(&[-1, -1, 0, 1]);
    for r in find_roots(&f, 1e-14).unwrap() {
        let tt = minpoly_trace_transform(&f, &r).unwrap();
        assert_eq!(tt.w.degree(), 3);
        let t = r.center_c64();
        let w = t + 1.0 / t;
        assert!((tt.w.approx() - w).norm() < 1e-10);
        let s = tt.s.approx();
        assert!((s * s - 2.0 - w).norm() < 1e-10);
        assert!(s.re >= 0.0);
        // the s-polynomial is P(s^2 - 2)
        assert_eq!(tt.s_poly, tt.w.minpoly.taylor_shift(&BigInt::from(-2)).inflate(2));
        assert!(tt.s_poly.div_exact(&tt.s.minpoly).is_some());
    }
}

#[test]
fn core_trace_height_bounded_by_twice_height_squared() {
    for f in [p(&[-1, -1, 0, 1]), p(&[-2, 0, 1]), p(&[3, 1, 0, 2]), p(&[1, -1, 0, 0, 1, 1])] {
        for t in AlgebraicNumber::roots_of(&f, &FactorOptions::default()).unwrap() {
            let ht = height_of(&t, 1e-12).unwrap();
            let tt = trace_transform(&t, &FactorOptions::default()).unwrap();
            assert!(tt.s_height.upper <= 2.0 * ht.upper * ht.upper);
            let hs = height_of(&tt.s, 1e-12).unwrap();
            assert!((hs.lower - tt.s_height.lower).abs() < 1e-9);
        }
    }
}

#[test]
fn resultant_minpolys() {
    let s = sum_resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1]));
    // sqrt2 + sqrt3 has minpoly x^4 - 10x^2 + 1
    assert_eq!(s.primitive_part(), p(&[1, 0, -10, 0, 1]));
    let m = product_resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1]));
    // products ±sqrt6, each twice
    assert_eq!(m.primitive_part(), &p(&[-6, 0, 1]) * &p(&[-6, 0, 1]));
}

#[test]
fn inverse_has_same_height() {
    let f = p(&[-1, 3, 0, 2]);
    for a in AlgebraicNumber::roots_of(&f, &FactorOptions::default()).unwrap() {
        let b = a.inverse().unwrap();
        let h1 = height_of(&a, 1e-12).unwrap();
        let h2 = height_of(&b, 1e-12).unwrap();
        assert!((h1.lower - h2.lower).abs() < 1e-9 && (h1.upper - h2.upper).abs() < 1e-9);
        assert!((b.approx() - 1.0 / a.approx()).norm() < 1e-10);
    }
}

#[test]
fn uncertified_height_is_conservative() {
    // pretend x^2 - 3x + 2 = (x-1)(x-2) is an uncertified minimal polynomial
    let f = p(&[2, -3, 1]);
    let roots = find_roots(&f, 1e-14).unwrap();
    for r in roots.iter() {
        let a = AlgebraicNumber {
            minpoly: f.clone(),
            root: r.clone(),
            conjugates: roots.clone(),
            irreducible: false,
            min_degree: 1,
            root_of_unity: None,
        };
        let h = height_of(&a, 1e-12).unwrap();
        assert!(!h.exact);
        let truth = r.center_c64().re.round();
        assert!(h.lower <= truth && truth <= h.upper);
    }
}

fn small_poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-10i64..=10, 2..10).prop_map(|c| IntPoly::from_i64s(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mahler_is_multiplicative(f in small_poly(), g in small_poly()) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let mf = mahler_measure(&f, 1e-12).unwrap();
        let mg = mahler_measure(&g, 1e-12).unwrap();
        let mfg = mahler_measure(&(&f * &g), 1e-12).unwrap();
        let (lo, hi) = (mf.lower * mg.lower, mf.upper * mg.upper);
        prop_assert!(mfg.lower <= hi * (1.0 + 1e-12) && lo <= mfg.upper * (1.0 + 1e-12));
        prop_assert!((mfg.upper / lo - 1.0) <= 1e-9);
    }

    #[test]
    fn mahler_below_length(f in small_poly()) {
        prop_assume!(!f.is_zero());
        let m = mahler_measure(&f, 1e-12).unwrap();
        let l: f64 = f.length().to_string().parse().unwrap();
        prop_assert!(m.lower <= l);
        prop_assert!(1.0 <= m.lower && m.lower <= m.upper);
    }

    #[test]
    fn height_power_is_mahler(f in small_poly()) {
        prop_assume!(f.deg() >= 1);
        let fz = factor_smalldeg(&f, 24).unwrap();
        for fac in &fz.factors {
            let a = AlgebraicNumber::from_factor(fac, 0);
            let h = height_of(&a, 1e-12).unwrap();
            let m = mahler_measure(&fac.poly, 1e-12).unwrap();
            let d = fac.poly.deg() as i32;
            prop_assert!((h.lower.powi(d) / m.upper - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn conjugate_boxes_match_factored_transform() {
    for f in [p(&[-1, 3, 0, 2]), p(&[1, -1, 1, -1, 2]), p(&[-3, 1, 0, 0, 1])] {
        for t in AlgebraicNumber::roots_of(&f, &FactorOptions::default()).unwrap() {
            let slow = trace_transform(&t, &FactorOptions::default()).unwrap();
            let fast = trace_transform(&t, &FactorOptions::with_cap(2)).unwrap();
            assert!(!fast.s.irreducible, "{} {:?} r {}", t.minpoly, t.approx(), fast.s_poly);
            assert_eq!(fast.s_poly, slow.s_poly);
            assert_eq!(fast.w.minpoly, slow.w.minpoly);
            assert!((fast.s.approx() - slow.s.approx()).norm() < 1e-9, "t {:?} fast {:?} slow {:?} w {:?} {:?}", t.approx(), fast.s.approx(), slow.s.approx(), fast.w.approx(), slow.w.approx());
            assert!((fast.w.approx() - slow.w.approx()).norm() < 1e-9);
            assert!((fast.s_height.lower - slow.s_height.lower).abs() < 1e-9);
            assert!(fast.s_height.lower <= slow.s_height.upper && slow.s_height.lower <= fast.s_height.upper);
            let (lo, hi) = trace_degree_bounds(&fast);
            assert!(lo <= slow.s.degree() && slow.s.degree() <= hi);
        }
    }
}
