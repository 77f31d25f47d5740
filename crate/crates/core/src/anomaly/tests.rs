use super::*;
use crate::exactnum::Rational;
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn gauss(a: i64, b: i64) -> FieldElement {
    FieldElement::from_coords(&NumberFieldSpec::gaussian(), vec![q(a), q(b)]).unwrap()
}

fn shapes_ii() -> CuspShapePair {
    CuspShapePair::new(gauss(0, 1), gauss(0, 1)).unwrap()
}

/// `τ_1 = i`, `τ_2 = i√2` in `Q(i, √2)` (basis `1, i, √2, i√2`).
fn shapes_independent() -> CuspShapePair {
    let f = NumberFieldSpec::gaussian_sqrt2();
    CuspShapePair::new(FieldElement::basis(&f, 1), FieldElement::basis(&f, 3)).unwrap()
}

fn cand(r1: Row, r2: Row) -> SubgroupCandidate {
    SubgroupCandidate::new([r1, r2]).unwrap()
}

fn lat(rows: &[Row]) -> Lattice {
    Lattice::from_i64(4, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn pretzel() -> TruncatedHolonomy {
    bundled_series("pretzel").unwrap()
}

fn truncated(th: &TruncatedHolonomy, order: usize) -> TruncatedHolonomy {
    TruncatedHolonomy::exact(th.exact_series().unwrap().to_vec(), order).unwrap()
}

#[test]
fn independence_examples() {
    assert!(!rational_independence(&shapes_ii()));
    assert!(rational_independence(&shapes_independent()));
    let s = CuspShapePair::new(gauss(0, 1), gauss(1, 1)).unwrap();
    assert!(!rational_independence(&s));
    // the same shapes embedded in the degree-4 field are still dependent
    let f = NumberFieldSpec::gaussian_sqrt2();
    let i = FieldElement::basis(&f, 1);
    assert!(!rational_independence(&CuspShapePair::new(i.clone(), i).unwrap()));
}

#[test]
fn shapes_validation() {
    assert_eq!(CuspShapePair::new(gauss(1, 0), gauss(0, 1)), Err(AnomalyError::RealShape(1)));
    let f = NumberFieldSpec::gaussian_sqrt2();
    assert_eq!(
        CuspShapePair::new(gauss(0, 1), FieldElement::basis(&f, 1)),
        Err(AnomalyError::FieldMismatch)
    );
    assert_eq!(CuspShapePair::from_series(&pretzel()).unwrap(), shapes_ii());
    let text = format!(
        r#"{{"field": {}, "tau1": ["0","1"], "tau2": ["1","1"]}}"#,
        NumberFieldSpec::gaussian().to_json()
    );
    let s = CuspShapePair::from_json(&text).unwrap();
    assert_eq!(s.tau2, gauss(1, 1));
}

#[test]
fn relation_search_examples() {
    let i = Complex64::new(0.0, 1.0);
    let r = relation_search(i, i, 1, 1e-9).unwrap().unwrap();
    assert_eq!(r.coeffs, [1, 0, 0, 1]);
    assert!(r.heuristic && r.residual < 1e-12);
    let i2 = Complex64::new(0.0, 2f64.sqrt());
    assert!(relation_search(i, i2, 10, 1e-9).unwrap().is_none());
    let loose = relation_search(i, i2, 2, 10.0).unwrap().unwrap();
    assert!(loose.heuristic);
    assert_eq!(relation_search(i, i, 0, 1.0), Err(AnomalyError::Bound));
    // 1 + i − τ_2 = 0 for τ_2 = 1 + i; the minimal relation found has norm 3
    let r = relation_search(i, Complex64::new(1.0, 1.0), 3, 1e-9).unwrap().unwrap();
    assert_eq!(r.coeffs.iter().map(|x| x * x).sum::<i64>(), 3);
}

#[test]
fn rank1_examples() {
    let diag = cand([1, 0, -1, 0], [0, 1, 0, -1]);
    let anti = cand([1, 0, 1, 0], [0, 1, 0, 1]);
    assert!(rank1_at_complete(&diag, &shapes_ii()));
    assert!(rank1_at_complete(&anti, &shapes_ii()));
    assert!(!rank1_at_complete(&anti, &shapes_independent()));
    assert_eq!(Minor::BC.eval(&anti.rows[0], &anti.rows[1]), -1);
    assert!(rank1_at_complete(&cand([0, 0, 1, 0], [0, 0, 0, 1]), &shapes_independent()));
    assert!(rank1_at_complete(&cand([1, 0, 0, 0], [0, 1, 0, 0]), &shapes_independent()));
}

#[test]
fn rank_is_validated() {
    assert_eq!(SubgroupCandidate::new([[1, 2, 3, 4], [2, 4, 6, 8]]), Err(AnomalyError::Rank(1)));
    assert_eq!(SubgroupCandidate::new([[0; 4], [0; 4]]), Err(AnomalyError::Rank(0)));
    let th = pretzel();
    let bad = SubgroupCandidate { rows: [[1, 0, 0, 0], [2, 0, 0, 0]] };
    assert!(matches!(rank1_condition_series(&th, &bad), Err(AnomalyError::Rank(_))));
}

#[test]
fn containment_examples() {
    for s in [shapes_ii(), shapes_independent()] {
        assert!(containment_check(&[0, 0, 0, 0], &s));
        assert!(!containment_check(&[1, 0, 0, 0], &s));
        assert!(!containment_check(&[3, -2, 0, 0], &s));
    }
}

#[test]
fn classify_examples() {
    let s = shapes_independent();
    assert_eq!(classify_candidate(&cand([0, 0, 1, 0], [0, 0, 0, 1]), true, &s), Verdict::CutsSecondCusp);
    assert_eq!(classify_candidate(&cand([1, 0, 0, 0], [0, 1, 0, 0]), true, &s), Verdict::CutsFirstCusp);
    assert_eq!(
        classify_candidate(&cand([1, 0, 1, 0], [0, 1, 0, 1]), true, &s),
        Verdict::NotAnomalousAtComplete
    );
    // dependent shapes: the diagonal family is anomalous at the complete structure
    let d = classify_candidate(&cand([1, 0, -1, 0], [0, 1, 0, -1]), false, &shapes_ii());
    assert_eq!(d, Verdict::OtherCandidate(lat(&[[1, 0, -1, 0], [0, 1, 0, -1]])));
    assert_eq!(
        classify_candidate(&cand([1, 0, 0, 0], [0, 0, 1, 0]), false, &shapes_ii()),
        Verdict::NotAnomalousAtComplete
    );
}

#[test]
fn minor_oracle_small_boxes() {
    for b in [1, 2] {
        let r = minor_oracle(b, &ALL_MINORS).unwrap();
        assert_eq!(r.counterexamples, 0, "B = {b}: {:?}", r.first_counterexample);
        assert!(r.satisfying > 0);
    }
    let mutated = minor_oracle(1, &ALL_MINORS[..3]).unwrap();
    assert!(mutated.counterexamples > 0);
    let c = mutated.first_counterexample.unwrap();
    assert_ne!(Minor::BD.eval(&c.rows[0], &c.rows[1]), 0);
    // rank-2 unordered pairs in [−1, 1]^4: C(81, 2) minus dependent pairs
    let r = minor_oracle(1, &ALL_MINORS).unwrap();
    assert!(r.rank2_pairs < 81 * 80 / 2);
}

#[test]
fn classifier_matches_exact_rank1_under_independence() {
    let s = shapes_independent();
    for c in enumerate_candidates(3) {
        let v = classify_candidate(&c, true, &s);
        let cusp = matches!(v, Verdict::CutsFirstCusp | Verdict::CutsSecondCusp);
        assert_eq!(cusp, rank1_at_complete(&c, &s), "{c}");
        assert!(!matches!(v, Verdict::OtherCandidate(_)));
    }
}

#[test]
fn enumeration_is_normalized_and_complete() {
    let cands = enumerate_candidates(2);
    let set: std::collections::BTreeSet<_> = cands.iter().copied().collect();
    assert_eq!(set.len(), cands.len());
    for c in &cands {
        assert_eq!(c.normalized(), *c);
        assert_eq!(c.rows[1][3], 0);
    }
    // every rank-2 matrix in [−1, 1] whose normal form fits the box is listed
    let r: Vec<i64> = (-1..=1).collect();
    let mut n = 0;
    for &a in &r {
        for &b in &r {
            for &c in &r {
                for &d in &r {
                    for &e in &r {
                        for &f in &r {
                            for &g in &r {
                                for &h in &r {
                                    let Ok(x) = SubgroupCandidate::new([[a, b, c, d], [e, f, g, h]])
                                    else {
                                        continue;
                                    };
                                    let nf = x.normalized();
                                    if nf.rows.iter().flatten().all(|v| v.abs() <= 2) {
                                        assert!(set.contains(&nf), "{x} -> {nf}");
                                        n += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(n > 0);
}

#[test]
fn saturation_examples() {
    assert_eq!(lat(&[[2, 0, 0, 0], [0, 0, 1, 0]]).saturation(), lat(&[[1, 0, 0, 0], [0, 0, 1, 0]]));
    assert_eq!(lat(&[[1, 1, 0, 0], [1, -1, 0, 0]]).saturation(), cusp_families()[0]);
    assert!(lat(&[[1, 1, 0, 0], [1, -1, 0, 0]]).saturation().is_primitive());
    let l = lat(&[[0, 0, 3, 1], [0, 0, 0, 2]]);
    assert_eq!(l.saturation(), cusp_families()[1]);
}

/// Each coefficient is a polynomial of degree ≤ 2 in each of the seven
/// entries (`d_2 = 0`), so agreement on `{−1, 0, 1}^7` is a polynomial
/// identity.
#[test]
fn pretzel_condition_series_matches_hand_expansion() {
    let th = truncated(&pretzel(), 3);
    let r: Vec<i64> = (-1..=1).collect();
    let g = gauss;
    let sixteen = Rational::from_integer(16.into());
    for n in 0..3i64.pow(7) {
        let mut m = n;
        let mut v = [0i64; 7];
        for x in v.iter_mut() {
            *x = r[(m % 3) as usize];
            m /= 3;
        }
        let [a1, b1, c1, d1, a2, b2, c2] = v;
        let s = condition_series(&th, &[[a1, b1, c1, d1], [a2, b2, c2, 0]]).unwrap();
        let x2 = g(a2, b2); // a2 + i b2
        let y1 = g(c1, d1); // c1 + i d1
        let k = |n: i64| g(n, 0);
        assert_eq!(s.coeff(&[0, 0]), &(&g(a1, b1) * &k(c2)) - &(&y1 * &x2));
        // 16·[u1²]: (−3+i) b1c2 + (1+i) d1(a2+ib2) − (−3+i) b2(c1+id1)
        let u11 = &(&(&g(-3, 1) * &k(b1 * c2)) + &(&g(1, 1) * &(&k(d1) * &x2)))
            - &(&g(-3, 1) * &(&k(b2) * &y1));
        assert_eq!(s.coeff(&[2, 0]).scale(&sixteen), u11);
        // 16·[u2²]: −(1+i) b1c2 − (−3+i) d1(a2+ib2) + (1+i) b2(c1+id1)
        let u22 = &(&(&g(-1, -1) * &k(b1 * c2)) - &(&g(-3, 1) * &(&k(d1) * &x2)))
            + &(&g(1, 1) * &(&k(b2) * &y1));
        assert_eq!(s.coeff(&[0, 2]).scale(&sixteen), u22);
        // the mixed coefficient: −(1+i)/8 ((a1+ib1) b2 + d1c2 − b1(a2+ib2))
        let mixed = &(&(&g(a1, b1) * &k(b2)) + &k(d1 * c2)) - &(&k(b1) * &x2);
        let eight = Rational::from_integer(8.into());
        assert_eq!(s.coeff(&[1, 1]).scale(&eight), &g(-1, -1) * &mixed);
        assert_eq!(s.total_degree().unwrap_or(0), 2.min(s.total_degree().unwrap_or(0)));
    }
}

#[test]
fn constant_term_is_the_complete_determinant() {
    for th in [pretzel(), bundled_series("planted").unwrap()] {
        let shapes = CuspShapePair::from_series(&th).unwrap();
        for c in enumerate_candidates(1) {
            let s = rank1_condition_series(&th, &c).unwrap();
            assert_eq!(s.coeff(&[0, 0]), complete_determinant(&c.normalized(), &shapes));
        }
    }
}

#[test]
fn plucker_equations_agree_with_direct_expansion() {
    let th = pretzel();
    let eqs = plucker_equations(&th).unwrap();
    for c in enumerate_candidates(1).into_iter().step_by(7) {
        let s = condition_series(&th, &c.rows).unwrap();
        for n in 0..=4u32 {
            let direct = s.truncate(n).is_zero();
            let p = c.plucker();
            let fast = !eqs.iter().any(|e| e.exp.iter().sum::<u32>() <= n && violates(e, &p));
            assert_eq!(direct, fast, "{c} order {n}");
        }
    }
}

#[test]
fn condition_series_edge_cases() {
    let order1 = truncated(&pretzel(), 1);
    assert_eq!(
        rank1_condition_series(&order1, &cand([1, 0, 0, 0], [0, 1, 0, 0])),
        Err(AnomalyError::Order(1))
    );
    // second-cusp family: S = h_{u1}, zero for the SGI series, not for the pretzel
    let e34 = cand([0, 0, 1, 0], [0, 0, 0, 1]);
    assert!(rank1_condition_series(&bundled_series("sgi").unwrap(), &e34).unwrap().is_zero());
    let s = rank1_condition_series(&pretzel(), &e34).unwrap();
    assert_eq!(s.coeff(&[0, 0]), gauss(0, 0));
    assert_eq!(s.coeff(&[2, 0]), gauss(0, 0));
    assert_eq!(s.coeff(&[0, 2]), gauss(0, 0));
    assert_eq!(s.coeff(&[1, 1]).scale(&q(8)), gauss(-1, -1));
}

#[test]
fn pretzel_candidates() {
    let th = pretzel();
    let r = solve_candidates(&th, 3, 2).unwrap();
    assert_eq!(r.pure_power_lattices, sorted_unique(cusp_families().to_vec()));
    assert!(r.lattices.is_empty());
    assert_eq!(r.discrepancies.len(), 2);
    assert!(r.discrepancies.iter().all(|d| d.exp == vec![1, 1]));
    assert!(!r.low_confidence);
    assert!(matches!(solve_candidates(&th, 3, 5), Err(AnomalyError::OrderTooHigh(5, 4))));
    assert!(matches!(solve_candidates(&th, 0, 2), Err(AnomalyError::Bound)));
}

#[test]
fn order_zero_is_underdetermined() {
    let th = pretzel();
    let r0 = solve_candidates(&th, 2, 0).unwrap();
    let r2 = solve_candidates(&th, 2, 2).unwrap();
    assert!(r0.low_confidence);
    assert!(r0.lattices.len() > r2.pure_power_lattices.len());
    for l in &r2.pure_power_lattices {
        assert!(r0.lattices.contains(l));
    }
    // order 0 survivors are exactly the candidates with a vanishing determinant
    let shapes = shapes_ii();
    let expect: Vec<Lattice> = sorted_unique(
        enumerate_candidates(2)
            .iter()
            .filter(|c| rank1_at_complete(c, &shapes))
            .map(|c| c.lattice().saturation())
            .collect(),
    );
    assert_eq!(r0.lattices, expect);
}

#[test]
fn sgi_detection() {
    let th = pretzel();
    match sgi_detect(&th).unwrap() {
        SgiStatus::NotSgi(w) => {
            assert_eq!((w.series, w.exp.clone()), (0, vec![1, 2]));
            assert!((w.value - Complex64::new(-1.0 / 16.0, -1.0 / 16.0)).norm() < 1e-15);
            assert_eq!(w.exact.as_deref(), Some(gauss(-1, -1).scale(&Rational::new(1.into(), 16.into())).to_string().as_str()));
        }
        s => panic!("{s:?}"),
    }
    let sgi = bundled_series("sgi").unwrap();
    assert_eq!(sgi_detect(&sgi).unwrap(), SgiStatus::PossiblySgiToOrder(3));
    assert_eq!(sgi_detect(&truncated(&th, 1)).unwrap(), SgiStatus::PossiblySgiToOrder(1));
}

#[test]
fn verdicts_on_fixtures() {
    let th = pretzel();
    let r = simplicity_verdict(&th, 3, 2).unwrap();
    assert_eq!(r.verdict, Simplicity::SimpleToOrder(2));
    assert!(r.other.is_empty());
    let r3 = simplicity_verdict(&th, 3, 3).unwrap();
    assert_eq!(r3.verdict, Simplicity::SimpleToOrder(3));
    let sgi = simplicity_verdict(&bundled_series("sgi").unwrap(), 2, 2).unwrap();
    assert_eq!(sgi.verdict, Simplicity::NonSimpleSgi);
    for f in cusp_families() {
        assert!(sgi.search.lattices.contains(&f));
    }
    let planted = simplicity_verdict(&bundled_series("planted").unwrap(), 2, 2).unwrap();
    assert_eq!(planted.verdict, Simplicity::Inconclusive);
    assert_eq!(
        planted.other,
        vec![lat(&[[1, 0, -1, 0], [0, 1, 0, -1]]), lat(&[[1, 0, 1, 0], [0, 1, 0, 1]])]
            .into_iter()
            .map(|l| l.saturation())
            .collect::<Vec<_>>()
            .tap_sorted()
    );
    let j = r.to_json();
    assert_eq!(j["verdict"], "SimpleToOrder2");
    assert_eq!(j["sgi"]["status"], "NotSGI");
    assert!(r.summary().contains("not SGI"));
}

trait TapSorted {
    fn tap_sorted(self) -> Self;
}

impl TapSorted for Vec<Lattice> {
    fn tap_sorted(self) -> Self {
        sorted_unique(self)
    }
}

#[test]
fn verdict_is_monotone_in_order() {
    let th = pretzel();
    let mut prev: Option<SimplicityReport> = None;
    for n in 0..=4 {
        let r = simplicity_verdict(&th, 2, n).unwrap();
        if let Some(p) = &prev {
            for l in &r.search.lattices {
                assert!(p.search.lattices.contains(l));
            }
            if matches!(p.verdict, Simplicity::SimpleToOrder(_)) {
                assert!(matches!(r.verdict, Simplicity::SimpleToOrder(_)));
            }
        }
        prev = Some(r);
    }
}

#[test]
fn more_than_two_cusps_rejected() {
    let f = NumberFieldSpec::gaussian();
    let polys: Vec<MultiPoly> = (0..3).map(|i| MultiPoly::var(&f, 3, i)).collect();
    let th = TruncatedHolonomy::exact(polys, 3).unwrap();
    assert_eq!(sgi_detect(&th), Err(AnomalyError::Cusps(3)));
    assert!(matches!(solve_candidates(&th, 1, 1), Err(AnomalyError::Cusps(3))));
    assert!(matches!(simplicity_verdict(&th, 1, 1), Err(AnomalyError::Cusps(3))));
}

fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec((0usize..4, -2i64..=2), 1..5).prop_map(|ops| {
        let mut m = [[1i64, 0], [0, 1]];
        for (op, k) in ops {
            match op {
                0 => m = [[m[0][0] + k * m[1][0], m[0][1] + k * m[1][1]], m[1]],
                1 => m = [m[0], [m[1][0] + k * m[0][0], m[1][1] + k * m[0][1]]],
                2 => m = [m[1], m[0]],
                _ => m = [[-m[0][0], -m[0][1]], m[1]],
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_invariance(r1 in prop::array::uniform4(-2i64..=2), r2 in prop::array::uniform4(-2i64..=2), u in unimodular()) {
        prop_assume!(SubgroupCandidate::new([r1, r2]).is_ok());
        let c = cand(r1, r2);
        let mix = |i: usize| -> Row { std::array::from_fn(|j| u[i][0] * r1[j] + u[i][1] * r2[j]) };
        let d = cand(mix(0), mix(1));
        prop_assert_eq!(c.normalized(), d.normalized());
        prop_assert_eq!(c.lattice(), d.lattice());
        let th = pretzel();
        let sc = rank1_condition_series(&th, &c).unwrap();
        let sd = rank1_condition_series(&th, &d).unwrap();
        prop_assert_eq!(sc, sd);
        let s = shapes_ii();
        prop_assert_eq!(rank1_at_complete(&c, &s), rank1_at_complete(&d, &s));
    }

    #[test]
    fn containment_only_for_zero_row(row in prop::array::uniform4(-5i64..=5)) {
        for s in [shapes_ii(), shapes_independent()] {
            prop_assert_eq!(containment_check(&row, &s), row == [0; 4]);
        }
    }

    #[test]
    fn relation_search_agrees_with_exact_independence(a in -2i64..=2, b in 1i64..=2, c in -2i64..=2, d in 1i64..=2) {
        // τ_1 = a + bi, τ_2 = c + di are always dependent over Q
        let s = CuspShapePair::new(gauss(a, b), gauss(c, d)).unwrap();
        prop_assert!(!rational_independence(&s));
        let (t1, t2) = s.numeric();
        prop_assert!(relation_search(t1, t2, 10, 1e-9).unwrap().is_some());
    }
}
