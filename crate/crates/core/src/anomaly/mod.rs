//! Anomalous algebraic subgroups of a two-cusped holonomy variety: rational
//! independence of cusp shapes, the rank-1 test at the complete structure,
//! the four-minor classifier and its exhaustive oracle, coefficient
//! comparison on truncated holonomy series, strong geometric isolation
//! (SGI) detection and the order-`N` simplicity verdict.
//!
//! Coordinates are `(M_1, L_1, M_2, L_2)`; a row `(a, b, c, d)` is the
//! character `M_1^a L_1^b M_2^c L_2^d`, whose log-differential is
//! `a du_1 + b dv_1 + c du_2 + d dv_2`.

#[cfg(test)]
mod tests;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactnum::{linalg, ExactError, FieldElement, Monomial, MultiPoly, NumberFieldSpec};
use crate::nzdata::TruncatedHolonomy;
use crate::subgroups::{hnf, Lattice};

pub type Row = [i64; 4];

#[derive(Debug, Error, PartialEq)]
pub enum AnomalyError {
    #[error("not a 2-dimensional subgroup (rank {0})")]
    Rank(usize),
    #[error("only two cusps are supported, got {0}")]
    Cusps(usize),
    #[error("truncation order {0} leaves no usable equations")]
    Order(usize),
    #[error("order {0} exceeds the valid order {1} of the condition series")]
    OrderTooHigh(usize, usize),
    #[error("exact coefficients are required")]
    NotExact,
    #[error("cusp shape {0} has zero imaginary part")]
    RealShape(usize),
    #[error("cusp shapes live in different fields")]
    FieldMismatch,
    #[error("bound must be at least 1")]
    Bound,
    #[error("integer overflow in the coefficient tables")]
    Overflow,
    #[error("malformed shapes file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Cusp shapes `τ_1, τ_2` in a common number field.
#[derive(Clone, Debug, PartialEq)]
pub struct CuspShapePair {
    pub tau1: FieldElement,
    pub tau2: FieldElement,
}

impl CuspShapePair {
    pub fn new(tau1: FieldElement, tau2: FieldElement) -> Result<Self, AnomalyError> {
        if !NumberFieldSpec::same(tau1.field(), tau2.field()) {
            return Err(AnomalyError::FieldMismatch);
        }
        for (i, t) in [&tau1, &tau2].into_iter().enumerate() {
            if t.to_complex().im.abs() < 1e-12 {
                return Err(AnomalyError::RealShape(i + 1));
            }
        }
        Ok(CuspShapePair { tau1, tau2 })
    }

    /// The linear coefficients `∂v_i/∂u_i` of an exact series.
    pub fn from_series(th: &TruncatedHolonomy) -> Result<Self, AnomalyError> {
        require_two(th)?;
        let s = th.exact_series().ok_or(AnomalyError::NotExact)?;
        Self::new(s[0].coeff(&[1, 0]), s[1].coeff(&[0, 1]))
    }

    /// `{"field": <field>, "tau1": [coords], "tau2": [coords]}`.
    pub fn from_json(text: &str) -> Result<Self, AnomalyError> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| AnomalyError::Malformed(e.to_string()))?;
        let field = NumberFieldSpec::from_json(&v["field"].to_string())?;
        let coords = |key: &str| -> Result<Vec<String>, AnomalyError> {
            let arr = v[key]
                .as_array()
                .ok_or_else(|| AnomalyError::Malformed(format!("missing {key}")))?;
            Ok(arr
                .iter()
                .map(|x| x.as_str().map_or_else(|| x.to_string(), str::to_string))
                .collect())
        };
        Self::new(
            FieldElement::parse(&field, &coords("tau1")?)?,
            FieldElement::parse(&field, &coords("tau2")?)?,
        )
    }

    pub fn field(&self) -> &Arc<NumberFieldSpec> {
        self.tau1.field()
    }

    pub fn numeric(&self) -> (Complex64, Complex64) {
        (self.tau1.to_complex(), self.tau2.to_complex())
    }
}

/// Two characters cutting out a candidate 2-dimensional subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupCandidate {
    pub rows: [Row; 2],
}

/// Index pairs `(j, k)`, `j < k`, in Plücker order.
const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl SubgroupCandidate {
    pub fn new(rows: [Row; 2]) -> Result<Self, AnomalyError> {
        let c = SubgroupCandidate { rows };
        if c.plucker().iter().all(|&x| x == 0) {
            let r = usize::from(rows.iter().any(|r| r.iter().any(|&x| x != 0)));
            return Err(AnomalyError::Rank(r));
        }
        Ok(c)
    }

    /// `p_{jk} = r1_j r2_k − r1_k r2_j`; zero iff the rows have rank `< 2`.
    pub fn plucker(&self) -> [i64; 6] {
        let [r1, r2] = self.rows;
        PAIRS.map(|(j, k)| r1[j] * r2[k] - r1[k] * r2[j])
    }

    /// Row Hermite form with columns taken in the order `d, c, b, a`, so the
    /// second row always has `d_2 = 0`.
    pub fn normalized(&self) -> Self {
        let rev: Vec<Vec<BigInt>> =
            self.rows.iter().map(|r| r.iter().rev().map(|&x| BigInt::from(x)).collect()).collect();
        let h = hnf(&rev);
        let back = |r: &Vec<BigInt>| -> Row {
            let v: Vec<i64> = r.iter().rev().map(|x| x.to_i64().expect("small entries")).collect();
            [v[0], v[1], v[2], v[3]]
        };
        SubgroupCandidate { rows: [back(&h[0]), back(&h[1])] }
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::from_i64(4, &[self.rows[0].to_vec(), self.rows[1].to_vec()])
            .expect("ambient dimension 4")
    }
}

impl fmt::Display for SubgroupCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?},{:?}", self.rows[0], self.rows[1])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// `M_1 = 1, L_1 = 1`.
    CutsFirstCusp,
    /// `M_2 = 1, L_2 = 1`.
    CutsSecondCusp,
    NotAnomalousAtComplete,
    OtherCandidate(Lattice),
}

fn require_two(th: &TruncatedHolonomy) -> Result<(), AnomalyError> {
    if th.k != 2 {
        return Err(AnomalyError::Cusps(th.k));
    }
    Ok(())
}

/// True iff `1, τ_1, τ_2, τ_1τ_2` are linearly independent over `Q`.
pub fn rational_independence(shapes: &CuspShapePair) -> bool {
    let f = shapes.field();
    if f.dim() < 4 {
        return false;
    }
    let prod = &shapes.tau1 * &shapes.tau2;
    let vecs: Vec<Vec<_>> = [FieldElement::one(f), shapes.tau1.clone(), shapes.tau2.clone(), prod]
        .iter()
        .map(|e| e.coords().to_vec())
        .collect();
    linalg::rank(&vecs) == 4
}

/// An integer relation `c_0 + c_1τ_1 + c_2τ_2 + c_3τ_1τ_2 ≈ 0` found by
/// floating-point search. Heuristic by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub coeffs: [i64; 4],
    pub residual: f64,
    pub heuristic: bool,
}

/// Smallest-norm relation with `|c_j| ≤ bound`, or `None`. Relations are
/// taken up to sign (first nonzero coefficient positive); ties go to the
/// lexicographically largest vector, i.e. towards a nonzero `c_0`.
pub fn relation_search(
    tau1: Complex64,
    tau2: Complex64,
    bound: i64,
    tol: f64,
) -> Result<Option<Relation>, AnomalyError> {
    if bound < 1 {
        return Err(AnomalyError::Bound);
    }
    let basis = [Complex64::new(1.0, 0.0), tau1, tau2, tau1 * tau2];
    let range: Vec<i64> = (-bound..=bound).collect();
    let better = |a: &(i64, [i64; 4]), b: &(i64, [i64; 4])| a.0 < b.0 || (a.0 == b.0 && a.1 > b.1);
    let best = range
        .par_iter()
        .filter_map(|&c0| {
            let mut best: Option<(i64, [i64; 4], f64)> = None;
            for &c1 in &range {
                for &c2 in &range {
                    for &c3 in &range {
                        let c = [c0, c1, c2, c3];
                        let lead = c.iter().find(|&&x| x != 0);
                        if lead.is_none_or(|&x| x < 0) {
                            continue;
                        }
                        let z: Complex64 =
                            c.iter().zip(&basis).map(|(&ci, b)| b * ci as f64).sum();
                        let r = z.norm();
                        if r < tol {
                            let n = c.iter().map(|x| x * x).sum::<i64>();
                            if best.as_ref().is_none_or(|b| better(&(n, c), &(b.0, b.1))) {
                                best = Some((n, c, r));
                            }
                        }
                    }
                }
            }
            best
        })
        .reduce_with(|a, b| if better(&(b.0, b.1), &(a.0, a.1)) { b } else { a });
    Ok(best.map(|(_, coeffs, residual)| Relation { coeffs, residual, heuristic: true }))
}

/// The 2×2 determinant of the `du_1, du_2` coefficients of the two
/// differentials at the complete structure,
/// `(a_1 + b_1τ_1)(c_2 + d_2τ_2) − (c_1 + d_1τ_2)(a_2 + b_2τ_1)`.
pub fn complete_determinant(cand: &SubgroupCandidate, shapes: &CuspShapePair) -> FieldElement {
    let f = shapes.field();
    let int = |n: i64| FieldElement::from_int(f, n);
    let x = |r: &Row| &int(r[0]) + &(&int(r[1]) * &shapes.tau1);
    let y = |r: &Row| &int(r[2]) + &(&int(r[3]) * &shapes.tau2);
    let [r1, r2] = &cand.rows;
    &(&x(r1) * &y(r2)) - &(&y(r1) * &x(r2))
}

/// The two differentials span at most one dimension at the complete
/// structure (exact).
pub fn rank1_at_complete(cand: &SubgroupCandidate, shapes: &CuspShapePair) -> bool {
    complete_determinant(cand, shapes).is_zero()
}

/// `(a + bτ_1) = 0` and `(c + dτ_2) = 0`: the character's differential
/// vanishes at the complete structure.
pub fn containment_check(row: &Row, shapes: &CuspShapePair) -> bool {
    let f = shapes.field();
    let int = |n: i64| FieldElement::from_int(f, n);
    (&int(row[0]) + &(&int(row[1]) * &shapes.tau1)).is_zero()
        && (&int(row[2]) + &(&int(row[3]) * &shapes.tau2)).is_zero()
}

/// The four minors whose vanishing is the rank-1 condition when
/// `1, τ_1, τ_2, τ_1τ_2` are independent: the coefficients of `1`, `τ_1`,
/// `τ_2` and `τ_1τ_2` in the determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Minor {
    /// `a_1c_2 − c_1a_2`
    AC,
    /// `b_1c_2 − c_1b_2`
    BC,
    /// `a_1d_2 − d_1a_2`
    AD,
    /// `b_1d_2 − d_1b_2`
    BD,
}

pub const ALL_MINORS: [Minor; 4] = [Minor::AC, Minor::BC, Minor::AD, Minor::BD];

impl Minor {
    pub fn eval(self, r1: &Row, r2: &Row) -> i64 {
        let (j, k) = match self {
            Minor::AC => (0, 2),
            Minor::BC => (1, 2),
            Minor::AD => (0, 3),
            Minor::BD => (1, 3),
        };
        r1[j] * r2[k] - r1[k] * r2[j]
    }
}

fn columns_vanish(cand: &SubgroupCandidate, cols: [usize; 2]) -> bool {
    cand.rows.iter().all(|r| cols.iter().all(|&c| r[c] == 0))
}

/// Classifies a candidate at the complete structure. Under rational
/// independence the rank-1 condition is the vanishing of all four minors,
/// which forces one of the cusp families; otherwise the exact determinant
/// is tested and a vanishing candidate outside the cusp families is
/// returned as [`Verdict::OtherCandidate`].
pub fn classify_candidate(
    cand: &SubgroupCandidate,
    independent: bool,
    shapes: &CuspShapePair,
) -> Verdict {
    let [r1, r2] = &cand.rows;
    let anomalous = if independent {
        ALL_MINORS.iter().all(|m| m.eval(r1, r2) == 0)
    } else {
        rank1_at_complete(cand, shapes)
    };
    if !anomalous {
        Verdict::NotAnomalousAtComplete
    } else if columns_vanish(cand, [0, 1]) {
        Verdict::CutsSecondCusp
    } else if columns_vanish(cand, [2, 3]) {
        Verdict::CutsFirstCusp
    } else {
        Verdict::OtherCandidate(cand.normalized().lattice())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub bound: i64,
    pub rank2_pairs: u64,
    pub satisfying: u64,
    pub counterexamples: u64,
    pub first_counterexample: Option<SubgroupCandidate>,
}

/// Exhausts unordered pairs of vectors in `[−B, B]^4` of rank 2 and checks
/// "all of `minors` vanish ⟺ both rows have `a = b = 0` or both have
/// `c = d = 0`".
pub fn minor_oracle(bound: i64, minors: &[Minor]) -> Result<OracleReport, AnomalyError> {
    if bound < 1 {
        return Err(AnomalyError::Bound);
    }
    let side = 2 * bound + 1;
    let vecs: Vec<Row> = (0..side.pow(4))
        .map(|mut n| {
            let mut r = [0i64; 4];
            for x in r.iter_mut() {
                *x = n % side - bound;
                n /= side;
            }
            r
        })
        .collect();
    let parts: Vec<(u64, u64, u64, Option<SubgroupCandidate>)> = (0..vecs.len())
        .into_par_iter()
        .map(|i| {
            let (mut pairs, mut sat, mut bad, mut first) = (0u64, 0u64, 0u64, None);
            let r1 = &vecs[i];
            for r2 in &vecs[i + 1..] {
                let c = SubgroupCandidate { rows: [*r1, *r2] };
                if c.plucker().iter().all(|&x| x == 0) {
                    continue;
                }
                pairs += 1;
                let holds = minors.iter().all(|m| m.eval(r1, r2) == 0);
                sat += u64::from(holds);
                let family = columns_vanish(&c, [0, 1]) || columns_vanish(&c, [2, 3]);
                if holds != family {
                    bad += 1;
                    first.get_or_insert(c);
                }
            }
            (pairs, sat, bad, first)
        })
        .collect();
    let mut rep = OracleReport {
        bound,
        rank2_pairs: 0,
        satisfying: 0,
        counterexamples: 0,
        first_counterexample: None,
    };
    for (p, s, b, f) in parts {
        rep.rank2_pairs += p;
        rep.satisfying += s;
        rep.counterexamples += b;
        if rep.first_counterexample.is_none() {
            rep.first_counterexample = f;
        }
    }
    Ok(rep)
}

/// Partial derivatives `[g_{u1}, g_{u2}, h_{u1}, h_{u2}]` truncated to the
/// valid order `order − 1`.
fn partials(th: &TruncatedHolonomy) -> Result<[MultiPoly; 4], AnomalyError> {
    require_two(th)?;
    let s = th.exact_series().ok_or(AnomalyError::NotExact)?;
    let top = th.order.saturating_sub(1) as u32;
    let d = |i: usize, j: usize| s[i].derivative(j).truncate(top);
    Ok([d(0, 0), d(0, 1), d(1, 0), d(1, 1)])
}

/// `X = a + b g_{u1} + d h_{u1}` and `Y = c + b g_{u2} + d h_{u2}`, the
/// `du_1` and `du_2` coefficients of a row's differential.
fn row_forms(row: &Row, p: &[MultiPoly; 4]) -> Result<(MultiPoly, MultiPoly), AnomalyError> {
    let f = p[0].field();
    let c = |n: i64| MultiPoly::constant(FieldElement::from_int(f, n), 2);
    let sc = |q: &MultiPoly, n: i64| q.scale(&FieldElement::from_int(f, n));
    let x = c(row[0]).checked_add(&sc(&p[0], row[1]))?.checked_add(&sc(&p[2], row[3]))?;
    let y = c(row[2]).checked_add(&sc(&p[1], row[1]))?.checked_add(&sc(&p[3], row[3]))?;
    Ok((x, y))
}

/// `X_1 Y_2 − Y_1 X_2` for the given rows, truncated to its valid order
/// `th.order − 1`. With `d_2 = 0` this is
/// `(a_1 + b_1g_{u1} + d_1h_{u1})(c_2 + b_2g_{u2}) − (c_1 + b_1g_{u2} + d_1h_{u2})(a_2 + b_2g_{u1})`.
pub fn condition_series(th: &TruncatedHolonomy, rows: &[Row; 2]) -> Result<MultiPoly, AnomalyError> {
    if th.order < 2 {
        return Err(AnomalyError::Order(th.order));
    }
    let p = partials(th)?;
    let top = th.order as u32 - 1;
    let (x1, y1) = row_forms(&rows[0], &p)?;
    let (x2, y2) = row_forms(&rows[1], &p)?;
    Ok(x1.mul_truncated(&y2, top)?.checked_sub(&y1.mul_truncated(&x2, top)?)?)
}

/// [`condition_series`] of the candidate after normalisation to `d_2 = 0`.
pub fn rank1_condition_series(
    th: &TruncatedHolonomy,
    cand: &SubgroupCandidate,
) -> Result<MultiPoly, AnomalyError> {
    SubgroupCandidate::new(cand.rows)?;
    condition_series(th, &cand.normalized().rows)
}

/// One scalar equation on Plücker coordinates: the coordinate `coord` of the
/// coefficient of `u^exp` in the condition series, scaled to integers.
#[derive(Clone, Debug)]
struct Equation {
    exp: Vec<u32>,
    weights: [i128; 6],
}

/// The condition series is linear in the Plücker vector:
/// `Σ_{j<k} p_{jk} (α_jβ_k − α_kβ_j)` with `α = (1, g_{u1}, 0, h_{u1})` and
/// `β = (0, g_{u2}, 1, h_{u2})`. Equations are listed by monomial degree.
fn plucker_equations(th: &TruncatedHolonomy) -> Result<Vec<Equation>, AnomalyError> {
    let p = partials(th)?;
    let f = p[0].field().clone();
    let top = th.order.saturating_sub(1) as u32;
    let one = MultiPoly::constant(FieldElement::one(&f), 2);
    let zero = MultiPoly::zero(&f, 2);
    let alpha = [one.clone(), p[0].clone(), zero.clone(), p[2].clone()];
    let beta = [zero, p[1].clone(), one, p[3].clone()];
    let mut q = Vec::new();
    for (j, k) in PAIRS {
        q.push(
            alpha[j]
                .mul_truncated(&beta[k], top)?
                .checked_sub(&alpha[k].mul_truncated(&beta[j], top)?)?,
        );
    }
    let mut out = Vec::new();
    for e in crate::nzdata::exponents(2, top as usize) {
        let exp: Vec<u32> = e.iter().map(|&x| x as u32).collect();
        let vals: Vec<FieldElement> = q.iter().map(|qq| qq.coeff(&exp)).collect();
        for coord in 0..f.dim() {
            let rs: Vec<_> = vals.iter().map(|v| v.coords()[coord].clone()).collect();
            if rs.iter().all(Zero::is_zero) {
                continue;
            }
            let den = rs.iter().fold(BigInt::from(1), |a, r| a.lcm(r.denom()));
            let mut weights = [0i128; 6];
            for (w, r) in weights.iter_mut().zip(&rs) {
                let n = r.numer() * (&den / r.denom());
                *w = n.to_i128().ok_or(AnomalyError::Overflow)?;
            }
            out.push(Equation { exp: exp.clone(), weights });
        }
    }
    Ok(out)
}

fn violates(eq: &Equation, p: &[i64; 6]) -> bool {
    eq.weights.iter().zip(p).map(|(w, &x)| w * x as i128).sum::<i128>() != 0
}

/// Coefficients through order `N` used by the hand comparison: the
/// constant term and the pure powers `u_1^j`, `u_2^j`.
fn is_pure(exp: &[u32]) -> bool {
    exp.iter().filter(|&&x| x > 0).count() <= 1
}

/// All normalised candidates with entries in `[−B, B]`: in the column order
/// `d, c, b, a` the rows are in Hermite form (positive pivots, the entry of
/// the first row above the second pivot reduced into `[0, pivot)`).
pub fn enumerate_candidates(bound: i64) -> Vec<SubgroupCandidate> {
    let range: Vec<i64> = (-bound..=bound).collect();
    let mut configs = Vec::new();
    for j1 in 1..4usize {
        for j2 in 0..j1 {
            for piv2 in 1..=bound {
                configs.push((j1, j2, piv2));
            }
        }
    }
    let free = |cols: &[usize]| -> Vec<Vec<i64>> {
        let mut acc = vec![Vec::new()];
        for _ in cols {
            acc = acc
                .into_iter()
                .flat_map(|v| {
                    range.iter().map(move |&x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        acc
    };
    let parts: Vec<Vec<SubgroupCandidate>> = configs
        .par_iter()
        .map(|&(j1, j2, piv2)| {
            let mut out = Vec::new();
            let low2: Vec<usize> = (0..j2).collect();
            let low1: Vec<usize> = (0..j1).filter(|&c| c != j2).collect();
            for f2 in free(&low2) {
                let mut r2 = [0i64; 4];
                r2[j2] = piv2;
                for (&c, &x) in low2.iter().zip(&f2) {
                    r2[c] = x;
                }
                for piv1 in 1..=bound {
                    for above in 0..piv2 {
                        for f1 in free(&low1) {
                            let mut r1 = [0i64; 4];
                            r1[j1] = piv1;
                            r1[j2] = above;
                            for (&c, &x) in low1.iter().zip(&f1) {
                                r1[c] = x;
                            }
                            out.push(SubgroupCandidate { rows: [r1, r2] });
                        }
                    }
                }
            }
            out
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// A lattice that satisfies the hand-comparison equations but fails the
/// full coefficient test at `exp`.
#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancy {
    pub lattice: Lattice,
    pub exp: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSearch {
    pub bound: i64,
    pub order: usize,
    pub enumerated: usize,
    /// Saturated lattices whose condition series vanishes through order `N`.
    pub lattices: Vec<Lattice>,
    /// Saturated lattices passing only the constant and pure-power
    /// coefficients through order `N`.
    pub pure_power_lattices: Vec<Lattice>,
    pub discrepancies: Vec<Discrepancy>,
    /// Fewer than two orders of equations: the solution set is
    /// under-determined.
    pub low_confidence: bool,
}

fn sorted_unique(mut v: Vec<Lattice>) -> Vec<Lattice> {
    v.sort_by(|a, b| a.rows.cmp(&b.rows));
    v.dedup();
    v
}

/// Normalised candidates with entries `≤ B` whose condition series has all
/// coefficients through order `N` equal to zero, saturated and
/// deduplicated. Completeness is relative to the box only.
pub fn solve_candidates(
    th: &TruncatedHolonomy,
    bound: i64,
    order: usize,
) -> Result<CandidateSearch, AnomalyError> {
    require_two(th)?;
    if bound < 1 {
        return Err(AnomalyError::Bound);
    }
    let valid = th.order.saturating_sub(1);
    if th.order == 0 || order > valid {
        return Err(AnomalyError::OrderTooHigh(order, valid));
    }
    let eqs: Vec<Equation> = plucker_equations(th)?
        .into_iter()
        .filter(|e| e.exp.iter().sum::<u32>() as usize <= order)
        .collect();
    let cands = enumerate_candidates(bound);
    let hits: Vec<(Lattice, bool)> = cands
        .par_iter()
        .filter_map(|c| {
            let p = c.plucker();
            let pure = !eqs.iter().any(|e| is_pure(&e.exp) && violates(e, &p));
            if !pure {
                return None;
            }
            let full = !eqs.iter().any(|e| violates(e, &p));
            Some((c.lattice().saturation(), full))
        })
        .collect();
    let lattices = sorted_unique(hits.iter().filter(|h| h.1).map(|h| h.0.clone()).collect());
    let pure_power_lattices = sorted_unique(hits.into_iter().map(|h| h.0).collect());
    let discrepancies = pure_power_lattices
        .iter()
        .filter(|l| !lattices.contains(l))
        .map(|l| {
            let c = lattice_candidate(l);
            let p = c.plucker();
            let e = eqs.iter().find(|e| violates(e, &p)).expect("a failing coefficient");
            Discrepancy { lattice: l.clone(), exp: e.exp.clone() }
        })
        .collect();
    Ok(CandidateSearch {
        bound,
        order,
        enumerated: cands.len(),
        lattices,
        pure_power_lattices,
        discrepancies,
        low_confidence: order < 2,
    })
}

fn lattice_candidate(l: &Lattice) -> SubgroupCandidate {
    let row = |r: &Vec<BigInt>| -> Row {
        let v: Vec<i64> = r.iter().map(|x| x.to_i64().expect("small entries")).collect();
        [v[0], v[1], v[2], v[3]]
    };
    SubgroupCandidate { rows: [row(&l.rows[0]), row(&l.rows[1])] }
}

/// Bundled exact series: `"pretzel"` (the two-cusped example with equal
/// cusp shapes `i`, through order 5), `"sgi"` (`v_i = iu_i + u_i^3`) and
/// `"planted"` (`v_i = iu_i + u_i^3 + 3u_iu_j^2`, where both diagonal
/// families vanish).
pub fn bundled_series(name: &str) -> Option<TruncatedHolonomy> {
    let text = match name {
        "pretzel" => include_str!("../../data/pretzel_series.json"),
        "sgi" => include_str!("../../data/sgi_series.json"),
        "planted" => include_str!("../../data/planted_series.json"),
        _ => return None,
    };
    Some(crate::nzdata::parse_series(text).expect("bundled series parses"))
}

/// `span(e_1, e_2)` (first cusp) and `span(e_3, e_4)` (second cusp).
pub fn cusp_families() -> [Lattice; 2] {
    [
        Lattice::from_i64(4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).expect("valid"),
        Lattice::from_i64(4, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).expect("valid"),
    ]
}

/// A mixed term: a monomial of `v_1` containing `u_2`, or of `v_2`
/// containing `u_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// 0 for `v_1`, 1 for `v_2`.
    pub series: usize,
    pub exp: Vec<u32>,
    pub value: Complex64,
    pub exact: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SgiStatus {
    NotSgi(Witness),
    PossiblySgiToOrder(usize),
}

/// Lowest-degree mixed term (ties: `v_1` first, then graded order), else
/// SGI cannot be excluded at this truncation.
pub fn sgi_detect(th: &TruncatedHolonomy) -> Result<SgiStatus, AnomalyError> {
    require_two(th)?;
    let mut best: Option<(u32, usize, Monomial)> = None;
    for i in 0..2 {
        let other = 1 - i;
        for (e, c) in th.terms(i) {
            if e[other] == 0 || c.norm() == 0.0 {
                continue;
            }
            let key = (e.iter().sum::<u32>(), i, Monomial(e.clone()));
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    Ok(match best {
        Some((_, i, m)) => {
            let exact = th.exact_series().map(|s| s[i].coeff(&m.0).to_string());
            SgiStatus::NotSgi(Witness { series: i, value: th.coeff(i, &m.0), exp: m.0, exact })
        }
        None => SgiStatus::PossiblySgiToOrder(th.order),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simplicity {
    SimpleToOrder(usize),
    NonSimpleSgi,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplicityReport {
    pub order: usize,
    pub search: CandidateSearch,
    pub sgi_status: SgiStatus,
    pub verdict: Simplicity,
    /// Candidate lattices outside the two cusp families.
    pub other: Vec<Lattice>,
}

/// Combines [`solve_candidates`] and [`sgi_detect`]: no SGI witness means
/// non-simple by SGI; any surviving lattice outside the cusp families is
/// inconclusive; otherwise simple to order `N` (relative to the box).
///
/// With the cusp families as the only candidates, infinitely many anomalous
/// subvarieties would force the two cusps to be strongly geometrically
/// isolated, which the witness rules out.
pub fn simplicity_verdict(
    th: &TruncatedHolonomy,
    bound: i64,
    order: usize,
) -> Result<SimplicityReport, AnomalyError> {
    let search = solve_candidates(th, bound, order)?;
    let sgi_status = sgi_detect(th)?;
    let fam = cusp_families();
    let other: Vec<Lattice> =
        search.lattices.iter().filter(|l| !fam.contains(l)).cloned().collect();
    let verdict = match (&sgi_status, other.is_empty()) {
        (SgiStatus::PossiblySgiToOrder(_), _) => Simplicity::NonSimpleSgi,
        (SgiStatus::NotSgi(_), false) => Simplicity::Inconclusive,
        (SgiStatus::NotSgi(_), true) => Simplicity::SimpleToOrder(order),
    };
    Ok(SimplicityReport { order, search, sgi_status, verdict, other })
}

fn lattice_json(l: &Lattice) -> Value {
    Value::Array(
        l.rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| json!(x.to_i64().unwrap_or(0))).collect()))
            .collect(),
    )
}

impl SimplicityReport {
    pub fn to_json(&self) -> Value {
        let sgi = match &self.sgi_status {
            SgiStatus::NotSgi(w) => json!({
                "status": "NotSGI",
                "witness": {
                    "series": format!("v{}", w.series + 1),
                    "exp": w.exp,
                    "value": [w.value.re, w.value.im],
                    "exact": w.exact,
                }
            }),
            SgiStatus::PossiblySgiToOrder(n) => {
                json!({ "status": format!("PossiblySGIToOrder{n}") })
            }
        };
        let verdict = match &self.verdict {
            Simplicity::SimpleToOrder(n) => format!("SimpleToOrder{n}"),
            Simplicity::NonSimpleSgi => "NonSimpleSGI".into(),
            Simplicity::Inconclusive => "Inconclusive".into(),
        };
        let s = &self.search;
        json!({
            "order": self.order,
            "box": s.bound,
            "enumerated": s.enumerated,
            "candidates_found": s.lattices.iter().map(lattice_json).collect::<Vec<_>>(),
            "pure_power_candidates": s.pure_power_lattices.iter().map(lattice_json).collect::<Vec<_>>(),
            "discrepancies": s.discrepancies.iter().map(|d| json!({
                "lattice": lattice_json(&d.lattice),
                "failing_exp": d.exp,
            })).collect::<Vec<_>>(),
            "other_candidates": self.other.iter().map(lattice_json).collect::<Vec<_>>(),
            "low_confidence": s.low_confidence,
            "sgi": sgi,
            "verdict": verdict,
            "scope": format!("no other candidates with entries <= {}", s.bound),
        })
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "verdict: {}\norder: {}  box: {}  candidates enumerated: {}\n",
            self.to_json()["verdict"].as_str().unwrap_or(""),
            self.order,
            self.search.bound,
            self.search.enumerated
        );
        match &self.sgi_status {
            SgiStatus::NotSgi(w) => out.push_str(&format!(
                "not SGI: v{} has mixed term u^{:?} with coefficient {}\n",
                w.series + 1,
                w.exp,
                w.exact.clone().unwrap_or_else(|| w.value.to_string())
            )),
            SgiStatus::PossiblySgiToOrder(n) => {
                out.push_str(&format!("no mixed terms through order {n}: possibly SGI\n"))
            }
        }
        out.push_str(&format!("vanishing lattices: {}\n", self.search.lattices.len()));
        for l in &self.search.lattices {
            out.push_str(&format!("  {}\n", lattice_json(l)));
        }
        for d in &self.search.discrepancies {
            out.push_str(&format!(
                "  passes constant/pure-power coefficients only: {} (fails at u^{:?})\n",
                lattice_json(&d.lattice),
                d.exp
            ));
        }
        out
    }
}
