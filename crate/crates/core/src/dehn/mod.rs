//! Heights of Dehn filling points on a plane curve `f(M, L) = 0`: the
//! specialisation `g(t) = f(t^{-q}, t^p)`, certified filling points, core
//! traces, the height chain `H(t)^deg ≤ M(g) ≤ L(g) ≤ L(f)` together with the
//! uniform bound `2 L(f)^2`, and coefficient surveys.

mod survey;
#[cfg(test)]
mod tests;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{parse_rational, trace_resultant, ExactError, FieldElement, IntPoly};
use crate::heights::{
    factor_with, height_of, length, mahler_measure, trace_degree_bounds, trace_transform,
    AlgebraicNumber, Factor, Factorization, FactorOptions, HeightBound, HeightError,
    TraceTransform,
};
use crate::roots::{find_roots, refine, unit_circle_test, CircleVerdict, RootBox, RootError};

pub use survey::{coefficients, survey, survey_with, SurveyResult, SurveyRow, SurveySummary, TrendBin};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DehnError {
    #[error("malformed curve: {0}")]
    Curve(String),
    #[error("curve does not pass through (1, 1): f(1, 1) = {0}")]
    NotThroughOne(BigInt),
    #[error("filling coefficients ({0}, {1}) are not coprime")]
    NotCoprime(i64, i64),
    #[error("specialisation at ({0}, {1}) is identically zero")]
    ZeroSpecialization(i64, i64),
    #[error("recovered t fails t^-q = M, t^p = L")]
    NotOnLine,
    #[error("invalid bound: {0}")]
    Bound(String),
    #[error("empty curve list")]
    Empty,
    #[error(transparent)]
    Height(#[from] HeightError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl From<RootError> for DehnError {
    fn from(e: RootError) -> Self {
        DehnError::Height(HeightError::Root(e))
    }
}

impl DehnError {
    /// True when the failure is a precision cap rather than bad input.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            DehnError::Height(HeightError::PrecisionExhausted(_))
                | DehnError::Height(HeightError::Root(RootError::PrecisionExhausted { .. }))
        )
    }
}

#[derive(Deserialize, Serialize)]
struct TermFile {
    coeff: String,
    exp: [i64; 2],
}

#[derive(Deserialize, Serialize)]
struct CurveFile {
    #[serde(default)]
    name: String,
    #[serde(default)]
    provenance: String,
    #[serde(default)]
    symmetric: bool,
    terms: Vec<TermFile>,
}

/// An integer Laurent polynomial `f(M, L)` with metadata. `symmetric`
/// declares `f(1/M, 1/L) ∝ f(M, L)`, which gates the `t ↦ 1/t` check.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurveSpec {
    pub name: String,
    pub provenance: String,
    pub symmetric: bool,
    /// `(coefficient, [exponent of M, exponent of L])`, merged and nonzero.
    pub terms: Vec<(BigInt, [i64; 2])>,
}

impl PlaneCurveSpec {
    /// Validates `f(1, 1) = 0` and primitivity.
    pub fn new(
        name: &str,
        provenance: &str,
        symmetric: bool,
        terms: Vec<(BigInt, [i64; 2])>,
    ) -> Result<Self, DehnError> {
        let mut merged: std::collections::BTreeMap<[i64; 2], BigInt> = Default::default();
        for (c, e) in terms {
            *merged.entry(e).or_insert_with(BigInt::zero) += c;
        }
        let terms: Vec<(BigInt, [i64; 2])> =
            merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (c, e)).collect();
        if terms.is_empty() {
            return Err(DehnError::Curve("zero polynomial".into()));
        }
        let at_one: BigInt = terms.iter().map(|(c, _)| c).sum();
        if !at_one.is_zero() {
            return Err(DehnError::NotThroughOne(at_one));
        }
        let content = terms.iter().fold(BigInt::zero(), |g, (c, _)| g.gcd(c));
        if !content.is_one() {
            return Err(DehnError::Curve(format!("coefficients share the factor {content}")));
        }
        Ok(PlaneCurveSpec {
            name: name.to_string(),
            provenance: provenance.to_string(),
            symmetric,
            terms,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, DehnError> {
        let f: CurveFile =
            serde_json::from_str(text).map_err(|e| DehnError::Curve(e.to_string()))?;
        let mut terms = Vec::new();
        for t in f.terms {
            let c = parse_rational(&t.coeff)?;
            if !c.is_integer() {
                return Err(DehnError::Curve(format!("non-integer coefficient {}", t.coeff)));
            }
            terms.push((c.to_integer(), t.exp));
        }
        Self::new(&f.name, &f.provenance, f.symmetric, terms)
    }

    pub fn to_json(&self) -> String {
        let f = CurveFile {
            name: self.name.clone(),
            provenance: self.provenance.clone(),
            symmetric: self.symmetric,
            terms: self
                .terms
                .iter()
                .map(|(c, e)| TermFile { coeff: c.to_string(), exp: *e })
                .collect(),
        };
        serde_json::to_string_pretty(&f).expect("curve serialises")
    }

    /// `L(f)`.
    pub fn length(&self) -> BigInt {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    /// The bundled curves: `demo` (`L - M² - M + 1`) and `figure-eight`.
    pub fn bundled(name: &str) -> Option<Self> {
        let text = match name {
            "demo" => include_str!("../../data/demo_curve.json"),
            "figure-eight" => include_str!("../../data/figure_eight_curve.json"),
            _ => return None,
        };
        Some(Self::from_json(text).expect("bundled curve is valid"))
    }
}

/// Coprime surgery coefficient `(p, q)`, filling by `M^p L^q = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FillingCoefficient {
    pub p: i64,
    pub q: i64,
}

impl FillingCoefficient {
    pub fn new(p: i64, q: i64) -> Result<Self, DehnError> {
        if p.gcd(&q) != 1 {
            return Err(DehnError::NotCoprime(p, q));
        }
        Ok(FillingCoefficient { p, q })
    }

    /// Representative of `{(p, q), (-p, -q)}` with `q > 0`, or `(1, 0)`.
    pub fn canonical(self) -> Self {
        if self.q < 0 || (self.q == 0 && self.p < 0) {
            FillingCoefficient { p: -self.p, q: -self.q }
        } else {
            self
        }
    }

    /// Bézout pair `(x, y)` with `-q x + p y = 1`.
    pub fn bezout(&self) -> (i64, i64) {
        let e = (-self.q).extended_gcd(&self.p);
        (e.x * e.gcd, e.y * e.gcd)
    }
}

/// `g(t) = f(t^{-q}, t^p)`, cleared of negative powers and of powers of `t`,
/// primitive with positive leading coefficient.
pub fn specialize(curve: &PlaneCurveSpec, c: FillingCoefficient) -> Result<IntPoly, DehnError> {
    let FillingCoefficient { p, q } = FillingCoefficient::new(c.p, c.q)?;
    let exps: Vec<i64> = curve.terms.iter().map(|(_, [a, b])| -q * a + p * b).collect();
    let lo = *exps.iter().min().expect("nonempty curve");
    let hi = *exps.iter().max().expect("nonempty curve");
    let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize + 1];
    for ((cf, _), e) in curve.terms.iter().zip(&exps) {
        coeffs[(e - lo) as usize] += cf;
    }
    let g = IntPoly::new(coeffs);
    if g.is_zero() {
        return Err(DehnError::ZeroSpecialization(p, q));
    }
    let g = g.shift_down(g.x_valuation()).primitive_part();
    Ok(if g.lc().is_negative() { g.scale(&BigInt::from(-1)) } else { g })
}

/// Options used by the dehn pipeline: complete factorisation up to degree
/// 24, degree exclusion up to 8 beyond that.
/// Relative width requested for `M(g)` and `H(t)`.
pub const PIPELINE_TOL: f64 = 1e-8;

pub fn pipeline_options() -> FactorOptions {
    FactorOptions { root_radius: 1e-9, num_primes: 40, ..FactorOptions::default() }
}

/// Where a root lies relative to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CirclePosition {
    Inside,
    Outside,
    /// Certified `|t| = 1`.
    On,
    Undecidable,
}

/// One conjugacy class of candidate filling points: a non-cyclotomic factor
/// of `g` and the positions of its roots.
#[derive(Clone, Debug)]
pub struct FillingClass {
    pub factor: Factor,
    pub positions: Vec<CirclePosition>,
}

impl FillingClass {
    /// Indices of roots certified off the unit circle.
    pub fn off_circle(&self) -> Vec<usize> {
        (0..self.positions.len())
            .filter(|&i| matches!(self.positions[i], CirclePosition::Inside | CirclePosition::Outside))
            .collect()
    }

    /// Off-circle root closest to `1`.
    pub fn nearest_one(&self) -> Option<usize> {
        self.off_circle().into_iter().min_by(|&a, &b| {
            let da = (self.factor.roots[a].center_c64() - 1.0).norm();
            let db = (self.factor.roots[b].center_c64() - 1.0).norm();
            da.total_cmp(&db)
        })
    }

    pub fn number(&self, index: usize) -> AlgebraicNumber {
        AlgebraicNumber::from_factor(&self.factor, index)
    }
}

/// The factor data of one specialisation.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub coeff: FillingCoefficient,
    pub g: IntPoly,
    pub factorization: Factorization,
    pub classes: Vec<FillingClass>,
    pub mahler: HeightBound,
    pub length: BigInt,
}

/// Specialises, factors and locates all roots of `g` relative to the circle.
pub fn analyze(
    curve: &PlaneCurveSpec,
    c: FillingCoefficient,
    opts: &FactorOptions,
) -> Result<Specialization, DehnError> {
    let g = specialize(curve, c)?;
    let mahler = mahler_measure(&g, PIPELINE_TOL)?;
    let length = length(&g);
    let factorization = if g.deg() == 0 {
        Factorization { content: g.lc(), factors: Vec::new() }
    } else {
        factor_with(&g, opts)?
    };
    let mut classes = Vec::new();
    for f in &factorization.factors {
        if f.cyclotomic.is_some() || f.poly.deg() == 0 {
            continue;
        }
        debug_assert!(g.div_exact(&f.poly).is_some());
        if g.div_exact(&f.poly).is_none() {
            return Err(DehnError::Curve("factor does not divide g".into()));
        }
        let mut factor = f.clone();
        let mut positions = Vec::with_capacity(factor.roots.len());
        for i in 0..factor.roots.len() {
            let (pos, b) = locate(&factor, i)?;
            factor.roots[i] = b;
            positions.push(pos);
        }
        classes.push(FillingClass { factor, positions });
    }
    Ok(Specialization { coeff: c, g, factorization, classes, mahler, length })
}

/// Unit-circle position of the `i`-th root of `f`, refining as needed. An
/// irreducible reciprocal factor may have roots exactly on the circle; these
/// are detected through `w = t + 1/t` being real with `|w| < 2`.
fn locate(f: &Factor, i: usize) -> Result<(CirclePosition, RootBox), DehnError> {
    let mut b = f.roots[i].clone();
    for _ in 0..4 {
        match unit_circle_test(&b) {
            CircleVerdict::InsideUnit => return Ok((CirclePosition::Inside, b)),
            CircleVerdict::OutsideUnit => return Ok((CirclePosition::Outside, b)),
            CircleVerdict::Undecidable => {}
        }
        if f.irreducible && f.poly.is_reciprocal() && on_circle(&f.poly, &b)? {
            return Ok((CirclePosition::On, b));
        }
        let r = b.radius_f64() * 1e-6;
        b = match refine(&f.poly, &b, r) {
            Ok(nb) => nb,
            Err(RootError::PrecisionExhausted { .. }) => break,
            Err(e) => return Err(e.into()),
        };
    }
    Ok((CirclePosition::Undecidable, b))
}

/// For `t` a root of the irreducible reciprocal `f` in `b`: is `w = t + 1/t`
/// certified real with `|w| < 2`? A root disk of the real polynomial `P`
/// that contains its own mirror image and no other root pins a real root.
fn on_circle(f: &IntPoly, b: &RootBox) -> Result<bool, DehnError> {
    let p = trace_resultant(f).squarefree_part();
    let wroots = find_roots(&p, (b.radius_f64() * 4.0).max(1e-300))?;
    let td = b.disk();
    let Some(inv) = td.recip() else { return Ok(false) };
    let wd = td.add(&inv);
    let hits: Vec<&RootBox> = wroots.iter().filter(|r| r.disk().intersects(&wd)).collect();
    if hits.len() != 1 {
        return Ok(false);
    }
    let d = hits[0].disk();
    let mirror = crate::roots::interval::Disk::new(Complex64::new(d.c.re, 0.0), d.r + d.c.im.abs());
    let alone = wroots
        .iter()
        .filter(|r| r.disk().intersects(&mirror))
        .count()
        == 1;
    Ok(alone && d.c.re.abs() + d.r + d.c.im.abs() < 2.0)
}

/// A certified root `t` of `g` off the unit circle.
#[derive(Clone, Debug)]
pub struct FillingPoint {
    pub t: AlgebraicNumber,
    pub coeff: FillingCoefficient,
    /// Index of the conjugacy class within the specialisation.
    pub class: usize,
    pub position: CirclePosition,
}

impl FillingPoint {
    /// `(M, L) = (t^{-q}, t^p)`, numerically.
    pub fn point(&self) -> (Complex64, Complex64) {
        let t = self.t.approx();
        (t.powi(-self.coeff.q as i32), t.powi(self.coeff.p as i32))
    }
}

/// All filling points of `c`: roots of `g` off the unit circle, each with
/// its (certified where possible) minimal polynomial.
pub fn filling_points(
    curve: &PlaneCurveSpec,
    c: FillingCoefficient,
) -> Result<Vec<FillingPoint>, DehnError> {
    let sp = analyze(curve, c, &pipeline_options())?;
    Ok(points_of(&sp))
}

pub fn points_of(sp: &Specialization) -> Vec<FillingPoint> {
    let mut out = Vec::new();
    for (ci, cl) in sp.classes.iter().enumerate() {
        for i in cl.off_circle() {
            out.push(FillingPoint {
                t: cl.number(i),
                coeff: sp.coeff,
                class: ci,
                position: cl.positions[i],
            });
        }
    }
    out
}

/// `t = M^x L^y` with `-q x + p y = 1`, verified by `t^{-q} = M`, `t^p = L`.
pub fn recover_t(
    m: &FieldElement,
    l: &FieldElement,
    c: FillingCoefficient,
) -> Result<FieldElement, DehnError> {
    let c = FillingCoefficient::new(c.p, c.q)?;
    let (x, y) = c.bezout();
    let t = m.pow(x)?.checked_mul(&l.pow(y)?)?;
    if &t.pow(-c.q)? != m || &t.pow(c.p)? != l {
        return Err(DehnError::NotOnLine);
    }
    Ok(t)
}

/// Core trace `s = ε(t^{1/2} + t^{-1/2})`; `s` is the branch with larger
/// real part and `-s` the other, both roots of `s_poly`.
#[derive(Clone, Debug)]
pub struct CoreTrace {
    pub s: AlgebraicNumber,
    pub neg_s: RootBox,
    pub s_poly: IntPoly,
    pub height: HeightBound,
    pub degree_bounds: (usize, usize),
    pub transform: TraceTransform,
}

pub fn core_trace(fp: &FillingPoint) -> Result<CoreTrace, DehnError> {
    if fp.position == CirclePosition::On {
        return Err(DehnError::Curve("|t| = 1 is not a filling point".into()));
    }
    let tt = trace_transform(&fp.t, &pipeline_options())?;
    Ok(CoreTrace {
        s: tt.s.clone(),
        neg_s: tt.neg_s_box.clone(),
        s_poly: tt.s_poly.clone(),
        height: tt.s_height,
        degree_bounds: trace_degree_bounds(&tt),
        transform: tt,
    })
}

/// `2 L(f)^2`.
pub fn hodgson_bound(curve: &PlaneCurveSpec) -> BigInt {
    let l = curve.length();
    BigInt::from(2) * &l * &l
}

/// `max_i 2 L(f_i)^2` over one curve per cusp.
pub fn sgi_bound(curves: &[PlaneCurveSpec]) -> Result<BigInt, DehnError> {
    bound_from_lengths(&curves.iter().map(PlaneCurveSpec::length).collect::<Vec<_>>())
}

/// `max_i 2 L_i^2`.
pub fn bound_from_lengths(lengths: &[BigInt]) -> Result<BigInt, DehnError> {
    lengths.iter().map(|l| BigInt::from(2) * l * l).max().ok_or(DehnError::Empty)
}

/// Heights attached to one conjugacy class.
#[derive(Clone, Debug)]
pub struct ClassHeights {
    pub ht: HeightBound,
    /// Degree of the class polynomial; the true degree of `t` when `exact`.
    pub deg_t: usize,
    pub deg_t_exact: bool,
    pub min_deg_t: usize,
    pub hs: HeightBound,
    /// Certified range of `deg Q(s)`.
    pub deg_s: (usize, usize),
}

/// Heights of the class through root `index`. Uncertified classes get
/// `H(s) ≤ 2 H(t)`, from `s = t^{1/2} + t^{-1/2}` and `H(a + b) ≤ 2 H(a) H(b)`.
pub fn class_heights(cl: &FillingClass, index: usize) -> Result<ClassHeights, DehnError> {
    let t = cl.number(index);
    let ht = height_of(&t, PIPELINE_TOL)?;
    let deg_t = t.degree();
    if t.irreducible {
        let tt = trace_transform(&t, &pipeline_options())?;
        return Ok(ClassHeights {
            ht,
            deg_t,
            deg_t_exact: true,
            min_deg_t: deg_t,
            hs: tt.s_height,
            deg_s: trace_degree_bounds(&tt),
        });
    }
    let up = (2.0 * ht.upper).next_up();
    Ok(ClassHeights {
        ht,
        deg_t,
        deg_t_exact: false,
        min_deg_t: t.min_degree,
        hs: HeightBound { lower: 1.0, upper: up, exact: false },
        deg_s: (t.min_degree.div_ceil(2), 2 * deg_t),
    })
}

/// Values entering the height chain for one class.
#[derive(Clone, Debug)]
pub struct ChainEntry {
    pub class: usize,
    pub heights: ClassHeights,
    pub mahler_g: HeightBound,
    pub length_g: BigInt,
    pub length_f: BigInt,
    pub hodgson: BigInt,
}

/// Names of the failed inequalities, using interval endpoints only:
/// `H(t)^deg ≤ M(g)`, `M(g) ≤ L(g)`, `L(g) ≤ L(f)`, `H(s) ≤ 2 H(t)^2` and
/// `H(s) ≤ 2 L(f)^2`.
pub fn check_entry(e: &ChainEntry) -> Vec<&'static str> {
    let mut bad = Vec::new();
    let h = &e.heights;
    // H(t)^deg, rounded down
    let lhs = (h.deg_t as f64 * h.ht.lower.ln()) * (1.0 - 4.0 * f64::EPSILON);
    if !(lhs <= e.mahler_g.upper.ln()) {
        bad.push("H(t)^deg <= M(g)");
    }
    let lg = big_f64_down(&e.length_g);
    if !(e.mahler_g.upper <= lg) {
        bad.push("M(g) <= L(g)");
    }
    if e.length_g > e.length_f {
        bad.push("L(g) <= L(f)");
    }
    let ht = if h.deg_t_exact { h.ht.lower } else { h.ht.upper };
    if !(h.hs.upper <= 2.0 * ht * ht) {
        bad.push("H(s) <= 2 H(t)^2");
    }
    if !(h.hs.upper <= big_f64_down(&e.hodgson)) {
        bad.push("H(s) <= 2 L(f)^2");
    }
    bad
}

fn big_f64_down(x: &BigInt) -> f64 {
    let v = x.to_f64().unwrap_or(f64::INFINITY);
    if BigInt::from(v as i128) > *x { v.next_down() } else { v }
}

/// The chain for one coefficient.
#[derive(Clone, Debug)]
pub struct ChainReport {
    pub coeff: FillingCoefficient,
    pub g: IntPoly,
    pub entries: Vec<ChainEntry>,
    pub points: usize,
    pub failures: Vec<String>,
    /// Roots whose position relative to the circle stayed undecided.
    pub undecided: usize,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_height_chain(
    curve: &PlaneCurveSpec,
    c: FillingCoefficient,
) -> Result<ChainReport, DehnError> {
    let sp = analyze(curve, c, &pipeline_options())?;
    chain_for(curve, &sp)
}

pub fn chain_for(curve: &PlaneCurveSpec, sp: &Specialization) -> Result<ChainReport, DehnError> {
    let length_f = curve.length();
    let hodgson = hodgson_bound(curve);
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    let mut points = 0;
    let mut undecided = 0;
    for (ci, cl) in sp.classes.iter().enumerate() {
        undecided += cl.positions.iter().filter(|p| **p == CirclePosition::Undecidable).count();
        let Some(rep) = cl.nearest_one() else { continue };
        points += cl.off_circle().len();
        let heights = class_heights(cl, rep)?;
        let e = ChainEntry {
            class: ci,
            heights,
            mahler_g: sp.mahler,
            length_g: sp.length.clone(),
            length_f: length_f.clone(),
            hodgson: hodgson.clone(),
        };
        for b in check_entry(&e) {
            failures.push(format!("class {ci}: {b}"));
        }
        entries.push(e);
    }
    if curve.symmetric {
        for (ci, cl) in sp.classes.iter().enumerate() {
            let rev = normalize(&cl.factor.poly.reverse());
            if !sp.classes.iter().any(|o| o.factor.poly == rev) {
                failures.push(format!("class {ci}: 1/t has no class although the curve is symmetric"));
            }
        }
    }
    Ok(ChainReport { coeff: sp.coeff, g: sp.g.clone(), entries, points, failures, undecided })
}

fn normalize(f: &IntPoly) -> IntPoly {
    let f = f.primitive_part();
    if f.lc().is_negative() { f.scale(&BigInt::from(-1)) } else { f }
}
