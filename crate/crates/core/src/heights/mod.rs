//! Lengths, Mahler measures and heights of algebraic numbers, with certified
//! interval bounds, plus the `t -> t + 1/t -> s` minimal-polynomial
//! transforms used for core traces.

pub mod cyclotomic;
pub mod factor;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::exactnum::{trace_resultant, IntPoly, Rational};
use crate::roots::dyadic::Dyadic;
use crate::roots::interval::{Disk, Iv};
use crate::roots::{find_roots, refine, RootBox, RootError};
pub use factor::{factor_smalldeg, factor_with, Factor, FactorOptions, Factorization};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeightError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("precision exhausted; best interval [{}, {}]", .0.lower, .0.upper)]
    PrecisionExhausted(HeightBound),
    #[error("root selection is ambiguous: {0}")]
    Ambiguous(String),
    #[error("minimal polynomial not certified irreducible")]
    NotCertified,
}

/// Certified enclosure `[lower, upper]` of a height or Mahler measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightBound {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
}

impl HeightBound {
    pub const ONE: HeightBound = HeightBound { lower: 1.0, upper: 1.0, exact: true };

    /// From an enclosure of the logarithm; values are clamped at 1, which
    /// every height and Mahler measure of a nonzero integer polynomial meets.
    fn from_log(l: Iv, exact: bool) -> HeightBound {
        let e = if l.lo == 0.0 && l.hi == 0.0 { Iv::point(1.0) } else { l.exp() };
        HeightBound { lower: e.lo.max(1.0), upper: e.hi.max(1.0), exact }
    }

    pub fn rel_width(&self) -> f64 {
        self.upper / self.lower - 1.0
    }

    /// `self^(1/k)`, outward rounded.
    pub fn root(&self, k: usize) -> HeightBound {
        if k == 1 {
            return *self;
        }
        let l = Iv::new(self.lower, self.upper).ln().scale(1.0 / k as f64);
        let l = Iv::new(l.lo.next_down(), l.hi.next_up());
        HeightBound::from_log(l, self.exact)
    }
}

/// `L(f) = Σ |a_i|`.
pub fn length(f: &IntPoly) -> BigInt {
    f.length()
}

/// Enclosure of `ln|n|` for a nonzero integer; exact 0 for units.
fn ln_int(n: &BigInt) -> Iv {
    let a = n.abs();
    if a.is_one() {
        return Iv::point(0.0);
    }
    let d = Dyadic::from_int(a);
    Iv::new(d.to_f64_down(), d.to_f64_up()).ln()
}

/// Enclosure of `ln max(|z|, 1)` over a disk.
fn ln_max1(d: &Disk) -> Iv {
    let a = d.abs();
    if a.hi <= 1.0 {
        Iv::point(0.0)
    } else {
        a.max1().ln()
    }
}

/// `ln(|lc| ∏ max(|α|, 1))` over the given root boxes.
fn log_mahler(lc: &BigInt, roots: &[RootBox]) -> Iv {
    roots.iter().fold(ln_int(lc), |acc, b| {
        let t = ln_max1(&b.disk());
        if t.lo == 0.0 && t.hi == 0.0 {
            acc
        } else {
            acc.add(t)
        }
    })
}

/// Refines the boxes lying outside or on the unit circle (the only ones that
/// contribute) until the enclosure of `ln M` has width ≤ `tolw`.
fn refine_log_mahler(f: &IntPoly, roots: &mut [RootBox], tolw: f64) -> Result<Iv, HeightError> {
    let mut l = log_mahler(&f.lc(), roots);
    for _ in 0..8 {
        if l.width() <= tolw {
            return Ok(l);
        }
        for b in roots.iter_mut() {
            if b.disk().abs().hi > 1.0 {
                // each box widens ln M by at most about 2r / |α| ≤ 2r
                let r = (b.radius_f64() * 0.5).min(tolw / (4.0 * f.deg() as f64));
                *b = refine(f, b, r)?;
            }
        }
        l = log_mahler(&f.lc(), roots);
    }
    if l.width() <= tolw {
        Ok(l)
    } else {
        Err(HeightError::PrecisionExhausted(HeightBound::from_log(l, false)))
    }
}

fn log_tol(tol: f64) -> f64 {
    // relative width tol on M corresponds to absolute width ln(1 + tol) on ln M
    (tol.max(1e-15)).ln_1p() * 0.5
}

/// Certified enclosure of `M(f) = |a_n| ∏ max(|α_i|, 1)` with relative width
/// at most `tol`. Cyclotomic factors are removed exactly (they contribute 1).
pub fn mahler_measure(f: &IntPoly, tol: f64) -> Result<HeightBound, HeightError> {
    if f.is_zero() {
        return Err(HeightError::ZeroPolynomial);
    }
    let (c, prim) = f.content_primitive();
    let mut total = ln_int(&c);
    let v = prim.x_valuation();
    let parts = prim.shift_down(v).squarefree_decomposition();
    let tolw = log_tol(tol) / (parts.len().max(1) as f64 * 4.0);
    for (s, mult) in parts {
        // refine_log_mahler tightens only the boxes that contribute
        let boxes = find_roots(&s, 1e-9)?;
        let split = cyclotomic::split_cyclotomic(&s, &boxes)?;
        if split.rest.deg() == 0 {
            continue;
        }
        let mut roots = split.rest_roots;
        let l = refine_log_mahler(&split.rest, &mut roots, tolw / mult as f64)?;
        let l = if mult == 1 { l } else { l.scale(mult as f64) };
        total = if total.lo == 0.0 && total.hi == 0.0 { l } else { total.add(l) };
    }
    let mut hb = HeightBound::from_log(total, false);
    hb.exact = hb.rel_width() <= 1e-9;
    Ok(hb)
}

/// An algebraic number: a primitive integer polynomial (its minimal
/// polynomial when `irreducible`) and a certified box selecting the root.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    pub minpoly: IntPoly,
    pub root: RootBox,
    /// Certified boxes of all roots of `minpoly`, including `root`.
    pub conjugates: Vec<RootBox>,
    pub irreducible: bool,
    /// Certified lower bound on the true degree.
    pub min_degree: usize,
    /// `Some(m)` for a primitive m-th root of unity.
    pub root_of_unity: Option<usize>,
}

impl AlgebraicNumber {
    /// Builds the number for the `index`-th root of a factor.
    pub fn from_factor(f: &Factor, index: usize) -> Self {
        AlgebraicNumber {
            minpoly: f.poly.clone(),
            root: f.roots[index].clone(),
            conjugates: f.roots.clone(),
            irreducible: f.irreducible,
            min_degree: f.min_degree,
            root_of_unity: f.cyclotomic,
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        let f = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        let fz = factor_smalldeg(&f, 1).expect("linear polynomial");
        Self::from_factor(&fz.factors[0], 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    /// All roots of `f` as algebraic numbers, grouped by factor.
    pub fn roots_of(f: &IntPoly, opts: &FactorOptions) -> Result<Vec<AlgebraicNumber>, HeightError> {
        let fz = factor_with(f, opts)?;
        let mut out = Vec::new();
        for fac in &fz.factors {
            for i in 0..fac.roots.len() {
                out.push(Self::from_factor(fac, i));
            }
        }
        Ok(out)
    }

    /// The unique root of `f` inside `which`.
    pub fn select(f: &IntPoly, which: &Disk, opts: &FactorOptions) -> Result<AlgebraicNumber, HeightError> {
        let all = Self::roots_of(f, opts)?;
        let mut hits: Vec<AlgebraicNumber> =
            all.into_iter().filter(|a| a.root.disk().intersects(which)).collect();
        match hits.len() {
            1 => Ok(hits.pop().expect("one hit")),
            0 => Err(HeightError::Ambiguous("no root of the polynomial in the given box".into())),
            k => Err(HeightError::Ambiguous(format!("{k} roots meet the given box"))),
        }
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn approx(&self) -> num_complex::Complex64 {
        self.root.center_c64()
    }

    /// `1/α`, from the reversed minimal polynomial.
    pub fn inverse(&self) -> Result<AlgebraicNumber, HeightError> {
        let rev = self.minpoly.reverse().primitive_part();
        let boxes = find_roots(&rev, 1e-14)?;
        let mut mine = self.root.clone();
        loop {
            let inv = mine.disk().recip().ok_or_else(|| HeightError::Ambiguous("inverse of zero".into()))?;
            let hits: Vec<&RootBox> = boxes.iter().filter(|b| b.disk().intersects(&inv)).collect();
            if hits.len() == 1 {
                return Ok(AlgebraicNumber {
                    root: hits[0].clone(),
                    minpoly: rev,
                    conjugates: boxes.clone(),
                    irreducible: self.irreducible,
                    min_degree: self.min_degree,
                    root_of_unity: self.root_of_unity,
                });
            }
            if mine.radius_f64() < 1e-200 {
                return Err(HeightError::Ambiguous("inverse root".into()));
            }
            mine = refine(&self.minpoly, &mine, mine.radius_f64() * 1e-8)?;
        }
    }
}

/// Height of an algebraic number.
///
/// For a certified minimal polynomial of degree d this is `M(minpoly)^{1/d}`
/// with relative width ≤ min(tol, 1e-10). Otherwise the true minimal
/// polynomial divides `minpoly`, so the height lies between
/// `max(|α|, 1/|α|)^{1/deg}` and `M(minpoly)^{1/min_degree}`.
pub fn height_of(a: &AlgebraicNumber, tol: f64) -> Result<HeightBound, HeightError> {
    if a.root_of_unity.is_some() {
        return Ok(HeightBound::ONE);
    }
    let d = a.degree();
    let mut conj = a.conjugates.clone();
    if a.irreducible {
        let tolw = log_tol(tol.min(1e-10)) * d as f64;
        let l = refine_log_mahler(&a.minpoly, &mut conj, tolw)?;
        let l = l.scale(1.0 / d as f64);
        let l = Iv::new(l.lo.next_down(), l.hi.next_up());
        let mut hb = HeightBound::from_log(l, true);
        hb.exact = hb.rel_width() <= 1e-9;
        return Ok(hb);
    }
    let l = refine_log_mahler(&a.minpoly, &mut conj, log_tol(tol))?;
    let upper = HeightBound::from_log(l.scale(1.0 / a.min_degree as f64), false).upper;
    let m = a.root.disk().abs();
    let lower = if m.lo > 0.0 {
        let big = if m.lo >= 1.0 { m.lo } else { 1.0 / m.hi };
        if big > 1.0 {
            Iv::point(big).ln().scale(1.0 / d as f64).exp().lo.max(1.0)
        } else {
            1.0
        }
    } else {
        1.0
    };
    Ok(HeightBound { lower: lower.min(upper), upper, exact: false })
}

/// Bounds for the height of a tuple: the max of the component heights from
/// below and their product from above.
pub fn tuple_height_bounds(xs: &[AlgebraicNumber], tol: f64) -> Result<HeightBound, HeightError> {
    assert!(!xs.is_empty(), "tuple must be nonempty");
    let mut lower: f64 = 1.0;
    let mut logup = Iv::point(0.0);
    for a in xs {
        let h = height_of(a, tol)?;
        lower = lower.max(h.lower);
        if h.upper > 1.0 {
            logup = logup.add(Iv::point(h.upper).ln());
        }
    }
    let upper = if logup.hi == 0.0 { 1.0 } else { logup.exp().hi };
    Ok(HeightBound { lower, upper: upper.max(lower), exact: false })
}

/// Result of the core-trace transform: `w = t + 1/t`, and `s` with
/// `s² = w + 2` on the branch with positive real part (`Im s ≥ 0` when the real part is not certified nonzero).
#[derive(Clone, Debug)]
pub struct TraceTransform {
    pub w: AlgebraicNumber,
    pub s: AlgebraicNumber,
    /// Box of `-s`, a root of the same polynomial `P(s² - 2)`.
    pub neg_s_box: RootBox,
    /// `P(s² - 2)`, squarefree, where `P` is the minimal polynomial of `w`.
    pub s_poly: IntPoly,
    /// `H(s)`, equal to `M(s_poly)^{1/deg}` whether or not `s_poly` splits, and
    /// the same for both branches.
    pub s_height: HeightBound,
}

/// Trace transform for the root of `f` selected by `which_root`.
pub fn minpoly_trace_transform(f: &IntPoly, which_root: &RootBox) -> Result<TraceTransform, HeightError> {
    let opts = FactorOptions::default();
    let t = AlgebraicNumber::select(f, &which_root.disk(), &opts)?;
    trace_transform(&t, &opts)
}

/// The transform on a certified algebraic number `t ≠ 0`.
///
/// Stage 1: `Res_t(m(t), t² - wt + 1)` has exactly the conjugates of `w` as
/// roots (each once, or twice when `m` is reciprocal), so its squarefree
/// part `P` is the minimal polynomial of `w`. Stage 2: `R(s) = P(s² - 2)`;
/// its roots are `±sqrt(w_j + 2)` and it is either irreducible or
/// `±Q(s)Q(-s)`, hence `H(s) = M(R)^{1/deg R}` in both cases.
pub fn trace_transform(t: &AlgebraicNumber, opts: &FactorOptions) -> Result<TraceTransform, HeightError> {
    if !t.irreducible {
        return Err(HeightError::NotCertified);
    }
    if t.minpoly.x_valuation() > 0 {
        return Err(HeightError::Ambiguous("t = 0 has no trace".into()));
    }
    let p = trace_resultant(&t.minpoly).squarefree_part();
    if 2 * p.deg() > opts.degree_cap {
        if let Some(tt) = transform_from_conjugates(t, &p)? {
            return Ok(tt);
        }
    }
    let mut tbox = t.root.clone();
    let mut wroots = find_roots(&p, 1e-14)?;
    let w_idx = loop {
        let td = tbox.disk();
        let wd = td.add(&td.recip().ok_or(HeightError::NotCertified)?);
        let hits: Vec<usize> = (0..wroots.len()).filter(|&i| wroots[i].disk().intersects(&wd)).collect();
        if hits.len() == 1 {
            break hits[0];
        }
        if tbox.radius_f64() < 1e-200 {
            return Err(HeightError::Ambiguous("w = t + 1/t".into()));
        }
        let r = tbox.radius_f64() * 1e-8;
        tbox = refine(&t.minpoly, &tbox, r)?;
        for b in wroots.iter_mut() {
            *b = refine(&p, b, b.radius_f64() * 1e-8)?;
        }
    };
    let w = AlgebraicNumber {
        minpoly: p.clone(),
        root: wroots[w_idx].clone(),
        conjugates: wroots.clone(),
        irreducible: true,
        min_degree: p.deg(),
        root_of_unity: None,
    };
    let r = p.taylor_shift(&BigInt::from(-2)).inflate(2).squarefree_part();
    // The only possible split is into two factors of degree deg P; past the
    // cap the subset search cannot find it, so skip factoring altogether.
    let fz = if r.deg() > opts.degree_cap {
        Factorization {
            content: BigInt::from(1),
            factors: vec![Factor {
                roots: find_roots(&r, opts.root_radius)?,
                poly: r.clone(),
                multiplicity: 1,
                irreducible: false,
                min_degree: p.deg(),
                cyclotomic: None,
            }],
        }
    } else {
        factor_with(&r, opts)?
    };
    // locate both branches among the roots of R
    let mut wbox = w.root.clone();
    let (plus, minus) = loop {
        let sd = wbox.disk().add_scalar(2.0).sqrt();
        let find = |d: &Disk| -> Vec<(usize, usize)> {
            let mut v = Vec::new();
            for (fi, fac) in fz.factors.iter().enumerate() {
                for (ri, b) in fac.roots.iter().enumerate() {
                    if b.disk().intersects(d) {
                        v.push((fi, ri));
                    }
                }
            }
            v
        };
        let (a, b) = match sd {
            Some(sd) => (find(&sd), find(&sd.neg())),
            None => {
                // w = -2 up to precision: s = 0
                let z = Disk::new(num_complex::Complex64::new(0.0, 0.0), wbox.disk().r.sqrt() * 2.0);
                (find(&z), find(&z))
            }
        };
        if a.len() == 1 && b.len() == 1 {
            break (a[0], b[0]);
        }
        if wbox.radius_f64() < 1e-200 {
            return Err(HeightError::Ambiguous("s branch".into()));
        }
        wbox = refine(&p, &wbox, wbox.radius_f64() * 1e-8)?;
    };
    let rootbox = |(fi, ri): (usize, usize)| fz.factors[fi].roots[ri].clone();
    let (keep, other) = {
        if first_branch(&rootbox(plus).disk(), &rootbox(minus).disk()) {
            (plus, minus)
        } else {
            (minus, plus)
        }
    };
    let s = AlgebraicNumber::from_factor(&fz.factors[keep.0], keep.1);
    let s_height = if s.irreducible {
        height_of(&s, 1e-12)?
    } else {
        let mut roots: Vec<RootBox> = fz.factors.iter().flat_map(|f| f.roots.clone()).collect();
        let d = r.deg();
        let l = refine_log_mahler(&r, &mut roots, log_tol(1e-12) * d as f64)?;
        let l = l.scale(1.0 / d as f64);
        HeightBound::from_log(Iv::new(l.lo.next_down(), l.hi.next_up()), true)
    };
    Ok(TraceTransform { w, s, neg_s_box: rootbox(other), s_poly: r, s_height })
}

/// Whether `a` (rather than its negative `b`) is the branch `s`: positive
/// real part, or `Im ≥ 0` when the real part is not certified nonzero.
fn first_branch(a: &Disk, b: &Disk) -> bool {
    let (ra, rb) = (a.re(), b.re());
    if ra.lo > 0.0 || rb.hi < 0.0 {
        true
    } else if rb.lo > 0.0 || ra.hi < 0.0 {
        false
    } else {
        a.c.im >= b.c.im
    }
}

/// Boxes derived from the conjugates of `t` alone: `w_j = t_j + 1/t_j` and
/// `±sqrt(w_j + 2)`. Pairwise disjoint enclosures, as many as the degree,
/// isolate one root each. `None` when they fail to separate.
fn transform_from_conjugates(t: &AlgebraicNumber, p: &IntPoly) -> Result<Option<TraceTransform>, HeightError> {
    let n = p.deg();
    let d = t.degree();
    if n == 0 || (d != n && d != 2 * n) || t.conjugates.len() != d {
        return Ok(None);
    }
    let mut conj = Vec::with_capacity(d);
    for b in &t.conjugates {
        conj.push(if b.radius_f64() > 1e-14 { refine(&t.minpoly, b, 1e-14)? } else { b.clone() });
    }
    let me = match conj.iter().position(|b| b.disk().intersects(&t.root.disk())) {
        Some(i) => i,
        None => return Ok(None),
    };
    let wd: Vec<Disk> = match conj.iter().map(|b| b.disk().recip().map(|r| b.disk().add(&r))).collect() {
        Some(v) => v,
        None => return Ok(None),
    };
    // distinct w values; each merged disk must meet exactly one kept disk
    let mut kept: Vec<usize> = Vec::with_capacity(n);
    let mut my_w = None;
    for (j, w) in wd.iter().enumerate() {
        let hits: Vec<usize> = (0..kept.len()).filter(|&k| wd[kept[k]].intersects(w)).collect();
        match hits.len() {
            0 => {
                if j == me {
                    my_w = Some(kept.len());
                }
                kept.push(j);
            }
            1 if d == 2 * n => {
                if j == me {
                    my_w = Some(hits[0]);
                }
            }
            _ => return Ok(None),
        }
    }
    let my_w = match my_w {
        Some(k) if kept.len() == n => k,
        _ => return Ok(None),
    };
    let r = p.taylor_shift(&BigInt::from(-2)).inflate(2).squarefree_part();
    if r.deg() != 2 * n {
        return Ok(None);
    }
    let mut sd = Vec::with_capacity(2 * n);
    for &j in &kept {
        match wd[j].add_scalar(2.0).sqrt() {
            Some(s) => {
                sd.push(s);
                sd.push(s.neg());
            }
            None => return Ok(None),
        }
    }
    for i in 0..sd.len() {
        if sd[i + 1..].iter().any(|o| o.intersects(&sd[i])) {
            return Ok(None);
        }
    }
    let (pid, rid) = (crate::roots::poly_id(p), crate::roots::poly_id(&r));
    let wboxes: Vec<RootBox> = kept.iter().map(|&j| RootBox::new(wd[j].c, wd[j].r, pid)).collect();
    let sboxes: Vec<RootBox> = sd.iter().map(|s| RootBox::new(s.c, s.r, rid)).collect();
    let (a, b) = (2 * my_w, 2 * my_w + 1);
    let (keep, other) = if first_branch(&sd[a], &sd[b]) { (a, b) } else { (b, a) };
    let log_m = log_mahler(&r.lc(), &sboxes).scale(1.0 / (2 * n) as f64);
    let mut s_height = HeightBound::from_log(Iv::new(log_m.lo.next_down(), log_m.hi.next_up()), true);
    s_height.exact = s_height.rel_width() <= 1e-9;
    let w = AlgebraicNumber {
        minpoly: p.clone(),
        root: wboxes[my_w].clone(),
        conjugates: wboxes,
        irreducible: true,
        min_degree: n,
        root_of_unity: None,
    };
    let s = AlgebraicNumber {
        minpoly: r.clone(),
        root: sboxes[keep].clone(),
        conjugates: sboxes.clone(),
        irreducible: false,
        min_degree: n,
        root_of_unity: None,
    };
    Ok(Some(TraceTransform { w, s, neg_s_box: sboxes[other].clone(), s_poly: r, s_height }))
}

/// `Res_x(f(x), g(w - x))`: vanishes at every `α + β`.
pub fn sum_resultant(f: &IntPoly, g: &IntPoly) -> IntPoly {
    use crate::exactnum::{resultant_bivariate, BiPoly};
    let n = g.deg();
    let mut coeffs = vec![IntPoly::zero(); n + 1];
    for (k, gk) in g.coeffs().iter().enumerate() {
        for (j, c) in coeffs.iter_mut().enumerate().take(k + 1) {
            // g_k C(k, j) (-1)^j w^{k-j} t^j
            let mut a = gk * crate::exactnum::binomial_coeff(k, j);
            if j % 2 == 1 {
                a = -a;
            }
            *c = &*c + &IntPoly::monomial(a, k - j);
        }
    }
    resultant_bivariate(&BiPoly::from_t(f), &BiPoly::new(coeffs))
}

/// `Res_x(f(x), x^{deg g} g(w/x))`: vanishes at every `α β`.
pub fn product_resultant(f: &IntPoly, g: &IntPoly) -> IntPoly {
    use crate::exactnum::{resultant_bivariate, BiPoly};
    let n = g.deg();
    let mut coeffs = vec![IntPoly::zero(); n + 1];
    for (k, gk) in g.coeffs().iter().enumerate() {
        coeffs[n - k] = IntPoly::monomial(gk.clone(), k);
    }
    resultant_bivariate(&BiPoly::from_t(f), &BiPoly::new(coeffs))
}

/// Degree of `Q(s)` when determined: `deg P` or `2 deg P`.
pub fn trace_degree_bounds(tt: &TraceTransform) -> (usize, usize) {
    if tt.s.irreducible {
        (tt.s.degree(), tt.s.degree())
    } else {
        (tt.w.degree(), tt.s_poly.deg())
    }
}

#[cfg(test)]
mod tests;
