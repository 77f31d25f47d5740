//! Certified isolation of the complex roots of squarefree integer
//! polynomials.
//!
//! Roots are approximated by Aberth iteration, first in f64 and, if the f64
//! certificate fails, in dyadic multiprecision with doubling precision. Every
//! returned disk is certified by the Newton inclusion `|z - root| <= n|f(z)/f'(z)|`
//! evaluated with rigorous error bounds (f64) or exactly (dyadic), together
//! with pairwise disjointness of all `deg f` disks, so each disk holds exactly
//! one root.

pub mod dyadic;
pub mod interval;

use std::collections::hash_map::DefaultHasher;
use std::f64::consts::PI;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::IntPoly;
use dyadic::{DyComplex, Dyadic};
use interval::{abs_up, Disk};

pub const DEFAULT_PRECISION_CAP: u64 = 4096;
const U: f64 = f64::EPSILON * 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("polynomial must have degree at least 1")]
    Constant,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("precision exhausted at {bits} bits; achieved radii {radii:?}")]
    PrecisionExhausted { bits: u64, radii: Vec<f64> },
    #[error("refinement left the isolating disk (would change root)")]
    WrongRoot,
}

/// Disk certified to contain exactly one root of the polynomial `poly_id`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootBox {
    pub center: DyComplex,
    pub radius: Dyadic,
    pub poly_id: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircleVerdict {
    InsideUnit,
    OutsideUnit,
    Undecidable,
}

pub fn poly_id(f: &IntPoly) -> u64 {
    let mut h = DefaultHasher::new();
    f.hash(&mut h);
    h.finish()
}

impl RootBox {
    pub fn new(center: Complex64, radius: f64, poly_id: u64) -> Self {
        RootBox { center: DyComplex::from_c64(center), radius: Dyadic::from_f64(radius), poly_id }
    }

    pub fn center_c64(&self) -> Complex64 {
        self.center.to_c64()
    }

    pub fn radius_f64(&self) -> f64 {
        self.radius.to_f64_up()
    }

    /// f64 disk containing this box (center rounding absorbed in the radius).
    pub fn disk(&self) -> Disk {
        let c = self.center.to_c64();
        let err = (Dyadic::from_f64(c.re) - self.center.re.clone()).abs().to_f64_up()
            + (Dyadic::from_f64(c.im) - self.center.im.clone()).abs().to_f64_up();
        Disk::new(c, (self.radius.to_f64_up() + err).next_up())
    }
}

/// Exact trichotomy: outside iff `|c| > 1 + r`, inside iff `|c| < 1 - r`.
pub fn unit_circle_test(b: &RootBox) -> CircleVerdict {
    let n2 = b.center.norm_sqr();
    let one = Dyadic::one();
    let hi = &one + &b.radius;
    if n2 > &hi * &hi {
        return CircleVerdict::OutsideUnit;
    }
    if b.radius < one {
        let lo = &one - &b.radius;
        if n2 < &lo * &lo {
            return CircleVerdict::InsideUnit;
        }
    }
    CircleVerdict::Undecidable
}

/// Certified boxes for all roots of a squarefree `f`, each refined to radius
/// at most `target_radius`.
pub fn find_roots(f: &IntPoly, target_radius: f64) -> Result<Vec<RootBox>, RootError> {
    find_roots_capped(f, target_radius, DEFAULT_PRECISION_CAP)
}

pub fn find_roots_capped(
    f: &IntPoly,
    target_radius: f64,
    precision_cap: u64,
) -> Result<Vec<RootBox>, RootError> {
    if f.deg() == 0 {
        return Err(RootError::Constant);
    }
    if !f.is_squarefree() {
        return Err(RootError::NotSquarefree);
    }
    let id = poly_id(f);
    let n = f.deg();
    let coef: Vec<f64> = f.to_f64();
    let finite = coef.iter().all(|c| c.is_finite());
    let mut approx = initial_guesses(f);
    let mut boxes = None;
    if finite {
        aberth_f64(&coef, &mut approx);
        boxes = certify_f64(&coef, &approx).map(|v| {
            v.into_iter()
                .zip(&approx)
                .map(|(r, z)| RootBox::new(*z, r, id))
                .collect::<Vec<_>>()
        });
    }
    let boxes = match boxes {
        Some(b) => b,
        None => {
            let start: Vec<DyComplex> = approx
                .iter()
                .map(|z| if z.re.is_finite() && z.im.is_finite() { *z } else { Complex64::new(1.0, 1.0) })
                .map(DyComplex::from_c64)
                .collect();
            aberth_mp(f, start, precision_cap, id)?
        }
    };
    let mut out = Vec::with_capacity(n);
    for b in boxes {
        if b.radius.to_f64() > target_radius {
            out.push(refine_capped(f, &b, target_radius, precision_cap)?);
        } else {
            out.push(b);
        }
    }
    out.sort_by(|a, b| {
        let (x, y) = (a.center_c64(), b.center_c64());
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });
    Ok(out)
}

/// Newton-polygon initial approximations: for each edge of the upper convex
/// hull of `(i, log|a_i|)`, equally spaced points on the circle of the
/// corresponding radius.
fn initial_guesses(f: &IntPoly) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| (i, log_abs(a)))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // remove b if it lies below segment a->p
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(f.deg());
    let lead_zero = f.x_valuation();
    for _ in 0..lead_zero {
        out.push(Complex64::new(0.0, 0.0));
    }
    for (e, w) in hull.windows(2).enumerate() {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let k = j - i;
        let r = ((li - lj) / k as f64).exp();
        let r = if r.is_finite() && r > 0.0 { r } else { 1.0 };
        let sigma = 0.7 + 0.37 * e as f64;
        for m in 0..k {
            out.push(Complex64::from_polar(r, 2.0 * PI * m as f64 / k as f64 + sigma));
        }
    }
    out
}

fn log_abs(a: &BigInt) -> f64 {
    let b = a.bits() as i64;
    let shift = (b - 60).max(0);
    let top = (a.abs() >> shift).to_f64().unwrap_or(1.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// f/f' at z, evaluated through the reversed polynomial when |z| > 1.
fn newton_ratio(coef: &[f64], z: Complex64) -> Complex64 {
    let n = coef.len() - 1;
    if z.norm() <= 1.0 {
        let (mut p, mut d) = (Complex64::new(coef[n], 0.0), Complex64::new(0.0, 0.0));
        for k in (0..n).rev() {
            d = d * z + p;
            p = p * z + coef[k];
        }
        p / d
    } else {
        let y = 1.0 / z;
        let (mut p, mut d) = (Complex64::new(coef[0], 0.0), Complex64::new(0.0, 0.0));
        for k in 1..=n {
            d = d * y + p;
            p = p * y + coef[k];
        }
        // f/f' = (1/y) R / (n R - y R')
        p / (y * (p * n as f64 - y * d))
    }
}

fn aberth_f64(coef: &[f64], z: &mut [Complex64]) {
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..2000 {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let ratio = newton_ratio(coef, z[i]);
            if !ratio.re.is_finite() || !ratio.im.is_finite() {
                done[i] = true;
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let w = ratio / (1.0 - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
            }
            if w.norm() <= 4.0 * U * z[i].norm() || w.norm() == 0.0 {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    // two polishing Newton steps
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let r = newton_ratio(coef, *zi);
            if r.re.is_finite() && r.im.is_finite() && r.norm() < 1e-3 * (1.0 + zi.norm()) {
                *zi -= r;
            }
        }
    }
}

/// Rigorous f64 Newton-inclusion radius at `z`, or `None` if it cannot be
/// bounded (overflow or derivative indistinguishable from zero).
fn radius_f64(coef: &[f64], z: Complex64) -> Option<f64> {
    let n = coef.len() - 1;
    let az = abs_up(z);
    let (mut p, mut d) = (Complex64::new(coef[n], 0.0), Complex64::new(0.0, 0.0));
    let (mut pa, mut da) = (coef[n].abs(), 0.0f64);
    for k in (0..n).rev() {
        d = d * z + p;
        p = p * z + coef[k];
        da = (da * az + pa).next_up();
        pa = (pa * az + coef[k].abs()).next_up();
    }
    let gamma = (10.0 * (n as f64 + 1.0) * U).next_up();
    let ef = (gamma * pa).next_up();
    let ed = (gamma * da).next_up();
    let num = (abs_up(p) + ef).next_up();
    let den = (interval::abs_down(d) - ed).next_down();
    if !(den > 0.0) || !num.is_finite() {
        return None;
    }
    let r = ((num / den).next_up() * n as f64).next_up();
    r.is_finite().then_some(r)
}

fn certify_f64(coef: &[f64], z: &[Complex64]) -> Option<Vec<f64>> {
    let radii: Vec<f64> = z.iter().map(|&zi| radius_f64(coef, zi)).collect::<Option<_>>()?;
    let disks: Vec<Disk> = z.iter().zip(&radii).map(|(&c, &r)| Disk::new(c, r)).collect();
    pairwise_disjoint(&disks).then_some(radii)
}

fn pairwise_disjoint(d: &[Disk]) -> bool {
    // sweep by left edge so that dense clusters do not cost n^2 comparisons
    // beyond the overlapping window
    let mut idx: Vec<usize> = (0..d.len()).collect();
    idx.sort_by(|&a, &b| (d[a].c.re - d[a].r).total_cmp(&(d[b].c.re - d[b].r)));
    for (k, &i) in idx.iter().enumerate() {
        let right = d[i].c.re + d[i].r;
        for &j in &idx[k + 1..] {
            if d[j].c.re - d[j].r > right + 1e-300 + 4.0 * U * right.abs() {
                break;
            }
            if !d[i].disjoint(&d[j]) {
                return false;
            }
        }
    }
    true
}

fn eval_mp(f: &IntPoly, z: &DyComplex, prec: u64) -> (DyComplex, DyComplex) {
    let c = f.coeffs();
    let n = c.len() - 1;
    let mut p = DyComplex::new(Dyadic::from_int(c[n].clone()), Dyadic::zero());
    let mut d = DyComplex::zero();
    for k in (0..n).rev() {
        d = d.mul_r(z, prec).add(&p).round(prec);
        let t = p.mul_r(z, prec);
        p = DyComplex::new(&t.re + &Dyadic::from_int(c[k].clone()), t.im).round(prec);
    }
    (p, d)
}

/// Exact Newton-inclusion radius at a dyadic point: returns a dyadic `r`
/// with `n |f(z)| <= r |f'(z)|`, verified in exact integer arithmetic.
pub fn exact_radius(f: &IntPoly, z: &DyComplex) -> Option<Dyadic> {
    let c = f.coeffs();
    let n = c.len() - 1;
    let s = (-z.min_exponent()).max(0) as u64;
    let e = -(s as i64);
    let x = z.re.aligned(e);
    let y = z.im.aligned(e);
    let (mut pr, mut pi) = (c[n].clone(), BigInt::zero());
    let (mut dr, mut di) = (BigInt::zero(), BigInt::zero());
    for k in (0..n).rev() {
        let ndr = &dr * &x - &di * &y + &pr;
        let ndi = &dr * &y + &di * &x + &pi;
        dr = ndr;
        di = ndi;
        let npr = &pr * &x - &pi * &y + (&c[k] << (s as usize * (n - k)));
        let npi = &pr * &y + &pi * &x;
        pr = npr;
        pi = npi;
    }
    let p2 = &pr * &pr + &pi * &pi;
    if p2.is_zero() {
        return Some(Dyadic::zero());
    }
    let d2 = &dr * &dr + &di * &di;
    if d2.is_zero() {
        return None;
    }
    let nn = BigInt::from(n as u64 * n as u64);
    let lhs = &nn * &p2;
    // r^2 >= n^2 |P|^2 / (|D|^2 W^2)
    let num = Dyadic::from_int(lhs.clone());
    let den = Dyadic::new(d2.clone(), 2 * s as i64);
    let r2 = num.div(&den, 64);
    let mut r = r2.sqrt(40).round_up(40);
    r = (&r + &r.mul_pow2(-30)).round_up(40);
    for _ in 0..8 {
        // check n^2 |P|^2 <= r^2 |D|^2 W^2 exactly
        let rr = &r * &r;
        let lhs_d = Dyadic::from_int(lhs.clone());
        let rhs_d = &rr * &den;
        if lhs_d <= rhs_d {
            return Some(r);
        }
        r = (&r + &r.mul_pow2(-10)).round_up(40);
    }
    None
}

fn disjoint_exact(a: &RootBox, b: &RootBox) -> bool {
    let d2 = a.center.sub(&b.center).norm_sqr();
    let s = &a.radius + &b.radius;
    d2 > &s * &s
}

fn aberth_mp(
    f: &IntPoly,
    mut z: Vec<DyComplex>,
    cap: u64,
    id: u64,
) -> Result<Vec<RootBox>, RootError> {
    let n = z.len();
    let mut prec = 106u64;
    let mut last_radii = Vec::new();
    while prec <= cap {
        for _ in 0..60 {
            let mut maxrel = 0f64;
            for i in 0..n {
                let (p, d) = eval_mp(f, &z[i], prec);
                if d.is_zero() {
                    continue;
                }
                let ratio = p.div(&d, prec);
                let mut s = DyComplex::zero();
                for j in 0..n {
                    if j != i {
                        let diff = z[i].sub(&z[j]);
                        if diff.is_zero() {
                            continue;
                        }
                        s = s.add(&DyComplex::new(Dyadic::one(), Dyadic::zero()).div(&diff, prec)).round(prec);
                    }
                }
                let one = DyComplex::new(Dyadic::one(), Dyadic::zero());
                let den = one.sub(&ratio.mul_r(&s, prec));
                if den.is_zero() {
                    continue;
                }
                let w = ratio.div(&den, prec);
                z[i] = z[i].sub(&w).round(prec);
                let zn = z[i].to_c64().norm();
                let wn = w.to_c64().norm();
                let rel = if zn > 0.0 { wn / zn } else { wn };
                maxrel = maxrel.max(if rel.is_finite() { rel } else { 1.0 });
            }
            if maxrel < dyadic::ldexp(1.0, -(prec as i64) + 12) {
                break;
            }
        }
        let radii: Option<Vec<Dyadic>> = z.iter().map(|zi| exact_radius(f, zi)).collect();
        if let Some(radii) = radii {
            let boxes: Vec<RootBox> = z
                .iter()
                .zip(radii)
                .map(|(c, r)| RootBox { center: c.clone(), radius: r, poly_id: id })
                .collect();
            let ok = (0..n).all(|i| (i + 1..n).all(|j| disjoint_exact(&boxes[i], &boxes[j])));
            if ok {
                return Ok(boxes);
            }
            last_radii = boxes.iter().map(|b| b.radius.to_f64()).collect();
        }
        prec *= 2;
    }
    Err(RootError::PrecisionExhausted { bits: cap, radii: last_radii })
}

/// Shrinks a certified box by Newton iteration from its center; the result
/// is re-certified and checked to lie inside the original disk, so it houses
/// the same root.
pub fn refine(f: &IntPoly, b: &RootBox, new_radius: f64) -> Result<RootBox, RootError> {
    refine_capped(f, b, new_radius, DEFAULT_PRECISION_CAP)
}

pub fn refine_capped(
    f: &IntPoly,
    b: &RootBox,
    new_radius: f64,
    cap: u64,
) -> Result<RootBox, RootError> {
    if b.radius.to_f64() <= new_radius {
        return Ok(b.clone());
    }
    let target = Dyadic::from_f64(new_radius);
    // Horner terms reach |c|max |z|^n; cancellation eats those bits
    let mag = b.center.to_c64().norm().max(1.0).log2().ceil() as u64;
    let cbits = f.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0);
    let need = cbits + mag * f.deg() as u64 + (-new_radius.max(1e-300).log2()).max(0.0).ceil() as u64 + 64;
    let mut prec = need.max(106);
    let mut best = f64::INFINITY;
    let mut escaped = false;
    'prec: while prec <= cap {
        let mut z = b.center.clone();
        for _ in 0..80 {
            let (p, d) = eval_mp(f, &z, prec);
            if d.is_zero() {
                break;
            }
            let step = p.div(&d, prec);
            z = z.sub(&step).round(prec);
            let off = z.sub(&b.center).norm_sqr();
            if off > &b.radius * &b.radius {
                // the root is inside the box: leaving it means too few bits
                escaped = true;
                prec *= 2;
                continue 'prec;
            }
            // the inclusion radius is about n |f/f'|: certify only once it can pass
            let n = f.deg() as f64;
            if n * step.to_c64().norm() > new_radius * 0.25 {
                continue;
            }
            if let Some(r) = exact_radius(f, &z) {
                best = best.min(r.to_f64());
                if r <= target && r <= b.radius {
                    let slack = &b.radius - &r;
                    if off <= &slack * &slack {
                        return Ok(RootBox { center: z, radius: r, poly_id: b.poly_id });
                    }
                }
            }
        }
        prec *= 2;
    }
    if escaped && best.is_infinite() {
        return Err(RootError::WrongRoot);
    }
    Err(RootError::PrecisionExhausted { bits: cap, radii: vec![best] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn has_root_near(b: &[RootBox], z: Complex64) -> bool {
        b.iter().any(|x| (x.center_c64() - z).norm() <= x.radius_f64() + 1e-15)
    }

    #[test]
    fn quadratic_oracles() {
        let b = find_roots(&p(&[-1, 0, 1]), 1e-12).unwrap();
        assert_eq!(b.len(), 2);
        assert!(has_root_near(&b, Complex64::new(1.0, 0.0)));
        assert!(has_root_near(&b, Complex64::new(-1.0, 0.0)));
        assert!(b.iter().all(|x| x.radius_f64() <= 1e-12));

        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let b = find_roots(&p(&[-1, -1, 1]), 1e-12).unwrap();
        assert!(has_root_near(&b, Complex64::new(phi, 0.0)));
        assert!(has_root_near(&b, Complex64::new(1.0 - phi, 0.0)));

        let b = find_roots(&p(&[1, 0, 1]), 1e-12).unwrap();
        assert!(has_root_near(&b, Complex64::new(0.0, 1.0)));
        assert!(has_root_near(&b, Complex64::new(0.0, -1.0)));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(find_roots(&p(&[3]), 1e-12), Err(RootError::Constant));
        assert_eq!(find_roots(&p(&[1, -2, 1]), 1e-12), Err(RootError::NotSquarefree));
    }

    #[test]
    fn circle_verdicts() {
        let v = |c: Complex64| unit_circle_test(&RootBox::new(c, 1e-12, 0));
        assert_eq!(v(Complex64::new(2.0, 0.0)), CircleVerdict::OutsideUnit);
        assert_eq!(v(Complex64::new(0.0, 1.0)), CircleVerdict::Undecidable);
        assert_eq!(v(Complex64::new(0.5, 0.0)), CircleVerdict::InsideUnit);
    }

    #[test]
    fn refine_examples() {
        let f = p(&[-1, -1, 1]);
        let coarse = RootBox::new(Complex64::new(1.62, 0.0), 1e-2, poly_id(&f));
        let fine = refine(&f, &coarse, 1e-12).unwrap();
        assert!(fine.radius_f64() <= 1e-12);
        assert!((fine.center_c64().re - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert_eq!(refine(&f, &fine, 1e-6).unwrap(), fine);
        // an invalid box holding both roots: any answer must stay inside it
        let wide = RootBox::new(Complex64::new(0.5, 0.0), 1.2, poly_id(&f));
        if let Ok(r) = refine(&f, &wide, 1e-10) {
            assert!((r.center_c64() - Complex64::new(0.5, 0.0)).norm() <= 1.2);
        }
    }

    #[test]
    fn very_tight_target_uses_multiprecision() {
        let f = p(&[-2, 0, 1]);
        let b = find_roots(&f, 1e-40).unwrap();
        let s = b.iter().find(|x| x.center_c64().re > 0.0).unwrap();
        assert!(s.radius_f64() <= 1e-40);
        // exact: |c^2 - 2| <= ~ 2 sqrt2 r
        let c = s.center.re.to_rational();
        let err = (&c * &c - crate::exactnum::Rational::from_integer(2.into())).abs();
        assert!(err < crate::exactnum::parse_rational("1/1000000000000000000000000000000000000000").unwrap());
    }

    #[test]
    fn clustered_roots_escalate() {
        // Mignotte-like: x^12 - 2 (100x - 1)^2 has two roots within ~1e-12
        let mut f = p(&[0; 13].iter().enumerate().map(|(i, _)| if i == 12 { 1 } else { 0 }).collect::<Vec<_>>());
        let sq = &p(&[-1, 100]) * &p(&[-1, 100]);
        f = &f - &sq.scale(&2.into());
        let b = find_roots(&f, 1e-30).unwrap();
        assert_eq!(b.len(), 12);
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                assert!(disjoint_exact(&b[i], &b[j]));
            }
        }
    }

    #[test]
    fn high_degree_cyclotomic_like() {
        // x^200 - x - 1 (squarefree, roots near the unit circle)
        let mut c = vec![0i64; 201];
        c[0] = -1;
        c[1] = -1;
        c[200] = 1;
        let f = p(&c);
        let b = find_roots(&f, 1e-10).unwrap();
        assert_eq!(b.len(), 200);
    }

    fn boundary_nonvanishing(f: &IntPoly, b: &RootBox) -> bool {
        // smoke test: |f| on the circle of radius 2r is bounded away from 0
        // by more than the evaluation error
        let d = b.disk();
        let coef = f.to_f64();
        let rr = (2.0 * d.r).max(1e-200);
        (0..16).all(|k| {
            let z = d.c + Complex64::from_polar(rr, 2.0 * PI * k as f64 / 16.0);
            let v = f.eval_complex(z).norm();
            let bound: f64 = coef.iter().enumerate().map(|(i, a)| a.abs() * z.norm().powi(i as i32)).sum();
            v > 10.0 * (coef.len() as f64 + 1.0) * U * bound
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn certified_boxes_are_sound(c in prop::collection::vec(-30i64..=30, 2..12)) {
            let f = IntPoly::from_i64s(&c).squarefree_part();
            prop_assume!(f.deg() >= 1);
            let b = find_roots(&f, 1e-9).unwrap();
            prop_assert_eq!(b.len(), f.deg());
            for x in &b {
                prop_assert!(x.radius_f64() <= 1e-9);
                prop_assert!(boundary_nonvanishing(&f, x));
                // conjugate symmetry: conj(center) lies in some box (within radii)
                let cc = x.center_c64().conj();
                prop_assert!(b.iter().any(|y| (y.center_c64() - cc).norm() <= y.radius_f64() + x.radius_f64() + 1e-15));
            }
        }
    }
}
