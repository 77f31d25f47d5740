//! Exact detection of cyclotomic factors.
//!
//! Candidates come from the arguments of certified roots near the unit
//! circle: for each such disk the unique simplest fraction `k/m` inside its
//! argument interval (in turns) is the only possible root-of-unity order, and
//! it is confirmed by exact division by `Φ_m`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{IntPoly, Rational};
use crate::roots::{interval::Iv, poly_id, refine, RootBox, RootError};

/// Euler totient table up to `n` inclusive.
pub fn totients(n: usize) -> Vec<u32> {
    let mut phi: Vec<u32> = (0..=n as u32).collect();
    for p in 2..=n {
        if phi[p] == p as u32 {
            let mut k = p;
            while k <= n {
                phi[k] -= phi[k] / p as u32;
                k += p;
            }
        }
    }
    phi
}

/// Largest `m` with `φ(m) ≤ n` (φ(m) ≥ sqrt(m/2) bounds the search).
pub fn max_order_for_degree(n: usize) -> usize {
    let lim = 2 * n * n + 2;
    let phi = totients(lim);
    (1..=lim).rev().find(|&m| phi[m] as usize <= n).unwrap_or(1)
}

fn mobius(n: u64) -> i32 {
    let mut n = n;
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Multiply a dense polynomial by `x^d - 1`.
fn mul_binom(c: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); c.len() + d];
    for (i, a) in c.iter().enumerate() {
        out[i + d] += a;
        out[i] -= a;
    }
    out
}

/// Divide exactly by `x^d - 1`.
fn div_binom(c: &[BigInt], d: usize) -> Vec<BigInt> {
    let n = c.len() - 1;
    let mut q = vec![BigInt::zero(); n + 1 - d];
    let mut r = c.to_vec();
    for k in (0..q.len()).rev() {
        let a = r[k + d].clone();
        q[k] = a.clone();
        r[k] += &a;
        r[k + d] = BigInt::zero();
    }
    q
}

/// The m-th cyclotomic polynomial, `∏_{d|m} (x^d - 1)^{μ(m/d)}`.
pub fn cyclotomic(m: usize) -> IntPoly {
    let divs: Vec<usize> = (1..=m).filter(|d| m % d == 0).collect();
    let mut c = vec![BigInt::one()];
    for &d in &divs {
        if mobius((m / d) as u64) == 1 {
            c = mul_binom(&c, d);
        }
    }
    for &d in &divs {
        if mobius((m / d) as u64) == -1 {
            c = div_binom(&c, d);
        }
    }
    let p = IntPoly::new(c);
    if p.lc().is_negative() {
        -p
    } else {
        p
    }
}

/// Simplest fraction (smallest denominator) in the closed interval `[lo, hi]`.
pub fn simplest_fraction(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if fl.clone() + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    // lo and hi share integer part n; recurse on reciprocals of fractional parts
    let n = fl;
    let a = (hi - &n).recip();
    let b = (lo - &n).recip();
    n + simplest_fraction(&a, &b).recip()
}

/// Turn-fraction interval of the argument of a disk, if it avoids 0.
fn turn_interval(b: &RootBox) -> Option<Iv> {
    let d = b.disk();
    let a = d.arg()?;
    let s = 1.0 / (2.0 * PI);
    Some(Iv::new((a.lo * s).next_down(), (a.hi * s).next_up()))
}

/// True when the disk may meet the unit circle.
fn near_circle(b: &RootBox) -> bool {
    let m = b.disk().abs();
    m.lo <= 1.0 && 1.0 <= m.hi
}

/// Cyclotomic part of a squarefree polynomial together with the partition
/// of its certified roots.
#[derive(Clone, Debug)]
pub struct CycloSplit {
    /// `(m, roots of Φ_m)` for every `Φ_m` dividing the input, ascending in m.
    pub parts: Vec<(usize, Vec<RootBox>)>,
    pub rest: IntPoly,
    pub rest_roots: Vec<RootBox>,
}

/// Splits off all cyclotomic factors of the squarefree `f` whose certified
/// roots are `boxes`. A root of `Φ_m` has argument `k/m` turns; an argument
/// interval narrower than `1/M²` holds at most one fraction with denominator
/// at most `M`, and that fraction is then the simplest one in the interval.
/// Boxes are refined until every near-circle box is that narrow and every
/// order has exactly `φ(m)` candidate boxes.
pub fn split_cyclotomic(f: &IntPoly, boxes: &[RootBox]) -> Result<CycloSplit, RootError> {
    let n = f.deg();
    let mut boxes = boxes.to_vec();
    let mut rest = f.clone();
    if n == 0 {
        return Ok(CycloSplit { parts: Vec::new(), rest, rest_roots: boxes });
    }
    let mmax = max_order_cached(n);
    let phi = totients(mmax.max(2));
    let limit = 1.0 / (mmax as f64 * mmax as f64);
    for _round in 0..12 {
        let mut again = false;
        let mut order: Vec<Option<usize>> = vec![None; boxes.len()];
        for (i, b) in boxes.iter_mut().enumerate() {
            if !near_circle(b) {
                continue;
            }
            let iv = match turn_interval(b) {
                Some(iv) if iv.width() < limit => iv,
                _ => {
                    let r = (b.radius_f64() * 1e-4).min(limit * 0.1);
                    *b = refine(f, b, r)?;
                    again = true;
                    continue;
                }
            };
            let lo = Rational::from_float(iv.lo).expect("finite");
            let hi = Rational::from_float(iv.hi).expect("finite");
            let m = simplest_fraction(&lo, &hi).denom().clone();
            if m <= BigInt::from(mmax) {
                order[i] = Some(usize::try_from(m).expect("small order"));
            }
        }
        if again {
            continue;
        }
        let mut cands: BTreeSet<usize> = order.iter().flatten().copied().collect();
        cands.retain(|&m| phi[m] as usize <= n);
        let mut parts = Vec::new();
        let mut taken = vec![false; boxes.len()];
        for m in cands {
            let c = cyclotomic(m);
            let Some(q) = rest.div_exact(&c) else { continue };
            let idx: Vec<usize> = (0..boxes.len()).filter(|&i| order[i] == Some(m)).collect();
            if idx.len() == phi[m] as usize {
                for &i in &idx {
                    taken[i] = true;
                }
                parts.push((m, idx.iter().map(|&i| with_id(&boxes[i], &c)).collect()));
                rest = q;
            } else {
                // another root shares an argument k/m: separate radially
                for &i in &idx {
                    let r = boxes[i].radius_f64() * 1e-4;
                    boxes[i] = refine(f, &boxes[i], r)?;
                }
                again = true;
                break;
            }
        }
        if again {
            rest = f.clone();
            continue;
        }
        let rest_roots = (0..boxes.len())
            .filter(|&i| !taken[i])
            .map(|i| with_id(&boxes[i], &rest))
            .collect();
        return Ok(CycloSplit { parts, rest, rest_roots });
    }
    Err(RootError::PrecisionExhausted { bits: 0, radii: boxes.iter().map(RootBox::radius_f64).collect() })
}

/// The box re-labelled as isolating a root of the divisor `g`.
pub(crate) fn with_id(b: &RootBox, g: &IntPoly) -> RootBox {
    RootBox { poly_id: poly_id(g), ..b.clone() }
}

/// Orders m (ascending) such that `Φ_m` divides the squarefree `f`.
pub fn cyclotomic_orders(f: &IntPoly, boxes: &[RootBox]) -> Result<Vec<usize>, RootError> {
    Ok(split_cyclotomic(f, boxes)?.parts.into_iter().map(|(m, _)| m).collect())
}

fn max_order_cached(n: usize) -> usize {
    use std::sync::Mutex;
    static CACHE: Mutex<Vec<(usize, usize)>> = Mutex::new(Vec::new());
    if let Some(&(_, m)) = CACHE.lock().unwrap().iter().find(|(k, _)| *k == n) {
        return m;
    }
    let m = max_order_for_degree(n);
    CACHE.lock().unwrap().push((n, m));
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::find_roots;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic(2), IntPoly::from_i64s(&[1, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64s(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64s(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(105).deg(), 48);
        // Φ_105 famously has a coefficient -2
        assert!(cyclotomic(105).coeffs().iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn simplest_fraction_examples() {
        let r = |s: &str| crate::exactnum::parse_rational(s).unwrap();
        assert_eq!(simplest_fraction(&r("3/10"), &r("4/10")), r("1/3"));
        assert_eq!(simplest_fraction(&r("-1/10"), &r("1/10")), r("0"));
        assert_eq!(simplest_fraction(&r("1/2"), &r("1/2")), r("1/2"));
    }

    #[test]
    fn detects_cyclotomic_factors() {
        // (x^2+x+1)(x^4+1)(x - 2)(x^2 - x - 1)
        let f = &(&(&cyclotomic(3) * &cyclotomic(8)) * &IntPoly::from_i64s(&[-2, 1]))
            * &IntPoly::from_i64s(&[-1, -1, 1]);
        let b = find_roots(&f, 1e-12).unwrap();
        assert_eq!(cyclotomic_orders(&f, &b).unwrap(), vec![3, 8]);
        let s = split_cyclotomic(&f, &b).unwrap();
        assert_eq!(s.parts[0].1.len(), 2);
        assert_eq!(s.parts[1].1.len(), 4);
        assert_eq!(s.rest_roots.len(), 3);
        assert_eq!(s.rest.deg(), 3);
        let salem = IntPoly::from_i64s(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let b = find_roots(&salem, 1e-12).unwrap();
        assert!(cyclotomic_orders(&salem, &b).unwrap().is_empty());
    }

    #[test]
    fn max_orders() {
        assert_eq!(max_order_for_degree(1), 2);
        assert_eq!(max_order_for_degree(2), 6);
        assert_eq!(max_order_for_degree(4), 12);
    }
}
