//! Binary floating values `m * 2^e` with arbitrary-size mantissa. Arithmetic
//! is exact except for the explicit `round`/`div` operations, which is what
//! lets root certificates be checked without rounding error.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

/// `x * 2^k` without intermediate overflow.
pub fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(k as i32)
}

impl Dyadic {
    pub fn new(m: BigInt, e: i64) -> Self {
        if m.is_zero() {
            return Dyadic { m, e: 0 };
        }
        let tz = m.trailing_zeros().unwrap_or(0);
        Dyadic { m: m >> tz, e: e + tz as i64 }
    }

    pub fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    pub fn one() -> Self {
        Dyadic { m: BigInt::one(), e: 0 }
    }

    pub fn from_int(n: BigInt) -> Self {
        Self::new(n, 0)
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite value {x}");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        Self::new(BigInt::from(mant) * sign, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    /// Bit length of the mantissa.
    pub fn bits(&self) -> u64 {
        self.m.bits()
    }

    /// ⌊log2 |x|⌋ (undefined for zero; returns i64::MIN).
    pub fn ilog2(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.e + self.m.bits() as i64 - 1
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.m.bits() as i64;
        let shift = (b - 64).max(0);
        let top = (&self.m >> shift).to_f64().unwrap_or(0.0);
        ldexp(top, self.e + shift)
    }

    /// Largest f64 not above the value.
    pub fn to_f64_down(&self) -> f64 {
        let x = self.to_f64();
        if x.is_finite() && Dyadic::from_f64(x) > *self {
            x.next_down()
        } else {
            x
        }
    }

    /// Smallest f64 not below the value.
    pub fn to_f64_up(&self) -> f64 {
        let x = self.to_f64();
        if x.is_finite() && Dyadic::from_f64(x) < *self {
            x.next_up()
        } else {
            x
        }
    }

    pub fn to_rational(&self) -> Rational {
        if self.e >= 0 {
            Rational::from_integer(&self.m << self.e as usize)
        } else {
            Rational::new(self.m.clone(), BigInt::one() << (-self.e) as usize)
        }
    }

    /// Nearest dyadic with `prec`-bit mantissa (ties away from zero).
    pub fn round(&self, prec: u64) -> Self {
        let b = self.m.bits();
        if b <= prec {
            return self.clone();
        }
        let shift = b - prec;
        let half = BigInt::one() << (shift - 1);
        let mag = self.m.abs() + half;
        let mut q = mag >> shift;
        if self.m.is_negative() {
            q = -q;
        }
        Self::new(q, self.e + shift as i64)
    }

    /// Upper bound with at most `prec + 1` mantissa bits.
    pub fn round_up(&self, prec: u64) -> Self {
        let b = self.m.bits();
        if b <= prec {
            return self.clone();
        }
        let shift = b - prec;
        let mut q = self.m.div_floor(&(BigInt::one() << shift));
        if (&q << shift) != self.m {
            q += 1;
        }
        Self::new(q, self.e + shift as i64)
    }

    /// Lower bound with at most `prec` mantissa bits.
    pub fn round_down(&self, prec: u64) -> Self {
        let b = self.m.bits();
        if b <= prec {
            return self.clone();
        }
        let shift = b - prec;
        Self::new(self.m.div_floor(&(BigInt::one() << shift)), self.e + shift as i64)
    }

    /// Quotient rounded to `prec` bits.
    pub fn div(&self, o: &Dyadic, prec: u64) -> Self {
        assert!(!o.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let k = (prec + o.m.bits() + 2).saturating_sub(self.m.bits()) as usize;
        let num = &self.m << k;
        let q = num.div_floor(&o.m);
        Self::new(q, self.e - o.e - k as i64).round(prec)
    }

    /// Rounded square root of a nonnegative value.
    pub fn sqrt(&self, prec: u64) -> Self {
        assert!(!self.is_negative());
        if self.is_zero() {
            return Self::zero();
        }
        let mut k = (2 * prec + 4).saturating_sub(self.m.bits()) as i64;
        if (self.e - k) % 2 != 0 {
            k += 1;
        }
        let s = (&self.m << k as usize).sqrt();
        Self::new(s, (self.e - k) / 2).round(prec)
    }

    pub fn abs(&self) -> Self {
        Dyadic { m: self.m.abs(), e: self.e }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Dyadic { m: self.m.clone(), e: if self.is_zero() { 0 } else { self.e + k } }
    }

    /// Integer mantissa after aligning to exponent `e` (requires e ≤ self.e).
    pub fn aligned(&self, e: i64) -> BigInt {
        debug_assert!(self.is_zero() || e <= self.e);
        if self.is_zero() {
            BigInt::zero()
        } else {
            &self.m << (self.e - e) as usize
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self.m.sign(), o.m.sign()) {
            (a, b) if a != b => {
                let rank = |s: Sign| match s {
                    Sign::Minus => 0,
                    Sign::NoSign => 1,
                    Sign::Plus => 2,
                };
                return rank(a).cmp(&rank(b));
            }
            (Sign::NoSign, _) => return Ordering::Equal,
            _ => {}
        }
        let e = self.e.min(o.e);
        self.aligned(e).cmp(&o.aligned(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl std::ops::Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        Dyadic::new(self.aligned(e) + o.aligned(e), e)
    }
}

impl std::ops::Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, o: &Dyadic) -> Dyadic {
        self + &(-o)
    }
}

impl std::ops::Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, o: Dyadic) -> Dyadic {
        &self - &o
    }
}

impl std::ops::Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.m * &o.m, self.e + o.e)
    }
}

impl std::ops::Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { m: -&self.m, e: self.e }
    }
}

/// Complex number with dyadic parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyComplex {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl DyComplex {
    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        DyComplex { re, im }
    }

    pub fn zero() -> Self {
        DyComplex { re: Dyadic::zero(), im: Dyadic::zero() }
    }

    pub fn from_c64(z: Complex64) -> Self {
        DyComplex { re: Dyadic::from_f64(z.re), im: Dyadic::from_f64(z.im) }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(&self) -> Dyadic {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn conj(&self) -> Self {
        DyComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn round(&self, prec: u64) -> Self {
        DyComplex { re: self.re.round(prec), im: self.im.round(prec) }
    }

    pub fn add(&self, o: &Self) -> Self {
        DyComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        DyComplex { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        DyComplex {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    /// Rounded product, keeping intermediate sizes bounded.
    pub fn mul_r(&self, o: &Self, prec: u64) -> Self {
        self.mul(o).round(prec)
    }

    pub fn div(&self, o: &Self, prec: u64) -> Self {
        let d = o.norm_sqr();
        let n = self.mul(&o.conj());
        DyComplex { re: n.re.div(&d, prec), im: n.im.div(&d, prec) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Smallest exponent among the parts (for alignment to Gaussian integers).
    pub fn min_exponent(&self) -> i64 {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => 0,
            (true, false) => self.im.exponent(),
            (false, true) => self.re.exponent(),
            (false, false) => self.re.exponent().min(self.im.exponent()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn f64_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
            let d = Dyadic::from_f64(x);
            prop_assert_eq!(d.to_f64(), x);
            prop_assert!(d.to_f64_down() <= x && d.to_f64_up() >= x);
        }

        #[test]
        fn exact_ops_match_rationals(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            let (da, db) = (Dyadic::from_f64(a), Dyadic::from_f64(b));
            prop_assert_eq!((&da + &db).to_rational(), da.to_rational() + db.to_rational());
            prop_assert_eq!((&da * &db).to_rational(), da.to_rational() * db.to_rational());
            prop_assert_eq!(da.cmp(&db), da.to_rational().cmp(&db.to_rational()));
        }

        #[test]
        fn division_is_accurate(a in 1e-3f64..1e3, b in 1e-3f64..1e3) {
            let q = Dyadic::from_f64(a).div(&Dyadic::from_f64(b), 200);
            let err = (q.to_rational() * Dyadic::from_f64(b).to_rational() - Dyadic::from_f64(a).to_rational()).abs();
            let tol = Dyadic::new(BigInt::one(), -180).to_rational();
            prop_assert!(err < tol);
        }
    }

    #[test]
    fn rounding_directions() {
        let third = Dyadic::one().div(&Dyadic::from_int(3.into()), 100);
        let up = third.round_up(20);
        assert!(up >= third && up.bits() <= 21);
        let s = Dyadic::from_int(2.into()).sqrt(80);
        assert!((s.to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }
}
