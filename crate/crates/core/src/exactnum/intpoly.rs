use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{modp, ExactError, Rational};

/// Dense univariate polynomial with integer coefficients, ascending order,
/// never carrying trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

const MOD_PRIMES: [u64; 12] = [
    1_000_003, 998_244_353, 1_000_000_007, 754_974_721, 167_772_161, 469_762_049,
    2_147_483_647, 1_045_430_273, 1_051_721_729, 1_053_818_881, 13_631_489, 104_857_601,
];

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { c: Vec::new() }
    }

    pub fn constant(a: BigInt) -> Self {
        Self::new(vec![a])
    }

    /// `a x^k`.
    pub fn monomial(a: BigInt, k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = a;
        Self::new(c)
    }

    /// x - a
    pub fn linear_root(a: BigInt) -> Self {
        Self::new(vec![-a, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.c.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        self.c
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * x + Rational::from_integer(a.clone()))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.c
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect())
    }

    pub fn scale(&self, a: &BigInt) -> Self {
        Self::new(self.c.iter().map(|x| x * a).collect())
    }

    /// Sum of absolute values of coefficients.
    pub fn length(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).sum()
    }

    /// Largest absolute coefficient.
    pub fn max_norm(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Signed content and primitive part with positive leading coefficient.
    pub fn content_primitive(&self) -> (BigInt, Self) {
        if self.is_zero() {
            return (BigInt::zero(), Self::zero());
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        (g.clone(), Self::new(self.c.iter().map(|x| x / &g).collect()))
    }

    pub fn primitive_part(&self) -> Self {
        self.content_primitive().1
    }

    /// Number of leading zero coefficients, i.e. the power of x dividing self.
    pub fn x_valuation(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }

    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.c[k.min(self.c.len())..].to_vec())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        Self::new(c)
    }

    /// x^deg f(1/x)
    pub fn reverse(&self) -> Self {
        let mut c = self.c.clone();
        c.reverse();
        Self::new(c)
    }

    /// f(-x)
    pub fn negate_var(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .map(|(i, a)| if i % 2 == 1 { -a } else { a.clone() })
                .collect(),
        )
    }

    /// f(x^k)
    pub fn inflate(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.deg() * k + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Self::new(c)
    }

    /// f(x + a)
    pub fn taylor_shift(&self, a: &BigInt) -> Self {
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        Self::new(c)
    }

    /// Exact quotient over Z, or `None` if `d` does not divide `self` in Z[x].
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let mut r = self.c.clone();
        let dl = d.lc();
        let dd = d.deg();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qq, rr) = top.div_rem(&dl);
            if !rr.is_zero() {
                return None;
            }
            for (i, di) in d.c.iter().enumerate() {
                if !di.is_zero() {
                    r[k + i] -= &qq * di;
                }
            }
            q[k] = qq;
        }
        r.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    /// Pseudo-remainder: lc(d)^(deg f - deg d + 1) f mod d.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let mut r = self.clone();
        let dl = d.lc();
        let dd = d.deg();
        while !r.is_zero() && r.deg() >= dd {
            let shift = r.deg() - dd;
            let top = r.lc();
            let mut c: Vec<BigInt> = r.c.iter().map(|x| x * &dl).collect();
            for (i, di) in d.c.iter().enumerate() {
                c[shift + i] -= &top * di;
            }
            r = Self::new(c);
        }
        r
    }

    pub fn to_modp(&self, p: u64) -> modp::Fp {
        let pb = BigInt::from(p);
        modp::trim(
            self.c
                .iter()
                .map(|x| x.mod_floor(&pb).to_u64().expect("reduced residue fits"))
                .collect(),
        )
    }

    /// Primes not dividing the leading coefficient, for modular shortcuts.
    pub fn good_primes(&self) -> impl Iterator<Item = u64> + '_ {
        let l = self.lc();
        MOD_PRIMES.iter().copied().filter(move |&p| !(&l % p).is_zero())
    }

    /// Certifies `gcd(self, other) = 1` in Q[x] by a single prime where the
    /// degrees are preserved and the modular gcd is constant.
    fn coprime_by_modp(&self, other: &IntPoly) -> bool {
        let lo = other.lc();
        for p in self.good_primes().filter(|&p| !(&lo % p).is_zero()).take(3) {
            if modp::gcd(&self.to_modp(p), &other.to_modp(p), p).len() == 1 {
                return true;
            }
        }
        false
    }

    /// Primitive gcd in Z[x] (positive leading coefficient), times the gcd of
    /// the contents.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.content_primitive().1.scale(&other.content());
        }
        if other.is_zero() {
            return self.content_primitive().1.scale(&self.content());
        }
        let cg = self.content().gcd(&other.content());
        if self.coprime_by_modp(other) {
            return Self::constant(cg);
        }
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part() };
        }
        a.primitive_part().scale(&cg)
    }

    /// Squarefree test; cheap modular certificate first.
    pub fn is_squarefree(&self) -> bool {
        if self.deg() <= 1 {
            return true;
        }
        let d = self.derivative();
        if self.coprime_by_modp(&d) {
            return true;
        }
        self.gcd(&d).is_constant()
    }

    /// Yun's squarefree decomposition of the primitive part:
    /// `prim(self) = prod a_i^i`, returned as `(a_i, i)` with nonconstant `a_i`.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, u32)> {
        let f = self.primitive_part();
        if f.deg() == 0 {
            return Vec::new();
        }
        if f.is_squarefree() {
            return vec![(f, 1)];
        }
        let fp = f.derivative();
        let g = f.gcd(&fp).primitive_part();
        let mut b = f.div_exact(&g).expect("gcd divides f");
        let mut c = quotient_up_to_content(&fp, &g);
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        while b.deg() > 0 {
            let a = b.gcd(&d).primitive_part();
            if a.deg() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides b");
            c = quotient_up_to_content(&d, &a);
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> IntPoly {
        let mut acc = IntPoly::constant(BigInt::one());
        for (a, _) in self.squarefree_decomposition() {
            acc = &acc * &a;
        }
        acc
    }

    /// `±self == self.reverse()`, i.e. the root set is closed under `z -> 1/z`.
    pub fn is_reciprocal(&self) -> bool {
        let r = self.reverse();
        self.x_valuation() == 0 && (r == *self || r == -self)
    }

    /// Mignotte bound on the max-norm of any degree-`d` factor.
    pub fn mignotte_bound(&self, d: usize) -> BigInt {
        // ||g||_inf <= C(d, floor(d/2)) * ||f||_2 (+1 for rounding the sqrt)
        let norm2: BigInt = self.c.iter().map(|x| x * x).sum();
        let s = norm2.sqrt() + BigInt::one();
        binomial(d, d / 2) * s
    }

    pub fn parse_coeffs(items: &[String]) -> Result<Self, ExactError> {
        let c = items
            .iter()
            .map(|s| {
                let t = s.trim();
                t.parse::<BigInt>().map_err(|_| ExactError::BadPolynomial(format!("bad integer `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(c))
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.c.iter().map(|x| x.to_string()).collect()
    }
}

/// Exact quotient when the divisor is primitive and divides up to content.
fn quotient_up_to_content(a: &IntPoly, d: &IntPoly) -> IntPoly {
    a.div_exact(d).unwrap_or_else(|| {
        let (ca, pa) = a.content_primitive();
        pa.div_exact(d).expect("divides primitive part").scale(&ca)
    })
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.sign() == Sign::Minus;
            let m = a.abs();
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let coef = if m.is_one() && i > 0 { String::new() } else { m.to_string() };
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            write!(f, "{sign}{coef}{var}")?;
            first = false;
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, o: &IntPoly) -> IntPoly {
        let n = self.c.len().max(o.c.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, o: &IntPoly) -> IntPoly {
        let n = self.c.len().max(o.c.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        IntPoly::new(c)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.c.iter().map(|x| -x).collect())
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, o: IntPoly) -> IntPoly {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn displays() {
        assert_eq!(p(&[1, -2, 1]).to_string(), "x^2 - 2x + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let f = p(&[3, -1, 0, 2, 5]);
        let g = f.taylor_shift(&BigInt::from(-2));
        for x in -3..4 {
            assert_eq!(g.eval(&BigInt::from(x)), f.eval(&BigInt::from(x - 2)));
        }
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^3 (x+2)^2 (x^2+1)
        let a = p(&[-1, 1]);
        let b = p(&[2, 1]);
        let c = p(&[1, 0, 1]);
        let f = &(&(&(&a * &a) * &a) * &(&b * &b)) * &c;
        let mut d = f.squarefree_decomposition();
        d.sort_by_key(|x| x.1);
        assert_eq!(d, vec![(c, 1), (b, 2), (a, 3)]);
    }

    #[test]
    fn reciprocal_detection() {
        assert!(p(&[1, -3, 1]).is_reciprocal());
        assert!(p(&[1, 0, -1]).is_reciprocal());
        assert!(!p(&[1, 2, 3]).is_reciprocal());
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-20i64..=20, 1..8).prop_map(|v| IntPoly::from_i64s(&v))
    }

    proptest! {
        #[test]
        fn div_exact_inverts_mul(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let ab = &a * &b;
            prop_assert_eq!(ab.div_exact(&b), Some(a));
        }

        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assume!(!c.is_zero() && !a.is_zero() && !b.is_zero());
            let (ac, bc) = (&a * &c, &b * &c);
            let g = ac.gcd(&bc);
            prop_assert!(ac.primitive_part().div_exact(&g.primitive_part()).is_some());
            prop_assert!(bc.primitive_part().div_exact(&g.primitive_part()).is_some());
            prop_assert!(g.primitive_part().div_exact(&c.primitive_part()).is_some());
        }

        #[test]
        fn derivative_is_linear(a in small_poly(), b in small_poly()) {
            prop_assert_eq!((&a + &b).derivative(), &a.derivative() + &b.derivative());
        }

        #[test]
        fn squarefree_part_has_same_roots(a in small_poly(), b in small_poly()) {
            prop_assume!(a.deg() >= 1);
            let f = &(&a * &a) * &b;
            prop_assume!(!f.is_zero());
            let s = f.squarefree_part();
            prop_assert!(s.is_squarefree());
            prop_assert!(f.primitive_part().div_exact(&s).is_some());
        }
    }
}
