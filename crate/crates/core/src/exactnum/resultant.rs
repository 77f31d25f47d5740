use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{linalg::det_bareiss, IntPoly, Rational};

/// Polynomial in `t` whose coefficients are integer polynomials in `w`;
/// `coeffs[k]` multiplies `t^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    pub coeffs: Vec<IntPoly>,
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<IntPoly>) -> Self {
        while coeffs.last().is_some_and(IntPoly::is_zero) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    /// A polynomial in `t` alone.
    pub fn from_t(f: &IntPoly) -> Self {
        Self::new(f.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect())
    }

    pub fn deg_t(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn deg_w(&self) -> usize {
        self.coeffs.iter().map(IntPoly::deg).max().unwrap_or(0)
    }

    fn at_w(&self, w: &BigInt) -> Vec<BigInt> {
        self.coeffs.iter().map(|c| c.eval(w)).collect()
    }
}

/// Sylvester determinant for coefficient vectors of formal degrees
/// `a.len()-1`, `b.len()-1`.
fn sylvester_det(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, x) in a.iter().rev().enumerate() {
            rows[i][i + j] = x.clone();
        }
    }
    for i in 0..m {
        for (j, x) in b.iter().rev().enumerate() {
            rows[n + i][i + j] = x.clone();
        }
    }
    det_bareiss(&rows)
}

/// `Res_t(f, g)` as a polynomial in `w`, by evaluating the formal Sylvester
/// determinant at integer points and interpolating.
pub fn resultant_bivariate(f: &BiPoly, g: &BiPoly) -> IntPoly {
    if f.coeffs.is_empty() || g.coeffs.is_empty() {
        return IntPoly::zero();
    }
    let bound = f.deg_t() * g.deg_w() + g.deg_t() * f.deg_w();
    let xs: Vec<BigInt> = (0..=bound as i64)
        .map(|k| BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 }))
        .collect();
    let ys: Vec<BigInt> = xs.iter().map(|x| sylvester_det(&f.at_w(x), &g.at_w(x))).collect();
    interpolate(&xs, &ys)
}

/// Newton interpolation through integer nodes; the result is known to have
/// integer coefficients.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> IntPoly {
    let n = xs.len();
    let mut dd: Vec<Rational> = ys.iter().map(|y| Rational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = Rational::from_integer(&xs[i] - &xs[i - j]);
            dd[i] = num / den;
        }
    }
    // expand sum dd[j] * prod_{i<j} (w - x_i)
    let mut acc: Vec<Rational> = vec![Rational::zero(); n];
    for j in (0..n).rev() {
        // acc = acc * (w - x_j) + dd[j]
        let mut next = vec![Rational::zero(); n];
        for (k, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += a;
            }
            next[k] -= a * Rational::from_integer(xs[j].clone());
        }
        next[0] += &dd[j];
        acc = next;
    }
    IntPoly::new(
        acc.into_iter()
            .map(|r| {
                assert!(r.is_integer(), "resultant interpolation produced a non-integer");
                r.to_integer()
            })
            .collect(),
    )
}

/// `Res_t(f(t), t^2 - w t + 1)`: the polynomial in `w` whose roots are
/// `t + 1/t` over the roots `t` of `f`. Uses the reduction
/// `t^{k+1} ≡ -Q_k + (P_k + w Q_k) t` to write `f ≡ A + B t`; the resultant is
/// then `A^2 + A B w + B^2`.
pub fn trace_resultant(f: &IntPoly) -> IntPoly {
    let w = IntPoly::from_i64s(&[0, 1]);
    let mut p = IntPoly::constant(BigInt::one());
    let mut q = IntPoly::zero();
    let mut a = IntPoly::zero();
    let mut b = IntPoly::zero();
    for (k, fk) in f.coeffs().iter().enumerate() {
        if k > 0 {
            let np = -&q;
            let nq = &p + &(&w * &q);
            p = np;
            q = nq;
        }
        if !fk.is_zero() {
            a = &a + &p.scale(fk);
            b = &b + &q.scale(fk);
        }
    }
    &(&(&a * &a) + &(&(&a * &b) * &w)) + &(&b * &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h() -> BiPoly {
        // t^2 - w t + 1
        BiPoly::new(vec![
            IntPoly::from_i64s(&[1]),
            IntPoly::from_i64s(&[0, -1]),
            IntPoly::from_i64s(&[1]),
        ])
    }

    #[test]
    fn trace_of_golden_root() {
        // t^2 - t - 1 has roots phi, -1/phi; t + 1/t is sqrt5 or -sqrt5
        let r = trace_resultant(&IntPoly::from_i64s(&[-1, -1, 1]));
        assert_eq!(r, IntPoly::from_i64s(&[5, 0, -1]));
    }

    #[test]
    fn classic_resultant() {
        // Res_t(t^2 - w, t - 1) = 1 - w
        let f = BiPoly::new(vec![IntPoly::from_i64s(&[0, -1]), IntPoly::zero(), IntPoly::from_i64s(&[1])]);
        let g = BiPoly::from_t(&IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(resultant_bivariate(&f, &g), IntPoly::from_i64s(&[1, -1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn fast_path_matches_general(c in prop::collection::vec(-9i64..=9, 2..7)) {
            let f = IntPoly::from_i64s(&c);
            prop_assume!(f.deg() >= 1);
            let general = resultant_bivariate(&BiPoly::from_t(&f), &h());
            prop_assert_eq!(trace_resultant(&f), general);
        }
    }
}
