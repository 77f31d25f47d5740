use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ExactError;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// Parses `p/q` or `p`. Decimal and exponent notation are rejected so that no
/// binary-float value can silently enter an exact computation.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let bad = || ExactError::BadRational(s.to_string());
    let t = s.trim();
    let parse_int = |x: &str| -> Result<BigInt, ExactError> {
        let x = x.trim();
        let digits = x.strip_prefix(['-', '+']).unwrap_or(x);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        x.parse::<BigInt>().map_err(|_| bad())
    };
    match t.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(parse_int(p)?, q))
        }
        None => Ok(Rational::from_integer(parse_int(t)?)),
    }
}

/// Canonical `p/q` rendering (`p` when the denominator is one).
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("-6/4").unwrap(), Rational::new((-3).into(), 2.into()));
        assert_eq!(parse_rational("7").unwrap(), Rational::from_integer(7.into()));
        assert_eq!(parse_rational(" 1 / 3 ").unwrap(), Rational::new(1.into(), 3.into()));
    }

    #[test]
    fn rejects_decimals_and_garbage() {
        for s in ["0.5", "1e3", "1/0", "", "a/b", "1/2/3", "--1"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn round_trips() {
        for s in ["-3/2", "0", "12345678901234567890/7"] {
            assert_eq!(rational_to_string(&parse_rational(s).unwrap()), s);
        }
    }
}
