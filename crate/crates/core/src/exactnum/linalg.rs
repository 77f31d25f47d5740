//! Small exact linear algebra over Q and Z.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Row-reduces `m` in place to reduced echelon form and returns the pivot
/// columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Solves `a x = b` for square nonsingular `a`; `None` if singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.iter().map(|r| r[n].clone()).collect())
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Integer vector with all entries divided by their gcd and the first
/// nonzero entry made positive.
pub fn primitive_vector(v: &[BigInt]) -> Vec<BigInt> {
    use num_integer::Integer;
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x / &g).collect();
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in out.iter_mut() {
            *x = -&*x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn rank_and_solve() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]];
        assert_eq!(rank(&m), 2);
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve(&a, &[q(3), q(5)]).unwrap();
        assert_eq!(x, vec![Rational::new(4.into(), 5.into()), Rational::new(7.into(), 5.into())]);
        assert!(solve(&[vec![q(1), q(1)], vec![q(2), q(2)]], &[q(0), q(0)]).is_none());
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m: Vec<Vec<BigInt>> = [[0i64, 2, 1], [3, -1, 4], [5, 2, -2]]
            .iter()
            .map(|r| r.iter().map(|&x| x.into()).collect())
            .collect();
        // expansion along the first row
        let expect = -2 * (3 * -2 - 4 * 5) + (3 * 2 - (-1) * 5);
        assert_eq!(det_bareiss(&m), BigInt::from(expect));
    }
}
