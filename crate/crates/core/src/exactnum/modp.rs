//! Dense polynomials over a small prime field F_p (p < 2^31), coefficient
//! vectors in ascending order with no trailing zeros.

pub type Fp = Vec<u64>;

pub fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    // p < 2^31 so each product is < 2^62; reduce after every addition
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo `m` (m nonzero).
pub fn rem(a: &[u64], m: &[u64], p: u64) -> Fp {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * inv % p;
        if c != 0 {
            let shift = top - dm;
            for (k, &mk) in m.iter().enumerate() {
                r[shift + k] = (r[shift + k] + p - c * mk % p) % p;
            }
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Quotient and remainder of `a` by `m`.
pub fn divrem(a: &[u64], m: &[u64], p: u64) -> (Fp, Fp) {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    if r.len() <= dm {
        return (Vec::new(), trim(r));
    }
    let inv = inv_mod(m[dm], p);
    let mut q = vec![0u64; r.len() - dm];
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * inv % p;
        let shift = top - dm;
        q[shift] = c;
        if c != 0 {
            for (k, &mk) in m.iter().enumerate() {
                r[shift + k] = (r[shift + k] + p - c * mk % p) % p;
            }
        }
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(a: &[u64], p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|&x| x * inv % p).collect()
        }
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Fp {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn derivative(a: &[u64], p: u64) -> Fp {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

/// `base^e mod m`.
pub fn pow_rem(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Fp {
    let mut acc: Fp = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        e >>= 1;
        if e > 0 {
            b = rem(&mul(&b, &b, p), m, p);
        }
    }
    acc
}

pub fn is_squarefree(a: &[u64], p: u64) -> bool {
    gcd(a, &derivative(a, p), p).len() == 1
}

/// Distinct-degree factorisation of a squarefree `f` (degree ≥ 1, leading
/// coefficient nonzero mod p). Returns `(d, count)` pairs: `f` has `count`
/// irreducible factors of degree `d`. With `max_d = Some(D)` only degrees
/// up to `D` are split off, and the remaining cofactor degree is returned
/// separately (its factors all have degree > D).
pub fn distinct_degree(f: &[u64], p: u64, max_d: Option<usize>) -> (Vec<(usize, usize)>, usize) {
    let mut rest = monic(f, p);
    let mut out = Vec::new();
    let x: Fp = vec![0, 1];
    let mut h = rem(&x, &rest, p);
    let mut d = 0;
    loop {
        let deg_rest = rest.len().saturating_sub(1);
        if deg_rest == 0 {
            return (out, 0);
        }
        if 2 * (d + 1) > deg_rest {
            out.push((deg_rest, 1));
            return (out, 0);
        }
        d += 1;
        if max_d.is_some_and(|m| d > m) {
            return (out, deg_rest);
        }
        h = pow_rem(&h, p, &rest, p);
        let g = gcd(&rest, &sub(&h, &x, p), p);
        if g.len() > 1 {
            out.push((d, (g.len() - 1) / d));
            rest = divrem(&rest, &g, p).0;
            rest = monic(&rest, p);
            h = rem(&h, &rest, p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ddf_small() {
        // (x^2+1)(x+1)(x+2) over F_3: x^2+1 irreducible mod 3
        let f = mul(&mul(&[1, 0, 1], &[1, 1], 3), &[2, 1], 3);
        let (dd, rest) = distinct_degree(&f, 3, None);
        assert_eq!(rest, 0);
        assert_eq!(dd, vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn divrem_is_consistent() {
        let p = 101;
        let a = vec![5, 7, 0, 3, 9, 1];
        let m = vec![2, 0, 4];
        let (q, r) = divrem(&a, &m, p);
        let back = {
            let qm = mul(&q, &m, p);
            let n = qm.len().max(r.len());
            trim((0..n)
                .map(|i| (qm.get(i).unwrap_or(&0) + r.get(i).unwrap_or(&0)) % p)
                .collect())
        };
        assert_eq!(back, a);
    }
}
