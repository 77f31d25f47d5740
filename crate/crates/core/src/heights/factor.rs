//! Factorisation of integer polynomials of modest degree by subset-product
//! reconstruction from certified roots.
//!
//! After content, powers of `x`, the squarefree split and exact cyclotomic
//! removal, a factor of degree `d` is sought among products of `d` roots:
//! `lc(F)·∏(x - α)` is evaluated in disk arithmetic, every coefficient disk
//! must hold an integer within the Mignotte bound, and survivors are checked
//! by exact division. Modular distinct-degree factorisation prunes the degrees
//! that can occur at all; it alone certifies irreducibility beyond the cap.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclotomic::{cyclotomic, split_cyclotomic, with_id};
use super::HeightError;
use crate::exactnum::{modp, IntPoly};
use crate::roots::{find_roots, interval::Disk, refine, RootBox};

#[derive(Clone, Debug)]
pub struct FactorOptions {
    /// Squarefree parts up to this degree are factored completely.
    pub degree_cap: usize,
    /// Modular analysis runs the full distinct-degree split up to this degree;
    /// above it only degrees up to `probe_degree` are split off.
    pub full_analysis_max_degree: usize,
    /// Factor degrees examined (modularly and by subset search) beyond the cap.
    pub probe_degree: usize,
    /// Number of primes used for degree analysis.
    pub num_primes: usize,
    /// Maximum number of root subsets tested per factor degree.
    pub subset_budget: u64,
    /// Initial root-box radius.
    pub root_radius: f64,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            degree_cap: 24,
            full_analysis_max_degree: 80,
            probe_degree: 8,
            num_primes: 24,
            subset_budget: 2_000_000,
            root_radius: 1e-14,
        }
    }
}

impl FactorOptions {
    pub fn with_cap(degree_cap: usize) -> Self {
        FactorOptions { degree_cap, ..Self::default() }
    }
}

/// One factor with its multiplicity and the certified boxes of its roots.
#[derive(Clone, Debug)]
pub struct Factor {
    /// Primitive, positive leading coefficient.
    pub poly: IntPoly,
    pub multiplicity: u32,
    /// Irreducibility certified.
    pub irreducible: bool,
    /// Certified lower bound on the degree of every irreducible factor of
    /// `poly` (equals its degree when irreducible).
    pub min_degree: usize,
    /// `Some(m)` when `poly = Φ_m`.
    pub cyclotomic: Option<usize>,
    pub roots: Vec<RootBox>,
}

#[derive(Clone, Debug)]
pub struct Factorization {
    /// Signed content: `f = content · ∏ poly^multiplicity`.
    pub content: BigInt,
    pub factors: Vec<Factor>,
}

impl Factorization {
    /// True when every factor is certified irreducible.
    pub fn is_complete(&self) -> bool {
        self.factors.iter().all(|f| f.irreducible)
    }

    pub fn product(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.content.clone());
        for f in &self.factors {
            for _ in 0..f.multiplicity {
                acc = &acc * &f.poly;
            }
        }
        acc
    }

    /// Plain `(factor, multiplicity)` list.
    pub fn pairs(&self) -> Vec<(IntPoly, u32)> {
        self.factors.iter().map(|f| (f.poly.clone(), f.multiplicity)).collect()
    }
}

/// Factorisation with the given degree cap and default options otherwise.
pub fn factor_smalldeg(f: &IntPoly, degree_cap: usize) -> Result<Factorization, HeightError> {
    factor_with(f, &FactorOptions::with_cap(degree_cap))
}

pub fn factor_with(f: &IntPoly, opts: &FactorOptions) -> Result<Factorization, HeightError> {
    if f.is_zero() {
        return Err(HeightError::ZeroPolynomial);
    }
    let (content, prim) = f.content_primitive();
    let mut factors = Vec::new();
    let v = prim.x_valuation();
    if v > 0 {
        let x = IntPoly::from_i64s(&[0, 1]);
        let root = RootBox::new(Complex64::new(0.0, 0.0), 0.0, crate::roots::poly_id(&x));
        factors.push(Factor {
            poly: x,
            multiplicity: v as u32,
            irreducible: true,
            min_degree: 1,
            cyclotomic: None,
            roots: vec![root],
        });
    }
    for (s, mult) in prim.shift_down(v).squarefree_decomposition() {
        let boxes = find_roots(&s, opts.root_radius)?;
        factor_squarefree(&s, boxes, mult, opts, &mut factors)?;
    }
    factors.sort_by(|a, b| a.poly.deg().cmp(&b.poly.deg()).then_with(|| a.poly.coeffs().cmp(b.poly.coeffs())));
    Ok(Factorization { content, factors })
}

/// Factors a squarefree primitive `s` with certified roots `boxes`, pushing
/// the factors (with multiplicity `mult`) onto `out`.
pub fn factor_squarefree(
    s: &IntPoly,
    boxes: Vec<RootBox>,
    mult: u32,
    opts: &FactorOptions,
    out: &mut Vec<Factor>,
) -> Result<(), HeightError> {
    let split = split_cyclotomic(s, &boxes)?;
    for (m, roots) in split.parts {
        let d = roots.len();
        out.push(Factor {
            poly: cyclotomic(m),
            multiplicity: mult,
            irreducible: true,
            min_degree: d,
            cyclotomic: Some(m),
            roots,
        });
    }
    factor_noncyclotomic(split.rest, split.rest_roots, mult, opts, out)
}

fn factor_noncyclotomic(
    mut f: IntPoly,
    mut roots: Vec<RootBox>,
    mult: u32,
    opts: &FactorOptions,
    out: &mut Vec<Factor>,
) -> Result<(), HeightError> {
    loop {
        let n = f.deg();
        if n == 0 {
            return Ok(());
        }
        let done = |f: IntPoly, roots: Vec<RootBox>, irreducible: bool, min_degree: usize| Factor {
            roots: roots.iter().map(|b| with_id(b, &f)).collect(),
            poly: f,
            multiplicity: mult,
            irreducible,
            min_degree,
            cyclotomic: None,
        };
        if n == 1 {
            out.push(done(f, roots, true, 1));
            return Ok(());
        }
        let full = n <= opts.full_analysis_max_degree;
        let reach = if n <= opts.degree_cap { n / 2 } else { opts.probe_degree.min(n / 2) };
        let possible = degree_analysis(&f, opts, if full { None } else { Some(reach) });
        let mut found = None;
        let mut min_open = None;
        for d in 1..=n / 2 {
            if !possible[d] {
                continue;
            }
            if d > reach {
                min_open = Some(d);
                break;
            }
            match search_degree(&f, &mut roots, d, opts)? {
                Search::Found(g, idx) => {
                    found = Some((g, idx));
                    break;
                }
                Search::None => {}
                Search::GaveUp => {
                    min_open = Some(d);
                    break;
                }
            }
        }
        match found {
            Some((g, idx)) => {
                let mut mine = Vec::new();
                let mut rest = Vec::new();
                for (i, b) in roots.into_iter().enumerate() {
                    if idx.contains(&i) {
                        mine.push(b);
                    } else {
                        rest.push(b);
                    }
                }
                f = f.div_exact(&g).expect("validated divisor");
                let d = g.deg();
                out.push(done(g, mine, true, d));
                roots = rest;
            }
            None => {
                match min_open {
                    None => out.push(done(f, roots, true, n)),
                    Some(d) => out.push(done(f, roots, false, d)),
                }
                return Ok(());
            }
        }
    }
}

/// `possible[d]` is false when no factor of degree `d` (1 ≤ d ≤ deg/2) can
/// exist over Z: for a prime p not dividing the leading coefficient with `f`
/// squarefree mod p, a factor over Z reduces to a product of irreducible
/// factors mod p, so `d` must be a subset sum of the modular factor degrees.
/// With `max_d` set, degrees above it are left possible.
pub fn degree_analysis(f: &IntPoly, opts: &FactorOptions, max_d: Option<usize>) -> Vec<bool> {
    let n = f.deg();
    let half = n / 2;
    let mut possible = vec![true; half + 1];
    possible[0] = false;
    let lc = f.lc();
    let mut used = 0;
    let watch = max_d.unwrap_or(half).min(half);
    for p in small_primes().iter().copied() {
        if used >= opts.num_primes || !possible[..=watch].iter().any(|&b| b) {
            break;
        }
        if (&lc % p).is_zero() {
            continue;
        }
        let fp = f.to_modp(p);
        if !modp::is_squarefree(&fp, p) {
            continue;
        }
        used += 1;
        let (dd, rest) = modp::distinct_degree(&fp, p, max_d);
        let mut sums = vec![false; half + 1];
        sums[0] = true;
        for (d, count) in dd {
            for _ in 0..count {
                for s in (d..=half).rev() {
                    if sums[s - d] {
                        sums[s] = true;
                    }
                }
            }
        }
        let cutoff = if rest > 0 { max_d.unwrap_or(half) } else { half };
        for d in 1..=cutoff.min(half) {
            possible[d] &= sums[d];
        }
    }
    possible
}

fn small_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static P: OnceLock<Vec<u64>> = OnceLock::new();
    P.get_or_init(|| {
        let mut v = Vec::new();
        let mut k = 2u64;
        while v.len() < 400 {
            if (2..).take_while(|d| d * d <= k).all(|d| k % d != 0) {
                v.push(k);
            }
            k += 1;
        }
        v
    })
}

enum Search {
    Found(IntPoly, Vec<usize>),
    None,
    GaveUp,
}

/// Groups roots into conjugation units: a certified real root, or a pair
/// `{α, ᾱ}` certified by the conjugate disk meeting exactly one other box.
/// Uncertain roots stay single, which only weakens pruning.
fn conjugation_units(roots: &[RootBox]) -> Vec<Vec<usize>> {
    let disks: Vec<Disk> = roots.iter().map(RootBox::disk).collect();
    let mut used = vec![false; roots.len()];
    let mut units = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let cj = disks[i].conj();
        let hits: Vec<usize> = (0..roots.len()).filter(|&j| cj.intersects(&disks[j])).collect();
        used[i] = true;
        if hits.len() == 1 && hits[0] != i && !used[hits[0]] {
            let j = hits[0];
            // symmetric check: the conjugate of j must only meet i
            let back: Vec<usize> =
                (0..roots.len()).filter(|&k| disks[j].conj().intersects(&disks[k])).collect();
            if back == vec![i] {
                used[j] = true;
                units.push(vec![i, j]);
                continue;
            }
        }
        units.push(vec![i]);
    }
    units
}

fn search_degree(
    f: &IntPoly,
    roots: &mut [RootBox],
    d: usize,
    opts: &FactorOptions,
) -> Result<Search, HeightError> {
    for _attempt in 0..4 {
        let units = conjugation_units(roots);
        let disks: Vec<Disk> = roots.iter().map(RootBox::disk).collect();
        let mut st = SubsetSearch {
            f,
            disks: &disks,
            units: &units,
            d,
            lc: f.lc().to_f64().unwrap_or(f64::INFINITY),
            bound: (f.mignotte_bound(d) * f.lc().abs()).to_f64().unwrap_or(f64::INFINITY),
            leaves: 0,
            budget: opts.subset_budget,
            ambiguous: false,
            chosen: Vec::new(),
        };
        let start = vec![Disk::point(Complex64::new(st.lc, 0.0))];
        match st.recurse(0, 0, start) {
            Some(r) => return Ok(Search::Found(r.0, r.1)),
            None if st.leaves > st.budget => return Ok(Search::GaveUp),
            None if !st.ambiguous => return Ok(Search::None),
            None => {
                for b in roots.iter_mut() {
                    let r = b.radius_f64() * 1e-12;
                    *b = refine(f, b, r)?;
                }
            }
        }
    }
    Ok(Search::GaveUp)
}

struct SubsetSearch<'a> {
    f: &'a IntPoly,
    disks: &'a [Disk],
    units: &'a [Vec<usize>],
    d: usize,
    lc: f64,
    bound: f64,
    leaves: u64,
    budget: u64,
    ambiguous: bool,
    chosen: Vec<usize>,
}

impl SubsetSearch<'_> {
    fn recurse(&mut self, from: usize, size: usize, prod: Vec<Disk>) -> Option<(IntPoly, Vec<usize>)> {
        if size == self.d {
            self.leaves += 1;
            return self.check(&prod);
        }
        for u in from..self.units.len() {
            if self.leaves > self.budget {
                return None;
            }
            let unit = &self.units[u];
            if size + unit.len() > self.d {
                continue;
            }
            let mut p = prod.clone();
            for &i in unit {
                p = mul_linear(&p, &self.disks[i]);
            }
            self.chosen.extend_from_slice(unit);
            let r = self.recurse(u + 1, size + unit.len(), p);
            self.chosen.truncate(self.chosen.len() - unit.len());
            if r.is_some() {
                return r;
            }
        }
        None
    }

    fn check(&mut self, prod: &[Disk]) -> Option<(IntPoly, Vec<usize>)> {
        let mut coeffs = Vec::with_capacity(prod.len());
        for c in prod {
            let re = c.re();
            let im = c.im();
            if !im.contains(0.0) {
                return None;
            }
            let k = c.c.re.round();
            if !re.contains(k) || k.abs() > self.bound {
                return None;
            }
            if c.r >= 0.25 {
                self.ambiguous = true;
                return None;
            }
            coeffs.push(BigInt::from(k as i128));
        }
        let g = IntPoly::new(coeffs).primitive_part();
        if g.deg() != self.d {
            return None;
        }
        self.f.div_exact(&g)?;
        Some((g, self.chosen.clone()))
    }
}

/// Multiplies a coefficient-disk polynomial (low to high) by `x - a`.
fn mul_linear(p: &[Disk], a: &Disk) -> Vec<Disk> {
    let mut out = Vec::with_capacity(p.len() + 1);
    let na = a.neg();
    for k in 0..=p.len() {
        let hi = if k >= 1 { Some(p[k - 1]) } else { None };
        let lo = if k < p.len() { Some(p[k].mul(&na)) } else { None };
        out.push(match (hi, lo) {
            (Some(h), Some(l)) => h.add(&l),
            (Some(h), None) => h,
            (None, Some(l)) => l,
            (None, None) => unreachable!(),
        });
    }
    out
}

/// `Φ_m` membership helper used by tests: product of the listed cyclotomic
/// polynomials.
pub fn cyclotomic_product(orders: &[usize]) -> IntPoly {
    orders.iter().fold(IntPoly::constant(BigInt::one()), |acc, &m| &acc * &cyclotomic(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn sorted_pairs(fz: &Factorization) -> Vec<(IntPoly, u32)> {
        let mut v = fz.pairs();
        v.sort_by(|a, b| a.0.coeffs().cmp(b.0.coeffs()));
        v
    }

    #[test]
    fn difference_of_squares() {
        let fz = factor_smalldeg(&p(&[-1, 0, 1]), 24).unwrap();
        assert!(fz.is_complete());
        assert_eq!(sorted_pairs(&fz), vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn x4_minus_1() {
        let fz = factor_smalldeg(&p(&[-1, 0, 0, 0, 1]), 24).unwrap();
        assert!(fz.is_complete());
        assert_eq!(fz.factors.len(), 3);
        assert_eq!(fz.product(), p(&[-1, 0, 0, 0, 1]));
        assert!(fz.factors.iter().any(|f| f.poly == p(&[1, 0, 1])));
    }

    #[test]
    fn golden_is_irreducible() {
        let fz = factor_smalldeg(&p(&[-1, -1, 1]), 24).unwrap();
        assert_eq!(fz.factors.len(), 1);
        assert!(fz.factors[0].irreducible);
        assert_eq!(fz.factors[0].roots.len(), 2);
    }

    #[test]
    fn content_power_of_x_and_multiplicity() {
        // -6 x^2 (x - 2)^3 (2x^2 + 1)
        let g = &p(&[-2, 1]);
        let f = &(&(&(g * g) * g) * &p(&[1, 0, 2])) * &p(&[0, 0, -6]);
        let fz = factor_smalldeg(&f, 24).unwrap();
        assert_eq!(fz.product(), f);
        assert_eq!(fz.content, BigInt::from(-6));
        assert!(fz.factors.iter().any(|x| x.poly == p(&[-2, 1]) && x.multiplicity == 3));
        assert!(fz.factors.iter().any(|x| x.poly == p(&[0, 1]) && x.multiplicity == 2));
    }

    #[test]
    fn non_monic_product() {
        // (3x^3 - x - 1)(2x^4 + x + 5)(x^2 - 3x + 7)
        let f = &(&p(&[-1, -1, 0, 3]) * &p(&[5, 1, 0, 0, 2])) * &p(&[7, -3, 1]);
        let fz = factor_smalldeg(&f, 24).unwrap();
        assert!(fz.is_complete());
        assert_eq!(fz.factors.len(), 3);
        assert_eq!(fz.product(), f);
    }

    #[test]
    fn beyond_cap_is_flagged_or_certified() {
        // x^30 - x - 1 is irreducible (Selmer); above the cap only modular
        // analysis can certify it
        let mut c = vec![0i64; 31];
        c[0] = -1;
        c[1] = -1;
        c[30] = 1;
        let f = p(&c);
        let fz = factor_smalldeg(&f, 24).unwrap();
        assert_eq!(fz.factors.len(), 1);
        let fac = &fz.factors[0];
        assert!(fac.irreducible || fac.min_degree > 8);
        // Product of two degree-13 factors beyond the cap: never claimed irreducible
        let mut a = vec![0i64; 14];
        a[0] = -1;
        a[1] = -1;
        a[13] = 1;
        let mut b = vec![0i64; 14];
        b[0] = 1;
        b[2] = -1;
        b[13] = 1;
        let g = &p(&a) * &p(&b);
        let fz = factor_smalldeg(&g, 24).unwrap();
        assert_eq!(fz.product(), g);
        assert!(fz.factors.iter().all(|f| !f.irreducible || f.poly.deg() == 13));
    }

    #[test]
    fn degree_analysis_excludes_linear_factors() {
        // x^2 - 2 has no rational root; modular analysis must agree
        let poss = degree_analysis(&p(&[-2, 0, 1]), &FactorOptions::default(), None);
        assert!(!poss[1]);
    }

    fn poly_strategy() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-6i64..=6, 2..5).prop_map(|c| IntPoly::from_i64s(&c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn product_of_factors_is_input(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            let f = &(&a * &b) * &c;
            prop_assume!(!f.is_zero() && f.deg() >= 1);
            let fz = factor_smalldeg(&f, 24).unwrap();
            prop_assert_eq!(fz.product(), f);
            prop_assert!(fz.is_complete());
            for fac in &fz.factors {
                prop_assert_eq!(fac.roots.len(), fac.poly.deg());
                prop_assert!(fac.poly.lc().is_positive());
            }
        }
    }
}
