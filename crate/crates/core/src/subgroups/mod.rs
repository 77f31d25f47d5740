//! Integer lattices, Hermite and Smith normal forms, algebraic subgroups of
//! the torus `G_m^n` and monoidal changes of coordinates.
//!
//! A lattice `Λ ⊂ Z^n` defines `H_Λ = {x : x^v = 1 for all v ∈ Λ}`. Exponent
//! vectors are rows; the monoidal map of `A` sends `x` to `y` with
//! `y_j = x^{A_j}` (row `j`), so `x^v = y^{v A^{-1}}`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::exactnum::{linalg, FieldElement};
use crate::roots::interval::Disk;

pub type Matrix = Vec<Vec<BigInt>>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubgroupError {
    #[error("row of length {0} in a lattice of ambient dimension {1}")]
    Dimension(usize, usize),
    #[error("surgery coefficient ({0}, {1}) is not coprime")]
    NotCoprime(i64, i64),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("point has a zero coordinate")]
    ZeroCoordinate,
    #[error("n + t = {0} differs from the ambient dimension {1}")]
    Split(usize, usize),
}

pub fn matrix_from_i64(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b.iter()).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn det(a: &Matrix) -> BigInt {
    linalg::det_bareiss(a)
}

/// Inverse of a unimodular matrix, via exact rational elimination.
pub fn unimodular_inverse(a: &Matrix) -> Result<Matrix, SubgroupError> {
    let n = a.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if !det(a).abs().is_one() {
        return Err(SubgroupError::NotUnimodular);
    }
    // Gauss–Jordan by integer row operations on [A | I]
    let mut m: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        // Euclid on column `col` among rows col..n until one nonzero remains
        loop {
            let nz: Vec<usize> = (col..n).filter(|&i| !m[i][col].is_zero()).collect();
            let piv = *nz.iter().min_by_key(|&&i| m[i][col].abs()).expect("unimodular has pivot");
            m.swap(col, piv);
            let mut done = true;
            for i in col + 1..n {
                if !m[i][col].is_zero() {
                    let q = m[i][col].div_floor(&m[col][col]);
                    let pr = m[col].clone();
                    for (x, y) in m[i].iter_mut().zip(pr.iter()) {
                        *x -= &q * y;
                    }
                    if !m[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[col][col].is_negative() {
            for x in m[col].iter_mut() {
                *x = -&*x;
            }
        }
    }
    for col in (0..n).rev() {
        for i in 0..col {
            let q = m[i][col].clone();
            if !q.is_zero() {
                let pr = m[col].clone();
                for (x, y) in m[i].iter_mut().zip(pr.iter()) {
                    *x -= &q * y;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row-style Hermite normal form: nonzero rows only, pivots positive and
/// strictly increasing in column, entries above each pivot reduced to
/// `[0, pivot)`.
pub fn hnf(rows: &Matrix) -> Matrix {
    let mut m: Matrix = rows.clone();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| !m[i][col].is_zero()).collect();
            let Some(&piv) = nz.iter().min_by_key(|&&i| m[i][col].abs()) else { break };
            m.swap(r, piv);
            let mut clean = true;
            for i in r + 1..m.len() {
                if !m[i][col].is_zero() {
                    let q = m[i][col].div_floor(&m[r][col]);
                    let pr = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(pr.iter()) {
                        *x -= &q * y;
                    }
                    if !m[i][col].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if m.get(r).is_none_or(|row| row[col].is_zero()) {
            continue;
        }
        if m[r][col].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = m[i][col].div_floor(&m[r][col]);
            if !q.is_zero() {
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pr.iter()) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}

/// Smith normal form `U·A·V = D`.
#[derive(Clone, Debug, PartialEq)]
pub struct Snf {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
}

impl Snf {
    /// Diagonal entries `d_1 | d_2 | ...` (including zeros).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }

    /// Nonzero elementary divisors.
    pub fn divisors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

/// Smith normal form by elementary operations, pivoting on the smallest
/// nonzero entry, with both transforms tracked.
pub fn snf(a: &Matrix) -> Snf {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    let row_op = |mat: &mut Matrix, dst: usize, src: usize, q: &BigInt| {
        let s = mat[src].clone();
        for (x, y) in mat[dst].iter_mut().zip(s.iter()) {
            *x -= q * y;
        }
    };
    let col_op = |mat: &mut Matrix, dst: usize, src: usize, q: &BigInt| {
        for row in mat.iter_mut() {
            let y = row[src].clone();
            row[dst] -= q * y;
        }
    };
    let swap_cols = |mat: &mut Matrix, i: usize, j: usize| {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    };
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return Snf { u, d, v } };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..m {
                if !d[i][t].is_zero() {
                    let q = d[i][t].div_floor(&d[t][t]);
                    row_op(&mut d, i, t, &q);
                    row_op(&mut u, i, t, &q);
                    clean &= d[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !d[t][j].is_zero() {
                    let q = d[t][j].div_floor(&d[t][t]);
                    col_op(&mut d, j, t, &q);
                    col_op(&mut v, j, t, &q);
                    clean &= d[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold a non-divisible entry into row t
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&d[i][j] % &d[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let one = -BigInt::one();
                    row_op(&mut d, t, i, &one);
                    row_op(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    Snf { u, d, v }
}

/// A sublattice of `Z^n`, stored in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub ambient: usize,
    pub rows: Matrix,
}

impl Lattice {
    pub fn new(ambient: usize, rows: Matrix) -> Result<Self, SubgroupError> {
        if let Some(r) = rows.iter().find(|r| r.len() != ambient) {
            return Err(SubgroupError::Dimension(r.len(), ambient));
        }
        Ok(Lattice { ambient, rows: hnf(&rows) })
    }

    pub fn from_i64(ambient: usize, rows: &[Vec<i64>]) -> Result<Self, SubgroupError> {
        Self::new(ambient, matrix_from_i64(rows))
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        #[derive(Deserialize)]
        struct J {
            ambient: usize,
            rows: Vec<Vec<i64>>,
        }
        let j: J = serde_json::from_str(s).map_err(|e| e.to_string())?;
        Self::from_i64(j.ambient, &j.rows).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        let rows = rows.iter().map(|r| format!("[{}]", r.join(","))).collect::<Vec<_>>().join(",");
        format!("{{\"ambient\":{},\"rows\":[{}]}}", self.ambient, rows)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Saturated: `Λ = (Λ ⊗ Q) ∩ Z^n`, i.e. all elementary divisors are 1.
    pub fn is_primitive(&self) -> bool {
        snf(&self.rows).divisors().iter().all(One::is_one)
    }

    /// `(Λ ⊗ Q) ∩ Z^n`: with `U·Λ·V = D`, the first `rank` rows of `V^{-1}`.
    pub fn saturation(&self) -> Lattice {
        if self.rank() == 0 {
            return self.clone();
        }
        let s = snf(&self.rows);
        let vi = unimodular_inverse(&s.v).expect("V is unimodular");
        Lattice { ambient: self.ambient, rows: hnf(&vi[..self.rank()].to_vec()) }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        hnf(&rows) == self.rows
    }
}

/// `H_Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicSubgroup {
    pub lattice: Lattice,
}

impl AlgebraicSubgroup {
    pub fn new(lattice: Lattice) -> Self {
        AlgebraicSubgroup { lattice }
    }

    pub fn ambient(&self) -> usize {
        self.lattice.ambient
    }

    pub fn dim(&self) -> usize {
        self.lattice.ambient - self.lattice.rank()
    }

    pub fn is_torus(&self) -> bool {
        self.lattice.is_primitive()
    }
}

/// `φ_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonoidalMap {
    pub matrix: Matrix,
}

impl MonoidalMap {
    pub fn new(matrix: Matrix) -> Result<Self, SubgroupError> {
        if !det(&matrix).abs().is_one() {
            return Err(SubgroupError::NotUnimodular);
        }
        Ok(MonoidalMap { matrix })
    }

    /// `y_j = ∏_k x_k^{A_jk}` on a numeric point.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matrix
            .iter()
            .map(|row| {
                row.iter().zip(x).fold(Complex64::new(1.0, 0.0), |acc, (e, xi)| {
                    acc * xi.powi(e.to_i32().expect("small exponent"))
                })
            })
            .collect()
    }

    /// Exact image of a point with field coordinates.
    pub fn apply_exact(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>, SubgroupError> {
        self.matrix.iter().map(|row| monomial_exact(x, row)).collect()
    }

    /// `φ(H_Λ) = H_{Λ A^{-1}}`.
    pub fn image(&self, h: &AlgebraicSubgroup) -> Result<AlgebraicSubgroup, SubgroupError> {
        let inv = unimodular_inverse(&self.matrix)?;
        let rows = mat_mul(&h.lattice.rows, &inv);
        Ok(AlgebraicSubgroup::new(Lattice::new(h.ambient(), rows)?))
    }
}

/// Monoidal splitting of `H`: after `φ`, `H` reads
/// `{y : y_i^{λ_i} = 1, i ≤ rank Λ}`, i.e. `F × G_m^{torus_rank}` with
/// `F = ∏ μ_{λ_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSplit {
    pub phi: MonoidalMap,
    pub torsion: Vec<BigInt>,
    pub torus_rank: usize,
}

/// With `U G V = D` for the generator matrix `G`, take `A = V^{-1}`: the
/// lattice becomes `G A^{-1} = G V = U^{-1} D`, which spans the rows of `D`.
pub fn torus_split(h: &AlgebraicSubgroup) -> TorusSplit {
    let n = h.ambient();
    if h.lattice.rank() == 0 {
        return TorusSplit { phi: MonoidalMap { matrix: identity(n) }, torsion: Vec::new(), torus_rank: n };
    }
    let s = snf(&h.lattice.rows);
    let a = unimodular_inverse(&s.v).expect("V is unimodular");
    TorusSplit { phi: MonoidalMap { matrix: a }, torsion: s.divisors(), torus_rank: h.dim() }
}

/// True iff every generator vanishes in the last `t` coordinates, i.e.
/// `{1}^n × G_m^t ⊆ H`.
pub fn is_restricted(h: &AlgebraicSubgroup, n: usize, t: usize) -> Result<bool, SubgroupError> {
    if n + t != h.ambient() {
        return Err(SubgroupError::Split(n + t, h.ambient()));
    }
    Ok(h.lattice.rows.iter().all(|r| r[n..].iter().all(Zero::is_zero)))
}

/// The subgroup `M_i^{p_i} L_i^{q_i} = 1`, coordinates `(M_1..M_k, L_1..L_k)`.
pub fn dehn_subgroup(coeffs: &[(i64, i64)]) -> Result<AlgebraicSubgroup, SubgroupError> {
    let k = coeffs.len();
    let mut rows = Vec::with_capacity(k);
    for (i, &(p, q)) in coeffs.iter().enumerate() {
        if p.gcd(&q) != 1 {
            return Err(SubgroupError::NotCoprime(p, q));
        }
        let mut r = vec![0i64; 2 * k];
        r[i] = p;
        r[k + i] = q;
        rows.push(r);
    }
    Ok(AlgebraicSubgroup::new(Lattice::from_i64(2 * k, &rows)?))
}

/// Point of the torus, exact or as certified disks.
#[derive(Clone, Debug)]
pub enum TorusPoint {
    Exact(Vec<FieldElement>),
    Numeric(Vec<Disk>),
}

/// The coset `g·H`.
#[derive(Clone, Debug)]
pub struct Coset {
    pub subgroup: AlgebraicSubgroup,
    pub translate: TorusPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotMember,
    Undecidable,
}

fn monomial_exact(x: &[FieldElement], v: &[BigInt]) -> Result<FieldElement, SubgroupError> {
    let mut acc = FieldElement::one(x[0].field());
    for (xi, e) in x.iter().zip(v) {
        if xi.is_zero() {
            return Err(SubgroupError::ZeroCoordinate);
        }
        let e = e.to_i64().expect("small exponent");
        acc = &acc * &xi.pow(e).map_err(|_| SubgroupError::ZeroCoordinate)?;
    }
    Ok(acc)
}

fn monomial_disk(x: &[Disk], v: &[BigInt]) -> Option<Disk> {
    let mut acc = Disk::point(Complex64::new(1.0, 0.0));
    for (xi, e) in x.iter().zip(v) {
        let e = e.to_i64()?;
        let base = if e < 0 { xi.recip()? } else { *xi };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
    }
    Some(acc)
}

fn to_disks(p: &TorusPoint) -> Vec<Disk> {
    match p {
        TorusPoint::Numeric(d) => d.clone(),
        TorusPoint::Exact(x) => x
            .iter()
            .map(|e| {
                let z = e.to_complex();
                Disk::new(z, 1e-12 * z.norm().max(1.0))
            })
            .collect(),
    }
}

/// Membership of `pt` in `K = gH`: `x^v = g^v` for all HNF generators `v`.
/// Exact inputs give an exact answer; numeric ones are decided by disk
/// arithmetic: `NotMember` when some `x^v / g^v` certainly differs from 1,
/// `Member` when every ratio disk contains 1 and has radius ≤ `tol`.
pub fn member(pt: &TorusPoint, k: &Coset, tol: f64) -> Result<Membership, SubgroupError> {
    if let (TorusPoint::Exact(x), TorusPoint::Exact(g)) = (pt, &k.translate) {
        for v in &k.subgroup.lattice.rows {
            let a = monomial_exact(x, v)?;
            let b = monomial_exact(g, v)?;
            if a != b {
                return Ok(Membership::NotMember);
            }
        }
        return Ok(Membership::Member);
    }
    let x = to_disks(pt);
    let g = to_disks(&k.translate);
    if x.iter().chain(g.iter()).any(|d| d.abs().lo <= 0.0) {
        return Err(SubgroupError::ZeroCoordinate);
    }
    let mut verdict = Membership::Member;
    for v in &k.subgroup.lattice.rows {
        let (Some(a), Some(b)) = (monomial_disk(&x, v), monomial_disk(&g, v)) else {
            return Ok(Membership::Undecidable);
        };
        let Some(ratio) = b.recip().map(|bi| a.mul(&bi)) else {
            return Ok(Membership::Undecidable);
        };
        if !(ratio.r.is_finite() && ratio.c.re.is_finite() && ratio.c.im.is_finite()) {
            return Ok(Membership::Undecidable);
        }
        if !ratio.contains(Complex64::new(1.0, 0.0)) && ratio.disjoint(&Disk::point(Complex64::new(1.0, 0.0))) {
            return Ok(Membership::NotMember);
        }
        if ratio.r > tol {
            verdict = Membership::Undecidable;
        }
    }
    Ok(verdict)
}

/// The trivial translate `(1, …, 1)`.
pub fn unit_point(n: usize) -> TorusPoint {
    TorusPoint::Numeric(vec![Disk::point(Complex64::new(1.0, 0.0)); n])
}
