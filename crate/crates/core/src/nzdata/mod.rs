//! Neumann–Zagier gluing data: the logged gluing system, log-holonomies with
//! branch tracking, a continuation Newton solver for filled structures, cusp
//! shapes by implicit differentiation, and numeric extraction of the
//! truncated holonomy series `v_i(u_1, …, u_k)`.

mod series;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

pub use series::{
    parse_series, round_to_field, series_to_json, SeriesCoeffs, TruncatedHolonomy,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Error)]
pub enum NzError {
    #[error("malformed gluing data: {0}")]
    Malformed(String),
    #[error("complete structure check failed: {0}")]
    NotComplete(String),
    #[error("shape z[{0}] = {1} is within the floor of 0 or 1")]
    Degenerate(usize, Complex64),
    #[error("branch tracking lost at step {0}: a shape turned by more than a quarter turn")]
    BranchLost(usize),
    #[error("filling coefficients ({0}, {1}) are not coprime")]
    NotCoprime(i64, i64),
    #[error("Newton iteration did not converge (residual {0:e})")]
    Divergence(f64),
    #[error("singular Jacobian at the complete structure")]
    Singular,
    #[error("requested order {0} exceeds the cap {1}")]
    OrderCap(usize, usize),
    #[error("extracted series violates {0} (residual {1:e})")]
    Noise(String, f64),
    #[error(transparent)]
    Exact(#[from] crate::exactnum::ExactError),
}

#[derive(Deserialize)]
struct GluingFile {
    #[serde(default)]
    name: String,
    n: usize,
    k: usize,
    theta1: Vec<Vec<i64>>,
    theta2: Vec<Vec<i64>>,
    eps: Vec<i64>,
    #[serde(default)]
    lambda_eps: Option<Vec<i64>>,
    #[serde(default)]
    mu_eps: Option<Vec<i64>>,
    lambda1: Vec<Vec<i64>>,
    lambda2: Vec<Vec<i64>>,
    mu1: Vec<Vec<i64>>,
    mu2: Vec<Vec<i64>>,
    z0: Vec<[f64; 2]>,
}

/// Edge and cusp exponent matrices of an ideal triangulation together with
/// an approximation of the complete structure.
///
/// `lambda*` rows give the longitude `l_i` (log `u_i`), `mu*` rows the meridian
/// `m_i` (log `v_i`); each row pairs exponents of `z_v` and `1 - z_v`.
#[derive(Debug, Clone)]
pub struct GluingData {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub theta1: Vec<Vec<i64>>,
    pub theta2: Vec<Vec<i64>>,
    pub eps: Vec<i64>,
    /// Signs of the longitude and meridian products (default `+1`).
    pub lambda_eps: Vec<i64>,
    pub mu_eps: Vec<i64>,
    pub lambda1: Vec<Vec<i64>>,
    pub lambda2: Vec<Vec<i64>>,
    pub mu1: Vec<Vec<i64>>,
    pub mu2: Vec<Vec<i64>>,
    pub z0: Vec<Complex64>,
}

/// Result of [`check_complete`].
#[derive(Debug, Clone)]
pub struct CompletenessReport {
    pub edge_residual: f64,
    pub cusp_residual: f64,
    pub edge_rank: usize,
    pub system_rank: usize,
    pub passed: bool,
}

/// Shape parameters bounded away from the degenerate values.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeVector {
    pub z: Vec<Complex64>,
}

/// Minimum distance of a shape from `{0, 1}`.
pub const SHAPE_FLOOR: f64 = 1e-8;

impl ShapeVector {
    pub fn new(z: Vec<Complex64>) -> Result<Self, NzError> {
        for (i, &zi) in z.iter().enumerate() {
            if !(zi.norm() > SHAPE_FLOOR && (zi - 1.0).norm() > SHAPE_FLOOR) {
                return Err(NzError::Degenerate(i, zi));
            }
        }
        Ok(ShapeVector { z })
    }
}

/// Logarithms of longitude (`u`) and meridian (`v`) dilations, continued from
/// the complete structure. `u_winding[i]` and `v_winding[i]` count the
/// multiples of `2πi` by which the tracked values differ from those built
/// out of principal logarithms of `z_v / z0_v` and `(1 - z_v)/(1 - z0_v)`.
#[derive(Debug, Clone)]
pub struct LogHolonomies {
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub u_winding: Vec<i64>,
    pub v_winding: Vec<i64>,
}

/// Per-tetrahedron logs `log z_v - log z0_v` and `log(1-z_v) - log(1-z0_v)`.
#[derive(Debug, Clone)]
struct LogShapes {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

fn dot(row: &[i64], x: &[Complex64]) -> Complex64 {
    row.iter().zip(x).map(|(&c, &v)| v * c as f64).sum()
}

fn principal_logs(z0: &[Complex64], z: &[Complex64]) -> LogShapes {
    LogShapes {
        a: z.iter().zip(z0).map(|(z, z0)| (z / z0).ln()).collect(),
        b: z.iter().zip(z0).map(|(z, z0)| ((1.0 - z) / (1.0 - z0)).ln()).collect(),
    }
}

/// Continues `prev` (logs at `zp`) to `z`; each factor may turn by at most a
/// quarter turn per step.
fn continue_logs(prev: &LogShapes, zp: &[Complex64], z: &[Complex64]) -> Option<LogShapes> {
    let mut out = prev.clone();
    for v in 0..z.len() {
        let da = (z[v] / zp[v]).ln();
        let db = ((1.0 - z[v]) / (1.0 - zp[v])).ln();
        if da.im.abs() > PI / 2.0 || db.im.abs() > PI / 2.0 {
            return None;
        }
        out.a[v] += da;
        out.b[v] += db;
    }
    Some(out)
}

fn winding(tracked: Complex64, principal: Complex64) -> i64 {
    ((tracked - principal).im / (2.0 * PI)).round() as i64
}

impl GluingData {
    pub fn from_json(text: &str) -> Result<Self, NzError> {
        let f: GluingFile =
            serde_json::from_str(text).map_err(|e| NzError::Malformed(e.to_string()))?;
        let gd = GluingData {
            name: f.name,
            n: f.n,
            k: f.k,
            theta1: f.theta1,
            theta2: f.theta2,
            eps: f.eps,
            lambda_eps: f.lambda_eps.unwrap_or_else(|| vec![1; f.k]),
            mu_eps: f.mu_eps.unwrap_or_else(|| vec![1; f.k]),
            lambda1: f.lambda1,
            lambda2: f.lambda2,
            mu1: f.mu1,
            mu2: f.mu2,
            z0: f.z0.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        };
        gd.validate_shape()?;
        Ok(gd)
    }

    /// Structural checks: row counts, row lengths and signs.
    pub fn validate_shape(&self) -> Result<(), NzError> {
        let (n, k) = (self.n, self.k);
        if k == 0 || k > n {
            return Err(NzError::Malformed(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
        }
        let check = |m: &Vec<Vec<i64>>, rows: usize, what: &str| {
            if m.len() != rows || m.iter().any(|r| r.len() != n) {
                Err(NzError::Malformed(format!("{what} must be {rows}x{n}")))
            } else {
                Ok(())
            }
        };
        check(&self.theta1, n - k, "theta1")?;
        check(&self.theta2, n - k, "theta2")?;
        check(&self.lambda1, k, "lambda1")?;
        check(&self.lambda2, k, "lambda2")?;
        check(&self.mu1, k, "mu1")?;
        check(&self.mu2, k, "mu2")?;
        if self.eps.len() != n - k || self.eps.iter().any(|e| e.abs() != 1) {
            return Err(NzError::Malformed(format!("eps must hold {} signs ±1", n - k)));
        }
        for s in [&self.lambda_eps, &self.mu_eps] {
            if s.len() != k || s.iter().any(|e| e.abs() != 1) {
                return Err(NzError::Malformed(format!("cusp signs must hold {k} entries ±1")));
            }
        }
        if self.z0.len() != n {
            return Err(NzError::Malformed(format!("z0 must hold {n} shapes")));
        }
        ShapeVector::new(self.z0.clone())?;
        Ok(())
    }

    fn edge_values(&self, z: &[Complex64]) -> Vec<Complex64> {
        (0..self.n - self.k)
            .map(|r| {
                let mut p = Complex64::new(self.eps[r] as f64, 0.0);
                for v in 0..self.n {
                    p *= z[v].powi(self.theta1[r][v] as i32)
                        * (1.0 - z[v]).powi(self.theta2[r][v] as i32);
                }
                p
            })
            .collect()
    }

    fn cusp_values(&self, z: &[Complex64], meridian: bool) -> Vec<Complex64> {
        let (r1, r2, sg) = if meridian {
            (&self.mu1, &self.mu2, &self.mu_eps)
        } else {
            (&self.lambda1, &self.lambda2, &self.lambda_eps)
        };
        (0..self.k)
            .map(|i| {
                (0..self.n)
                    .map(|v| z[v].powi(r1[i][v] as i32) * (1.0 - z[v]).powi(r2[i][v] as i32))
                    .product::<Complex64>()
                    * sg[i] as f64
            })
            .collect()
    }

    /// Multiplicative residual of the edge equations and of the cusp
    /// holonomies `δ(l_i) = exp(u_i)`, `δ(m_i) = exp(v_i)` at `z`.
    pub fn exponent_residual(&self, z: &ShapeVector, h: &LogHolonomies) -> f64 {
        let e = self.edge_values(&z.z).iter().map(|w| (w - 1.0).norm()).fold(0.0, f64::max);
        let l = self.cusp_values(&z.z, false);
        let m = self.cusp_values(&z.z, true);
        let mut r = e;
        for i in 0..self.k {
            r = r.max((l[i] - h.u[i].exp()).norm());
            r = r.max((m[i] - h.v[i].exp()).norm());
        }
        r
    }

    fn logs_for(&self, rows1: &[Vec<i64>], rows2: &[Vec<i64>], s: &LogShapes) -> Vec<Complex64> {
        rows1.iter().zip(rows2).map(|(r1, r2)| dot(r1, &s.a) + dot(r2, &s.b)).collect()
    }

    fn holonomies_from_logs(&self, z: &[Complex64], s: &LogShapes) -> LogHolonomies {
        let p = principal_logs(&self.z0, z);
        let u = self.logs_for(&self.lambda1, &self.lambda2, s);
        let v = self.logs_for(&self.mu1, &self.mu2, s);
        let up = self.logs_for(&self.lambda1, &self.lambda2, &p);
        let vp = self.logs_for(&self.mu1, &self.mu2, &p);
        LogHolonomies {
            u_winding: u.iter().zip(&up).map(|(&a, &b)| winding(a, b)).collect(),
            v_winding: v.iter().zip(&vp).map(|(&a, &b)| winding(a, b)).collect(),
            u,
            v,
        }
    }

    /// Jacobian of the logged map `z -> (edge logs, longitude logs)` and of
    /// the meridian logs, both `d/dz`.
    fn jacobians(&self, z: &[Complex64]) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        let (n, k) = (self.n, self.k);
        let entry = |r1: &[i64], r2: &[i64], v: usize| {
            r1[v] as f64 / z[v] - r2[v] as f64 / (1.0 - z[v])
        };
        let mut j = DMatrix::zeros(n, n);
        for v in 0..n {
            for r in 0..n - k {
                j[(r, v)] = entry(&self.theta1[r], &self.theta2[r], v);
            }
            for i in 0..k {
                j[(n - k + i, v)] = entry(&self.lambda1[i], &self.lambda2[i], v);
            }
        }
        let mut m = DMatrix::zeros(k, n);
        for v in 0..n {
            for i in 0..k {
                m[(i, v)] = entry(&self.mu1[i], &self.mu2[i], v);
            }
        }
        (j, m)
    }

    /// `dv/du` at `z`, a `k x k` matrix, by implicit differentiation of the
    /// logged system.
    pub fn holonomy_jacobian(&self, z: &ShapeVector) -> Result<DMatrix<Complex64>, NzError> {
        let (n, k) = (self.n, self.k);
        let (j, m) = self.jacobians(&z.z);
        let mut rhs = DMatrix::zeros(n, k);
        for i in 0..k {
            rhs[(n - k + i, i)] = Complex64::new(1.0, 0.0);
        }
        let dz = j.lu().solve(&rhs).ok_or(NzError::Singular)?;
        Ok(m * dz)
    }

    /// Solves for shapes with prescribed longitude logs `u`, by Newton
    /// continuation along the segment from the complete structure.
    pub fn solve_for_u(&self, u: &[Complex64]) -> Result<(ShapeVector, LogHolonomies), NzError> {
        let (n, k) = (self.n, self.k);
        let f = |s: &LogShapes, lam: f64| -> Vec<Complex64> {
            let mut r = Vec::with_capacity(n);
            for e in 0..n - k {
                r.push(dot(&self.theta1[e], &s.a) + dot(&self.theta2[e], &s.b));
            }
            for i in 0..k {
                r.push(dot(&self.lambda1[i], &s.a) + dot(&self.lambda2[i], &s.b) - u[i] * lam);
            }
            r
        };
        let jac = |z: &[Complex64]| self.jacobians(z).0;
        self.continuation(f, jac)
    }

    /// Generic continuation in `λ ∈ [0, 1]`: `f(logs, λ)` must vanish at the
    /// complete structure for `λ = 0`.
    fn continuation(
        &self,
        f: impl Fn(&LogShapes, f64) -> Vec<Complex64>,
        jac: impl Fn(&[Complex64]) -> DMatrix<Complex64>,
    ) -> Result<(ShapeVector, LogHolonomies), NzError> {
        let n = self.n;
        let mut z = self.z0.clone();
        let mut logs = LogShapes { a: vec![Complex64::new(0.0, 0.0); n], b: vec![Complex64::new(0.0, 0.0); n] };
        let (mut lam, mut step) = (0.0f64, 0.25f64);
        let mut last_res = f64::INFINITY;
        while lam < 1.0 {
            let target = (lam + step).min(1.0);
            match self.newton(&f, &jac, &z, &logs, target) {
                Some((zn, ln, res)) => {
                    z = zn;
                    logs = ln;
                    lam = target;
                    last_res = res;
                    step = (step * 2.0).min(0.5);
                }
                None => {
                    step /= 4.0;
                    if step < 1e-6 {
                        return Err(NzError::Divergence(last_res));
                    }
                }
            }
        }
        let sv = ShapeVector::new(z)?;
        let h = self.holonomies_from_logs(&sv.z, &logs);
        Ok((sv, h))
    }

    fn newton(
        &self,
        f: &impl Fn(&LogShapes, f64) -> Vec<Complex64>,
        jac: &impl Fn(&[Complex64]) -> DMatrix<Complex64>,
        z_start: &[Complex64],
        logs_start: &LogShapes,
        lam: f64,
    ) -> Option<(Vec<Complex64>, LogShapes, f64)> {
        let mut z = z_start.to_vec();
        let mut logs = logs_start.clone();
        let norm = |r: &[Complex64]| r.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let mut res = norm(&f(&logs, lam));
        for _ in 0..60 {
            if res <= 1e-14 {
                break;
            }
            let r = DMatrix::from_column_slice(self.n, 1, &f(&logs, lam));
            let dz = jac(&z).lu().solve(&r)?;
            let zn: Vec<Complex64> = z.iter().zip(dz.iter()).map(|(a, d)| a - d).collect();
            if zn.iter().any(|w| w.norm() <= SHAPE_FLOOR || (w - 1.0).norm() <= SHAPE_FLOOR) {
                return None;
            }
            let ln = continue_logs(&logs, &z, &zn)?;
            let rn = norm(&f(&ln, lam));
            if !(rn < res) && rn > 1e-13 {
                return None;
            }
            z = zn;
            logs = ln;
            res = rn;
        }
        (res <= 1e-12).then_some((z, logs, res))
    }
}

/// Verifies that the seed is the complete structure: edge equations and
/// trivial cusp holonomies within `tol`, and a nonsingular logged system.
pub fn check_complete(gd: &GluingData, tol: f64) -> Result<CompletenessReport, NzError> {
    gd.validate_shape()?;
    let z = &gd.z0;
    let edge_residual =
        gd.edge_values(z).iter().map(|w| (w - 1.0).norm()).fold(0.0, f64::max);
    let cusp_residual = gd
        .cusp_values(z, false)
        .into_iter()
        .chain(gd.cusp_values(z, true))
        .map(|w| (w - 1.0).norm())
        .fold(0.0, f64::max);
    let (j, _) = gd.jacobians(z);
    let rank_tol = 1e-9 * j.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let edge_rank = j.rows(0, gd.n - gd.k).clone_owned().svd(false, false).rank(rank_tol);
    let system_rank = j.svd(false, false).rank(rank_tol);
    let passed = edge_residual <= tol
        && cusp_residual <= tol
        && edge_rank == gd.n - gd.k
        && system_rank == gd.n;
    let report = CompletenessReport { edge_residual, cusp_residual, edge_rank, system_rank, passed };
    if !passed {
        return Err(NzError::NotComplete(format!(
            "edge residual {edge_residual:e}, cusp residual {cusp_residual:e}, \
             edge rank {edge_rank}/{}, system rank {system_rank}/{}",
            gd.n - gd.k,
            gd.n
        )));
    }
    Ok(report)
}

/// Log-holonomies at `z`, taking principal logs of `z_v / z0_v`; valid while
/// no factor has turned by half a turn from the seed.
pub fn holonomies(gd: &GluingData, z: &ShapeVector) -> Result<LogHolonomies, NzError> {
    holonomies_along(gd, std::slice::from_ref(z))
}

/// Log-holonomies at the end of a path of shape vectors starting near the
/// complete structure, continued step by step.
pub fn holonomies_along(gd: &GluingData, path: &[ShapeVector]) -> Result<LogHolonomies, NzError> {
    let n = gd.n;
    let mut logs = LogShapes { a: vec![Complex64::new(0.0, 0.0); n], b: vec![Complex64::new(0.0, 0.0); n] };
    let mut prev = gd.z0.clone();
    for (i, s) in path.iter().enumerate() {
        if s.z.len() != n {
            return Err(NzError::Malformed(format!("shape vector must hold {n} entries")));
        }
        logs = continue_logs(&logs, &prev, &s.z).ok_or(NzError::BranchLost(i))?;
        prev = s.z.clone();
    }
    Ok(gd.holonomies_from_logs(&prev, &logs))
}

/// Filled structure: unfilled cusps keep `u_i = 0`; a cusp filled by
/// `(p_i, q_i)` satisfies `p_i v_i + q_i u_i = 2πi`.
pub fn newton_fill(
    gd: &GluingData,
    coeffs: &[Option<(i64, i64)>],
) -> Result<(ShapeVector, LogHolonomies), NzError> {
    let (n, k) = (gd.n, gd.k);
    if coeffs.len() != k {
        return Err(NzError::Malformed(format!("expected {k} filling slots")));
    }
    for &(p, q) in coeffs.iter().flatten() {
        if num_integer::gcd(p, q) != 1 {
            return Err(NzError::NotCoprime(p, q));
        }
    }
    let f = |s: &LogShapes, lam: f64| -> Vec<Complex64> {
        let mut r = Vec::with_capacity(n);
        for e in 0..n - k {
            r.push(dot(&gd.theta1[e], &s.a) + dot(&gd.theta2[e], &s.b));
        }
        for (i, c) in coeffs.iter().enumerate() {
            let u = dot(&gd.lambda1[i], &s.a) + dot(&gd.lambda2[i], &s.b);
            r.push(match c {
                None => u,
                Some((p, q)) => {
                    let v = dot(&gd.mu1[i], &s.a) + dot(&gd.mu2[i], &s.b);
                    v * *p as f64 + u * *q as f64 - 2.0 * PI * I * lam
                }
            });
        }
        r
    };
    let jac = |z: &[Complex64]| {
        let (j, m) = gd.jacobians(z);
        let mut out = j.clone();
        for (i, c) in coeffs.iter().enumerate() {
            if let Some((p, q)) = c {
                for v in 0..n {
                    out[(n - k + i, v)] = m[(i, v)] * *p as f64 + j[(n - k + i, v)] * *q as f64;
                }
            }
        }
        out
    };
    gd.continuation(f, jac)
}

/// Complex log of the core curve holonomy of a cusp filled by `(p, q)`:
/// `x v + y u` for a Bézout pair `-q x + p y = 1`.
pub fn core_log(h: &LogHolonomies, cusp: usize, p: i64, q: i64) -> Result<Complex64, NzError> {
    let e = num_integer::Integer::extended_gcd(&-q, &p);
    if e.gcd.abs() != 1 {
        return Err(NzError::NotCoprime(p, q));
    }
    let (x, y) = (e.x * e.gcd, e.y * e.gcd);
    Ok(h.v[cusp] * x as f64 + h.u[cusp] * y as f64)
}

/// Cusp shapes `τ_i = ∂v_i/∂u_i` at the complete structure.
pub fn cusp_shapes(gd: &GluingData) -> Result<Vec<Complex64>, NzError> {
    let d = gd.holonomy_jacobian(&ShapeVector::new(gd.z0.clone())?)?;
    let taus: Vec<Complex64> = (0..gd.k).map(|i| d[(i, i)]).collect();
    for (i, t) in taus.iter().enumerate() {
        if !(t.im.abs() > 1e-9) {
            return Err(NzError::NotComplete(format!("cusp shape {i} = {t} is real")));
        }
    }
    Ok(taus)
}

/// Default cap on the truncation order of numeric series extraction.
pub const ORDER_CAP: usize = 5;

/// Numeric truncated series of the `v_i`, by Cauchy integrals over a
/// polydisc in the `u` coordinates (trapezoidal rule, which is spectrally
/// accurate for analytic integrands). Linear terms come from
/// [`cusp_shapes`]' implicit differentiation.
pub fn potential_coeffs(gd: &GluingData, order: usize) -> Result<TruncatedHolonomy, NzError> {
    if order > ORDER_CAP {
        return Err(NzError::OrderCap(order, ORDER_CAP));
    }
    check_complete(gd, 1e-9)?;
    let k = gd.k;
    let jac = gd.holonomy_jacobian(&ShapeVector::new(gd.z0.clone())?)?;
    let shapes = cusp_shapes(gd)?;
    let grid: usize = if k <= 2 { 24 } else { 12 };
    let rho = 0.15;
    let pts = grid.pow(k as u32);
    let roots: Vec<Complex64> =
        (0..grid).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / grid as f64)).collect();
    // values[i][idx] = v_i at grid point idx
    let mut values = vec![vec![Complex64::new(0.0, 0.0); pts]; k];
    for idx in 0..pts {
        let u: Vec<Complex64> = digits(idx, grid, k).iter().map(|&d| roots[d] * rho).collect();
        let (_, h) = gd.solve_for_u(&u)?;
        for i in 0..k {
            values[i][idx] = h.v[i];
        }
    }
    let mut coeffs = vec![std::collections::BTreeMap::new(); k];
    for exp in exponents(k, order) {
        let deg: usize = exp.iter().sum();
        if deg == 0 {
            continue;
        }
        for i in 0..k {
            let c = if deg == 1 {
                let j = exp.iter().position(|&e| e == 1).unwrap();
                jac[(i, j)]
            } else {
                let mut s = Complex64::new(0.0, 0.0);
                for (idx, val) in values[i].iter().enumerate() {
                    let ds = digits(idx, grid, k);
                    let mut w = Complex64::new(1.0, 0.0);
                    for (d, e) in ds.iter().zip(&exp) {
                        w *= roots[(grid - (d * e) % grid) % grid];
                    }
                    s += val * w;
                }
                s / pts as f64 / rho.powi(deg as i32)
            };
            coeffs[i].insert(exp.iter().map(|&e| e as u32).collect::<Vec<u32>>(), c);
        }
    }
    let th = TruncatedHolonomy {
        k,
        order,
        coeffs: SeriesCoeffs::Numeric(coeffs),
        cusp_shapes: shapes,
    };
    let tol = 1e-6;
    let p = th.parity_residual();
    if p > tol {
        return Err(NzError::Noise("parity".into(), p));
    }
    let s = th.symmetry_residual();
    if s > tol {
        return Err(NzError::Noise("mixed-partial symmetry".into(), s));
    }
    Ok(th)
}

fn digits(mut idx: usize, base: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let d = idx % base;
            idx /= base;
            d
        })
        .collect()
}

/// All exponent vectors in `k` variables with total degree at most `order`,
/// graded lexicographically.
pub fn exponents(k: usize, order: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(k, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, order, &mut Vec::new(), &mut out);
    out.sort_by_key(|e| (e.iter().sum::<usize>(), e.clone()));
    out
}

/// Bundled gluing fixtures: a two-cusped census manifold whose series
/// matches the worked pretzel-sibling expansion, and the figure-eight knot
/// complement.
pub fn bundled(name: &str) -> Option<GluingData> {
    let text = match name {
        "m125" => include_str!("../../data/m125.json"),
        "m004" => include_str!("../../data/m004.json"),
        _ => return None,
    };
    Some(GluingData::from_json(text).expect("bundled gluing data parses"))
}
