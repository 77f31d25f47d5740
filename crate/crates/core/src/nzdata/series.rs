use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::NzError;
use crate::exactnum::{FieldElement, Monomial, MultiPoly, NumberFieldSpec, Rational};

/// Coefficients of the `v_i` series, exact over a number field or numeric.
#[derive(Debug, Clone)]
pub enum SeriesCoeffs {
    Exact(Vec<MultiPoly>),
    Numeric(Vec<BTreeMap<Vec<u32>, Complex64>>),
}

/// Truncation of `v_i(u_1, …, u_k)` to total degree `order`.
#[derive(Debug, Clone)]
pub struct TruncatedHolonomy {
    pub k: usize,
    pub order: usize,
    pub coeffs: SeriesCoeffs,
    pub cusp_shapes: Vec<Complex64>,
}

impl TruncatedHolonomy {
    /// Builds an exact series, reading the cusp shapes off the linear terms.
    pub fn exact(series: Vec<MultiPoly>, order: usize) -> Result<Self, NzError> {
        let k = series.len();
        if k == 0 || series.iter().any(|s| s.nvars() != k) {
            return Err(NzError::Malformed("series must hold k polynomials in k variables".into()));
        }
        let series: Vec<MultiPoly> = series.iter().map(|s| s.truncate(order as u32)).collect();
        let cusp_shapes = (0..k)
            .map(|i| series[i].coeff(&Monomial::var(k, i).0).to_complex())
            .collect();
        Ok(TruncatedHolonomy { k, order, coeffs: SeriesCoeffs::Exact(series), cusp_shapes })
    }

    pub fn exact_series(&self) -> Option<&[MultiPoly]> {
        match &self.coeffs {
            SeriesCoeffs::Exact(s) => Some(s),
            SeriesCoeffs::Numeric(_) => None,
        }
    }

    pub fn field(&self) -> Option<&Arc<NumberFieldSpec>> {
        self.exact_series().map(|s| s[0].field())
    }

    /// Nonzero terms `(exponent, value)` of `v_i`.
    pub fn terms(&self, i: usize) -> Vec<(Vec<u32>, Complex64)> {
        match &self.coeffs {
            SeriesCoeffs::Exact(s) => {
                s[i].terms().map(|(m, c)| (m.0.clone(), c.to_complex())).collect()
            }
            SeriesCoeffs::Numeric(s) => s[i].iter().map(|(e, &c)| (e.clone(), c)).collect(),
        }
    }

    pub fn coeff(&self, i: usize, exp: &[u32]) -> Complex64 {
        match &self.coeffs {
            SeriesCoeffs::Exact(s) => s[i].coeff(exp).to_complex(),
            SeriesCoeffs::Numeric(s) => s[i].get(exp).copied().unwrap_or_default(),
        }
    }

    /// Largest coefficient violating "odd in `u_i`, even in every other `u_j`".
    pub fn parity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.k {
            for (e, c) in self.terms(i) {
                if !parity_ok(i, &e) {
                    worst = worst.max(c.norm());
                }
            }
        }
        worst
    }

    /// Largest violation of `∂v_i/∂u_j = ∂v_j/∂u_i`, coefficient-wise on the
    /// terms both truncations can see.
    pub fn symmetry_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.k {
            for j in i + 1..self.k {
                for (lhs, rhs) in self.mixed_pairs(i, j) {
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }

    /// For each monomial `u^e` of degree `< order`, the coefficients of
    /// `u^e` in `∂v_i/∂u_j` and in `∂v_j/∂u_i`.
    fn mixed_pairs(&self, i: usize, j: usize) -> Vec<(Complex64, Complex64)> {
        let mut out = Vec::new();
        for e in super::exponents(self.k, self.order.saturating_sub(1)) {
            let e: Vec<u32> = e.iter().map(|&x| x as u32).collect();
            let mut ej = e.clone();
            ej[j] += 1;
            let mut ei = e.clone();
            ei[i] += 1;
            out.push((
                self.coeff(i, &ej) * ej[j] as f64,
                self.coeff(j, &ei) * ei[i] as f64,
            ));
        }
        out
    }

    /// Exact parity and symmetry; `None` for numeric series.
    pub fn exact_invariants_hold(&self) -> Option<bool> {
        let s = self.exact_series()?;
        let parity = (0..self.k).all(|i| s[i].terms().all(|(m, _)| parity_ok(i, &m.0)));
        let sym = (0..self.k).all(|i| {
            (i + 1..self.k).all(|j| {
                let a = s[i].derivative(j).truncate(self.order as u32 - 1);
                let b = s[j].derivative(i).truncate(self.order as u32 - 1);
                a == b
            })
        });
        Some(parity && sym)
    }
}

fn parity_ok(i: usize, e: &[u32]) -> bool {
    e.iter().enumerate().all(|(j, &x)| if j == i { x % 2 == 1 } else { x % 2 == 0 })
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    exp: Vec<u32>,
    coeff: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SeriesFile {
    k: usize,
    order: usize,
    field: serde_json::Value,
    series: Vec<Vec<TermFile>>,
}

/// Parses a holonomy-series file with exact coefficients.
pub fn parse_series(text: &str) -> Result<TruncatedHolonomy, NzError> {
    let f: SeriesFile = serde_json::from_str(text).map_err(|e| NzError::Malformed(e.to_string()))?;
    let field = NumberFieldSpec::from_json(&f.field.to_string())?;
    if f.series.len() != f.k {
        return Err(NzError::Malformed(format!("expected {} series, found {}", f.k, f.series.len())));
    }
    let mut polys = Vec::new();
    for s in &f.series {
        let terms = s
            .iter()
            .map(|t| Ok((t.exp.clone(), FieldElement::parse(&field, &t.coeff)?)))
            .collect::<Result<Vec<_>, NzError>>()?;
        polys.push(MultiPoly::from_terms(&field, f.k, terms)?);
    }
    TruncatedHolonomy::exact(polys, f.order)
}

/// Serialises an exact series in the holonomy-series file format.
pub fn series_to_json(th: &TruncatedHolonomy) -> Option<String> {
    let s = th.exact_series()?;
    let field: serde_json::Value = serde_json::from_str(&s[0].field().to_json()).ok()?;
    let series = s
        .iter()
        .map(|p| {
            p.terms()
                .map(|(m, c)| TermFile { exp: m.0.clone(), coeff: c.coords_strings() })
                .collect()
        })
        .collect();
    serde_json::to_string_pretty(&SeriesFile { k: th.k, order: th.order, field, series }).ok()
}

fn round_real(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    (1..=max_den).find_map(|d| {
        let n = (x * d as f64).round();
        ((x - n / d as f64).abs() <= tol)
            .then(|| Rational::new(BigInt::from(n as i64), BigInt::from(d)))
    })
}

/// Advisory rounding of a numeric series to a field of dimension at most 2
/// (basis `1, ω` with `ω` non-real): every coordinate is snapped to a
/// fraction with denominator `≤ max_den`, then the result is re-verified
/// exactly for parity and symmetry and numerically against the input.
pub fn round_to_field(
    th: &TruncatedHolonomy,
    field: &Arc<NumberFieldSpec>,
    max_den: i64,
    tol: f64,
) -> Result<TruncatedHolonomy, NzError> {
    let SeriesCoeffs::Numeric(num) = &th.coeffs else {
        return Ok(th.clone());
    };
    let emb = field.embedding();
    let snap = |c: Complex64| -> Option<FieldElement> {
        match emb.len() {
            1 => (c.im.abs() <= tol)
                .then(|| round_real(c.re, max_den, tol))
                .flatten()
                .map(|r| FieldElement::from_rational(field, r)),
            2 if emb[1].im.abs() > 1e-12 => {
                let y = c.im / emb[1].im;
                let x = c.re - y * emb[1].re;
                let (x, y) = (round_real(x, max_den, tol)?, round_real(y, max_den, tol)?);
                FieldElement::from_coords(field, vec![x, y]).ok()
            }
            _ => None,
        }
    };
    let mut polys = Vec::new();
    for s in num {
        let mut p = MultiPoly::zero(field, th.k);
        for (e, &c) in s {
            let fe = snap(c).ok_or_else(|| {
                NzError::Noise(format!("rounding of coefficient {e:?} = {c}"), f64::NAN)
            })?;
            p.add_term(Monomial(e.clone()), fe);
        }
        polys.push(p);
    }
    let out = TruncatedHolonomy::exact(polys, th.order)?;
    if out.exact_invariants_hold() != Some(true) {
        return Err(NzError::Noise("exact invariants after rounding".into(), f64::NAN));
    }
    for i in 0..th.k {
        for (e, c) in th.terms(i) {
            let d = (out.coeff(i, &e) - c).norm();
            if d > tol {
                return Err(NzError::Noise(format!("rounded coefficient {e:?}"), d));
            }
        }
    }
    Ok(out)
}
