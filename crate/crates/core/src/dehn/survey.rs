use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    analyze, check_entry, class_heights, hodgson_bound, pipeline_options, ChainEntry,
    DehnError, FillingCoefficient, PlaneCurveSpec,
};
use crate::heights::FactorOptions;

/// One conjugacy class of filling points at one coefficient, represented by
/// its root closest to `1`.
#[derive(Clone, Debug, Serialize)]
pub struct SurveyRow {
    pub p: i64,
    pub q: i64,
    pub root_index: usize,
    pub t_re: f64,
    pub t_im: f64,
    pub abs_t_minus_1: f64,
    pub deg_t: usize,
    pub ht_lo: f64,
    pub ht_hi: f64,
    /// Lower end of the certified range of `deg Q(s)`.
    pub deg_s: usize,
    /// Upper end of that range (not part of the CSV).
    #[serde(skip)]
    pub deg_s_hi: usize,
    pub hs_lo: f64,
    pub hs_hi: f64,
    pub hodgson_ok: bool,
    /// Both degrees are exact (irreducibility certified).
    pub degrees_exact: bool,
}

/// Mean of `min |t - 1|` over coefficients with `max(|p|, |q|) = shell`.
#[derive(Clone, Debug, Serialize)]
pub struct TrendBin {
    pub shell: i64,
    pub coefficients: usize,
    pub with_points: usize,
    pub mean_min_abs_t_minus_1: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurveySummary {
    pub curve: String,
    pub max_coeff: i64,
    pub degree_threshold: usize,
    pub coefficients: usize,
    pub rows: usize,
    /// Rows whose trace subfield degree is certified `≤ degree_threshold`.
    pub low_degree_count: usize,
    /// Rows where the degree range straddles the threshold.
    pub low_degree_undetermined: usize,
    pub max_hs_upper: f64,
    pub hodgson_bound: String,
    pub chain_failures: Vec<String>,
    pub errors: Vec<String>,
    pub no_filling_point: usize,
    pub undecided_roots: usize,
    pub trend: Vec<TrendBin>,
}

impl SurveySummary {
    /// Mean of `min |t - 1|` over all coefficients in shells `lo..=hi`.
    pub fn shell_mean(&self, lo: i64, hi: i64) -> Option<f64> {
        let (mut s, mut n) = (0.0, 0usize);
        for b in self.trend.iter().filter(|b| lo <= b.shell && b.shell <= hi) {
            s += b.mean_min_abs_t_minus_1 * b.with_points as f64;
            n += b.with_points;
        }
        (n > 0).then(|| s / n as f64)
    }

    pub fn passed(&self) -> bool {
        self.chain_failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SurveyResult {
    pub rows: Vec<SurveyRow>,
    pub summary: SurveySummary,
}

pub const CSV_HEADER: &str = "p,q,root_index,t_re,t_im,abs_t_minus_1,deg_t,Ht_lo,Ht_hi,deg_s,Hs_lo,Hs_hi,hodgson_ok,degrees_exact";

impl SurveyResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{:e},{:e},{:e},{},{:e},{:e},{},{:e},{:e},{},{}",
                r.p,
                r.q,
                r.root_index,
                r.t_re,
                r.t_im,
                r.abs_t_minus_1,
                r.deg_t,
                r.ht_lo,
                r.ht_hi,
                r.deg_s,
                r.hs_lo,
                r.hs_hi,
                r.hodgson_ok,
                r.degrees_exact
            )
            .expect("write to string");
        }
        out
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serialises")
    }
}

/// All coprime `(p, q)` with `|p|, |q| ≤ n`, one per `±` pair, sorted.
pub fn coefficients(n: i64) -> Vec<FillingCoefficient> {
    let mut out = Vec::new();
    for p in -n..=n {
        for q in 0..=n {
            if (q == 0 && p <= 0) || p.gcd(&q) != 1 {
                continue;
            }
            out.push(FillingCoefficient { p, q });
        }
    }
    out.sort();
    out
}

struct CoeffOutcome {
    rows: Vec<SurveyRow>,
    failures: Vec<String>,
    error: Option<String>,
    undecided: usize,
}

fn run_one(
    curve: &PlaneCurveSpec,
    c: FillingCoefficient,
    opts: &FactorOptions,
    hodgson: &BigInt,
) -> CoeffOutcome {
    let mut out = CoeffOutcome { rows: Vec::new(), failures: Vec::new(), error: None, undecided: 0 };
    let sp = match analyze(curve, c, opts) {
        Ok(sp) => sp,
        Err(DehnError::ZeroSpecialization(..)) => return out,
        Err(e) => {
            out.error = Some(format!("({}, {}): {e}", c.p, c.q));
            return out;
        }
    };
    let length_f = curve.length();
    for (ci, cl) in sp.classes.iter().enumerate() {
        out.undecided += cl
            .positions
            .iter()
            .filter(|p| **p == super::CirclePosition::Undecidable)
            .count();
        let Some(rep) = cl.nearest_one() else { continue };
        let heights = match class_heights(cl, rep) {
            Ok(h) => h,
            Err(e) => {
                out.error = Some(format!("({}, {}) class {ci}: {e}", c.p, c.q));
                continue;
            }
        };
        let e = ChainEntry {
            class: ci,
            heights,
            mahler_g: sp.mahler,
            length_g: sp.length.clone(),
            length_f: length_f.clone(),
            hodgson: hodgson.clone(),
        };
        let bad = check_entry(&e);
        for b in &bad {
            out.failures.push(format!("({}, {}) class {ci}: {b}", c.p, c.q));
        }
        let t = cl.factor.roots[rep].center_c64();
        let h = &e.heights;
        out.rows.push(SurveyRow {
            p: c.p,
            q: c.q,
            root_index: ci,
            t_re: t.re,
            t_im: t.im,
            abs_t_minus_1: (t - 1.0).norm(),
            deg_t: h.deg_t,
            ht_lo: h.ht.lower,
            ht_hi: h.ht.upper,
            deg_s: h.deg_s.0,
            deg_s_hi: h.deg_s.1,
            hs_lo: h.hs.lower,
            hs_hi: h.hs.upper,
            hodgson_ok: bad.is_empty(),
            degrees_exact: h.deg_t_exact && h.deg_s.0 == h.deg_s.1,
        });
    }
    out
}

/// Survey with the pipeline's default factorisation options.
pub fn survey(
    curve: &PlaneCurveSpec,
    max_coeff: i64,
    degree_threshold: usize,
) -> Result<SurveyResult, DehnError> {
    survey_with(curve, max_coeff, degree_threshold, &pipeline_options())
}

/// Runs every coefficient (in parallel), then assembles rows in
/// coefficient order. Per-coefficient failures are recorded, not fatal.
pub fn survey_with(
    curve: &PlaneCurveSpec,
    max_coeff: i64,
    degree_threshold: usize,
    opts: &FactorOptions,
) -> Result<SurveyResult, DehnError> {
    if max_coeff < 1 {
        return Err(DehnError::Bound(format!("max_coeff must be at least 1, got {max_coeff}")));
    }
    let hodgson = hodgson_bound(curve);
    let coeffs = coefficients(max_coeff);
    let outcomes: Vec<CoeffOutcome> =
        coeffs.par_iter().map(|&c| run_one(curve, c, opts, &hodgson)).collect();
    let mut rows = Vec::new();
    let mut chain_failures = Vec::new();
    let mut errors = Vec::new();
    let mut no_filling_point = 0;
    let mut undecided_roots = 0;
    let mut bins: BTreeMap<i64, (usize, usize, f64)> = BTreeMap::new();
    for (c, o) in coeffs.iter().zip(outcomes) {
        let shell = c.p.abs().max(c.q);
        let bin = bins.entry(shell).or_insert((0, 0, 0.0));
        bin.0 += 1;
        if let Some(d) = o.rows.iter().map(|r| r.abs_t_minus_1).min_by(f64::total_cmp) {
            bin.1 += 1;
            bin.2 += d;
        } else if o.error.is_none() {
            no_filling_point += 1;
        }
        undecided_roots += o.undecided;
        chain_failures.extend(o.failures);
        errors.extend(o.error);
        rows.extend(o.rows);
    }
    let low_degree_count = rows.iter().filter(|r| r.deg_s_hi <= degree_threshold).count();
    let low_degree_undetermined = rows
        .iter()
        .filter(|r| r.deg_s <= degree_threshold && r.deg_s_hi > degree_threshold)
        .count();
    let max_hs_upper = rows.iter().map(|r| r.hs_hi).fold(1.0, f64::max);
    let trend = bins
        .into_iter()
        .map(|(shell, (n, k, s))| TrendBin {
            shell,
            coefficients: n,
            with_points: k,
            mean_min_abs_t_minus_1: if k > 0 { s / k as f64 } else { f64::NAN },
        })
        .collect();
    let summary = SurveySummary {
        curve: curve.name.clone(),
        max_coeff,
        degree_threshold,
        coefficients: coeffs.len(),
        rows: rows.len(),
        low_degree_count,
        low_degree_undetermined,
        max_hs_upper,
        hodgson_bound: hodgson.to_string(),
        chain_failures,
        errors,
        no_filling_point,
        undecided_roots,
        trend,
    };
    Ok(SurveyResult { rows, summary })
}

