//! Batch command-line front end for the `dehnfill` library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error,
//! 3 precision exhausted.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use dehnfill::anomaly::{
    self, bundled_series, rational_independence, relation_search, simplicity_verdict,
    CuspShapePair, Simplicity, SimplicityReport,
};
use dehnfill::dehn::{
    self, analyze, chain_for, hodgson_bound, pipeline_options, points_of, survey, DehnError,
    FillingCoefficient, PlaneCurveSpec,
};
use dehnfill::exactnum::{IntPoly, NumberFieldSpec};
use dehnfill::heights::{height_of, mahler_measure, AlgebraicNumber, HeightBound, HeightError};
use dehnfill::nzdata::{
    self, check_complete, cusp_shapes, parse_series, potential_coeffs, round_to_field,
    series_to_json, GluingData, NzError, TruncatedHolonomy,
};
use dehnfill::roots::{find_roots_capped, RootError, DEFAULT_PRECISION_CAP};
use dehnfill::subgroups::{mat_mul, matrix_from_i64, snf};

#[derive(Parser)]
#[command(name = "dehnfill", version, about = "Certified heights of Dehn fillings and anomalous-subvariety checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Largest working precision (bits) for certified root isolation.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_CAP)]
    precision_cap: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Mahler measure, length and root moduli of an integer polynomial.
    Mahler { path: PathBuf },
    /// Weil heights of the roots of an integer polynomial.
    Height {
        path: PathBuf,
        /// Only the root with this index.
        #[arg(long)]
        root: Option<usize>,
    },
    /// Smith normal form U·A·V = D of an integer matrix.
    Snf { path: PathBuf },
    /// Filling points, heights and the height chain at one coefficient.
    Fill {
        /// Curve file, or a bundled curve: demo, figure-eight.
        curve: String,
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
    },
    /// Height chain over all coprime coefficients up to a bound.
    Survey {
        curve: String,
        #[arg(long, default_value_t = 20)]
        max_coeff: i64,
        /// Degree threshold D for the trace-field degree count.
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
    /// Cusp shapes and the holonomy series of a gluing file.
    CuspShapes {
        /// Gluing file, or a bundled one: m125, m004.
        gluing: String,
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// Coefficient bound for the (heuristic) relation search.
        #[arg(long = "box", default_value_t = 10)]
        bound: i64,
        /// Round the series to Q(i) (denominators ≤ 64) and re-verify it.
        #[arg(long)]
        round: bool,
    },
    /// Simplicity report for a series file, with cusp-shape diagnostics.
    Anomaly {
        /// Series file, or a bundled one: pretzel, sgi, planted.
        series: String,
        /// Exact cusp shapes; defaults to the linear terms of the series.
        #[arg(long)]
        shapes: Option<PathBuf>,
        #[arg(long = "box", default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Order-N simplicity verdict for a series file or the bundled example.
    Simplicity {
        series: Option<String>,
        #[arg(long)]
        pretzel: bool,
        #[arg(long = "box", default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
}

/// Nonzero exits, with the message printed to stderr.
enum Failure {
    Verify(String),
    Input(String),
    Precision(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Input(_) => 2,
            Failure::Precision(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verify(m) | Failure::Input(m) | Failure::Precision(m) => m,
        }
    }
}

impl From<DehnError> for Failure {
    fn from(e: DehnError) -> Self {
        if e.is_precision() {
            Failure::Precision(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<HeightError> for Failure {
    fn from(e: HeightError) -> Self {
        match e {
            HeightError::PrecisionExhausted(_)
            | HeightError::Root(RootError::PrecisionExhausted { .. }) => {
                Failure::Precision(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<RootError> for Failure {
    fn from(e: RootError) -> Self {
        HeightError::Root(e).into()
    }
}

impl From<NzError> for Failure {
    fn from(e: NzError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<anomaly::AnomalyError> for Failure {
    fn from(e: anomaly::AnomalyError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Run = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Run {
    match &cli.cmd {
        Cmd::Mahler { path } => cmd_mahler(cli, path),
        Cmd::Height { path, root } => cmd_height(cli, path, *root),
        Cmd::Snf { path } => cmd_snf(cli, path),
        Cmd::Fill { curve, p, q } => cmd_fill(cli, curve, *p, *q),
        Cmd::Survey { curve, max_coeff, degree } => cmd_survey(cli, curve, *max_coeff, *degree),
        Cmd::CuspShapes { gluing, order, bound, round } => {
            cmd_shapes(cli, gluing, *order, *bound, *round)
        }
        Cmd::Anomaly { series, shapes, bound, order } => {
            cmd_anomaly(cli, series, shapes.as_deref(), *bound, *order)
        }
        Cmd::Simplicity { series, pretzel, bound, order } => {
            let th = match (series, pretzel) {
                (_, true) => bundled_series("pretzel").expect("bundled"),
                (Some(s), false) => load_series(s)?,
                (None, false) => {
                    return Err(Failure::Input("give a series file or --pretzel".into()))
                }
            };
            let report = simplicity_verdict(&th, *bound, *order)?;
            emit(cli, &(serde_json::to_string_pretty(&report.to_json()).expect("json") + "\n"))?;
            eprint!("{}", report.summary());
            verdict_exit(&report)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(cli: &Cli, text: &str) -> Run {
    match &cli.out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// A polynomial file: either an expression in `x` such as `x^2 - x - 1`,
/// a JSON object `{"coeffs": [...]}` or a plain list of integers, the last
/// two in ascending order (constant term first). `#` starts a comment.
fn parse_poly(text: &str) -> Result<IntPoly, Failure> {
    let body: String =
        text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join(" ");
    let body = body.trim();
    if body.is_empty() {
        return Err(Failure::Input("empty polynomial file".into()));
    }
    let f = if body.starts_with('{') {
        let v: Value = serde_json::from_str(body).map_err(|e| Failure::Input(e.to_string()))?;
        let items: Vec<String> = v["coeffs"]
            .as_array()
            .ok_or_else(|| Failure::Input("missing \"coeffs\" array".into()))?
            .iter()
            .map(|x| x.as_str().map_or_else(|| x.to_string(), str::to_string))
            .collect();
        IntPoly::parse_coeffs(&items).map_err(|e| Failure::Input(e.to_string()))?
    } else if body.chars().any(|c| c == 'x' || c == 'X') {
        parse_expression(body)?
    } else {
        let items: Vec<String> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        IntPoly::parse_coeffs(&items).map_err(|e| Failure::Input(e.to_string()))?
    };
    if f.is_zero() {
        return Err(Failure::Input("zero polynomial".into()));
    }
    Ok(f)
}

/// Sums of terms `c`, `c*x`, `c x^k`, `-x^k`, …
fn parse_expression(s: &str) -> Result<IntPoly, Failure> {
    let bad = |t: &str| Failure::Input(format!("cannot parse term `{t}`"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let compact = compact.replace('X', "x").replace("**", "^");
    let mut terms = Vec::new();
    let mut cur = String::new();
    for ch in compact.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut coeffs: Vec<BigInt> = Vec::new();
    for t in terms.iter().filter(|t| !t.is_empty()) {
        let (sign, rest) = match t.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, t.strip_prefix('+').unwrap_or(t)),
        };
        let (c, k) = match rest.find('x') {
            None => (rest.parse::<BigInt>().map_err(|_| bad(t))?, 0usize),
            Some(i) => {
                let c = rest[..i].trim_end_matches('*');
                let c = if c.is_empty() { BigInt::from(1) } else { c.parse().map_err(|_| bad(t))? };
                let e = &rest[i + 1..];
                let k = if e.is_empty() {
                    1
                } else {
                    e.strip_prefix('^').ok_or_else(|| bad(t))?.parse().map_err(|_| bad(t))?
                };
                (c, k)
            }
        };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigInt::from(0));
        }
        coeffs[k] += c * sign;
    }
    Ok(IntPoly::new(coeffs))
}

fn down8(x: f64) -> f64 {
    (x * 1e8).floor() / 1e8
}

fn up8(x: f64) -> f64 {
    (x * 1e8).ceil() / 1e8
}

fn interval(h: &HeightBound) -> String {
    format!("[{:.8}, {:.8}]", down8(h.lower), up8(h.upper))
}

fn cmd_mahler(cli: &Cli, path: &Path) -> Run {
    let f = parse_poly(&read(path)?)?;
    let m = mahler_measure(&f, 1e-10)?;
    let roots = if f.deg() == 0 {
        Vec::new()
    } else {
        let sq = f.shift_down(f.x_valuation()).squarefree_part();
        let mut r = Vec::new();
        if f.x_valuation() > 0 {
            r.push((0.0, 0.0));
        }
        if sq.deg() > 0 {
            for b in find_roots_capped(&sq, 1e-12, cli.precision_cap)? {
                let (c, rad) = (b.center_c64().norm(), b.radius_f64());
                r.push(((c - rad).max(0.0), c + rad));
            }
        }
        r
    };
    if cli.format == Some(Format::Json) {
        let v = json!({
            "poly": f.coeff_strings(),
            "mahler": [m.lower, m.upper],
            "length": f.length().to_string(),
            "root_moduli": roots.iter().map(|r| [r.0, r.1]).collect::<Vec<_>>(),
        });
        return emit(cli, &(serde_json::to_string_pretty(&v).expect("json") + "\n"));
    }
    let mut out = format!("f = {f}\nM ∈ {}\nL = {}\n", interval(&m), f.length());
    for (i, (lo, hi)) in roots.iter().enumerate() {
        writeln!(out, "|root {i}| ∈ [{:.8}, {:.8}]", down8(*lo), up8(*hi)).expect("string");
    }
    emit(cli, &out)
}

fn cmd_height(cli: &Cli, path: &Path, root: Option<usize>) -> Run {
    let f = parse_poly(&read(path)?)?;
    if f.deg() == 0 {
        return Err(Failure::Input("constant polynomial has no roots".into()));
    }
    let all = AlgebraicNumber::roots_of(&f, &pipeline_options())?;
    let picked: Vec<(usize, &AlgebraicNumber)> = match root {
        Some(i) => vec![(i, all.get(i).ok_or_else(|| Failure::Input(format!("no root {i}")))?)],
        None => all.iter().enumerate().collect(),
    };
    let mut out = String::new();
    let mut rows = Vec::new();
    for (i, a) in picked {
        let h = height_of(a, 1e-10)?;
        let z = a.approx();
        let r = a.root.radius_f64();
        writeln!(
            out,
            "root {i}: [{:.10} ± {r:.1e}] + [{:.10} ± {r:.1e}]i  deg {}{}  H ∈ {}",
            z.re,
            z.im,
            a.degree(),
            if a.irreducible { "" } else { " (minimal polynomial not certified)" },
            interval(&h)
        )
        .expect("string");
        rows.push(json!({
            "index": i, "re": z.re, "im": z.im, "radius": r, "degree": a.degree(),
            "certified": a.irreducible, "height": [h.lower, h.upper],
        }));
    }
    if cli.format == Some(Format::Json) {
        return emit(cli, &(serde_json::to_string_pretty(&Value::Array(rows)).expect("json") + "\n"));
    }
    emit(cli, &out)
}

fn cmd_snf(cli: &Cli, path: &Path) -> Run {
    let text = read(path)?;
    let rows: Vec<Vec<i64>> = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).map_err(|e| Failure::Input(e.to_string()))?
    } else {
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<i64>().map_err(|_| Failure::Input(format!("bad entry `{s}`"))))
                    .collect()
            })
            .collect::<Result<_, _>>()?
    };
    if rows.is_empty() || rows[0].is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Failure::Input("matrix must be nonempty and rectangular".into()));
    }
    let a = matrix_from_i64(&rows);
    let s = snf(&a);
    if mat_mul(&mat_mul(&s.u, &a), &s.v) != s.d {
        return Err(Failure::Verify("U·A·V ≠ D".into()));
    }
    let show = |m: &Vec<Vec<BigInt>>| -> Vec<Vec<String>> {
        m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
    };
    if cli.format == Some(Format::Json) {
        let v = json!({
            "U": show(&s.u), "D": show(&s.d), "V": show(&s.v),
            "divisors": s.divisors().iter().map(ToString::to_string).collect::<Vec<_>>(),
        });
        return emit(cli, &(serde_json::to_string_pretty(&v).expect("json") + "\n"));
    }
    let mut out = String::new();
    for (name, m) in [("U", &s.u), ("D", &s.d), ("V", &s.v)] {
        writeln!(out, "{name} =").expect("string");
        for r in show(m) {
            writeln!(out, "  [{}]", r.join(", ")).expect("string");
        }
    }
    let divs: Vec<String> = s.divisors().iter().map(ToString::to_string).collect();
    writeln!(out, "elementary divisors: {}\nU·A·V = D verified", divs.join(" | ")).expect("string");
    emit(cli, &out)
}

fn load_curve(arg: &str) -> Result<PlaneCurveSpec, Failure> {
    if let Some(c) = PlaneCurveSpec::bundled(arg) {
        if !Path::new(arg).exists() {
            return Ok(c);
        }
    }
    Ok(PlaneCurveSpec::from_json(&read(Path::new(arg))?)?)
}

fn cmd_fill(cli: &Cli, curve: &str, p: i64, q: i64) -> Run {
    let curve = load_curve(curve)?;
    let c = FillingCoefficient::new(p, q)?;
    let sp = analyze(&curve, c, &pipeline_options())?;
    let chain = chain_for(&curve, &sp)?;
    let points = points_of(&sp);
    let hodgson = hodgson_bound(&curve);
    let mut out = format!(
        "curve {}  L(f) = {}  Hodgson bound 2 L(f)^2 = {hodgson}\n(p, q) = ({p}, {q})\ng(t) = {}\nM(g) ∈ {}  L(g) = {}\n",
        curve.name,
        curve.length(),
        sp.g,
        interval(&sp.mahler),
        sp.length
    );
    writeln!(out, "filling points: {}", points.len()).expect("string");
    for fp in &points {
        let t = fp.t.approx();
        let r = fp.t.root.radius_f64();
        writeln!(
            out,
            "  class {}: t ∈ [{:.10} ± {r:.1e}] + [{:.10} ± {r:.1e}]i  |t| ≈ {:.6}  ({:?})",
            fp.class,
            t.re,
            t.im,
            t.norm(),
            fp.position
        )
        .expect("string");
    }
    let mut entries = Vec::new();
    for e in &chain.entries {
        let h = &e.heights;
        writeln!(
            out,
            "  class {}: deg t = {}{}  H(t) ∈ {}  deg s ∈ [{}, {}]  H(s) ∈ {}",
            e.class,
            h.deg_t,
            if h.deg_t_exact { "" } else { " (upper bound)" },
            interval(&h.ht),
            h.deg_s.0,
            h.deg_s.1,
            interval(&h.hs)
        )
        .expect("string");
        entries.push(json!({
            "class": e.class, "deg_t": h.deg_t, "deg_t_exact": h.deg_t_exact,
            "ht": [h.ht.lower, h.ht.upper], "deg_s": [h.deg_s.0, h.deg_s.1],
            "hs": [h.hs.lower, h.hs.upper], "failures": dehn::check_entry(e),
        }));
    }
    let verdict = if chain.passed() { "verified" } else { "FAILED" };
    writeln!(out, "height chain: {verdict}").expect("string");
    for f in &chain.failures {
        writeln!(out, "  failure: {f}").expect("string");
    }
    if chain.undecided > 0 {
        writeln!(out, "  {} roots with undecided position relative to |t| = 1", chain.undecided)
            .expect("string");
    }
    if cli.format == Some(Format::Json) {
        let v = json!({
            "curve": curve.name, "p": p, "q": q, "g": sp.g.coeff_strings(),
            "mahler_g": [sp.mahler.lower, sp.mahler.upper], "length_g": sp.length.to_string(),
            "length_f": curve.length().to_string(), "hodgson_bound": hodgson.to_string(),
            "points": points.len(), "classes": entries, "chain_verified": chain.passed(),
            "undecided": chain.undecided,
        });
        emit(cli, &(serde_json::to_string_pretty(&v).expect("json") + "\n"))?;
    } else {
        emit(cli, &out)?;
    }
    if chain.passed() {
        Ok(())
    } else {
        Err(Failure::Verify(format!("height chain failed: {}", chain.failures.join("; "))))
    }
}

fn cmd_survey(cli: &Cli, curve: &str, max_coeff: i64, degree: usize) -> Run {
    let curve = load_curve(curve)?;
    let res = survey(&curve, max_coeff, degree)?;
    let summary = res.summary_json();
    if cli.format == Some(Format::Json) {
        let v = json!({
            "summary": serde_json::from_str::<Value>(&summary).expect("json"),
            "rows": res.rows,
        });
        emit(cli, &(serde_json::to_string_pretty(&v).expect("json") + "\n"))?;
    } else {
        emit(cli, &res.to_csv())?;
        match &cli.out {
            Some(p) => {
                let sp = p.with_extension("summary.json");
                std::fs::write(&sp, summary + "\n")
                    .map_err(|e| Failure::Input(format!("cannot write {}: {e}", sp.display())))?;
            }
            None => eprintln!("{summary}"),
        }
    }
    let s = &res.summary;
    eprintln!(
        "{} coefficients, {} rows, max H(s) upper = {:.6} (bound {}), {} chain failures, {} errors",
        s.coefficients,
        s.rows,
        s.max_hs_upper,
        s.hodgson_bound,
        s.chain_failures.len(),
        s.errors.len()
    );
    if !s.passed() {
        return Err(Failure::Verify(format!(
            "height chain failed at {} rows",
            s.chain_failures.len()
        )));
    }
    if let Some(e) = s.errors.first() {
        let precision = e.contains("precision");
        let msg = format!("{} coefficients could not be processed: {e}", s.errors.len());
        return Err(if precision { Failure::Precision(msg) } else { Failure::Input(msg) });
    }
    Ok(())
}

fn load_gluing(arg: &str) -> Result<GluingData, Failure> {
    if !Path::new(arg).exists() {
        if let Some(g) = nzdata::bundled(arg) {
            return Ok(g);
        }
    }
    Ok(GluingData::from_json(&read(Path::new(arg))?)?)
}

fn cmd_shapes(cli: &Cli, gluing: &str, order: usize, bound: i64, round: bool) -> Run {
    let gd = load_gluing(gluing)?;
    let rep = check_complete(&gd, 1e-9)?;
    if !rep.passed {
        return Err(Failure::Input(format!(
            "gluing data is not at the complete structure (edge residual {:.2e}, cusp residual {:.2e}, rank {}/{})",
            rep.edge_residual, rep.cusp_residual, rep.system_rank, gd.n
        )));
    }
    let taus = cusp_shapes(&gd)?;
    let mut out = format!(
        "{}: {} tetrahedra, {} cusps; completeness residual {:.2e}\n",
        gd.name,
        gd.n,
        gd.k,
        rep.edge_residual.max(rep.cusp_residual)
    );
    for (i, t) in taus.iter().enumerate() {
        writeln!(out, "tau_{} ≈ {:.12} {:+.12}i  (floating point)", i + 1, t.re, t.im)
            .expect("string");
    }
    let mut relation = Value::Null;
    if taus.len() == 2 {
        let r = relation_search(taus[0], taus[1], bound, 1e-9)?;
        match &r {
            Some(r) => writeln!(
                out,
                "heuristic relation (box {bound}): {} + {}·τ1 + {}·τ2 + {}·τ1τ2 ≈ 0 (residual {:.1e}); shapes look dependent",
                r.coeffs[0], r.coeffs[1], r.coeffs[2], r.coeffs[3], r.residual
            ),
            None => writeln!(out, "heuristic: no relation with coefficients ≤ {bound}; shapes look independent"),
        }
        .expect("string");
        relation = json!(r.map(|r| r.coeffs));
    }
    let th = potential_coeffs(&gd, order)?;
    let (par, sym) = (th.parity_residual(), th.symmetry_residual());
    for i in 0..th.k {
        let mut terms = th.terms(i);
        terms.sort_by(|a, b| (a.0.iter().sum::<u32>(), &a.0).cmp(&(b.0.iter().sum::<u32>(), &b.0)));
        let shown: Vec<String> = terms
            .iter()
            .filter(|(_, c)| c.norm() > 1e-10)
            .map(|(e, c)| format!("({:.10} {:+.10}i) u^{e:?}", c.re, c.im))
            .collect();
        writeln!(out, "v_{} = {}", i + 1, shown.join(" + ")).expect("string");
    }
    let ok = par <= 1e-6 && sym <= 1e-6;
    writeln!(
        out,
        "parity residual {par:.2e}, symmetry residual {sym:.2e}: {}",
        if ok { "pass" } else { "FAIL" }
    )
    .expect("string");
    let mut rounded = None;
    if round {
        let ex = round_to_field(&th, &NumberFieldSpec::gaussian(), 64, 1e-8)?;
        let txt = series_to_json(&ex).expect("exact series");
        writeln!(out, "rounded to Q(i) and re-verified exactly").expect("string");
        rounded = Some(txt);
    }
    if let (Some(txt), Some(_)) = (&rounded, &cli.out) {
        emit(cli, &(txt.clone() + "\n"))?;
        eprint!("{out}");
    } else if cli.format == Some(Format::Json) {
        let v = json!({
            "name": gd.name,
            "cusp_shapes": taus.iter().map(|t| [t.re, t.im]).collect::<Vec<_>>(),
            "relation_heuristic": relation,
            "parity_residual": par,
            "symmetry_residual": sym,
            "series": (0..th.k).map(|i| th.terms(i).into_iter().map(|(e, c)| json!({"exp": e, "value": [c.re, c.im]})).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
        emit(cli, &(serde_json::to_string_pretty(&v).expect("json") + "\n"))?;
    } else {
        emit(cli, &out)?;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verify("series invariants fail".into()))
    }
}

fn load_series(arg: &str) -> Result<TruncatedHolonomy, Failure> {
    if !Path::new(arg).exists() {
        if let Some(s) = bundled_series(arg) {
            return Ok(s);
        }
    }
    Ok(parse_series(&read(Path::new(arg))?)?)
}

fn verdict_exit(report: &SimplicityReport) -> Run {
    match report.verdict {
        Simplicity::Inconclusive => Err(Failure::Verify(format!(
            "inconclusive: {} candidate lattices outside the cusp families",
            report.other.len()
        ))),
        _ => Ok(()),
    }
}

fn cmd_anomaly(cli: &Cli, series: &str, shapes: Option<&Path>, bound: i64, order: usize) -> Run {
    let th = load_series(series)?;
    let shapes = match shapes {
        Some(p) => CuspShapePair::from_json(&read(p)?)?,
        None => CuspShapePair::from_series(&th)?,
    };
    let report = simplicity_verdict(&th, bound, order)?;
    let independent = rational_independence(&shapes);
    let (t1, t2) = shapes.numeric();
    let rel = relation_search(t1, t2, 10, 1e-9)?;
    let mut v = report.to_json();
    v["shapes"] = json!({
        "tau1": shapes.tau1.to_string(),
        "tau2": shapes.tau2.to_string(),
        "rationally_independent": independent,
        "relation_search": {
            "heuristic": true,
            "box": 10,
            "tol": 1e-9,
            "relation": rel.as_ref().map(|r| r.coeffs),
        },
    });
    emit(cli, &(serde_json::to_string_pretty(&v).expect("json") + "\n"))?;
    eprint!("{}", report.summary());
    eprintln!(
        "cusp shapes {} and {}: 1, τ1, τ2, τ1τ2 {} over Q",
        shapes.tau1,
        shapes.tau2,
        if independent { "independent" } else { "dependent" }
    );
    verdict_exit(&report)
}
