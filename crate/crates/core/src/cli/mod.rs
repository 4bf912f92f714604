//! Command-line front end. [`execute`] is pure: it returns the stdout text
//! and the artifacts to write, so tests can run every command in-process.
//!
//! Exit codes: 2 parse failure, 3 domain error, 4 numerically uncertified.

pub mod spec;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::dynamics::{classify_with_witnesses, orbit, periodic_vector, DynamicsQuery, Polynomial, Regime};
use crate::error::TridiagError;
use crate::matrixkernel::{
    diagonalization_check, direct_sum_classify, direct_sum_classify_lambda, direct_sum_kernel_check, mk_kernel_eval,
    MatrixDynamicsReport, MatrixKernelSpace,
};
use crate::operator::{
    boundedness_report, build_matrix, compactness_check, decompose, BoundednessVerdict, OperatorMatrix,
};
use crate::sequences::{CVanishing, SequencePair};
use crate::space::TridiagonalSpace;
use crate::spectrum::essential_spectrum;
use crate::verify::{
    oracle_annulus, oracle_matrix_columns, oracle_monomial_norms, random_pairs, representable_horizon, verify_all,
    OracleReport,
};
use spec::{parse_spec, SpaceSpec};

pub const OUT_ENV: &str = "TRIDIAG_OUT";

const DEFAULT_TRUNCATION: usize = 64;
const DEFAULT_HORIZON: usize = 32;
const COMPACTNESS_TOL: f64 = 1e-8;
const KERNEL_CHECK_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "tridiag",
    version,
    about = "Tridiagonal kernel spaces and backward-shift dynamics"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// JSON space spec.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Scalar multiplier as `RE,IM` (or `RE`).
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: Option<Complex64>,
    /// Truncation size or index horizon, depending on the command.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Number of kept subdiagonal bands for `decompose`.
    #[arg(long, global = true)]
    pub bands: Option<usize>,
    /// Column horizon for `spectrum`, band horizon elsewhere.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Output directory; overridden by `TRIDIAG_OUT`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print the CSV table instead of text.
    #[arg(long, global = true)]
    pub csv: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    All,
    Matrix,
    Norms,
    Annulus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Asymptotics, standing assumption and boundedness.
    Describe,
    /// Hypercyclic / mixing / chaotic verdicts with clause tags.
    Classify {
        /// `|λ|` grid `LO:HI:STEP`.
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Truncated matrix of the backward shift.
    Matrix,
    /// Weighted shift + diagonal + band decomposition.
    Decompose,
    /// Essential-spectrum annulus (`--n` rows, `--horizon` columns).
    Spectrum,
    /// Monomial norms for `n <= --n`.
    Norms,
    /// Norm trace of `(λB)^k x`.
    Orbit {
        #[arg(long, default_value_t = 16)]
        steps: usize,
        /// Basis coordinates `RE,IM;RE,IM;...`.
        #[arg(long)]
        x: Option<String>,
    },
    /// Truncated periodic-vector construction.
    Periodic {
        #[arg(long, default_value_t = 1)]
        period: usize,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Power coefficients of `f` as `RE,IM;RE,IM;...` (default `1`).
        #[arg(long)]
        f: Option<String>,
    },
    /// Matrix-kernel checks: unitarity, diagonalization, direct-sum kernel.
    Vector {
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Independent oracles.
    Verify {
        #[arg(value_enum, default_value_t = VerifyTarget::All)]
        target: VerifyTarget,
        /// Additional seeded random families.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| format!("not a number: {p:?}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected RE,IM, got {s:?}")),
    }
}

fn parse_vector(s: &str) -> Result<Vec<Complex64>, CliError> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_complex(p).map_err(CliError::domain))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Domain,
    Uncertified,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Parse => 2,
            ErrorKind::Domain => 3,
            ErrorKind::Uncertified => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    fn parse(m: impl ToString) -> Self {
        CliError {
            kind: ErrorKind::Parse,
            message: m.to_string(),
        }
    }

    fn domain(m: impl ToString) -> Self {
        CliError {
            kind: ErrorKind::Domain,
            message: m.to_string(),
        }
    }
}

impl From<TridiagError> for CliError {
    fn from(e: TridiagError) -> Self {
        CliError::domain(e)
    }
}

/// Result of one command: text for stdout, files for the output directory,
/// and an optional uncertified-result message (exit code 4).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub files: Vec<(String, String)>,
    pub uncertified: Option<String>,
}

struct Context {
    spec: SpaceSpec,
    spec_hash: String,
    command: &'static str,
}

impl Context {
    fn envelope(&self, options: Value, report: Value) -> String {
        let doc = json!({
            "tool": "tridiag",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "spec_sha256": self.spec_hash,
            "options": options,
            "report": report,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
        s.push('\n');
        s
    }

    fn scalar(&self) -> Result<&SequencePair, CliError> {
        match &self.spec {
            SpaceSpec::Scalar { pair, .. } => Ok(pair),
            SpaceSpec::Matrix { .. } => Err(CliError::domain(format!(
                "`{}` needs a scalar spec; use `vector` or `classify` for matrix specs",
                self.command
            ))),
        }
    }

    fn space(&self, truncation: usize) -> Result<TridiagonalSpace, CliError> {
        let mut space = TridiagonalSpace::new(self.scalar()?.clone(), truncation)?;
        if let Some(t) = self.spec.options().tolerance {
            space = space.with_tail_safety_factor(t)?;
        }
        Ok(space)
    }

    fn truncation(&self, g: &GlobalOpts) -> usize {
        g.n.or(self.spec.options().truncation).unwrap_or(DEFAULT_TRUNCATION)
    }

    fn horizon(&self, g: &GlobalOpts) -> usize {
        g.horizon.or(self.spec.options().horizon).unwrap_or(DEFAULT_HORIZON)
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Shortest round-trip form, in exponent notation for very small or large
/// magnitudes; `-0` prints as `0`.
fn num(x: f64) -> String {
    let x = x + 0.0;
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{},{}", num(z.re), num(z.im))
}

fn matrix_csv(m: &OperatorMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim()).map(|j| format!("\"{}\"", fmt_c(m.entry(i, j)))).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn lambda_of(g: &GlobalOpts) -> Result<DynamicsQuery, CliError> {
    Ok(DynamicsQuery::new(g.lambda.unwrap_or(Complex64::new(1.0, 0.0)))?)
}

fn lambda_json(q: &DynamicsQuery) -> Value {
    json!([q.lambda().re, q.lambda().im])
}

/// Emits `text`, or the JSON / CSV form when requested.
fn present(g: &GlobalOpts, text: String, json_doc: &str, csv: Option<&str>) -> String {
    if g.json {
        json_doc.to_string()
    } else if g.csv {
        csv.map_or_else(|| json_doc.to_string(), str::to_string)
    } else {
        text
    }
}

fn verdict_line(v: &BoundednessVerdict, limsup: impl std::fmt::Display) -> String {
    match v {
        BoundednessVerdict::Bounded { provenance } => {
            let regime = match provenance {
                crate::provenance::Clause::Remark2_4 => "regime",
                _ => "band series",
            };
            format!("bounded ({} {regime}), limsup = {limsup}", provenance.long_name())
        }
        BoundednessVerdict::NotProvenBounded {
            necessary_violated: true,
        } => {
            format!("not bounded (necessary conditions fail), limsup = {limsup}")
        }
        BoundednessVerdict::NotProvenBounded {
            necessary_violated: false,
        } => {
            format!("not proven bounded, limsup = {limsup}")
        }
        BoundednessVerdict::Indeterminate => format!("boundedness indeterminate, limsup = {limsup}"),
    }
}

fn describe_scalar(ctx: &Context, g: &GlobalOpts) -> Result<Output, CliError> {
    let space = ctx.space(ctx.truncation(g))?;
    let pair = space.pair();
    let asym = space.asymptotics();
    let bounded = boundedness_report(pair, ctx.horizon(g).max(16))?;
    let standing = space.standing_assumption();
    let mut text = String::new();
    if let Some(name) = &ctx.spec.options().name {
        writeln!(text, "space: {name}").unwrap();
    }
    writeln!(text, "{pair}").unwrap();
    writeln!(
        text,
        "unit radius of convergence: {}",
        if standing.unit_radius { "yes" } else { "no" }
    )
    .unwrap();
    writeln!(text, "lim |a_(n+1)/a_n| = {}", num(asym.ratio_limit_a)).unwrap();
    writeln!(
        text,
        "c_n: {}, {}",
        if asym.c_bounded { "bounded" } else { "unbounded" },
        if asym.c_limit_zero {
            "tends to zero"
        } else {
            "does not tend to zero"
        }
    )
    .unwrap();
    match &asym.c_vanishing {
        CVanishing::Nowhere => {}
        CVanishing::At(idx) => writeln!(text, "c_n vanishes at n = {idx:?}").unwrap(),
        CVanishing::Eventually => writeln!(text, "c_n vanishes eventually").unwrap(),
    }
    writeln!(text, "{}", verdict_line(&bounded.verdict, bounded.tridiag_limsup)).unwrap();
    let doc = ctx.envelope(
        json!({"horizon": bounded.horizon}),
        json!({
            "space": pair.to_string(),
            "standing_assumption": to_value(&standing),
            "asymptotics": to_value(asym),
            "boundedness": to_value(&bounded),
        }),
    );
    Ok(Output {
        stdout: present(g, text, &doc, None),
        files: vec![("describe.json".into(), doc)],
        uncertified: None,
    })
}

fn describe_matrix(ctx: &Context, g: &GlobalOpts, ms: &MatrixKernelSpace) -> Result<Output, CliError> {
    let mut text = String::new();
    writeln!(text, "matrix-valued space, d = {}", ms.d()).unwrap();
    writeln!(text, "unitarity deviation: {:.3e}", ms.unitarity_deviation()).unwrap();
    let mut channels = Vec::new();
    for (q, s) in ms.channels().iter().enumerate() {
        let bounded = boundedness_report(s.pair(), ctx.horizon(g).max(16))?;
        writeln!(text, "channel {q}: {}", s.pair()).unwrap();
        writeln!(text, "  {}", verdict_line(&bounded.verdict, bounded.tridiag_limsup)).unwrap();
        channels.push(json!({
            "space": s.pair().to_string(),
            "asymptotics": to_value(s.asymptotics()),
            "boundedness": to_value(&bounded),
        }));
    }
    if let Some(raw) = ms.raw() {
        writeln!(text, "raw tables: {} A, {} B", raw.a.len(), raw.b.len()).unwrap();
    }
    let doc = ctx.envelope(
        json!({}),
        json!({"d": ms.d(), "unitarity_deviation": ms.unitarity_deviation(), "channels": channels}),
    );
    Ok(Output {
        stdout: present(g, text, &doc, None),
        files: vec![("describe.json".into(), doc)],
        uncertified: None,
    })
}

fn parse_sweep(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::domain(format!("bad sweep {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    let [lo, hi, step] = parts[..] else {
        return Err(CliError::domain(format!("sweep must be LO:HI:STEP, got {s:?}")));
    };
    // written so that NaN bounds are rejected too
    let valid = step > 0.0 && hi >= lo && lo > 0.0;
    if !valid {
        return Err(CliError::domain("sweep needs 0 < LO <= HI and STEP > 0"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

fn matrix_report_lines(r: &MatrixDynamicsReport) -> String {
    let mut text = String::new();
    writeln!(
        text,
        "|lambda| = {}{}",
        num(r.lambda_abs),
        if r.experimental { " (experimental)" } else { "" }
    )
    .unwrap();
    if let Some(q) = r.slowest_channel {
        writeln!(text, "slowest channel: {q}").unwrap();
    }
    writeln!(text, "hypercyclic: {}", r.hypercyclic).unwrap();
    writeln!(text, "mixing: {}", r.mixing).unwrap();
    writeln!(text, "chaotic: {}", r.chaotic).unwrap();
    text
}

fn classify_cmd(ctx: &Context, g: &GlobalOpts, sweep: Option<&str>) -> Result<Output, CliError> {
    let query = lambda_of(g)?;
    if let Some(grid) = sweep {
        let grid = parse_sweep(grid)?;
        let mut csv = String::from("lambda_abs,hypercyclic,mixing,chaotic,subspace\n");
        let mut rows = Vec::new();
        for l in grid {
            let q = DynamicsQuery::real(l)?;
            let (h, m, c, sub) = match &ctx.spec {
                SpaceSpec::Scalar { pair, .. } => {
                    let r = crate::dynamics::classify(pair, &q);
                    let sub = r.hypercyclic_subspace.map_or("indeterminate".to_string(), |s| {
                        format!("{}[{}]", tri_word(s.result), s.provenance)
                    });
                    (
                        r.hypercyclic.to_string(),
                        r.mixing.to_string(),
                        r.chaotic.to_string(),
                        sub,
                    )
                }
                SpaceSpec::Matrix { space, .. } => {
                    let r = direct_sum_classify_lambda(space, q.lambda())?;
                    (
                        r.hypercyclic.to_string(),
                        r.mixing.to_string(),
                        r.chaotic.to_string(),
                        "indeterminate".into(),
                    )
                }
            };
            writeln!(csv, "{},{h},{m},{c},{sub}", num(l)).unwrap();
            rows.push(json!({"lambda_abs": l, "hypercyclic": h, "mixing": m, "chaotic": c, "subspace": sub}));
        }
        let doc = ctx.envelope(json!({"sweep": sweep}), Value::Array(rows));
        return Ok(Output {
            stdout: present(g, csv.clone(), &doc, Some(&csv)),
            files: vec![("sweep.csv".into(), csv), ("sweep.json".into(), doc)],
            uncertified: None,
        });
    }
    match &ctx.spec {
        SpaceSpec::Scalar { .. } => {
            let space = ctx.space(ctx.truncation(g))?;
            let r = classify_with_witnesses(&space, &query, ctx.horizon(g));
            let mut text = String::new();
            writeln!(
                text,
                "lambda = {} (|lambda| = {})",
                fmt_c(query.lambda()),
                num(query.modulus())
            )
            .unwrap();
            let regime = match r.regime {
                Regime::Strong => "strong",
                Regime::SufficientOnly => "sufficient conditions only",
                Regime::NotProvenBounded => "not proven bounded",
            };
            writeln!(text, "regime: {regime}").unwrap();
            writeln!(text, "hypercyclic: {}", r.hypercyclic).unwrap();
            writeln!(text, "mixing: {}", r.mixing).unwrap();
            writeln!(text, "chaotic: {}", r.chaotic).unwrap();
            if let Some(s) = &r.hypercyclic_subspace {
                writeln!(text, "hypercyclic subspace: {}[{}]", tri_word(s.result), s.provenance).unwrap();
            }
            let doc = ctx.envelope(
                json!({"lambda": lambda_json(&query), "horizon": ctx.horizon(g)}),
                to_value(&r),
            );
            Ok(Output {
                stdout: present(g, text, &doc, None),
                files: vec![("classify.json".into(), doc)],
                uncertified: None,
            })
        }
        SpaceSpec::Matrix { space, .. } => {
            let r = if query.lambda() == Complex64::new(1.0, 0.0) {
                direct_sum_classify(space)
            } else {
                direct_sum_classify_lambda(space, query.lambda())?
            };
            let doc = ctx.envelope(json!({"lambda": lambda_json(&query)}), to_value(&r));
            Ok(Output {
                stdout: present(g, matrix_report_lines(&r), &doc, None),
                files: vec![("classify.json".into(), doc)],
                uncertified: None,
            })
        }
    }
}

fn tri_word(t: crate::sequences::Tri) -> &'static str {
    match t {
        crate::sequences::Tri::Yes => "yes",
        crate::sequences::Tri::No => "no",
        crate::sequences::Tri::Indeterminate => "indeterminate",
    }
}

fn matrix_cmd(ctx: &Context, g: &GlobalOpts) -> Result<Output, CliError> {
    let n = g.n.unwrap_or(16);
    let space = ctx.space(n.max(1))?;
    let m = build_matrix(&space, n)?;
    let csv = matrix_csv(&m);
    let doc = ctx.envelope(json!({"n": n}), json!({"dim": n, "entries": m.to_rows()}));
    Ok(Output {
        stdout: present(g, csv.clone(), &doc, Some(&csv)),
        files: vec![("matrix.csv".into(), csv), ("matrix.json".into(), doc)],
        uncertified: None,
    })
}

fn decompose_cmd(ctx: &Context, g: &GlobalOpts) -> Result<Output, CliError> {
    let n = g.n.unwrap_or(16);
    let bands = g.bands.unwrap_or(4.min(n.saturating_sub(1)));
    let space = ctx.space(n.max(1))?;
    let d = decompose(&space, n, bands)?;
    let compact = compactness_check(&space, n, COMPACTNESS_TOL)?;
    let mut csv = String::from("m,first_column,sup_interior,norm\n");
    for b in &d.bands {
        writeln!(
            csv,
            "{},{},{},{}",
            b.m,
            num(b.norm.first_column),
            num(b.norm.sup_interior),
            num(b.norm.norm)
        )
        .unwrap();
    }
    let mut text = String::new();
    writeln!(text, "N = {n}, bands kept = {bands}").unwrap();
    writeln!(text, "residual on columns >= {}: {}", d.covered_from, num(d.residual)).unwrap();
    writeln!(text, "largest dropped entry: {}", num(d.dropped_max)).unwrap();
    match compact.decay_index {
        Some(i) => writeln!(text, "diagonal and bands below {COMPACTNESS_TOL:e} from row {i}").unwrap(),
        None => writeln!(
            text,
            "diagonal and bands do not fall below {COMPACTNESS_TOL:e} within N"
        )
        .unwrap(),
    }
    let doc = ctx.envelope(
        json!({"n": n, "bands": bands, "tol": COMPACTNESS_TOL}),
        json!({"decomposition": to_value(&d), "compactness": to_value(&compact)}),
    );
    Ok(Output {
        stdout: present(g, text, &doc, Some(&csv)),
        files: vec![("decompose.json".into(), doc), ("bands.csv".into(), csv)],
        uncertified: None,
    })
}

fn spectrum_cmd(ctx: &Context, g: &GlobalOpts) -> Result<Output, CliError> {
    let n_max = g.n.unwrap_or(50);
    let k_max = g.horizon.unwrap_or(2000);
    let pair = ctx.scalar()?;
    let s = essential_spectrum(pair, n_max, k_max)?;
    let mut csv = String::from("n,inf_root,sup_root,running_inner,running_outer\n");
    for r in &s.rows {
        writeln!(
            csv,
            "{},{},{},{},{}",
            r.n,
            num(r.inf_root),
            num(r.sup_root),
            num(r.running_inner),
            num(r.running_outer)
        )
        .unwrap();
    }
    let text = format!(
        "inner = {}, outer = {}\nfinite horizon ({n_max}, {k_max}): inner = {}, outer = {}\n",
        num(s.inner),
        num(s.outer),
        num(s.finite_horizon_inner),
        num(s.finite_horizon_outer)
    );
    let doc = ctx.envelope(json!({"n_max": n_max, "k_max": k_max}), s.to_json_value());
    Ok(Output {
        stdout: present(g, text, &doc, Some(&csv)),
        files: vec![("spectrum.json".into(), doc), ("spectrum.csv".into(), csv)],
        uncertified: None,
    })
}

fn norms_cmd(ctx: &Context, g: &GlobalOpts) -> Result<Output, CliError> {
    let n_max = g.n.unwrap_or(32);
    let space = ctx.space(ctx.spec.options().truncation.unwrap_or(DEFAULT_TRUNCATION))?;
    let est = space.norm_estimates(0..n_max + 1);
    let mut csv = String::from("n,norm,certified\n");
    let mut certified = true;
    for n in 0..=n_max {
        let m = space.monomial_norm_sq(n);
        certified &= m.certified;
        writeln!(csv, "{n},{},{}", num(m.norm()), m.certified).unwrap();
    }
    let mut text = String::new();
    writeln!(text, "n <= {n_max}: M2 = {}", num(est.m2)).unwrap();
    if let Some(m1) = est.m1 {
        writeln!(text, "M1 = {}", num(m1)).unwrap();
    }
    writeln!(text, "certified: {}", if certified { "yes" } else { "no" }).unwrap();
    let doc = ctx.envelope(json!({"n_max": n_max}), to_value(&est));
    Ok(Output {
        stdout: present(g, text, &doc, Some(&csv)),
        files: vec![("norms.json".into(), doc), ("norms.csv".into(), csv)],
        uncertified: (!certified).then(|| "monomial norm tails are not certified".to_string()),
    })
}

fn orbit_cmd(ctx: &Context, g: &GlobalOpts, steps: usize, x: Option<&str>) -> Result<Output, CliError> {
    let query = lambda_of(g)?;
    let x = match x {
        Some(s) => parse_vector(s)?,
        None => vec![Complex64::new(1.0, 0.0)],
    };
    let n = g.n.unwrap_or(DEFAULT_TRUNCATION.max(steps + x.len() + 1));
    let space = ctx.space(n.max(1))?;
    let t = orbit(&space, &query, &x, steps, n)?;
    let mut csv = String::from("k,matrix_norm,coefficient_norm\n");
    for k in 0..=steps {
        writeln!(csv, "{k},{},{}", num(t.matrix_norms[k]), num(t.coefficient_norms[k])).unwrap();
    }
    let text = format!("{csv}max discrepancy: {}\n", num(t.max_discrepancy));
    let doc = ctx.envelope(
        json!({"lambda": lambda_json(&query), "n": n, "steps": steps}),
        to_value(&t),
    );
    Ok(Output {
        stdout: present(g, text, &doc, Some(&csv)),
        files: vec![("orbit.json".into(), doc), ("orbit.csv".into(), csv)],
        uncertified: None,
    })
}

fn periodic_cmd(ctx: &Context, g: &GlobalOpts, period: usize, k: usize, f: Option<&str>) -> Result<Output, CliError> {
    let query = lambda_of(g)?;
    let f = match f {
        Some(s) => Polynomial::Coefficients(parse_vector(s)?),
        None => Polynomial::one(),
    };
    let degree = match &f {
        Polynomial::Coefficients(c) => c.len().saturating_sub(1),
        Polynomial::Basis(x) => x.len(),
    };
    let n =
        g.n.unwrap_or(DEFAULT_TRUNCATION.max(2 * (degree + k * period + period + 1)));
    let space = ctx.space(n.max(1))?;
    let w = periodic_vector(&space, &query, period, &f, k, n)?;
    let mut text = String::new();
    writeln!(text, "p = {period}, K = {k}, N = {n}").unwrap();
    writeln!(text, "residual norm: {}", num(w.residual_norm)).unwrap();
    writeln!(text, "predicted norm: {}", num(w.predicted_norm)).unwrap();
    writeln!(text, "identity deviation: {}", num(w.identity_deviation)).unwrap();
    if w.experimental {
        writeln!(text, "experimental: the operator is not known to be chaotic here").unwrap();
    }
    let doc = ctx.envelope(
        json!({"lambda": lambda_json(&query), "period": period, "k": k, "n": n}),
        to_value(&w),
    );
    Ok(Output {
        stdout: present(g, text, &doc, None),
        files: vec![("periodic.json".into(), doc)],
        uncertified: None,
    })
}

fn vector_cmd(ctx: &Context, g: &GlobalOpts, samples: usize, seed: u64) -> Result<Output, CliError> {
    let SpaceSpec::Matrix { space: ms, .. } = &ctx.spec else {
        return Err(CliError::domain("`vector` needs a matrix spec with channels"));
    };
    let n = g.n.unwrap_or(120);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(Complex64, Complex64)> = (0..samples)
        .map(|_| {
            let mut pt = || Complex64::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..std::f64::consts::TAU));
            (pt(), pt())
        })
        .collect();
    let kernel = direct_sum_kernel_check(ms, &points, n, KERNEL_CHECK_TOL)?;
    let diag = match ms.raw() {
        Some(raw) => {
            let idx: std::collections::BTreeSet<usize> = raw.a.keys().chain(raw.b.keys()).copied().collect();
            let idx: Vec<usize> = idx
                .into_iter()
                .filter(|i| raw.a.contains_key(i) && raw.b.contains_key(i))
                .collect();
            Some(diagonalization_check(ms, &idx, KERNEL_CHECK_TOL)?)
        }
        None => None,
    };
    let origin = mk_kernel_eval(ms, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), n)?;
    let origin_rows: Vec<Vec<[f64; 2]>> = (0..ms.d())
        .map(|i| {
            (0..ms.d())
                .map(|j| [origin.reduced[(i, j)].re, origin.reduced[(i, j)].im])
                .collect()
        })
        .collect();
    let class = direct_sum_classify(ms);
    let mut text = String::new();
    writeln!(
        text,
        "d = {}, unitarity deviation: {:.3e}",
        ms.d(),
        ms.unitarity_deviation()
    )
    .unwrap();
    writeln!(
        text,
        "direct-sum kernel check: max deviation {:.3e} over {samples} samples",
        kernel.max_deviation
    )
    .unwrap();
    if let Some(d) = &diag {
        writeln!(text, "diagonalization check: max deviation {:.3e}", d.max_deviation).unwrap();
        if let (false, Some(w)) = (d.passed, d.worst) {
            writeln!(text, "  worst: {}_{} deviation {:.3e}", w.matrix, w.index, w.deviation).unwrap();
        }
    }
    text.push_str(&matrix_report_lines(&class));
    let passed = kernel.passed && diag.as_ref().is_none_or(|d| d.passed);
    let doc = ctx.envelope(
        json!({"n": n, "samples": samples, "seed": seed, "tol": KERNEL_CHECK_TOL}),
        json!({
            "unitarity_deviation": ms.unitarity_deviation(),
            "kernel_check": to_value(&kernel),
            "diagonalization": diag.as_ref().map(to_value),
            "kernel_at_origin": origin_rows,
            "classification": to_value(&class),
        }),
    );
    Ok(Output {
        stdout: present(g, text, &doc, None),
        files: vec![("vector.json".into(), doc)],
        uncertified: (!passed).then(|| "matrix-kernel checks exceeded tolerance".to_string()),
    })
}

fn run_oracles(space: &TridiagonalSpace, target: VerifyTarget, dim: usize) -> Vec<OracleReport> {
    let pair = space.pair();
    let failed = |oracle: &str, e: TridiagError| OracleReport {
        oracle: oracle.into(),
        instance: pair.to_string(),
        max_deviation: f64::INFINITY,
        tolerance: 0.0,
        passed: false,
        worst_index: None,
        note: Some(e.to_string()),
    };
    match target {
        VerifyTarget::All => verify_all(space, dim, 100),
        VerifyTarget::Matrix => vec![oracle_matrix_columns(space, dim).unwrap_or_else(|e| failed("matrix_columns", e))],
        VerifyTarget::Norms => vec![oracle_monomial_norms(space, 100).unwrap_or_else(|e| failed("monomial_norms", e))],
        VerifyTarget::Annulus => {
            let h: Vec<_> = [(10, 100), (50, 2000)]
                .iter()
                .map(|&(n, k)| representable_horizon(&pair.a, n, k))
                .collect();
            vec![oracle_annulus(pair, &h).unwrap_or_else(|e| failed("annulus", e))]
        }
    }
}

fn verify_cmd(
    ctx: &Context,
    g: &GlobalOpts,
    target: VerifyTarget,
    random: usize,
    seed: u64,
) -> Result<Output, CliError> {
    let dim = g.n.unwrap_or(DEFAULT_TRUNCATION);
    let pairs: Vec<SequencePair> = match &ctx.spec {
        SpaceSpec::Scalar { pair, .. } => vec![pair.clone()],
        SpaceSpec::Matrix { space, .. } => space.channels().iter().map(|s| s.pair().clone()).collect(),
    };
    let mut reports = Vec::new();
    for p in pairs.into_iter().chain(random_pairs(seed, random, 0.8)) {
        let space = TridiagonalSpace::new(p, dim.max(1))?;
        reports.extend(run_oracles(&space, target, dim));
    }
    let mut text = String::new();
    for r in &reports {
        writeln!(
            text,
            "{} {}: deviation {:.3e} (tol {:.0e}) {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.oracle,
            r.max_deviation,
            r.tolerance,
            r.instance
        )
        .unwrap();
    }
    let all_passed = reports.iter().all(|r| r.passed);
    let doc = ctx.envelope(json!({"n": dim, "random": random, "seed": seed}), to_value(&reports));
    Ok(Output {
        stdout: present(g, text, &doc, None),
        files: vec![("verify.json".into(), doc)],
        uncertified: (!all_passed).then(|| "one or more oracles failed".to_string()),
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Describe => "describe",
        Command::Classify { .. } => "classify",
        Command::Matrix => "matrix",
        Command::Decompose => "decompose",
        Command::Spectrum => "spectrum",
        Command::Norms => "norms",
        Command::Orbit { .. } => "orbit",
        Command::Periodic { .. } => "periodic",
        Command::Vector { .. } => "vector",
        Command::Verify { .. } => "verify",
    }
}

/// Runs a parsed command against spec text (already read).
pub fn execute(cli: &Cli, spec_text: &str, source: &str) -> Result<Output, CliError> {
    let spec = parse_spec(spec_text, source).map_err(CliError::parse)?;
    let ctx = Context {
        spec,
        spec_hash: hex::encode(Sha256::digest(spec_text.as_bytes())),
        command: command_name(&cli.command),
    };
    let g = &cli.global;
    match &cli.command {
        Command::Describe => match &ctx.spec {
            SpaceSpec::Scalar { .. } => describe_scalar(&ctx, g),
            SpaceSpec::Matrix { space, .. } => describe_matrix(&ctx, g, space),
        },
        Command::Classify { sweep } => classify_cmd(&ctx, g, sweep.as_deref()),
        Command::Matrix => matrix_cmd(&ctx, g),
        Command::Decompose => decompose_cmd(&ctx, g),
        Command::Spectrum => spectrum_cmd(&ctx, g),
        Command::Norms => norms_cmd(&ctx, g),
        Command::Orbit { steps, x } => orbit_cmd(&ctx, g, *steps, x.as_deref()),
        Command::Periodic { period, k, f } => periodic_cmd(&ctx, g, *period, *k, f.as_deref()),
        Command::Vector { samples, seed } => vector_cmd(&ctx, g, *samples, *seed),
        Command::Verify { target, random, seed } => verify_cmd(&ctx, g, *target, *random, *seed),
    }
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, dir.join(name))
}

/// Full CLI entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ErrorKind::Parse.exit_code()
            } else {
                0
            };
        }
    };
    let Some(path) = cli.global.spec.clone() else {
        eprintln!("error: --spec PATH is required");
        return ErrorKind::Parse.exit_code();
    };
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ErrorKind::Parse.exit_code();
        }
    };
    let out_dir = std::env::var_os(OUT_ENV)
        .map(PathBuf::from)
        .or_else(|| cli.global.out.clone());
    match execute(&cli, &text, &path.display().to_string()) {
        Ok(output) => {
            print!("{}", output.stdout);
            if let Some(dir) = out_dir {
                for (name, contents) in &output.files {
                    if let Err(e) = write_atomic(&dir, name, contents) {
                        eprintln!("error: writing {}: {e}", dir.join(name).display());
                        return ErrorKind::Domain.exit_code();
                    }
                }
            }
            match output.uncertified {
                Some(msg) => {
                    eprintln!("uncertified: {msg}");
                    ErrorKind::Uncertified.exit_code()
                }
                None => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.kind.exit_code()
        }
    }
}
