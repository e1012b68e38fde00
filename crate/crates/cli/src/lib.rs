//! Command-line front end for `g4-core`: reads curve-spec files, runs the
//! Frenet and Mannheim pipelines and writes CSV or JSON reports.
//!
//! Exit status: 0 when every verdict passes, 1 when a verdict fails, 2 on
//! usage or input errors.

pub mod format;

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use g4_core::frenet::{invariance_against, DEFAULT_EPS_DEGENERATE};
use g4_core::mannheim::{
    MannheimReport, NormalPlaneDiagnostic, TangentDiagnostic, DEFAULT_CONDITION_TOL,
    DEFAULT_MATE_DEGENERATE, DEFAULT_SUITE_TOL,
};
use g4_core::{
    check_condition, frenet_grid, g_distance, load_curve_spec, mannheim_mate, mate_theorem_suite,
    verify_mate_tangent, verify_normal_plane, Curve, FrenetError, GPoint4, GalileanMotion,
    MannheimError, TheoremOutcome, TheoremReport,
};

use format::{emit, num, opt_num, to_csv, to_json};

pub const DEFAULT_INVARIANCE_TOL: f64 = 1e-8;

pub const FRENET_HEADER: &[&str] = &[
    "curve",
    "s",
    "t2",
    "t3",
    "t4",
    "n2",
    "n3",
    "n4",
    "b2",
    "b3",
    "b4",
    "e2",
    "e3",
    "e4",
    "kappa",
    "tau",
    "sigma",
    "degenerate",
];
pub const CONDITION_HEADER: &[&str] = &["curve", "s", "kappa", "tau", "residual"];
pub const MATE_HEADER: &[&str] = &[
    "curve",
    "s",
    "x1",
    "x2",
    "x3",
    "x4",
    "v1",
    "v2",
    "v3",
    "v4",
    "degenerate",
];
pub const THEOREM_HEADER: &[&str] = &["curve", "gamma", "outcome", "max_residual", "mate_coverage"];
pub const INVARIANCE_HEADER: &[&str] = &[
    "curve", "samples", "skipped", "d_kappa", "d_tau", "d_sigma", "d_t", "d_n", "d_b", "d_e",
    "pass",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "g4", version, about = "Curves in 4-dimensional Galilean space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Curve-spec file (`-` for standard input).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Tolerance override for the subcommand's verdict.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Seed for the random motion of `invariance`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Motion parameters `alpha,beta,gamma,v,d1,d2,d3,a,b,c,d`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub motion: Option<String>,

    /// Constant offset for `mannheim-mate`; defaults to the fitted value.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<f64>,

    /// Where `mannheim-mate` writes its JSON diagnostics.
    #[arg(long, global = true)]
    pub diagnostics: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-sample frame and curvatures.
    Frenet,
    /// Fit the constant of `kappa = gamma tau^2` and test the condition.
    MannheimCheck,
    /// Sample the mate curve `alpha + gamma n`.
    MannheimMate,
    /// Full mate verification per curve.
    Theorem32,
    /// Compare Frenet data before and after a Galilean motion.
    Invariance,
    /// Galilean distance between two points given as `x1 x2 x3 x4 y1 y2 y3 y4`.
    Distance {
        #[arg(num_args = 8, allow_negative_numbers = true, value_name = "COORD")]
        coords: Vec<f64>,
    },
}

/// Result of a run that got as far as producing output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Parses arguments, runs, and maps the outcome to an exit status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(v) => v.exit_code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

pub fn run(cli: &Cli) -> Result<Verdict> {
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            bail!("--tol must be a positive finite number, got {tol}");
        }
    }
    match &cli.command {
        Command::Distance { coords } => run_distance(cli, coords),
        Command::Frenet => run_frenet(cli, &load_curves(cli)?),
        Command::MannheimCheck => run_check(cli, &load_curves(cli)?),
        Command::MannheimMate => run_mate(cli, &load_curves(cli)?),
        Command::Theorem32 => run_theorem(cli, &load_curves(cli)?),
        Command::Invariance => run_invariance(cli, &load_curves(cli)?),
    }
}

fn load_curves(cli: &Cli) -> Result<Vec<Curve>> {
    let path = cli
        .input
        .as_deref()
        .context("--input is required for this subcommand")?;
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).context("reading standard input")?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let curves = load_curve_spec(&text).with_context(|| format!("in {}", path.display()))?;
    if curves.is_empty() {
        bail!("{}: no [curve] blocks", path.display());
    }
    Ok(curves)
}

fn out(cli: &Cli, content: &str) -> Result<()> {
    emit(cli.output.as_deref(), content)
}

fn run_distance(cli: &Cli, c: &[f64]) -> Result<Verdict> {
    if c.iter().any(|x| !x.is_finite()) {
        bail!("coordinates must be finite");
    }
    let p = GPoint4::from_array([c[0], c[1], c[2], c[3]]);
    let q = GPoint4::from_array([c[4], c[5], c[6], c[7]]);
    let d = g_distance(p, q);
    let text = match cli.format {
        Some(Format::Json) => to_json(&serde_json::json!({ "distance": d }))?,
        Some(Format::Csv) => to_csv(&["distance"], &[vec![num(d)]])?,
        None => format!("{d}\n"),
    };
    out(cli, &text)?;
    Ok(Verdict::Pass)
}

fn vec_cols(v: Option<g4_core::GVector4>) -> [String; 3] {
    match v {
        Some(v) => [num(v.x2), num(v.x3), num(v.x4)],
        None => Default::default(),
    }
}

#[derive(Serialize)]
struct Named<'a, T> {
    curve: &'a str,
    #[serde(flatten)]
    data: T,
}

fn run_frenet(cli: &Cli, curves: &[Curve]) -> Result<Verdict> {
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for c in curves {
        let grid =
            frenet_grid(c, DEFAULT_EPS_DEGENERATE).with_context(|| format!("curve {}", c.name))?;
        for f in grid {
            let mut row = vec![c.name.clone(), num(f.s)];
            row.extend(vec_cols(Some(f.t)));
            row.extend(vec_cols(f.n));
            row.extend(vec_cols(f.b));
            row.extend(vec_cols(f.e));
            row.push(num(f.kappa));
            row.push(opt_num(f.tau));
            row.push(opt_num(f.sigma));
            row.push(
                f.degenerate
                    .map(|d| d.as_str().to_string())
                    .unwrap_or_default(),
            );
            rows.push(row);
            records.push(Named {
                curve: &c.name,
                data: f,
            });
        }
    }
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => to_csv(FRENET_HEADER, &rows)?,
        Format::Json => to_json(&records)?,
    };
    out(cli, &text)?;
    Ok(Verdict::Pass)
}

#[derive(Serialize)]
struct CurveFailure<'a> {
    name: &'a str,
    error: String,
}

/// A per-curve report or the reason it could not be produced.
#[derive(Serialize)]
#[serde(untagged)]
enum Entry<'a, T> {
    Ok(T),
    Err(CurveFailure<'a>),
}

fn failure<'a>(c: &'a Curve, e: &MannheimError) -> CurveFailure<'a> {
    CurveFailure {
        name: &c.name,
        error: e.to_string(),
    }
}

/// Curve-level failures that make a verdict impossible count as failed
/// verdicts; evaluation errors are input errors.
fn is_verdict_error(e: &MannheimError) -> bool {
    matches!(
        e,
        MannheimError::AllTauZero
            | MannheimError::FullyDegenerate
            | MannheimError::ConditionFails { .. }
    )
}

fn run_check(cli: &Cli, curves: &[Curve]) -> Result<Verdict> {
    let tol = cli.tol.unwrap_or(DEFAULT_CONDITION_TOL);
    let mut ok = true;
    let mut entries: Vec<Entry<MannheimReport>> = Vec::new();
    for c in curves {
        match check_condition(c, tol) {
            Ok(r) => {
                ok &= r.is_mannheim;
                entries.push(Entry::Ok(r));
            }
            Err(e) if is_verdict_error(&e) => {
                ok = false;
                entries.push(Entry::Err(failure(c, &e)));
            }
            Err(e) => return Err(e).with_context(|| format!("curve {}", c.name)),
        }
    }
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&entries)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .filter_map(|e| match e {
                    Entry::Ok(r) => Some(r),
                    Entry::Err(_) => None,
                })
                .flat_map(|r| {
                    r.samples.iter().map(|s| {
                        vec![
                            r.name.clone(),
                            num(s.s),
                            num(s.kappa),
                            num(s.tau),
                            num(s.residual),
                        ]
                    })
                })
                .collect();
            to_csv(CONDITION_HEADER, &rows)?
        }
    };
    out(cli, &text)?;
    Ok(Verdict::from_bool(ok))
}

#[derive(Serialize)]
struct MateDiagnostics<'a> {
    name: &'a str,
    gamma: f64,
    tangent: Vec<TangentDiagnostic>,
    normal_plane: Vec<NormalPlaneDiagnostic>,
}

#[derive(Serialize)]
struct MateOutput<'a> {
    name: &'a str,
    gamma: f64,
    samples: Vec<g4_core::mannheim::MateSample>,
}

fn mate_gamma(cli: &Cli, c: &Curve) -> Result<std::result::Result<f64, MannheimError>> {
    if let Some(g) = cli.gamma {
        if !g.is_finite() {
            bail!("--gamma must be finite");
        }
        return Ok(Ok(g));
    }
    match check_condition(c, DEFAULT_CONDITION_TOL) {
        Ok(r) => Ok(Ok(r.gamma_fit)),
        Err(e) if is_verdict_error(&e) => Ok(Err(e)),
        Err(e) => Err(e).with_context(|| format!("curve {}", c.name)),
    }
}

fn run_mate(cli: &Cli, curves: &[Curve]) -> Result<Verdict> {
    let mut ok = true;
    let mut rows = Vec::new();
    let mut outputs = Vec::new();
    let mut diagnostics = Vec::new();
    for c in curves {
        let gamma = match mate_gamma(cli, c)? {
            Ok(g) => g,
            Err(e) => {
                eprintln!("curve {}: cannot fit gamma: {e}", c.name);
                ok = false;
                continue;
            }
        };
        let ctx = || format!("curve {}", c.name);
        let samples = mannheim_mate(c, gamma).with_context(ctx)?;
        for m in &samples {
            let mut row = vec![c.name.clone(), num(m.s)];
            match m.point {
                Some(p) => row.extend([num(p.x1), num(p.x2), num(p.x3), num(p.x4)]),
                None => row.extend(std::iter::repeat_n(String::new(), 4)),
            }
            match m.velocity {
                Some(v) => row.extend([num(v.x1), num(v.x2), num(v.x3), num(v.x4)]),
                None => row.extend(std::iter::repeat_n(String::new(), 4)),
            }
            row.push(
                m.degenerate
                    .map(|d| d.as_str().to_string())
                    .unwrap_or_default(),
            );
            rows.push(row);
        }
        diagnostics.push(MateDiagnostics {
            name: &c.name,
            gamma,
            tangent: verify_mate_tangent(c, gamma).with_context(ctx)?,
            normal_plane: verify_normal_plane(c, gamma, DEFAULT_MATE_DEGENERATE)
                .with_context(ctx)?,
        });
        outputs.push(MateOutput {
            name: &c.name,
            gamma,
            samples,
        });
    }
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            out(cli, &to_csv(MATE_HEADER, &rows)?)?;
            let diag = to_json(&diagnostics)?;
            match (&cli.diagnostics, &cli.output) {
                (Some(p), _) => format::write_atomic(p, &diag)?,
                (None, Some(o)) => {
                    let mut p = o.clone().into_os_string();
                    p.push(".diagnostics.json");
                    format::write_atomic(Path::new(&p), &diag)?;
                }
                (None, None) => eprint!("{diag}"),
            }
        }
        Format::Json => {
            out(cli, &to_json(&outputs)?)?;
            if let Some(p) = &cli.diagnostics {
                format::write_atomic(p, &to_json(&diagnostics)?)?;
            }
        }
    }
    Ok(Verdict::from_bool(ok))
}

#[derive(Serialize)]
struct TheoremEntry<'a> {
    name: &'a str,
    outcome: &'static str,
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<TheoremReport>,
}

fn run_theorem(cli: &Cli, curves: &[Curve]) -> Result<Verdict> {
    let suite_tol = cli.tol.unwrap_or(DEFAULT_SUITE_TOL);
    let mut ok = true;
    let mut entries = Vec::new();
    for c in curves {
        let entry = match mate_theorem_suite(c, DEFAULT_CONDITION_TOL, suite_tol) {
            Ok(r) => {
                ok &= r.outcome != TheoremOutcome::Fail;
                let outcome = match r.outcome {
                    TheoremOutcome::Pass => "pass",
                    TheoremOutcome::MateDegenerate => "mate_degenerate",
                    TheoremOutcome::Fail => "fail",
                };
                TheoremEntry {
                    name: &c.name,
                    outcome,
                    verdict: r.verdict.clone(),
                    report: Some(r),
                }
            }
            Err(e) if is_verdict_error(&e) => {
                ok = false;
                TheoremEntry {
                    name: &c.name,
                    outcome: "condition_fails",
                    verdict: e.to_string(),
                    report: None,
                }
            }
            Err(e) => return Err(e).with_context(|| format!("curve {}", c.name)),
        };
        entries.push(entry);
    }
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&entries)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|e| match &e.report {
                    Some(r) => vec![
                        e.name.to_string(),
                        num(r.gamma),
                        e.outcome.to_string(),
                        num(r.residuals.max()),
                        num(r.mate_coverage),
                    ],
                    None => vec![
                        e.name.to_string(),
                        String::new(),
                        e.outcome.to_string(),
                        String::new(),
                        String::new(),
                    ],
                })
                .collect();
            to_csv(THEOREM_HEADER, &rows)?
        }
    };
    out(cli, &text)?;
    Ok(Verdict::from_bool(ok))
}

/// Random valid motion: uniform Euler angles, boost direction uniform on the
/// sphere, moderate speed and translations.
pub fn random_motion(rng: &mut impl Rng) -> GalileanMotion {
    let dir = loop {
        let v: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r > 1e-3 && r <= 1.0 {
            break v.map(|x| (x / r).clamp(-1.0, 1.0));
        }
    };
    let mut m = GalileanMotion {
        alpha: rng.gen_range(0.0..TAU),
        beta: rng.gen_range(0.0..TAU),
        gamma_angle: rng.gen_range(0.0..TAU),
        v: rng.gen_range(-2.0..2.0),
        d1: dir[0].acos(),
        d2: dir[1].acos(),
        d3: dir[2].acos(),
        ta: rng.gen_range(-3.0..3.0),
        tb: rng.gen_range(-3.0..3.0),
        tc: rng.gen_range(-3.0..3.0),
        td: rng.gen_range(-3.0..3.0),
    };
    // acos/cos round trips can leave the cosine sum a few ulps off
    if m.validate().is_err() {
        m.v = 0.0;
        m.d1 = 0.0;
        m.d2 = std::f64::consts::FRAC_PI_2;
        m.d3 = std::f64::consts::FRAC_PI_2;
    }
    m
}

pub fn parse_motion(text: &str) -> Result<GalileanMotion> {
    let values = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("--motion: invalid number {:?}", p.trim()))
        })
        .collect::<Result<Vec<f64>>>()?;
    GalileanMotion::from_slice(&values).context("--motion")
}

#[derive(Debug, Clone, Serialize)]
struct CurveInvariance<'a> {
    name: &'a str,
    samples: usize,
    skipped_degenerate: usize,
    d_kappa: f64,
    d_tau: f64,
    d_sigma: f64,
    d_t: f64,
    d_n: f64,
    d_b: f64,
    d_e: f64,
    pass: bool,
}

#[derive(Serialize)]
struct InvarianceOutput<'a> {
    seed: Option<u64>,
    motion: GalileanMotion,
    tol: f64,
    curves: Vec<CurveInvariance<'a>>,
    pass: bool,
}

fn run_invariance(cli: &Cli, curves: &[Curve]) -> Result<Verdict> {
    let tol = cli.tol.unwrap_or(DEFAULT_INVARIANCE_TOL);
    let (motion, seed) = match &cli.motion {
        Some(text) => (parse_motion(text)?, None),
        None => (
            random_motion(&mut ChaCha8Rng::seed_from_u64(cli.seed)),
            Some(cli.seed),
        ),
    };
    let mut results = Vec::new();
    for c in curves {
        let moved = c
            .transformed(&motion)
            .with_context(|| format!("curve {}", c.name))?;
        let mut r = CurveInvariance {
            name: &c.name,
            samples: 0,
            skipped_degenerate: 0,
            d_kappa: 0.0,
            d_tau: 0.0,
            d_sigma: 0.0,
            d_t: 0.0,
            d_n: 0.0,
            d_b: 0.0,
            d_e: 0.0,
            pass: true,
        };
        for s in c.grid() {
            match invariance_against(c, &moved, &motion, s) {
                Ok(rec) => {
                    r.samples += 1;
                    r.d_kappa = r.d_kappa.max(rec.d_kappa);
                    r.d_tau = r.d_tau.max(rec.d_tau);
                    r.d_sigma = r.d_sigma.max(rec.d_sigma);
                    r.d_t = r.d_t.max(rec.d_t);
                    r.d_n = r.d_n.max(rec.d_n);
                    r.d_b = r.d_b.max(rec.d_b);
                    r.d_e = r.d_e.max(rec.d_e);
                }
                Err(FrenetError::Degenerate { .. }) => r.skipped_degenerate += 1,
                Err(e) => return Err(e).with_context(|| format!("curve {} at s = {s}", c.name)),
            }
        }
        let worst = [r.d_kappa, r.d_tau, r.d_sigma, r.d_t, r.d_n, r.d_b, r.d_e]
            .into_iter()
            .fold(0.0, f64::max);
        r.pass = worst <= tol;
        results.push(r);
    }
    let pass = results.iter().all(|r| r.pass);
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&InvarianceOutput {
            seed,
            motion,
            tol,
            curves: results,
            pass,
        })?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        r.name.to_string(),
                        r.samples.to_string(),
                        r.skipped_degenerate.to_string(),
                        num(r.d_kappa),
                        num(r.d_tau),
                        num(r.d_sigma),
                        num(r.d_t),
                        num(r.d_n),
                        num(r.d_b),
                        num(r.d_e),
                        r.pass.to_string(),
                    ]
                })
                .collect();
            to_csv(INVARIANCE_HEADER, &rows)?
        }
    };
    out(cli, &text)?;
    Ok(Verdict::from_bool(pass))
}
