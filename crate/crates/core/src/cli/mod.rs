//! Command-line front end.
//!
//! Every subcommand reads a problem file, runs one analysis and writes a JSON
//! report (plus CSV and SVG data where it makes sense). The JSON echoes the
//! sampling configuration so a run can be repeated exactly.
//!
//! Exit codes: 0 success, 1 negative finding, 2 usage or input error,
//! 3 a certificate that failed its own verification.

mod problem;
mod svg;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub use problem::{Function, LyapunovDef, NamedPair, Problem, SystemDef, SCHEMA_VERSION};
pub use svg::{plot, Mark};

use crate::error::{Error, Result};
use crate::homog::{Dilation, GeneralizedPolynomial, Sampling, DEFAULT_SEED};
use crate::image::{
    mixing_curve, planar_point, sample_image, scatter_csv, zero_margin, PairSamples,
};
use crate::lemma::{
    find_nhs_multiplier, find_nonstrict_multiplier, find_strict_multiplier, is_copositive,
    shs_condition, POSITIVITY_REL,
};
use crate::switched::{
    check_lfhd, linear_combination_eigencheck, region_csv, scan_combinations,
    simulate_min_switching, synthesize_combination_n2, trajectory_csv, ConvexCombination,
    LfhdCandidate, TrajectoryRow,
};

#[derive(Debug, Parser)]
#[command(
    name = "slemma",
    version,
    about = "Homogeneous S-Lemma and switched-system certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the joint image of a pair and classify it
    Image(Opts),
    /// Common-zero margin of a pair on the sphere
    Zeros(Opts),
    /// Image of the mixing curve through two points (--z1, --z2)
    Curve(Opts),
    /// Copositivity of f with g (--strict for the strict version)
    Copositive(Opts),
    /// Solvability-gap condition of an even pair
    ShsCheck(Opts),
    /// Strict multiplier search
    ShsXi(Opts),
    /// Non-strict multiplier search for homogeneous polynomials
    HsXi(Opts),
    /// Non-strict multiplier search for non-homogeneous polynomials
    NhsXi(Opts),
    /// Check a Lyapunov candidate with homogeneous derivative
    Lfhd(Opts),
    /// Stable convex combination of two sub-systems from a multiplier
    ComboSynth(Opts),
    /// Grid scan of stable convex combinations (--grid-step)
    ComboScan(Opts),
    /// Simulate min-derivative switching from --x0
    Simulate(Opts),
    /// Largest eigenvalue of sym(P A(lambda)) for linear sub-systems
    Eigencheck(Opts),
}

impl Command {
    fn parts(&self) -> (&'static str, &Opts) {
        match self {
            Command::Image(o) => ("image", o),
            Command::Zeros(o) => ("zeros", o),
            Command::Curve(o) => ("curve", o),
            Command::Copositive(o) => ("copositive", o),
            Command::ShsCheck(o) => ("shs-check", o),
            Command::ShsXi(o) => ("shs-xi", o),
            Command::HsXi(o) => ("hs-xi", o),
            Command::NhsXi(o) => ("nhs-xi", o),
            Command::Lfhd(o) => ("lfhd", o),
            Command::ComboSynth(o) => ("combo-synth", o),
            Command::ComboScan(o) => ("combo-scan", o),
            Command::Simulate(o) => ("simulate", o),
            Command::Eigencheck(o) => ("eigencheck", o),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Args)]
struct Opts {
    /// Problem file (JSON)
    problem: PathBuf,
    /// Sphere samples (default 4096 for n <= 2, 65536 otherwise)
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Absolute zero threshold for `zeros` (default relative to the sampled scale)
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    grid_step: f64,
    /// Also write every artifact of the command into this directory
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// What to print on stdout
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Named pair from the problem file
    #[arg(long)]
    pair: Option<String>,
    /// Function name used as f (with --g)
    #[arg(long)]
    f: Option<String>,
    /// Function name used as g (with --f)
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    lyapunov: Option<String>,
    #[arg(long)]
    strict: bool,
    /// Initial state, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 10.0)]
    t_end: f64,
    /// Dwell time between switching decisions (default 10 dt)
    #[arg(long)]
    dwell: Option<f64>,
    /// Convex weights, comma separated
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    /// Steps along the mixing curve
    #[arg(long, default_value_t = 720)]
    steps: usize,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    z1: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    z2: Option<Vec<f64>>,
}

struct Outcome {
    code: i32,
    summary: String,
    result: Value,
    csv: Option<String>,
    svg: Option<String>,
}

impl Outcome {
    fn new(code: i32, summary: String, result: impl Serialize) -> Result<Self> {
        Ok(Self {
            code,
            summary,
            result: serde_json::to_value(result)?,
            csv: None,
            svg: None,
        })
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    fn with_svg(mut self, svg: String) -> Self {
        self.svg = Some(svg);
        self
    }
}

struct Ctx<'a> {
    opts: &'a Opts,
    problem: Problem,
    sampling: Sampling,
    config: Map<String, Value>,
}

impl Ctx<'_> {
    fn d(&self) -> &Dilation {
        &self.problem.dilation
    }

    fn note(&mut self, key: &str, value: impl Serialize) {
        self.config.insert(
            key.into(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
    }

    fn pair(&mut self) -> Result<NamedPair> {
        let o = self.opts;
        let p = self
            .problem
            .pair(o.pair.as_deref(), o.f.as_deref(), o.g.as_deref())?;
        self.note("pair", &p.name);
        Ok(p)
    }

    fn general_pair(&mut self) -> Result<(GeneralizedPolynomial, GeneralizedPolynomial)> {
        let p = self.pair()?;
        Ok((p.f.generalized(), p.g.generalized()))
    }

    fn system(&mut self) -> Result<SystemDef> {
        let s = self.problem.system(self.opts.system.as_deref())?.clone();
        self.note("system", &s.name);
        Ok(s)
    }

    fn candidate(&mut self, sys: &SystemDef) -> Result<LfhdCandidate> {
        let l = self
            .problem
            .lyapunov(self.opts.lyapunov.as_deref())?
            .clone();
        self.note("lyapunov", &l.name);
        LfhdCandidate::new(l.v, &sys.system, &self.problem.dilation)
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let (name, opts) = cli.command.parts();
    match execute(&cli.command, name, opts, out) {
        Ok((code, summary)) => {
            let _ = writeln!(err, "{name}: {summary}");
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cmd: &Command, name: &str, opts: &Opts, out: &mut dyn Write) -> Result<(i32, String)> {
    let problem = Problem::from_path(&opts.problem)?;
    let n = problem.dim();
    let count = opts
        .samples
        .unwrap_or_else(|| Sampling::default_for(n).count);
    let sampling = Sampling::new(count, opts.seed);
    let mut ctx = Ctx {
        opts,
        problem,
        sampling,
        config: Map::new(),
    };
    ctx.note("samples", count);
    ctx.note("seed", opts.seed);
    ctx.note(
        "dilation",
        json!({"weights": ctx.d().weights(), "l": ctx.d().norm_param()}),
    );
    let outcome = match dispatch(cmd, &mut ctx) {
        Ok(o) => o,
        Err(e) if e.exit_code() != 2 => {
            let result = match &e {
                Error::NoMultiplier(f) => json!({ "failure": f }),
                other => json!({ "error": other.to_string() }),
            };
            Outcome {
                code: e.exit_code(),
                summary: e.to_string(),
                result,
                csv: None,
                svg: None,
            }
        }
        Err(e) => return Err(e),
    };
    let status = match outcome.code {
        0 => "ok",
        1 => "negative",
        _ => "unsound",
    };
    let report = json!({
        "command": name,
        "problem": opts.problem.display().to_string(),
        "schema_version": SCHEMA_VERSION,
        "config": Value::Object(ctx.config),
        "status": status,
        "result": outcome.result,
    });
    let json_text = serde_json::to_string_pretty(&report)? + "\n";
    if let Some(dir) = &opts.out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{name}.json")), &json_text)?;
        if let Some(c) = &outcome.csv {
            std::fs::write(dir.join(format!("{name}.csv")), c)?;
        }
        if let Some(s) = &outcome.svg {
            std::fs::write(dir.join(format!("{name}.svg")), s)?;
        }
    }
    let printed = match opts.format {
        Format::Json => Some(&json_text),
        Format::Csv => outcome.csv.as_ref(),
        Format::Svg => outcome.svg.as_ref(),
    };
    match printed {
        Some(text) => out.write_all(text.as_bytes())?,
        None if outcome.code == 0 => {
            return Err(Error::Argument(format!(
                "{name} has no {:?} output",
                opts.format
            )))
        }
        None => {}
    }
    Ok((outcome.code, outcome.summary))
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<Outcome> {
    match cmd {
        Command::Image(_) => image(ctx),
        Command::Zeros(_) => zeros(ctx),
        Command::Curve(_) => curve(ctx),
        Command::Copositive(_) => copositive(ctx),
        Command::ShsCheck(_) => shs_check(ctx),
        Command::ShsXi(_) => {
            let (f, g) = ctx.general_pair()?;
            certificate(find_strict_multiplier(&f, &g, ctx.d(), &ctx.sampling)?)
        }
        Command::HsXi(_) => {
            let (f, g) = ctx.general_pair()?;
            certificate(find_nonstrict_multiplier(&f, &g, &ctx.sampling)?)
        }
        Command::NhsXi(_) => {
            let p = ctx.pair()?;
            let (f, g) = (p.f.coeff_vec()?, p.g.coeff_vec()?);
            certificate(find_nhs_multiplier(&f, &g, &ctx.sampling)?)
        }
        Command::Lfhd(_) => lfhd(ctx),
        Command::ComboSynth(_) => combo_synth(ctx),
        Command::ComboScan(_) => combo_scan(ctx),
        Command::Simulate(_) => simulate(ctx),
        Command::Eigencheck(_) => eigencheck(ctx),
    }
}

fn image(ctx: &mut Ctx) -> Result<Outcome> {
    let (f, g) = ctx.general_pair()?;
    let s = sample_image(&f, &g, ctx.d(), &ctx.sampling)?;
    let marks: Vec<Mark> = s
        .points
        .iter()
        .map(|p| Mark {
            x: p.f,
            y: p.g,
            group: 0,
        })
        .collect();
    let summary = format!("{:?}, phi = {:.6}", s.classification, s.phi);
    let csv = scatter_csv(&s.points);
    let svg = plot("image of (f, g) on the sphere", &marks, false);
    Ok(Outcome::new(0, summary, &s)?.with_csv(csv).with_svg(svg))
}

fn zeros(ctx: &mut Ctx) -> Result<Outcome> {
    let (f, g) = ctx.general_pair()?;
    let threshold = match ctx.opts.threshold {
        Some(t) => t,
        None => POSITIVITY_REL * PairSamples::new(&f, &g, ctx.d(), &ctx.sampling)?.scale(),
    };
    ctx.note("threshold", threshold);
    let zm = zero_margin(&f, &g, ctx.d(), threshold, &ctx.sampling)?;
    let found = zm.margin <= threshold;
    let summary = if found {
        format!("common zero near {:?}", zm.witness)
    } else {
        format!("margin {:e} (refined: {})", zm.margin, zm.refined)
    };
    Outcome::new(i32::from(found), summary, &zm)
}

fn curve(ctx: &mut Ctx) -> Result<Outcome> {
    let (f, g) = ctx.general_pair()?;
    let n = ctx.problem.dim();
    let unit = |i: usize| {
        (0..n)
            .map(|j| f64::from(u8::from(i == j)))
            .collect::<Vec<_>>()
    };
    let z1 = ctx.opts.z1.clone().unwrap_or_else(|| unit(0));
    let z2 = ctx.opts.z2.clone().unwrap_or_else(|| unit(1.min(n - 1)));
    ctx.note("z1", &z1);
    ctx.note("z2", &z2);
    ctx.note("steps", ctx.opts.steps);
    let pts = mixing_curve(&f, &g, ctx.d(), &z1, &z2, ctx.opts.steps)?;
    let mut csv = String::from("theta,f,g\n");
    for p in &pts {
        let _ = writeln!(csv, "{},{},{}", p.theta, p.f, p.g);
    }
    let marks: Vec<Mark> = pts
        .iter()
        .map(|p| Mark {
            x: p.f,
            y: p.g,
            group: 0,
        })
        .collect();
    let svg = plot("mixing curve in the (f, g) plane", &marks, true);
    Ok(Outcome::new(0, format!("{} points", pts.len()), &pts)?
        .with_csv(csv)
        .with_svg(svg))
}

fn copositive(ctx: &mut Ctx) -> Result<Outcome> {
    let (f, g) = ctx.general_pair()?;
    ctx.note("strict", ctx.opts.strict);
    let r = is_copositive(&f, &g, ctx.d(), ctx.opts.strict, &ctx.sampling)?;
    let kind = if ctx.opts.strict {
        "strictly copositive"
    } else {
        "copositive"
    };
    let summary = if r.copositive {
        kind.to_string()
    } else {
        format!("not {kind} (witness {:?})", r.witness)
    };
    Outcome::new(i32::from(!r.copositive), summary, &r)
}

fn shs_check(ctx: &mut Ctx) -> Result<Outcome> {
    let (f, g) = ctx.general_pair()?;
    let r = shs_condition(&f, &g, ctx.d(), &ctx.sampling)?;
    let summary = if r.holds {
        format!("holds (gap {:.6})", r.symmetrized_gap)
    } else {
        "fails: U and -U cover every direction".to_string()
    };
    Outcome::new(i32::from(!r.holds), summary, &r)
}

fn certificate(c: crate::lemma::MultiplierCertificate) -> Result<Outcome> {
    let summary = format!("xi = {:.9}, margin = {:e}", c.xi, c.margin);
    Outcome::new(0, summary, &c)
}

fn lfhd(ctx: &mut Ctx) -> Result<Outcome> {
    let sys = ctx.system()?;
    let cand = ctx.candidate(&sys)?;
    let r = check_lfhd(&sys.system, &cand, &ctx.sampling)?;
    let marks: Vec<Mark> = r
        .regions
        .iter()
        .map(|row| {
            let group = row.argmin - 1;
            if ctx.problem.dim() == 2 {
                let p = planar_point(ctx.d(), row.theta_or_index);
                Mark {
                    x: p[0],
                    y: p[1],
                    group,
                }
            } else {
                Mark {
                    x: row.theta_or_index,
                    y: row.min_derivative,
                    group,
                }
            }
        })
        .collect();
    let summary = if r.covered {
        format!("covered, worst min derivative {:e}", r.worst)
    } else {
        format!(
            "{} uncovered samples, worst {:e}",
            r.uncovered.len(),
            r.worst
        )
    };
    let csv = region_csv(&r.regions);
    let svg = plot("sub-system with the smallest derivative", &marks, false);
    Ok(Outcome::new(i32::from(!r.covered), summary, &r)?
        .with_csv(csv)
        .with_svg(svg))
}

fn combo_synth(ctx: &mut Ctx) -> Result<Outcome> {
    let sys = ctx.system()?;
    let cand = ctx.candidate(&sys)?;
    let s = synthesize_combination_n2(&sys.system, &cand, &ctx.sampling)?;
    let summary = format!("lambda = {:?}", s.combination.lambdas());
    Outcome::new(0, summary, &s)
}

fn combo_scan(ctx: &mut Ctx) -> Result<Outcome> {
    let sys = ctx.system()?;
    let cand = ctx.candidate(&sys)?;
    ctx.note("grid_step", ctx.opts.grid_step);
    let r = scan_combinations(&sys.system, &cand, ctx.opts.grid_step, &ctx.sampling)?;
    let mut csv = (1..=sys.system.len())
        .map(|i| format!("lambda_{i}"))
        .collect::<Vec<_>>()
        .join(",");
    csv.push('\n');
    for c in &r.feasible {
        let row: Vec<String> = c.lambdas().iter().map(f64::to_string).collect();
        let _ = writeln!(csv, "{}", row.join(","));
    }
    let summary = match (r.feasible.len(), r.interval) {
        (0, _) => format!("no stable combination among {} grid points", r.grid_points),
        (_, Some((lo, hi))) => format!("lambda_1 in [{lo}, {hi}]"),
        (k, None) => format!("{k} feasible grid points"),
    };
    Ok(Outcome::new(i32::from(r.feasible.is_empty()), summary, &r)?.with_csv(csv))
}

fn row_json(r: &TrajectoryRow) -> Value {
    json!({"t": r.t, "x": r.x, "sigma": r.sigma + 1, "v": r.v})
}

fn simulate(ctx: &mut Ctx) -> Result<Outcome> {
    let sys = ctx.system()?;
    let cand = ctx.candidate(&sys)?;
    let x0 = ctx
        .opts
        .x0
        .clone()
        .ok_or_else(|| Error::Argument("simulate needs --x0".into()))?;
    let (dt, t_end) = (ctx.opts.dt, ctx.opts.t_end);
    let dwell = ctx.opts.dwell.unwrap_or(10.0 * dt);
    ctx.note("x0", &x0);
    ctx.note("dt", dt);
    ctx.note("t_end", t_end);
    ctx.note("dwell", dwell);
    let tr = simulate_min_switching(&sys.system, &cand, &x0, dt, t_end, dwell)?;
    let first = &tr.rows[0];
    let last = tr.last();
    let result = json!({
        "steps": tr.rows.len() - 1,
        "switches": tr.switches,
        "dwell": tr.dwell,
        "initial": row_json(first),
        "final": row_json(last),
        "v_ratio": if first.v != 0.0 { last.v / first.v } else { 0.0 },
    });
    let marks: Vec<Mark> = tr
        .rows
        .iter()
        .map(|r| Mark {
            x: if r.x.len() > 1 { r.x[0] } else { r.t },
            y: if r.x.len() > 1 { r.x[1] } else { r.x[0] },
            group: r.sigma,
        })
        .collect();
    let summary = format!("V: {:e} -> {:e}, {} switches", first.v, last.v, tr.switches);
    Ok(Outcome::new(0, summary, result)?
        .with_csv(trajectory_csv(&tr))
        .with_svg(plot(
            "trajectory under min-derivative switching",
            &marks,
            true,
        )))
}

fn eigencheck(ctx: &mut Ctx) -> Result<Outcome> {
    let sys = ctx.system()?;
    let mats = sys
        .matrices
        .clone()
        .ok_or_else(|| Error::Argument(format!("system {:?} is not linear", sys.name)))?;
    let n = ctx.problem.dim();
    let p = match ctx.problem.lyapunov(ctx.opts.lyapunov.as_deref()) {
        Ok(l) => {
            let (name, m) = (l.name.clone(), l.matrix.clone());
            ctx.note("lyapunov", name);
            m.unwrap_or_else(|| DMatrix::identity(n, n))
        }
        Err(_) => DMatrix::identity(n, n),
    };
    let lambdas = match &ctx.opts.lambdas {
        Some(l) => ConvexCombination::new(l.clone())?,
        None => sys.lambdas.clone().ok_or_else(|| {
            Error::Argument("eigencheck needs --lambdas or system lambdas".into())
        })?,
    };
    ctx.note("lambdas", lambdas.lambdas());
    let max_eig = linear_combination_eigencheck(&mats, &lambdas, &p)?;
    let combined = mats
        .iter()
        .zip(lambdas.lambdas())
        .fold(DMatrix::zeros(n, n), |acc, (m, l)| acc + m * *l);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| combined.row(i).iter().copied().collect())
        .collect();
    let result = json!({"max_eigenvalue": max_eig, "combined_matrix": rows});
    Outcome::new(0, format!("max eigenvalue {max_eig:e}"), result)
}
