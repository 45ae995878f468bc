#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod export;
mod svg;

use std::f64::consts::PI;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sl2mag_core::homogeneous::{
    contact_angle, is_homogeneous_geodesic, magnetic_strength, project_exp_curve, Convention, HomogeneousStrength,
};
use sl2mag_core::hyperbolic::EuclideanShape;
use sl2mag_core::integrator::{integrate_oracle, DEFAULT_TOLERANCE};
use sl2mag_core::lie::{exp_algebra, iwasawa_decompose, AlgebraVector, Sl2Matrix};
use sl2mag_core::par::Execution;
use sl2mag_core::periodicity::{phase_period, scan_periodic, RejectReason, ScanRow};
use sl2mag_core::trajectory::{ClosedFormTrajectory, MagneticParams, TrajectoryState};
use sl2mag_core::verify::{figure_case, run_suite, Suite, VerifyOptions, FIGURES};

use config::{angle_or, parse_angle, ConfigFile};
use export::{fmt_float, Format, Metadata, Row};

const ORACLE_LIMIT: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<sl2mag_core::Error> for CliError {
    fn from(e: sl2mag_core::Error) -> Self {
        use sl2mag_core::Error as E;
        match e {
            E::StepUnderflow { .. } | E::NonpositiveYReached | E::NonRotationalPhase(_) | E::CaseMismatch { .. } => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Config(format!("{}: {e}", path.display()))
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "sl2mag", version, about = "Magnetic trajectories of the Sasakian contact form on SL(2,R)")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// TOML file with per-command defaults; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the closed-form trajectory for given strength and contact angle.
    Integrate(IntegrateArgs),
    /// Certify quantized strengths over coprime (m, k) and contact angles.
    ScanPeriodic(ScanArgs),
    /// Render the reference closed trajectories as SVG.
    Figures(FiguresArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Sample a one-parameter subgroup and describe its projection.
    Exp(ExpArgs),
    /// Iwasawa coordinates of an SL(2,R) matrix.
    Iwasawa(IwasawaArgs),
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Contact angle, e.g. `1.2`, `pi/3`, `2pi/5`.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    #[arg(long)]
    y0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta0: Option<String>,
    /// Initial phase; defaults to the standard phase of the case.
    #[arg(long, allow_hyphen_values = true)]
    u0: Option<String>,
    /// Arclength span.
    #[arg(long, conflicts_with = "periods")]
    span: Option<f64>,
    /// Span in phase periods (rotating phase only).
    #[arg(long)]
    periods: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    /// `csv` or `json`.
    #[arg(long)]
    format: Option<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also integrate numerically, write `<output>.oracle.<ext>` and compare.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    m_max: Option<u32>,
    #[arg(long)]
    k_max: Option<u32>,
    /// Contact angles; repeat or separate with commas.
    #[arg(long = "sigma", value_delimiter = ',', allow_hyphen_values = true)]
    sigmas: Vec<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Disable the thread pool.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct FiguresArgs {
    /// L1, L2, L3, M4, M5 or `all`.
    ids: Vec<String>,
    #[arg(long, short = 'd')]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name; repeatable. Default: all suites.
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    trajectories: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, hide = true)]
    corrupt_tables: bool,
}

#[derive(Args, Debug)]
struct ExpArgs {
    /// Algebra vector `a,b,c`.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Parameter range `[-t_max, t_max]`.
    #[arg(long, default_value_t = 2.0)]
    t_max: f64,
    #[arg(long, default_value_t = 201)]
    samples: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IwasawaArgs {
    /// Entries `p11,p12,p21,p22`; read from stdin when absent.
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sl2mag: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path).map_err(CliError::Config)?,
        None => ConfigFile::default(),
    };
    let threads = cli.threads.or(file.threads);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(e.to_string()))?;
    pool.install(|| match cli.command {
        Command::Integrate(a) => integrate(a, &file),
        Command::ScanPeriodic(a) => scan(a, &file),
        Command::Figures(a) => figures(a, &file),
        Command::Verify(a) => verify(a, &file),
        Command::Exp(a) => exp(a),
        Command::Iwasawa(a) => iwasawa(a),
    })
}

fn emit(path: Option<&Path>, text: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(io_err(p)),
        None => match io::stdout().write_all(text) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Config(e.to_string())),
            _ => Ok(()),
        },
    }
}

fn oracle_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.oracle.{}", ext.to_string_lossy()),
        None => format!("{stem}.oracle"),
    };
    path.with_file_name(name)
}

fn grid(span: f64, samples: usize) -> Vec<f64> {
    let n = samples.max(2);
    (0..n).map(|i| span * i as f64 / (n - 1) as f64).collect()
}

fn integrate(a: IntegrateArgs, file: &ConfigFile) -> CliResult<()> {
    let f = &file.integrate;
    let cfg = CliError::Config;
    let q = a.q.or(f.q).ok_or_else(|| cfg("missing --q".into()))?;
    let sigma =
        angle_or(a.sigma.as_deref(), f.sigma.as_ref()).map_err(cfg)?.ok_or_else(|| cfg("missing --sigma".into()))?;
    let x0 = a.x0.or(f.x0).unwrap_or(0.0);
    let y0 = a.y0.or(f.y0).unwrap_or(1.0);
    let theta0 = angle_or(a.theta0.as_deref(), f.theta0.as_ref()).map_err(cfg)?.unwrap_or(0.0);
    let u0 = angle_or(a.u0.as_deref(), f.u0.as_ref()).map_err(cfg)?;
    let samples = a.samples.or(f.samples).unwrap_or(1001);
    let format: Format = a.format.as_deref().or(f.format.as_deref()).unwrap_or("csv").parse().map_err(cfg)?;
    let output = a.output.or_else(|| f.output.as_ref().map(PathBuf::from));
    let oracle = a.oracle || f.oracle.unwrap_or(false);
    if samples < 2 {
        return Err(cfg("--samples must be at least 2".into()));
    }

    let params = MagneticParams::new(q, sigma)?;
    let traj = match u0 {
        Some(u) => ClosedFormTrajectory::new(params, TrajectoryState { x: x0, y: y0, theta: theta0, u, s: 0.0 })?,
        None => ClosedFormTrajectory::standard(params, x0, y0, theta0)?,
    };
    let span = match (a.span.or(f.span), a.periods.or(f.periods)) {
        (Some(s), _) => s,
        (None, Some(p)) => p * phase_period(&params)?,
        (None, None) => 10.0,
    };
    if !(span.is_finite() && span > 0.0) {
        return Err(cfg(format!("span must be positive, got {span}")));
    }

    let s_grid = grid(span, samples);
    let rows: Vec<Row> = s_grid
        .iter()
        .map(|&s| {
            let st = traj.state(s);
            Row::new(s, st.x, st.y, st.theta, st.u)
        })
        .collect();
    if let Some(bad) = rows.iter().find(|r| !(r.x.is_finite() && r.y.is_finite() && r.y > 0.0)) {
        return Err(CliError::Numerical(format!("non-finite sample at s = {}", bad.s)));
    }

    let case = traj.phase_case().map_or(json!("reeb"), |c| json!(c.id()));
    let kappa = if params.is_reeb() { serde_json::Value::Null } else { json!(params.projection_curvature()) };
    let mut meta: Metadata = vec![
        ("q".into(), json!(q)),
        ("sigma".into(), json!(sigma)),
        ("qbar".into(), json!(params.qbar())),
        ("kappa_beta".into(), kappa),
        ("case".into(), case),
        ("x0".into(), json!(x0)),
        ("y0".into(), json!(y0)),
        ("theta0".into(), json!(theta0)),
        ("u0".into(), json!(traj.initial.u)),
        ("span".into(), json!(span)),
    ];
    let mut buf = Vec::new();
    meta.push(("source".into(), json!("closed-form")));
    export::write(&mut buf, format, &meta, &rows).map_err(|e| CliError::Config(e.to_string()))?;
    emit(output.as_deref(), &buf)?;

    if oracle {
        let path = output.as_deref().ok_or_else(|| cfg("--oracle requires --output".into()))?;
        let samples = integrate_oracle(&traj.initial, &params, span, DEFAULT_TOLERANCE, samples)?;
        let oracle_rows: Vec<Row> = samples
            .iter()
            .map(|o| {
                let v = o.frame_velocity();
                let u = if params.is_reeb() { traj.initial.u } else { v.v2.atan2(v.v1) };
                Row::new(o.s, o.x, o.y, o.theta, u)
            })
            .collect();
        let diff = rows
            .iter()
            .zip(&oracle_rows)
            .map(|(a, b)| (a.x - b.x).abs().max((a.y - b.y).abs()).max((a.theta_unwrapped - b.theta_unwrapped).abs()))
            .fold(0.0f64, f64::max);
        meta.pop();
        meta.push(("source".into(), json!("oracle")));
        let mut buf = Vec::new();
        export::write(&mut buf, format, &meta, &oracle_rows).map_err(|e| CliError::Config(e.to_string()))?;
        let opath = oracle_path(path);
        emit(Some(&opath), &buf)?;
        eprintln!("oracle: {} samples, sup |closed form - oracle| = {diff:e} (limit {ORACLE_LIMIT:e})", rows.len());
        if !(diff < ORACLE_LIMIT) {
            return Err(CliError::Verification(format!("oracle difference {diff:e} exceeds {ORACLE_LIMIT:e}")));
        }
    }
    Ok(())
}

fn reason_name(r: RejectReason) -> &'static str {
    match r {
        RejectReason::MirroredRelation => "mirrored",
        RejectReason::NotRotational => "not-rotational",
        RejectReason::NoClosure => "no-closure",
    }
}

fn join<T, F: Fn(&T) -> String>(items: &[T], f: F) -> String {
    if items.is_empty() {
        "-".into()
    } else {
        items.iter().map(f).collect::<Vec<_>>().join(";")
    }
}

pub const SCAN_HEADER: &str = "m\tk\tsigma\tq_accepted\tq_rejected\tT_phase\tdefect\tn_periods\tperturbed_defect";

fn scan_line(row: &ScanRow) -> String {
    let head = format!("{}\t{}\t{}", row.m, row.k, row.sigma);
    match &row.cert {
        Err(e) => format!("{head}\t-\terror:{}\t-\t-\t-\t-", e.replace('\t', " ")),
        Ok(c) => {
            let s = &c.strengths;
            format!(
                "{head}\t{}\t{}\t{}\t{}\t{}\t{}",
                join(s, |v| fmt_float(v.q)),
                join(&c.rejected, |r| format!("{}:{}", fmt_float(r.q), reason_name(r.reason))),
                join(s, |v| fmt_float(v.t_phase)),
                join(s, |v| fmt_float(v.theta_defect)),
                join(s, |v| v.n_periods.to_string()),
                join(s, |v| fmt_float(v.perturbed_defect)),
            )
        }
    }
}

fn scan(a: ScanArgs, file: &ConfigFile) -> CliResult<()> {
    let f = &file.scan;
    let m_max = a.m_max.or(f.m_max).unwrap_or(8);
    let k_max = a.k_max.or(f.k_max).unwrap_or(8);
    if m_max == 0 || k_max == 0 || m_max > 1000 || k_max > 1000 {
        return Err(CliError::Config(format!("ranges must lie in 1..=1000, got m_max {m_max}, k_max {k_max}")));
    }
    let sigmas: Vec<f64> = if !a.sigmas.is_empty() {
        a.sigmas.iter().map(|s| parse_angle(s)).collect::<Result<_, _>>().map_err(CliError::Config)?
    } else if let Some(list) = &f.sigmas {
        list.iter().map(|v| v.resolve()).collect::<Result<_, _>>().map_err(CliError::Config)?
    } else {
        vec![PI / 2.0]
    };
    if let Some(bad) = sigmas.iter().find(|s| !(**s > 0.0 && **s < PI)) {
        return Err(CliError::Config(format!("contact angle {bad} must lie in (0, pi)")));
    }
    let execution = if a.sequential { Execution::Sequential } else { Execution::available() };
    let rows = scan_periodic(m_max, k_max, &sigmas, execution);
    let mut text = String::from(SCAN_HEADER);
    text.push('\n');
    for row in &rows {
        text.push_str(&scan_line(row));
        text.push('\n');
    }
    let output = a.output.or_else(|| f.output.as_ref().map(PathBuf::from));
    emit(output.as_deref(), text.as_bytes())
}

/// Title and samples of a reference figure over its full closing span.
fn figure_rows(id: &str, samples: usize) -> CliResult<(String, Vec<Row>)> {
    let case = figure_case(id).ok_or_else(|| CliError::Config(format!("unknown figure id '{id}'")))?;
    let q = case.strength()?;
    let params = MagneticParams::new(q, case.sigma)?;
    let traj = ClosedFormTrajectory::standard(params, 0.0, 1.0, 0.0)?;
    let span = case.periods()? as f64 * phase_period(&params)?;
    let rows = grid(span, samples)
        .into_iter()
        .map(|s| {
            let st = traj.state(s);
            Row::new(s, st.x, st.y, st.theta, st.u)
        })
        .collect();
    let title = format!("{} m={} k={} sigma={:.6} q={:.6}", case.id, case.m, case.k, case.sigma, q);
    Ok((title, rows))
}

fn figures(a: FiguresArgs, file: &ConfigFile) -> CliResult<()> {
    let f = &file.figures;
    let mut ids = if a.ids.is_empty() { f.ids.clone().unwrap_or_default() } else { a.ids };
    if ids.is_empty() || ids.iter().any(|i| i.eq_ignore_ascii_case("all")) {
        ids = FIGURES.iter().map(|c| c.id.to_string()).collect();
    }
    // validate everything before writing anything
    for id in &ids {
        if figure_case(id).is_none() {
            return Err(CliError::Config(format!("unknown figure id '{id}'")));
        }
    }
    let dir = a.output_dir.or_else(|| f.output_dir.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."));
    let samples = a.samples.or(f.samples).unwrap_or(2000).max(2);
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    for id in &ids {
        let (title, rows) = figure_rows(id, samples)?;
        let path = dir.join(format!("{}.svg", id.to_ascii_uppercase()));
        fs::write(&path, svg::render(&title, &rows)).map_err(io_err(&path))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn verify(a: VerifyArgs, file: &ConfigFile) -> CliResult<()> {
    let f = &file.verify;
    let names = if a.suites.is_empty() { f.suites.clone().unwrap_or_default() } else { a.suites };
    let suites: Vec<Suite> = if names.is_empty() {
        Suite::ALL.to_vec()
    } else {
        names.iter().map(|n| n.parse::<Suite>()).collect::<Result<_, _>>().map_err(CliError::Config)?
    };
    let mut opts = VerifyOptions::default();
    opts.samples = a.samples.or(f.samples).unwrap_or(opts.samples);
    opts.trajectories = a.trajectories.or(f.trajectories).unwrap_or(opts.trajectories);
    opts.seed = a.seed.or(f.seed).unwrap_or(opts.seed);
    opts.execution = Execution::available();
    if a.corrupt_tables {
        opts.tables.connection[0][1][2] += 1;
        opts.tables.curvature[0][1][0][1] -= 1;
    }
    let mut failed = Vec::new();
    for suite in suites {
        let report = run_suite(suite, &opts);
        println!("{} {}", if report.passed() { "PASS" } else { "FAIL" }, suite);
        for c in &report.checks {
            let mark = if c.passed() { "ok" } else { "FAIL" };
            println!("  {mark:4} {:<48} {:.3e} < {:.1e}", c.name, c.value, c.tolerance);
        }
        if !report.passed() {
            failed.push(suite.to_string());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}

fn parse_floats<const N: usize>(text: &str, what: &str) -> CliResult<[f64; N]> {
    let vals: Vec<f64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| CliError::Config(format!("{what}: cannot parse '{s}'"))))
        .collect::<CliResult<_>>()?;
    vals.try_into().map_err(|v: Vec<f64>| CliError::Config(format!("{what}: expected {N} numbers, got {}", v.len())))
}

fn describe_shape(shape: &EuclideanShape) -> String {
    match shape {
        EuclideanShape::Circle { center, radius } => {
            format!("circle center=({},{}) radius={}", center.0, center.1, radius)
        }
        EuclideanShape::Line { point, direction } => {
            format!("line point=({},{}) direction=({},{})", point.0, point.1, direction.0, direction.1)
        }
    }
}

fn exp(a: ExpArgs) -> CliResult<()> {
    let [xa, xb, xc] = parse_floats::<3>(&a.x, "--x")?;
    let x = AlgebraVector::new(xa, xb, xc);
    if !(a.t_max.is_finite() && a.t_max > 0.0) || a.samples < 2 {
        return Err(CliError::Config("--t-max must be positive and --samples at least 2".into()));
    }
    let mut out = String::new();
    out.push_str(&format!("# X = {xa},{xb},{xc}\n"));
    out.push_str(&format!("# contact_angle = {}\n", contact_angle(&x)?));
    out.push_str(&format!("# geodesic = {}\n", is_homogeneous_geodesic(&x)?));
    let strength = match magnetic_strength(&x, Convention::UnitSpeed)? {
        HomogeneousStrength::Any => "any".to_string(),
        HomogeneousStrength::Unique(q) => q.to_string(),
    };
    out.push_str(&format!("# magnetic_strength = {strength}\n"));
    match project_exp_curve(&x) {
        Ok(conic) => {
            out.push_str(&format!("# projection = {}\n", describe_shape(&conic.shape)));
            out.push_str(&format!("# projection_class = {:?}\n", conic.class));
            out.push_str(&format!("# projection_curvature = {}\n", conic.curvature));
        }
        Err(_) => out.push_str("# projection = point\n"),
    }
    out.push_str("t,p11,p12,p21,p22,x,y,theta\n");
    let n = a.samples;
    for i in 0..n {
        let t = -a.t_max + 2.0 * a.t_max * i as f64 / (n - 1) as f64;
        let p = exp_algebra(&x, t);
        let c = iwasawa_decompose(&p).map_err(|e| CliError::Numerical(e.to_string()))?;
        let fields: Vec<String> = [t, p.p11, p.p12, p.p21, p.p22, c.x, c.y, c.theta].map(fmt_float).to_vec();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    emit(a.output.as_deref(), out.as_bytes())
}

fn iwasawa(a: IwasawaArgs) -> CliResult<()> {
    let text = match a.matrix {
        Some(t) => t,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| CliError::Config(e.to_string()))?;
            s
        }
    };
    let [p11, p12, p21, p22] = parse_floats::<4>(&text, "matrix")?;
    let p = Sl2Matrix::new(p11, p12, p21, p22)?;
    let c = iwasawa_decompose(&p)?;
    println!("x = {}\ny = {}\ntheta = {}", c.x, c.y, c.theta);
    Ok(())
}
