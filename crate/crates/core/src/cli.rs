//! The `ratlyap` command line: `certify`, `simulate`, `verify`, `bench`.
//!
//! Exit codes: 0 success, 1 malformed input, 2 search exhausted, 3 field
//! rejected (even degree or not homogeneous), 4 solver failure, 5
//! certificate rejected. Every command writes a [`RunManifest`].

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::dynamics::{
    family_cubic, family_linear, family_nonhomog_counterexample, family_quintic, random_hurwitz,
    simulate, write_csv, VectorField, VectorFieldJson,
};
use crate::error::{Error, Result};
use crate::hierarchy::{search, Outcome, RMode, SearchConfig, SearchReport};
use crate::verify::{check_certificate, Certificate, RationalLyapunov, VerifySettings, TOOL_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_EXHAUSTED: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;
pub const EXIT_SOLVER_FAILURE: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

/// Seconds allowed per hierarchy level.
pub const TIME_LIMIT_ENV: &str = "RATLYAP_LEVEL_TIME_LIMIT";

#[derive(Parser, Debug)]
#[command(name = "ratlyap", version, about = "Rational Lyapunov certificates for homogeneous polynomial vector fields")]
pub struct Cli {
    /// Where to write the run manifest [default: <out>.manifest.json, or
    /// ratlyap-<command>.manifest.json without --out]
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Search the (s, r) hierarchy for a certificate
    Certify(CertifyArgs),
    /// Integrate a trajectory with RK4 and export CSV
    Simulate(SimulateArgs),
    /// Check a stored certificate against a vector field
    Verify(VerifyArgs),
    /// Minimal certified levels over the benchmark families
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Linear,
    Cubic,
    Quintic,
    Nonhomog,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RModeArg {
    Free,
    ZeroOnly,
}

impl From<RModeArg> for RMode {
    fn from(m: RModeArg) -> RMode {
        match m {
            RModeArg::Free => RMode::Free,
            RModeArg::ZeroOnly => RMode::ZeroOnly,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Builtin vector field
    #[arg(long, value_enum, conflicts_with = "input")]
    pub family: Option<Family>,
    #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
    pub lambda: f64,
    /// Rows separated by `;`, entries by `,` (for --family linear)
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    /// Vector field file: JSON, or text with one component per line
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, default_value_t = 12)]
    pub s_max: u32,
    #[arg(long, value_enum, default_value = "free")]
    pub r_mode: RModeArg,
    /// Search report JSON [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the certificate alone
    #[arg(long)]
    pub certificate_out: Option<PathBuf>,
    /// Solve the r levels of each s concurrently
    #[arg(long)]
    pub parallel: bool,
    #[arg(long, default_value_t = VerifySettings::default().seed)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Initial state, comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    #[arg(long, default_value_t = 40.0)]
    pub horizon: f64,
    /// `builtin:quintic-W` or a certificate / search report file
    #[arg(long)]
    pub lyapunov: Option<String>,
    /// Trajectory CSV [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Level-set curves CSV (needs --lyapunov and n = 2)
    #[arg(long)]
    pub levelsets: Option<PathBuf>,
    /// Level values, comma separated [default: V(x0)/2^k, k = 0..5]
    #[arg(long)]
    pub levels: Option<String>,
    #[arg(long, default_value_t = 360)]
    pub level_points: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Certificate JSON, or a search report containing one
    #[arg(long)]
    pub certificate: PathBuf,
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, default_value_t = VerifySettings::default().seed)]
    pub seed: u64,
    #[arg(long, default_value_t = VerifySettings::default().samples)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 12)]
    pub s_max: u32,
    /// Random Hurwitz matrices per dimension (2 and 3)
    #[arg(long, default_value_t = 3)]
    pub linear_count: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Bench JSON file
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print JSON instead of the text table
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    /// Input file path, or the builtin family spec.
    pub input: String,
    pub input_sha256: String,
    pub config: Value,
    pub tool_version: String,
    pub seed: u64,
    pub wall_time: f64,
    pub outputs: Vec<FileDigest>,
    pub exit_code: i32,
    pub details: Value,
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    emit_bytes(text.as_bytes());
}

fn emit_bytes(bytes: &[u8]) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(bytes).and_then(|_| out.flush());
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
        }
    };
    let argv: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut ctx = Run::new(&cli, argv);
    let code = match &cli.command {
        Command::Certify(a) => cmd_certify(a, &mut ctx),
        Command::Simulate(a) => cmd_simulate(a, &mut ctx),
        Command::Verify(a) => cmd_verify(a, &mut ctx),
        Command::Bench(a) => cmd_bench(a, &mut ctx),
    };
    let code = code.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ctx.details["error"] = json!(e.to_string());
        EXIT_MALFORMED
    });
    match ctx.finish(code) {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: could not write manifest: {e}");
            if code == EXIT_OK {
                EXIT_MALFORMED
            } else {
                code
            }
        }
    }
}

struct Run {
    manifest: RunManifest,
    manifest_path: PathBuf,
    details: Value,
    start: Instant,
}

impl Run {
    fn new(cli: &Cli, argv: Vec<String>) -> Self {
        let (name, out) = match &cli.command {
            Command::Certify(a) => ("certify", a.out.clone()),
            Command::Simulate(a) => ("simulate", a.out.clone()),
            Command::Verify(_) => ("verify", None),
            Command::Bench(a) => ("bench", a.out.clone()),
        };
        let manifest_path = cli.manifest.clone().unwrap_or_else(|| match out {
            Some(p) => {
                let mut s = p.into_os_string();
                s.push(".manifest.json");
                PathBuf::from(s)
            }
            None => PathBuf::from(format!("ratlyap-{name}.manifest.json")),
        });
        Run {
            manifest: RunManifest {
                command: name.to_string(),
                argv,
                input: String::new(),
                input_sha256: String::new(),
                config: Value::Null,
                tool_version: TOOL_VERSION.to_string(),
                seed: 0,
                wall_time: 0.0,
                outputs: Vec::new(),
                exit_code: 0,
                details: Value::Null,
            },
            manifest_path,
            details: json!({}),
            start: Instant::now(),
        }
    }

    fn set_input(&mut self, src: &FieldSource) {
        self.manifest.input = src.label.clone();
        self.manifest.input_sha256 = src.sha256.clone();
    }

    fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        fs::write(path, bytes)?;
        self.manifest.outputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    fn finish(mut self, code: i32) -> Result<()> {
        self.manifest.exit_code = code;
        self.manifest.wall_time = self.start.elapsed().as_secs_f64();
        self.manifest.details = self.details;
        let text = serde_json::to_string_pretty(&self.manifest)?;
        fs::write(&self.manifest_path, text)?;
        Ok(())
    }
}

/// A resolved vector field and where it came from.
pub struct FieldSource {
    pub field: VectorField,
    pub label: String,
    pub sha256: String,
}

impl FieldArgs {
    pub fn resolve(&self) -> Result<FieldSource> {
        if let Some(path) = &self.input {
            let bytes = fs::read(path)?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))?;
            return Ok(FieldSource {
                field: parse_field_file(&text)?,
                label: path.display().to_string(),
                sha256: sha256_hex(&bytes),
            });
        }
        let family = self
            .family
            .ok_or_else(|| Error::Parameter("give --family or --input".into()))?;
        let (field, spec) = match family {
            Family::Linear => {
                let text = self
                    .matrix
                    .as_deref()
                    .ok_or_else(|| Error::Parameter("--family linear needs --matrix".into()))?;
                let a = parse_matrix(text)?;
                let rows: Vec<Vec<f64>> = a.row_iter().map(|r| r.iter().copied().collect()).collect();
                (family_linear(&a)?, json!({"family": "linear", "matrix": rows}))
            }
            Family::Cubic => (
                family_cubic(self.theta, self.lambda)?,
                json!({"family": "cubic", "theta": self.theta, "lambda": self.lambda}),
            ),
            Family::Quintic => (
                family_quintic(self.theta),
                json!({"family": "quintic", "theta": self.theta}),
            ),
            Family::Nonhomog => (family_nonhomog_counterexample(), json!({"family": "nonhomog"})),
        };
        let label = spec.to_string();
        Ok(FieldSource {
            field,
            sha256: sha256_hex(label.as_bytes()),
            label,
        })
    }
}

/// JSON (`{"n": .., "components": [..]}`) or text, one component per line.
pub fn parse_field_file(text: &str) -> Result<VectorField> {
    if text.trim_start().starts_with('{') {
        let j: VectorFieldJson = serde_json::from_str(text)?;
        return VectorField::from_json(j);
    }
    let n = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .count();
    VectorField::parse_text(text, n)
}

/// `"a,b;c,d"` to a row-major matrix.
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = text
        .split(';')
        .map(parse_list)
        .collect::<Result<_>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Parse(format!("ragged matrix `{text}`")));
    }
    let m = rows[0].len();
    Ok(DMatrix::from_row_iterator(n, m, rows.into_iter().flatten()))
}

pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{}`", t.trim())))
        })
        .collect()
}

/// A certificate file, or a search report whose certificate is used.
pub fn load_certificate(path: &Path) -> Result<Certificate> {
    let v: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let v = match v.get("outcome") {
        Some(_) => v
            .get("certificate")
            .cloned()
            .filter(|c| !c.is_null())
            .ok_or_else(|| Error::Parse(format!("{} holds a report without a certificate", path.display())))?,
        None => v,
    };
    Ok(serde_json::from_value(v)?)
}

fn level_time_limit() -> Result<Option<f64>> {
    match std::env::var(TIME_LIMIT_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0)
            .map(Some)
            .ok_or_else(|| Error::Parameter(format!("{TIME_LIMIT_ENV} must be a positive number, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn report_table(report: &SearchReport) -> String {
    let mut out = String::new();
    for l in &report.levels {
        let verified = match l.verified {
            Some(true) => "verified",
            Some(false) => "rejected",
            None => "-",
        };
        out += &format!(
            "  (s, r) = ({}, {})  {:<10} {:<9} {:.3}s\n",
            l.s,
            l.r,
            format!("{:?}", l.status).to_lowercase(),
            verified,
            l.wall_time
        );
    }
    out += &report.summary;
    out.push('\n');
    out
}

fn cmd_certify(a: &CertifyArgs, ctx: &mut Run) -> Result<i32> {
    let src = a.field.resolve()?;
    ctx.set_input(&src);
    let config = SearchConfig {
        s_max: a.s_max,
        r_mode: a.r_mode.into(),
        level_time_limit: level_time_limit()?,
        parallel: a.parallel,
        verify: VerifySettings {
            seed: a.seed,
            ..VerifySettings::default()
        },
        ..SearchConfig::default()
    };
    config.validate()?;
    ctx.manifest.config = serde_json::to_value(&config)?;
    ctx.manifest.seed = a.seed;

    let report = match search(&src.field, &config) {
        Ok(r) => r,
        Err(e @ (Error::EvenDegree(_) | Error::NotHomogeneous(_))) => {
            eprintln!("rejected: {e}");
            ctx.details["rejected"] = json!(e.to_string());
            return Ok(EXIT_REJECTED);
        }
        Err(e) => return Err(e),
    };
    let json_text = serde_json::to_string_pretty(&report)?;
    match &a.out {
        Some(path) => {
            ctx.write(path, json_text.as_bytes())?;
            emit(&report_table(&report));
        }
        None => {
            eprint!("{}", report_table(&report));
            emit(&format!("{json_text}\n"));
        }
    }
    if let (Some(path), Some(cert)) = (&a.certificate_out, &report.certificate) {
        ctx.write(path, serde_json::to_string_pretty(cert)?.as_bytes())?;
    }
    ctx.details = json!({
        "outcome": report.outcome,
        "certified_level": report.certified_level(),
        "levels": report.levels.iter().map(|l| json!([l.s, l.r, l.status])).collect::<Vec<_>>(),
    });
    Ok(match report.outcome {
        Outcome::Certified => EXIT_OK,
        Outcome::Exhausted => EXIT_EXHAUSTED,
        Outcome::Aborted => EXIT_SOLVER_FAILURE,
    })
}

fn resolve_lyapunov(spec: &str) -> Result<RationalLyapunov> {
    match spec {
        "builtin:quintic-W" => Ok(RationalLyapunov::quintic_w()),
        s if s.starts_with("builtin:") => Err(Error::Parameter(format!(
            "unknown builtin `{s}` (known: builtin:quintic-W)"
        ))),
        path => load_certificate(Path::new(path))?.lyapunov(),
    }
}

fn cmd_simulate(a: &SimulateArgs, ctx: &mut Run) -> Result<i32> {
    let src = a.field.resolve()?;
    ctx.set_input(&src);
    let x0 = parse_list(&a.x0)?;
    ctx.manifest.config = json!({
        "x0": x0,
        "step": a.step,
        "horizon": a.horizon,
        "lyapunov": a.lyapunov,
        "levels": a.levels,
        "level_points": a.level_points,
    });
    let v = a.lyapunov.as_deref().map(resolve_lyapunov).transpose()?;
    if let Some(v) = &v {
        if v.n() != src.field.n() {
            return Err(Error::Dimension {
                expected: src.field.n(),
                found: v.n(),
            });
        }
    }
    let traj = simulate(&src.field, &x0, a.step, a.horizon)?;
    let mut extra = Vec::new();
    if let Some(v) = &v {
        extra.push(("V", traj.states.iter().map(|x| v.eval(x)).collect::<Vec<_>>()));
    }
    let mut csv = Vec::new();
    write_csv(&mut csv, &traj, &extra)?;
    match &a.out {
        Some(path) => ctx.write(path, &csv)?,
        None => emit_bytes(&csv),
    }

    if let Some(path) = &a.levelsets {
        let v = v
            .as_ref()
            .ok_or_else(|| Error::Parameter("--levelsets needs --lyapunov".into()))?;
        let levels = match &a.levels {
            Some(t) => parse_list(t)?,
            None => {
                let top = v.eval(&x0);
                (0..5).map(|k| top / f64::powi(2.0, k)).collect()
            }
        };
        let mut buf = Vec::new();
        write_level_sets(&mut buf, v, &levels, a.level_points)?;
        ctx.write(path, &buf)?;
    }

    let last = traj.last();
    let final_norm = last.iter().map(|x| x * x).sum::<f64>().sqrt();
    ctx.details = json!({
        "x0": x0,
        "step_used": traj.step,
        "samples": traj.len(),
        "final_state": last,
        "final_norm": final_norm,
        "divergence": traj.divergence,
    });
    if let Some(d) = &traj.divergence {
        eprintln!("warning: trajectory left |x| <= 1e12 at t = {} (|x| = {:.3e})", d.time, d.norm);
    }
    Ok(EXIT_OK)
}

/// Polar samples of `{x : V(x) = c}` for a planar `V` homogeneous of
/// positive degree: `x = (c / V(u))^{1/deg} u` with `u` on the unit circle.
pub fn write_level_sets<W: Write>(
    mut w: W,
    v: &RationalLyapunov,
    levels: &[f64],
    points: usize,
) -> Result<()> {
    if v.n() != 2 {
        return Err(Error::Parameter(format!("level sets need n = 2, got n = {}", v.n())));
    }
    if points == 0 {
        return Err(Error::Parameter("--level-points must be positive".into()));
    }
    let deg = v.degree() as f64;
    writeln!(w, "level,c,phi,x1,x2")?;
    for (k, &c) in levels.iter().enumerate() {
        if !(c > 0.0) {
            return Err(Error::Parameter(format!("level values must be positive, got {c}")));
        }
        for i in 0..=points {
            let phi = 2.0 * std::f64::consts::PI * i as f64 / points as f64;
            let u = [phi.cos(), phi.sin()];
            let vu = v.eval(&u);
            if !(vu > 0.0) {
                return Err(Error::Parameter(format!(
                    "V is not positive at angle {phi:.4} (V = {vu:.3e})"
                )));
            }
            let rho = (c / vu).powf(1.0 / deg);
            writeln!(w, "{k},{c},{phi},{},{}", rho * u[0], rho * u[1])?;
        }
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, ctx: &mut Run) -> Result<i32> {
    let src = a.field.resolve()?;
    ctx.set_input(&src);
    let cert_bytes = fs::read(&a.certificate)?;
    let cert = load_certificate(&a.certificate)?;
    let settings = VerifySettings {
        seed: a.seed,
        samples: a.samples,
        ..VerifySettings::default()
    };
    ctx.manifest.seed = a.seed;
    ctx.manifest.config = json!({
        "certificate": a.certificate.display().to_string(),
        "certificate_sha256": sha256_hex(&cert_bytes),
        "verify": settings,
    });
    let check = match check_certificate(&src.field, &cert, &settings) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("certificate does not match the field: {e}");
            ctx.details = json!({"passed": false, "error": e.to_string()});
            return Ok(EXIT_VERIFY_FAILED);
        }
    };
    emit(&format!("{}\n", serde_json::to_string_pretty(&check)?));
    for f in &check.failures {
        eprintln!("fail: {f}");
    }
    ctx.details = serde_json::to_value(&check)?;
    Ok(if check.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub name: String,
    pub field: Value,
    pub rational: Option<(u32, u32)>,
    pub rational_outcome: Outcome,
    pub polynomial_only: Option<u32>,
    pub polynomial_outcome: Outcome,
    pub wall_time: f64,
}

pub fn bench_fields(linear_count: usize, seed: u64) -> Result<Vec<(String, Value, VectorField)>> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in [2usize, 3] {
        for k in 0..linear_count {
            let a = random_hurwitz(n, 0.1, &mut rng);
            let rows: Vec<Vec<f64>> = a.row_iter().map(|r| r.iter().copied().collect()).collect();
            out.push((
                format!("linear n={n} #{k}"),
                json!({"family": "linear", "matrix": rows}),
                family_linear(&a)?,
            ));
        }
    }
    for (label, theta) in [("pi/4", FRAC_PI_4), ("pi/2", FRAC_PI_2), ("3pi/4", 3.0 * FRAC_PI_4)] {
        out.push((
            format!("cubic theta={label}"),
            json!({"family": "cubic", "theta": theta, "lambda": SQRT_2}),
            family_cubic(theta, SQRT_2)?,
        ));
    }
    for theta in [0.05, 0.5, 1.5] {
        out.push((
            format!("quintic theta={theta}"),
            json!({"family": "quintic", "theta": theta}),
            family_quintic(theta),
        ));
    }
    Ok(out)
}

pub fn run_bench(s_max: u32, linear_count: usize, seed: u64) -> Result<Vec<BenchRow>> {
    let limit = level_time_limit()?;
    let mut rows = Vec::new();
    for (name, spec, f) in bench_fields(linear_count, seed)? {
        let start = Instant::now();
        let cfg = |r_mode| SearchConfig {
            s_max,
            r_mode,
            level_time_limit: limit,
            ..SearchConfig::default()
        };
        let rational = search(&f, &cfg(RMode::Free))?;
        let poly = search(&f, &cfg(RMode::ZeroOnly))?;
        rows.push(BenchRow {
            name,
            field: spec,
            rational: rational.certified_level(),
            rational_outcome: rational.outcome,
            polynomial_only: poly.certified_level().map(|l| l.0),
            polynomial_outcome: poly.outcome,
            wall_time: start.elapsed().as_secs_f64(),
        });
    }
    Ok(rows)
}

pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut out = format!("{:<22} {:>14} {:>16} {:>9}\n", "field", "rational (s,r)", "polynomial-only s", "time");
    for r in rows {
        let rational = match r.rational {
            Some((s, rr)) => format!("({s}, {rr})"),
            None => format!("{:?}", r.rational_outcome).to_lowercase(),
        };
        let poly = match r.polynomial_only {
            Some(s) => s.to_string(),
            None => format!("{:?}", r.polynomial_outcome).to_lowercase(),
        };
        out += &format!("{:<22} {:>14} {:>16} {:>8.3}s\n", r.name, rational, poly, r.wall_time);
    }
    out
}

fn cmd_bench(a: &BenchArgs, ctx: &mut Run) -> Result<i32> {
    SearchConfig {
        s_max: a.s_max,
        ..SearchConfig::default()
    }
    .validate()?;
    ctx.manifest.input = "builtin bench set".into();
    ctx.manifest.input_sha256 = sha256_hex(format!("bench:{}:{}", a.linear_count, a.seed).as_bytes());
    ctx.manifest.seed = a.seed;
    ctx.manifest.config = json!({"s_max": a.s_max, "linear_count": a.linear_count, "seed": a.seed});
    let rows = run_bench(a.s_max, a.linear_count, a.seed)?;
    let json_text = serde_json::to_string_pretty(&rows)?;
    if let Some(path) = &a.out {
        ctx.write(path, json_text.as_bytes())?;
    }
    if a.json {
        emit(&format!("{json_text}\n"));
    } else {
        emit(&bench_table(&rows));
    }
    ctx.details = json!({"rows": rows.len()});
    Ok(EXIT_OK)
}
