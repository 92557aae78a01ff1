//! Command-line front end. `run` is the whole program minus process exit,
//! so it can be exercised in-process.

use crate::bott::{bott_function_with, elliptic_certificate_with};
use crate::error::Error;
use crate::estimates::{self, PinchingData, PrequantizationData};
use crate::index::index_report_with;
use crate::sympath::{SymplecticPath, Tolerances};
use crate::toric::surd::parse_rational;
use crate::toric::{self, MomentCone, ReebVector};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};
use std::fmt::Write as _;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// input JSON file
    #[arg(long)]
    pub input: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct ToricArgs {
    #[command(flatten)]
    pub common: Common,
    /// Reeb vector JSON file, or "auto" for a seeded non-degenerate perturbation of Σν_j
    #[arg(long, default_value = "auto")]
    pub reeb: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// highest degree (hc) or iterate (orbit indices) reported
    #[arg(long, default_value_t = 12)]
    pub cutoff: i64,
}

#[derive(Args, Debug, Clone)]
pub struct PathArgs {
    #[command(flatten)]
    pub common: Common,
    /// eigenvalue tolerance override
    #[arg(long)]
    pub tol: Option<f64>,
    /// iterates used for the mean index
    #[arg(long, default_value_t = 8)]
    pub cutoff: usize,
    /// emit the Bott function instead of the index report
    #[arg(long)]
    pub bott: bool,
    /// emit the ellipticity certificate for iterate J
    #[arg(long, value_name = "J")]
    pub elliptic_check: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// certify a moment cone as good and report its face lattice
    CheckCone(Common),
    /// invariant factors of the fundamental group
    Pi1(Common),
    /// contact homology ranks of a toric contact manifold
    Hc(ToricArgs),
    /// decide whether a vector is a Reeb vector of the cone (--reeb gives the vector)
    ReebCheck(ToricArgs),
    /// index report of a path (or edge-orbit indices when the input is a cone)
    OrbitIndex(PathArgs),
    /// Bott function of a path
    Bott(PathArgs),
    /// ellipticity certificate of a path
    EllipticCheck(PathArgs),
    /// dynamical convexity bound of a pinched hypersurface
    Pinching(Common),
    /// contact homology of a prequantization
    PrequantHc {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 12)]
        cutoff: i64,
    },
    /// lower index of the linearized round Hamiltonian flow
    IndHr(Common),
}

#[derive(Parser, Debug)]
#[command(name = "reeb-index", version, about = "Conley–Zehnder indices and contact homology of toric contact manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Parse(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Parse(m),
            other => Failure::Lib(other),
        }
    }
}

/// A successful report: JSON payload plus an optional one-line summary
/// shown above the table rendering. `ok = false` reports a negative verdict
/// (exit 1) that still carries data.
struct Report {
    value: Value,
    summary: Option<String>,
    ok: bool,
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{path}: {e}")))
}

fn strict<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Parse(e.to_string()))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn load_reeb(cone: &MomentCone, args: &ToricArgs) -> Result<ReebVector, Failure> {
    if args.reeb == "auto" {
        Ok(toric::nondegenerate_reeb_near(cone, &ReebVector::sum_of_normals(cone), args.seed)?)
    } else {
        Ok(ReebVector::from_json(cone, &read(&args.reeb)?)?)
    }
}

fn check_cone(c: &Common) -> Result<Report, Failure> {
    let cone = MomentCone::from_json(&read(&c.input)?)?;
    match toric::check_good_cone(&cone) {
        Ok(faces) => {
            let pi1 = toric::fundamental_group(&cone)?;
            let counts: Vec<usize> = faces.faces_by_codim.iter().map(Vec::len).collect();
            let summary = if pi1.is_empty() {
                "good; π₁ trivial".to_string()
            } else {
                format!("good; π₁ = {}", group_name(&pi1))
            };
            Ok(Report {
                value: json!({"good": true, "faces_by_codim": counts, "edges": faces.edges, "pi1": pi1}),
                summary: Some(summary),
                ok: true,
            })
        }
        Err(Error::Parse(m)) => Err(Failure::Parse(m)),
        Err(e) => Ok(Report {
            value: json!({"good": false, "violation": e.name(), "message": e.to_string()}),
            summary: Some(format!("not good: {}", e.name())),
            ok: false,
        }),
    }
}

fn group_name(factors: &[i128]) -> String {
    factors.iter().map(|&f| if f == 0 { "Z".to_string() } else { format!("Z/{f}") }).collect::<Vec<_>>().join(" × ")
}

fn pi1(c: &Common) -> Result<Report, Failure> {
    let cone = MomentCone::from_json(&read(&c.input)?)?;
    let pi1 = toric::fundamental_group(&cone)?;
    let summary = if pi1.is_empty() { "trivial".into() } else { group_name(&pi1) };
    Ok(Report { value: json!({"invariant_factors": pi1}), summary: Some(summary), ok: true })
}

fn hc(a: &ToricArgs) -> Result<Report, Failure> {
    let cone = MomentCone::from_json(&read(&a.common.input)?)?;
    let reeb = load_reeb(&cone, a)?;
    let table = toric::hc_table(&cone, &reeb, a.cutoff)?;
    let summary = format!("k_minus = {}", table.k_minus.map_or("unknown".into(), |k| k.to_string()));
    Ok(Report { value: to_value(&table), summary: Some(summary), ok: true })
}

fn reeb_check(a: &ToricArgs) -> Result<Report, Failure> {
    let cone = MomentCone::from_json(&read(&a.common.input)?)?;
    let faces = toric::check_good_cone(&cone)?;
    let reeb = load_reeb(&cone, a)?;
    let accepted = toric::accept_reeb(&cone, &faces, &reeb)?;
    Ok(Report { value: serde_json::from_str(&accepted.to_json()).expect("valid json"), summary: Some("accepted".into()), ok: true })
}

fn tolerances(a: &PathArgs) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    if let Some(t) = a.tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(Failure::Lib(Error::PreconditionViolated("--tol must lie in (0, 1)".into())));
        }
        tol.eig_tol = t;
    }
    Ok(tol)
}

fn edge_orbits(cone: &MomentCone, a: &PathArgs) -> Result<Report, Failure> {
    let faces = toric::check_good_cone(cone)?;
    let reeb = toric::nondegenerate_reeb_near(cone, &ReebVector::sum_of_normals(cone), 0)?;
    let mut rows = Vec::new();
    for e in 0..faces.edges.len() {
        let rot = toric::edge_orbit_rotations(cone, &faces, &reeb, e)?;
        for it in 1..=a.cutoff as u32 {
            rows.push(to_value(&toric::orbit_rs_index_checked(&rot, it, cone.n())?));
        }
    }
    Ok(Report { value: json!({"orbits": rows}), summary: None, ok: true })
}

fn path_command(a: &PathArgs, bott: bool, elliptic: Option<usize>) -> Result<Report, Failure> {
    let text = read(&a.common.input)?;
    let raw: Value = serde_json::from_str(&text).map_err(|e| Failure::Parse(e.to_string()))?;
    if raw.get("normals").is_some() {
        return edge_orbits(&MomentCone::from_json(&text)?, a);
    }
    let path = SymplecticPath::from_json(&text)?;
    let tol = tolerances(a)?;
    if let Some(j) = elliptic {
        let v = elliptic_certificate_with(&path, j, tol)?;
        let value = to_value(&v);
        let summary = value["verdict"].as_str().map(str::to_string);
        return Ok(Report { value, summary, ok: true });
    }
    if bott {
        return Ok(Report { value: to_value(&bott_function_with(&path, tol)?), summary: None, ok: true });
    }
    Ok(Report { value: to_value(&index_report_with(&path, a.cutoff, tol)?), summary: None, ok: true })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PinchingJson {
    n: usize,
    r_squared: String,
    #[serde(rename = "R_squared")]
    big_r_squared: String,
    k: String,
}

fn pinching(c: &Common) -> Result<Report, Failure> {
    let p: PinchingJson = strict(&read(&c.input)?)?;
    let data = PinchingData::new(p.n, parse_rational(&p.r_squared)?, parse_rational(&p.big_r_squared)?, parse_rational(&p.k)?);
    let rep = estimates::pinched_index_bound(&data)?;
    let summary = format!("mu_minus(gamma^{}) >= {}", rep.floor_k, rep.bound);
    Ok(Report { value: to_value(&rep), summary: Some(summary), ok: true })
}

fn prequant(c: &Common, cutoff: i64) -> Result<Report, Failure> {
    let data: PrequantizationData = strict(&read(&c.input)?)?;
    let table = estimates::prequant_hc(&data, 1 - data.n as i64, cutoff)?;
    Ok(Report { value: to_value(&table), summary: None, ok: true })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IndHrJson {
    n: usize,
    #[serde(rename = "S", default)]
    s: Option<f64>,
    #[serde(rename = "R", default)]
    r: Option<f64>,
    /// S / 2πR² as an exact rational string
    #[serde(default)]
    ratio: Option<String>,
}

fn ind_hr(c: &Common) -> Result<Report, Failure> {
    let p: IndHrJson = strict(&read(&c.input)?)?;
    let value = match (p.ratio, p.s, p.r) {
        (Some(q), None, None) => {
            let q: BigRational = parse_rational(&q)?;
            estimates::ind_hr_exact(p.n, &q)?
        }
        (None, Some(s), Some(r)) => estimates::ind_hr(p.n, s, r)?,
        _ => return Err(Failure::Parse("give either \"ratio\" or both \"S\" and \"R\"".into())),
    };
    Ok(Report { value: json!({"n": p.n, "mu_minus": value}), summary: None, ok: true })
}

/// Flattens JSON into aligned `key  value` rows; arrays of scalars stay on
/// one line.
fn render_table(v: &Value) -> String {
    fn scalar(v: &Value) -> Option<String> {
        match v {
            Value::Null => Some("-".into()),
            Value::Bool(b) => Some(b.to_string()),
            Value::Number(n) => Some(n.to_string()),
            Value::String(s) => Some(s.clone()),
            Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
                Some(a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(" "))
            }
            _ => None,
        }
    }
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
        if let Some(s) = scalar(v) {
            rows.push((prefix.to_string(), s));
            return;
        }
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(&join(k), x, rows)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(&join(&i.to_string()), x, rows)),
            _ => unreachable!(),
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let width = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, x) in rows {
        let pad = width - k.chars().count();
        let _ = writeln!(out, "{k}{}  {x}", " ".repeat(pad));
    }
    out
}

fn dispatch(cmd: &Command) -> (Format, Result<Report, Failure>) {
    match cmd {
        Command::CheckCone(c) => (c.format, check_cone(c)),
        Command::Pi1(c) => (c.format, pi1(c)),
        Command::Hc(a) => (a.common.format, hc(a)),
        Command::ReebCheck(a) => (a.common.format, reeb_check(a)),
        Command::OrbitIndex(a) => (a.common.format, path_command(a, a.bott, a.elliptic_check)),
        Command::Bott(a) => (a.common.format, path_command(a, true, None)),
        Command::EllipticCheck(a) => (a.common.format, path_command(a, false, Some(a.elliptic_check.unwrap_or(2)))),
        Command::Pinching(c) => (c.format, pinching(c)),
        Command::PrequantHc { common, cutoff } => (common.format, prequant(common, *cutoff)),
        Command::IndHr(c) => (c.format, ind_hr(c)),
    }
}

/// Runs one invocation: exit 0 on success, 1 on a precondition failure or
/// negative verdict (the error name is printed), 2 on unreadable input.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let (format, result) = with_thread_cap(|| dispatch(&cli.command));
    match result {
        Ok(rep) => {
            let stdout = match format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&rep.value).expect("json")),
                Format::Table => {
                    let head = rep.summary.map(|s| format!("{s}\n")).unwrap_or_default();
                    format!("{head}{}", render_table(&rep.value))
                }
            };
            Outcome { code: if rep.ok { EXIT_OK } else { EXIT_FAILURE }, stdout, stderr: String::new() }
        }
        Err(Failure::Parse(m)) => Outcome { code: EXIT_PARSE, stdout: String::new(), stderr: format!("ParseError: {m}\n") },
        Err(Failure::Lib(e)) => {
            Outcome { code: EXIT_FAILURE, stdout: String::new(), stderr: format!("{}: {e}\n", e.name()) }
        }
    }
}

/// Honours REEB_INDEX_THREADS by running the job in a bounded pool.
fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var("REEB_INDEX_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()).filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}
