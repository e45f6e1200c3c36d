//! Command-line front end.
//!
//! Exit codes: 0 success (or `exists` verdict true), 1 parse or validation
//! error, 2 solver error, 3 `exists` verdict false, 4 undetermined.

mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::admissible::{validate, AdmissibleData, BaseFactor, WeightParams};
use crate::exactalg::{format_rational, int, parse_rational, rat, Polynomial, Rational, RationalFunction, Sign};
use crate::futaki::{
    c_k, csc_type, df_indicator, double_root_defect, find_csc, futaki_with, AffineFn, CscOptions, CscSearch,
    FutakiError, DEFAULT_MAX_PREC,
};
use crate::solver::{existence_verdict, perturbation_pair, solve_extremal, solve_weighted, SolverError};

pub use report::{emit_scan, scan_csv, scan_svg, ReportError, ScanRow, CSV_HEADER};

/// Environment variable overriding the default precision cap.
pub const MAX_PREC_ENV: &str = "SASAKI_MAX_PREC";

#[derive(Debug, Parser)]
#[command(name = "sasaki-extremal", version, about = "Exact extremal profiles on admissible P^1-bundles")]
struct Cli {
    /// Upper bound in bits for certified sign refinement.
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the extremal boundary problem.
    Solve { config: PathBuf },
    /// Decide positivity of the extremal profile.
    Exists { config: PathBuf },
    /// Contact Futaki invariant against the affine function s z + i.
    Futaki {
        config: PathBuf,
        /// Slope and intercept of ℓ_Z as "s,i".
        #[arg(long, allow_hyphen_values = true)]
        ellz: String,
    },
    /// Locate CSC rays on the slice of fixed b.
    Csc {
        config: PathBuf,
        #[arg(long)]
        b: String,
        /// Lower end of the slope window (default -99b/100).
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<String>,
        /// Upper end of the slope window (default 99b/100).
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<String>,
    },
    /// Tabulate existence over a grid of slopes a in (-b, b).
    Scan {
        config: PathBuf,
        #[arg(long)]
        b: String,
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Perturb the weighted solution by t (1 - z^2)^2 (Az + B)^3.
    Perturb {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Validation(Vec<String>),
    Solver(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Validation(_) => 1,
            CliError::Solver(_) | CliError::Io(_) => 2,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CliError::Usage(m) => json!({"error": m, "kind": "usage"}),
            CliError::Parse(m) => json!({"error": m, "kind": "parse"}),
            CliError::Validation(v) => json!({"error": v.join("; "), "kind": "validation", "violations": v}),
            CliError::Solver(m) => json!({"error": m, "kind": "solver"}),
            CliError::Io(m) => json!({"error": m, "kind": "io"}),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Validation(v) => CliError::Validation(v),
            other => CliError::Solver(other.to_string()),
        }
    }
}

impl From<FutakiError> for CliError {
    fn from(e: FutakiError) -> Self {
        match e {
            FutakiError::Solver(s) => s.into(),
            FutakiError::InvalidSearch(_) | FutakiError::OutOfRange => CliError::Validation(vec![e.to_string()]),
            other => CliError::Solver(other.to_string()),
        }
    }
}

/// Verdict of a successful command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Done,
    Exists,
    NotExists,
    Undetermined,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Done | Verdict::Exists => 0,
            Verdict::NotExists => 3,
            Verdict::Undetermined => 4,
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawConfig {
    #[serde(default)]
    factors: Vec<BaseFactor>,
    weight: WeightParams,
    #[serde(default)]
    extended: bool,
    #[serde(default)]
    z0: Option<String>,
    #[serde(default)]
    v: Option<Vec<String>>,
    #[serde(default)]
    w: Option<Vec<String>>,
}

/// A parsed configuration file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub data: AdmissibleData,
    pub weight: WeightParams,
    pub extended: bool,
    pub z0: Option<Rational>,
    pub v: Option<Polynomial>,
    pub w: Option<Polynomial>,
}

fn parse_rat(label: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Parse(format!("{label}: {e}")))
}

fn parse_poly(label: &str, coeffs: &[String]) -> Result<Polynomial, CliError> {
    coeffs
        .iter()
        .map(|c| parse_rat(label, c))
        .collect::<Result<Vec<_>, _>>()
        .map(Polynomial::new)
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config, CliError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(Config {
            data: AdmissibleData::new(raw.factors),
            weight: raw.weight,
            extended: raw.extended,
            z0: raw.z0.as_deref().map(|s| parse_rat("z0", s)).transpose()?,
            v: raw.v.as_deref().map(|c| parse_poly("v", c)).transpose()?,
            w: raw.w.as_deref().map(|c| parse_poly("w", c)).transpose()?,
        })
    }

    fn load(path: &PathBuf) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Config::from_json(&text)
    }

    /// Checks the data together with the configured weight.
    pub fn validate(&self) -> Result<(), CliError> {
        let report = validate(&self.data, &self.weight, self.extended);
        if !report.is_ok() {
            return Err(CliError::Validation(report.messages()));
        }
        Ok(())
    }

    /// Checks the data alone, for commands that choose their own weights.
    fn validate_data(&self, b: &Rational) -> Result<(), CliError> {
        let report = validate(&self.data, &WeightParams::new(int(0), b.clone()), false);
        if !report.is_ok() {
            return Err(CliError::Validation(report.messages()));
        }
        Ok(())
    }
}

fn max_prec(flag: Option<u32>) -> u32 {
    flag.or_else(|| std::env::var(MAX_PREC_ENV).ok()?.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_PREC)
}

fn strings(p: &Polynomial) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

fn ratfunc_json(r: &RationalFunction) -> Value {
    json!({"num": strings(r.num()), "den": strings(r.den())})
}

fn solve_json(cfg: &Config) -> Result<(Value, Verdict), CliError> {
    cfg.validate()?;
    let sol = solve_extremal(&cfg.data, &cfg.weight)?;
    let report = existence_verdict(&sol)?;
    let roots: Vec<Value> = report
        .interior_roots
        .iter()
        .map(|iv| json!([format_rational(&iv.lo), format_rational(&iv.hi)]))
        .collect();
    let mut out = json!({
        "F": strings(&sol.f),
        "A": format_rational(&sol.a_ext),
        "B": format_rational(&sol.b_ext),
        "mode": sol.mode,
        "exists": report.exists,
        "interior_roots": roots,
    });
    if !sol.warnings.is_empty() {
        out["warnings"] = json!(sol.warnings);
    }
    if let Some(z0) = &cfg.z0 {
        out["df_indicator"] = json!(format_rational(&df_indicator(&cfg.data, &cfg.weight, z0)?));
    }
    Ok((out, Verdict::Done))
}

fn exists_json(cfg: &Config) -> Result<(Value, Verdict), CliError> {
    cfg.validate()?;
    let sol = solve_extremal(&cfg.data, &cfg.weight)?;
    let report = existence_verdict(&sol)?;
    let mut out = serde_json::to_value(&report).map_err(|e| CliError::Solver(e.to_string()))?;
    // on the boundary ray the Reeb field degenerates at an endpoint, so the
    // profile verdict does not decide existence of a metric
    let verdict = if cfg.weight.is_boundary_ray() {
        out["extended_domain"] = json!(true);
        Verdict::Undetermined
    } else if report.exists {
        Verdict::Exists
    } else {
        Verdict::NotExists
    };
    Ok((out, verdict))
}

fn parse_pair(s: &str) -> Result<AffineFn, CliError> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| CliError::Parse(format!("expected \"slope,intercept\", got {s:?}")))?;
    Ok(AffineFn::new(parse_rat("ellz", a.trim())?, parse_rat("ellz", b.trim())?))
}

fn futaki_json(cfg: &Config, ellz: &str, prec: u32) -> Result<(Value, Verdict), CliError> {
    let ell_z = parse_pair(ellz)?;
    cfg.validate()?;
    if !cfg.weight.is_interior() {
        return Err(CliError::Validation(vec![
            "Futaki pairings require b > |a| strictly".to_string()
        ]));
    }
    let sol = solve_extremal(&cfg.data, &cfg.weight)?;
    let ell = AffineFn::extremal(&sol);
    let ck = c_k(&cfg.data, &cfg.weight, &ell, prec)?;
    let fut = futaki_with(&cfg.data, &cfg.weight, &ell, &ell_z, prec)?;
    let mut out = json!({
        "A": format_rational(&sol.a_ext),
        "B": format_rational(&sol.b_ext),
        "cK": ck,
        "futaki": fut,
        "csc_type": csc_type(&cfg.data, &cfg.weight, &ell),
    });
    if let Some(q) = ck.as_rational() {
        out["cK"]["exact"] = json!(format_rational(&q));
    }
    if let Some(z0) = &cfg.z0 {
        out["df_indicator"] = json!(format_rational(&df_indicator(&cfg.data, &cfg.weight, z0)?));
    }
    let verdict = if fut.sign == Sign::Undetermined {
        Verdict::Undetermined
    } else {
        Verdict::Done
    };
    Ok((out, verdict))
}

fn csc_json(cfg: &Config, b: &str, lo: Option<&str>, hi: Option<&str>) -> Result<(Value, Verdict), CliError> {
    let b = parse_rat("b", b)?;
    let edge = &b * rat(99, 100);
    let lo = lo.map(|s| parse_rat("lo", s)).transpose()?.unwrap_or_else(|| -edge.clone());
    let hi = hi.map(|s| parse_rat("hi", s)).transpose()?.unwrap_or(edge);
    cfg.validate_data(&b)?;
    let found = find_csc(&cfg.data, &b, (&lo, &hi), CscOptions::default())?;
    let (zero, rays) = match &found {
        CscSearch::IdenticallyZero => (true, json!([])),
        CscSearch::Rays(r) => (false, serde_json::to_value(r).map_err(|e| CliError::Solver(e.to_string()))?),
    };
    Ok((
        json!({
            "b": format_rational(&b),
            "search": [format_rational(&lo), format_rational(&hi)],
            "identically_zero": zero,
            "csc_rays": rays,
        }),
        Verdict::Done,
    ))
}

/// Slopes `a_i = b (-1 + 2i / (N + 1))`, `i = 1..N`.
pub fn scan_grid(b: &Rational, n: usize) -> Vec<Rational> {
    (1..=n)
        .map(|i| b * (int(-1) + rat(2 * i as i64, n as i64 + 1)))
        .collect()
}

/// Number of interior points at which `Θ` is sampled for `min_theta`.
const THETA_SAMPLES: i64 = 200;

pub fn scan_row(data: &AdmissibleData, a: &Rational, b: &Rational) -> Result<ScanRow, SolverError> {
    let w = WeightParams::new(a.clone(), b.clone());
    let sol = solve_extremal(data, &w)?;
    let report = existence_verdict(&sol)?;
    let theta = sol.theta();
    let min_theta = (1..THETA_SAMPLES)
        .map(|k| theta.eval_f64(-1.0 + 2.0 * k as f64 / THETA_SAMPLES as f64))
        .fold(f64::INFINITY, f64::min);
    let (defect0, defect1) = double_root_defect(&sol);
    Ok(ScanRow {
        csc: &sol.a_ext * b == &sol.b_ext * a,
        a: a.clone(),
        b: b.clone(),
        exists: report.exists,
        a_ext: sol.a_ext,
        b_ext: sol.b_ext,
        min_theta,
        defect0,
        defect1,
    })
}

/// Rows for every grid slope, evaluated in parallel and returned by ascending `a`.
pub fn scan_rows(data: &AdmissibleData, b: &Rational, n: usize) -> Result<Vec<ScanRow>, SolverError> {
    let mut rows = scan_grid(b, n)
        .par_iter()
        .map(|a| scan_row(data, a, b))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|x, y| x.a.cmp(&y.a));
    Ok(rows)
}

fn scan_cmd(
    cfg: &Config,
    b: &str,
    grid: usize,
    svg: Option<&PathBuf>,
    csv: Option<&PathBuf>,
) -> Result<(String, Verdict), CliError> {
    let b = parse_rat("b", b)?;
    if grid == 0 {
        return Err(CliError::Usage("--grid must be at least 1".into()));
    }
    cfg.validate_data(&b)?;
    if b <= int(0) {
        return Err(CliError::Validation(vec!["b must be positive".into()]));
    }
    let rows = scan_rows(&cfg.data, &b, grid)?;
    emit_scan(&rows, svg.map(|p| p.as_path()), csv.map(|p| p.as_path()))
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok((scan_csv(&rows), Verdict::Done))
}

fn perturb_json(cfg: &Config, t: &str) -> Result<(Value, Verdict), CliError> {
    let t = parse_rat("t", t)?;
    cfg.validate_data(&int(1))?;
    let v = cfg.v.clone().unwrap_or_else(Polynomial::one);
    let w = cfg.w.clone().unwrap_or_else(Polynomial::one);
    let sol = solve_weighted(&cfg.data, &v, &w, None)?;
    let (theta_t, w_t) = perturbation_pair(&sol, &t)?;
    Ok((
        json!({
            "A": format_rational(&sol.a_ext),
            "B": format_rational(&sol.b_ext),
            "t": format_rational(&t),
            "G": strings(&sol.g),
            "theta_t": ratfunc_json(&theta_t),
            "w_t": ratfunc_json(&w_t),
        }),
        Verdict::Done,
    ))
}

fn dispatch(cli: &Cli) -> Result<(String, Verdict), CliError> {
    let prec = max_prec(cli.precision);
    let pretty = |(v, verdict): (Value, Verdict)| {
        let text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
        (text + "\n", verdict)
    };
    match &cli.command {
        Command::Solve { config } => solve_json(&Config::load(config)?).map(pretty),
        Command::Exists { config } => exists_json(&Config::load(config)?).map(pretty),
        Command::Futaki { config, ellz } => futaki_json(&Config::load(config)?, ellz, prec).map(pretty),
        Command::Csc { config, b, lo, hi } => {
            csc_json(&Config::load(config)?, b, lo.as_deref(), hi.as_deref()).map(pretty)
        }
        Command::Scan {
            config,
            b,
            grid,
            svg,
            csv,
        } => scan_cmd(&Config::load(config)?, b, *grid, svg.as_ref(), csv.as_ref()),
        Command::Perturb { config, t } => perturb_json(&Config::load(config)?, t).map(pretty),
    }
}

/// Runs the CLI on `argv` (including the program name), writing results to
/// `out` and `{"error": ...}` objects to `err`. Returns the exit code.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = writeln!(err, "{}", CliError::Usage(e.to_string().trim().to_string()).to_json());
            return 1;
        }
    };
    match dispatch(&cli) {
        Ok((text, verdict)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            verdict.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            e.exit_code()
        }
    }
}

pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FS: &str = r#"{"factors":[],"weight":{"a":"0","b":"1"}}"#;

    #[test]
    fn config_parsing() {
        let cfg = Config::from_json(
            r#"{"factors":[{"dim":1,"scal":"2","p":1,"c":"5/2"}],"weight":{"a":"1/2","b":"1"},"z0":"1/3","v":["1","1/4"]}"#,
        )
        .unwrap();
        assert_eq!(cfg.data.m(), 2);
        assert_eq!(cfg.z0, Some(rat(1, 3)));
        assert_eq!(cfg.v, Some(Polynomial::new(vec![int(1), rat(1, 4)])));
        assert!(!cfg.extended);
        assert!(matches!(Config::from_json("{"), Err(CliError::Parse(_))));
        assert!(matches!(
            Config::from_json(r#"{"weight":{"a":"x","b":"1"}}"#),
            Err(CliError::Parse(_))
        ));
    }

    #[test]
    fn solve_output_shape() {
        let (v, verdict) = solve_json(&Config::from_json(FS).unwrap()).unwrap();
        assert_eq!(verdict, Verdict::Done);
        assert_eq!(v["F"], json!(["1", "0", "-1"]));
        assert_eq!(v["A"], json!("0"));
        assert_eq!(v["B"], json!("2"));
        assert_eq!(v["mode"], json!("doubleint"));
        assert_eq!(v["exists"], json!(true));
        assert_eq!(v["interior_roots"], json!([]));
    }

    #[test]
    fn grid_contract() {
        assert_eq!(scan_grid(&int(1), 3), vec![rat(-1, 2), int(0), rat(1, 2)]);
        assert_eq!(scan_grid(&int(2), 1), vec![int(0)]);
    }

    #[test]
    fn scan_rows_sorted() {
        let rows = scan_rows(&AdmissibleData::default(), &int(1), 7).unwrap();
        assert!(rows.windows(2).all(|w| w[0].a < w[1].a));
        assert!(rows.iter().all(|r| r.exists));
        // D(a) = 6a(a^2 - 1) vanishes only at a = 0 inside the cone
        assert_eq!(rows.iter().filter(|r| r.csc).count(), 1);
    }

    #[test]
    fn precision_resolution() {
        assert_eq!(max_prec(Some(300)), 300);
    }

    #[test]
    fn exit_codes_total() {
        assert_eq!(Verdict::Exists.exit_code(), 0);
        assert_eq!(Verdict::NotExists.exit_code(), 3);
        assert_eq!(Verdict::Undetermined.exit_code(), 4);
        assert_eq!(CliError::Validation(vec![]).exit_code(), 1);
        assert_eq!(CliError::Solver(String::new()).exit_code(), 2);
    }
}
