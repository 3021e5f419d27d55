//! The `psn` command line: bounds, roots, profiles, verification runs and
//! certificates as JSON or CSV.
//!
//! Exit status: 0 on success, 1 when a verification or certificate fails
//! (or a computation errors), 2 on invalid arguments.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::auxiliary::{aux_eval, certify_spec, AuxFunctionId, AuxPoint};
use crate::bounds::{alpha_root, norm_bound, BoundReport};
use crate::classes::{extremal, ClassSpec, Family, Variant};
use crate::estimator::{radial_profile, verify_spec_allow_empty, EstimatorConfig, CAP_EPS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Runtime(_) => EXIT_FAILED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "psn", version, about = "Sharp pre-Schwarzian norm bounds and their numerical verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Alpha root and sharp bound for one class.
    Bound(Common),
    /// Same document as `bound`.
    Alpha(Common),
    /// Weighted field of the extremal function (or an auxiliary function) along the positive axis.
    Profile {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Auxiliary function to tabulate instead of the extremal profile.
        #[arg(long)]
        aux: Option<String>,
    },
    /// Sharpness of the extremal function and the bound on sampled members.
    Verify(Common),
    /// Sign certificates and endpoint checks.
    Certify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        grid_size: usize,
    },
    /// Bounds over evenly spaced parameters in (0, max].
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 17)]
        steps: usize,
    },
}

#[derive(Debug, Args, Clone)]
struct Common {
    #[arg(long)]
    family: Family,
    /// lambda for exp, c for sqrt (ignored by `table`).
    #[arg(long)]
    param: Option<f64>,
    #[arg(long, default_value = "starlike")]
    variant: Variant,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Radial x angular grid, e.g. 256x512.
    #[arg(long, default_value = "256x512")]
    grid: String,
    #[arg(long, default_value_t = 3)]
    refine: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Bound,
    Alpha,
    Profile,
    Verify,
    Certify,
    Table,
}

/// Fully validated run configuration, echoed in JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub family: Family,
    pub param: Option<f64>,
    pub variant: Variant,
    pub samples: usize,
    pub seed: u64,
    pub grid: String,
    pub refine: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aux: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip)]
    radial: usize,
    #[serde(skip)]
    angular: usize,
}

/// Parses `"RxA"` (or `"R×A"`) into two positive integers.
pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once('x')
        .or_else(|| s.split_once('×'))
        .ok_or_else(|| format!("grid {s:?} is not of the form RxA"))?;
    let parse = |t: &str| -> Result<usize, String> {
        match t.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("grid {s:?} is not of the form RxA with positive integers")),
        }
    };
    Ok((parse(a)?, parse(b)?))
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (kind, common, points, aux, grid_size, steps) = match cli.command {
            Command::Bound(c) => (CommandKind::Bound, c, None, None, None, None),
            Command::Alpha(c) => (CommandKind::Alpha, c, None, None, None, None),
            Command::Profile { common, points, aux } => (CommandKind::Profile, common, Some(points), aux, None, None),
            Command::Verify(c) => (CommandKind::Verify, c, None, None, None, None),
            Command::Certify { common, grid_size } => (CommandKind::Certify, common, None, None, Some(grid_size), None),
            Command::Table { common, steps } => (CommandKind::Table, common, None, None, None, Some(steps)),
        };
        let (radial, angular) = parse_grid(&common.grid).map_err(CliError::Usage)?;
        let cfg = Self {
            command: kind,
            family: common.family,
            param: common.param,
            variant: common.variant,
            samples: common.samples,
            seed: common.seed,
            grid: format!("{radial}x{angular}"),
            refine: common.refine,
            format: common.format,
            output: common.output,
            points,
            aux,
            grid_size,
            steps,
            radial,
            angular,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.command != CommandKind::Table {
            self.spec()?;
        }
        if let Some(steps) = self.steps {
            if steps < 1 {
                return Err(CliError::Usage("--steps must be at least 1".into()));
            }
        }
        if let Some(points) = self.points {
            if points < 2 {
                return Err(CliError::Usage("--points must be at least 2".into()));
            }
        }
        if let Some(aux) = &self.aux {
            aux.parse::<AuxFunctionId>().map_err(|e| CliError::Usage(e.to_string()))?;
        }
        if self.command == CommandKind::Verify {
            self.estimator().validate().map_err(|e| CliError::Usage(e.to_string()))?;
        }
        Ok(())
    }

    pub fn spec(&self) -> Result<ClassSpec, CliError> {
        let param = self
            .param
            .ok_or_else(|| CliError::Usage("--param is required".into()))?;
        ClassSpec::new(self.family, param, self.variant).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn estimator(&self) -> EstimatorConfig {
        EstimatorConfig {
            radial: self.radial,
            angular: self.angular,
            refine: self.refine,
            cap_eps: CAP_EPS,
        }
    }
}

/// A rendered document and whether every check in it passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: String,
    pub success: bool,
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

/// Rounds every non-integer number in a JSON tree.
fn round_tree(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => num(n.as_f64().expect("f64 number")),
        Value::Array(a) => Value::Array(a.into_iter().map(round_tree).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_tree(v))).collect()),
        other => other,
    }
}

fn csv_num(x: f64) -> String {
    let y = round12(x);
    if y.is_finite() {
        format!("{y}")
    } else {
        "nan".to_string()
    }
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json_doc(cfg: &RunConfig, body: Value) -> String {
    let mut map = Map::new();
    map.insert("config".into(), serde_json::to_value(cfg).expect("config serializes"));
    if let Value::Object(m) = round_tree(body) {
        map.extend(m);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("json renders");
    s.push('\n');
    s
}

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

fn bound_fields(r: &BoundReport) -> Value {
    json!({
        "family": r.spec.family,
        "param": r.spec.parameter,
        "variant": r.spec.variant,
        "alpha": r.alpha,
        "bound": r.bound,
        "residual": r.residual,
    })
}

fn bound_row(r: &BoundReport) -> Vec<String> {
    vec![
        r.spec.family.to_string(),
        csv_num(r.spec.parameter),
        r.spec.variant.to_string(),
        csv_num(r.alpha),
        csv_num(r.bound),
        csv_num(r.residual),
    ]
}

const BOUND_HEADER: [&str; 6] = ["family", "param", "variant", "alpha", "bound", "residual"];

/// Executes a validated configuration.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        CommandKind::Bound | CommandKind::Alpha => {
            let spec = cfg.spec()?;
            let r = if cfg.command == CommandKind::Bound {
                norm_bound(&spec)
            } else {
                alpha_root(&spec)
            }
            .map_err(runtime)?;
            let document = match cfg.format {
                Format::Json => {
                    let mut body = bound_fields(&r);
                    body["bracket"] = json!([r.bracket.0, r.bracket.1]);
                    body["sign_changes"] = json!(r.sign_changes);
                    if let Some(c) = r.corollary_bound {
                        body["corollary_bound"] = json!(c);
                    }
                    json_doc(cfg, body)
                }
                Format::Csv => csv(&BOUND_HEADER, &[bound_row(&r)]),
            };
            Ok(Outcome { document, success: true })
        }
        CommandKind::Profile => {
            let spec = cfg.spec()?;
            let n = cfg.points.unwrap_or(100);
            let (source, rows) = match &cfg.aux {
                None => {
                    let rows = radial_profile(&extremal(&spec), n).map_err(runtime)?;
                    ("extremal".to_string(), rows)
                }
                Some(name) => {
                    let id: AuxFunctionId = name.parse().map_err(|e: crate::auxiliary::AuxError| CliError::Usage(e.to_string()))?;
                    if id.is_pair() {
                        return Err(CliError::Usage(format!("{id} is a function of (r, s); profile tabulates scalar functions")));
                    }
                    let r_max = 1.0 - CAP_EPS;
                    let rows = (1..=n)
                        .map(|k| {
                            let r = r_max * k as f64 / n as f64;
                            aux_eval(id, &spec, AuxPoint::Scalar(r)).map(|v| (r, v))
                        })
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(runtime)?;
                    (id.name().to_string(), rows)
                }
            };
            let document = match cfg.format {
                Format::Json => json_doc(
                    cfg,
                    json!({
                        "source": source,
                        "rows": rows.iter().map(|&(r, v)| json!({"r": r, "value": v})).collect::<Vec<_>>(),
                    }),
                ),
                Format::Csv => csv(
                    &["r", "value"],
                    &rows.iter().map(|&(r, v)| vec![csv_num(r), csv_num(v)]).collect::<Vec<_>>(),
                ),
            };
            Ok(Outcome { document, success: true })
        }
        CommandKind::Verify => {
            let spec = cfg.spec()?;
            let report =
                verify_spec_allow_empty(&spec, cfg.samples, cfg.seed, &cfg.estimator()).map_err(runtime)?;
            let s = &report.sharpness;
            let document = match cfg.format {
                Format::Json => {
                    let mut body = bound_fields(&report.bound);
                    body["sharpness"] = json!({
                        "estimate": s.estimate.value,
                        "error": s.error,
                        "tolerance": s.tolerance,
                        "argmax_r": s.estimate.radius,
                        "argmax_theta": s.estimate.angle,
                        "boundary_limited": s.estimate.boundary_limited,
                        "on_positive_axis": s.on_positive_axis,
                        "pass": s.pass,
                    });
                    body["members"] = serde_json::to_value(&report.members).expect("members serialize");
                    body["pass"] = json!(report.pass);
                    json_doc(cfg, body)
                }
                Format::Csv => {
                    let mut rows = vec![vec![
                        "extremal".to_string(),
                        String::new(),
                        String::new(),
                        String::new(),
                        csv_num(s.estimate.value),
                        csv_num(report.bound.bound),
                        csv_num(report.bound.bound - s.estimate.value),
                        s.pass.to_string(),
                    ]];
                    rows.extend(report.members.iter().map(|m| {
                        vec![
                            "member".to_string(),
                            m.index.to_string(),
                            m.seed.to_string(),
                            m.degree.to_string(),
                            csv_num(m.estimate),
                            csv_num(report.bound.bound),
                            csv_num(m.margin),
                            m.pass.to_string(),
                        ]
                    }));
                    csv(
                        &["kind", "index", "seed", "degree", "estimate", "bound", "margin", "pass"],
                        &rows,
                    )
                }
            };
            Ok(Outcome {
                document,
                success: report.pass,
            })
        }
        CommandKind::Certify => {
            let spec = cfg.spec()?;
            let grid = cfg.grid_size.unwrap_or(10_000);
            let report = certify_spec(&spec, grid).map_err(|e| CliError::Usage(e.to_string()))?;
            let document = match cfg.format {
                Format::Json => json_doc(
                    cfg,
                    json!({
                        "family": spec.family,
                        "param": spec.parameter,
                        "variant": spec.variant,
                        "certificates": serde_json::to_value(&report.certificates).expect("certificates serialize"),
                        "endpoints": serde_json::to_value(&report.endpoints).expect("endpoints serialize"),
                        "pass": report.pass,
                    }),
                ),
                Format::Csv => {
                    let mut rows: Vec<Vec<String>> = report
                        .certificates
                        .iter()
                        .map(|c| {
                            let at = match c.worst_at {
                                AuxPoint::Scalar(x) => csv_num(x),
                                AuxPoint::Pair { r, s } => format!("{};{}", csv_num(r), csv_num(s)),
                            };
                            vec![
                                "certificate".to_string(),
                                c.probe.clone(),
                                serde_json::to_value(c.claim).expect("claim").as_str().unwrap_or("").to_string(),
                                csv_num(c.worst_margin),
                                at,
                                c.pass.to_string(),
                            ]
                        })
                        .collect();
                    rows.extend(report.endpoints.iter().map(|e| {
                        vec![
                            "endpoint".to_string(),
                            e.name.clone(),
                            serde_json::to_value(e.expected).expect("sign").as_str().unwrap_or("").to_string(),
                            csv_num(e.display),
                            csv_num(e.numeric),
                            e.pass.to_string(),
                        ]
                    }));
                    csv(&["kind", "name", "claim", "value", "detail", "pass"], &rows)
                }
            };
            Ok(Outcome {
                document,
                success: report.pass,
            })
        }
        CommandKind::Table => {
            let steps = cfg.steps.unwrap_or(17);
            let max = cfg.family.max_parameter();
            let reports = (1..=steps)
                .map(|k| {
                    let t = max * k as f64 / steps as f64;
                    let spec = ClassSpec::new(cfg.family, t, cfg.variant).map_err(runtime)?;
                    norm_bound(&spec).map_err(runtime)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let document = match cfg.format {
                Format::Json => json_doc(
                    cfg,
                    json!({ "rows": reports.iter().map(bound_fields).collect::<Vec<_>>() }),
                ),
                Format::Csv => csv(&BOUND_HEADER, &reports.iter().map(bound_row).collect::<Vec<_>>()),
            };
            Ok(Outcome { document, success: true })
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PSN_THREADS") else {
        return Ok(());
    };
    let n = match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => n,
        _ => return Err(CliError::Usage(format!("PSN_THREADS={v:?} is not a positive integer"))),
    };
    // a pool may already exist when called twice in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn first_line(s: &str) -> String {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or("").trim().to_string()
}

/// Parses arguments, runs, writes the document, and returns the exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let _ = writeln!(stderr, "{}", first_line(&e.to_string()));
            return EXIT_USAGE;
        }
    };
    let result = init_threads()
        .and_then(|_| RunConfig::from_cli(cli))
        .and_then(|cfg| run(&cfg).map(|o| (cfg, o)));
    let (cfg, outcome) = match result {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", first_line(&e.to_string()));
            return e.exit_code();
        }
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, &outcome.document).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(outcome.document.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_FAILED;
    }
    if outcome.success {
        EXIT_OK
    } else {
        let _ = writeln!(stderr, "error: one or more checks failed");
        EXIT_FAILED
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(std::iter::once("psn").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("256x512"), Ok((256, 512)));
        assert_eq!(parse_grid("64×128"), Ok((64, 128)));
        assert!(parse_grid("0x5").is_err());
        assert!(parse_grid("256").is_err());
        assert!(parse_grid("ax5").is_err());
    }

    #[test]
    fn rounding_to_twelve_digits() {
        assert_eq!(round12(2.032_963_177_355_784_2), 2.032_963_177_36);
        assert_eq!(round12(0.0), 0.0);
        assert_eq!(round12(1.234_567_890_123_456e-7), 1.234_567_890_12e-7);
    }

    #[test]
    fn bound_json() {
        let (code, out, err) = call(&["bound", "--family", "exp", "--param", "1.0", "--variant", "starlike", "--format", "json"]);
        assert_eq!(code, 0, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!((v["alpha"].as_f64().unwrap() - 0.129_666_061_666).abs() < 1e-12);
        assert!((v["bound"].as_f64().unwrap() - 2.032_963_177_36).abs() < 1e-11);
        assert_eq!(v["config"]["command"], "bound");
        assert_eq!(v["config"]["family"], "exp");
        assert_eq!(v["family"], "exp");
    }

    #[test]
    fn tiny_lambda() {
        let (code, out, _) = call(&["bound", "--family", "exp", "--param", "0.0001", "--variant", "starlike"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(v["bound"].as_f64().unwrap() < 1e-3);
    }

    #[test]
    fn csv_layout() {
        let (code, out, _) = call(&["table", "--family", "sqrt", "--variant", "convex", "--format", "csv", "--steps", "4"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.split('\n').collect();
        assert_eq!(lines[0], "family,param,variant,alpha,bound,residual");
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[5], "");
        assert!(!out.contains('\r'));
        assert!(lines[4].starts_with("sqrt,1,convex,0.136882885337,"));
    }

    #[test]
    fn usage_errors_exit_two_with_one_line() {
        for args in [
            vec!["bound", "--family", "exp", "--param", "2.0"],
            vec!["bound", "--family", "cosh", "--param", "1.0"],
            vec!["bound", "--family", "exp"],
            vec!["verify", "--family", "exp", "--param", "1", "--grid", "12by4"],
            vec!["verify", "--family", "exp", "--param", "1", "--grid", "32x64"],
            vec!["frobnicate"],
            vec!["profile", "--family", "exp", "--param", "1", "--aux", "nope"],
        ] {
            let (code, out, err) = call(&args);
            assert_eq!(code, 2, "{args:?}");
            assert!(out.is_empty());
            assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        }
    }

    #[test]
    fn profile_matches_aux() {
        let (_, a, _) = call(&["profile", "--family", "sqrt", "--param", "1", "--points", "20", "--format", "csv"]);
        let (_, b, _) = call(&["profile", "--family", "sqrt", "--param", "1", "--points", "20", "--format", "csv", "--aux", "g1_sqrt"]);
        let rows = |s: &str| -> Vec<(f64, f64)> {
            s.lines()
                .skip(1)
                .map(|l| {
                    let (r, v) = l.split_once(',').unwrap();
                    (r.parse().unwrap(), v.parse().unwrap())
                })
                .collect()
        };
        for (x, y) in rows(&a).iter().zip(rows(&b)) {
            assert_eq!(x.0, y.0);
            assert!((x.1 - y.1).abs() < 1e-10);
        }
    }

    #[test]
    fn certify_reports_pass() {
        let (code, out, _) = call(&["certify", "--family", "sqrt", "--param", "1", "--grid-size", "1000"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["pass"], true);
        assert!(v["certificates"].as_array().unwrap().len() >= 10);
    }
}
