//! `srlie`: distances, geodesics, cut and conjugate times, locus membership
//! and the verification suites from the command line.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Matrix3;
use num_complex::Complex64;
use serde_json::{json, Map, Number, Value};

use srlie_core::cutconj::{conjugate_time, cut_time, in_cut_locus, in_first_conjugate_locus};
use srlie_core::distance::dist;
use srlie_core::geodesics::geodesic;
use srlie_core::verify::{run_all, run_suite, Suite, SuiteReport};
use srlie_core::{BasisKind, Error, GeodesicParams, GroupKind, GroupPoint, So3RPoint, Su2RPoint};

/// Tolerance on `|α|² − 1` below which `--alpha` is rescaled silently.
const ALPHA_NORMALIZE_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "srlie", version, about = "Sub-Riemannian geometry on SU(2)xR and SO(3)xR")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Group::Su2r)]
    group: Group,
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 2)]
    metric: u8,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Membership and locus tolerance.
    #[arg(long, global = true, value_parser = parse_tol, allow_hyphen_values = true, default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    Su2r,
    So3r,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distance from the identity.
    Dist(PointArgs),
    /// Sample an arclength geodesic from the identity.
    Geodesic {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        /// Number of intervals; `n + 1` rows are printed.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Cut time and locus class.
    Cut(ParamArgs),
    /// The n-th conjugate time.
    Conjugate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// First-conjugate and cut locus membership.
    Locus(PointArgs),
    /// Seeded property sweeps.
    Verify {
        #[arg(long, default_value = "all", value_parser = ["ode", "roundtrip", "covering", "splitting", "monotonicity", "all"])]
        suite: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run the shooting-oracle comparison.
        #[arg(long)]
        deep: bool,
    },
}

#[derive(Debug, Args)]
struct PointArgs {
    /// `re,im` of A (SU(2)xR).
    #[arg(long = "A", value_parser = parse_pair, allow_hyphen_values = true)]
    a: Option<[f64; 2]>,
    /// `re,im` of B (SU(2)xR).
    #[arg(long = "B", value_parser = parse_pair, allow_hyphen_values = true)]
    b: Option<[f64; 2]>,
    /// Nine row-major entries of C (SO(3)xR).
    #[arg(long = "C", value_parser = parse_nine, allow_hyphen_values = true)]
    c: Option<[f64; 9]>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    v: f64,
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// `a1,a2,a3` on the unit sphere.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, conflicts_with_all = ["phi0", "alpha2"])]
    alpha: Option<[f64; 3]>,
    #[arg(long, allow_hyphen_values = true, requires = "alpha2")]
    phi0: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "phi0")]
    alpha2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
}

fn parse_reals<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated reals, got {}", parts.len()));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        let x: f64 = p.trim().parse().map_err(|e| format!("{p:?}: {e}"))?;
        if !x.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
        *o = x;
    }
    Ok(out)
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    parse_reals(s)
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    parse_reals(s)
}

fn parse_nine(s: &str) -> Result<[f64; 9], String> {
    parse_reals(s)
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err("tolerance must be positive".into())
    }
}

enum Failure {
    Input(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Solver(e.to_string())
        }
    }
}

type CmdResult = Result<(String, bool), Failure>;

impl Cli {
    fn group_kind(&self) -> GroupKind {
        match self.group {
            Group::Su2r => GroupKind::Su2R,
            Group::So3r => GroupKind::So3R,
        }
    }

    fn basis(&self) -> BasisKind {
        if self.metric == 1 {
            BasisKind::D1
        } else {
            BasisKind::D2
        }
    }

    fn point(&self, p: &PointArgs) -> Result<GroupPoint, Failure> {
        match self.group {
            Group::Su2r => {
                if p.c.is_some() {
                    return Err(Failure::Input("--C applies to --group so3r".into()));
                }
                let (Some(a), Some(b)) = (p.a, p.b) else {
                    return Err(Failure::Input("--group su2r needs --A re,im and --B re,im".into()));
                };
                let (a, b) = (Complex64::new(a[0], a[1]), Complex64::new(b[0], b[1]));
                let n2 = a.norm_sqr() + b.norm_sqr();
                if (n2 - 1.0).abs() > self.tol {
                    return Err(Failure::Input(format!(
                        "invariant |A|^2 + |B|^2 = 1 violated: got {n2} (tol {:e})",
                        self.tol
                    )));
                }
                let s = if n2 == 1.0 { 1.0 } else { n2.sqrt().recip() };
                Ok(GroupPoint::Su2R(Su2RPoint::new(a * s, b * s, p.v)?))
            }
            Group::So3r => {
                if p.a.is_some() || p.b.is_some() {
                    return Err(Failure::Input("--A/--B apply to --group su2r".into()));
                }
                let Some(c) = p.c else {
                    return Err(Failure::Input("--group so3r needs --C with nine row-major reals".into()));
                };
                let m = Matrix3::from_row_slice(&c);
                let dev = (m.transpose() * m - Matrix3::identity()).amax();
                if dev > self.tol {
                    return Err(Failure::Input(format!(
                        "invariant C^T C = E violated: deviation {dev:e} (tol {:e})",
                        self.tol
                    )));
                }
                if m.determinant() <= 0.0 {
                    return Err(Failure::Input("invariant det C = 1 violated: det C <= 0".into()));
                }
                let m = if dev > srlie_core::groups::MEMBERSHIP_TOL {
                    let svd = m.svd(true, true);
                    svd.u.expect("requested U") * svd.v_t.expect("requested V^T")
                } else {
                    m
                };
                Ok(GroupPoint::So3R(So3RPoint::new(m, p.v)?))
            }
        }
    }

    fn params(&self, p: &ParamArgs) -> Result<GeodesicParams, Failure> {
        let (group, metric) = (self.group_kind(), self.basis());
        Ok(match (p.alpha, p.phi0, p.alpha2) {
            (Some(a), None, None) => {
                GeodesicParams::normalized(a, p.beta, metric, group, self.tol.max(ALPHA_NORMALIZE_TOL))?
            }
            (None, Some(phi0), Some(alpha2)) => GeodesicParams::from_phi0(phi0, alpha2, p.beta, metric, group)?,
            _ => return Err(Failure::Input("give either --alpha a1,a2,a3 or --phi0 with --alpha2".into())),
        })
    }
}

/// 17 significant digits; non-finite values become strings.
fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(format!("{x:.16e}").parse::<Number>().expect("finite float renders as a JSON number"))
    } else if x.is_nan() {
        Value::Null
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

fn cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn cell_value(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// One table, rendered as a JSON array of objects or CSV with one header.
struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    fn render(&self, format: Format, single: bool) -> String {
        match format {
            Format::Json => {
                let objs: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let mut m = Map::new();
                        for (k, v) in self.columns.iter().zip(r) {
                            m.insert(k.clone(), v.clone());
                        }
                        Value::Object(m)
                    })
                    .collect();
                let v = if single && objs.len() == 1 {
                    objs.into_iter().next().expect("one row")
                } else {
                    Value::Array(objs)
                };
                serde_json::to_string_pretty(&v).expect("serializable") + "\n"
            }
            Format::Csv => {
                let mut s = self.columns.join(",");
                s.push('\n');
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(cell_value).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn cmd_dist(cli: &Cli, p: &PointArgs) -> CmdResult {
    let point = cli.point(p)?;
    let d = dist(&point, cli.basis())?;
    let mut t = Table::new(["value", "case_label", "xi", "residual"]);
    t.rows.push(vec![
        num(d.value),
        json!(d.case_label),
        d.xi.map_or(Value::Null, num),
        num(d.residual),
    ]);
    Ok((t.render(cli.format, true), true))
}

fn cmd_geodesic(cli: &Cli, p: &ParamArgs, t0: f64, t1: f64, n: u64) -> CmdResult {
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(Failure::Input("--t0 and --t1 must be finite".into()));
    }
    let q = cli.params(p)?;
    let mut t = match q.group {
        GroupKind::Su2R => Table::new(["t", "ReA", "ImA", "ReB", "ImB", "v"]),
        GroupKind::So3R => {
            let mut cols = vec!["t".to_string()];
            for i in 1..=3 {
                for j in 1..=3 {
                    cols.push(format!("c{i}{j}"));
                }
            }
            cols.push("v".into());
            Table::new(cols)
        }
    };
    // a degenerate range is a single sample
    let count = if t0 == t1 { 0 } else { n };
    for k in 0..=count {
        let s = if k == count { t1 } else { t0 + (t1 - t0) * k as f64 / count as f64 };
        let mut row = vec![num(s)];
        row.extend(geodesic(&q, s).coordinates().into_iter().map(num));
        t.rows.push(row);
    }
    Ok((t.render(cli.format, false), true))
}

fn cmd_cut(cli: &Cli, p: &ParamArgs) -> CmdResult {
    let q = cli.params(p)?;
    let info = cut_time(&q)?;
    let mut t = Table::new(["cut_time", "locus_class", "first_conjugate_time"]);
    t.rows.push(vec![
        num(info.cut_time),
        json!(info.locus_class.name()),
        num(info.first_conjugate_time),
    ]);
    Ok((t.render(cli.format, true), true))
}

fn cmd_conjugate(cli: &Cli, p: &ParamArgs, n: u64) -> CmdResult {
    let q = cli.params(p)?;
    let time = conjugate_time(&q, n as usize)?;
    let mut t = Table::new(["n", "conjugate_time"]);
    t.rows.push(vec![json!(n), num(time)]);
    Ok((t.render(cli.format, true), true))
}

fn cmd_locus(cli: &Cli, p: &PointArgs) -> CmdResult {
    let point = cli.point(p)?;
    let conj = in_first_conjugate_locus(&point, cli.basis(), cli.tol);
    let cut = in_cut_locus(&point, cli.basis(), cli.tol);
    let yes = |b: bool| if b { "yes" } else { "no" };
    let (conj_v, cut_v) = match cli.format {
        Format::Json => (json!(conj), json!(cut.is_some())),
        Format::Csv => (json!(yes(conj)), json!(yes(cut.is_some()))),
    };
    let mut t = Table::new(["in_first_conjugate_locus", "in_cut_locus", "cut_locus_class"]);
    t.rows.push(vec![conj_v, cut_v, cut.map_or(Value::Null, |c| json!(c.name()))]);
    Ok((t.render(cli.format, true), true))
}

fn cmd_verify(cli: &Cli, suite: &str, count: usize, seed: u64, deep: bool) -> CmdResult {
    let reports: Vec<SuiteReport> = if suite == "all" {
        run_all(count, seed, deep)
    } else {
        let s: Suite = suite.parse()?;
        vec![run_suite(s, count, seed)]
    };
    let passed = reports.iter().all(|r| r.passed);
    let out = match cli.format {
        Format::Json => {
            let suites: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "samples": r.samples,
                        "max_residual": num(r.max_residual),
                        "tolerance": num(r.tolerance),
                        "passed": r.passed,
                    })
                })
                .collect();
            let v = json!({ "seed": seed, "suites": suites, "passed": passed });
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("suite,samples,max_residual,tolerance,passed\n");
            for r in &reports {
                writeln!(s, "{},{},{},{},{}", r.name, r.samples, cell(r.max_residual), cell(r.tolerance), r.passed)
                    .expect("writing to a String");
            }
            s
        }
    };
    Ok((out, passed))
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Dist(p) => cmd_dist(cli, p),
        Command::Geodesic { params, t0, t1, n } => cmd_geodesic(cli, params, *t0, *t1, *n),
        Command::Cut(p) => cmd_cut(cli, p),
        Command::Conjugate { params, n } => cmd_conjugate(cli, params, *n),
        Command::Locus(p) => cmd_locus(cli, p),
        Command::Verify { suite, count, seed, deep } => cmd_verify(cli, suite, *count, *seed, *deep),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver failure: {msg}");
            ExitCode::from(3)
        }
    }
}
