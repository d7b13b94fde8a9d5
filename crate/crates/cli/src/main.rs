mod config;
mod expr;

use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use cdanalysis::contour::{delta_arg_n, line_integral, path_from_json, residue, residue_n, Order, Path};
use cdanalysis::qcx::{eval_extension, ExtensionSpec};
use cdanalysis::special::{self, ZetaRep};
use cdanalysis::xform::{
    invert, invert_mellin, quasi_regularity_check, symmetry_report, transform, BromwichLine, Original, TransformSpec,
};
use cdanalysis::{selftest, CdError, CdNumber};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use config::Config;
use expr::{Env, Expr};

#[derive(Parser, Debug)]
#[command(name = "cdanalysis", version, about = "Analysis over quaternions and octonions: residues, transforms, ζ")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Global {
    /// Tolerance handed to every quadrature and inversion kernel
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Working algebra: 2 = quaternions, 3 = octonions
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(2..=3))]
    level: Option<u8>,
    #[arg(long, global = true, value_enum)]
    kernel: Option<KernelArg>,
    /// Logarithm branch used by ln, sqrt and non-integer powers
    #[arg(long, global = true, allow_hyphen_values = true)]
    branch: Option<i64>,
    #[arg(long, global = true, value_enum)]
    out: Option<OutArg>,
    /// File of `key = value` defaults; flags take precedence
    #[arg(long, global = true)]
    config: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum KernelArg {
    Linear,
    Spherical,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum OutArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum TransformKind {
    Laplace,
    TwoSided,
    Mellin,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum OrderArg {
    Right,
    Left,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a closed expression, or one in z at the given points
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        /// Points for the variable z, separated by ';'
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
    },
    /// Quasi-conformal extension of a complex seed f(y) evaluated at z
    Extend {
        /// Seed expression in y
        #[arg(long, conflicts_with = "spec", allow_hyphen_values = true)]
        f: Option<String>,
        /// Seed as JSON, e.g. {"seed":{"power_series":{...}},"level":2}
        #[arg(long)]
        spec: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Marked real point of the seed
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        y0: f64,
    },
    /// Line integral of f(z) along a path given as JSON control points
    Integral {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// JSON list of {"t", "coeffs", "interp"}; prefix with @ to read a file
        #[arg(long)]
        path: String,
        #[arg(long, value_enum, default_value_t = OrderArg::Right)]
        order: OrderArg,
    },
    /// Residue of f(z) at y along the unit axis N; with --a, the n-residue
    Residue {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value = "i1")]
        axis: String,
        #[arg(long)]
        rho: Option<f64>,
        /// Chain a_1..a_{n-1}, separated by ';'
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
    },
    /// Argument variation of f(z) along a closed path
    Argn {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// JSON control points (prefix with @ to read a file); omit for a circle
        #[arg(long)]
        path: Option<String>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        center: String,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value = "i1")]
        axis: String,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
    },
    /// Forward transform of an original f(t) at points p
    Transform {
        #[arg(value_enum)]
        kind: TransformKind,
        /// Original in t (in tau for mellin)
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Points p, separated by ';'
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        s0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        s1: Option<f64>,
        /// Growth constant C in |f(t)| <= C e^{s t}
        #[arg(long, default_value_t = 1.0)]
        growth: f64,
        /// Points where f jumps, separated by ';'
        #[arg(long, allow_hyphen_values = true)]
        jumps: Option<String>,
    },
    /// Inverse transform of an image F(p) along the line a + S tau
    Invert {
        #[arg(long, allow_hyphen_values = true)]
        image: String,
        /// Times t (or tau with --mellin), separated by ';'
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value = "i1")]
        axis: String,
        /// Half-width of the central block
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long)]
        mellin: bool,
    },
    /// Symmetry and reality residuals of the two-sided image of f(t)
    Symmetry {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        probes: String,
        #[arg(long, allow_hyphen_values = true)]
        s0: f64,
        #[arg(long, allow_hyphen_values = true)]
        s1: f64,
        #[arg(long, default_value_t = 1.0)]
        growth: f64,
    },
    /// Riemann ζ at z
    Zeta {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// euler_maclaurin, strip, reflected, hankel or mellin_digamma
        #[arg(long)]
        rep: Option<String>,
    },
    /// Sign changes of Re Υ(tM) on [t_lo, t_hi], refined by bisection
    Scan {
        #[arg(long)]
        t_lo: f64,
        #[arg(long)]
        t_hi: f64,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value = "i1")]
        axis: String,
    },
    /// Acceptance suite; JSON lines on stdout, a table on stderr
    Selftest {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
        criterion: Option<u8>,
    },
}

enum Fail {
    Usage(String),
    Compute(CdError),
}

impl From<CdError> for Fail {
    fn from(e: CdError) -> Self {
        Fail::Compute(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail::Usage(msg.into()))
}

/// Settings after merging flags over the config file.
struct Settings {
    tol: f64,
    level: u8,
    kernel: KernelArg,
    branch: i64,
    out: OutArg,
    rho: f64,
    step: f64,
}

impl Settings {
    fn resolve(g: &Global) -> Result<Self, Fail> {
        let cfg = match &g.config {
            Some(path) => Config::load(path).map_err(Fail::Usage)?,
            None => Config::default(),
        };
        let kernel = match cfg.get::<String>("kernel").map_err(Fail::Usage)?.as_deref() {
            None | Some("linear") => KernelArg::Linear,
            Some("spherical") => KernelArg::Spherical,
            Some(k) => return usage(format!("config: unknown kernel '{k}'")),
        };
        let out = match cfg.get::<String>("out").map_err(Fail::Usage)?.as_deref() {
            None | Some("json") => OutArg::Json,
            Some("csv") => OutArg::Csv,
            Some(o) => return usage(format!("config: unknown output '{o}'")),
        };
        let s = Self {
            tol: g.tol.or(cfg.get("tol").map_err(Fail::Usage)?).unwrap_or(1e-10),
            level: g.level.or(cfg.get("level").map_err(Fail::Usage)?).unwrap_or(2),
            kernel: g.kernel.unwrap_or(kernel),
            branch: g.branch.or(cfg.get("branch").map_err(Fail::Usage)?).unwrap_or(0),
            out: g.out.unwrap_or(out),
            rho: cfg.get("rho").map_err(Fail::Usage)?.unwrap_or(0.5),
            step: cfg.get("step").map_err(Fail::Usage)?.unwrap_or(0.1),
        };
        if !(s.tol > 0.0 && s.tol < 1.0) {
            return usage(format!("tolerance must lie in (0, 1), got {}", s.tol));
        }
        if !(2..=3).contains(&s.level) {
            return usage(format!("level must be 2 or 3, got {}", s.level));
        }
        Ok(s)
    }

    fn env(&self) -> Env {
        Env::new(self.branch)
    }

    fn spec(&self) -> Result<TransformSpec, Fail> {
        let spec = match self.kernel {
            KernelArg::Linear => TransformSpec::linear(self.level),
            KernelArg::Spherical => TransformSpec::spherical(self.level)?,
        };
        Ok(spec.with_tol(self.tol))
    }
}

fn parse_expr(src: &str, allowed: &[&str]) -> Result<Expr, Fail> {
    let e = Expr::parse(src).map_err(|e| Fail::Usage(format!("expression '{src}' {e}")))?;
    e.check_vars(allowed).map_err(|m| Fail::Usage(format!("expression '{src}': {m}")))?;
    Ok(e)
}

/// A closed expression such as `0.3+0.5*i2`, lifted to the working level.
fn parse_value(src: &str, s: &Settings) -> Result<CdNumber, Fail> {
    let v = parse_expr(src, &[])?.eval(&s.env())?;
    if v.level() > s.level {
        return usage(format!("value '{src}' does not fit in level {}", s.level));
    }
    Ok(v.lift(s.level))
}

fn parse_values(src: &str, s: &Settings) -> Result<Vec<CdNumber>, Fail> {
    src.split(';').filter(|p| !p.trim().is_empty()).map(|p| parse_value(p, s)).collect()
}

fn parse_reals(src: &str) -> Result<Vec<f64>, Fail> {
    src.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<f64>().map_err(|_| Fail::Usage(format!("not a number: '{p}'"))))
        .collect()
}

fn read_arg(src: &str) -> Result<String, Fail> {
    match src.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(src.to_string()),
    }
}

fn coeffs(z: &CdNumber, level: u8) -> Value {
    json!(z.lift(level.max(z.level())).coeffs())
}

fn unit_axis(src: &str, s: &Settings) -> Result<CdNumber, Fail> {
    let a = parse_value(src, s)?;
    if a.re() != 0.0 || a.norm() == 0.0 {
        return usage(format!("axis '{src}' must be a nonzero pure imaginary"));
    }
    Ok(a.scale(1.0 / a.norm()))
}

fn function_of(e: Expr, var: &'static str, s: &Settings) -> impl Fn(&CdNumber) -> cdanalysis::Result<CdNumber> {
    let env = s.env();
    move |z: &CdNumber| e.eval(&env.clone().with(var, *z))
}

fn original_of(e: Expr, var: &'static str, s: &Settings) -> impl Fn(f64) -> CdNumber + Send + Sync + 'static {
    let e = Arc::new(e);
    let env = s.env();
    let level = s.level;
    move |t: f64| {
        let v = e.eval(&env.clone().with(var, CdNumber::real(t)));
        v.map_or_else(|_| CdNumber::real(f64::NAN), |v| v.lift(level.max(v.level())))
    }
}

fn run(cli: Cli) -> Result<(), Fail> {
    let s = Settings::resolve(&cli.global)?;
    let lv = s.level;
    let mut rows = Vec::new();
    match cli.cmd {
        Cmd::Eval { expr, z } => match z {
            None => {
                let v = parse_expr(&expr, &[])?.eval(&s.env())?;
                rows.push(json!({ "value": coeffs(&v, lv) }));
            }
            Some(zs) => {
                let f = function_of(parse_expr(&expr, &["z"])?, "z", &s);
                for z in parse_values(&zs, &s)? {
                    rows.push(json!({ "z": coeffs(&z, lv), "value": coeffs(&f(&z)?, lv) }));
                }
            }
        },
        Cmd::Extend { f, spec, z, y0 } => {
            let mut ext = match (f, spec) {
                (Some(src), None) => {
                    let e = parse_expr(&src, &["y"])?;
                    let env = s.env();
                    let g = move |c: Complex64| {
                        let v = e.eval(&env.clone().with("y", CdNumber::complex(c.re, c.im)))?;
                        if v.level() > 1 && !v.lies_in(1, 0.0) {
                            return Err(CdError::Invalid("seed must be complex-valued on ℂ".into()));
                        }
                        Ok(Complex64::new(v.coeff(0), v.coeff(1)))
                    };
                    ExtensionSpec::callable(g, y0, lv)?
                }
                (None, Some(js)) => {
                    let mut e: ExtensionSpec = serde_json::from_str(&read_arg(&js)?)
                        .map_err(|e| Fail::Usage(format!("bad extension spec: {e}")))?;
                    e.level = lv;
                    e
                }
                _ => return usage("extend needs exactly one of --f or --spec"),
            };
            ext = ext.with_spherical(s.kernel == KernelArg::Spherical);
            for zv in parse_values(&z, &s)? {
                rows.push(json!({ "z": coeffs(&zv, lv), "value": coeffs(&eval_extension(&ext, &zv)?, lv) }));
            }
        }
        Cmd::Integral { f, path, order } => {
            let g = function_of(parse_expr(&f, &["z"])?, "z", &s);
            let p = path_from_json(&read_arg(&path)?).map_err(|e| Fail::Usage(format!("bad path: {e}")))?;
            let order = if order == OrderArg::Left { Order::Left } else { Order::Right };
            let v = line_integral(|z| g(&z.lift(lv)), &p, s.tol, order)?;
            rows.push(json!({ "value": coeffs(&v, lv) }));
        }
        Cmd::Residue { f, y, axis, rho, a } => {
            let e = parse_expr(&f, &["z", "y"])?;
            let yv = parse_value(&y, &s)?;
            let env = s.env().with("y", yv);
            let g = move |z: &CdNumber| e.eval(&env.clone().with("z", *z));
            let n = unit_axis(&axis, &s)?;
            let rho = rho.unwrap_or(s.rho);
            let v = match a {
                None => residue(g, &yv, &n, rho, s.tol)?,
                Some(chain) => residue_n(g, &yv, &n, rho, &parse_values(&chain, &s)?, s.tol)?,
            };
            rows.push(json!({ "res": coeffs(&v, lv) }));
        }
        Cmd::Argn { f, path, center, radius, axis, a } => {
            let g = function_of(parse_expr(&f, &["z"])?, "z", &s);
            let p = match path {
                Some(js) => path_from_json(&read_arg(&js)?).map_err(|e| Fail::Usage(format!("bad path: {e}")))?,
                None => Path::circle(parse_value(&center, &s)?, radius, unit_axis(&axis, &s)?)?,
            };
            let chain = match a {
                Some(c) => parse_values(&c, &s)?,
                None => Vec::new(),
            };
            let v = delta_arg_n(|z| g(&z.lift(lv)), &p, &chain)?;
            rows.push(json!({ "delta_arg": coeffs(&v, lv) }));
        }
        Cmd::Transform { kind, f, p, s0, s1, growth, jumps } => {
            let var = if kind == TransformKind::Mellin { "tau" } else { "t" };
            let g = original_of(parse_expr(&f, &[var])?, var, &s);
            let mut orig = match kind {
                TransformKind::Laplace => Original::right(g, s0.unwrap_or(0.0)),
                TransformKind::TwoSided => match (s0, s1) {
                    (Some(a), Some(b)) => Original::two_sided(g, a, b),
                    _ => return usage("two-sided transforms need --s0 and --s1"),
                },
                TransformKind::Mellin => match (s0, s1) {
                    (Some(a), Some(b)) => Original::multiplicative(g, a, b),
                    _ => return usage("mellin transforms need --s0 and --s1"),
                },
            }
            .with_growth_constant(growth);
            if let Some(j) = jumps {
                orig = orig.with_discontinuities(parse_reals(&j)?);
            }
            let spec = s.spec()?;
            for pv in parse_values(&p, &s)? {
                let v = transform(&orig, &pv, &spec)?;
                rows.push(json!({ "p": coeffs(&pv, lv), "value": coeffs(&v, lv) }));
            }
        }
        Cmd::Invert { image, t, a, axis, b, mellin } => {
            let img = function_of(parse_expr(&image, &["p"])?, "p", &s);
            let line = BromwichLine::new(a, unit_axis(&axis, &s)?, b)?;
            let spec = s.spec()?;
            for tv in parse_reals(&t)? {
                let v = if mellin { invert_mellin(&img, tv, &line, &spec)? } else { invert(&img, tv, &line, &spec)? };
                rows.push(json!({ "t": tv, "value": coeffs(&v, lv) }));
            }
        }
        Cmd::Symmetry { f, probes, s0, s1, growth } => {
            let orig = Original::two_sided(original_of(parse_expr(&f, &["t"])?, "t", &s), s0, s1).with_growth_constant(growth);
            let spec = s.spec()?;
            let probes = parse_values(&probes, &s)?;
            let img = |p: &CdNumber| transform(&orig, p, &spec);
            let r = symmetry_report(&img, &probes, &spec);
            let q = quasi_regularity_check(&orig, &spec, &probes)?;
            let mut row = serde_json::to_value(r).map_err(|e| Fail::Compute(CdError::Invalid(e.to_string())))?;
            row["equivariance"] = json!(q);
            rows.push(row);
        }
        Cmd::Zeta { z, rep } => {
            let zs = parse_values(&z, &s)?;
            let rep = match rep {
                None => None,
                Some(r) => Some(
                    serde_json::from_value::<ZetaRep>(Value::String(r.clone()))
                        .map_err(|_| Fail::Usage(format!("unknown representation '{r}'")))?,
                ),
            };
            for zv in zs {
                let v = match rep {
                    None => special::zeta(&zv)?,
                    Some(r) => special::zeta_rep(&zv, r)?,
                };
                rows.push(json!({ "z": coeffs(&zv, lv), "value": coeffs(&v, lv) }));
            }
        }
        Cmd::Scan { t_lo, t_hi, step, axis } => {
            let m = unit_axis(&axis, &s)?;
            for zb in special::critical_line_scan(t_lo, t_hi, step.unwrap_or(s.step), &m)? {
                rows.push(json!({
                    "t_bracket_lo": zb.t_lo,
                    "t_bracket_hi": zb.t_hi,
                    "refined_t": zb.t,
                    "abs_zeta": zb.abs_zeta,
                }));
            }
        }
        Cmd::Selftest { criterion } => {
            let reports = match criterion {
                Some(k) => vec![selftest::run_criterion(k)],
                None => selftest::run_all(),
            };
            let mut err = std::io::stderr().lock();
            for r in &reports {
                let _ = writeln!(err, "{:>2}  {:<24} {}", r.criterion, r.title, if r.passed { "PASS" } else { "FAIL" });
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            for r in reports {
                rows.push(serde_json::to_value(r).map_err(|e| Fail::Compute(CdError::Invalid(e.to_string())))?);
            }
            if failed > 0 {
                emit(&rows, s.out);
                return Err(Fail::Compute(CdError::Invalid(format!("{failed} acceptance criteria failed"))));
            }
        }
    }
    emit(&rows, s.out);
    Ok(())
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}_{i}"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn emit(rows: &[Value], out: OutArg) {
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    match out {
        OutArg::Json => {
            for r in rows {
                let _ = writeln!(w, "{r}");
            }
        }
        OutArg::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            let mut header: Option<Vec<String>> = None;
            for r in rows {
                let mut cells = Vec::new();
                flatten("", r, &mut cells);
                if header.is_none() {
                    let h: Vec<String> = cells.iter().map(|(k, _)| k.clone()).collect();
                    let _ = csv.write_record(&h);
                    header = Some(h);
                }
                let _ = csv.write_record(cells.iter().map(|(_, v)| v));
            }
            let _ = csv.flush();
        }
    }
}

fn error_json(kind: &str, msg: &str) -> String {
    let mut m = Map::new();
    m.insert("kind".into(), json!(kind));
    m.insert("message".into(), json!(msg));
    json!({ "error": m }).to_string()
}

fn kind_of(e: &CdError) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn threads() -> Result<(), Fail> {
    if let Ok(v) = std::env::var("CDANALYSIS_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| Fail::Usage(format!("CDANALYSIS_THREADS must be a positive integer, got '{v}'")))?;
        if n == 0 {
            return usage("CDANALYSIS_THREADS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Fail::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.render().to_string();
            eprintln!("{}", error_json("Usage", msg.trim()));
            return ExitCode::from(2);
        }
    };
    match threads().and_then(|_| run(cli)) {
        Ok(_) => ExitCode::SUCCESS,
        Err(Fail::Usage(m)) => {
            eprintln!("{}", error_json("Usage", &m));
            ExitCode::from(2)
        }
        Err(Fail::Compute(e)) => {
            eprintln!("{}", error_json(&kind_of(&e), &e.to_string()));
            ExitCode::from(1)
        }
    }
}
