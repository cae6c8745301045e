//! Command-line surface: compute values, emit tables, and run the
//! verification suites.
//!
//! Exit codes: 0 success, 1 domain error, 2 verification failure, 64 usage
//! error. Output is deterministic for a given argument list and seed; floats
//! are printed with 17 significant digits, JSON through serde (lossless).
//! `CHANGHEE_MAX_TERMS` caps series term counts (default 10^8); a key=value
//! config file can override tolerances and caps, and flags override both.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::changhee::{h_multiple_closed, h_series_oracle_with_limit};
use crate::error::Error;
use crate::exactcheck::{self, ExactParams};
use crate::mellin::mellin_zeta_quadrature_with_limit;
use crate::powerseries;
use crate::qcore::QParams;
use crate::verify::{self, SuiteId, VerifyOptions};
use crate::zeta::{euler_barnes_zeta, zeta_multiple_with_limit, zeta_neg_int};

/// Parses `re`, `re+imj`, `imj`, or `j` token forms into a complex number.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let invalid = |part: &str| format!("invalid number `{part}` in complex literal `{t}`");
    if let Some(body) = t.strip_suffix(['j', 'J']) {
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        let unit_im = |part: &str| -> Result<f64, String> {
            match part {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                other => other.parse().map_err(|_| invalid(other)),
            }
        };
        match split {
            Some(i) => {
                let re: f64 = body[..i].parse().map_err(|_| invalid(&body[..i]))?;
                let im = unit_im(&body[i..])?;
                Ok(Complex64::new(re, im))
            }
            None => Ok(Complex64::new(0.0, unit_im(body)?)),
        }
    } else {
        t.parse()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| invalid(t))
    }
}

/// Parses `p/q` fractions or finite decimal literals into exact rationals.
fn parse_rational(s: &str) -> Result<exactcheck::Rational, String> {
    use num_bigint::BigInt;
    let t = s.trim();
    let err = || format!("invalid rational literal `{t}` (expected p/q or a finite decimal)");
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d == BigInt::from(0) {
            return Err(err());
        }
        return Ok(exactcheck::Rational::new(n, d));
    }
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (-1i64, r),
        None => (1, t),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = digits.parse().map_err(|_| err())?;
    let mut den = BigInt::from(1);
    for _ in 0..frac_part.len() {
        den *= 10;
    }
    Ok(exactcheck::Rational::new(BigInt::from(sign) * n, den))
}

#[derive(Parser, Debug)]
#[command(
    name = "chzeta",
    version,
    about = "Changhee q-Euler numbers and Barnes-type multiple q-zeta functions",
    max_term_width = 100
)]
struct Cli {
    /// Emit JSON records instead of the human table.
    #[arg(long, global = true)]
    json: bool,
    /// key=value file with default `tol` and `max_terms`.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// Base q (|q| < 1, nonzero); complex as re+imj.
    #[arg(long)]
    q: String,
    /// Damping base u (|u| < 1).
    #[arg(long)]
    u: String,
    /// Shift w (default 0).
    #[arg(long, default_value = "0")]
    w: String,
    /// Weight exponents w_1..w_r.
    #[arg(long, num_args = 1.., required = true)]
    weights: Vec<String>,
    /// Damping exponents v_1..v_r.
    #[arg(long, num_args = 1.., required = true)]
    dampings: Vec<String>,
}

impl ParamArgs {
    fn to_qparams(&self) -> Result<QParams, String> {
        let q = parse_complex(&self.q)?;
        let u = parse_complex(&self.u)?;
        let w = parse_complex(&self.w)?;
        let weights = self
            .weights
            .iter()
            .map(|s| parse_complex(s))
            .collect::<Result<Vec<_>, _>>()?;
        let dampings = self
            .dampings
            .iter()
            .map(|s| parse_complex(s))
            .collect::<Result<Vec<_>, _>>()?;
        QParams::new(q, u, w, weights, dampings).map_err(|e| e.to_string())
    }

    fn to_exact(&self) -> Result<ExactParams, String> {
        let q = parse_rational(&self.q)?;
        let u = parse_rational(&self.u)?;
        let int_err = |s: &str| format!("exact mode needs integer parameter, got `{s}`");
        let w: u64 = self.w.trim().parse().map_err(|_| int_err(&self.w))?;
        let weights = self
            .weights
            .iter()
            .map(|s| s.trim().parse::<u64>().map_err(|_| int_err(s)))
            .collect::<Result<Vec<_>, _>>()?;
        let dampings = self
            .dampings
            .iter()
            .map(|s| s.trim().parse::<u64>().map_err(|_| int_err(s)))
            .collect::<Result<Vec<_>, _>>()?;
        ExactParams::new(q, u, w, weights, dampings).map_err(|e| e.to_string())
    }

    fn echo(&self) -> serde_json::Value {
        json!({
            "q": self.q,
            "u": self.u,
            "w": self.w,
            "weights": self.weights,
            "dampings": self.dampings,
        })
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum QeulerRoute {
    Closed,
    Series,
    Gf,
    Exact,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Changhee q-Euler number/polynomial H_{n,q}^(r) by any route.
    Qeuler {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = QeulerRoute::Closed)]
        route: QeulerRoute,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Changhee q-zeta series value at s.
    Zeta {
        #[arg(long, value_parser = parse_complex)]
        s: Complex64,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Special value zeta(-n) from the closed form.
    Negint {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Euler-Barnes zeta (|u| > 1) and Barnes-Bernoulli tables.
    Barnes {
        #[command(subcommand)]
        which: BarnesCommand,
    },
    /// Mellin quadrature cross-check against the series route.
    Mellin {
        #[arg(long, value_parser = parse_complex)]
        s: Complex64,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Sweep n = 0..N of the closed form to CSV.
    Table {
        #[arg(long)]
        n_max: u32,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Subcommand, Debug)]
enum BarnesCommand {
    /// Euler-Barnes multiple zeta sum over (w + sum m_i a_i)^{-s} with
    /// damping u^{-(m_1+..+m_r)}, |u| > 1.
    Zeta {
        #[arg(long, value_parser = parse_complex)]
        s: Complex64,
        #[arg(long, value_parser = parse_complex)]
        w: Complex64,
        #[arg(long, value_parser = parse_complex)]
        u: Complex64,
        #[arg(long, num_args = 1.., required = true, value_parser = parse_complex)]
        a: Vec<Complex64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Barnes multiple Bernoulli polynomial table B_n(x, r | a).
    Bernoulli {
        #[arg(long)]
        n_max: u32,
        #[arg(long, value_parser = parse_complex, default_value = "0")]
        x: Complex64,
        #[arg(long, num_args = 1.., required = true, value_parser = parse_complex)]
        a: Vec<Complex64>,
    },
}

#[derive(Serialize, Debug)]
#[serde(untagged)]
enum RecordValue {
    Complex { re: f64, im: f64 },
    Exact { num: String, den: String },
}

/// One computed value as it appears on the wire.
#[derive(Serialize, Debug)]
struct OutputRecord {
    command: String,
    params: serde_json::Value,
    value: RecordValue,
    error_bound: f64,
    terms: u64,
    route: String,
}

impl OutputRecord {
    fn complex(
        command: &str,
        params: serde_json::Value,
        value: Complex64,
        error_bound: f64,
        terms: u64,
        route: &str,
    ) -> Self {
        Self {
            command: command.into(),
            params,
            value: RecordValue::Complex {
                re: value.re,
                im: value.im,
            },
            error_bound,
            terms,
            route: route.into(),
        }
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

fn fmt_complex(z: Complex64) -> String {
    format!("{} + {}j", fmt_f64(z.re), fmt_f64(z.im))
}

fn render_human(rec: &OutputRecord) -> String {
    let mut out = String::new();
    out.push_str(&format!("command      {}\n", rec.command));
    if let serde_json::Value::Object(map) = &rec.params {
        for (k, v) in map {
            let shown = match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k:<12} {shown}\n"));
        }
    }
    match &rec.value {
        RecordValue::Complex { re, im } => {
            out.push_str(&format!(
                "value        {}\n",
                fmt_complex(Complex64::new(*re, *im))
            ));
        }
        RecordValue::Exact { num, den } => {
            out.push_str(&format!("value        {num}/{den}\n"));
        }
    }
    out.push_str(&format!("error_bound  {}\n", fmt_f64(rec.error_bound)));
    out.push_str(&format!("terms        {}\n", rec.terms));
    out.push_str(&format!("route        {}\n", rec.route));
    out
}

fn emit(records: &[OutputRecord], as_json: bool, out: &mut String) {
    for rec in records {
        if as_json {
            out.push_str(&serde_json::to_string(rec).expect("records serialize"));
            out.push('\n');
        } else {
            out.push_str(&render_human(rec));
        }
    }
}

fn csv_table(rows: &[(u32, Complex64, f64)]) -> String {
    let mut out = String::from("n,re,im,error_bound\n");
    for &(n, z, eb) in rows {
        out.push_str(&format!("{n},{},{},{}\n", fmt_f64(z.re), fmt_f64(z.im), fmt_f64(eb)));
    }
    out
}

#[derive(Debug, Default, Clone)]
struct FileConfig {
    tol: Option<f64>,
    max_terms: Option<u64>,
}

fn load_config(path: &std::path::Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut cfg = FileConfig::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {} is not key=value", lineno + 1))?;
        match key.trim() {
            "tol" => {
                cfg.tol = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| format!("config line {}: bad tol", lineno + 1))?,
                )
            }
            "max_terms" => {
                cfg.max_terms = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| format!("config line {}: bad max_terms", lineno + 1))?,
                )
            }
            other => return Err(format!("config line {}: unknown key `{other}`", lineno + 1)),
        }
    }
    Ok(cfg)
}

/// Term-count cap: flag-less; config overrides the environment override of
/// the default.
fn effective_max_terms(cfg: &FileConfig) -> u64 {
    if let Some(m) = cfg.max_terms {
        return m;
    }
    if let Ok(s) = std::env::var("CHANGHEE_MAX_TERMS") {
        if let Ok(m) = s.parse() {
            return m;
        }
    }
    crate::DEFAULT_MAX_TERMS
}

fn effective_tol(flag: Option<f64>, cfg: &FileConfig, default: f64) -> f64 {
    flag.or(cfg.tol).unwrap_or(default)
}

enum RunError {
    Domain(String),
    VerificationFailed,
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Domain(e.to_string())
    }
}

impl From<String> for RunError {
    fn from(e: String) -> Self {
        RunError::Domain(e)
    }
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<(), RunError> {
    let cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => FileConfig::default(),
    };
    let max_terms = effective_max_terms(&cfg);
    match &cli.command {
        Command::Qeuler {
            n,
            params,
            route,
            tol,
        } => {
            let mut echo = params.echo();
            echo["n"] = json!(n);
            let rec = match route {
                QeulerRoute::Closed => {
                    let p = params.to_qparams()?;
                    let value = h_multiple_closed(*n, &p)?;
                    OutputRecord::complex("qeuler", echo, value, 0.0, *n as u64 + 1, "closed_form")
                }
                QeulerRoute::Series => {
                    let p = params.to_qparams()?;
                    let tol = effective_tol(*tol, &cfg, 1e-12);
                    let eval = h_series_oracle_with_limit(*n, &p, tol, max_terms)?;
                    OutputRecord::complex(
                        "qeuler",
                        echo,
                        eval.value,
                        eval.tail_bound,
                        eval.terms_used,
                        "series",
                    )
                }
                QeulerRoute::Gf => {
                    let p = params.to_qparams()?;
                    let coeffs = powerseries::gf_changhee_coeffs(*n as usize, &p, None)?;
                    OutputRecord::complex(
                        "qeuler",
                        echo,
                        coeffs[*n as usize],
                        powerseries::GF_CHANGHEE_TAIL,
                        0,
                        "gf",
                    )
                }
                QeulerRoute::Exact => {
                    let p = params.to_exact()?;
                    let value = exactcheck::exact_h_multiple(*n, &p)?;
                    OutputRecord {
                        command: "qeuler".into(),
                        params: echo,
                        value: RecordValue::Exact {
                            num: value.numer().to_string(),
                            den: value.denom().to_string(),
                        },
                        error_bound: 0.0,
                        terms: *n as u64 + 1,
                        route: "exact".into(),
                    }
                }
            };
            emit(&[rec], cli.json, out);
        }
        Command::Zeta { s, params, tol } => {
            let p = params.to_qparams()?;
            let tol = effective_tol(*tol, &cfg, 1e-10);
            let eval = zeta_multiple_with_limit(*s, &p, tol, max_terms)?;
            let mut echo = params.echo();
            echo["s"] = json!(fmt_complex(*s));
            echo["tol"] = json!(tol);
            let rec = OutputRecord::complex(
                "zeta",
                echo,
                eval.value,
                eval.tail_bound,
                eval.terms_used,
                "series",
            );
            emit(&[rec], cli.json, out);
        }
        Command::Negint { n, params } => {
            let p = params.to_qparams()?;
            let value = zeta_neg_int(*n, &p)?;
            let mut echo = params.echo();
            echo["n"] = json!(n);
            let rec = OutputRecord::complex("negint", echo, value, 0.0, *n as u64 + 1, "closed_form");
            emit(&[rec], cli.json, out);
        }
        Command::Barnes { which } => match which {
            BarnesCommand::Zeta { s, w, u, a, tol } => {
                let tol = effective_tol(*tol, &cfg, 1e-10);
                let eval = euler_barnes_zeta(*s, *w, *u, a, tol)?;
                let echo = json!({
                    "s": fmt_complex(*s),
                    "w": fmt_complex(*w),
                    "u": fmt_complex(*u),
                    "a": a.iter().map(|z| fmt_complex(*z)).collect::<Vec<_>>(),
                    "tol": tol,
                });
                let rec = OutputRecord::complex(
                    "barnes zeta",
                    echo,
                    eval.value,
                    eval.tail_bound,
                    eval.terms_used,
                    "series",
                );
                emit(&[rec], cli.json, out);
            }
            BarnesCommand::Bernoulli { n_max, x, a } => {
                let coeffs = powerseries::gf_barnes_bernoulli(*n_max as usize, *x, a)?;
                if cli.json {
                    let echo = json!({
                        "x": fmt_complex(*x),
                        "a": a.iter().map(|z| fmt_complex(*z)).collect::<Vec<_>>(),
                    });
                    let records: Vec<OutputRecord> = coeffs
                        .iter()
                        .enumerate()
                        .map(|(n, &b)| {
                            let mut e = echo.clone();
                            e["n"] = json!(n);
                            OutputRecord::complex("barnes bernoulli", e, b, 0.0, 0, "gf")
                        })
                        .collect();
                    emit(&records, true, out);
                } else {
                    let rows: Vec<(u32, Complex64, f64)> = coeffs
                        .iter()
                        .enumerate()
                        .map(|(n, &b)| (n as u32, b, 0.0))
                        .collect();
                    out.push_str(&csv_table(&rows));
                }
            }
        },
        Command::Mellin { s, params, tol } => {
            let p = params.to_qparams()?;
            let tol = effective_tol(*tol, &cfg, 1e-7);
            let quad = mellin_zeta_quadrature_with_limit(*s, &p, tol, max_terms)?;
            let series = zeta_multiple_with_limit(*s, &p, (tol * 1e-2).max(1e-13), max_terms)?;
            let mut echo = params.echo();
            echo["s"] = json!(fmt_complex(*s));
            echo["tol"] = json!(tol);
            let recs = [
                OutputRecord::complex(
                    "mellin",
                    echo.clone(),
                    quad.value,
                    quad.abs_error_estimate,
                    quad.panels as u64,
                    "quadrature",
                ),
                OutputRecord::complex(
                    "mellin",
                    echo,
                    series.value,
                    series.tail_bound,
                    series.terms_used,
                    "series",
                ),
            ];
            emit(&recs, cli.json, out);
            if !cli.json {
                out.push_str(&format!(
                    "difference   {}\n",
                    fmt_f64((quad.value - series.value).norm())
                ));
            }
        }
        Command::Verify {
            suite,
            samples,
            seed,
        } => {
            let id: SuiteId = suite.parse::<SuiteId>().map_err(RunError::Domain)?;
            let opts = VerifyOptions {
                samples: *samples,
                seed: *seed,
                max_terms,
            };
            let outcomes = verify::run_suite(id, &opts);
            out.push_str(&verify::render_report(&outcomes));
            if !verify::all_passed(&outcomes) {
                return Err(RunError::VerificationFailed);
            }
        }
        Command::Table { n_max, params } => {
            let p = params.to_qparams()?;
            if cli.json {
                let echo = params.echo();
                let mut records = Vec::new();
                for n in 0..=*n_max {
                    let value = h_multiple_closed(n, &p)?;
                    let mut e = echo.clone();
                    e["n"] = json!(n);
                    records.push(OutputRecord::complex(
                        "table",
                        e,
                        value,
                        0.0,
                        n as u64 + 1,
                        "closed_form",
                    ));
                }
                emit(&records, true, out);
            } else {
                let mut rows = Vec::new();
                for n in 0..=*n_max {
                    rows.push((n, h_multiple_closed(n, &p)?, 0.0));
                }
                out.push_str(&csv_table(&rows));
            }
        }
    }
    Ok(())
}

/// Parses and runs an argument vector, printing results to stdout and
/// diagnostics to stderr; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    64
                }
            };
        }
    };
    let mut out = String::new();
    match dispatch(&cli, &mut out) {
        Ok(()) => {
            print!("{out}");
            0
        }
        Err(RunError::Domain(msg)) => {
            print!("{out}");
            eprintln!("error: {msg}");
            1
        }
        Err(RunError::VerificationFailed) => {
            print!("{out}");
            eprintln!("error: verification failed");
            2
        }
    }
}
