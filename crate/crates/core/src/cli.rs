//! Command-line front end.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;
use serde::Serialize;
use serde_json::json;

use crate::construct::bounds::{diagonal_norm_check, DiagonalNormCheck};
use crate::construct::{
    check_odd_prime, cond_u4p, cond_vandermonde_cyclotomic, cond_vandermonde_real, factorize,
    kuian_reference, table_row, verify_bounds, NodeScale, TableRow,
};
use crate::intpoly::{cyclotomic, real_cyclotomic, IntPolynomial};
use crate::lwe::{noise_amplification, LweParams, NoiseReport, NoiseStats};
use crate::mpnum::CondReport;
use crate::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_BAD_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "cyclocond", version, about = "Conditioning of Vandermonde and quasi-Vandermonde matrices for real cyclotomic fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOptions,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOptions {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256, env = "CYCLOCOND_PRECISION",
          value_parser = clap::value_parser!(u32).range(53..))]
    pub precision: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CondTarget {
    VandermondeReal,
    VandermondeCyclotomic,
    Quasi,
    Kuian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Psi,
    HalfPsi,
}

impl From<Scale> for NodeScale {
    fn from(s: Scale) -> Self {
        match s {
            Scale::Psi => NodeScale::Psi,
            Scale::HalfPsi => NodeScale::HalfPsi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    /// MPFR at the requested precision.
    Mpfr,
    /// Machine doubles.
    Double,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cyclotomic polynomial Φ_n.
    Phi {
        #[arg(long)]
        n: u64,
    },
    /// Minimal polynomial of 2cos(2π/n).
    PhiPlus {
        #[arg(long)]
        n: u64,
    },
    /// Frobenius condition number of one matrix family.
    Cond {
        #[arg(long, value_enum)]
        target: CondTarget,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        /// Node scale for `vandermonde-real`.
        #[arg(long, value_enum, default_value_t = Scale::Psi)]
        scale: Scale,
    },
    /// Conditioning table for a list of primes.
    Table {
        #[arg(long, value_delimiter = ',', default_values_t = [13u64, 101, 127, 257, 509])]
        primes: Vec<u64>,
    },
    /// Check every proved bound for one prime or an inclusive range `A..B`.
    Verify {
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        p: Option<u64>,
        #[arg(long)]
        range: Option<String>,
        #[arg(long, value_enum, default_value_t = Backend::Mpfr)]
        backend: Backend,
    },
    /// Dump the full factorization for one prime.
    Factor {
        #[arg(long)]
        p: u64,
    },
    /// Noise amplification through U_{4p} and the Vandermonde matrix.
    Noise {
        #[arg(long)]
        p: u64,
        /// Defaults to the smallest prime >= 2^14 with q ≡ 1 (mod 4p).
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 3.2)]
        sigma: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Write one CSV row per trial to this file.
        #[arg(long)]
        dump_trials: Option<PathBuf>,
        /// Skip the Vandermonde contrast.
        #[arg(long)]
        no_contrast: bool,
    },
}

/// Rendered output plus the exit status it implies.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_numerical() => EXIT_NUMERICAL,
            Failure::Lib(Error::Invariant(_)) => EXIT_VIOLATION,
            Failure::Lib(_) | Failure::Io(_) => EXIT_BAD_INPUT,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(e) => format!("I/O error: {e}"),
        }
    }
}

/// Six significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.5e}")
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes") + "\n"
}

fn poly_output(n: u64, poly: &IntPolynomial, format: Format) -> String {
    match format {
        Format::Json => to_json(&json!({
            "n": n,
            "degree": poly.degree(),
            "coeffs": poly.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("degree,coeff\n");
            for (i, c) in poly.coeffs().iter().enumerate() {
                let _ = writeln!(s, "{i},{c}");
            }
            s
        }
        Format::Pretty => format!("{poly}\n"),
    }
}

fn pretty_report(r: &CondReport) -> String {
    let mut s = format!(
        "{}  dim {}  cond {}  ||A|| {}  ||A^-1|| {}  residual {}  precision {} bits\n",
        r.matrix,
        r.dim,
        sci(r.cond),
        sci(r.frobenius),
        sci(r.frobenius_inverse),
        sci(r.residual),
        r.precision_bits
    );
    for b in &r.bounds {
        let rel = match b.kind {
            crate::mpnum::BoundKind::Upper => "<=",
            crate::mpnum::BoundKind::Lower => ">",
        };
        let _ = writeln!(
            s,
            "  {:<20} cond {rel} {}  {}",
            b.name,
            sci(b.value),
            if b.satisfied { "ok" } else { "VIOLATED" }
        );
    }
    s
}

fn reports_output(rows: &[(u64, CondReport)], format: Format) -> String {
    match format {
        Format::Json => {
            let list: Vec<_> = rows.iter().map(|(k, r)| json!({ "n_or_p": k, "report": r })).collect();
            to_json(&if list.len() == 1 { list[0].clone() } else { json!(list) })
        }
        Format::Csv => {
            let mut s = format!("{}\n", CondReport::csv_header());
            for (k, r) in rows {
                let _ = writeln!(s, "{}", r.csv_row(*k));
            }
            s
        }
        Format::Pretty => rows.iter().map(|(_, r)| pretty_report(r)).collect(),
    }
}

fn cmd_cond(target: CondTarget, n: Option<u64>, p: Option<u64>, scale: Scale, g: &GlobalOptions) -> Result<Outcome, Failure> {
    let need = |v: Option<u64>, flag: &str| {
        v.ok_or_else(|| Failure::Lib(Error::InvalidInput(format!("--{flag} is required for this target"))))
    };
    let (key, report) = match target {
        CondTarget::VandermondeReal => {
            let p = need(p.or(n), "p")?;
            (p, cond_vandermonde_real(p, g.precision, scale.into())?)
        }
        CondTarget::VandermondeCyclotomic => {
            let n = need(n.or(p), "n")?;
            (n, cond_vandermonde_cyclotomic(n, g.precision)?)
        }
        CondTarget::Quasi => {
            let p = need(p.or(n), "p")?;
            (p, cond_u4p::<Float>(p, g.precision)?)
        }
        CondTarget::Kuian => {
            let n = need(n.or(p), "n")?;
            let n_usize = usize::try_from(n).map_err(|_| Error::InvalidInput("N too large".into()))?;
            (n, kuian_reference(n_usize, g.precision)?)
        }
    };
    Ok(Outcome::ok(reports_output(&[(key, report)], g.format)))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

fn cmd_table(primes: &[u64], g: &GlobalOptions) -> Result<Outcome, Failure> {
    for &p in primes {
        check_odd_prime(p)?;
    }
    let rows: Vec<TableRow> = primes.iter().map(|&p| table_row(p, g.precision)).collect();
    let failed = rows.iter().any(|r| r.error.is_some());
    let text = match g.format {
        Format::Json => to_json(&json!({ "precision_bits": g.precision, "rows": rows })),
        Format::Csv => {
            let mut s = String::from("p,degree,cond_v,cond_u,bound_term,reference_cond_v,reference_cond_u,v_mismatch,error\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{:e},{},{},{},{}",
                    r.p,
                    r.degree,
                    opt(r.cond_v),
                    opt(r.cond_u),
                    r.bound_term,
                    opt(r.reference.map(|x| x.cond_v)),
                    opt(r.reference.map(|x| x.cond_u)),
                    r.v_mismatch.map(|b| b.to_string()).unwrap_or_default(),
                    r.error.as_deref().unwrap_or("").replace(',', ";"),
                );
            }
            s
        }
        Format::Pretty => {
            let mut s = format!(
                "{:>6} {:>7} {:>14} {:>14} {:>14} {:>14} {:>14}\n",
                "p", "degree", "cond(V)", "cond(U)", "4p^6", "reference V", "reference U"
            );
            let o = |x: Option<f64>| x.map(sci).unwrap_or_else(|| "-".into());
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>6} {:>7} {:>14} {:>14} {:>14} {:>14} {:>14}{}",
                    r.p,
                    r.degree,
                    o(r.cond_v),
                    o(r.cond_u),
                    sci(r.bound_term),
                    o(r.reference.map(|x| x.cond_v)),
                    o(r.reference.map(|x| x.cond_u)),
                    if r.v_mismatch == Some(true) { "  V differs by >10x" } else { "" }
                );
                if let Some(e) = &r.error {
                    let _ = writeln!(s, "       error: {e}");
                }
            }
            s
        }
    };
    Ok(Outcome {
        text,
        code: if failed { EXIT_NUMERICAL } else { EXIT_OK },
    })
}

fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::Lib(Error::InvalidInput(format!("range must look like A..B, got {s:?}")));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

#[derive(Serialize)]
struct VerifyEntry {
    p: u64,
    reports: Vec<CondReport>,
    diagonal: DiagonalNormCheck,
    satisfied: bool,
}

fn cmd_verify(p: Option<u64>, range: Option<&str>, backend: Backend, g: &GlobalOptions) -> Result<Outcome, Failure> {
    let primes: Vec<u64> = match (p, range) {
        (Some(p), _) => {
            check_odd_prime(p)?;
            if p < 5 {
                return Err(Error::InvalidInput(format!("bound suite needs p >= 5, got {p}")).into());
            }
            vec![p]
        }
        (None, Some(r)) => {
            let (a, b) = parse_range(r)?;
            (a.max(5)..=b).filter(|&q| crate::intpoly::is_prime(q)).collect()
        }
        (None, None) => return Err(Error::InvalidInput("give --p or --range".into()).into()),
    };
    let mut entries = Vec::with_capacity(primes.len());
    for p in primes {
        let reports = match backend {
            Backend::Mpfr => verify_bounds::<Float>(p, g.precision)?,
            Backend::Double => verify_bounds::<f64>(p, g.precision)?,
        };
        let diagonal = diagonal_norm_check(p, g.precision)?;
        let satisfied = diagonal.satisfied && reports.iter().all(CondReport::all_bounds_satisfied);
        entries.push(VerifyEntry { p, reports, diagonal, satisfied });
    }
    let all_ok = entries.iter().all(|e| e.satisfied);
    let text = match g.format {
        Format::Json => to_json(&json!({ "all_satisfied": all_ok, "primes": entries })),
        Format::Csv => {
            let mut s = format!("{}\n", CondReport::csv_header());
            for e in &entries {
                for r in &e.reports {
                    let _ = writeln!(s, "{}", r.csv_row(e.p));
                }
                let d = &e.diagonal;
                let _ = writeln!(s, "{},P_norm,{:e},{:e},{}", e.p, d.norm, d.norm_bound, d.norm <= d.norm_bound);
                if let Some(b) = d.inverse_norm_bound {
                    let _ = writeln!(s, "{},P_inverse_norm,{:e},{:e},{}", e.p, d.inverse_norm, b, d.inverse_norm <= b);
                }
            }
            s
        }
        Format::Pretty => {
            let mut s = String::new();
            for e in &entries {
                if e.satisfied && entries.len() > 1 {
                    let _ = writeln!(s, "p = {:<5} all bounds satisfied", e.p);
                    continue;
                }
                let _ = writeln!(s, "p = {}", e.p);
                for r in &e.reports {
                    s.push_str(&pretty_report(r));
                }
                let d = &e.diagonal;
                let _ = writeln!(s, "P  ||P|| {} <= {}  ||P^-1|| {}{}", sci(d.norm), sci(d.norm_bound), sci(d.inverse_norm),
                    d.inverse_norm_bound.map(|b| format!(" <= {}", sci(b))).unwrap_or_default());
            }
            let _ = writeln!(s, "{}", if all_ok { "all bounds satisfied" } else { "BOUND VIOLATION" });
            s
        }
    };
    Ok(Outcome {
        text,
        code: if all_ok { EXIT_OK } else { EXIT_VIOLATION },
    })
}

fn cmd_factor(p: u64, g: &GlobalOptions) -> Result<Outcome, Failure> {
    let f = factorize(p, g.precision)?;
    let text = match g.format {
        Format::Json => to_json(&f.to_json()),
        Format::Csv => {
            let mut s = String::from("matrix,row,col,value\n");
            let real = [("Q4p", &f.q4p), ("M4p", &f.m4p), ("N4p", &f.n4p), ("P", &f.p_diag), ("U4p", &f.u4p)];
            for (name, m) in real {
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        let _ = writeln!(s, "{name},{i},{j},{}", crate::serde_util::float_to_decimal(m.get(i, j)));
                    }
                }
            }
            for (name, m) in [("F", &f.f), ("C", &f.c)] {
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        let _ = writeln!(s, "{name},{i},{j},{}", m.get(i, j));
                    }
                }
            }
            s
        }
        Format::Pretty => {
            let mut s = format!("p = {}  precision {} bits\n", f.p, f.precision);
            let _ = writeln!(s, "{}", crate::construct::factor::ROW_CONVENTION);
            let _ = writeln!(s, "epsilon = {}", f.epsilon);
            let _ = writeln!(s, "r = {:?}", f.r_vector);
            let _ = writeln!(s, "||F·Q·C - M||_F = {}", sci(f.residual_fqc.to_f64()));
            let _ = writeln!(s, "||P·U - N||_F   = {}", sci(f.residual_pu.to_f64()));
            if f.p <= 7 {
                for (name, m) in [("Q4p", &f.q4p), ("U4p", &f.u4p)] {
                    let _ = writeln!(s, "{name}:");
                    for row in m.to_f64_rows() {
                        let cells: Vec<String> = row.iter().map(|&x| format!("{:>13}", sci(x))).collect();
                        let _ = writeln!(s, "  {}", cells.join(" "));
                    }
                }
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

fn pretty_stats(label: &str, s: &NoiseStats) -> String {
    format!(
        "  {label:<10} {:<8} mean {}  max {}  bound {}  {}\n",
        format!("{:?}", s.direction).to_lowercase(),
        sci(s.mean_ratio),
        sci(s.max_ratio),
        sci(s.frobenius_bound),
        if s.within_bound() { "ok" } else { "EXCEEDED" }
    )
}

fn noise_ok(r: &NoiseReport) -> bool {
    let v_ok = r.vandermonde.as_ref().is_none_or(|v| v.forward.within_bound() && v.inverse.within_bound());
    r.forward.within_bound() && r.inverse.within_bound() && v_ok
}

#[allow(clippy::too_many_arguments)]
fn cmd_noise(
    p: u64,
    q: Option<u64>,
    sigma: f64,
    trials: u64,
    dump: Option<&PathBuf>,
    contrast: bool,
    g: &GlobalOptions,
) -> Result<Outcome, Failure> {
    let params = LweParams::new(p, q, sigma, g.seed)?;
    let report = match dump {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            let r = noise_amplification(&params, trials, g.precision, contrast, Some(&mut file))?;
            file.flush()?;
            r
        }
        None => noise_amplification(&params, trials, g.precision, contrast, None)?,
    };
    let text = match g.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("map,direction,trials,skipped_zero,mean_ratio,max_ratio,frobenius_bound\n");
            let mut row = |map: &str, st: &NoiseStats| {
                let _ = writeln!(
                    s,
                    "{map},{},{},{},{:e},{:e},{:e}",
                    format!("{:?}", st.direction).to_lowercase(),
                    st.trials,
                    st.skipped_zero,
                    st.mean_ratio,
                    st.max_ratio,
                    st.frobenius_bound
                );
            };
            row("U4p", &report.forward);
            row("U4p", &report.inverse);
            if let Some(v) = &report.vandermonde {
                row("V_real", &v.forward);
                row("V_real", &v.inverse);
            }
            s
        }
        Format::Pretty => {
            let mut s = format!(
                "p = {}  q = {}  sigma = {}  trials = {}  seed = {}\n",
                params.p, params.q, params.sigma, trials, params.seed
            );
            let _ = writeln!(
                s,
                "U4p: ||U|| {}  ||U^-1|| {}  cond {}",
                sci(report.u_frobenius),
                sci(report.u_inv_frobenius),
                sci(report.cond_u)
            );
            s.push_str(&pretty_stats("U4p", &report.forward));
            s.push_str(&pretty_stats("U4p", &report.inverse));
            if let Some(v) = &report.vandermonde {
                let _ = writeln!(s, "V_real: ||V|| {}  ||V^-1|| {}  cond {}", sci(v.frobenius), sci(v.inverse_frobenius), sci(v.cond));
                s.push_str(&pretty_stats("V_real", &v.forward));
                s.push_str(&pretty_stats("V_real", &v.inverse));
            }
            s
        }
    };
    Ok(Outcome {
        code: if noise_ok(&report) { EXIT_OK } else { EXIT_VIOLATION },
        text,
    })
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Phi { n } => Ok(Outcome::ok(poly_output(*n, &cyclotomic(*n)?, g.format))),
        Command::PhiPlus { n } => Ok(Outcome::ok(poly_output(*n, &real_cyclotomic(*n)?, g.format))),
        Command::Cond { target, n, p, scale } => cmd_cond(*target, *n, *p, *scale, g),
        Command::Table { primes } => cmd_table(primes, g),
        Command::Verify { p, range, backend } => cmd_verify(*p, range.as_deref(), *backend, g),
        Command::Factor { p } => cmd_factor(*p, g),
        Command::Noise { p, q, sigma, trials, dump_trials, no_contrast } => {
            cmd_noise(*p, *q, *sigma, *trials, dump_trials.as_ref(), !no_contrast, g)
        }
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> ExitCode {
    match dispatch(&cli) {
        Ok(outcome) => match emit(&outcome.text, cli.global.output.as_ref()) {
            Ok(()) => ExitCode::from(outcome.code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_BAD_INPUT)
            }
        },
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
