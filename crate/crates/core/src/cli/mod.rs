//! The `qcr` command line: `compute`, `sweep`, `verify` and `reproduce`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid flags or input
//! files, 3 domain violation, 4 numerical non-convergence (the affected rows
//! are still written, with an inflated error estimate).

pub mod figures;
pub mod request;
pub mod svg;
pub mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::measures::MeasureValue;
use crate::molecules::{default_table, find, EnergyUnit, AMU_IN_EV, HBAR_C_EV_ANGSTROM};
use crate::states::{PseudoharmonicParams, QuantumNumbers};

pub use figures::{figure, Figure, Panel, Series};
pub use request::{MeasureKind, MethodChoice, Normalization, Request, System};
pub use sweep::{SweepParam, SweepScale, SweepSpec};
pub use verify::{CheckOutcome, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;

pub const COMPUTE_HEADER: &str = "measure,system,n,l,m,alpha,beta,lambda,value,abs_err,method";
pub const SWEEP_HEADER: &str = "measure,system,n,l,m,alpha,beta,lambda,param,param_value,value,abs_err,method";

#[derive(Debug, Parser)]
#[command(name = "qcr", version, about = "Rényi entropies and complexity ratios of pseudoharmonic and isospectral states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one measure and print a CSV row.
    Compute(ComputeArgs),
    /// Evaluate a measure on a one-parameter grid.
    Sweep(SweepArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
    /// Regenerate the data and plot of a published figure.
    Reproduce(ReproduceArgs),
}

/// Which potential parameters to use. Without `--molecule` or `--De`, CO.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = System::Pho)]
    pub system: System,
    /// Name from the molecule table (`QCR_MOLECULES` replaces the built-in one).
    #[arg(long, conflicts_with_all = ["de", "re", "mu"])]
    pub molecule: Option<String>,
    #[arg(long = "De", requires_all = ["re", "mu"])]
    pub de: Option<f64>,
    #[arg(long = "De-unit", default_value = "eV", value_parser = parse_unit)]
    pub de_unit: EnergyUnit,
    /// Equilibrium distance in Å, or in reduced units with `--reduced`.
    #[arg(long)]
    pub re: Option<f64>,
    /// Reduced mass in amu, or in reduced units with `--reduced`.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Read `--De --re --mu` as dimensionless with `ħ = 1`.
    #[arg(long, requires = "de")]
    pub reduced: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i32,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    #[arg(long, value_enum)]
    pub measure: MeasureKind,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,
    /// Numerator system of `rcr` and `bound`; defaults to `--system`.
    #[arg(long, value_enum)]
    pub numerator: Option<System>,
    /// Denominator system of `rcr` and `bound`; defaults to `--system`.
    #[arg(long, value_enum)]
    pub denominator: Option<System>,
    /// Principal quantum number of the denominator state, when it differs.
    #[arg(long)]
    pub denominator_n: Option<u32>,
    #[arg(long, value_enum, default_value_t = Normalization::Exact)]
    pub normalization: Normalization,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    /// Grid size; integer parameters default to every integer in range.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = SweepScale::Linear)]
    pub scale: SweepScale,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=11))]
    pub figure: u8,
    #[arg(long)]
    pub out: PathBuf,
    /// Points per continuous axis.
    #[arg(long, default_value_t = figures::DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Normalization::Exact)]
    pub normalization: Normalization,
}

fn parse_unit(s: &str) -> Result<EnergyUnit, String> {
    s.parse()
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain { .. } => EXIT_DOMAIN,
        Error::NoConvergence { .. } | Error::Budget { .. } | Error::Overflow { .. } => EXIT_NO_CONVERGENCE,
        Error::Parse { .. } | Error::Io(_) => EXIT_USAGE,
    }
}

/// Fixed formatting for CSV numbers: 15 significant digits, shortest form.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let fixed = format!("{:.*}", (14 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

impl ModelArgs {
    pub fn params(&self) -> crate::Result<PseudoharmonicParams> {
        match (self.de, self.re, self.mu) {
            (Some(de), Some(re), Some(mu)) if self.reduced => PseudoharmonicParams::new(de, re, mu, 1.0),
            (Some(de), Some(re), Some(mu)) => {
                PseudoharmonicParams::new(self.de_unit.to_ev(de), re, mu * AMU_IN_EV, HBAR_C_EV_ANGSTROM)
            }
            _ => {
                let table = default_table()?;
                find(&table, self.molecule.as_deref().unwrap_or("CO"))?.to_params()
            }
        }
    }

    pub fn quantum_numbers(&self) -> crate::Result<QuantumNumbers> {
        QuantumNumbers::new(self.n, self.l, self.m)
    }
}

/// Build the request described by the flags.
pub fn build_request(model: &ModelArgs, measure: &MeasureArgs) -> crate::Result<Request> {
    let params = model.params()?;
    let qn = model.quantum_numbers()?;
    let mut req = Request::new(measure.measure, model.system, params, qn)
        .with_orders(measure.alpha, measure.beta)
        .with_method(measure.method)
        .with_pair(measure.numerator.unwrap_or(model.system), measure.denominator.unwrap_or(model.system));
    req.lambda = model.lambda;
    req.normalization = measure.normalization;
    if let Some(n) = measure.denominator_n {
        req.denominator_qn = Some(QuantumNumbers::new(n, qn.l, qn.m)?);
    }
    Ok(req)
}

/// The leading columns shared by the compute and sweep schemas.
pub fn row_prefix(req: &Request) -> String {
    let (alpha, beta) = req.effective_orders();
    format!(
        "{},{},{},{},{},{},{},{}",
        req.measure,
        req.system_label(),
        req.qn.n,
        req.qn.l,
        req.qn.m,
        fmt_opt(alpha),
        fmt_opt(beta),
        fmt_opt(req.lambda),
    )
}

pub fn row_suffix(value: &MeasureValue) -> String {
    format!("{},{},{}", fmt_num(value.value), fmt_num(value.abs_error), value.method)
}

/// Evaluate, mapping a series that never converged to a row of NaNs.
pub fn evaluate_row(req: &Request) -> crate::Result<MeasureValue> {
    match req.evaluate() {
        Err(Error::NoConvergence { bound, .. }) => Ok(MeasureValue {
            value: f64::NAN,
            abs_error: if bound.is_finite() { f64::INFINITY } else { bound },
            converged: false,
            ..MeasureValue::exact(f64::NAN)
        }),
        other => other,
    }
}

fn compute(args: &ComputeArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let req = match build_request(&args.model, &args.measure) {
        Ok(r) => r,
        Err(e) => return report(err, &e),
    };
    match evaluate_row(&req) {
        Ok(v) => {
            let _ = writeln!(out, "{COMPUTE_HEADER}");
            let _ = writeln!(out, "{},{}", row_prefix(&req), row_suffix(&v));
            for note in &v.notes {
                let _ = writeln!(err, "note: {note}");
            }
            if v.converged {
                EXIT_OK
            } else {
                let _ = writeln!(err, "warning: evaluation did not reach its tolerance");
                EXIT_NO_CONVERGENCE
            }
        }
        Err(e) => report(err, &e),
    }
}

fn report(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    exit_code(e)
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match &cli.command {
        Command::Compute(a) => compute(a, out, err),
        Command::Sweep(a) => sweep::run(a, out, err),
        Command::Verify(a) => verify::run(a, out, err),
        Command::Reproduce(a) => figures::run(a, out, err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("qcr").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-0.5), "-0.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_num(123456.789), "123456.789");
        assert_eq!(fmt_num(1.5e-7), "1.5e-7");
        assert_eq!(fmt_num(2.0e20), "2e20");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(f64::NAN), "nan");
    }

    #[test]
    fn compute_renyi_matches_closed_form() {
        let (code, out, _) = call(&["compute", "--system", "pho", "--molecule", "CO", "--measure", "renyi", "--alpha", "2"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some(COMPUTE_HEADER));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(&row[..8], &["renyi", "pho", "0", "0", "0", "2", "", ""]);
        let table = crate::molecules::builtin_table();
        let p = find(&table, "CO").unwrap().to_params().unwrap();
        let closed = crate::closedform::renyi_pho_closed(&p, QuantumNumbers::ground(), 2).unwrap();
        assert_eq!(row[8], fmt_num(closed.value));
        assert_eq!(row[10], "closed");
    }

    #[test]
    fn equal_orders_give_unit_grc() {
        let (code, out, _) = call(&["compute", "--measure", "grc", "--alpha", "2", "--beta", "2"]);
        assert_eq!(code, 0);
        assert!(out.lines().nth(1).unwrap().contains(",1,0,exact"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["compute", "--system", "iso", "--lambda", "0.5", "--measure", "renyi", "--alpha", "2"]).0, 3);
        assert_eq!(call(&["compute", "--measure", "nonsense"]).0, 2);
        assert_eq!(call(&["compute", "--measure", "renyi", "--alpha", "2", "--molecule", "XeF"]).0, 3);
        assert_eq!(call(&["compute", "--measure", "renyi"]).0, 3);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn explicit_parameters_and_rcr_pair() {
        let (code, out, _) = call(&[
            "compute", "--De", "3.5", "--re", "0.5", "--mu", "1", "--reduced", "--lambda", "-3", "--measure", "rcr",
            "--numerator", "iso", "--denominator", "pho", "--alpha", "2", "--beta", "3", "--n", "1", "--l", "1", "--m", "-1",
        ]);
        assert_eq!(code, 0, "{out}");
        let row = out.lines().nth(1).unwrap();
        assert!(row.starts_with("rcr,iso/pho,1,1,-1,2,3,-3,"), "{row}");
    }
}
