//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 domain error,
//! 4 numeric failure, 5 batch completed with row errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::curves::{self, CurveTable};
use crate::design::{self, DesignAnalysis, DesignPoint, McResult};
use crate::screen;
use crate::signpolicy::{self, BoundKind, SignPolicy};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;
pub const EXIT_ROW_ERRORS: i32 = 5;

const FORMAT_HELP: &str = "\
Output formats:
  plain  one `key: value` line per quantity, numbers rounded to 7 significant digits
  csv    a header line of keys followed by one line of values at full precision

Exit codes: 0 success, 2 usage/input error, 3 domain error, 4 numeric failure,
5 screen finished but some rows had errors.";

#[derive(Debug, Parser)]
#[command(
    name = "retrodesign",
    version,
    about = "Retrospective design analysis and sign-confident hypothesis testing",
    after_help = FORMAT_HELP
)]
pub struct Cli {
    /// Output format for tau, analyze and sign.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Standard error at which a test reaches the given power at unit effect.
    Tau(TauArgs),
    /// Power, type S probability and exaggeration of a design.
    Analyze(AnalyzeArgs),
    /// Apply the two-level sign rule to a single estimate.
    Sign(SignArgs),
    /// Write plot data as CSV.
    Curves(CurvesArgs),
    /// Apply the sign rule to every row of a CSV file.
    Screen(ScreenArgs),
}

#[derive(Debug, Args)]
pub struct TauArgs {
    /// Two-sided significance level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Power at unit effect.
    #[arg(long)]
    pub power: f64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["power", "effect"])))]
pub struct AnalyzeArgs {
    /// Two-sided significance level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Power at unit effect (design mode).
    #[arg(long, conflicts_with_all = ["effect", "se", "df"])]
    pub power: Option<f64>,
    /// Assumed true effect (retrodesign mode).
    #[arg(long, requires = "se")]
    pub effect: Option<f64>,
    /// Standard error of the estimate (retrodesign mode).
    #[arg(long, requires = "effect")]
    pub se: Option<f64>,
    /// Degrees of freedom of the t reference; omit for normal.
    #[arg(long)]
    pub df: Option<f64>,
    /// Also run the Monte Carlo exaggeration estimate.
    #[arg(long)]
    pub mc: bool,
    #[arg(long, default_value_t = 10_000)]
    pub n_sims: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SignArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub estimate: f64,
    #[arg(long)]
    pub se: f64,
    /// Primary significance level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha1: f64,
    /// Conditional sign-error budget, at most 1/2.
    #[arg(long)]
    pub alpha_s: f64,
    /// Degrees of freedom of the t reference; omit for normal.
    #[arg(long)]
    pub df: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    /// N(1, tau^2) density with rejection cutoffs.
    Density,
    /// Type S probability against power.
    TypeS,
    /// Minimum and expected exaggeration against power.
    Exaggeration,
    /// Rejection and sign-declaration power against effect size.
    SignPower,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[arg(value_enum)]
    pub which: CurveKind,
    /// Two-sided level for density, type-s and exaggeration.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Power for the density table.
    #[arg(long, default_value_t = 0.06)]
    pub power: f64,
    /// Number of density grid points.
    #[arg(long, default_value_t = curves::DEFAULT_DENSITY_POINTS)]
    pub grid_n: usize,
    /// Comma-separated power grid (default 0.06 to 0.80 by 0.01).
    #[arg(long, value_delimiter = ',')]
    pub powers: Option<Vec<f64>>,
    /// Primary level for sign-power.
    #[arg(long, default_value_t = 0.05)]
    pub alpha1: f64,
    /// Comma-separated sign-error budgets for sign-power.
    #[arg(long, value_delimiter = ',', default_values_t = curves::DEFAULT_ALPHA_S)]
    pub alpha_s: Vec<f64>,
    /// Comma-separated effect grid in standard errors (default 0 to 8 by 0.05).
    #[arg(long, value_delimiter = ',')]
    pub effects: Option<Vec<f64>>,
    /// Destination file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScreenArgs {
    /// CSV with header id,estimate,se[,df].
    #[arg(long)]
    pub input: PathBuf,
    /// Primary significance level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha1: f64,
    /// Conditional sign-error budget, at most 1/2.
    #[arg(long)]
    pub alpha_s: f64,
    /// Destination for results; standard output when omitted, in which case
    /// the summary goes to standard error.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Failure of a subcommand, carrying its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) => EXIT_DOMAIN,
            Error::Numeric(_) | Error::UnusableTruncation(_) | Error::Undersampled { .. } => {
                EXIT_NUMERIC
            }
            Error::Input(_) => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("i/o error: {e}"),
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Tau(a) => cmd_tau(a, cli.format, out),
        Command::Analyze(a) => cmd_analyze(a, cli.format, out),
        Command::Sign(a) => cmd_sign(a, cli.format, out),
        Command::Curves(a) => cmd_curves(a, out),
        Command::Screen(a) => cmd_screen(a, out, err),
    }
}

/// A value in a key/value report.
enum Value {
    Num(f64),
    Int(u64),
    Text(String),
    Missing,
}

struct Report(Vec<(&'static str, Value)>);

impl Report {
    fn new() -> Self {
        Report(Vec::new())
    }

    fn num(&mut self, k: &'static str, v: f64) -> &mut Self {
        self.0.push((k, Value::Num(v)));
        self
    }

    fn int(&mut self, k: &'static str, v: u64) -> &mut Self {
        self.0.push((k, Value::Int(v)));
        self
    }

    fn text(&mut self, k: &'static str, v: impl Into<String>) -> &mut Self {
        self.0.push((k, Value::Text(v.into())));
        self
    }

    fn opt(&mut self, k: &'static str, v: Option<f64>) -> &mut Self {
        self.0.push((k, v.map_or(Value::Missing, Value::Num)));
        self
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Plain => {
                for (k, v) in &self.0 {
                    let s = match v {
                        Value::Num(x) => format_sig(*x, 7),
                        Value::Int(n) => n.to_string(),
                        Value::Text(t) => t.clone(),
                        Value::Missing => "NA".to_string(),
                    };
                    writeln!(out, "{k}: {s}")?;
                }
            }
            Format::Csv => {
                let keys: Vec<&str> = self.0.iter().map(|(k, _)| *k).collect();
                let vals: Vec<String> = self
                    .0
                    .iter()
                    .map(|(_, v)| match v {
                        Value::Num(x) => x.to_string(),
                        Value::Int(n) => n.to_string(),
                        Value::Text(t) => t.clone(),
                        Value::Missing => String::new(),
                    })
                    .collect();
                writeln!(out, "{}", keys.join(","))?;
                writeln!(out, "{}", vals.join(","))?;
            }
        }
        Ok(())
    }
}

/// Rounds to `digits` significant digits, in fixed notation for moderate
/// magnitudes and scientific otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..=15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let s = format!("{x:.prec$e}", prec = digits - 1);
        let (mantissa, e) = s.split_once('e').unwrap_or((&s, "0"));
        format!("{}e{e}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn add_analysis(r: &mut Report, a: &DesignAnalysis) {
    r.num("alpha", a.alpha)
        .num("power", a.power)
        .num("tau", a.tau)
        .num("crit_z", a.crit_z)
        .num("min_ratio", a.min_ratio)
        .num("type_s", a.type_s)
        .num("exaggeration", a.exaggeration)
        .num("pos_mean", a.pos_mean)
        .num("neg_mean", a.neg_mean);
}

fn add_mc(r: &mut Report, m: &McResult) {
    r.num("mc_power", m.power)
        .num("mc_type_s", m.type_s)
        .num("mc_exaggeration", m.exaggeration)
        .num("mc_exaggeration_se", m.exaggeration_se)
        .int("mc_n_significant", m.n_significant as u64)
        .int("n_sims", m.n_sims as u64)
        .int("seed", m.seed);
}

fn cmd_tau(a: &TauArgs, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let d = DesignPoint::new(a.alpha, a.power)?;
    let analysis = design::exaggeration_analytic(&d)?;
    let mut r = Report::new();
    add_analysis(&mut r, &analysis);
    r.write(format, out)?;
    Ok(EXIT_OK)
}

fn cmd_analyze(a: &AnalyzeArgs, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let df = a.df.unwrap_or(f64::INFINITY);
    let mut r = Report::new();
    if let Some(power) = a.power {
        let d = DesignPoint::new(a.alpha, power)?;
        let analysis = design::exaggeration_analytic(&d)?;
        add_analysis(&mut r, &analysis);
        if a.mc {
            let m = design::retrodesign_mc(1.0, analysis.tau, a.alpha, df, a.n_sims, a.seed)?;
            add_mc(&mut r, &m);
        }
    } else {
        // clap guarantees both are present in this mode
        let (effect, se) = (a.effect.unwrap_or(f64::NAN), a.se.unwrap_or(f64::NAN));
        let (power, type_s) = design::retrodesign_tails(effect, se, a.alpha, df)?;
        r.num("effect", effect).num("se", se);
        if df.is_infinite() {
            let analysis = design::analysis_at_tau(se / effect, a.alpha)?;
            add_analysis(&mut r, &analysis);
        } else {
            r.num("alpha", a.alpha)
                .num("df", df)
                .num("power", power)
                .num("type_s", type_s);
        }
        if a.mc {
            let m = design::retrodesign_mc(effect, se, a.alpha, df, a.n_sims, a.seed)?;
            add_mc(&mut r, &m);
        }
    }
    r.write(format, out)?;
    Ok(EXIT_OK)
}

fn cmd_sign(a: &SignArgs, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let policy = SignPolicy::new(a.alpha1, a.alpha_s)?;
    let df = a.df.unwrap_or(f64::INFINITY);
    let rep = signpolicy::decide(a.estimate, a.se, df, &policy)?;
    let mut r = Report::new();
    r.text("decision", rep.decision.label())
        .num("z", rep.z)
        .num("p1", rep.p1)
        .opt("p_sign", rep.p_sign)
        .num("alpha1", policy.alpha1())
        .num("alpha_s", policy.alpha_s())
        .num("alpha2", policy.alpha2())
        .num("sign_error_bound", signpolicy::sign_error_bound(&policy, BoundKind::Refined))
        .num("crude_bound", signpolicy::sign_error_bound(&policy, BoundKind::Crude));
    r.write(format, out)?;
    Ok(EXIT_OK)
}

fn build_curve(a: &CurvesArgs) -> Result<CurveTable, Error> {
    let powers = || a.powers.clone().unwrap_or_else(curves::default_power_grid);
    match a.which {
        CurveKind::Density => curves::density_cutoff_table(a.alpha, a.power, a.grid_n),
        CurveKind::TypeS => curves::type_s_curve(a.alpha, &powers()),
        CurveKind::Exaggeration => curves::exaggeration_curve(a.alpha, &powers()),
        CurveKind::SignPower => {
            let effects = a.effects.clone().unwrap_or_else(curves::default_effect_grid);
            curves::sign_power_curves(a.alpha1, &a.alpha_s, &effects)
        }
    }
}

fn cmd_curves(a: &CurvesArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let table = build_curve(a)?;
    match &a.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write_csv(&mut w)?;
            w.flush()?;
        }
        None => table.write_csv(out)?,
    }
    Ok(EXIT_OK)
}

fn cmd_screen(a: &ScreenArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let policy = SignPolicy::new(a.alpha1, a.alpha_s)?;
    let file = File::open(&a.input).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("cannot open {}: {e}", a.input.display()),
    })?;
    let rows = screen::read_records(BufReader::new(file))?;
    let outcome = screen::screen_rows(rows, &policy);

    for e in outcome.errors() {
        writeln!(err, "{e}")?;
    }
    match &a.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            outcome.write_csv(&mut w)?;
            w.flush()?;
            writeln!(out, "{}", outcome.summary)?;
        }
        None => {
            outcome.write_csv(&mut *out)?;
            writeln!(err, "{}", outcome.summary)?;
        }
    }
    Ok(if outcome.summary.n_errors > 0 {
        EXIT_ROW_ERRORS
    } else {
        EXIT_OK
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("retrodesign").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(3.394_506_576_255_3, 7), "3.394507");
        assert_eq!(format_sig(0.201_342_589_3, 7), "0.2013426");
        assert_eq!(format_sig(6.653_110_634, 7), "6.653111");
        assert_eq!(format_sig(1234.5678, 7), "1234.568");
        assert_eq!(format_sig(2.5e-9, 7), "2.5e-9");
        assert_eq!(format_sig(0.05, 7), "0.05");
        assert_eq!(format_sig(-1200.0, 7), "-1200");
        assert_eq!(format_sig(0.0, 7), "0");
    }

    #[test]
    fn tau_plain() {
        let (code, out, _) = run_args(&["tau", "--alpha", "0.05", "--power", "0.06"]);
        assert_eq!(code, 0);
        assert!(out.contains("tau: 3.394507"), "{out}");
    }

    #[test]
    fn tau_domain_error() {
        let (code, _, err) = run_args(&["tau", "--alpha", "0.05", "--power", "0.05"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("power must exceed alpha"));
    }

    #[test]
    fn analyze_conflict_is_usage_error() {
        let (code, _, _) = run_args(&["analyze", "--power", "0.5", "--effect", "1", "--se", "1"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_args(&["analyze"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_args(&["analyze", "--effect", "1"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn sign_negative_estimate() {
        let (code, out, _) = run_args(&[
            "sign", "--estimate", "-4.2", "--se", "1", "--alpha-s", "0.001",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with("decision: significant_neg\n"));
    }

    #[test]
    fn csv_report() {
        let (code, out, _) = run_args(&[
            "--format", "csv", "sign", "--estimate", "1", "--se", "1", "--alpha-s", "0.1",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(
            lines[0],
            "decision,z,p1,p_sign,alpha1,alpha_s,alpha2,sign_error_bound,crude_bound"
        );
        assert!(lines[1].starts_with("not_significant,1,"));
        assert!(lines[1].contains(",,"));
    }

    #[test]
    fn help_is_success() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("Exit codes"));
    }
}
