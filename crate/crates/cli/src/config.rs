//! Run configuration, command payloads and the argument grammar.

use crate::CliError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use diffint::integrate::RegShape;
use diffint::opcalc::ConstantPolicy;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandId {
    Integrate,
    Fourier,
    Laplace,
    Invlaplace,
    Spectrum,
    FtcCheck,
    Selftest,
}

impl fmt::Display for CommandId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommandId::Integrate => "integrate",
            CommandId::Fourier => "fourier",
            CommandId::Laplace => "laplace",
            CommandId::Invlaplace => "invlaplace",
            CommandId::Spectrum => "spectrum",
            CommandId::FtcCheck => "ftc-check",
            CommandId::Selftest => "selftest",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DomainChoice {
    Finite,
    #[value(name = "half+")]
    HalfPlus,
    #[value(name = "half-")]
    HalfMinus,
    Real,
}

/// `auto` tries the exact kernel route, then the series (split on the real
/// line), then the regularized numeric route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteChoice {
    Auto,
    Series,
    Split,
    Kernel,
    Delta,
    W,
    TwoSided,
}

impl fmt::Display for RouteChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegChoice {
    Gaussian,
    Sinc,
}

impl From<RegChoice> for RegShape {
    fn from(r: RegChoice) -> Self {
        match r {
            RegChoice::Gaussian => RegShape::Gaussian,
            RegChoice::Sinc => RegShape::Sinc,
        }
    }
}

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: CommandId,
    pub tol: f64,
    /// Truncation order of series expansions.
    pub order: usize,
    /// Regularization shape; `None` means exact delta calculus where possible.
    pub reg: Option<RegShape>,
    pub route: RouteChoice,
    pub format: OutputFormat,
    pub constant: ConstantPolicy,
    /// Cross-check against the quadrature oracle.
    pub oracle: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: CommandId::Integrate,
            tol: 1e-8,
            order: diffint::DEFAULT_ORDER,
            reg: None,
            route: RouteChoice::Auto,
            format: OutputFormat::Table,
            constant: ConstantPolicy::Symbolic,
            oracle: false,
        }
    }
}

impl RunConfig {
    pub fn new(command: CommandId) -> Self {
        RunConfig { command, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0) {
            return Err(CliError::Config(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.order == 0 {
            return Err(CliError::Config("truncation order must be at least 1".into()));
        }
        Ok(())
    }
}

/// What the command operates on. Bounds, points and parameter values are
/// kept as text and parsed as exact constants when used.
#[derive(Clone, Debug, PartialEq)]
pub struct Payload {
    pub expr: Option<String>,
    pub var: String,
    pub params: Vec<(String, String)>,
    pub domain: DomainChoice,
    pub from: Option<String>,
    pub to: Option<String>,
    pub at: Option<String>,
    /// Spectral lines as `rate:weight` pairs separated by commas.
    pub lines: Option<String>,
}

impl Default for Payload {
    fn default() -> Self {
        Payload {
            expr: None,
            var: "x".into(),
            params: Vec::new(),
            domain: DomainChoice::Finite,
            from: None,
            to: None,
            at: None,
            lines: None,
        }
    }
}

impl Payload {
    pub fn expression(expr: &str) -> Self {
        Payload { expr: Some(expr.to_string()), ..Default::default() }
    }
}

/// `zero`, `symbolic` or `value=c`.
pub fn parse_constant(s: &str) -> Result<ConstantPolicy, String> {
    match s {
        "zero" => Ok(ConstantPolicy::Zero),
        "symbolic" => Ok(ConstantPolicy::Symbolic),
        _ => match s.strip_prefix("value=") {
            Some(v) => crate::lower::constant_from_text(v).map(ConstantPolicy::Prescribed).map_err(|e| e.to_string()),
            None => Err(format!("expected zero, symbolic or value=c, got `{s}`")),
        },
    }
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let k = k.trim();
    if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("bad parameter name `{k}`"));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

#[derive(Debug, Parser)]
#[command(name = "diffint", version, about = "Integrals and integral transforms by differentiation")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Args)]
struct Common {
    /// Error tolerance for numeric routes.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Truncation order of series expansions.
    #[arg(long, default_value_t = diffint::DEFAULT_ORDER)]
    order: usize,
    /// Regularized delta shape (selects the regularized route).
    #[arg(long, value_enum)]
    reg: Option<RegChoice>,
    #[arg(long, value_enum, default_value_t = RouteChoice::Auto)]
    route: RouteChoice,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    /// Integration constants: zero, symbolic (must cancel) or value=c.
    #[arg(long, default_value = "symbolic", value_parser = parse_constant)]
    constant: ConstantPolicy,
    /// Parameter binding name=value, substituted before lowering.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, String)>,
    /// Cross-check against the independent quadrature oracle.
    #[arg(long)]
    oracle: bool,
    /// Name of the integration / transform variable.
    #[arg(long, default_value = "x")]
    var: String,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Definite integral over a finite interval, a half-line or the real line.
    Integrate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = DomainChoice::Finite)]
        domain: DomainChoice,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Fourier transform (2π)^(-1/2) ∫ f(t) e^(ixt) dt at one point.
    Fourier {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        at: String,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Laplace transform of an exponential polynomial (or term-wise of a series).
    Laplace {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Inverse Laplace transform of a proper rational function.
    Invlaplace {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Spectral comb from a heat trace, or heat trace from spectral lines.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Lines as rate:weight pairs, e.g. "1:1,2:1".
        #[arg(long)]
        lines: Option<String>,
        /// Time at which to evaluate the heat trace.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Checks ∫_a^b f' = f(b) − f(a) on the series route.
    FtcCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Runs the acceptance suite and prints a pass/fail matrix.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

fn config_from(command: CommandId, c: Common) -> (RunConfig, Payload) {
    let cfg = RunConfig {
        command,
        tol: c.tol,
        order: c.order,
        reg: c.reg.map(Into::into),
        route: c.route,
        format: c.format,
        constant: c.constant,
        oracle: c.oracle,
    };
    (cfg, Payload { var: c.var, params: c.params, ..Default::default() })
}

/// Parses a full argument vector (program name first).
pub fn parse_args<I, T>(args: I) -> Result<(RunConfig, Payload), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    Ok(match cli.command {
        Sub::Integrate { common, domain, from, to, expr } => {
            let (cfg, p) = config_from(CommandId::Integrate, common);
            (cfg, Payload { expr: Some(expr), domain, from, to, ..p })
        }
        Sub::Fourier { common, at, expr } => {
            let (cfg, p) = config_from(CommandId::Fourier, common);
            (cfg, Payload { expr: Some(expr), at: Some(at), domain: DomainChoice::Real, ..p })
        }
        Sub::Laplace { common, at, expr } => {
            let (cfg, p) = config_from(CommandId::Laplace, common);
            (cfg, Payload { expr: Some(expr), at, ..p })
        }
        Sub::Invlaplace { common, at, expr } => {
            let (cfg, p) = config_from(CommandId::Invlaplace, common);
            (cfg, Payload { expr: Some(expr), at, ..p })
        }
        Sub::Spectrum { common, lines, at, expr } => {
            let (cfg, p) = config_from(CommandId::Spectrum, common);
            (cfg, Payload { expr, lines, at, ..p })
        }
        Sub::FtcCheck { common, from, to, expr } => {
            let (cfg, p) = config_from(CommandId::FtcCheck, common);
            (cfg, Payload { expr: Some(expr), from: Some(from), to: Some(to), ..p })
        }
        Sub::Selftest { common } => config_from(CommandId::Selftest, common),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use diffint::Scalar;

    #[test]
    fn defaults_are_complete() {
        let (cfg, p) = parse_args(["diffint", "integrate", "--from", "0", "--to", "0", "exp(x)"]).unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(p.from.as_deref(), Some("0"));
        assert_eq!(p.domain, DomainChoice::Finite);
    }

    #[test]
    fn flags_parse() {
        let (cfg, p) = parse_args([
            "diffint",
            "integrate",
            "--domain",
            "real",
            "--route",
            "delta",
            "--reg",
            "sinc",
            "--tol",
            "1e-6",
            "--param",
            "t=-2.5",
            "--constant",
            "value=3/2",
            "--format",
            "json",
            "--oracle",
            "(1-cos(t*x))/x^2",
        ])
        .unwrap();
        assert_eq!(cfg.route, RouteChoice::Delta);
        assert_eq!(cfg.reg, Some(RegShape::Sinc));
        assert_eq!(cfg.constant, ConstantPolicy::Prescribed(Scalar::ratio(3, 2)));
        assert_eq!(cfg.format, OutputFormat::Json);
        assert!(cfg.oracle);
        assert_eq!(p.params, vec![("t".to_string(), "-2.5".to_string())]);
        assert_eq!(p.domain, DomainChoice::Real);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse_args(["diffint", "integrate", "--colour", "red", "x"]).is_err());
        assert!(parse_args(["diffint", "integrate", "--route", "fast", "x"]).is_err());
        assert!(parse_args(["diffint", "integrate", "--constant", "maybe", "x"]).is_err());
        assert!(parse_args(["diffint", "frobnicate"]).is_err());
    }
}
