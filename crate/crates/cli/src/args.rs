//! Command-line surface. Every numeric parameter is optional at the clap
//! level so a key=value config file can supply it; flags override the file.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "zetalab",
    version,
    about = "Numerical laboratory for zeta sums, moments, and contour experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evaluate zeta at sigma + it, or Hardy Z on the critical line
    Zeta(ZetaArgs),
    /// Partial sums of n^(-it) up to Y at one or more ordinates
    Zsum(ZsumArgs),
    /// Moment of the length-Y zeta sum over [T, 2T]
    Moment(MomentArgs),
    /// Shifted moment of zeta products on the critical line
    Shifted(ShiftedArgs),
    /// Moment of |zeta| over the short windows [T, T+E] and [T-E, T]
    Window(WindowArgs),
    /// Truncated Perron contour for the partial sum, with error terms
    Perron(PerronArgs),
    /// Smooth cutoff diagnostics: Mellin transform and decay constants
    Smooth(SmoothArgs),
    /// Scaling study of S_m against T Y^m (log T)^((m-1)^2)
    Scaling(ScalingArgs),
    /// Run the invariant suites and report pass/fail per property
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
pub struct CommonArgs {
    /// Tolerance: zeta evaluation target, or refinement check for moments
    #[arg(long)]
    pub tol: Option<f64>,
    /// Arithmetic for point evaluations (zeta and zsum only)
    #[arg(long, value_enum)]
    pub precision: Option<Precision>,
    /// Omit timing metadata so identical runs emit identical bytes
    #[arg(long)]
    pub deterministic: bool,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<OutFormat>,
    /// Output path; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to ZETALAB_THREADS, then all cores
    #[arg(long)]
    pub threads: Option<usize>,
    /// key=value file supplying defaults for this command's flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Lift the desk-scale caps on T, Y, and grid size
    #[arg(long = "unsafe-scale")]
    pub unsafe_scale: bool,
}

#[derive(Args, Clone)]
pub struct ZetaArgs {
    /// Ordinate t (grid start when --count > 1)
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Real part of s
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub count: Option<usize>,
    /// Grid spacing (required when --count > 1)
    #[arg(long)]
    pub dt: Option<f64>,
    /// Report the real Hardy Z function instead of zeta
    #[arg(long)]
    pub hardy: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Clone)]
pub struct ZsumArgs {
    /// Ordinate t (grid start when --count > 1)
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Sum length
    #[arg(long = "Y")]
    pub y: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub count: Option<usize>,
    /// Grid spacing (required when --count > 1)
    #[arg(long)]
    pub dt: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Clone)]
pub struct MomentArgs {
    /// Half the power: the integrand is |sum|^(2m)
    #[arg(long)]
    pub m: Option<f64>,
    /// Window start; the integral runs over [T, 2T]
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Sum length
    #[arg(long = "Y")]
    pub y: Option<f64>,
    /// Quadrature step; must respect the aliasing rule
    #[arg(long)]
    pub dt: Option<f64>,
    /// Cutoff sharpness; switches to the smoothed sum when present
    #[arg(long = "U")]
    pub u: Option<f64>,
    /// Cutoff derivative-growth label (recorded, not used numerically)
    #[arg(long = "C-exp")]
    pub c_exp: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Clone)]
pub struct ShiftedArgs {
    /// Window start; the integral runs over [T, 2T]
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Exponents a_j, comma separated
    #[arg(long, value_delimiter = ',')]
    pub a: Option<Vec<f64>>,
    /// Shifts b_j, comma separated
    #[arg(long, value_delimiter = ',')]
    pub b: Option<Vec<f64>>,
    /// Quadrature step; must respect the aliasing rule
    #[arg(long)]
    pub dt: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Clone)]
pub struct WindowArgs {
    /// Half the power: the integrand is |zeta|^(2m), m >= 2
    #[arg(long)]
    pub m: Option<f64>,
    /// Window anchor
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Window length, at least 10
    #[arg(long = "E")]
    pub e: Option<f64>,
    /// Which side of the anchor to integrate
    #[arg(long, value_enum)]
    pub sign: Option<SignArg>,
    /// Quadrature step; must respect the aliasing rule
    #[arg(long)]
    pub dt: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Clone)]
pub struct PerronArgs {
    /// Sum length; also the contour truncation height
    #[arg(long = "Y")]
    pub y: Option<f64>,
    /// Ordinate shift of the integrand
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Clone)]
pub struct SmoothArgs {
    /// Cutoff sharpness, > 2
    #[arg(long = "U")]
    pub u: Option<f64>,
    /// Cutoff derivative-growth label (recorded, not used numerically)
    #[arg(long = "C-exp")]
    pub c_exp: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Clone)]
pub struct ScalingArgs {
    /// Half the power; the scaling study needs m > 2
    #[arg(long)]
    pub m: Option<f64>,
    /// Window starts T, comma separated
    #[arg(long = "T-list", value_delimiter = ',')]
    pub t_list: Option<Vec<f64>>,
    /// Sum length per T: "sqrt(T)", "cbrt(T)", or a fixed number
    #[arg(long = "Y-rule")]
    pub y_rule: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Clone)]
pub struct VerifyArgs {
    /// Which suite to run
    #[arg(long, value_enum)]
    pub suite: Option<SuiteArg>,
    /// Testing aid: corrupt the named check to exercise the failure path
    #[arg(long = "inject-fault", hide = true)]
    pub inject_fault: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    Extended,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteArg {
    Fast,
    Full,
}

impl FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            _ => Err(format!("expected double or extended, got {s:?}")),
        }
    }
}

impl FromStr for OutFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutFormat::Csv),
            "json" => Ok(OutFormat::Json),
            _ => Err(format!("expected csv or json, got {s:?}")),
        }
    }
}

impl FromStr for SignArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plus" => Ok(SignArg::Plus),
            "minus" => Ok(SignArg::Minus),
            _ => Err(format!("expected plus or minus, got {s:?}")),
        }
    }
}

impl FromStr for SuiteArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fast" => Ok(SuiteArg::Fast),
            "full" => Ok(SuiteArg::Full),
            _ => Err(format!("expected fast or full, got {s:?}")),
        }
    }
}
