use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

pub const PRECISION_ENV: &str = "PADIC_SPECTRA_PRECISION";

#[derive(Debug, Parser)]
#[command(name = "padic-spectra", version, about = "Spectra of p-adic integral operators with polynomial kernels")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Eigenvalue arithmetic.
    #[arg(long, global = true, value_enum, env = PRECISION_ENV)]
    pub precision: Option<PrecisionMode>,
    /// Tolerance override for zero finding and experiment checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Seed override for randomized experiments.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML file with flag defaults and `[[experiment]]` tables.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecisionMode {
    Double,
    DoubleDouble,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local zeta integral, exact in t = p^{-s} or at one s.
    Zeta(ZetaArgs),
    /// Eigenvalues of the truncated operator.
    Spectrum(SpectrumArgs),
    /// Samples of a characteristic function.
    Charfn(CharfnArgs),
    /// Zeros of a characteristic function in a disk.
    Zeros(ZerosArgs),
    /// Run an experiment, a criterion, or the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ZetaArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// Coefficients of Q, constant term first.
    #[arg(long = "Q", value_name = "c0,c1,...")]
    pub q: Option<String>,
    /// Character as "level,index".
    #[arg(long)]
    pub chi: Option<String>,
    #[arg(long, value_name = "re[,im]", allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long)]
    pub exact: bool,
    /// Also emit the Laurent profile Z_0.
    #[arg(long)]
    pub profile: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// Homogeneous degree.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long = "Q", value_name = "c0,c1,...")]
    pub q: Option<String>,
    #[arg(long)]
    pub chi: Option<String>,
    #[arg(long, value_name = "re[,im]", allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Truncation size.
    #[arg(long = "N")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Number of eigenvalues reported; all by default.
    #[arg(long)]
    pub count: Option<usize>,
    /// Include the matrix entries.
    #[arg(long)]
    pub matrix: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FnKind {
    /// det(1 - u A_N) of the truncated operator.
    Kernel,
    /// Hahn-Exton J(a, q, u).
    #[value(name = "J")]
    J,
    /// E(a, b; q, u).
    #[value(name = "E")]
    E,
    /// K(a, q, d, u).
    #[value(name = "K")]
    K,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FnArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long = "fn", value_enum)]
    pub func: Option<FnKind>,
    #[arg(long, value_name = "re[,im]", allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, value_name = "re[,im]", allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Base of J, E or K.
    #[arg(long = "q", value_name = "re[,im]", allow_hyphen_values = true)]
    pub base: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CharfnArgs {
    #[command(flatten)]
    pub f: FnArgs,
    /// Sample points "re,im;re,im;...".
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    /// Otherwise sample this many points on |u| = radius.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ZerosArgs {
    #[command(flatten)]
    pub f: FnArgs,
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    /// Experiment kind, criterion id (A1..A11), config experiment name, or "all".
    pub name: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Parameter override "key=value", repeatable.
    #[arg(long = "set", value_name = "key=value")]
    pub set: Vec<String>,
}
