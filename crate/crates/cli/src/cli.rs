use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "qherm",
    version,
    about = "Hermitian-type varieties, their codes and secret sharing schemes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Command {
    /// Build a variety or compute its intersection spectra.
    Variety {
        #[command(subcommand)]
        action: VarietyCmd,
    },
    /// Projective code of a variety.
    Code {
        #[command(subcommand)]
        action: CodeCmd,
    },
    /// Secret sharing on the dual code.
    Sss {
        #[command(subcommand)]
        action: SssCmd,
    },
    /// Run the acceptance suite.
    VerifyAll,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarietyCmd {
    /// Points, size and parameter diagnostics.
    Build,
    /// Hyperplane intersection sizes against the predicted support.
    Spectrum,
    /// Line intersection sizes.
    Lines,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeCmd {
    /// Weight distribution, from hyperplanes and by brute force.
    Weights,
    /// All three minimality criteria, cross-checked.
    Minimality,
    /// Common divisor of the nonzero weights.
    Divisibility,
    /// Generalized Hamming weight `d_k` for `--level k`.
    Dk,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SssCmd {
    /// Minimal access sets.
    Access,
    /// Deal `--secret` with `--seed`.
    Deal,
    /// Recover from `--subset` and `--shares`.
    Recover,
    /// Per-participant membership counts.
    Democracy,
    /// Develop the starters of `--fixture` under its generators.
    Develop,
    /// Label-free checks on the shipped example fixture.
    VerifyExample,
}

impl Command {
    pub fn name(self) -> String {
        match self {
            Command::Variety { action } => format!("variety {}", action.label()),
            Command::Code { action } => format!("code {}", action.label()),
            Command::Sss { action } => format!("sss {}", action.label()),
            Command::VerifyAll => "verify-all".into(),
        }
    }
}

impl VarietyCmd {
    pub fn label(self) -> &'static str {
        match self {
            VarietyCmd::Build => "build",
            VarietyCmd::Spectrum => "spectrum",
            VarietyCmd::Lines => "lines",
        }
    }
}

impl CodeCmd {
    pub fn label(self) -> &'static str {
        match self {
            CodeCmd::Weights => "weights",
            CodeCmd::Minimality => "minimality",
            CodeCmd::Divisibility => "divisibility",
            CodeCmd::Dk => "dk",
        }
    }
}

impl SssCmd {
    pub fn label(self) -> &'static str {
        match self {
            SssCmd::Access => "access",
            SssCmd::Deal => "deal",
            SssCmd::Recover => "recover",
            SssCmd::Democracy => "democracy",
            SssCmd::Develop => "develop",
            SssCmd::VerifyExample => "verify-example",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarietyArg {
    B,
    Hermitian,
    QuasiHermitian,
    ConeF,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every command. Serialized into each report.
#[derive(Args, Debug, Clone, Serialize)]
pub struct Opts {
    /// Order of the subfield; the geometry lives over GF(q^2).
    #[arg(long, global = true, default_value_t = 3)]
    pub q: u32,
    /// Projective dimension.
    #[arg(long, global = true, default_value_t = 3)]
    pub r: usize,
    /// Integer encoding of alpha in GF(q^2).
    #[arg(long, global = true, requires = "beta")]
    pub alpha: Option<u32>,
    /// Integer encoding of beta in GF(q^2).
    #[arg(long, global = true, requires = "alpha")]
    pub beta: Option<u32>,
    /// Use the first admissible (alpha, beta) in encoding order.
    #[arg(long, global = true, conflicts_with_all = ["alpha", "beta"])]
    pub auto_params: bool,
    #[arg(long, global = true, value_enum, default_value_t = VarietyArg::B)]
    pub variety: VarietyArg,
    /// Canonical point index of P0; defaults to the first point of the variety.
    #[arg(long, global = true)]
    pub p0: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads.
    #[arg(long, global = true)]
    pub parallel: Option<usize>,
    /// Work cap for exhaustive enumerations; 0 refuses everything.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Integer encoding of the secret.
    #[arg(long, global = true, default_value_t = 0)]
    pub secret: u32,
    #[arg(long, global = true, default_value_t = 1)]
    pub level: usize,
    /// Generators and starters; defaults to the shipped example.
    #[arg(long, global = true)]
    pub fixture: Option<PathBuf>,
    /// Comma-separated participant indices.
    #[arg(long, global = true)]
    pub subset: Option<String>,
    /// Comma-separated share encodings, in the order of `--subset`.
    #[arg(long, global = true)]
    pub shares: Option<String>,
    /// Modulus of GF(q^2) overriding the Conway table: comma-separated
    /// coefficients `c0,..,c(m-1)` of `x^m + ... + c0`.
    #[arg(long, global = true)]
    pub modulus: Option<String>,
}
