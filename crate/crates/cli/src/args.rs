use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lpsas_core::exact::Rational;
use lpsas_core::paracontact::{ConnectionParams, Preset};

#[derive(Debug, Parser)]
#[command(name = "lpsas", version, about = "Exact LP-Sasakian frame geometry, general connections and eta-Ricci solitons")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame invariants, paracontact axioms, LP-Sasakian conditions and identities.
    Verify { file: PathBuf },
    /// Connection coefficients, torsion and metricity.
    Connection {
        file: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Curvature components.
    Curvature {
        file: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Ricci tensor and Ricci operator.
    Ricci {
        file: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Scalar curvature.
    Scalar {
        file: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Solve the soliton equation for (alpha, beta, gamma, delta, epsilon).
    Soliton {
        file: PathBuf,
        /// `xi` or comma-separated frame components, e.g. `1,0,0,1/2`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Closed forms against direct computation over a parameter grid.
    Crosscheck {
        file: PathBuf,
        /// Values per parameter; the grid has N x N points.
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..=64))]
        grid: u16,
        /// Add the four named presets to the grid.
        #[arg(long)]
        include_presets: bool,
        /// Worker threads (default: all cores). Output does not depend on it.
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: Option<u16>,
    },
    /// Theorem checkers at one parameter point.
    Theorems {
        file: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Write the builtin four-dimensional example as a spec file.
    PaperExample {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Parameter a, e.g. `1/2`.
    #[arg(long, allow_hyphen_values = true, requires = "b", conflicts_with = "preset")]
    pub a: Option<Rational>,
    /// Parameter b.
    #[arg(long, allow_hyphen_values = true, requires = "a", conflicts_with = "preset")]
    pub b: Option<Rational>,
    #[arg(long, value_parser = parse_preset)]
    pub preset: Option<Preset>,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: lpsas_core::paracontact::UnknownPreset| e.to_string())
}

impl ParamArgs {
    /// `None` means the Levi-Civita connection.
    pub fn params(&self) -> Option<ConnectionParams> {
        match (&self.a, &self.b, self.preset) {
            (_, _, Some(p)) => Some(p.params()),
            (Some(a), Some(b), None) => Some(ConnectionParams::new(a.clone(), b.clone())),
            _ => None,
        }
    }

    pub fn params_or_zero(&self) -> ConnectionParams {
        self.params().unwrap_or_else(ConnectionParams::zero)
    }
}
