use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmeter_core::StateEnsemble;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "qmeter",
    version,
    about = "Entropy reduction and mutual information of finite-dimensional quantum measurements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy reduction of a state under a measurement, by both routes.
    Compute(ComputeArgs),
    /// Efficiency and irreducibility of an instrument.
    Classify(ClassifyArgs),
    /// Run randomized property checks.
    Verify(VerifyArgs),
    /// Write the bundled example documents into a directory.
    Fixtures { dir: PathBuf },
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the machine-readable report to this file.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Document holding the objects.
    pub doc: PathBuf,
    #[arg(long)]
    pub state: String,
    /// Name of a measurement or instrument.
    #[arg(long)]
    pub measurement: String,
    /// Accept instruments that are not efficient; mutual-information
    /// quantities that need efficiency are then omitted.
    #[arg(long)]
    pub general: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    pub doc: PathBuf,
    /// Name of an instrument or measurement.
    #[arg(long)]
    pub instrument: String,
    /// Pure inputs sampled for the purity cross-check.
    #[arg(long, default_value_t = 64)]
    pub trials: usize,
    #[arg(long, env = "QMETER_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ensemble {
    HaarPure,
    GinibreMixed,
    RankConstrained,
}

impl From<Ensemble> for StateEnsemble {
    fn from(e: Ensemble) -> Self {
        match e {
            Ensemble::HaarPure => StateEnsemble::HaarPure,
            Ensemble::GinibreMixed => StateEnsemble::GinibreMixed,
            Ensemble::RankConstrained => StateEnsemble::RankConstrained,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    /// Qubit instrument with negative entropy reduction on pure states.
    Reducible,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `all` (theorem properties), `full` (all checks) or one property name.
    #[arg(default_value = "all")]
    pub suite: String,
    #[arg(long, env = "QMETER_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Dimension range, `lo..hi` inclusive, or a single value.
    #[arg(long, default_value = "2..6", value_parser = parse_range)]
    pub dims: (usize, usize),
    /// Outcome-count range, `lo..hi` inclusive, or a single value.
    #[arg(long, default_value = "1..6", value_parser = parse_range)]
    pub outcomes: (usize, usize),
    #[arg(long, default_value_t = 1.0)]
    pub tolerance_scale: f64,
    /// State ensemble; pure states by default with `--fixture`, mixed
    /// Ginibre states otherwise.
    #[arg(long, value_enum)]
    pub ensemble: Option<Ensemble>,
    /// Check a bundled instrument instead of random ones (nonnegativity only).
    #[arg(long, value_enum)]
    pub fixture: Option<Fixture>,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// `a..b`, `a..=b`, `a-b` or `a`, all inclusive.
pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{t}` is not a nonnegative integer"))
    };
    let (lo, hi) = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once('-') {
        (num(a)?, num(b)?)
    } else {
        let v = num(s)?;
        (v, v)
    };
    if lo == 0 || lo > hi {
        return Err(format!("empty or zero range `{s}`"));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_forms() {
        assert_eq!(parse_range("2..6"), Ok((2, 6)));
        assert_eq!(parse_range("2..=6"), Ok((2, 6)));
        assert_eq!(parse_range("3-4"), Ok((3, 4)));
        assert_eq!(parse_range("4"), Ok((4, 4)));
        assert!(parse_range("6..2").is_err());
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
