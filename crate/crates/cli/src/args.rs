use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "schurweyl",
    version,
    about = "Outcome law, failure probabilities and oracle checks for Schur-Weyl entanglement concentration"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Outcome law over Young diagrams for n copies.
    Dist(DistArgs),
    /// Probability that the output dimension falls below S.
    Failprob(FailArgs),
    /// Error exponent at rate R, optionally with finite-n values.
    Exponent(ExponentArgs),
    /// Draw outcomes by RSK insertion of i.i.d. words.
    Sample(SampleArgs),
    /// Run oracle and bound verification suites.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SpectrumArgs {
    /// Schmidt coefficients as comma-separated decimals, or `bell` / `uniform`.
    #[arg(long, allow_hyphen_values = true)]
    pub p: String,
    /// Local dimension; required by the presets, checked against explicit lists.
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Args, Debug)]
pub struct DistArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
#[group(id = "threshold", required = true, multiple = false, args = ["rate", "dimension"])]
pub struct FailArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    /// Rate in bits per copy; S = ceil(2^{nR}).
    #[arg(long = "R")]
    pub rate: Option<f64>,
    /// Integer threshold on the output dimension.
    #[arg(long = "S")]
    pub dimension: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ExponentArgs {
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    #[arg(long = "R")]
    pub rate: f64,
    /// Comma-separated copy numbers for the finite-n convergence table.
    #[arg(long, value_delimiter = ',')]
    pub empirical: Option<Vec<usize>>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// RNG seed; a fresh one is drawn and recorded when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(schurweyl::verify::Suite::NAMES))]
    pub suite: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// RNG seed; a fresh one is drawn and recorded when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random input states per oracle suite.
    #[arg(long, default_value_t = 5)]
    pub states: usize,
    /// Monte Carlo samples for the twirl suite.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[command(flatten)]
    pub common: Common,
}
