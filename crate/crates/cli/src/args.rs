use clap::{Args, Parser, Subcommand, ValueEnum};
use qtmoments::ring::parse_rational;
use qtmoments::{NestingMode, Rational, ScalarGauge};

#[derive(Debug, Parser)]
#[command(name = "qtmoments", version, about = "Moments of the (q,t)-Poisson family, computed five ways")]
pub struct Cli {
    /// Worker threads for enumeration commands.
    #[arg(long, global = true, env = "QTMOMENTS_JOBS")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The n-th moment by one or all routes.
    Moments(MomentsArgs),
    /// List the set partitions of [n] with their statistics.
    Partitions(PartitionsArgs),
    /// Orthogonal polynomials from a three-term recurrence.
    Charlier(CharlierArgs),
    /// Card arrangements of contributor words.
    Cards(CardsArgs),
    /// Continued-fraction layout and series.
    Cfrac(CfracArgs),
    /// (q,t)-binomial moments and the Poisson limit.
    Binomial(BinomialArgs),
    /// Run the cross-check battery.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Covered,
}

impl From<ModeArg> for NestingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => NestingMode::Strict,
            ModeArg::Covered => NestingMode::CoveredSingleton,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GaugeArg {
    Identity,
    Tpower,
}

impl From<GaugeArg> for ScalarGauge {
    fn from(g: GaugeArg) -> Self {
        match g {
            GaugeArg::Identity => ScalarGauge::Identity,
            GaugeArg::Tpower => ScalarGauge::TPowerN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Partitions,
    Operator,
    Cards,
    Motzkin,
    Cfrac,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Output {
    Json,
    Csv,
    #[default]
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Strict,
    Tgauge,
    Qcharlier,
    Ejsmont,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Mode and gauge. Either one fixes the other unless both are given.
#[derive(Debug, Clone, Args)]
pub struct ModeGauge {
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    pub gauge: Option<GaugeArg>,
    /// Accept a mode and gauge that do not belong together.
    #[arg(long)]
    pub allow_mismatch: bool,
}

/// Optional evaluation point; all three or none.
#[derive(Debug, Clone, Args)]
pub struct Point {
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub q: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    pub t: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    pub lambda: Option<Rational>,
}

#[derive(Debug, Clone, Args)]
pub struct MomentsArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub mode_gauge: ModeGauge,
    #[arg(long, value_enum, default_value = "all")]
    pub method: Method,
    #[command(flatten)]
    pub point: Point,
    #[arg(long, value_enum, default_value = "pretty")]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct PartitionsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "strict")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "pretty")]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CharlierArgs {
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value = "strict")]
    pub family: Family,
    #[arg(long, value_enum, default_value = "pretty")]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CardsArgs {
    #[arg(long, required_unless_present = "word")]
    pub n: Option<usize>,
    /// A single contributor in display order, e.g. AASNCC.
    #[arg(long)]
    pub word: Option<String>,
    #[command(flatten)]
    pub mode_gauge: ModeGauge,
    #[arg(long, value_enum, default_value = "json")]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CfracArgs {
    #[arg(long)]
    pub order: usize,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_enum, default_value = "strict")]
    pub family: Family,
    #[arg(long, value_enum, default_value = "pretty")]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct BinomialArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub q: Rational,
    #[arg(long, value_parser = rational_arg)]
    pub t: Rational,
    #[arg(long, required_unless_present = "poisson_limit")]
    pub m: Option<u64>,
    #[arg(long, value_parser = rational_arg, required_unless_present = "poisson_limit")]
    pub p: Option<Rational>,
    /// Compare with the Charlier moments along m = 10, 100, 1000 at p = lambda/m.
    #[arg(long, requires = "lambda")]
    pub poisson_limit: bool,
    #[arg(long, value_parser = rational_arg)]
    pub lambda: Option<Rational>,
    #[arg(long, value_enum, default_value = "pretty")]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// `all` or a comma-separated list of criterion numbers.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, default_value_t = 10)]
    pub cards_n_max: usize,
    #[arg(long, value_enum, default_value = "pretty")]
    pub output: Output,
}
