mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use freqcube_core::Error;

/// Testing sets, bitrades and frequency hypercubes.
#[derive(Parser, Debug)]
#[command(name = "freqcube", version, about)]
struct Cli {
    /// Print a plain-text table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Node cap for every backtracking search.
    #[arg(long, global = true, env = "FREQCUBE_NODE_CAP")]
    node_cap: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a point set from a named family or a JSON construction spec.
    Construct(ConstructArgs),
    /// Certify a point set as supertesting or testing.
    Certify(CertifyArgs),
    /// Complete partial values on a testing set to a frequency cube.
    Reconstruct(ReconstructArgs),
    /// Count frequency cubes by exhaustive enumeration.
    Count(ParamArgs),
    /// Smallest supertesting set up to a size bound.
    SearchMin(SearchMinArgs),
    /// Code-theoretic bounds on binary testing sets for affine functions.
    Bounds(BoundsArgs),
    /// Dimension of the space of arrays with zero sum on every k-face.
    Dim(DimArgs),
    /// Testing-set sizes and the resulting bound on the number of cubes.
    Report(ReportArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Baseline,
    ThreeCube,
    MinimalThreeCube,
    Q22Recursive,
    MainTheorem,
    Hamming,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    family: Option<Family>,
    /// JSON construction spec file (supports composite families).
    #[arg(long)]
    spec: Option<std::path::PathBuf>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Hamming family: add the zero point.
    #[arg(long)]
    affine: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CertifyMode {
    Supertesting,
    Testing,
    Affine,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long, value_enum)]
    mode: CertifyMode,
    /// Point set JSON, or the output of `construct`.
    #[arg(long)]
    set: std::path::PathBuf,
    #[arg(long)]
    k: usize,
    /// Symbol multiplicities for testing mode, e.g. `1,1,1`.
    #[arg(long, value_delimiter = ',')]
    lambdas: Vec<u32>,
    /// Testing mode: sample this many random members instead of enumerating.
    #[arg(long, requires = "seed")]
    sample_draws: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Baseline,
    Csp,
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    /// Partial cube JSON: `{q, n, m, points, values}`.
    #[arg(long)]
    partial: std::path::PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    lambdas: Vec<u32>,
    #[arg(long, value_enum, default_value = "csp")]
    method: Method,
}

#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    lambdas: Vec<u32>,
}

#[derive(Args, Debug)]
struct SearchMinArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    bound: usize,
    /// Certify every class, without the plane/line necessary conditions.
    #[arg(long)]
    no_filters: bool,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    /// Number of essential variables.
    #[arg(long)]
    k: usize,
}

#[derive(Args, Debug)]
struct DimArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ReportKind {
    Cardinality,
    Bound,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long, value_enum, default_value = "cardinality")]
    kind: ReportKind,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    n: usize,
    /// Face dimension (cardinality report only).
    #[arg(long, default_value_t = 1)]
    k: usize,
}

/// Ways a command can end other than success.
#[derive(Debug)]
pub enum Failure {
    /// The certified answer is negative; the document is still printed.
    Negative(serde_json::Value),
    Usage(String),
    Inconclusive(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } | Error::BudgetExceeded(_) => Failure::Inconclusive(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<Error>() {
            Ok(core) => core.into(),
            Err(e) => Failure::Usage(format!("{e:#}")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().expect("thread pool set once");
    }
    match commands::run(&cli) {
        Ok(doc) => {
            output::emit(&doc, cli.pretty);
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(doc)) => {
            output::emit(&doc, cli.pretty);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            ExitCode::from(3)
        }
    }
}
