use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod check;
mod commands;
mod report;
mod svg;

use report::Format;

#[derive(Parser)]
#[command(name = "clusterlin", version, about = "Linear extensions of consecutive-pattern cluster posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
pub struct Shape {
    /// Chain length m
    #[arg(long)]
    pub m: usize,
    /// Lower gluing position a (1 <= a < b)
    #[arg(long)]
    pub a: usize,
    /// Upper gluing position b (b <= m)
    #[arg(long)]
    pub b: usize,
}

#[derive(Args, Clone)]
pub struct Output {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Clone)]
pub struct Plot {
    /// Also write a static SVG plot to this path
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    /// The cluster poset P_n
    P,
    /// The boundary-completed poset Q_n
    Q,
}

impl From<VariantArg> for clusterlin::Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::P => clusterlin::Variant::P,
            VariantArg::Q => clusterlin::Variant::Q,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Iterated polynomial integration over the rationals
    Exact,
    /// Dynamic programming over order ideals (at most 24 elements)
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Number of linear extensions of P_n or Q_n
    Count {
        #[command(flatten)]
        shape: Shape,
        /// Number of chains
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::P)]
        variant: VariantArg,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[command(flatten)]
        output: Output,
    },
    /// Growth constant c(m,a,b) and the coefficient of n log n
    Constant {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        output: Output,
    },
    /// Empirical constants (ln e(P_n) - leading n ln n)/n for n = 1..=n-max
    Fit {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Exact counts of P_n^{m,a,b} against P_n^{m,a2,b2} for n = 1..=n-max
    Compare {
        #[command(flatten)]
        shape: Shape,
        /// Second lower gluing position
        #[arg(long)]
        a2: usize,
        /// Second upper gluing position (b2 - a2 = b - a)
        #[arg(long)]
        b2: usize,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Table of f and f' on an equally spaced grid of [0,1]
    Profile {
        #[command(flatten)]
        shape: Shape,
        /// Number of grid cells (the table has points + 1 rows)
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Mean normalized spine heights in random linear extensions of P_n
    Sample {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 25)]
        n: usize,
        /// Thinned draws, split over 8 independent chains
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Steps discarded per chain [default: ceil(N^3 ln N), N = |P_n|]
        #[arg(long)]
        burnin: Option<u64>,
        /// Steps between draws [default: N^2]
        #[arg(long)]
        thinning: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Partition S_m by occurrence histograms over S_n for n <= n-max
    Classify {
        /// Pattern length
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Compare avoider counts only instead of full histograms
        #[arg(long)]
        weak: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run the invariant suites at small sizes
    Check {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Hasse diagram of P_n or Q_n in DOT syntax
    Poset {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::P)]
        variant: VariantArg,
        #[command(flatten)]
        plot: Plot,
    },
}

#[derive(Debug)]
pub enum Failure {
    Lib(clusterlin::Error),
    Io(PathBuf, std::io::Error),
    /// Failed suite count and the rendered report.
    Check(usize, String),
}

impl From<clusterlin::Error> for Failure {
    fn from(e: clusterlin::Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        use clusterlin::Error::*;
        match self {
            Failure::Lib(InvalidInput(_) | Domain(_) | Degenerate(_)) => 2,
            Failure::Lib(Resource(_)) | Failure::Io(..) => 3,
            Failure::Lib(Internal(_)) | Failure::Check(..) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(path, e) => write!(f, "cannot write {}: {e}", path.display()),
            Failure::Check(n, _) => write!(f, "{n} check(s) failed"),
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    use commands::*;
    match cli.command {
        Command::Count { shape, n, variant, method, output } => count(shape, n, variant, method, &output),
        Command::Constant { shape, output } => constant(shape, &output),
        Command::Fit { shape, n_max, output, plot } => fit(shape, n_max, &output, &plot),
        Command::Compare { shape, a2, b2, n_max, output, plot } => compare(shape, a2, b2, n_max, &output, &plot),
        Command::Profile { shape, points, output, plot } => profile(shape, points, &output, &plot),
        Command::Sample { shape, n, samples, burnin, thinning, seed, output, plot } => {
            sample(shape, n, samples, burnin, thinning, seed, &output, &plot)
        }
        Command::Classify { m, n_max, weak, output } => classify(m, n_max, weak, &output),
        Command::Check { seed, output } => check::run(seed, &output),
        Command::Poset { shape, n, variant, plot } => poset(shape, n, variant, &plot),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(n, text)) => {
            print!("{text}");
            eprintln!("error: {n} check(s) failed");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
