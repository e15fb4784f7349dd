mod commands;
mod report;

use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use troprank::lifts::DEFAULT_RETRIES;
use troprank::polyfan::LpBackend;

use report::Format;

#[derive(Parser)]
#[command(name = "troprank", version, about = "Exact tropical ranks, hypersurface fans and rank-3 lifts")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Seed for every random choice (lift coefficients, sampled self-checks).
    #[arg(long, global = true, env = "TROPRANK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, env = "TROPRANK_THREADS")]
    pub threads: Option<NonZeroUsize>,
    /// Attempts per coordinate choice when lifting a point.
    #[arg(long, global = true, default_value_t = NonZeroUsize::new(DEFAULT_RETRIES).unwrap())]
    pub retry_limit: NonZeroUsize,
    #[arg(long, global = true, value_enum, default_value_t = Backend::Auto)]
    pub lp_backend: Backend,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Fourier-Motzkin up to dimension 6, simplex above.
    Auto,
    FourierMotzkin,
    Simplex,
}

impl Config {
    pub fn lp_backend(&self) -> Option<LpBackend> {
        match self.lp_backend {
            Backend::Auto => None,
            Backend::FourierMotzkin => Some(LpBackend::FourierMotzkin),
            Backend::Simplex => Some(LpBackend::Simplex),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Tropical rank of a matrix file.
    Rank { matrix: PathBuf },
    /// Certificate that a 5 x n matrix has Kapranov rank at most 3.
    Certify {
        matrix: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rank-3 lift over Q(t) built from a certificate.
    Lift {
        matrix: PathBuf,
        certificate: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Hypersurface fan of one k x k minor of the d x n variable matrix.
    Hypersurface {
        d: usize,
        n: usize,
        k: usize,
        /// 1-based position among the minors, row subsets outermost.
        index: usize,
        /// Write the fan here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Common refinement of fan files.
    Refine {
        #[arg(required = true)]
        fans: Vec<PathBuf>,
        /// Refine inside the fundamental domain of the d x n matrix group, then expand orbits.
        #[arg(long, num_args = 2, value_names = ["D", "N"])]
        symmetric: Option<Vec<usize>>,
        /// Allow more than the default number of fans.
        #[arg(long)]
        unbounded_runtime: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Orbit sizes and canonical representatives of matrices under row, column and transpose symmetry.
    Orbits {
        #[arg(required = true)]
        matrices: Vec<PathBuf>,
    },
    /// Cell structure of the tropical convex hull of a matrix's columns.
    Hull { matrix: PathBuf },
    /// Euler characteristic of a fan from its f-vector.
    Euler {
        #[arg(long)]
        lineality: usize,
        /// The f-vector does not start with the lineality entry 1.
        #[arg(long)]
        no_leading_one: bool,
        /// Counts, separated by spaces or commas.
        #[arg(required = true, allow_hyphen_values = true)]
        counts: Vec<String>,
    },
}

fn run(cli: Cli) -> anyhow::Result<report::Report> {
    if let Some(t) = cli.config.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t.get()).build_global()?;
    }
    let cfg = &cli.config;
    match cli.command {
        Command::Rank { matrix } => commands::rank(&matrix),
        Command::Certify { matrix, output } => commands::certify(&matrix, output),
        Command::Lift { matrix, certificate, output } => commands::lift(&matrix, &certificate, output, cfg),
        Command::Hypersurface { d, n, k, index, output } => commands::hypersurface(d, n, k, index, output, cfg),
        Command::Refine { fans, symmetric, unbounded_runtime, output } => {
            commands::refine(&fans, symmetric.map(|s| (s[0], s[1])), unbounded_runtime, output, cfg)
        }
        Command::Orbits { matrices } => commands::orbits(&matrices),
        Command::Hull { matrix } => commands::hull(&matrix),
        Command::Euler { lineality, no_leading_one, counts } => commands::euler(lineality, no_leading_one, &counts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.config.format;
    match run(cli).and_then(|r| r.emit(format)) {
        Ok(true) => ExitCode::SUCCESS,
        // a self-check failed: the computed object contradicts an invariant
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<troprank::Error>().map_or(1, |e| e.exit_code());
            ExitCode::from(code as u8)
        }
    }
}
