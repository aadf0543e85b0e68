use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sgl_cli::commands::{
    cmd_gap, cmd_reduce, cmd_verify_aldous, cmd_verify_matrices, cmd_verify_octopus,
    cmd_verify_structure, ChainSpec, GapArgs, InputSource, ReduceArgs, VerifyGraphArgs,
    VerifyMatricesArgs, VerifyOctopusArgs,
};
use sgl_cli::report::{RandomSweep, Report};
use sgl_core::chains::DEFAULT_MAX_PERMUTATION_N;
use sgl_core::spectra::Tolerances;

/// Spectral gaps of particle processes on weighted graphs.
#[derive(Parser)]
#[command(name = "sgl", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Largest vertex count for which permutation-sized state spaces are
    /// built (clamped to 2..=7).
    #[arg(long, global = true, env = "SGL_MAX_N")]
    max_n: Option<usize>,

    /// Relative symmetry/sanity tolerance for eigensolves.
    #[arg(long, global = true, value_name = "TOL")]
    eigen_rel: Option<f64>,

    /// Relative gap below which eigenvalues are grouped into one cluster.
    #[arg(long, global = true, value_name = "TOL")]
    cluster_rel: Option<f64>,

    /// Relative slack allowed below zero in semidefiniteness checks.
    #[arg(long, global = true, value_name = "TOL")]
    psd_rel: Option<f64>,

    /// Relative tolerance when matching eigenvalues across spectra.
    #[arg(long, global = true, value_name = "TOL")]
    match_rel: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the spectral gap of a process on a graph.
    Gap {
        #[command(flatten)]
        input: InputOpts,
        /// Process: rw, ip, ep:K, cep:N1,N2,.., cycle, or matching.
        #[arg(long, default_value = "rw")]
        chain: String,
        /// Also report the full clustered spectrum (forces the dense solver).
        #[arg(long)]
        spectrum: bool,
    },
    /// Remove a vertex by network reduction and report the reduced graph.
    Reduce {
        /// Edge-list file.
        #[arg(long)]
        graph: String,
        /// Vertex to remove (1-based, as in the file format).
        #[arg(long)]
        at: usize,
        /// Write the reduced edge list to this file.
        #[arg(long)]
        output: Option<String>,
    },
    /// Check families of spectral claims and report pass/fail per claim.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Walk/interchange gap equality and the supporting inequalities.
    Aldous {
        #[command(flatten)]
        input: InputOpts,
    },
    /// Star-graph comparison matrices: semidefiniteness and decomposition.
    Octopus {
        /// Number of star vertices including the center.
        #[arg(long)]
        n: usize,
        /// Random rate systems to test.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact block-matrix facts available at n = 4 and n = 5.
    Matrices {
        #[arg(long)]
        n: usize,
    },
    /// Spectral structure: subset sums, parity eigenvalue, pairing, dimensions.
    Structure {
        #[command(flatten)]
        input: InputOpts,
    },
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["graph", "random"]))]
struct InputOpts {
    /// Edge-list file: one `u v w` per line, 1-based ids, `#` comments.
    #[arg(long)]
    graph: Option<String>,

    /// Sample random connected graphs on this many vertices instead.
    #[arg(long, value_name = "N")]
    random: Option<usize>,

    /// Number of random graphs to sample.
    #[arg(long, default_value_t = 1)]
    trials: usize,

    /// Edge probability for random graphs, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    density: f64,

    /// Seed for the random sweep; trial i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl InputOpts {
    fn source(&self) -> InputSource {
        match &self.graph {
            Some(path) => InputSource::File(path.clone()),
            None => InputSource::Random(RandomSweep {
                n: self.random.expect("clap group guarantees one input"),
                trials: self.trials,
                density: self.density,
                seed: self.seed,
            }),
        }
    }
}

impl Cli {
    fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(v) = self.eigen_rel {
            t.eigen_rel = v;
        }
        if let Some(v) = self.cluster_rel {
            t.cluster_rel = v;
        }
        if let Some(v) = self.psd_rel {
            t.psd_rel = v;
        }
        if let Some(v) = self.match_rel {
            t.match_rel = v;
        }
        t
    }

    fn max_n(&self) -> usize {
        self.max_n.unwrap_or(DEFAULT_MAX_PERMUTATION_N).clamp(2, 7)
    }
}

fn run(cli: &Cli) -> Result<Report, String> {
    let tols = cli.tolerances();
    let max_n = cli.max_n();
    match &cli.command {
        Command::Gap {
            input,
            chain,
            spectrum,
        } => {
            let chain: ChainSpec = chain.parse()?;
            cmd_gap(&GapArgs {
                input: input.source(),
                chain,
                spectrum: *spectrum,
                max_n,
                tols,
            })
        }
        Command::Reduce { graph, at, output } => cmd_reduce(&ReduceArgs {
            graph: graph.clone(),
            at: *at,
            output: output.clone(),
            tols,
        }),
        Command::Verify(v) => match v {
            VerifyCommand::Aldous { input } => cmd_verify_aldous(&VerifyGraphArgs {
                input: input.source(),
                max_n,
                tols,
            }),
            VerifyCommand::Octopus { n, trials, seed } => cmd_verify_octopus(&VerifyOctopusArgs {
                n: *n,
                trials: *trials,
                seed: *seed,
                max_n,
                tols,
            }),
            VerifyCommand::Matrices { n } => cmd_verify_matrices(&VerifyMatricesArgs {
                n: *n,
                max_n,
                tols,
            }),
            VerifyCommand::Structure { input } => cmd_verify_structure(&VerifyGraphArgs {
                input: input.source(),
                max_n,
                tols,
            }),
        },
    }
}

fn main() {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            report.wall_time_ms = start.elapsed().as_millis() as u64;
            match cli.format {
                Format::Json => print!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            std::process::exit(report.exit_code());
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}
