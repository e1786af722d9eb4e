//! `sctaut`: small cancellation over free products from the command line.
//!
//! Exit status is 0 when every verdict is decided, 2 when some verdict is
//! Unknown and 1 on errors or failing corpus criteria.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use sctaut::dehn::Mode;
use sctaut::taut::SpectrumBudget;

use commands::{CliResult, GraphSource, Outcome};
use report::{Inputs, RunReport, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(name = "sctaut", version, about = "Small cancellation over free products A * B")]
struct Cli {
    /// Write a JSON run report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock time in the report (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Linear,
    Cyclic,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Linear => Mode::Linear,
            ModeArg::Cyclic => Mode::Cyclic,
        }
    }
}

#[derive(Debug, clap::Args)]
struct BudgetArgs {
    /// Search nodes for simple cycle enumeration.
    #[arg(long, default_value_t = SpectrumBudget::default().cycle_nodes)]
    cycle_nodes: usize,
    /// Depth of the same-length geodesic swap search.
    #[arg(long, default_value_t = SpectrumBudget::default().swap_depth)]
    swap_depth: usize,
    /// States visited by the swap search per loop.
    #[arg(long, default_value_t = SpectrumBudget::default().swap_states)]
    swap_states: usize,
    /// Largest number of chords for the presentation fallback.
    #[arg(long, default_value_t = SpectrumBudget::default().max_chords)]
    max_chords: usize,
}

impl BudgetArgs {
    fn budget(&self) -> SpectrumBudget {
        SpectrumBudget {
            cycle_nodes: self.cycle_nodes,
            swap_depth: self.swap_depth,
            swap_states: self.swap_states,
            max_chords: self.max_chords,
            ..SpectrumBudget::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify C'(lambda) for the symmetrized closure of the relators.
    CheckCancellation {
        presentation: PathBuf,
        #[arg(long, default_value = "1/6")]
        lambda: String,
    },
    /// Dehn-reduce words, printing every step.
    DehnReduce {
        presentation: PathBuf,
        #[arg(long = "word", required = true)]
        words: Vec<String>,
        #[arg(long, value_enum, default_value = "cyclic")]
        mode: ModeArg,
        /// Run even if 1 >= 3 lambda (M+1) fails.
        #[arg(long)]
        allow_unsafe: bool,
    },
    /// Decide triviality, or membership in a factor image with --factor.
    WordProblem {
        presentation: PathBuf,
        #[arg(long = "word", required = true)]
        words: Vec<String>,
        #[arg(long)]
        factor: Option<String>,
        #[arg(long)]
        allow_unsafe: bool,
    },
    /// Truncated taut loop length spectrum of a graph or Cayley ball.
    TautSpectrum {
        /// `cycle:n`, `path:n`, `complete:n` or an edge-list file.
        #[arg(long, conflicts_with = "presentation")]
        graph: Option<String>,
        /// Use a ball of this presentation's Cayley graph.
        #[arg(long, required_unless_present = "graph")]
        presentation: Option<PathBuf>,
        /// Ball radius; defaults to the horizon.
        #[arg(long)]
        radius: Option<usize>,
        /// Ignore the relators and use the free product.
        #[arg(long)]
        free: bool,
        /// Ball in a single factor.
        #[arg(long)]
        factor: Option<String>,
        #[arg(long)]
        allow_unsafe: bool,
        #[arg(long)]
        horizon: usize,
        /// Also write the spectrum in the spectrum file format.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Pointwise union of two spectrum files (free product spectrum).
    SpectrumUnion {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the bracket windows between a quotient and its factor spectra.
    SpectrumBracket {
        presentation: PathBuf,
        #[arg(long)]
        quotient: PathBuf,
        /// Spectrum of the free product, e.g. from spectrum-union.
        #[arg(long)]
        factors: PathBuf,
    },
    /// Test whether two spectra are k-related.
    SpectrumEquiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Ball of the coned-off Cayley complex and its geometric piece ratio.
    ConedBall {
        presentation: PathBuf,
        #[arg(long)]
        radius: usize,
        /// Ignore the relators.
        #[arg(long)]
        free: bool,
        #[arg(long)]
        allow_unsafe: bool,
    },
    /// Dimension bounds from a profile file.
    DimBounds { profile: PathBuf },
    /// One-endedness verdict for a small cancellation quotient.
    OneEnded {
        presentation: PathBuf,
        /// Profile of factor A (flags such as one_ended).
        #[arg(long)]
        a: Option<PathBuf>,
        #[arg(long)]
        b: Option<PathBuf>,
        /// Flags asserted for the quotient itself.
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Run the acceptance corpus and print a pass/fail table.
    Corpus {
        #[arg(long, default_value = "corpus")]
        root: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckCancellation { .. } => "check-cancellation",
            Command::DehnReduce { .. } => "dehn-reduce",
            Command::WordProblem { .. } => "word-problem",
            Command::TautSpectrum { .. } => "taut-spectrum",
            Command::SpectrumUnion { .. } => "spectrum-union",
            Command::SpectrumBracket { .. } => "spectrum-bracket",
            Command::SpectrumEquiv { .. } => "spectrum-equiv",
            Command::ConedBall { .. } => "coned-ball",
            Command::DimBounds { .. } => "dim-bounds",
            Command::OneEnded { .. } => "one-ended",
            Command::Corpus { .. } => "corpus",
        }
    }
}

fn run(cli: &Cli, inputs: &mut Inputs) -> CliResult<Outcome> {
    match &cli.command {
        Command::CheckCancellation { presentation, lambda } => {
            commands::check_cancellation(inputs, presentation, lambda)
        }
        Command::DehnReduce {
            presentation,
            words,
            mode,
            allow_unsafe,
        } => commands::dehn_reduce(inputs, presentation, words, (*mode).into(), *allow_unsafe),
        Command::WordProblem {
            presentation,
            words,
            factor,
            allow_unsafe,
        } => commands::word_problem(inputs, presentation, words, factor.as_deref(), *allow_unsafe),
        Command::TautSpectrum {
            graph,
            presentation,
            radius,
            free,
            factor,
            allow_unsafe,
            horizon,
            out,
            budget,
        } => {
            let source = match (graph, presentation) {
                (Some(g), _) => GraphSource::Graph(g),
                (None, Some(path)) => GraphSource::Cayley {
                    path,
                    radius: radius.unwrap_or(*horizon),
                    free: *free,
                    factor: factor.as_deref(),
                    allow_unsafe: *allow_unsafe,
                },
                (None, None) => unreachable!("clap requires one of --graph and --presentation"),
            };
            commands::taut_spectrum(inputs, source, *horizon, &budget.budget(), out.as_deref())
        }
        Command::SpectrumUnion { a, b, out } => commands::spectrum_union(inputs, a, b, out.as_deref()),
        Command::SpectrumBracket {
            presentation,
            quotient,
            factors,
        } => commands::spectrum_bracket(inputs, presentation, quotient, factors),
        Command::SpectrumEquiv { a, b, k } => commands::spectrum_equiv(inputs, a, b, *k),
        Command::ConedBall {
            presentation,
            radius,
            free,
            allow_unsafe,
        } => commands::coned(inputs, presentation, *radius, *free, *allow_unsafe),
        Command::DimBounds { profile } => commands::dim_bounds(inputs, profile),
        Command::OneEnded {
            presentation,
            a,
            b,
            group,
        } => commands::one_ended(inputs, presentation, a.as_deref(), b.as_deref(), group.as_deref()),
        Command::Corpus { root } => commands::corpus(inputs, root, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut inputs = Inputs::default();
    inputs.add("options", format!("{:?} seed={}", cli.command, cli.seed).as_bytes());
    let outcome = match run(&cli, &mut inputs) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for line in &outcome.summary {
        println!("{line}");
    }
    if let Some(path) = &cli.report {
        let report = RunReport {
            schema_version: SCHEMA_VERSION,
            command: cli.command.name().to_string(),
            inputs_digest: inputs.digest(),
            status: outcome.status,
            records: outcome.records,
            elapsed_ms: cli.timings.then(|| start.elapsed().as_millis()),
        };
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    outcome.status.exit_code()
}
