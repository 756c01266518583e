mod inputs;
mod suites;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use formality::formats;
use formality::graphs::enumerate_graphs;
use formality::linfinity::formality::{star_product, MAX_STAR_ORDER};
use formality::weights::{weight_mc, McConfig, MonteCarloProvider, Normalization, TableProvider, WeightProvider};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use suites::{Check, Settings};

const DEFAULT_SAMPLES: usize = 200_000;

#[derive(Parser)]
#[command(name = "formality", version, about = "Graph weights, star products and verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate admissible graphs.
    Graphs(GraphArgs),
    /// Monte Carlo weight table for a set of graphs.
    Weights(WeightArgs),
    /// Assemble a star product from a Poisson bivector.
    Star(StarArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum NormalizationFlag {
    Ordered,
    Grouped,
}

#[derive(Copy, Clone, ValueEnum)]
enum Suite {
    Algebra,
    Coalgebra,
    Stokes,
    Formality,
    Associativity,
}

#[derive(Args)]
struct Sampling {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = NormalizationFlag::Ordered)]
    normalization: NormalizationFlag,
}

impl Sampling {
    fn config(&self) -> Result<McConfig> {
        if self.samples == 0 {
            bail!(usage("--samples must be at least 1"));
        }
        let norm = match self.normalization {
            NormalizationFlag::Ordered => Normalization::Ordered,
            NormalizationFlag::Grouped => Normalization::Grouped,
        };
        Ok(McConfig::default().with_seed(self.seed).with_samples(self.samples).with_normalization(norm))
    }
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    edges: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WeightArgs {
    #[arg(long, required_unless_present = "input")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "input")]
    m: Option<usize>,
    #[arg(long, required_unless_present = "input")]
    edges: Option<usize>,
    /// Graph file to use instead of enumeration.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[command(flatten)]
    sampling: Sampling,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StarArgs {
    /// Poisson bivector in multivector text format.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 2)]
    order: usize,
    /// Weight table to use instead of fresh Monte Carlo estimates.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[command(flatten)]
    sampling: Sampling,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, alias = "d", default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 2)]
    order: usize,
    /// Poisson bivector for the associativity suite.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[command(flatten)]
    sampling: Sampling,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Input or usage problem, reported with exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing to stdout"),
    }
}

fn header(title: &str, sampling: &Sampling) -> String {
    format!(
        "# {}\n# rng ChaCha8Rng seed {} (weight batches use derived streams)\n# samples {} normalization {}\n",
        title,
        sampling.seed,
        sampling.samples,
        match sampling.normalization {
            NormalizationFlag::Ordered => "ordered",
            NormalizationFlag::Grouped => "grouped",
        }
    )
}

fn cmd_graphs(a: &GraphArgs) -> Result<bool> {
    let gs = enumerate_graphs(a.n, a.m, a.edges);
    emit(&a.out, &formats::write_graphs(&gs))?;
    eprintln!("{} graph(s)", gs.len());
    Ok(true)
}

fn cmd_weights(a: &WeightArgs) -> Result<bool> {
    let config = a.sampling.config()?;
    let graphs = match &a.input {
        Some(p) => formats::parse_graphs(&read(p)?).map_err(|e| usage(e.to_string()))?,
        None => enumerate_graphs(a.n.unwrap_or(0), a.m.unwrap_or(0), a.edges.unwrap_or(0)),
    };
    let mut records = Vec::new();
    let (mut rejected, mut drawn, mut worst) = (0usize, 0usize, 0.0f64);
    for g in graphs {
        let estimate = weight_mc(&g, &config.clone().with_seed(MonteCarloProvider::new(config.clone()).seed_for(&g)))?;
        rejected += estimate.rejected;
        drawn += estimate.samples;
        worst = worst.max(estimate.stderr);
        records.push(formats::WeightRecord { graph: g, estimate });
    }
    emit(&a.out, &formats::write_weight_table(&records))?;
    eprint!("{}", header("weights", &a.sampling));
    eprintln!(
        "{} record(s), rejected {} of {} samples, max stderr {:.3e}",
        records.len(),
        rejected,
        drawn,
        worst
    );
    Ok(true)
}

fn cmd_star(a: &StarArgs) -> Result<bool> {
    let config = a.sampling.config()?;
    if a.order > MAX_STAR_ORDER {
        bail!(usage(format!("--order {} exceeds the supported {}", a.order, MAX_STAR_ORDER)));
    }
    let pi = formats::parse_multivector(&read(&a.input)?).map_err(|e| usage(e.to_string()))?;
    let mc = MonteCarloProvider::new(config);
    let table;
    let provider: &dyn WeightProvider = match &a.weights {
        Some(p) => {
            let records = formats::parse_weight_table(&read(p)?).map_err(|e| usage(e.to_string()))?;
            table = TableProvider { entries: formats::table_entries(&records) };
            &table
        }
        None => &mc,
    };
    let star = star_product(&pi, a.order, provider).map_err(|e| usage(e.to_string()))?;
    emit(&a.out, &formats::write_star(&star.numeric()))?;
    eprint!("{}", header("star", &a.sampling));
    eprintln!("{} weight(s) used", star.estimates.len());
    Ok(true)
}

fn cmd_verify(a: &VerifyArgs) -> Result<bool> {
    let poisson = match &a.input {
        Some(p) => Some(formats::parse_multivector(&read(p)?).map_err(|e| usage(e.to_string()))?),
        None => None,
    };
    let settings = Settings {
        seed: a.sampling.seed,
        config: a.sampling.config()?,
        n: a.n,
        m: a.m,
        dim: a.dim,
        order: a.order,
        poisson,
    };
    if a.dim == 0 {
        bail!(usage("--dim must be at least 1"));
    }
    let (title, checks): (&str, Vec<Check>) = match a.suite {
        Suite::Algebra => ("verify algebra", suites::algebra(&settings)),
        Suite::Coalgebra => ("verify coalgebra", suites::coalgebra(&settings)),
        Suite::Stokes => ("verify stokes", suites::stokes(&settings).map_err(|e| usage(e.to_string()))?),
        Suite::Formality => ("verify formality", suites::formality(&settings).map_err(|e| usage(e.to_string()))?),
        Suite::Associativity => ("verify associativity", suites::associativity(&settings).map_err(|e| usage(e.to_string()))?),
    };
    let mut report = header(title, &a.sampling);
    for c in &checks {
        report.push_str(&format!(
            "{} {} [{}] {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.tolerance,
            c.observed
        ));
    }
    let pass = checks.iter().all(|c| c.pass);
    report.push_str(&format!("# {} of {} checks passed\n", checks.iter().filter(|c| c.pass).count(), checks.len()));
    emit(&a.out, &report)?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Graphs(a) => cmd_graphs(a),
        Command::Weights(a) => cmd_weights(a),
        Command::Star(a) => cmd_star(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {:#}", e);
            if e.chain().any(|c| c.is::<std::io::Error>()) {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
