//! Command-line front end shared by the `multileave` binary and its tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::data::{ground_truth_matrix, read_letor, serialize_letor, write_letor, FeatureRanker, SyntheticSpec};
use crate::error::{Error, Result};
use crate::harness::{emit_results, summarize, DatasetSource, Experiment, ExperimentConfig};
use crate::method::Method;
use crate::oracle::{verify_property, Property};

/// Environment variable read when `--threads` is absent.
pub const THREADS_ENV: &str = "MULTILEAVE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "multileave",
    version,
    about = "Simulate and verify multileaved comparison methods"
)]
struct Cli {
    /// Root random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = THREADS_ENV, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Output file or directory, depending on the subcommand.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the simulation described by a config file.
    Simulate(SimulateArgs),
    /// Check considerateness and fidelity on generated small instances.
    Verify(VerifyArgs),
    /// Write a synthetic dataset in LETOR format.
    GenData(GenDataArgs),
    /// Print mean NDCG and the ground-truth preference signs.
    Truth(TruthArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// TOML experiment config.
    #[arg(long, short)]
    config: PathBuf,
    #[arg(long)]
    impressions: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Built-in click model: perf, nav or inf.
    #[arg(long)]
    click_model: Option<String>,
    /// Comma-separated method names, each with its default settings.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// LETOR file to sample queries from; replaces the configured dataset.
    #[arg(long, requires = "evaluation")]
    interaction: Option<PathBuf>,
    /// LETOR file for the ground truth.
    #[arg(long, requires = "interaction")]
    evaluation: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Comma-separated method names, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    method: Vec<String>,
    /// Comma-separated properties (considerateness, uncorrelated-fidelity,
    /// pareto-fidelity), or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    property: Vec<String>,
    /// Instances generated per method and property.
    #[arg(long, default_value_t = 100)]
    instances: usize,
}

#[derive(Debug, Args)]
struct GenDataArgs {
    #[arg(long, default_value_t = 100)]
    queries: usize,
    #[arg(long, default_value_t = 50)]
    docs: usize,
    #[arg(long, default_value_t = 5)]
    features: usize,
    #[arg(long, default_value_t = 4)]
    relevance_max: u8,
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    /// Write `interaction.txt` and `evaluation.txt` into the `--out`
    /// directory instead of a single file.
    #[arg(long)]
    split: bool,
}

#[derive(Debug, Args)]
struct TruthArgs {
    /// LETOR file to evaluate on.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    data: Option<PathBuf>,
    /// Use the evaluation partition and rankers of an experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated feature indices, ranked descending.
    #[arg(long, value_delimiter = ',', required_unless_present = "config")]
    rankers: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    cutoff: usize,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code: 0 on success, 1 on a runtime error and 2
/// on a usage error.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    let result = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))
            .and_then(|pool| pool.install(|| execute(&cli, stdout))),
        None => execute(&cli, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn execute(cli: &Cli, out: &mut (dyn Write + Send)) -> Result<()> {
    match &cli.command {
        Command::Simulate(args) => simulate(cli, args, out),
        Command::Verify(args) => verify(cli, args, out),
        Command::GenData(args) => gen_data(cli, args, out),
        Command::Truth(args) => truth(args, out),
    }
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn simulate(cli: &Cli, args: &SimulateArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let mut cfg = ExperimentConfig::from_path(&args.config)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(n) = cli.threads {
        cfg.threads = Some(n as usize);
    }
    if let Some(t) = args.impressions {
        cfg.impressions = t;
        // a configured schedule may now run past the end
        if cfg.checkpoints.as_ref().is_some_and(|c| c.iter().any(|&x| x > t)) {
            cfg.checkpoints = None;
        }
    }
    if let Some(r) = args.runs {
        cfg.runs = r;
    }
    if let Some(k) = args.k {
        cfg.k = k;
    }
    if let Some(name) = &args.click_model {
        cfg.click_model = crate::harness::ClickModelChoice::Named(name.clone());
    }
    if let Some(names) = &args.methods {
        cfg.methods = names.iter().map(|n| Method::from_name(n)).collect::<Result<_>>()?;
    }
    if let (Some(interaction), Some(evaluation)) = (&args.interaction, &args.evaluation) {
        cfg.dataset = DatasetSource::Letor {
            interaction: interaction.clone(),
            evaluation: evaluation.clone(),
        };
    }
    let exp = Experiment::prepare(cfg)?;
    let curves = exp.run()?;
    let summary = summarize(&exp.config, &exp.truth, &curves);
    writeln!(out, "{:<6} {:>5} {:>12} {:>10}", "method", "runs", "final_e_bin", "std").map_err(stdout_err)?;
    for m in &summary.methods {
        writeln!(
            out,
            "{:<6} {:>5} {:>12.4} {:>10.4}",
            m.method, m.runs, m.mean_final_e_bin, m.std_final_e_bin
        )
        .map_err(stdout_err)?;
    }
    if let Some(dir) = &cli.out {
        let files = emit_results(&exp.config, &exp.truth, &curves, dir)?;
        writeln!(out, "wrote {} and {}", files.csv.display(), files.summary.display()).map_err(stdout_err)?;
    }
    Ok(())
}

fn expand<T>(names: &[String], all: impl Fn() -> Vec<T>, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    if names.iter().any(|n| n == "all") {
        return Ok(all());
    }
    names.iter().map(|n| parse(n)).collect()
}

fn verify(cli: &Cli, args: &VerifyArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let methods = expand(
        &args.method,
        || {
            Method::NAMES
                .iter()
                .map(|n| Method::from_name(n).expect("built-in"))
                .collect()
        },
        Method::from_name,
    )?;
    let properties = expand(&args.property, || Property::ALL.to_vec(), Property::from_name)?;
    let seed = cli.seed.unwrap_or(0);
    let jobs: Vec<(Method, Property)> = properties
        .iter()
        .flat_map(|&p| methods.iter().map(move |&m| (m, p)))
        .collect();
    let reports = jobs
        .par_iter()
        .map(|(m, p)| verify_property(m, *p, args.instances, seed))
        .collect::<Result<Vec<_>>>()?;
    for r in &reports {
        writeln!(out, "{r}").map_err(stdout_err)?;
    }
    if let Some(path) = &cli.out {
        let json = serde_json::to_string_pretty(&reports)? + "\n";
        std::fs::write(path, json).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

fn gen_data(cli: &Cli, args: &GenDataArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let spec = SyntheticSpec {
        n_queries: args.queries,
        n_docs_per_query: args.docs,
        n_features: args.features,
        relevance_max: args.relevance_max,
        seed: cli.seed.unwrap_or(0),
        noise: args.noise,
    };
    if args.split {
        let dir = cli
            .out
            .as_ref()
            .ok_or_else(|| Error::Config("--split needs an --out directory".into()))?;
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let split = spec.generate_split()?;
        write_letor(&split.interaction, dir.join("interaction.txt"))?;
        write_letor(&split.evaluation, dir.join("evaluation.txt"))?;
        return Ok(());
    }
    let data = spec.generate()?;
    match &cli.out {
        Some(path) => write_letor(&data, path),
        None => out.write_all(serialize_letor(&data).as_bytes()).map_err(stdout_err),
    }
}

fn truth(args: &TruthArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let (rankers, data, cutoff) = match &args.config {
        Some(path) => {
            let exp = Experiment::prepare(ExperimentConfig::from_path(path)?)?;
            let cutoff = exp.config.ndcg_cutoff();
            (exp.rankers, exp.evaluation, cutoff)
        }
        None => {
            let path = args.data.as_ref().expect("required by the parser");
            let rankers: Vec<FeatureRanker> = args.rankers.iter().map(|&f| FeatureRanker::descending(f)).collect();
            (rankers, read_letor(path)?, args.cutoff)
        }
    };
    let gt = ground_truth_matrix(&rankers, &data, cutoff)?;
    let w = |e| stdout_err(e);
    writeln!(out, "ranker feature direction  ndcg@{cutoff}").map_err(w)?;
    for (i, (r, v)) in rankers.iter().zip(&gt.ndcg).enumerate() {
        let dir = serde_json::to_value(r.direction)?;
        writeln!(
            out,
            "{i:>6} {:>7} {:<10} {v:.6}",
            r.feature_index,
            dir.as_str().unwrap_or("?")
        )
        .map_err(w)?;
    }
    writeln!(out, "signs").map_err(w)?;
    for row in &gt.signs {
        let cells: Vec<String> = row.iter().map(|s| format!("{s:>2}")).collect();
        writeln!(out, "{}", cells.join(" ")).map_err(w)?;
    }
    for (a, b) in gt.ties() {
        writeln!(out, "tie: rankers {a} and {b}").map_err(w)?;
    }
    Ok(())
}
