//! Command-line front end. [`run`] returns the process exit status:
//! 0 on success, 1 for usage or validation errors, 2 for I/O errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bounds::{nu_max_bound, Family, FamilyParams};
use crate::error::{Error, Result};
use crate::experiment::{run_experiment, ExperimentConfig};
use crate::graph::{check_local_separation, edit_distance, EnsembleKind, EnsembleSpec, Graph};
use crate::ising::{exact_joint, gen_potentials, gibbs_sample, GibbsConfig, IsingModel, ParamSpec, SignMode};
use crate::learner::{learn_with_statistics, LearnerConfig, Method, PairRule};
use crate::samples::SampleSet;

#[derive(Debug, Parser)]
#[command(name = "ising-select", version, about = "Ising model structure learning by conditional-statistic thresholding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a graph from a random ensemble.
    GenGraph(GenGraphArgs),
    /// Draw edge potentials for a graph.
    GenModel(GenModelArgs),
    /// Draw samples from a model.
    Sample(SampleArgs),
    /// Estimate a graph from samples.
    Learn(LearnArgs),
    /// Edit distance between a reference graph and an estimate.
    Eval(EvalArgs),
    /// Check the local separation property of a graph.
    Separators(SeparatorArgs),
    /// Coupling threshold, decay ratio and ν_max bound for a graph family.
    Bounds(BoundsArgs),
    /// Run a benchmark described by a JSON configuration.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
struct GenGraphArgs {
    /// JSON ensemble description; overrides the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "cycle")]
    kind: EnsembleKind,
    #[arg(long, default_value_t = 80)]
    p: usize,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 3)]
    delta: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenModelArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    j_min: f64,
    #[arg(long, default_value_t = 0.2)]
    j_max: f64,
    #[arg(long, default_value = "attractive")]
    sign_mode: SignMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 200)]
    burnin: usize,
    #[arg(long, default_value_t = 5)]
    thin: usize,
    /// Exact i.i.d. sampling by enumeration (p <= 20) instead of Gibbs.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; `.bin` selects the packed binary format, anything else CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct LearnArgs {
    #[arg(long)]
    samples: PathBuf,
    /// JSON learner configuration; overrides the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "cvdt")]
    method: Method,
    #[arg(long, default_value_t = 2)]
    eta: usize,
    #[arg(long, default_value_t = 0.05)]
    xi: f64,
    #[arg(long, default_value = "ordered_or")]
    pair_rule: PairRule,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-pair statistic dump (CSV).
    #[arg(long)]
    stats_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    estimate: PathBuf,
}

#[derive(Debug, Args)]
struct SeparatorArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    eta: usize,
    #[arg(long)]
    gamma: usize,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// JSON family parameters; overrides the flags below.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    delta_max: Option<f64>,
    #[arg(long)]
    delta_min: Option<f64>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    l: Option<u64>,
    #[arg(long)]
    j_max: Option<f64>,
    /// Also print a human-readable table to stderr.
    #[arg(long)]
    table: bool,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the configured master seed.
    #[arg(long)]
    seed: Option<u64>,
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_io() {
                2
            } else {
                1
            }
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialisable value")
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::GenGraph(a) => {
            let spec = match &a.config {
                Some(path) => {
                    let mut spec: EnsembleSpec = serde_json::from_str(&read_text(path)?)
                        .map_err(|e| Error::Format(format!("ensemble config: {e}")))?;
                    spec.seed = a.seed;
                    spec
                }
                None => EnsembleSpec {
                    kind: a.kind,
                    p: a.p,
                    c: a.c,
                    d: a.d,
                    delta: a.delta,
                    seed: a.seed,
                },
            };
            let g = spec.generate()?;
            emit(&g.to_json(), a.out.as_deref())
        }
        Command::GenModel(a) => {
            let g = Graph::read_json(&a.graph)?;
            let spec = ParamSpec::new(a.j_min, a.j_max, a.sign_mode, a.seed)?;
            let m = gen_potentials(&g, &spec)?;
            emit(&m.to_json(), a.out.as_deref())
        }
        Command::Sample(a) => {
            let m = IsingModel::read_json(&a.model)?;
            let samples = if a.exact {
                exact_joint(&m)?.sample(a.n, a.seed)?
            } else {
                let cfg = GibbsConfig {
                    burnin_sweeps: a.burnin,
                    thin_sweeps: a.thin,
                };
                gibbs_sample(&m, a.n, &cfg, a.seed)?
            };
            samples.save(&a.out)
        }
        Command::Learn(a) => {
            let cfg = match &a.config {
                Some(path) => LearnerConfig::from_json(&read_text(path)?)?,
                None => LearnerConfig::new(a.eta, a.xi, a.method)?.with_pair_rule(a.pair_rule),
            };
            let samples = SampleSet::load(&a.samples)?;
            let (g, stats) = learn_with_statistics(&samples, &cfg)?;
            if let Some(path) = &a.stats_out {
                let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
                stats.write_csv(std::io::BufWriter::new(file), cfg.method, cfg.pair_rule)?;
            }
            emit(&g.to_json(), a.out.as_deref())
        }
        Command::Eval(a) => {
            let truth = Graph::read_json(&a.truth)?;
            let est = Graph::read_json(&a.estimate)?;
            let d = edit_distance(&truth, &est)?;
            emit(
                &serde_json::json!({ "raw": d.raw, "normalized": d.normalized }).to_string(),
                None,
            )
        }
        Command::Separators(a) => {
            let g = Graph::read_json(&a.graph)?;
            let report = check_local_separation(&g, a.eta, a.gamma)?;
            emit(&to_json(&report), None)
        }
        Command::Bounds(a) => {
            let params = match &a.params {
                Some(path) => FamilyParams::from_json(&read_text(path)?)?,
                None => FamilyParams {
                    family: a
                        .family
                        .ok_or_else(|| Error::InvalidArgument("either --params or --family is required".into()))?,
                    p: a.p,
                    delta_max: a.delta_max,
                    delta_min: a.delta_min,
                    g: a.g,
                    c: a.c,
                    d: a.d,
                    eta: a.eta,
                    gamma: a.gamma,
                    k: a.k,
                    l: a.l,
                    j_max: a.j_max,
                },
            };
            let report = nu_max_bound(&params)?;
            if a.table {
                let show = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6}"));
                eprintln!("family             {:?}", report.family);
                eprintln!("j_star             {:.6}", report.j_star);
                eprintln!("alpha              {}", show(report.alpha));
                eprintln!("eta                {}", show(report.eta));
                eprintln!("nu_max bound       {}", show(report.nu_max_bound));
                eprintln!("probability        {}", show(report.bound_probability));
                eprintln!("raw probability    {}", show(report.raw_probability));
                for note in &report.notes {
                    eprintln!("note: {note}");
                }
            }
            emit(&to_json(&report), None)
        }
        Command::Experiment(a) => {
            let mut cfg = ExperimentConfig::read_json(&a.config)?;
            if let Some(dir) = a.out {
                cfg.output_dir = Some(dir);
            }
            if let Some(seed) = a.seed {
                cfg.master_seed = seed;
            }
            let outcome = run_experiment(&cfg)?;
            for s in &outcome.summary {
                println!(
                    "{:<14} {:<5} n={:<7} mean={:.4} stderr={:.4}",
                    s.graph_kind, s.method, s.n, s.mean_distance, s.stderr
                );
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["ising-select", "frobnicate"]), 1);
        assert_eq!(run(["ising-select", "learn", "--bogus"]), 1);
        assert_eq!(run(["ising-select", "--help"]), 0);
    }

    #[test]
    fn missing_files_exit_two() {
        assert_eq!(run(["ising-select", "learn", "--samples", "/nonexistent/s.csv"]), 2);
        assert_eq!(
            run(["ising-select", "eval", "--truth", "/nonexistent/a.json", "--estimate", "/nonexistent/b.json"]),
            2
        );
    }

    #[test]
    fn validation_errors_exit_one() {
        assert_eq!(run(["ising-select", "gen-graph", "--kind", "cycle", "--p", "2"]), 1);
        assert_eq!(run(["ising-select", "bounds", "--family", "erdos_renyi", "--c", "0.5"]), 1);
    }
}
