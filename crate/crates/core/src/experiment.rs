//! Synthetic benchmark: random graphs, random potentials, Gibbs samples,
//! one statistics pass per sample set and a threshold sweep against the
//! true graph.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::combinatorics::mix_seed;
use crate::error::{Error, Result};
use crate::graph::{edit_distance, EditDistance, EnsembleKind, EnsembleSpec, Graph};
use crate::ising::{gen_potentials, gibbs_sample, GibbsConfig, ParamSpec, SignMode};
use crate::learner::{check_threshold_feasibility, Method, PairRule, PairStatistics};
use crate::samples::SampleSet;

/// Environment variable capping the number of worker threads.
pub const WORKERS_ENV: &str = "ISING_SELECT_WORKERS";

/// Sample sizes at or above this need `allow_large_n`.
pub const LARGE_N: usize = 100_000;

/// Rounds to 6 significant digits, the precision of every float written to CSV.
pub fn quantize(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

fn fmt_float(x: f64) -> String {
    format!("{}", quantize(x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdGrid {
    /// `count` values spaced geometrically over `[min, max]`.
    Geometric { min: f64, max: f64, count: usize },
    Values(Vec<f64>),
}

impl Default for ThresholdGrid {
    fn default() -> Self {
        ThresholdGrid::Geometric {
            min: 1e-3,
            max: 1.0,
            count: 40,
        }
    }
}

impl ThresholdGrid {
    /// Sorted, deduplicated grid values rounded to CSV precision.
    pub fn values(&self) -> Result<Vec<f64>> {
        let raw: Vec<f64> = match self {
            ThresholdGrid::Geometric { min, max, count } => {
                if !(*min > 0.0 && min <= max && max.is_finite()) || *count == 0 {
                    return Err(Error::InvalidParameter(format!(
                        "geometric grid needs 0 < min <= max and count >= 1, got [{min}, {max}] x {count}"
                    )));
                }
                if *count == 1 {
                    vec![*min]
                } else {
                    let ratio = (max / min).ln() / (*count - 1) as f64;
                    (0..*count).map(|k| min * (ratio * k as f64).exp()).collect()
                }
            }
            ThresholdGrid::Values(v) => v.clone(),
        };
        if raw.is_empty() || raw.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidParameter("threshold grid must be nonempty and positive".into()));
        }
        let mut v: Vec<f64> = raw.into_iter().map(quantize).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        Ok(v)
    }
}

/// How the reported threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// Best grid value against the true graph. Uses ground truth.
    #[default]
    Oracle,
    Fixed { xi: f64 },
    /// Smallest ξ meeting the lower-bound feasibility conditions.
    Feasibility,
}

impl Selection {
    pub fn label(&self) -> &'static str {
        match self {
            Selection::Oracle => "oracle",
            Selection::Fixed { .. } => "fixed",
            Selection::Feasibility => "feasibility",
        }
    }
}

/// Per-kind overrides of the conditioning-set budget.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EtaOverrides {
    #[serde(default)]
    pub cycle: Option<usize>,
    #[serde(default)]
    pub erdos_renyi: Option<usize>,
    #[serde(default)]
    pub small_world: Option<usize>,
    #[serde(default)]
    pub random_regular: Option<usize>,
}

impl EtaOverrides {
    /// Override if set, else 2 for cycles, Erdős–Rényi and regular graphs and
    /// `d + 2` for small-world graphs.
    pub fn eta_for(&self, spec: &EnsembleSpec) -> usize {
        match spec.kind {
            EnsembleKind::Cycle => self.cycle.unwrap_or(2),
            EnsembleKind::ErdosRenyi => self.erdos_renyi.unwrap_or(2),
            EnsembleKind::SmallWorld => self.small_world.unwrap_or(spec.d + 2),
            EnsembleKind::RandomRegular => self.random_regular.unwrap_or(2),
        }
    }
}

fn default_trials() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Ensemble seeds are ignored; graphs are seeded from `master_seed`.
    pub ensembles: Vec<EnsembleSpec>,
    /// The seed is ignored; potentials are seeded from `master_seed`.
    pub param_spec: ParamSpec,
    pub sample_sizes: Vec<usize>,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub eta: EtaOverrides,
    #[serde(default)]
    pub threshold_grid: ThresholdGrid,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub gibbs: GibbsConfig,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub pair_rule: PairRule,
    #[serde(default)]
    pub selection: Selection,
    /// Wall times make outputs run-dependent, so they are off by default.
    #[serde(default)]
    pub record_wall_time: bool,
    #[serde(default)]
    pub allow_large_n: bool,
}

impl ExperimentConfig {
    /// Cycle, Erdős–Rényi (c = 1) and small-world (d = 2, c = 1) graphs on
    /// 80 nodes with couplings of magnitude in [0.1, 0.2], both learners and
    /// sample sizes from 10² to 10⁴.
    pub fn desk_scale(sign_mode: SignMode, trials: usize, master_seed: u64) -> Self {
        ExperimentConfig {
            ensembles: vec![
                EnsembleSpec::cycle(80),
                EnsembleSpec::erdos_renyi(80, 1.0, 0),
                EnsembleSpec::small_world(80, 2, 1.0, 0),
            ],
            param_spec: ParamSpec {
                j_min: 0.1,
                j_max: 0.2,
                sign_mode,
                seed: 0,
            },
            sample_sizes: vec![100, 500, 1000, 5000, 10_000],
            methods: vec![Method::Cvdt, Method::Cmit],
            eta: EtaOverrides::default(),
            threshold_grid: ThresholdGrid::default(),
            trials,
            gibbs: GibbsConfig::default(),
            output_dir: None,
            master_seed,
            pair_rule: PairRule::default(),
            selection: Selection::default(),
            record_wall_time: false,
            allow_large_n: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("experiment config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ensembles.is_empty() || self.sample_sizes.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidParameter(
                "ensembles, sample_sizes and methods must be nonempty".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.sample_sizes.contains(&0) {
            return Err(Error::InvalidParameter("sample sizes must be positive".into()));
        }
        if !self.allow_large_n && self.sample_sizes.iter().any(|&n| n >= LARGE_N) {
            return Err(Error::InvalidParameter(format!(
                "sample sizes >= {LARGE_N} need allow_large_n"
            )));
        }
        if let Selection::Fixed { xi } = self.selection {
            if !(xi > 0.0 && xi.is_finite()) {
                return Err(Error::InvalidParameter(format!("fixed xi must be positive, got {xi}")));
            }
        }
        for e in &self.ensembles {
            e.validate()?;
        }
        self.param_spec.validate()?;
        self.gibbs.validate()?;
        self.threshold_grid.values()?;
        Ok(())
    }

    fn labels(&self) -> Vec<String> {
        self.ensembles
            .iter()
            .enumerate()
            .map(|(idx, e)| {
                let clash = self.ensembles.iter().filter(|o| o.kind == e.kind).count() > 1;
                if clash {
                    format!("{}_{idx}", e.kind.label())
                } else {
                    e.kind.label().to_string()
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub graph_kind: String,
    pub n: usize,
    pub method: Method,
    pub selection: String,
    pub trial: usize,
    pub trial_seed: u64,
    pub best_xi: f64,
    pub edit_distance_normalized: f64,
    pub edit_distance_raw: usize,
    pub wall_time: Option<f64>,
}

/// One point of a threshold sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub xi: f64,
    pub edges: usize,
    pub distance: EditDistance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub best_xi: f64,
    pub best_distance: EditDistance,
    pub curve: Vec<CurvePoint>,
}

/// Applies every threshold of `grid` (in increasing order) to cached
/// statistics and keeps the one closest to `truth`; ties go to the smallest ξ.
pub fn sweep_cached(
    stats: &PairStatistics,
    truth: &Graph,
    method: Method,
    rule: PairRule,
    grid: &[f64],
) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("threshold grid is empty".into()));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut curve = Vec::with_capacity(sorted.len());
    for &xi in &sorted {
        let g = stats.threshold(xi, method, rule);
        curve.push(CurvePoint {
            xi,
            edges: g.k(),
            distance: edit_distance(truth, &g)?,
        });
    }
    let best = curve
        .iter()
        .fold(None::<&CurvePoint>, |acc, pt| match acc {
            Some(b) if b.distance.normalized <= pt.distance.normalized => Some(b),
            _ => Some(pt),
        })
        .expect("nonempty grid");
    Ok(SweepResult {
        best_xi: best.xi,
        best_distance: best.distance,
        curve,
    })
}

/// Statistics pass followed by [`sweep_cached`].
pub fn sweep_threshold(
    samples: &SampleSet,
    truth: &Graph,
    method: Method,
    eta: usize,
    grid: &[f64],
    rule: PairRule,
) -> Result<SweepResult> {
    let stats = PairStatistics::from_samples(samples, eta);
    sweep_cached(&stats, truth, method, rule, grid)
}

/// Path threshold γ used by feasibility-based threshold selection.
fn path_threshold(spec: &EnsembleSpec) -> usize {
    let lnp = (spec.p as f64).ln();
    let from_branching = |b: f64| {
        if b > 1.0 {
            ((lnp / (4.0 * b.ln())).floor() as usize).max(1)
        } else {
            spec.p
        }
    };
    match spec.kind {
        EnsembleKind::Cycle => spec.p / 2,
        EnsembleKind::ErdosRenyi | EnsembleKind::SmallWorld => from_branching(spec.c),
        EnsembleKind::RandomRegular => from_branching(spec.delta as f64 - 1.0),
    }
}

fn family_alpha(spec: &EnsembleSpec, j_max: f64) -> Result<f64> {
    use bounds::{Family, FamilyParams};
    let params = match spec.kind {
        EnsembleKind::Cycle => FamilyParams {
            delta_max: Some(2.0),
            ..FamilyParams::new(Family::GirthBounded)
        },
        EnsembleKind::RandomRegular => FamilyParams {
            delta_max: Some(spec.delta as f64),
            ..FamilyParams::new(Family::RandomRegular)
        },
        EnsembleKind::ErdosRenyi => FamilyParams {
            c: Some(spec.c.max(1.0)),
            ..FamilyParams::new(Family::ErdosRenyi)
        },
        EnsembleKind::SmallWorld => FamilyParams {
            c: Some(spec.c.max(1.0)),
            ..FamilyParams::new(Family::SmallWorld)
        },
    };
    bounds::alpha(j_max, bounds::j_star(&params)?.value)
}

struct Job {
    ensemble: usize,
    trial: usize,
}

/// Rows and summaries produced by [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub rows: Vec<ResultRow>,
    pub summary: Vec<SummaryRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub graph_kind: String,
    pub method: Method,
    pub n: usize,
    pub trials: usize,
    pub mean_distance: f64,
    pub stderr: f64,
}

fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs every (ensemble, trial, n, method) cell and, if `output_dir` is set,
/// writes `results.csv`, `summary.csv` and `curves/<graph>_<method>.csv`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let grid = config.threshold_grid.values()?;
    let labels = config.labels();
    let jobs: Vec<Job> = (0..config.ensembles.len())
        .flat_map(|ensemble| (0..config.trials).map(move |trial| Job { ensemble, trial }))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let per_job: Vec<Result<Vec<ResultRow>>> =
        pool.install(|| jobs.par_iter().map(|job| run_job(config, job, &labels[job.ensemble], &grid)).collect());

    let mut rows = Vec::new();
    for r in per_job {
        rows.extend(r?);
    }
    let kind_order = |label: &str| labels.iter().position(|l| l == label).unwrap_or(usize::MAX);
    rows.sort_by(|a, b| {
        (kind_order(&a.graph_kind), a.n, a.method, a.trial).cmp(&(kind_order(&b.graph_kind), b.n, b.method, b.trial))
    });
    let summary = summarize(&rows);
    if let Some(dir) = &config.output_dir {
        write_outputs(dir, &rows, &summary, &labels, &config.methods)?;
    }
    Ok(ExperimentOutcome { rows, summary })
}

fn run_job(config: &ExperimentConfig, job: &Job, label: &str, grid: &[f64]) -> Result<Vec<ResultRow>> {
    let spec = &config.ensembles[job.ensemble];
    let trial_seed = mix_seed(config.master_seed, ((job.ensemble as u64) << 32) | job.trial as u64);
    let truth = spec.with_seed(mix_seed(trial_seed, 1)).generate()?;
    let params = ParamSpec {
        seed: mix_seed(trial_seed, 2),
        ..config.param_spec
    };
    let model = gen_potentials(&truth, &params)?;
    let eta = config.eta.eta_for(spec);
    let mut rows = Vec::new();
    for &n in &config.sample_sizes {
        let samples = gibbs_sample(&model, n, &config.gibbs, mix_seed(trial_seed, 3 + n as u64))?;
        let start = Instant::now();
        let stats = PairStatistics::from_samples(&samples, eta);
        let pass_time = start.elapsed().as_secs_f64();
        for &method in &config.methods {
            let start = Instant::now();
            let (xi, distance) = match config.selection {
                Selection::Oracle => {
                    let sweep = sweep_cached(&stats, &truth, method, config.pair_rule, grid)?;
                    (sweep.best_xi, sweep.best_distance)
                }
                Selection::Fixed { xi } => {
                    (xi, edit_distance(&truth, &stats.threshold(xi, method, config.pair_rule))?)
                }
                Selection::Feasibility => {
                    let alpha = family_alpha(spec, config.param_spec.j_max)?;
                    let probe = check_threshold_feasibility(
                        n as u64,
                        spec.p,
                        config.param_spec.j_min,
                        alpha,
                        path_threshold(spec),
                        config.param_spec.j_min,
                    )?;
                    let xi = probe.smallest_admissible_xi();
                    (xi, edit_distance(&truth, &stats.threshold(xi, method, config.pair_rule))?)
                }
            };
            let elapsed = pass_time + start.elapsed().as_secs_f64();
            rows.push(ResultRow {
                graph_kind: label.to_string(),
                n,
                method,
                selection: config.selection.label().to_string(),
                trial: job.trial,
                trial_seed,
                best_xi: quantize(xi),
                edit_distance_normalized: quantize(distance.normalized),
                edit_distance_raw: distance.raw,
                wall_time: config.record_wall_time.then(|| quantize(elapsed)),
            });
        }
    }
    Ok(rows)
}

/// Mean and standard error over trials for every (graph, method, n) cell.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut out: Vec<SummaryRow> = Vec::new();
    let mut keys: Vec<(String, Method, usize)> = Vec::new();
    for r in rows {
        let key = (r.graph_kind.clone(), r.method, r.n);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    for (graph_kind, method, n) in keys {
        let vals: Vec<f64> = rows
            .iter()
            .filter(|r| r.graph_kind == graph_kind && r.method == method && r.n == n)
            .map(|r| r.edit_distance_normalized)
            .collect();
        let t = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / t;
        let stderr = if vals.len() > 1 {
            (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (t - 1.0)).sqrt() / t.sqrt()
        } else {
            0.0
        };
        out.push(SummaryRow {
            graph_kind,
            method,
            n,
            trials: vals.len(),
            mean_distance: quantize(mean),
            stderr: quantize(stderr),
        });
    }
    out
}

const RESULT_HEADER: [&str; 10] = [
    "graph_kind",
    "n",
    "method",
    "selection",
    "trial",
    "trial_seed",
    "best_xi",
    "edit_distance_normalized",
    "edit_distance_raw",
    "wall_time",
];

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Format(format!("{}: {other:?}", path.display())),
    }
}

pub fn write_results_csv(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let fail = csv_error(path);
    let mut w = csv::Writer::from_path(path).map_err(&fail)?;
    w.write_record(RESULT_HEADER).map_err(&fail)?;
    for r in rows {
        w.write_record([
            r.graph_kind.clone(),
            r.n.to_string(),
            r.method.to_string(),
            r.selection.clone(),
            r.trial.to_string(),
            r.trial_seed.to_string(),
            fmt_float(r.best_xi),
            fmt_float(r.edit_distance_normalized),
            r.edit_distance_raw.to_string(),
            r.wall_time.map(fmt_float).unwrap_or_default(),
        ])
        .map_err(&fail)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let fail = csv_error(path);
    let mut r = csv::Reader::from_path(path).map_err(&fail)?;
    let header = r.headers().map_err(&fail)?.clone();
    if header.iter().ne(RESULT_HEADER.iter().copied()) {
        return Err(Error::Format(format!("{}: unexpected header", path.display())));
    }
    let bad = |what: &str| Error::Format(format!("{}: bad {what}", path.display()));
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(&fail)?;
        let float = |k: usize, what: &str| rec[k].parse::<f64>().map_err(|_| bad(what));
        let int = |k: usize, what: &str| rec[k].parse::<usize>().map_err(|_| bad(what));
        rows.push(ResultRow {
            graph_kind: rec[0].to_string(),
            n: int(1, "n")?,
            method: rec[2].parse()?,
            selection: rec[3].to_string(),
            trial: int(4, "trial")?,
            trial_seed: rec[5].parse().map_err(|_| bad("trial_seed"))?,
            best_xi: float(6, "best_xi")?,
            edit_distance_normalized: float(7, "edit_distance_normalized")?,
            edit_distance_raw: int(8, "edit_distance_raw")?,
            wall_time: if rec[9].is_empty() { None } else { Some(float(9, "wall_time")?) },
        });
    }
    Ok(rows)
}

fn write_outputs(
    dir: &Path,
    rows: &[ResultRow],
    summary: &[SummaryRow],
    labels: &[String],
    methods: &[Method],
) -> Result<()> {
    let curves = dir.join("curves");
    fs::create_dir_all(&curves).map_err(|e| Error::io(&curves, e))?;
    write_results_csv(&dir.join("results.csv"), rows)?;

    let path = dir.join("summary.csv");
    let fail = csv_error(&path);
    let mut w = csv::Writer::from_path(&path).map_err(&fail)?;
    w.write_record(["graph_kind", "method", "n", "trials", "mean_distance", "stderr"])
        .map_err(&fail)?;
    for s in summary {
        w.write_record([
            s.graph_kind.clone(),
            s.method.to_string(),
            s.n.to_string(),
            s.trials.to_string(),
            fmt_float(s.mean_distance),
            fmt_float(s.stderr),
        ])
        .map_err(&fail)?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    for label in labels {
        for &method in methods {
            let path = curves.join(format!("{label}_{}.csv", method.label().to_ascii_lowercase()));
            let fail = csv_error(&path);
            let mut w = csv::Writer::from_path(&path).map_err(&fail)?;
            w.write_record(["n", "mean_distance", "stderr"]).map_err(&fail)?;
            let mut points: Vec<&SummaryRow> = summary
                .iter()
                .filter(|s| &s.graph_kind == label && s.method == method)
                .collect();
            points.sort_by_key(|s| s.n);
            for s in points {
                w.write_record([s.n.to_string(), fmt_float(s.mean_distance), fmt_float(s.stderr)])
                    .map_err(&fail)?;
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_cycle;
    use crate::ising::IsingModel;
    use crate::learner::{learn, LearnerConfig};

    fn small_config(dir: Option<PathBuf>) -> ExperimentConfig {
        ExperimentConfig {
            ensembles: vec![EnsembleSpec::cycle(8), EnsembleSpec::erdos_renyi(8, 1.5, 0)],
            param_spec: ParamSpec::new(0.3, 0.5, SignMode::Mixed, 0).unwrap(),
            sample_sizes: vec![50, 400],
            methods: vec![Method::Cvdt, Method::Cmit],
            eta: EtaOverrides::default(),
            threshold_grid: ThresholdGrid::Geometric {
                min: 1e-3,
                max: 1.0,
                count: 12,
            },
            trials: 2,
            gibbs: GibbsConfig {
                burnin_sweeps: 20,
                thin_sweeps: 2,
            },
            output_dir: dir,
            master_seed: 17,
            pair_rule: PairRule::OrderedOr,
            selection: Selection::Oracle,
            record_wall_time: false,
            allow_large_n: false,
        }
    }

    #[test]
    fn quantize_keeps_six_digits() {
        assert_eq!(quantize(0.0125892541), 0.0125893);
        assert_eq!(quantize(123456789.0), 123457000.0);
        assert_eq!(quantize(0.0), 0.0);
        assert_eq!(fmt_float(1.0), "1");
    }

    #[test]
    fn default_grid() {
        let g = ThresholdGrid::default().values().unwrap();
        assert_eq!(g.len(), 40);
        assert_eq!(g[0], 1e-3);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(ThresholdGrid::Values(vec![]).values().is_err());
        assert!(ThresholdGrid::Values(vec![0.1, -1.0]).values().is_err());
    }

    #[test]
    fn eta_defaults() {
        let o = EtaOverrides::default();
        assert_eq!(o.eta_for(&EnsembleSpec::cycle(10)), 2);
        assert_eq!(o.eta_for(&EnsembleSpec::small_world(10, 4, 1.0, 0)), 6);
        let o = EtaOverrides {
            small_world: Some(2),
            ..o
        };
        assert_eq!(o.eta_for(&EnsembleSpec::small_world(10, 4, 1.0, 0)), 2);
    }

    #[test]
    fn sweep_edge_cases() {
        let g = gen_cycle(6).unwrap();
        let m = IsingModel::uniform(g.clone(), 0.5).unwrap();
        let s = gibbs_sample(&m, 3000, &GibbsConfig::default(), 1).unwrap();
        let stats = PairStatistics::from_samples(&s, 2);
        let r = sweep_cached(&stats, &g, Method::Cvdt, PairRule::OrderedOr, &[5.0]).unwrap();
        assert_eq!(r.best_distance.normalized, 1.0);
        let grid = ThresholdGrid::default().values().unwrap();
        let r = sweep_cached(&stats, &g, Method::Cvdt, PairRule::OrderedOr, &grid).unwrap();
        assert_eq!(r.best_distance.raw, 0);
        assert!(r.curve.windows(2).all(|w| w[0].edges >= w[1].edges));
        let first_zero = r.curve.iter().find(|pt| pt.distance.raw == 0).unwrap();
        assert_eq!(r.best_xi, first_zero.xi);
        assert!(sweep_cached(&stats, &g, Method::Cvdt, PairRule::OrderedOr, &[]).is_err());
    }

    #[test]
    fn sweep_matches_rerunning_the_learner() {
        let g = gen_cycle(7).unwrap();
        let m = IsingModel::uniform(g.clone(), 0.3).unwrap();
        let s = gibbs_sample(&m, 500, &GibbsConfig::default(), 4).unwrap();
        let grid = ThresholdGrid::default().values().unwrap();
        for method in Method::ALL {
            for rule in [PairRule::OrderedOr, PairRule::MaxOfBoth] {
                let r = sweep_threshold(&s, &g, method, 1, &grid, rule).unwrap();
                for pt in &r.curve {
                    let cfg = LearnerConfig::new(1, pt.xi, method).unwrap().with_pair_rule(rule);
                    let direct = learn(&s, &cfg).unwrap();
                    assert_eq!(direct.k(), pt.edges);
                    assert_eq!(edit_distance(&g, &direct).unwrap(), pt.distance);
                }
            }
        }
    }

    #[test]
    fn pipeline_outputs_are_deterministic_and_round_trip() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let out_a = run_experiment(&small_config(Some(a.path().to_path_buf()))).unwrap();
        run_experiment(&small_config(Some(b.path().to_path_buf()))).unwrap();
        for file in ["results.csv", "summary.csv", "curves/cycle_cvdt.csv", "curves/erdos_renyi_cmit.csv"] {
            let x = fs::read(a.path().join(file)).unwrap();
            let y = fs::read(b.path().join(file)).unwrap();
            assert_eq!(x, y, "{file}");
        }
        assert_eq!(out_a.rows.len(), 2 * 2 * 2 * 2);
        let back = read_results_csv(&a.path().join("results.csv")).unwrap();
        assert_eq!(back, out_a.rows);
        let grid = small_config(None).threshold_grid.values().unwrap();
        assert!(out_a.rows.iter().all(|r| grid.contains(&r.best_xi)));
        assert!(out_a.rows.iter().all(|r| r.wall_time.is_none()));
    }

    #[test]
    fn selection_modes() {
        let mut cfg = small_config(None);
        cfg.trials = 1;
        cfg.selection = Selection::Fixed { xi: 0.05 };
        let rows = run_experiment(&cfg).unwrap().rows;
        assert!(rows.iter().all(|r| r.best_xi == 0.05 && r.selection == "fixed"));
        cfg.selection = Selection::Feasibility;
        cfg.ensembles = vec![EnsembleSpec::cycle(8)];
        let rows = run_experiment(&cfg).unwrap().rows;
        let alpha = 0.5f64.tanh() / 0.5;
        let expected = (alpha.powi(4) * 8f64.ln()).max((8f64.ln() / 50.0).sqrt());
        assert!(rows.iter().any(|r| r.n == 50 && (r.best_xi - expected).abs() < 1e-5 * expected));
        cfg.record_wall_time = true;
        let rows = run_experiment(&cfg).unwrap().rows;
        assert!(rows.iter().all(|r| r.wall_time.is_some()));
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = small_config(None);
        cfg.trials = 0;
        assert!(run_experiment(&cfg).is_err());
        let mut cfg = small_config(None);
        cfg.sample_sizes = vec![100_000];
        assert!(cfg.validate().is_err());
        cfg.allow_large_n = true;
        assert!(cfg.validate().is_ok());
        let text = serde_json::to_string(&small_config(None)).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), small_config(None));
    }

    #[test]
    fn unwritable_output_dir_is_an_io_error() {
        let f = tempfile::NamedTempFile::new().unwrap();
        let mut cfg = small_config(Some(f.path().join("sub")));
        cfg.trials = 1;
        cfg.sample_sizes = vec![20];
        let err = run_experiment(&cfg).unwrap_err();
        assert!(err.is_io(), "{err}");
    }
}
