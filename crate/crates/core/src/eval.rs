//! Evaluation of coresets on downstream problems and the Monte Carlo
//! benchmark runner.
//!
//! Output files of [`write_outputs`]:
//! - `runs.csv`: one row per run (`dataset, problem, algorithm, size, run,
//!   seed, metric, value, relative_error, coreset_points, status`);
//! - `summary.json`: per-cell statistics plus the reference optimum costs;
//! - `cdf.csv`: the empirical quantile function of every cell on a
//!   200-point probability grid;
//! - `timings.csv`: wall-clock seconds per run, kept apart so that the
//!   other files are bit-identical across repeated runs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{farthest_point, sensitivity_sample, uniform_sample};
use crate::clustering::{ClusteringOptions, Exponent};
use crate::coreset::Coreset;
use crate::data::{
    load_dataset, normalize_features, partition_dataset, Dataset, LoadOptions, Scheme, ShardSpec,
    WeightedPointSet, WeightedPoints,
};
use crate::distributed::{cdcc, drcc};
use crate::error::{CoresetError, Result};
use crate::problems::{cost, solve, svm_accuracy, Model, Problem, SolverOptions, SvmLabels};
use crate::rcc::rcc_fixed_size;
use crate::seed::{derive_seed, rng_from_seed};

/// `cost(P, x_S) / opt`, or `inf` when `opt == 0`.
pub fn normalized_cost(
    data: &WeightedPointSet,
    model: &Model,
    problem: &Problem,
    optimum_cost: f64,
) -> f64 {
    let c = cost(problem, data, model);
    if optimum_cost > 0.0 {
        c / optimum_cost
    } else if c == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// `|cost(P, x) - cost(S, x)| / cost(P, x)` with the coreset's signed
/// weights; `inf` when `cost(P, x) == 0` but the costs differ.
pub fn relative_error<S: WeightedPoints + ?Sized>(
    data: &WeightedPointSet,
    coreset: &S,
    problem: &Problem,
    model: &Model,
) -> f64 {
    let full = cost(problem, data, model);
    let approx = cost(problem, coreset, model);
    let diff = (full - approx).abs();
    if full != 0.0 {
        diff / full.abs()
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Train on the coreset; non-positive weights go through the
/// clamp-and-renormalize adapter.
pub fn solve_on_coreset(
    coreset: &Coreset,
    problem: &Problem,
    seed: u64,
    opts: &SolverOptions,
) -> Result<Model> {
    let set = if coreset.has_nonpositive_weights() {
        coreset.nonnegative()?
    } else {
        coreset.to_point_set()?
    };
    solve(problem, &set, seed, opts)
}

/// Reference solution on the full data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub model: Model,
    pub cost: f64,
}

pub fn solve_optimum(
    data: &WeightedPointSet,
    problem: &Problem,
    seed: u64,
    opts: &SolverOptions,
) -> Result<Optimum> {
    let model = solve(problem, data, seed, opts)?;
    let cost = cost(problem, data, &model);
    Ok(Optimum { model, cost })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    NormalizedCost,
    Accuracy,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::NormalizedCost => "normalized_cost",
            Metric::Accuracy => "accuracy",
        }
    }
}

/// One Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub metric: Metric,
    pub value: f64,
    pub relative_error: f64,
    pub coreset_points: usize,
    /// `None` on success, else the error message.
    pub error: Option<String>,
    #[serde(skip)]
    pub wall_secs: f64,
}

/// All runs of one (dataset, problem, algorithm, size) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub dataset: String,
    pub problem: String,
    pub algorithm: String,
    pub size: usize,
    pub runs: Vec<RunRecord>,
}

/// Score one coreset: normalized cost (or test accuracy for SVM) and
/// relative error, both at the coreset-trained model.
pub fn score(
    data: &WeightedPointSet,
    test: Option<&WeightedPointSet>,
    coreset: &Coreset,
    problem: &Problem,
    optimum: &Optimum,
    seed: u64,
    opts: &SolverOptions,
) -> Result<(Metric, f64, f64)> {
    let model = solve_on_coreset(coreset, problem, seed, opts)?;
    let relative = relative_error(data, coreset, problem, &model);
    Ok(match (problem, &model) {
        (Problem::Svm(labels), Model::Hyperplane { coef, offset }) => {
            let eval_on = test.unwrap_or(data);
            (
                Metric::Accuracy,
                svm_accuracy(eval_on, labels, coef, *offset),
                relative,
            )
        }
        _ => (
            Metric::NormalizedCost,
            normalized_cost(data, &model, problem, optimum.cost),
            relative,
        ),
    })
}

/// Repeated evaluation of a fixed coreset with solver seeds derived from
/// `seed`.
pub fn evaluate_coreset(
    data: &WeightedPointSet,
    test: Option<&WeightedPointSet>,
    coreset: &Coreset,
    problem: &Problem,
    runs: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<(Optimum, Vec<RunRecord>)> {
    let optimum = solve_optimum(data, problem, derive_seed(seed, "optimum", 0), opts)?;
    let records = (0..runs)
        .map(|r| {
            let s = derive_seed(seed, "evaluate", r as u64);
            let start = Instant::now();
            let out = score(data, test, coreset, problem, &optimum, s, opts);
            record(r, s, out, coreset.len(), start)
        })
        .collect();
    Ok((optimum, records))
}

fn record(
    run: usize,
    seed: u64,
    out: Result<(Metric, f64, f64)>,
    points: usize,
    start: Instant,
) -> RunRecord {
    let wall_secs = start.elapsed().as_secs_f64();
    match out {
        Ok((metric, value, relative_error)) => RunRecord {
            run,
            seed,
            metric,
            value,
            relative_error,
            coreset_points: points,
            error: None,
            wall_secs,
        },
        Err(e) => RunRecord {
            run,
            seed,
            metric: Metric::NormalizedCost,
            value: f64::NAN,
            relative_error: f64::NAN,
            coreset_points: 0,
            error: Some(e.to_string()),
            wall_secs,
        },
    }
}

/// Where a benchmark dataset comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum DatasetSource {
    Csv {
        path: PathBuf,
        #[serde(default = "default_true")]
        normalize: bool,
        #[serde(default)]
        weight_column: Option<String>,
        #[serde(default)]
        label_column: Option<String>,
    },
    /// Unit-weight points i.i.d. uniform in `[low, high]^dim`.
    Uniform {
        n: usize,
        dim: usize,
        low: f64,
        high: f64,
        #[serde(default)]
        seed: u64,
    },
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub name: String,
    #[serde(flatten)]
    pub source: DatasetSource,
}

impl DatasetSpec {
    pub fn load(&self, base_dir: &Path) -> Result<Dataset> {
        match &self.source {
            DatasetSource::Csv {
                path,
                normalize,
                weight_column,
                label_column,
            } => {
                let opts = LoadOptions {
                    weight_column: weight_column.clone(),
                    label_column: label_column.clone(),
                };
                let ds = load_dataset(base_dir.join(path), &opts)?;
                if *normalize {
                    normalize_features(&ds)
                } else {
                    Ok(ds)
                }
            }
            DatasetSource::Uniform {
                n,
                dim,
                low,
                high,
                seed,
            } => Ok(Dataset::unlabeled(uniform_cube(
                *n, *dim, *low, *high, *seed,
            )?)),
        }
    }
}

/// `n` unit-weight points uniform in `[low, high]^dim`.
pub fn uniform_cube(
    n: usize,
    dim: usize,
    low: f64,
    high: f64,
    seed: u64,
) -> Result<WeightedPointSet> {
    use rand::Rng;
    if !(low < high) {
        return Err(CoresetError::Config(format!("empty range [{low}, {high}]")));
    }
    let mut rng = rng_from_seed(seed);
    let rows = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(low..=high)).collect())
        .collect();
    WeightedPointSet::unit(rows)
}

/// Problem as written in a config; SVM names its positive class by raw label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "lowercase")]
pub enum ProblemSpec {
    Meb,
    Kmeans { k: usize },
    Kmedian { k: usize },
    Pca { l: usize },
    Svm { positive_label: String },
}

impl ProblemSpec {
    pub fn resolve(&self, ds: &Dataset) -> Result<Problem> {
        Ok(match self {
            ProblemSpec::Meb => Problem::Meb,
            ProblemSpec::Kmeans { k } => Problem::Kmeans { k: *k },
            ProblemSpec::Kmedian { k } => Problem::Kmedian { k: *k },
            ProblemSpec::Pca { l } => Problem::Pca { l: *l },
            ProblemSpec::Svm { positive_label } => {
                let enc = ds
                    .encoding
                    .as_ref()
                    .ok_or_else(|| CoresetError::Config("SVM needs a labeled dataset".into()))?;
                let idx = enc.index_of(positive_label).ok_or_else(|| {
                    CoresetError::Config(format!("unknown positive label '{positive_label}'"))
                })?;
                Problem::Svm(SvmLabels::from_encoding(enc, idx)?)
            }
        })
    }

    pub fn tag(&self) -> String {
        match self {
            ProblemSpec::Meb => "meb".into(),
            ProblemSpec::Kmeans { k } => format!("kmeans-k{k}"),
            ProblemSpec::Kmedian { k } => format!("kmedian-k{k}"),
            ProblemSpec::Pca { l } => format!("pca-l{l}"),
            ProblemSpec::Svm { positive_label } => format!("svm-{positive_label}"),
        }
    }
}

/// Centralized construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    RccKmeans,
    RccKmedian,
    Uniform,
    Sensitivity,
    Farthest,
}

impl Algorithm {
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::RccKmeans => "rcc-kmeans",
            Algorithm::RccKmedian => "rcc-kmedian",
            Algorithm::Uniform => "uniform",
            Algorithm::Sensitivity => "sensitivity",
            Algorithm::Farthest => "farthest",
        }
    }

    /// Build a coreset of `size` points.
    pub fn construct(
        self,
        set: &WeightedPointSet,
        size: usize,
        problem: &Problem,
        seed: u64,
        opts: &ClusteringOptions,
    ) -> Result<Coreset> {
        match self {
            Algorithm::RccKmeans => {
                Ok(rcc_fixed_size(set, size.min(set.len()), Exponent::Means, seed, opts)?.0)
            }
            Algorithm::RccKmedian => {
                Ok(rcc_fixed_size(set, size.min(set.len()), Exponent::Median, seed, opts)?.0)
            }
            Algorithm::Uniform => uniform_sample(set, size, seed),
            Algorithm::Sensitivity => {
                let k = match problem {
                    Problem::Kmeans { k } | Problem::Kmedian { k } => *k,
                    _ => 2,
                };
                sensitivity_sample(set, size, k, seed, opts)
            }
            Algorithm::Farthest => farthest_point(set, size, seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributedAlgorithm {
    Drcc,
    Cdcc,
}

/// Distributed cell: shard the dataset, run the protocol with budget `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributedSpec {
    pub algorithm: DistributedAlgorithm,
    pub scheme: Scheme,
    pub nodes: usize,
    #[serde(default)]
    pub n0: Option<usize>,
    /// Budgets `N`.
    pub budgets: Vec<usize>,
    /// `K` for the greedy protocol, `k` for the fixed one.
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(default = "default_z")]
    pub z: u8,
}

fn default_z() -> u8 {
    1
}

impl DistributedSpec {
    pub fn tag(&self) -> String {
        let alg = match self.algorithm {
            DistributedAlgorithm::Drcc => "drcc",
            DistributedAlgorithm::Cdcc => "cdcc",
        };
        let scheme = match self.scheme {
            Scheme::Uniform => "uniform",
            Scheme::Specialized => "specialized",
            Scheme::Hybrid => "hybrid",
        };
        format!("{alg}-{scheme}-n{}-K{}-z{}", self.nodes, self.k, self.z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub runs: usize,
    #[serde(default)]
    pub workers: Option<usize>,
    pub datasets: Vec<DatasetSpec>,
    pub problems: Vec<ProblemSpec>,
    #[serde(default)]
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub distributed: Vec<DistributedSpec>,
    /// Leading fraction of every dataset used for training SVMs.
    #[serde(default = "default_train_fraction")]
    pub svm_train_fraction: f64,
}

fn default_train_fraction() -> f64 {
    0.8
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() || self.problems.is_empty() {
            return Err(CoresetError::Config(
                "config lists no datasets or no problems".into(),
            ));
        }
        let centralized = !self.algorithms.is_empty() && !self.sizes.is_empty();
        if !centralized && self.distributed.is_empty() {
            return Err(CoresetError::Config(
                "config lists no algorithm/size pair and no distributed cell".into(),
            ));
        }
        if self.runs == 0 {
            return Err(CoresetError::Config("runs must be positive".into()));
        }
        if !(self.svm_train_fraction > 0.0 && self.svm_train_fraction <= 1.0) {
            return Err(CoresetError::Config(
                "svm_train_fraction must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Parse a config file; relative dataset paths resolve against its directory.
pub fn load_config(path: impl AsRef<Path>) -> Result<(BenchmarkConfig, PathBuf)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let config: BenchmarkConfig = serde_json::from_str(&text)
        .map_err(|e| CoresetError::Config(format!("{}: {e}", path.display())))?;
    config.validate()?;
    let base = path
        .parent()
        .map_or_else(|| PathBuf::from("."), Path::to_path_buf);
    Ok((config, base))
}

/// Worker count: `COReset_WORKERS` overrides the config.
pub fn worker_count(config: &BenchmarkConfig) -> Option<usize> {
    std::env::var("COReset_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .or(config.workers)
        .filter(|&w| w > 0)
}

/// All results of a benchmark plus the reference optima.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOutput {
    pub config: BenchmarkConfig,
    pub optima: BTreeMap<(String, String), Optimum>,
    pub results: Vec<EvalResult>,
}

enum Builder {
    Central(Algorithm),
    Distributed(DistributedSpec),
}

struct Cell {
    dataset: usize,
    problem: usize,
    builder: Builder,
    size: usize,
}

struct Prepared {
    name: String,
    train: Dataset,
    test: Option<Dataset>,
}

fn build_coreset(
    cell: &Cell,
    data: &Dataset,
    problem: &Problem,
    seed: u64,
    opts: &ClusteringOptions,
) -> Result<Coreset> {
    match &cell.builder {
        Builder::Central(a) => a.construct(&data.points, cell.size, problem, seed, opts),
        Builder::Distributed(spec) => {
            let shard_spec = ShardSpec {
                scheme: spec.scheme,
                n: spec.nodes,
                n0: spec.n0.unwrap_or(0),
                seed: derive_seed(seed, "shards", 0),
            };
            let shards: Vec<WeightedPointSet> = partition_dataset(data, &shard_spec)?
                .into_iter()
                .filter(|s| !s.is_empty())
                .map(|s| s.points)
                .collect();
            let z = Exponent::try_from(spec.z)?;
            let out = match spec.algorithm {
                DistributedAlgorithm::Drcc => drcc(&shards, cell.size, spec.k, z, seed, opts)?,
                DistributedAlgorithm::Cdcc => cdcc(&shards, cell.size, spec.k, z, seed, opts)?,
            };
            Ok(out.0)
        }
    }
}

/// Run every cell `runs` times. Per-run failures are recorded in the run's
/// `error` field.
pub fn run_benchmark(config: &BenchmarkConfig, base_dir: &Path) -> Result<BenchmarkOutput> {
    config.validate()?;
    let solver = SolverOptions::default();
    let clustering = solver.clustering;

    let mut prepared = Vec::new();
    let mut problems = Vec::new();
    for spec in &config.datasets {
        let ds = spec.load(base_dir)?;
        let mut per_problem = Vec::new();
        for p in &config.problems {
            per_problem.push(p.resolve(&ds).ok());
        }
        let needs_split = per_problem
            .iter()
            .any(|p| matches!(p, Some(Problem::Svm(_))));
        let (train, test) = if needs_split && config.svm_train_fraction < 1.0 {
            let (a, b) = ds.split_head(config.svm_train_fraction);
            (a, Some(b))
        } else {
            (ds, None)
        };
        prepared.push(Prepared {
            name: spec.name.clone(),
            train,
            test,
        });
        problems.push(per_problem);
    }

    let mut cells = Vec::new();
    for d in 0..prepared.len() {
        for p in 0..config.problems.len() {
            for &a in &config.algorithms {
                for &size in &config.sizes {
                    cells.push(Cell {
                        dataset: d,
                        problem: p,
                        builder: Builder::Central(a),
                        size,
                    });
                }
            }
            for spec in &config.distributed {
                for &size in &spec.budgets {
                    cells.push(Cell {
                        dataset: d,
                        problem: p,
                        builder: Builder::Distributed(spec.clone()),
                        size,
                    });
                }
            }
        }
    }

    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = worker_count(config) {
            b = b.num_threads(w);
        }
        b.build().map_err(|e| CoresetError::Config(e.to_string()))?
    };

    pool.install(|| {
        let mut optima = BTreeMap::new();
        let keys: Vec<(usize, usize)> = (0..prepared.len())
            .flat_map(|d| (0..config.problems.len()).map(move |p| (d, p)))
            .collect();
        let solved: Vec<Option<Result<Optimum>>> = keys
            .par_iter()
            .map(|&(d, p)| {
                problems[d][p].as_ref().map(|prob| {
                    solve_optimum(
                        &prepared[d].train.points,
                        prob,
                        derive_seed(config.seed, "optimum", (d * 1000 + p) as u64),
                        &solver,
                    )
                })
            })
            .collect();
        let mut optimum_of = BTreeMap::new();
        for (&(d, p), s) in keys.iter().zip(solved) {
            if let Some(o) = s {
                let o = o?;
                optima.insert(
                    (prepared[d].name.clone(), config.problems[p].tag()),
                    o.clone(),
                );
                optimum_of.insert((d, p), o);
            }
        }

        let tasks: Vec<(usize, usize)> = (0..cells.len())
            .flat_map(|c| (0..config.runs).map(move |r| (c, r)))
            .collect();
        let records: Vec<RunRecord> = tasks
            .par_iter()
            .map(|&(c, r)| {
                let cell = &cells[c];
                let prep = &prepared[cell.dataset];
                let tag = cell_tag(
                    &prep.name,
                    &config.problems[cell.problem].tag(),
                    &builder_tag(&cell.builder),
                    cell.size,
                );
                let seed = derive_seed(config.seed, &tag, r as u64);
                let start = Instant::now();
                let Some(problem) = problems[cell.dataset][cell.problem].as_ref() else {
                    let err = config.problems[cell.problem]
                        .resolve(&prep.train)
                        .expect_err("unresolved problem has an error");
                    return record(r, seed, Err(err), 0, start);
                };
                let optimum = &optimum_of[&(cell.dataset, cell.problem)];
                let built = build_coreset(cell, &prep.train, problem, seed, &clustering);
                match built {
                    Ok(coreset) => {
                        let out = score(
                            &prep.train.points,
                            prep.test.as_ref().map(|t| &t.points),
                            &coreset,
                            problem,
                            optimum,
                            derive_seed(seed, "solve", 0),
                            &solver,
                        );
                        record(r, seed, out, coreset.len(), start)
                    }
                    Err(e) => record(r, seed, Err(e), 0, start),
                }
            })
            .collect();

        let mut results = Vec::with_capacity(cells.len());
        let mut it = records.into_iter();
        for cell in &cells {
            results.push(EvalResult {
                dataset: prepared[cell.dataset].name.clone(),
                problem: config.problems[cell.problem].tag(),
                algorithm: builder_tag(&cell.builder),
                size: cell.size,
                runs: it.by_ref().take(config.runs).collect(),
            });
        }
        Ok(BenchmarkOutput {
            config: config.clone(),
            optima,
            results,
        })
    })
}

fn builder_tag(b: &Builder) -> String {
    match b {
        Builder::Central(a) => a.tag().to_string(),
        Builder::Distributed(s) => s.tag(),
    }
}

fn cell_tag(dataset: &str, problem: &str, algorithm: &str, size: usize) -> String {
    format!("{dataset}/{problem}/{algorithm}/{size}")
}

/// Number of points of the probability grid of [`quantile_grid`].
pub const CDF_GRID: usize = 200;

/// Empirical quantiles at probabilities `i / (CDF_GRID - 1)`; NaN values are
/// skipped.
pub fn quantile_grid(values: &[f64]) -> Vec<(f64, f64)> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return Vec::new();
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    (0..CDF_GRID)
        .map(|i| {
            let p = i as f64 / (CDF_GRID - 1) as f64;
            let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
            (p, v[rank - 1])
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub dataset: String,
    pub problem: String,
    pub algorithm: String,
    pub size: usize,
    pub metric: Option<Metric>,
    pub runs: usize,
    pub failures: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub mean_relative_error: f64,
    pub max_relative_error: f64,
    pub mean_coreset_points: f64,
}

pub fn summarize(result: &EvalResult) -> CellSummary {
    let ok: Vec<&RunRecord> = result.runs.iter().filter(|r| r.error.is_none()).collect();
    let n = ok.len() as f64;
    let vals: Vec<f64> = ok.iter().map(|r| r.value).collect();
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let rel: Vec<f64> = ok.iter().map(|r| r.relative_error).collect();
    CellSummary {
        dataset: result.dataset.clone(),
        problem: result.problem.clone(),
        algorithm: result.algorithm.clone(),
        size: result.size,
        metric: ok.first().map(|r| r.metric),
        runs: result.runs.len(),
        failures: result.runs.len() - ok.len(),
        mean,
        std: var.sqrt(),
        min: vals.iter().copied().fold(f64::INFINITY, f64::min),
        max: vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_relative_error: rel.iter().sum::<f64>() / n,
        max_relative_error: rel.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_coreset_points: ok.iter().map(|r| r.coreset_points as f64).sum::<f64>() / n,
    }
}

/// Write `runs.csv`, `summary.json`, `cdf.csv` and `timings.csv` into
/// `out_dir`.
pub fn write_outputs(output: &BenchmarkOutput, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let mut runs = csv::Writer::from_path(out_dir.join("runs.csv"))?;
    runs.write_record([
        "dataset",
        "problem",
        "algorithm",
        "size",
        "run",
        "seed",
        "metric",
        "value",
        "relative_error",
        "coreset_points",
        "status",
    ])?;
    let mut timings = csv::Writer::from_path(out_dir.join("timings.csv"))?;
    timings.write_record([
        "dataset",
        "problem",
        "algorithm",
        "size",
        "run",
        "wall_secs",
    ])?;
    let mut cdf = csv::Writer::from_path(out_dir.join("cdf.csv"))?;
    cdf.write_record([
        "dataset",
        "problem",
        "algorithm",
        "size",
        "probability",
        "value",
    ])?;
    for res in &output.results {
        let size = res.size.to_string();
        for r in &res.runs {
            let run = r.run.to_string();
            runs.write_record([
                res.dataset.as_str(),
                &res.problem,
                &res.algorithm,
                &size,
                &run,
                &r.seed.to_string(),
                r.metric.as_str(),
                &r.value.to_string(),
                &r.relative_error.to_string(),
                &r.coreset_points.to_string(),
                r.error.as_deref().unwrap_or("ok"),
            ])?;
            timings.write_record([
                res.dataset.as_str(),
                &res.problem,
                &res.algorithm,
                &size,
                &run,
                &r.wall_secs.to_string(),
            ])?;
        }
        let vals: Vec<f64> = res
            .runs
            .iter()
            .filter(|r| r.error.is_none())
            .map(|r| r.value)
            .collect();
        for (p, v) in quantile_grid(&vals) {
            cdf.write_record([
                res.dataset.as_str(),
                &res.problem,
                &res.algorithm,
                &size,
                &p.to_string(),
                &v.to_string(),
            ])?;
        }
    }
    runs.flush()?;
    timings.flush()?;
    cdf.flush()?;

    let optima: Vec<serde_json::Value> = output
        .optima
        .iter()
        .map(|((d, p), o)| serde_json::json!({"dataset": d, "problem": p, "cost": o.cost, "model": o.model}))
        .collect();
    let cells: Vec<CellSummary> = output.results.iter().map(summarize).collect();
    let summary = serde_json::json!({
        "config": output.config,
        "optima": optima,
        "cells": cells,
    });
    std::fs::write(
        out_dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)?,
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coreset::Provenance;

    fn cube() -> WeightedPointSet {
        uniform_cube(200, 3, 1.0, 50.0, 3).unwrap()
    }

    #[test]
    fn identity_coreset_is_exact() {
        let set = cube();
        let c = Coreset::identity(&set);
        for problem in [Problem::Meb, Problem::Kmeans { k: 2 }] {
            let (opt, recs) =
                evaluate_coreset(&set, None, &c, &problem, 2, 1, &SolverOptions::default())
                    .unwrap();
            assert!(opt.cost > 0.0);
            for r in recs {
                assert!(
                    r.value <= 1.01 && r.value >= 0.99,
                    "{problem:?} {}",
                    r.value
                );
                assert_eq!(r.relative_error, 0.0);
            }
        }
    }

    #[test]
    fn lossless_rcc_on_duplicates() {
        let base = [[1.0, 2.0], [4.0, 4.0], [9.0, 0.0]];
        let rows: Vec<Vec<f64>> = (0..30).map(|i| base[i % 3].to_vec()).collect();
        let set = WeightedPointSet::unit(rows).unwrap();
        let (c, _) = rcc_fixed_size(&set, 3, Exponent::Means, 0, &Default::default()).unwrap();
        let problem = Problem::Kmeans { k: 2 };
        let opts = SolverOptions::default();
        let opt = solve_optimum(&set, &problem, 0, &opts).unwrap();
        let (_, v, rel) = score(&set, None, &c, &problem, &opt, 0, &opts).unwrap();
        assert_eq!(v, 1.0);
        assert!(rel < 1e-12);
    }

    #[test]
    fn zero_cost_sentinels() {
        let set = WeightedPointSet::unit(vec![vec![1.0]]).unwrap();
        let model = Model::Ball {
            center: vec![3.0],
            radius: 0.0,
        };
        assert!(normalized_cost(&set, &model, &Problem::Meb, 0.0).is_infinite());
        let at = Model::Ball {
            center: vec![1.0],
            radius: 0.0,
        };
        let other =
            Coreset::from_rows(&[vec![2.0]], vec![1.0], Provenance::new("t", None)).unwrap();
        assert!(relative_error(&set, &other, &Problem::Meb, &at).is_infinite());
    }

    #[test]
    fn quantiles_are_monotone() {
        let vals: Vec<f64> = (0..37).map(|i| ((i * 17) % 37) as f64).collect();
        let g = quantile_grid(&vals);
        assert_eq!(g.len(), CDF_GRID);
        assert_eq!(g[0].0, 0.0);
        assert_eq!(g[CDF_GRID - 1], (1.0, 36.0));
        assert!(g.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
    }

    #[test]
    fn empty_config_is_rejected() {
        let cfg: BenchmarkConfig =
            serde_json::from_str(r#"{"runs": 1, "datasets": [], "problems": []}"#).unwrap();
        assert!(matches!(cfg.validate(), Err(CoresetError::Config(_))));
    }
}
