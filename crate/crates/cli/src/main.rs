//! `coreset` command-line front end.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use robust_coreset::baselines::{farthest_point, sensitivity_sample, uniform_sample};
use robust_coreset::clustering::{ClusteringOptions, Exponent};
use robust_coreset::coreset::Coreset;
use robust_coreset::data::{
    load_dataset, normalize_features, partition_dataset, Dataset, LoadOptions, Scheme, ShardSpec,
    WeightedPointSet, WeightedPoints,
};
use robust_coreset::distributed::{cdcc, drcc};
use robust_coreset::eval::{
    evaluate_coreset, load_config, run_benchmark, write_outputs, ProblemSpec,
};
use robust_coreset::problems::SolverOptions;
use robust_coreset::rcc::{certify_eps, rcc, rcc_fixed_size};
use robust_coreset::seed::derive_seed;
use robust_coreset::{CoresetError, Result};

#[derive(Parser)]
#[command(
    name = "coreset",
    version,
    about = "Robust coreset construction, certification and benchmarking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct DataArgs {
    /// Input CSV (numeric feature columns, optional weight and label columns)
    dataset: PathBuf,
    /// Weight column name (default: a column named `weight` if present)
    #[arg(long)]
    weight_column: Option<String>,
    /// Label column name (default: `label`, or the only non-numeric column)
    #[arg(long)]
    label_column: Option<String>,
    /// Skip min-max normalization of the features
    #[arg(long)]
    raw: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a centralized coreset and write it as CSV plus a JSON sidecar
    Construct {
        #[command(flatten)]
        data: DataArgs,
        /// Construction algorithm
        #[arg(long, value_enum)]
        algo: ConstructAlgo,
        /// Coreset size (all algorithms except `rcc`)
        #[arg(long)]
        size: Option<usize>,
        /// Target accuracy for `rcc`
        #[arg(long)]
        eps: Option<f64>,
        /// Clustering exponent: 1 (k-median) or 2 (k-means)
        #[arg(long, default_value_t = 1)]
        z: u8,
        /// Lipschitz constant of the target cost for the certificate
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// Clusters used by the sensitivity baseline
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Largest k tried by `rcc` (default: number of points)
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output coreset CSV; the sidecar goes next to it with a `.json` extension
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate the distributed protocol over sharded data
    Distributed {
        #[command(flatten)]
        data: DataArgs,
        /// How points are assigned to nodes
        #[arg(long, value_enum, default_value_t = SchemeArg::Uniform)]
        scheme: SchemeArg,
        /// Number of nodes
        #[arg(long)]
        nodes: usize,
        /// Specialized nodes in the hybrid scheme
        #[arg(long, default_value_t = 0)]
        n0: usize,
        /// Total coreset budget N
        #[arg(long = "N")]
        budget: usize,
        /// Per-node cluster bound K (the fixed k for `cdcc`)
        #[arg(long = "K")]
        k_max: usize,
        /// Clustering exponent: 1 or 2
        #[arg(long, default_value_t = 1)]
        z: u8,
        #[arg(long, value_enum, default_value_t = DistributedAlgo::Drcc)]
        algo: DistributedAlgo,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for coreset.csv, coreset.json, trace.json and overhead.json
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a coreset on a downstream problem against the full dataset
    Evaluate {
        #[command(flatten)]
        data: DataArgs,
        /// Coreset CSV produced by `construct` or `distributed`
        coreset: PathBuf,
        #[arg(long, value_enum)]
        problem: ProblemArg,
        /// Clusters for kmeans/kmedian
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Subspace dimension for pca
        #[arg(long, default_value_t = 1)]
        l: usize,
        /// Raw label treated as the positive class for svm
        #[arg(long)]
        positive_label: Option<String>,
        /// Fraction of rows (in file order) used as the training set for svm
        #[arg(long, default_value_t = 0.8)]
        train_fraction: f64,
        #[arg(long, default_value_t = 1)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output JSON (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark described by a JSON config
    Benchmark {
        config: PathBuf,
        /// Directory for runs.csv, summary.json, cdf.csv and timings.csv
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructAlgo {
    Rcc,
    RccFixed,
    Uniform,
    Sensitivity,
    Farthest,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistributedAlgo {
    Drcc,
    Cdcc,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Uniform,
    Specialized,
    Hybrid,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Meb,
    Kmeans,
    Kmedian,
    Pca,
    Svm,
}

fn load(args: &DataArgs) -> Result<Dataset> {
    let opts = LoadOptions {
        weight_column: args.weight_column.clone(),
        label_column: args.label_column.clone(),
    };
    let ds = load_dataset(&args.dataset, &opts)?;
    if args.raw {
        Ok(ds)
    } else {
        normalize_features(&ds)
    }
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T> {
    value
        .ok_or_else(|| CoresetError::Validation(format!("--{flag} is required for this algorithm")))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(f, value)?;
    Ok(())
}

fn write_coreset(coreset: &Coreset, columns: &[String], csv_path: &Path) -> Result<()> {
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    coreset.write_csv(BufWriter::new(File::create(csv_path)?), Some(columns))?;
    let mut sidecar = coreset.sidecar_json();
    sidecar["columns"] = json!(columns);
    write_json(&csv_path.with_extension("json"), &sidecar)
}

#[allow(clippy::too_many_arguments)]
fn construct(
    ds: &Dataset,
    algo: ConstructAlgo,
    size: Option<usize>,
    eps: Option<f64>,
    z: u8,
    rho: f64,
    k: usize,
    k_max: Option<usize>,
    seed: u64,
) -> Result<Coreset> {
    let set = &ds.points;
    let z = Exponent::try_from(z)?;
    let opts = ClusteringOptions::default();
    match algo {
        ConstructAlgo::Rcc => {
            let eps = need(eps, "eps")?;
            Ok(rcc(set, eps, rho, z, seed, k_max.unwrap_or(set.len()), &opts)?.0)
        }
        ConstructAlgo::RccFixed => {
            let size = need(size, "size")?;
            if size == 0 || size > set.len() {
                return Err(CoresetError::InvalidK {
                    k: size,
                    n: set.len(),
                });
            }
            let (mut coreset, clustering) = rcc_fixed_size(set, size, z, seed, &opts)?;
            let cert = certify_eps(set, &clustering, rho, &opts);
            coreset.eps_bound = Some(cert.eps_maxdist);
            coreset.certificate = Some(cert);
            Ok(coreset)
        }
        ConstructAlgo::Uniform => uniform_sample(set, need(size, "size")?, seed),
        ConstructAlgo::Sensitivity => sensitivity_sample(set, need(size, "size")?, k, seed, &opts),
        ConstructAlgo::Farthest => farthest_point(set, need(size, "size")?, seed),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Construct {
            data,
            algo,
            size,
            eps,
            z,
            rho,
            k,
            k_max,
            seed,
            out,
        } => {
            let ds = load(&data)?;
            let coreset = construct(&ds, algo, size, eps, z, rho, k, k_max, seed)?;
            write_coreset(&coreset, &ds.columns, &out)?;
            eprintln!("wrote {} points to {}", coreset.len(), out.display());
        }
        Command::Distributed {
            data,
            scheme,
            nodes,
            n0,
            budget,
            k_max,
            z,
            algo,
            seed,
            out,
        } => {
            let ds = load(&data)?;
            let scheme = match scheme {
                SchemeArg::Uniform => Scheme::Uniform,
                SchemeArg::Specialized => Scheme::Specialized,
                SchemeArg::Hybrid => Scheme::Hybrid,
            };
            let spec = ShardSpec {
                scheme,
                n: nodes,
                n0,
                seed: derive_seed(seed, "shards", 0),
            };
            let shards: Vec<WeightedPointSet> = partition_dataset(&ds, &spec)?
                .into_iter()
                .filter(|s| !s.is_empty())
                .map(|s| s.points)
                .collect();
            let z = Exponent::try_from(z)?;
            let opts = ClusteringOptions::default();
            let (coreset, trace) = match algo {
                DistributedAlgo::Drcc => drcc(&shards, budget, k_max, z, seed, &opts)?,
                DistributedAlgo::Cdcc => cdcc(&shards, budget, k_max, z, seed, &opts)?,
            };
            std::fs::create_dir_all(&out)?;
            write_coreset(&coreset, &ds.columns, &out.join("coreset.csv"))?;
            write_json(&out.join("trace.json"), &serde_json::to_value(&trace)?)?;
            let overhead = json!({
                "nodes": trace.nodes,
                "K": trace.k_max,
                "overhead_scalars": trace.overhead_scalars(),
                "payload_scalars": trace.payload_scalars(),
                "total_scalars": trace.total_scalars(),
                "messages": trace.messages.len(),
                "draws": trace.draws,
                "distinct_points": trace.distinct_points,
            });
            write_json(&out.join("overhead.json"), &overhead)?;
            println!("{}", serde_json::to_string(&overhead)?);
        }
        Command::Evaluate {
            data,
            coreset,
            problem,
            k,
            l,
            positive_label,
            train_fraction,
            runs,
            seed,
            out,
        } => {
            let ds = load(&data)?;
            let (coreset, _) = Coreset::read_csv(File::open(&coreset)?)?;
            if coreset.dim() != ds.points.dim() {
                return Err(CoresetError::DimensionMismatch {
                    expected: ds.points.dim(),
                    got: coreset.dim(),
                });
            }
            let spec = match problem {
                ProblemArg::Meb => ProblemSpec::Meb,
                ProblemArg::Kmeans => ProblemSpec::Kmeans { k },
                ProblemArg::Kmedian => ProblemSpec::Kmedian { k },
                ProblemArg::Pca => ProblemSpec::Pca { l },
                ProblemArg::Svm => ProblemSpec::Svm {
                    positive_label: need(positive_label, "positive-label")?,
                },
            };
            let resolved = spec.resolve(&ds)?;
            let (train, test) = if matches!(spec, ProblemSpec::Svm { .. }) && train_fraction < 1.0 {
                let (a, b) = ds.split_head(train_fraction);
                (a, Some(b))
            } else {
                (ds, None)
            };
            let (optimum, records) = evaluate_coreset(
                &train.points,
                test.as_ref().map(|t| &t.points),
                &coreset,
                &resolved,
                runs,
                seed,
                &SolverOptions::default(),
            )?;
            let report = json!({
                "problem": spec.tag(),
                "coreset_points": coreset.len(),
                "optimum_cost": optimum.cost,
                "runs": records,
            });
            match out {
                Some(path) => write_json(&path, &report)?,
                None => println!("{}", serde_json::to_string_pretty(&report)?),
            }
        }
        Command::Benchmark { config, out_dir } => {
            let (config, base) = load_config(&config)?;
            let output = run_benchmark(&config, &base)?;
            write_outputs(&output, &out_dir)?;
            let failed = output
                .results
                .iter()
                .flat_map(|r| &r.runs)
                .filter(|r| r.error.is_some())
                .count();
            eprintln!(
                "{} cells written to {} ({failed} failed runs)",
                output.results.len(),
                out_dir.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
