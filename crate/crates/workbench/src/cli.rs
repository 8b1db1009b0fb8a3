//! The `qubo` command line.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qubo_core::bpgnn::{predict, train, BpgnnConfig, BpgnnModel, TrainConfig};
use qubo_core::data::{assign_splits, generate_pair, pair_seed, DataGenParams, Dataset};
use qubo_core::eval::{
    accuracy, hybrid_infer, ising_sweep, probe_landscape, rel_qubo, EvalRecord, GridSpec,
};
use qubo_core::qubo::{gen_ising, gen_lattice_laplacian, gen_random_dense, lattice_adjacency, ObservedVector, QuboInstance};
use qubo_core::solvers::{
    exhaustive_solve_with_cap, sab_solve, tabu_solve, SabParams, TabuParams, DEFAULT_EXHAUSTIVE_CAP,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::bench::{benchmark, BenchConfig, Method, NeuralBench};
use crate::io;

pub const OUT_DIR_ENV: &str = "QUBO_OUT_DIR";

#[derive(Debug, Parser, Serialize)]
#[command(name = "qubo", version, about = "QUBO instances, solvers, datasets and graph-network training")]
pub struct Cli {
    /// Directory for outputs whose path is not given explicitly.
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = ".")]
    pub out_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Write a QUBO instance as Matrix Market plus a metadata sidecar.
    GenInstance(GenInstanceArgs),
    /// Generate (b, x) pairs for an instance as JSON Lines.
    GenData(GenDataArgs),
    /// Solve one problem with a classical solver.
    Solve(SolveArgs),
    /// Train a network on a dataset.
    Train(TrainArgs),
    /// Score methods on a dataset split.
    Eval(EvalArgs),
    /// Distance-to-minimizer landscape over two random directions of b.
    Probe(ProbeArgs),
    /// Minimizers of the lattice Ising model over a range of field strengths.
    Sweep(SweepArgs),
    /// Compare methods over several random instances.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Dense,
    Lattice,
    Ising,
}

#[derive(Debug, Args, Serialize)]
pub struct GenInstanceArgs {
    #[arg(long, value_enum, default_value = "dense")]
    pub kind: InstanceKind,
    /// Size of a dense instance.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Entry scale of a dense instance.
    #[arg(long, default_value_t = 0.2)]
    pub scale: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Side length of lattice and Ising instances.
    #[arg(long, default_value_t = 16)]
    pub side: usize,
    /// Uniform field of the Ising instance.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where the Ising field vector goes (default: `<out stem>.b.txt`).
    #[arg(long)]
    pub b_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GenDataArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub mu: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long, default_value_t = 10)]
    pub refine_steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Training fraction of the split.
    #[arg(long, default_value_t = 0.8)]
    pub split: f64,
    /// Label with exact enumeration instead of Tabu repair.
    #[arg(long)]
    pub exhaustive_labels: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Observed vector from a text file or from a dataset record.
#[derive(Debug, Args, Serialize)]
pub struct ProblemArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, conflicts_with = "dataset")]
    pub b: Option<PathBuf>,
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long, default_value_t = 0, requires = "dataset")]
    pub index: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    Exhaustive,
    Tabu,
    Sab,
}

#[derive(Debug, Args, Serialize)]
pub struct TabuArgs {
    #[arg(long = "tabu-steps", default_value_t = 1000)]
    pub tabu_steps: usize,
    #[arg(long, default_value_t = 10)]
    pub tenure: usize,
    /// Stop after this many steps without improvement; 0 disables.
    #[arg(long = "tabu-patience", default_value_t = 50)]
    pub tabu_patience: usize,
    #[arg(long)]
    pub aspiration: bool,
}

impl TabuArgs {
    fn params(&self, k: usize) -> TabuParams {
        TabuParams {
            max_steps: self.tabu_steps,
            tenure: self.tenure,
            aspiration: self.aspiration,
            patience: (self.tabu_patience > 0).then_some(self.tabu_patience),
            ..TabuParams::new(k)
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SabArgs {
    #[arg(long = "sab-steps", default_value_t = 1000)]
    pub sab_steps: usize,
    #[arg(long, default_value_t = 0.5)]
    pub dt: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a0: f64,
    #[arg(long)]
    pub c0: Option<f64>,
    #[arg(long = "sab-seed", default_value_t = 0)]
    pub sab_seed: u64,
}

impl SabArgs {
    fn params(&self) -> SabParams {
        SabParams {
            steps: self.sab_steps,
            dt: self.dt,
            a0: self.a0,
            c0: self.c0,
            seed: self.sab_seed,
            ..SabParams::default()
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value = "tabu")]
    pub method: SolveMethod,
    #[command(flatten)]
    pub tabu: TabuArgs,
    #[command(flatten)]
    pub sab: SabArgs,
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 32)]
    pub d: usize,
    #[arg(long, default_value_t = 4)]
    pub layers: usize,
    /// Euler step of the diffusion and reaction updates.
    #[arg(long, default_value_t = 0.5)]
    pub step: f64,
    #[arg(long, default_value_t = 0.0)]
    pub dropout: f64,
    #[arg(long)]
    pub no_qubo_features: bool,
    /// Fix every diffusion coefficient at 1.
    #[arg(long)]
    pub fixed_diffusion: bool,
    #[arg(long, default_value_t = 0)]
    pub model_seed: u64,
}

impl ModelArgs {
    fn config(&self) -> BpgnnConfig {
        BpgnnConfig {
            d: self.d,
            layers: self.layers,
            step: self.step,
            dropout: self.dropout,
            use_qubo_features: !self.no_qubo_features,
            learn_diffusion: !self.fixed_diffusion,
            seed: self.model_seed,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct OptimArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    #[arg(long, default_value_t = 0.0)]
    pub weight_decay: f64,
    #[arg(long, default_value_t = 200)]
    pub epochs: usize,
    #[arg(long, default_value_t = 32)]
    pub batch_size: usize,
    #[arg(long = "train-seed", default_value_t = 0)]
    pub train_seed: u64,
    /// Early stop after this many epochs without a better validation loss.
    #[arg(long)]
    pub patience: Option<usize>,
}

impl OptimArgs {
    fn config(&self) -> TrainConfig {
        TrainConfig {
            lr: self.lr,
            weight_decay: self.weight_decay,
            epochs: self.epochs,
            batch_size: self.batch_size,
            seed: self.train_seed,
            patience: self.patience,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct TrainArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub optim: OptimArgs,
    /// Checkpoint path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub history: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitChoice {
    Train,
    Val,
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    /// Checkpoint for the neural methods.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Comma-separated: exhaustive, tabu, sab, bpgnn, bpgnn+ts.
    #[arg(long, value_delimiter = ',', default_value = "tabu,sab")]
    pub methods: Vec<String>,
    #[arg(long, value_enum, default_value = "val")]
    pub split: SplitChoice,
    #[arg(long, default_value_t = 10)]
    pub hybrid_steps: usize,
    #[command(flatten)]
    pub tabu: TabuArgs,
    #[command(flatten)]
    pub sab: SabArgs,
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Seed of the two random directions.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 41)]
    pub resolution: usize,
    /// Largest k solved exactly; bigger problems use Tabu search.
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// Lattice side length.
    #[arg(long, default_value_t = 3)]
    pub side: usize,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    pub b_lo: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub b_hi: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 0.2)]
    pub scale: f64,
    #[arg(long, default_value_t = 10)]
    pub realizations: usize,
    /// Test problems per realization.
    #[arg(long, default_value_t = 20)]
    pub pairs: usize,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 10)]
    pub refine_steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated: exhaustive, tabu, sab, bpgnn, bpgnn+ts.
    #[arg(long, value_delimiter = ',', default_value = "exhaustive,tabu,sab")]
    pub methods: Vec<String>,
    /// Checkpoint shared by every realization; without it neural rows train
    /// a fresh model per realization.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value_t = 800)]
    pub train_pairs: usize,
    #[arg(long, default_value_t = 10)]
    pub hybrid_steps: usize,
    #[command(flatten)]
    pub net: ModelArgs,
    #[command(flatten)]
    pub optim: OptimArgs,
    #[command(flatten)]
    pub tabu: TabuArgs,
    #[command(flatten)]
    pub sab: SabArgs,
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn output(out_dir: &Path, given: &Option<PathBuf>, default: &str) -> PathBuf {
    given.clone().unwrap_or_else(|| out_dir.join(default))
}

/// `dir/name.ext` -> `dir/name.config.json`.
pub fn config_path(out: &Path) -> PathBuf {
    out.with_extension("config.json")
}

fn write_config(cli: &Cli, out: &Path, resolved: &impl Serialize) -> Result<()> {
    #[derive(Serialize)]
    struct Resolved<'a, T> {
        version: &'a str,
        command: &'a Command,
        resolved: &'a T,
    }
    let doc = Resolved {
        version: env!("CARGO_PKG_VERSION"),
        command: &cli.command,
        resolved,
    };
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    let path = config_path(out);
    std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_problem(p: &ProblemArgs) -> Result<(QuboInstance, ObservedVector)> {
    let inst = io::read_instance(&p.instance)?;
    let b = match (&p.b, &p.dataset) {
        (Some(path), _) => io::read_vector(path)?,
        (None, Some(path)) => {
            let ds = io::read_dataset(path)?;
            check_k(&inst, &ds, path)?;
            match ds.pairs.get(p.index) {
                Some(pair) => pair.b.clone(),
                None => bail!("{}: index {} out of range (dataset has {} pairs)", path.display(), p.index, ds.len()),
            }
        }
        (None, None) => bail!("pass the observed vector with --b FILE or --dataset FILE --index I"),
    };
    if b.len() != inst.k() {
        bail!("observed vector has length {} but the instance has k = {}", b.len(), inst.k());
    }
    Ok((inst, b))
}

fn check_k(inst: &QuboInstance, ds: &Dataset, path: &Path) -> Result<()> {
    if ds.k != inst.k() {
        bail!("{}: dataset k = {} does not match instance k = {}", path.display(), ds.k, inst.k());
    }
    Ok(())
}

fn format_x(x: &[u8]) -> String {
    let parts: Vec<String> = x.iter().map(u8::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Pairs are generated in parallel and assembled in index order.
pub fn generate_dataset_par(
    instance: &QuboInstance,
    name: &str,
    n: usize,
    params: &DataGenParams,
    train_fraction: f64,
) -> Result<Dataset> {
    if n == 0 {
        bail!("--n must be at least 1");
    }
    params.validate()?;
    let pairs = (0..n)
        .into_par_iter()
        .map(|i| generate_pair(instance, params, pair_seed(params.seed, i)))
        .collect::<qubo_core::Result<Vec<_>>>()?;
    let splits = assign_splits(n, params.seed, train_fraction)?;
    Ok(Dataset::new(instance.k(), name, params.clone(), pairs, splits)?)
}

fn parse_methods(names: &[String]) -> Result<Vec<Method>> {
    names
        .iter()
        .map(|s| s.trim().parse::<Method>().map_err(anyhow::Error::msg))
        .collect()
}

pub fn run(cli: &Cli) -> Result<()> {
    let dir = &cli.out_dir;
    match &cli.command {
        Command::GenInstance(a) => {
            let out = output(dir, &a.out, "instance.mtx");
            let inst = match a.kind {
                InstanceKind::Dense => {
                    if a.k == 0 {
                        bail!("--k must be at least 1");
                    }
                    gen_random_dense(a.k, a.seed, a.scale)
                }
                InstanceKind::Lattice => {
                    if a.side < 2 {
                        bail!("--side must be at least 2");
                    }
                    gen_lattice_laplacian(a.side)
                }
                InstanceKind::Ising => {
                    if a.side < 2 {
                        bail!("--side must be at least 2");
                    }
                    let (inst, b) = gen_ising(&lattice_adjacency(a.side), a.beta)?;
                    let b_out = a.b_out.clone().unwrap_or_else(|| out.with_extension("b.txt"));
                    io::write_vector(&b, &b_out)?;
                    inst
                }
            };
            io::write_instance(&inst, &out)?;
            write_config(cli, &out, &serde_json::json!({ "out": out, "k": inst.k() }))?;
            println!("wrote {} (k = {}, {} entries)", out.display(), inst.k(), inst.entries().len());
        }
        Command::GenData(a) => {
            let out = output(dir, &a.out, "dataset.jsonl");
            let inst = io::read_instance(&a.instance)?;
            let params = DataGenParams {
                sigma: a.sigma,
                mu: a.mu,
                eps_bin: a.eps,
                refine_steps: a.refine_steps,
                seed: a.seed,
                exhaustive_labels: a.exhaustive_labels,
            };
            let name = a
                .instance
                .file_name()
                .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
            let ds = generate_dataset_par(&inst, &name, a.n, &params, a.split)?;
            io::write_dataset(&ds, &out)?;
            write_config(cli, &out, &serde_json::json!({ "out": out, "params": params }))?;
            println!(
                "wrote {} ({} pairs: {} train, {} val)",
                out.display(),
                ds.len(),
                ds.train_indices().len(),
                ds.val_indices().len()
            );
        }
        Command::Solve(a) => {
            let out = output(dir, &a.out, "result.json");
            let (inst, b) = load_problem(&a.problem)?;
            let res = match a.method {
                SolveMethod::Exhaustive => exhaustive_solve_with_cap(&inst, &b, a.cap)?,
                SolveMethod::Tabu => tabu_solve(&inst, &b, &a.tabu.params(inst.k()))?,
                SolveMethod::Sab => sab_solve(&inst, &b, &a.sab.params())?,
            };
            io::write_solver_result(&res, &out)?;
            write_config(cli, &out, &serde_json::json!({ "out": out }))?;
            println!("x={} f={}", format_x(&res.x_best), res.f_best);
        }
        Command::Train(a) => {
            let out = output(dir, &a.out, "checkpoint.json");
            let history_path = a.history.clone().unwrap_or_else(|| out.with_extension("history.csv"));
            let inst = io::read_instance(&a.instance)?;
            let ds = io::read_dataset(&a.dataset)?;
            check_k(&inst, &ds, &a.dataset)?;
            let model_cfg = a.model.config();
            let train_cfg = a.optim.config();
            train_cfg.validate()?;
            let init = BpgnnModel::new(model_cfg.clone())?;
            let (model, history) = train(&init, &inst, &ds, &train_cfg)?;
            io::save_checkpoint(&model, &out)?;
            io::write_history_csv(&history, &history_path)?;
            write_config(
                cli,
                &out,
                &serde_json::json!({ "out": out, "history": history_path, "model": model_cfg, "train": train_cfg }),
            )?;
            if let Some(last) = history.last() {
                println!(
                    "trained {} epochs; last val_acc = {}, val_relqubo = {}; wrote {}",
                    history.len(),
                    last.val_acc,
                    last.val_relqubo,
                    out.display()
                );
            }
        }
        Command::Eval(a) => {
            let out = output(dir, &a.out, "eval.csv");
            let inst = io::read_instance(&a.instance)?;
            let ds = io::read_dataset(&a.dataset)?;
            check_k(&inst, &ds, &a.dataset)?;
            let methods = parse_methods(&a.methods)?;
            let model = match &a.model {
                Some(p) => Some(io::load_checkpoint(p)?),
                None if methods.iter().any(|m| m.is_neural()) => {
                    bail!("neural methods need a trained model: pass --model CHECKPOINT")
                }
                None => None,
            };
            let idx: Vec<usize> = match a.split {
                SplitChoice::Train => ds.train_indices(),
                SplitChoice::Val => ds.val_indices(),
                SplitChoice::All => (0..ds.len()).collect(),
            };
            if idx.is_empty() {
                bail!("the selected split is empty");
            }
            let name = a.dataset.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
            let mut records = Vec::new();
            for m in methods {
                let (mut acc, mut rel, mut rel_n, mut ms) = (0.0, 0.0, 0usize, 0.0);
                for &i in &idx {
                    let pair = &ds.pairs[i];
                    let clock = Instant::now();
                    let x = match m {
                        Method::Exhaustive => exhaustive_solve_with_cap(&inst, &pair.b, a.cap)?.x_best,
                        Method::Tabu => tabu_solve(&inst, &pair.b, &a.tabu.params(inst.k()))?.x_best,
                        Method::Sab => {
                            let p = SabParams {
                                seed: pair.provenance.seed,
                                ..a.sab.params()
                            };
                            sab_solve(&inst, &pair.b, &p)?.x_best
                        }
                        Method::Bpgnn => predict(model.as_ref().expect("checked"), &inst, &pair.b, 0.5)?,
                        Method::BpgnnTs => {
                            hybrid_infer(model.as_ref().expect("checked"), &inst, &pair.b, a.hybrid_steps)?
                                .refined
                                .x_best
                        }
                    };
                    ms += clock.elapsed().as_secs_f64() * 1e3;
                    acc += accuracy(&pair.x, &x)?;
                    if let Ok(r) = rel_qubo(&inst, &pair.b, &pair.x, &x) {
                        rel += r;
                        rel_n += 1;
                    }
                }
                let n = idx.len() as f64;
                records.push(EvalRecord {
                    method: m.name().to_string(),
                    dataset: name.clone(),
                    accuracy: acc / n,
                    rel_qubo: if rel_n == 0 { f64::NAN } else { rel / rel_n as f64 },
                    elapsed_ms: ms / n,
                });
            }
            io::write_eval_csv(&records, &out)?;
            write_config(cli, &out, &serde_json::json!({ "out": out, "evaluated": idx.len() }))?;
            for r in &records {
                println!("{}: accuracy = {}, rel_qubo = {}", r.method, r.accuracy, r.rel_qubo);
            }
        }
        Command::Probe(a) => {
            let out = output(dir, &a.out, "landscape.csv");
            let (inst, b) = load_problem(&a.problem)?;
            let grid = GridSpec {
                lo: a.lo,
                hi: a.hi,
                resolution: a.resolution,
            };
            let land = probe_landscape(&inst, &b, a.seed, grid, a.cap)?;
            io::write_landscape_csv(&land, &out)?;
            write_config(cli, &out, &serde_json::json!({ "out": out, "b1": land.b1, "b2": land.b2 }))?;
            println!(
                "wrote {} ({} distinct values, plateau fraction {})",
                out.display(),
                land.distinct_values(),
                land.plateau_fraction()
            );
        }
        Command::Sweep(a) => {
            let out = output(dir, &a.out, "sweep.csv");
            if a.side < 2 {
                bail!("--side must be at least 2");
            }
            let sweep = ising_sweep(&lattice_adjacency(a.side), a.b_lo, a.b_hi, a.samples, a.cap)?;
            io::write_sweep_csv(&sweep, &out)?;
            write_config(cli, &out, &serde_json::json!({ "out": out }))?;
            println!("wrote {} ({} change points)", out.display(), sweep.change_points.len());
        }
        Command::Bench(a) => {
            let out = output(dir, &a.out, "bench.csv");
            let methods = parse_methods(&a.methods)?;
            let mut cfg = BenchConfig::new(a.k, methods.clone());
            cfg.scale = a.scale;
            cfg.realizations = a.realizations;
            cfg.pairs = a.pairs;
            cfg.data = DataGenParams {
                sigma: a.sigma,
                refine_steps: a.refine_steps,
                seed: a.seed,
                ..DataGenParams::default()
            };
            cfg.tabu_steps = a.tabu.tabu_steps;
            cfg.tabu_tenure = a.tabu.tenure;
            cfg.sab = a.sab.params();
            cfg.exhaustive_cap = a.cap;
            if methods.iter().any(|m| m.is_neural()) {
                cfg.neural = Some(NeuralBench {
                    model: a.model.as_deref().map(io::load_checkpoint).transpose()?,
                    model_path: a.model.as_ref().map(|p| p.display().to_string()),
                    bpgnn: a.net.config(),
                    train: a.optim.config(),
                    train_pairs: a.train_pairs,
                    hybrid_steps: a.hybrid_steps,
                });
            }
            let rows = benchmark(&cfg)?;
            io::write_bench_csv(&rows, &out)?;
            write_config(cli, &out, &serde_json::json!({ "out": out, "bench": cfg }))?;
            for r in &rows {
                println!(
                    "{:>10}  acc {:.4} ± {:.4}  rel_qubo {:.3e} ± {:.3e}  {:.3} ms",
                    r.method, r.acc_mean, r.acc_std, r.relqubo_mean, r.relqubo_std, r.time_ms_mean
                );
            }
        }
    }
    Ok(())
}
