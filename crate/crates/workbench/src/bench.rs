//! Table-style comparison of solvers over several random instances.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context};
use qubo_core::bpgnn::{predict, train, BpgnnConfig, BpgnnModel, TrainConfig};
use qubo_core::data::{generate_dataset, DataGenParams, Dataset};
use qubo_core::eval::{accuracy, hybrid_infer, rel_qubo};
use qubo_core::qubo::{evaluate, gen_random_dense, BinaryAssignment, QuboInstance};
use qubo_core::solvers::{
    exhaustive_solve_with_cap, sab_solve, tabu_solve, SabParams, TabuParams, DEFAULT_EXHAUSTIVE_CAP,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "exhaustive")]
    Exhaustive,
    #[serde(rename = "tabu")]
    Tabu,
    #[serde(rename = "sab")]
    Sab,
    #[serde(rename = "bpgnn")]
    Bpgnn,
    #[serde(rename = "bpgnn+ts")]
    BpgnnTs,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Exhaustive, Method::Tabu, Method::Sab, Method::Bpgnn, Method::BpgnnTs];

    pub fn name(self) -> &'static str {
        match self {
            Method::Exhaustive => "exhaustive",
            Method::Tabu => "tabu",
            Method::Sab => "sab",
            Method::Bpgnn => "bpgnn",
            Method::BpgnnTs => "bpgnn+ts",
        }
    }

    pub fn is_neural(self) -> bool {
        matches!(self, Method::Bpgnn | Method::BpgnnTs)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected exhaustive, tabu, sab, bpgnn or bpgnn+ts)"))
    }
}

/// How neural rows get their model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NeuralBench {
    /// Used for every realization when set; otherwise a model is trained on
    /// each realization's training pairs.
    #[serde(skip)]
    pub model: Option<BpgnnModel>,
    pub model_path: Option<String>,
    pub bpgnn: BpgnnConfig,
    pub train: TrainConfig,
    pub train_pairs: usize,
    pub hybrid_steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchConfig {
    pub k: usize,
    /// Entry scale of the random dense instances.
    pub scale: f64,
    pub realizations: usize,
    /// Test pairs per realization.
    pub pairs: usize,
    pub data: DataGenParams,
    pub methods: Vec<Method>,
    pub tabu_steps: usize,
    pub tabu_tenure: usize,
    pub sab: SabParams,
    pub exhaustive_cap: usize,
    pub neural: Option<NeuralBench>,
}

impl BenchConfig {
    pub fn new(k: usize, methods: Vec<Method>) -> Self {
        BenchConfig {
            k,
            scale: 0.2,
            realizations: 10,
            pairs: 20,
            data: DataGenParams::default(),
            methods,
            tabu_steps: 1000,
            tabu_tenure: 10,
            sab: SabParams::default(),
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            neural: None,
        }
    }
}

/// Mean and sample standard deviation over realizations; time is the mean
/// per-problem solve time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: String,
    pub k: usize,
    pub acc_mean: f64,
    pub acc_std: f64,
    pub relqubo_mean: f64,
    pub relqubo_std: f64,
    pub time_ms_mean: f64,
}

struct Outcome {
    x: BinaryAssignment,
    ms: f64,
}

/// Per-method scores of one realization: (accuracy, rel_qubo, ms) means.
type Scores = Vec<(f64, f64, f64)>;

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn realization_dataset(cfg: &BenchConfig, r: usize, inst: &QuboInstance, with_train: bool) -> anyhow::Result<Dataset> {
    let params = DataGenParams {
        seed: cfg.data.seed.wrapping_add(r as u64),
        ..cfg.data.clone()
    };
    let extra = if with_train { cfg.neural.as_ref().map_or(0, |n| n.train_pairs) } else { 0 };
    let n = cfg.pairs + extra;
    let frac = extra as f64 / n as f64;
    Ok(generate_dataset(inst, "bench", n, &params, frac)?)
}

fn run_realization(cfg: &BenchConfig, r: usize) -> anyhow::Result<Scores> {
    let inst = gen_random_dense(cfg.k, cfg.data.seed.wrapping_add(r as u64), cfg.scale);
    let needs_model = cfg.methods.iter().any(|m| m.is_neural());
    let train_here = needs_model && cfg.neural.as_ref().is_some_and(|n| n.model.is_none());
    let ds = realization_dataset(cfg, r, &inst, train_here)?;
    let model = match (&cfg.neural, needs_model) {
        (_, false) => None,
        (None, true) => bail!("neural methods need a trained model (--model) or training settings"),
        (Some(n), true) => Some(match &n.model {
            Some(m) => m.clone(),
            None => {
                let init = BpgnnModel::new(n.bpgnn.clone())?;
                train(&init, &inst, &ds, &n.train)?.0
            }
        }),
    };
    let test: Vec<usize> = if train_here { ds.val_indices() } else { (0..ds.len()).collect() };

    let mut per_method: Vec<Vec<Outcome>> = (0..cfg.methods.len()).map(|_| Vec::new()).collect();
    for &i in &test {
        let b = &ds.pairs[i].b;
        for (mi, &m) in cfg.methods.iter().enumerate() {
            let clock = Instant::now();
            let x = match m {
                Method::Exhaustive => exhaustive_solve_with_cap(&inst, b, cfg.exhaustive_cap)?.x_best,
                Method::Tabu => {
                    let p = TabuParams {
                        max_steps: cfg.tabu_steps,
                        tenure: cfg.tabu_tenure,
                        ..TabuParams::new(cfg.k)
                    };
                    tabu_solve(&inst, b, &p)?.x_best
                }
                Method::Sab => {
                    let p = SabParams {
                        seed: ds.pairs[i].provenance.seed,
                        ..cfg.sab.clone()
                    };
                    sab_solve(&inst, b, &p)?.x_best
                }
                Method::Bpgnn => predict(model.as_ref().expect("checked"), &inst, b, 0.5)?,
                Method::BpgnnTs => {
                    let steps = cfg.neural.as_ref().map_or(10, |n| n.hybrid_steps);
                    hybrid_infer(model.as_ref().expect("checked"), &inst, b, steps)?.refined.x_best
                }
            };
            per_method[mi].push(Outcome {
                x,
                ms: clock.elapsed().as_secs_f64() * 1e3,
            });
        }
    }

    // Reference: exact optimum when tractable, else the best solution any
    // method or the label reached.
    let mut refs = Vec::with_capacity(test.len());
    for (t, &i) in test.iter().enumerate() {
        let b = &ds.pairs[i].b;
        let x = if cfg.k <= cfg.exhaustive_cap {
            exhaustive_solve_with_cap(&inst, b, cfg.exhaustive_cap)?.x_best
        } else {
            let mut best = ds.pairs[i].x.clone();
            let mut f_best = evaluate(&inst, b, &best)?;
            for outs in &per_method {
                let f = evaluate(&inst, b, &outs[t].x)?;
                if f < f_best {
                    f_best = f;
                    best = outs[t].x.clone();
                }
            }
            best
        };
        refs.push(x);
    }

    let mut scores = Vec::with_capacity(cfg.methods.len());
    for outs in &per_method {
        let (mut acc, mut rel, mut rel_n, mut ms) = (0.0, 0.0, 0usize, 0.0);
        for (t, &i) in test.iter().enumerate() {
            acc += accuracy(&refs[t], &outs[t].x)?;
            if let Ok(r) = rel_qubo(&inst, &ds.pairs[i].b, &refs[t], &outs[t].x) {
                rel += r;
                rel_n += 1;
            }
            ms += outs[t].ms;
        }
        let n = test.len() as f64;
        let rel = if rel_n == 0 { f64::NAN } else { rel / rel_n as f64 };
        scores.push((acc / n, rel, ms / n));
    }
    Ok(scores)
}

/// Runs every method on `realizations` random instances. Realizations run in
/// parallel; rows come back in method order.
pub fn benchmark(cfg: &BenchConfig) -> anyhow::Result<Vec<BenchRow>> {
    if cfg.realizations == 0 || cfg.pairs == 0 {
        bail!("realizations and pairs must be at least 1");
    }
    if cfg.methods.is_empty() {
        bail!("no methods selected");
    }
    let per_real: Vec<Scores> = (0..cfg.realizations)
        .into_par_iter()
        .map(|r| run_realization(cfg, r).with_context(|| format!("realization {r}")))
        .collect::<anyhow::Result<_>>()?;
    let rows = cfg
        .methods
        .iter()
        .enumerate()
        .map(|(mi, m)| {
            let col = |f: fn(&(f64, f64, f64)) -> f64| per_real.iter().map(|s| f(&s[mi])).collect::<Vec<_>>();
            let (acc_mean, acc_std) = mean_std(&col(|s| s.0));
            let (relqubo_mean, relqubo_std) = mean_std(&col(|s| s.1));
            let (time_ms_mean, _) = mean_std(&col(|s| s.2));
            BenchRow {
                method: m.name().to_string(),
                k: cfg.k,
                acc_mean,
                acc_std,
                relqubo_mean,
                relqubo_std,
                time_ms_mean,
            }
        })
        .collect();
    Ok(rows)
}
