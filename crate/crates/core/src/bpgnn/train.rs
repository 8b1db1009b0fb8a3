use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::model::threshold_logits;
use super::{BpgnnModel, GraphOperators, Mode};
use crate::data::Dataset;
use crate::error::{check_len, Error, Result};
use crate::eval::rel_qubo;
use crate::qubo::QuboInstance;
use crate::rng;
use crate::tensor::{adam_step, AdamConfig, AdamState, Tape};

/// Cap on the number of epochs.
pub const MAX_EPOCHS: usize = 200;

/// Rows of a single evaluation-mode pass.
const EVAL_CHUNK: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub lr: f64,
    pub weight_decay: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    /// Stop after this many epochs without a new best validation BCE.
    #[serde(default)]
    pub patience: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lr: 1e-3,
            weight_decay: 0.0,
            epochs: MAX_EPOCHS,
            batch_size: 32,
            seed: 0,
            patience: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lr >= 0.0) || !self.lr.is_finite() {
            return Err(Error::invalid("lr must be finite and non-negative"));
        }
        if !(self.weight_decay >= 0.0) || !self.weight_decay.is_finite() {
            return Err(Error::invalid("weight decay must be finite and non-negative"));
        }
        if self.epochs == 0 || self.epochs > MAX_EPOCHS {
            return Err(Error::invalid("epochs must lie in 1..=200"));
        }
        if self.batch_size == 0 {
            return Err(Error::invalid("batch size must be at least 1"));
        }
        Ok(())
    }
}

/// One grid point of the tuning sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub lr: f64,
    pub weight_decay: f64,
    pub dropout: f64,
}

pub fn hyperparameter_grid() -> Vec<GridPoint> {
    let mut out = Vec::with_capacity(27);
    for lr in [1e-5, 1e-4, 1e-3] {
        for weight_decay in [1e-5, 1e-4, 0.0] {
            for dropout in [0.0, 0.1, 0.5] {
                out.push(GridPoint { lr, weight_decay, dropout });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_bce: f64,
    /// NaN when the validation split is empty, likewise below.
    pub val_bce: f64,
    pub val_acc: f64,
    /// Mean over validation pairs with a defined reference objective.
    pub val_relqubo: f64,
}

fn stack(dataset: &Dataset, idx: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let k = dataset.k;
    let mut b = Vec::with_capacity(idx.len() * k);
    let mut y = Vec::with_capacity(idx.len() * k);
    for &i in idx {
        let p = &dataset.pairs[i];
        b.extend_from_slice(&p.b);
        y.extend(p.x.iter().map(|&v| f64::from(v)));
    }
    (b, y)
}

struct Validation {
    bce: f64,
    acc: f64,
    relqubo: f64,
}

fn validate_split(
    model: &BpgnnModel,
    ops: &GraphOperators,
    instance: &QuboInstance,
    dataset: &Dataset,
    idx: &[usize],
) -> Result<Validation> {
    if idx.is_empty() {
        return Ok(Validation {
            bce: f64::NAN,
            acc: f64::NAN,
            relqubo: f64::NAN,
        });
    }
    let k = dataset.k;
    let (mut bce, mut hits) = (0.0, 0usize);
    let (mut rel_sum, mut rel_n) = (0.0, 0usize);
    for chunk in idx.chunks(EVAL_CHUNK) {
        let (b, y) = stack(dataset, chunk);
        let mut tape = Tape::new();
        let (out, _) = model.record(&mut tape, ops, &b, Mode::Eval)?;
        let loss = tape.bce_with_logits(out, &y)?;
        bce += tape.value(loss).item() * chunk.len() as f64;
        let logits = tape.value(out).data();
        for (n, &i) in chunk.iter().enumerate() {
            let pair = &dataset.pairs[i];
            let xp = threshold_logits(&logits[n * k..(n + 1) * k], 0.5);
            hits += xp.iter().zip(pair.x.iter()).filter(|(a, b)| a == b).count();
            if let Ok(r) = rel_qubo(instance, &pair.b, &pair.x, &xp) {
                rel_sum += r;
                rel_n += 1;
            }
        }
    }
    Ok(Validation {
        bce: bce / idx.len() as f64,
        acc: hits as f64 / (idx.len() * k) as f64,
        relqubo: if rel_n == 0 { f64::NAN } else { rel_sum / rel_n as f64 },
    })
}

/// Mini-batch Adam on the BCE between logits and labels. Returns the
/// parameters with the lowest validation BCE (the last epoch's when there is
/// no validation split) and the per-epoch history.
pub fn train(
    model: &BpgnnModel,
    instance: &QuboInstance,
    dataset: &Dataset,
    cfg: &TrainConfig,
) -> Result<(BpgnnModel, Vec<EpochRecord>)> {
    cfg.validate()?;
    check_len(instance.k(), dataset.k)?;
    let train_idx = dataset.train_indices();
    if train_idx.is_empty() {
        return Err(Error::EmptyTrainingSplit);
    }
    let val_idx = dataset.val_indices();
    let ops = GraphOperators::new(instance);
    let mut current = model.clone();
    let mut adam = AdamState::new(
        AdamConfig {
            lr: cfg.lr,
            weight_decay: cfg.weight_decay,
            ..AdamConfig::default()
        },
        current.params(),
    );
    let mut best: Option<(f64, BpgnnModel)> = None;
    let mut since_best = 0usize;
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut order = train_idx.clone();
    let mut tape = Tape::new();
    for epoch in 0..cfg.epochs {
        let mut shuffle = rng::substream(cfg.seed, &[0x5eed, epoch as u64]);
        order.shuffle(&mut shuffle);
        let mut loss_sum = 0.0;
        for (bi, batch) in order.chunks(cfg.batch_size).enumerate() {
            let (b, y) = stack(dataset, batch);
            let mut drop = rng::substream(cfg.seed, &[epoch as u64, bi as u64]);
            tape.clear();
            let (out, pv) = current.record(&mut tape, &ops, &b, Mode::Train(&mut drop))?;
            let loss = tape.bce_with_logits(out, &y)?;
            loss_sum += tape.value(loss).item() * batch.len() as f64;
            tape.backward(loss)?;
            let grads: Vec<Vec<f64>> = pv
                .iter()
                .zip(current.params())
                .map(|(&v, p)| tape.grad(v).map_or_else(|| vec![0.0; p.len()], <[f64]>::to_vec))
                .collect();
            adam_step(current.params_mut(), &grads, &mut adam)?;
        }
        let v = validate_split(&current, &ops, instance, dataset, &val_idx)?;
        history.push(EpochRecord {
            epoch: epoch + 1,
            train_bce: loss_sum / train_idx.len() as f64,
            val_bce: v.bce,
            val_acc: v.acc,
            val_relqubo: v.relqubo,
        });
        if val_idx.is_empty() {
            continue;
        }
        if best.as_ref().is_none_or(|(b, _)| v.bce < *b) {
            best = Some((v.bce, current.clone()));
            since_best = 0;
        } else {
            since_best += 1;
            if cfg.patience.is_some_and(|p| since_best >= p) {
                break;
            }
        }
    }
    Ok((best.map_or(current, |(_, m)| m), history))
}
