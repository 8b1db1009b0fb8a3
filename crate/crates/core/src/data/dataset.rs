use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{DataGenParams, DataPair};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
}

/// Pairs generated against one fixed instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub k: usize,
    /// File name of the instance the pairs belong to.
    pub instance: String,
    pub params: DataGenParams,
    pub pairs: Vec<DataPair>,
    pub splits: Vec<Split>,
}

impl Dataset {
    pub fn new(
        k: usize,
        instance: &str,
        params: DataGenParams,
        pairs: Vec<DataPair>,
        splits: Vec<Split>,
    ) -> Result<Self> {
        crate::error::check_len(pairs.len(), splits.len())?;
        for p in &pairs {
            crate::error::check_len(k, p.b.len())?;
            crate::error::check_len(k, p.x.len())?;
        }
        Ok(Dataset {
            k,
            instance: instance.to_string(),
            params,
            pairs,
            splits,
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn indices(&self, which: Split) -> Vec<usize> {
        self.splits
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == which)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn train_indices(&self) -> Vec<usize> {
        self.indices(Split::Train)
    }

    pub fn val_indices(&self) -> Vec<usize> {
        self.indices(Split::Val)
    }
}

/// Seeded shuffle of `0..n`; the first `round(n · train_fraction)` indices
/// of the shuffle are training pairs.
pub fn assign_splits(n: usize, seed: u64, train_fraction: f64) -> Result<Vec<Split>> {
    if !(0.0..=1.0).contains(&train_fraction) {
        return Err(Error::invalid("train fraction must lie in [0, 1]"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::substream(seed, &[0x5711]));
    let n_train = libm::round(n as f64 * train_fraction) as usize;
    let mut splits = alloc::vec![Split::Val; n];
    for &i in &order[..n_train] {
        splits[i] = Split::Train;
    }
    Ok(splits)
}
