use std::collections::BTreeMap;
use std::path::Path;

use qubo_core::bpgnn::{BpgnnConfig, BpgnnModel};
use qubo_core::tensor::Tensor;
use serde::{Deserialize, Serialize};

use super::{read_text, write_text, FormatError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredTensor {
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

/// `{config, params: {name: {shape, data}}}`, data row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub config: BpgnnConfig,
    pub params: BTreeMap<String, StoredTensor>,
}

impl Checkpoint {
    pub fn from_model(model: &BpgnnModel) -> Self {
        let params = model
            .named_params()
            .map(|(n, t)| {
                let stored = StoredTensor {
                    shape: t.shape().to_vec(),
                    data: t.data().to_vec(),
                };
                (n.to_string(), stored)
            })
            .collect();
        Checkpoint {
            config: model.config.clone(),
            params,
        }
    }

    /// Builds a model for `config`; names and shapes must match it.
    pub fn into_model(self, config: BpgnnConfig) -> qubo_core::Result<BpgnnModel> {
        let named = self
            .params
            .into_iter()
            .map(|(n, s)| Tensor::new(s.shape, s.data).map(|t| (n, t)))
            .collect::<qubo_core::Result<Vec<_>>>()?;
        BpgnnModel::from_named(config, named)
    }
}

pub fn save_checkpoint(model: &BpgnnModel, path: &Path) -> Result<()> {
    let json = serde_json::to_string(&Checkpoint::from_model(model)).expect("finite parameters");
    write_text(path, &(json + "\n"))
}

fn read(path: &Path) -> Result<Checkpoint> {
    serde_json::from_str(&read_text(path)?).map_err(|e| FormatError::parse(path, e.line(), e))
}

/// Loads a checkpoint with the configuration stored inside it.
pub fn load_checkpoint(path: &Path) -> Result<BpgnnModel> {
    let ck = read(path)?;
    let config = ck.config.clone();
    ck.into_model(config).map_err(|e| FormatError::invalid(path, e))
}

/// Loads the stored parameters against an explicit configuration.
pub fn load_checkpoint_as(path: &Path, config: BpgnnConfig) -> Result<BpgnnModel> {
    read(path)?.into_model(config).map_err(|e| FormatError::invalid(path, e))
}
