use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BpgnnConfig {
    /// Hidden width `d`.
    pub d: usize,
    /// Number of layers `L`.
    pub layers: usize,
    /// Forward-Euler step `ε` of both the diffusion and the reaction update.
    pub step: f64,
    /// Dropout after each hidden layer, training mode only.
    pub dropout: f64,
    /// Inject the residual features `g(r)` before diffusion.
    pub use_qubo_features: bool,
    /// Learn non-negative per-channel diffusion coefficients; when off every
    /// coefficient is 1.
    #[serde(default = "yes")]
    pub learn_diffusion: bool,
    pub seed: u64,
}

fn yes() -> bool {
    true
}

impl Default for BpgnnConfig {
    fn default() -> Self {
        BpgnnConfig {
            d: 32,
            layers: 4,
            step: 0.5,
            dropout: 0.0,
            use_qubo_features: true,
            learn_diffusion: true,
            seed: 0,
        }
    }
}

impl BpgnnConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.layers == 0 {
            return Err(Error::invalid("d and layers must be at least 1"));
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::invalid("step must be positive"));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(Error::invalid("dropout must lie in [0, 1)"));
        }
        Ok(())
    }
}
