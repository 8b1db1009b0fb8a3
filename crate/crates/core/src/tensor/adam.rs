use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::Tensor;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// L2 penalty, added to the gradient as `weight_decay * θ`.
    pub weight_decay: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            weight_decay: 0.0,
        }
    }
}

/// First and second moment estimates, one pair per parameter tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub config: AdamConfig,
    pub step: u64,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

impl AdamState {
    pub fn new(config: AdamConfig, params: &[Tensor]) -> Self {
        AdamState {
            config,
            step: 0,
            m: params.iter().map(|p| alloc::vec![0.0; p.len()]).collect(),
            v: params.iter().map(|p| alloc::vec![0.0; p.len()]).collect(),
        }
    }
}

/// One bias-corrected Adam update of `params` in place.
pub fn adam_step(params: &mut [Tensor], grads: &[Vec<f64>], state: &mut AdamState) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.m.len() {
        return Err(Error::DimensionMismatch {
            expected: state.m.len(),
            found: params.len().min(grads.len()),
        });
    }
    for ((p, g), m) in params.iter().zip(grads).zip(&state.m) {
        if p.len() != g.len() || p.len() != m.len() {
            return Err(Error::ShapeMismatch {
                op: "adam_step",
                left: p.shape().to_vec(),
                right: alloc::vec![g.len()],
            });
        }
    }
    state.step += 1;
    let c = state.config;
    let t = state.step as i32;
    let bc1 = 1.0 - libm::pow(c.beta1, t as f64);
    let bc2 = 1.0 - libm::pow(c.beta2, t as f64);
    for ((p, g), (m, v)) in params.iter_mut().zip(grads).zip(state.m.iter_mut().zip(state.v.iter_mut())) {
        for (((theta, &gi), mi), vi) in p.data_mut().iter_mut().zip(g).zip(m.iter_mut()).zip(v.iter_mut()) {
            let gi = gi + c.weight_decay * *theta;
            *mi = c.beta1 * *mi + (1.0 - c.beta1) * gi;
            *vi = c.beta2 * *vi + (1.0 - c.beta2) * gi * gi;
            let m_hat = *mi / bc1;
            let v_hat = *vi / bc2;
            *theta -= c.lr * m_hat / (libm::sqrt(v_hat) + c.eps);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn zero_gradient_leaves_parameters() {
        let mut p = vec![Tensor::matrix(1, 3, vec![1.0, -2.0, 3.0]).unwrap()];
        let mut s = AdamState::new(AdamConfig::default(), &p);
        for _ in 0..5 {
            adam_step(&mut p, &[vec![0.0; 3]], &mut s).unwrap();
        }
        assert_eq!(p[0].data(), &[1.0, -2.0, 3.0]);
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        // m̂ = g, v̂ = g², so the step is lr g / (|g| + eps)
        for g in [0.3, -7.0, 1e-2] {
            let mut p = vec![Tensor::scalar(1.0)];
            let mut s = AdamState::new(AdamConfig { lr: 0.01, ..AdamConfig::default() }, &p);
            adam_step(&mut p, &[vec![g]], &mut s).unwrap();
            let expected = 1.0 - 0.01 * g / (g.abs() + 1e-8);
            assert!((p[0].item() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn weight_decay_acts_through_gradient() {
        let mut p = vec![Tensor::scalar(2.0)];
        let cfg = AdamConfig { lr: 0.1, weight_decay: 0.5, ..AdamConfig::default() };
        let mut s = AdamState::new(cfg, &p);
        adam_step(&mut p, &[vec![0.0]], &mut s).unwrap();
        assert!((p[0].item() - 1.9).abs() < 1e-7);
    }

    #[test]
    fn shape_mismatch() {
        let mut p = vec![Tensor::scalar(2.0)];
        let mut s = AdamState::new(AdamConfig::default(), &p);
        assert!(adam_step(&mut p, &[vec![0.0, 1.0]], &mut s).is_err());
    }
}
