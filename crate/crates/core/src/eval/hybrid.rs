use serde::{Deserialize, Serialize};

use crate::bpgnn::{predict, BpgnnModel};
use crate::error::Result;
use crate::qubo::{evaluate, BinaryAssignment, ObservedVector, QuboInstance};
use crate::solvers::{refine_with_tabu, SolverResult};
use crate::timer::Stopwatch;

/// Network prediction followed by a short Tabu polish.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridResult {
    pub neural: BinaryAssignment,
    pub f_neural: f64,
    pub neural_ms: f64,
    /// Polished result; `elapsed_ms` covers prediction and polish.
    pub refined: SolverResult,
}

pub fn hybrid_infer(
    model: &BpgnnModel,
    instance: &QuboInstance,
    b: &ObservedVector,
    max_steps: usize,
) -> Result<HybridResult> {
    let clock = Stopwatch::start();
    let neural = predict(model, instance, b, 0.5)?;
    let neural_ms = clock.elapsed_ms();
    let f_neural = evaluate(instance, b, &neural)?;
    let mut refined = refine_with_tabu(instance, b, &neural, max_steps)?;
    refined.solver = "bpgnn+ts".into();
    refined.elapsed_ms = clock.elapsed_ms();
    Ok(HybridResult {
        neural,
        f_neural,
        neural_ms,
        refined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bpgnn::BpgnnConfig;
    use crate::qubo::gen_random_dense;
    use crate::solvers::exhaustive_solve;
    use alloc::vec;

    fn constant_model(logit: f64) -> BpgnnModel {
        let mut m = BpgnnModel::new(BpgnnConfig {
            d: 3,
            layers: 1,
            ..BpgnnConfig::default()
        })
        .unwrap();
        m.param_mut("dec.w").unwrap().data_mut().fill(0.0);
        m.param_mut("dec.b").unwrap().data_mut().fill(logit);
        m
    }

    #[test]
    fn optimal_prediction_is_kept() {
        let inst = gen_random_dense(6, 3, 0.2);
        let b = ObservedVector::new(vec![-50.0; 6]).unwrap();
        assert_eq!(exhaustive_solve(&inst, &b).unwrap().x_best, BinaryAssignment::ones(6));
        let h = hybrid_infer(&constant_model(10.0), &inst, &b, 10).unwrap();
        assert_eq!(h.neural, BinaryAssignment::ones(6));
        assert_eq!(h.refined.x_best, h.neural);
        assert_eq!(h.refined.f_best, h.f_neural);
    }

    #[test]
    fn refinement_improves_a_bad_guess() {
        let inst = gen_random_dense(6, 3, 0.2);
        let b = ObservedVector::new(vec![-50.0; 6]).unwrap();
        let h = hybrid_infer(&constant_model(-10.0), &inst, &b, 10).unwrap();
        assert_eq!(h.neural, BinaryAssignment::zeros(6));
        assert!(h.refined.f_best < h.f_neural);
        assert_eq!(h.refined.solver, "bpgnn+ts");
    }
}
