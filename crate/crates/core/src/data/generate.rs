use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{assign_splits, Dataset};
use crate::error::{Error, Result};
use crate::qubo::{BinaryAssignment, ObservedVector, QuboInstance};
use crate::rng;
use crate::solvers::{exhaustive_solve, refine_with_tabu};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataGenParams {
    /// Noise enters as `σ² z`.
    pub sigma: f64,
    /// Barrier weight `μ`.
    pub mu: f64,
    /// `x_o` is drawn from `{ε, 1-ε}^k`.
    pub eps_bin: f64,
    /// Tabu budget used to repair the rounded `x_o`.
    pub refine_steps: usize,
    pub seed: u64,
    /// Label with exact enumeration instead of Tabu repair.
    #[serde(default)]
    pub exhaustive_labels: bool,
}

impl Default for DataGenParams {
    fn default() -> Self {
        DataGenParams {
            sigma: 0.0,
            mu: 1e-3,
            eps_bin: 1e-3,
            refine_steps: 10,
            seed: 0,
            exhaustive_labels: false,
        }
    }
}

impl DataGenParams {
    /// Tabu budget for lattice datasets.
    pub const LATTICE_REFINE_STEPS: usize = 1000;

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(Error::invalid("sigma must be a finite non-negative number"));
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::invalid("mu must be positive"));
        }
        if !(self.eps_bin > 0.0 && self.eps_bin < 0.5) {
            return Err(Error::invalid("eps must lie in (0, 0.5)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub sigma: f64,
    pub refined: bool,
    pub f_value: f64,
}

/// One observation `b` with its label `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataPair {
    pub b: ObservedVector,
    pub x: BinaryAssignment,
    pub provenance: Provenance,
}

/// Everything drawn while producing a pair, for inspection.
#[derive(Debug, Clone)]
pub struct PairDraw {
    pub pair: DataPair,
    /// The continuous `x_o ∈ {ε, 1-ε}^k`.
    pub x_continuous: Vec<f64>,
    /// Noise-free `b_o`.
    pub b_clean: Vec<f64>,
    /// `round(x_o)`, the start of the repair search.
    pub start: BinaryAssignment,
}

pub fn generate_pair(instance: &QuboInstance, params: &DataGenParams, pair_seed: u64) -> Result<DataPair> {
    draw_pair(instance, params, pair_seed).map(|d| d.pair)
}

pub fn draw_pair(instance: &QuboInstance, params: &DataGenParams, pair_seed: u64) -> Result<PairDraw> {
    params.validate()?;
    let k = instance.k();
    let mut r = rng::stream(pair_seed);
    let eps = params.eps_bin;
    let x_continuous: Vec<f64> = (0..k).map(|_| if r.random::<bool>() { 1.0 - eps } else { eps }).collect();

    // b_o = -(A + A⊤) x_o + μ/x_o - μ/(1 - x_o)
    let ax = instance.matrix().matvec(&x_continuous);
    let atx = instance.matrix_t().matvec(&x_continuous);
    let b_clean: Vec<f64> = (0..k)
        .map(|i| {
            let xi = x_continuous[i];
            -(ax[i] + atx[i]) + params.mu / xi - params.mu / (1.0 - xi)
        })
        .collect();

    let z = rng::normal_vec(&mut r, k);
    let s2 = params.sigma * params.sigma;
    let b = ObservedVector::new(b_clean.iter().zip(&z).map(|(bo, zi)| bo + s2 * zi).collect())?;

    let start = BinaryAssignment::round(&x_continuous);
    let (x, f_value, refined) = if params.exhaustive_labels {
        let res = exhaustive_solve(instance, &b)?;
        (res.x_best, res.f_best, true)
    } else {
        let res = refine_with_tabu(instance, &b, &start, params.refine_steps)?;
        (res.x_best, res.f_best, params.refine_steps > 0)
    };

    Ok(PairDraw {
        pair: DataPair {
            b,
            x,
            provenance: Provenance {
                seed: pair_seed,
                sigma: params.sigma,
                refined,
                f_value,
            },
        },
        x_continuous,
        b_clean,
        start,
    })
}

/// Seed of pair `index`: `seed ⊕ index`.
pub fn pair_seed(seed: u64, index: usize) -> u64 {
    seed ^ index as u64
}

/// `n_pairs` pairs plus a seeded train/validation split.
pub fn generate_dataset(
    instance: &QuboInstance,
    instance_name: &str,
    n_pairs: usize,
    params: &DataGenParams,
    train_fraction: f64,
) -> Result<Dataset> {
    if n_pairs == 0 {
        return Err(Error::invalid("n_pairs must be at least 1"));
    }
    let pairs = (0..n_pairs)
        .map(|i| generate_pair(instance, params, pair_seed(params.seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let splits = assign_splits(n_pairs, params.seed, train_fraction)?;
    Dataset::new(instance.k(), instance_name, params.clone(), pairs, splits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{evaluate, gen_lattice_laplacian, gen_random_dense, InstanceMeta};
    use crate::solvers::exhaustive_solve;
    use alloc::vec;

    #[test]
    fn single_node_barrier_only() {
        let inst = QuboInstance::new(1, vec![], InstanceMeta::default()).unwrap();
        let params = DataGenParams::default();
        // find a seed that draws x_o = ε
        let d = (0..64)
            .map(|s| draw_pair(&inst, &params, s).unwrap())
            .find(|d| d.x_continuous[0] < 0.5)
            .unwrap();
        let expected = 1e-3 / 1e-3 - 1e-3 / (1.0 - 1e-3);
        assert!((d.pair.b[0] - expected).abs() < 1e-15);
        assert!(d.pair.b[0] > 0.998);
        assert_eq!(d.pair.x.as_slice(), &[0]);
    }

    #[test]
    fn stationarity_holds_at_drawn_point() {
        let inst = gen_random_dense(9, 2, 1.0);
        let params = DataGenParams { refine_steps: 0, ..DataGenParams::default() };
        for s in 0..20 {
            let d = draw_pair(&inst, &params, s).unwrap();
            let x = &d.x_continuous;
            let ax = inst.matrix().matvec(x);
            let atx = inst.matrix_t().matvec(x);
            for i in 0..9 {
                let g = ax[i] + atx[i] + d.pair.b[i] - params.mu / x[i] + params.mu / (1.0 - x[i]);
                assert!(g.abs() < 1e-9);
            }
            assert_eq!(d.pair.x, d.start);
            assert!(!d.pair.provenance.refined);
        }
    }

    #[test]
    fn refinement_never_increases_objective() {
        let inst = gen_lattice_laplacian(5);
        let params = DataGenParams { sigma: 2.0, ..DataGenParams::default() };
        for s in 0..30 {
            let d = draw_pair(&inst, &params, s).unwrap();
            let before = evaluate(&inst, &d.pair.b, &d.start).unwrap();
            let after = evaluate(&inst, &d.pair.b, &d.pair.x).unwrap();
            assert!(after <= before);
            assert!((after - d.pair.provenance.f_value).abs() < 1e-9);
        }
    }

    #[test]
    fn exhaustive_labels_are_optimal() {
        let inst = gen_random_dense(8, 1, 1.0);
        let params = DataGenParams { sigma: 1.0, exhaustive_labels: true, ..DataGenParams::default() };
        let p = generate_pair(&inst, &params, 3).unwrap();
        assert_eq!(p.x, exhaustive_solve(&inst, &p.b).unwrap().x_best);
    }

    #[test]
    fn invalid_params() {
        let inst = gen_random_dense(3, 1, 1.0);
        for bad in [
            DataGenParams { sigma: -1.0, ..DataGenParams::default() },
            DataGenParams { mu: 0.0, ..DataGenParams::default() },
            DataGenParams { eps_bin: 0.5, ..DataGenParams::default() },
        ] {
            assert!(generate_pair(&inst, &bad, 0).is_err());
        }
    }

    #[test]
    fn dataset_split_counts_and_determinism() {
        let inst = gen_random_dense(6, 4, 1.0);
        let params = DataGenParams { seed: 42, ..DataGenParams::default() };
        let a = generate_dataset(&inst, "a.mtx", 1000, &params, 0.8).unwrap();
        let b = generate_dataset(&inst, "a.mtx", 1000, &params, 0.8).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.train_indices().len(), 800);
        assert_eq!(a.val_indices().len(), 200);
    }
}
