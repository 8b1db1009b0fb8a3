use alloc::string::ToString;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::SolverResult;
use crate::error::{check_len, Error, Result};
use crate::qubo::objective::objective;
use crate::qubo::{qubo_to_ising, BinaryAssignment, ObservedVector, QuboInstance};
use crate::rng;
use crate::timer::Stopwatch;

/// Ballistic simulated bifurcation with a linear pump `a(t) = a0 t / steps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SabParams {
    pub steps: usize,
    pub dt: f64,
    pub a0: f64,
    /// Coupling strength; `None` picks `0.5 √k / ‖J‖_F`.
    pub c0: Option<f64>,
    /// Rounded iterates are scored every this many steps.
    pub sample_every: usize,
    pub seed: u64,
}

impl Default for SabParams {
    fn default() -> Self {
        SabParams {
            steps: 1000,
            dt: 0.5,
            a0: 1.0,
            c0: None,
            sample_every: 10,
            seed: 0,
        }
    }
}

impl SabParams {
    fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::invalid("sab steps must be at least 1"));
        }
        if !(self.dt > 0.0) || !(self.a0 > 0.0) || self.c0.is_some_and(|c| !(c > 0.0)) {
            return Err(Error::invalid("sab dt, a0 and c0 must be positive"));
        }
        if self.sample_every == 0 {
            return Err(Error::invalid("sab sample_every must be at least 1"));
        }
        Ok(())
    }
}

/// Anneals the spin relaxation of the problem and rounds `y > 0` to 1.
///
/// Positions `y` live in `[-1, 1]`; touching a wall zeroes the momentum.
/// Each step performs one sparse product with the off-diagonal couplings.
pub fn sab_solve(instance: &QuboInstance, b: &ObservedVector, params: &SabParams) -> Result<SolverResult> {
    check_len(instance.k(), b.len())?;
    params.validate()?;
    let clock = Stopwatch::start();
    let k = instance.k();
    let ising = qubo_to_ising(instance, b)?;
    // gradient of s⊤Js + h⊤s without the (constant on spins) diagonal
    let coupling = instance.coupling().scaled(0.25);

    let c0 = params.c0.unwrap_or_else(|| {
        let sk = libm::sqrt(k as f64);
        let j_norm = instance.frobenius_norm() / 4.0;
        let h_norm = libm::sqrt(ising.h.iter().map(|v| v * v).sum());
        let scale = if j_norm > 0.0 { j_norm } else { h_norm };
        if scale > 0.0 {
            0.5 * sk / scale
        } else {
            1.0
        }
    });

    let mut r = rng::stream(params.seed);
    let mut y: Vec<f64> = (0..k).map(|_| rng::uniform(&mut r, -0.1, 0.1)).collect();
    let mut p: Vec<f64> = (0..k).map(|_| rng::uniform(&mut r, -0.1, 0.1)).collect();
    let mut grad = alloc::vec![0.0; k];
    let mut bits = alloc::vec![0u8; k];

    let mut best_x = alloc::vec![0u8; k];
    let mut best_f = f64::INFINITY;
    let mut evaluations = 0;
    let mut trace = Vec::new();

    let score = |y: &[f64], bits: &mut [u8], best_x: &mut Vec<u8>, best_f: &mut f64, evaluations: &mut usize| {
        for (bit, &v) in bits.iter_mut().zip(y) {
            *bit = u8::from(v > 0.0);
        }
        let f = objective(instance, b, bits);
        *evaluations += 1;
        if f < *best_f {
            *best_f = f;
            best_x.copy_from_slice(bits);
        }
    };

    for step in 0..params.steps {
        let pump = params.a0 * step as f64 / params.steps as f64;
        coupling.matvec_into(&y, &mut grad);
        for i in 0..k {
            let g = grad[i] + ising.h[i];
            p[i] -= params.dt * ((params.a0 - pump) * y[i] + c0 * g);
            y[i] += params.dt * params.a0 * p[i];
            if !y[i].is_finite() || !p[i].is_finite() {
                return Err(Error::NonFiniteState { step });
            }
            if y[i] > 1.0 {
                y[i] = 1.0;
                p[i] = 0.0;
            } else if y[i] < -1.0 {
                y[i] = -1.0;
                p[i] = 0.0;
            }
        }
        if (step + 1) % params.sample_every == 0 {
            score(&y, &mut bits, &mut best_x, &mut best_f, &mut evaluations);
            trace.push(best_f);
        }
    }
    score(&y, &mut bits, &mut best_x, &mut best_f, &mut evaluations);
    trace.push(best_f);

    let f_best = objective(instance, b, &best_x);
    Ok(SolverResult {
        solver: "sab".to_string(),
        x_best: BinaryAssignment::new(best_x)?,
        f_best,
        iterations: params.steps,
        evaluations,
        elapsed_ms: clock.elapsed_ms(),
        trace: Some(trace),
        stopped_early: false,
    })
}
