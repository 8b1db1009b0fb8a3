use alloc::vec::Vec;

use super::{sparse::Csr, ObservedVector, QuboInstance};
use crate::error::{check_len, Result};

/// Spin form of a QUBO: with `x = (s + 1) / 2`, `f(x) = s⊤Js + h⊤s + c`.
#[derive(Debug, Clone)]
pub struct IsingModel {
    /// `A / 4`.
    pub j: Csr,
    /// `(A + A⊤)e / 4 + b / 2`.
    pub h: Vec<f64>,
    /// `e⊤Ae / 4 + b⊤e / 2`.
    pub c: f64,
}

impl IsingModel {
    /// `s⊤Js + h⊤s` (without the constant).
    pub fn energy(&self, s: &[f64]) -> f64 {
        let js = self.j.matvec(s);
        s.iter().zip(&js).map(|(a, b)| a * b).sum::<f64>()
            + s.iter().zip(&self.h).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn k(&self) -> usize {
        self.h.len()
    }
}

pub fn qubo_to_ising(instance: &QuboInstance, b: &ObservedVector) -> Result<IsingModel> {
    check_len(instance.k(), b.len())?;
    let k = instance.k();
    let mut h: Vec<f64> = b.iter().map(|v| 0.5 * v).collect();
    let mut total = 0.0;
    for &(i, j, v) in instance.entries() {
        h[i] += 0.25 * v;
        h[j] += 0.25 * v;
        total += v;
    }
    let c = 0.25 * total + 0.5 * b.iter().sum::<f64>();
    debug_assert_eq!(h.len(), k);
    Ok(IsingModel {
        j: instance.matrix().scaled(0.25),
        h,
        c,
    })
}
