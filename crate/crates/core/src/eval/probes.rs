use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::qubo::{gen_ising, BinaryAssignment, ObservedVector, QuboInstance};
use crate::rng;
use crate::solvers::{exhaustive_solve_with_cap, tabu_solve, SolverResult, TabuParams};

/// Evenly spaced samples `lo, ..., hi` (inclusive) on both axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub resolution: usize,
}

impl GridSpec {
    pub fn axis(&self) -> Vec<f64> {
        if self.resolution == 1 {
            return alloc::vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.resolution - 1) as f64;
        (0..self.resolution).map(|i| self.lo + step * i as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellSolver {
    Exhaustive,
    Tabu,
}

/// Squared distance `φ(s, t) = ‖x(s, t) - x(0, 0)‖²` of the minimizer of
/// `(b + t b1 + s b2)⊤x + x⊤Ax` from the unperturbed minimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeGrid {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    /// `phi[i][j]` is the value at `(s[i], t[j])`.
    pub phi: Vec<Vec<u32>>,
    pub b1: Vec<f64>,
    pub b2: Vec<f64>,
    pub base: Vec<f64>,
    pub solver: Vec<Vec<CellSolver>>,
}

impl LandscapeGrid {
    pub fn distinct_values(&self) -> usize {
        let mut v: Vec<u32> = self.phi.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v.len()
    }

    /// Fraction of cells equal to at least one of their 4-neighbours.
    pub fn plateau_fraction(&self) -> f64 {
        let (n, m) = (self.phi.len(), self.phi.first().map_or(0, Vec::len));
        let mut hits = 0;
        for i in 0..n {
            for j in 0..m {
                let v = self.phi[i][j];
                let same = (i > 0 && self.phi[i - 1][j] == v)
                    || (i + 1 < n && self.phi[i + 1][j] == v)
                    || (j > 0 && self.phi[i][j - 1] == v)
                    || (j + 1 < m && self.phi[i][j + 1] == v);
                hits += usize::from(same);
            }
        }
        hits as f64 / (n * m).max(1) as f64
    }

    /// Value at the grid point closest to `(0, 0)`.
    pub fn at_origin(&self) -> u32 {
        let nearest = |axis: &[f64]| {
            (0..axis.len())
                .min_by(|&a, &b| axis[a].abs().total_cmp(&axis[b].abs()))
                .unwrap_or(0)
        };
        self.phi[nearest(&self.s)][nearest(&self.t)]
    }
}

/// Two random unit directions, orthogonalized against each other.
pub fn orthonormal_directions(k: usize, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    if k < 2 {
        return Err(Error::invalid("two orthogonal directions need k >= 2"));
    }
    let mut r = rng::stream(seed);
    let norm = |v: &[f64]| libm::sqrt(v.iter().map(|x| x * x).sum());
    let mut b1 = rng::normal_vec(&mut r, k);
    let n1 = norm(&b1);
    b1.iter_mut().for_each(|x| *x /= n1);
    loop {
        let mut b2 = rng::normal_vec(&mut r, k);
        let dot: f64 = b1.iter().zip(&b2).map(|(a, b)| a * b).sum();
        b2.iter_mut().zip(&b1).for_each(|(x, a)| *x -= dot * a);
        let n2 = norm(&b2);
        if n2 > 1e-8 {
            b2.iter_mut().for_each(|x| *x /= n2);
            return Ok((b1, b2));
        }
    }
}

fn solve_cell(instance: &QuboInstance, b: &ObservedVector, cap: usize) -> Result<(SolverResult, CellSolver)> {
    if instance.k() <= cap {
        Ok((exhaustive_solve_with_cap(instance, b, cap)?, CellSolver::Exhaustive))
    } else {
        Ok((tabu_solve(instance, b, &TabuParams::new(instance.k()))?, CellSolver::Tabu))
    }
}

/// Minimizer of `f(x) + ε δ⊤x`.
pub fn perturbed_minimum(
    instance: &QuboInstance,
    b: &ObservedVector,
    delta: &[f64],
    eps: f64,
    cap: usize,
) -> Result<SolverResult> {
    check_len(instance.k(), delta.len())?;
    let shifted = ObservedVector::new(b.iter().zip(delta).map(|(bi, di)| bi + eps * di).collect())?;
    Ok(solve_cell(instance, &shifted, cap)?.0)
}

/// Landscape over random orthonormal directions drawn from `seed`.
pub fn probe_landscape(
    instance: &QuboInstance,
    b: &ObservedVector,
    seed: u64,
    grid: GridSpec,
    cap: usize,
) -> Result<LandscapeGrid> {
    let (b1, b2) = orthonormal_directions(instance.k(), seed)?;
    probe_landscape_with(instance, b, &b1, &b2, grid, cap)
}

/// Landscape over caller-supplied directions. Cells with `k ≤ cap` are
/// solved exactly, larger problems use Tabu search.
pub fn probe_landscape_with(
    instance: &QuboInstance,
    b: &ObservedVector,
    b1: &[f64],
    b2: &[f64],
    grid: GridSpec,
    cap: usize,
) -> Result<LandscapeGrid> {
    let k = instance.k();
    check_len(k, b.len())?;
    check_len(k, b1.len())?;
    check_len(k, b2.len())?;
    if grid.resolution == 0 {
        return Err(Error::invalid("grid resolution must be at least 1"));
    }
    let (origin, _) = solve_cell(instance, b, cap)?;
    let axis = grid.axis();
    let mut phi = Vec::with_capacity(axis.len());
    let mut solver = Vec::with_capacity(axis.len());
    for &s in &axis {
        let mut row = Vec::with_capacity(axis.len());
        let mut srow = Vec::with_capacity(axis.len());
        for &t in &axis {
            let cell_b: Vec<f64> = (0..k).map(|i| b[i] + t * b1[i] + s * b2[i]).collect();
            let (res, which) = solve_cell(instance, &ObservedVector::new(cell_b)?, cap)?;
            row.push(res.x_best.hamming(&origin.x_best) as u32);
            srow.push(which);
        }
        phi.push(row);
        solver.push(srow);
    }
    Ok(LandscapeGrid {
        s: axis.clone(),
        t: axis,
        phi,
        b1: b1.to_vec(),
        b2: b2.to_vec(),
        base: b.to_vec(),
        solver,
    })
}

/// Solutions of the Ising objective `x⊤Ax - β x⊤e` along a sweep of `β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub b_values: Vec<f64>,
    pub solutions: Vec<BinaryAssignment>,
    pub objectives: Vec<f64>,
    /// Sample indices `i` whose solution differs from sample `i - 1`.
    pub change_points: Vec<usize>,
}

impl SweepResult {
    pub fn changed(&self, i: usize) -> bool {
        self.change_points.binary_search(&i).is_ok()
    }
}

pub fn ising_sweep(adjacency: &QuboInstance, b_lo: f64, b_hi: f64, samples: usize, cap: usize) -> Result<SweepResult> {
    if samples == 0 {
        return Err(Error::invalid("sweep needs at least one sample"));
    }
    let b_values = GridSpec {
        lo: b_lo,
        hi: b_hi,
        resolution: samples,
    }
    .axis();
    let mut solutions: Vec<BinaryAssignment> = Vec::with_capacity(samples);
    let mut objectives = Vec::with_capacity(samples);
    let mut change_points = Vec::new();
    for (i, &beta) in b_values.iter().enumerate() {
        let (instance, b) = gen_ising(adjacency, beta)?;
        let (res, _) = solve_cell(&instance, &b, cap)?;
        if i > 0 && solutions[i - 1] != res.x_best {
            change_points.push(i);
        }
        solutions.push(res.x_best);
        objectives.push(res.f_best);
    }
    Ok(SweepResult {
        b_values,
        solutions,
        objectives,
        change_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{gen_random_dense, lattice_adjacency};
    use crate::solvers::DEFAULT_EXHAUSTIVE_CAP;

    #[test]
    fn directions_are_orthonormal() {
        let (a, b) = orthonormal_directions(12, 3).unwrap();
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!(dot.abs() < 1e-12);
        assert!((a.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((b.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(orthonormal_directions(1, 0).is_err());
    }

    #[test]
    fn landscape_basics_and_swap_symmetry() {
        let inst = gen_random_dense(8, 1, 1.0);
        let b = ObservedVector::new(rng::normal_vec(&mut rng::stream(2), 8)).unwrap();
        let grid = GridSpec { lo: -2.0, hi: 2.0, resolution: 9 };
        let g = probe_landscape(&inst, &b, 5, grid, DEFAULT_EXHAUSTIVE_CAP).unwrap();
        assert_eq!(g.at_origin(), 0);
        assert!(g.phi.iter().flatten().all(|&v| v <= 8));
        let swapped = probe_landscape_with(&inst, &b, &g.b2, &g.b1, grid, DEFAULT_EXHAUSTIVE_CAP).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(g.phi[i][j], swapped.phi[j][i]);
            }
        }
    }

    #[test]
    fn large_instances_fall_back_to_tabu() {
        let inst = gen_random_dense(6, 1, 1.0);
        let grid = GridSpec { lo: 0.0, hi: 1.0, resolution: 2 };
        let g = probe_landscape(&inst, &ObservedVector::zeros(6), 0, grid, 4).unwrap();
        assert!(g.solver.iter().flatten().all(|&s| s == CellSolver::Tabu));
    }

    #[test]
    fn sweep_extremes() {
        let adj = lattice_adjacency(3);
        let r = ising_sweep(&adj, -20.0, 20.0, 3, DEFAULT_EXHAUSTIVE_CAP).unwrap();
        assert_eq!(r.solutions[0], BinaryAssignment::zeros(9));
        assert_eq!(r.solutions[2], BinaryAssignment::ones(9));
        assert!(r.changed(2));
    }
}
