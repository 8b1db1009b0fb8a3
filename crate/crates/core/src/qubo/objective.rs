use alloc::vec::Vec;

use super::{BinaryAssignment, ObservedVector, QuboInstance};
use crate::error::{check_len, Error, Result};

/// `f(x) = x⊤Ax + x⊤b`.
pub fn evaluate(instance: &QuboInstance, b: &ObservedVector, x: &BinaryAssignment) -> Result<f64> {
    check_len(instance.k(), b.len())?;
    check_len(instance.k(), x.len())?;
    Ok(objective(instance, b, x))
}

/// `f(x with bit i flipped) - f(x)`, touching only row and column `i`.
pub fn flip_delta(
    instance: &QuboInstance,
    b: &ObservedVector,
    x: &BinaryAssignment,
    i: usize,
) -> Result<f64> {
    check_len(instance.k(), b.len())?;
    check_len(instance.k(), x.len())?;
    if i >= instance.k() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: instance.k(),
        });
    }
    Ok(delta(instance, b, x, i))
}

/// Nodal residual `x ⊙ (Ax + b)` for a real or binary `x`.
pub fn residual(instance: &QuboInstance, b: &ObservedVector, x: &[f64]) -> Result<Vec<f64>> {
    check_len(instance.k(), b.len())?;
    check_len(instance.k(), x.len())?;
    let mut ax = instance.matrix().matvec(x);
    for ((r, xi), bi) in ax.iter_mut().zip(x).zip(b.iter()) {
        *r = xi * (*r + bi);
    }
    Ok(ax)
}

pub(crate) fn objective(instance: &QuboInstance, b: &[f64], x: &[u8]) -> f64 {
    let a = instance.matrix();
    let mut f = 0.0;
    for i in 0..instance.k() {
        if x[i] == 0 {
            continue;
        }
        f += b[i];
        for (j, v) in a.row(i) {
            if x[j] == 1 {
                f += v;
            }
        }
    }
    f
}

/// `b_i + A_ii + Σ_{j≠i} (A_ij + A_ji) x_j`; the flip delta is this times
/// `1 - 2 x_i`.
#[inline]
pub(crate) fn local_field(instance: &QuboInstance, b: &[f64], x: &[u8], i: usize) -> f64 {
    let mut s = b[i] + instance.diag()[i];
    for (j, v) in instance.coupling().row(i) {
        if x[j] == 1 {
            s += v;
        }
    }
    s
}

#[inline]
pub(crate) fn delta(instance: &QuboInstance, b: &[f64], x: &[u8], i: usize) -> f64 {
    let sign = 1.0 - 2.0 * x[i] as f64;
    sign * local_field(instance, b, x, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{gen_random_dense, InstanceMeta};
    use crate::rng;
    use alloc::vec;
    use rand::Rng;

    fn pair() -> (QuboInstance, ObservedVector) {
        let inst = QuboInstance::new(2, vec![(0, 1, 1.0)], InstanceMeta::default()).unwrap();
        (inst, ObservedVector::new(vec![-1.0, 0.5]).unwrap())
    }

    fn bits(v: &[u8]) -> BinaryAssignment {
        BinaryAssignment::new(v.to_vec()).unwrap()
    }

    #[test]
    fn two_node_objective_by_enumeration() {
        let (inst, b) = pair();
        assert_eq!(evaluate(&inst, &b, &bits(&[0, 0])).unwrap(), 0.0);
        assert_eq!(evaluate(&inst, &b, &bits(&[1, 0])).unwrap(), -1.0);
        assert_eq!(evaluate(&inst, &b, &bits(&[0, 1])).unwrap(), 0.5);
        assert_eq!(evaluate(&inst, &b, &bits(&[1, 1])).unwrap(), 0.5);
    }

    #[test]
    fn two_node_flip_delta_and_residual() {
        let (inst, b) = pair();
        assert_eq!(flip_delta(&inst, &b, &bits(&[0, 0]), 0).unwrap(), -1.0);
        assert_eq!(residual(&inst, &b, &[1.0, 1.0]).unwrap(), vec![0.0, 0.5]);
        assert_eq!(residual(&inst, &b, &[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn errors() {
        let (inst, b) = pair();
        assert_eq!(
            evaluate(&inst, &b, &bits(&[0, 0, 1])),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
        assert_eq!(
            flip_delta(&inst, &b, &bits(&[0, 0]), 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        );
    }

    #[test]
    fn flip_delta_matches_evaluate_difference() {
        let inst = gen_random_dense(12, 3, 1.0);
        let mut r = rng::stream(11);
        let b = ObservedVector::new(rng::normal_vec(&mut r, 12)).unwrap();
        for _ in 0..1000 {
            let x = BinaryAssignment::from_mask(r.random::<u64>() & 0xfff, 12);
            let i = r.random_range(0..12);
            let d = flip_delta(&inst, &b, &x, i).unwrap();
            let oracle = evaluate(&inst, &b, &x.flipped(i)).unwrap() - evaluate(&inst, &b, &x).unwrap();
            assert!((d - oracle).abs() <= 1e-9 * (1.0 + oracle.abs()));
            let back = flip_delta(&inst, &b, &x.flipped(i), i).unwrap();
            assert!((d + back).abs() < 1e-12);
        }
    }
}
