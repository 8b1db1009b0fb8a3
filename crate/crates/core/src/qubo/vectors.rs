use alloc::vec::Vec;
use core::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linear-term vector `b`; finite entries only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ObservedVector(Vec<f64>);

impl ObservedVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(ObservedVector(values))
    }

    pub fn zeros(k: usize) -> Self {
        ObservedVector(alloc::vec![0.0; k])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Deref for ObservedVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for ObservedVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        ObservedVector::new(v)
    }
}

impl From<ObservedVector> for Vec<f64> {
    fn from(v: ObservedVector) -> Self {
        v.0
    }
}

/// Assignment `x ∈ {0,1}^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct BinaryAssignment(Vec<u8>);

impl BinaryAssignment {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(index) = bits.iter().position(|&b| b > 1) {
            return Err(Error::NonBinary {
                index,
                value: bits[index] as f64,
            });
        }
        Ok(BinaryAssignment(bits))
    }

    /// Accepts reals that are exactly 0.0 or 1.0.
    pub fn from_reals(values: &[f64]) -> Result<Self> {
        values
            .iter()
            .enumerate()
            .map(|(index, &v)| {
                if v == 0.0 {
                    Ok(0)
                } else if v == 1.0 {
                    Ok(1)
                } else {
                    Err(Error::NonBinary { index, value: v })
                }
            })
            .collect::<Result<Vec<u8>>>()
            .map(BinaryAssignment)
    }

    pub fn zeros(k: usize) -> Self {
        BinaryAssignment(alloc::vec![0; k])
    }

    pub fn ones(k: usize) -> Self {
        BinaryAssignment(alloc::vec![1; k])
    }

    /// Bit `i` is `(mask >> i) & 1`.
    pub fn from_mask(mask: u64, k: usize) -> Self {
        BinaryAssignment((0..k).map(|i| ((mask >> i) & 1) as u8).collect())
    }

    /// Rounds each entry at 0.5 (values above become 1).
    pub fn round(values: &[f64]) -> Self {
        BinaryAssignment(values.iter().map(|&v| u8::from(v > 0.5)).collect())
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn to_reals(&self) -> Vec<f64> {
        self.0.iter().map(|&b| b as f64).collect()
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut x = self.clone();
        x.flip(i);
        x
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn hamming(&self, other: &Self) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Permuted copy with `out[perm[i]] = self[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = alloc::vec![0u8; self.0.len()];
        for (i, &p) in perm.iter().enumerate() {
            out[p] = self.0[i];
        }
        BinaryAssignment(out)
    }
}

impl Deref for BinaryAssignment {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl TryFrom<Vec<u8>> for BinaryAssignment {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        BinaryAssignment::new(v)
    }
}

impl From<BinaryAssignment> for Vec<u8> {
    fn from(v: BinaryAssignment) -> Self {
        v.0
    }
}
