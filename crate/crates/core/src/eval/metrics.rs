use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::qubo::{evaluate, BinaryAssignment, ObservedVector, QuboInstance};

/// `|f_o|` at or below this is treated as zero.
pub const REL_QUBO_MIN_REFERENCE: f64 = 1e-12;

/// One method's aggregate score on a set of problems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub method: String,
    pub dataset: String,
    pub accuracy: f64,
    pub rel_qubo: f64,
    pub elapsed_ms: f64,
}

/// Fraction of positions where the two assignments agree.
pub fn accuracy(x_o: &BinaryAssignment, x_p: &BinaryAssignment) -> Result<f64> {
    check_len(x_o.len(), x_p.len())?;
    if x_o.is_empty() {
        return Err(Error::invalid("accuracy of empty assignments"));
    }
    let hits = x_o.iter().zip(x_p.iter()).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / x_o.len() as f64)
}

/// `(f_p - f_o) / |f_o|`.
pub fn rel_qubo(
    instance: &QuboInstance,
    b: &ObservedVector,
    x_o: &BinaryAssignment,
    x_p: &BinaryAssignment,
) -> Result<f64> {
    let f_o = evaluate(instance, b, x_o)?;
    let f_p = evaluate(instance, b, x_p)?;
    if f_o.abs() <= REL_QUBO_MIN_REFERENCE {
        return Err(Error::UndefinedReference(f_o));
    }
    Ok((f_p - f_o) / f_o.abs())
}

/// Edge homophily: fraction of graph edges whose endpoints share a label.
pub fn homophily(instance: &QuboInstance, labels: &BinaryAssignment) -> Result<f64> {
    check_len(instance.k(), labels.len())?;
    let g = instance.graph();
    if g.edges().is_empty() {
        return Err(Error::EdgelessGraph);
    }
    let same = g.edges().iter().filter(|&&(i, j)| labels[i] == labels[j]).count();
    Ok(same as f64 / g.edges().len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::InstanceMeta;
    use alloc::vec;
    use alloc::vec::Vec;

    fn bits(v: &[u8]) -> BinaryAssignment {
        BinaryAssignment::new(v.to_vec()).unwrap()
    }

    #[test]
    fn accuracy_counts() {
        assert_eq!(accuracy(&bits(&[1, 0, 1, 0]), &bits(&[1, 0, 1, 0])).unwrap(), 1.0);
        assert_eq!(accuracy(&bits(&[1, 0, 1, 0]), &bits(&[1, 0, 0, 0])).unwrap(), 0.75);
        assert_eq!(accuracy(&bits(&[1, 0, 1, 0]), &bits(&[0, 1, 0, 1])).unwrap(), 0.0);
        assert!(accuracy(&bits(&[1]), &bits(&[1, 0])).is_err());
    }

    #[test]
    fn rel_qubo_two_node() {
        let inst = QuboInstance::new(2, vec![(0, 1, 1.0)], InstanceMeta::default()).unwrap();
        let b = ObservedVector::new(vec![-1.0, 0.5]).unwrap();
        assert_eq!(rel_qubo(&inst, &b, &bits(&[1, 0]), &bits(&[0, 0])).unwrap(), 1.0);
        assert_eq!(rel_qubo(&inst, &b, &bits(&[1, 0]), &bits(&[1, 0])).unwrap(), 0.0);
        assert!(matches!(
            rel_qubo(&inst, &b, &bits(&[0, 0]), &bits(&[1, 0])),
            Err(Error::UndefinedReference(_))
        ));
    }

    #[test]
    fn homophily_cases() {
        let cycle: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6, 1.0)).collect();
        let inst = QuboInstance::new(6, cycle, InstanceMeta::default()).unwrap();
        assert_eq!(homophily(&inst, &bits(&[1; 6])).unwrap(), 1.0);
        assert_eq!(homophily(&inst, &bits(&[0, 1, 0, 1, 0, 1])).unwrap(), 0.0);
        let lonely = QuboInstance::new(2, vec![(0, 0, 1.0)], InstanceMeta::default()).unwrap();
        assert_eq!(homophily(&lonely, &bits(&[0, 1])), Err(Error::EdgelessGraph));
    }
}
