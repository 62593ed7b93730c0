//! Readout confusion model.

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};

/// Independent per-qubit readout errors: `e0[q] = P(read 1 | 0)` and
/// `e1[q] = P(read 0 | 1)`. The register confusion matrix is the Kronecker
/// product of the per-qubit matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpamModel {
    pub e0: Vec<f64>,
    pub e1: Vec<f64>,
}

impl SpamModel {
    pub fn uniform(n_qubits: usize, e0: f64, e1: f64) -> SpamModel {
        SpamModel {
            e0: vec![e0; n_qubits],
            e1: vec![e1; n_qubits],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.e0.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.e0.len() != self.e1.len() {
            return Err(contract("SPAM vectors differ in length"));
        }
        for (q, (&a, &b)) in self.e0.iter().zip(&self.e1).enumerate() {
            if !(0.0..0.5).contains(&a) || !(0.0..0.5).contains(&b) {
                return Err(Error::SingularConfusion(q));
            }
        }
        Ok(())
    }

    /// Column-stochastic confusion matrix of qubit `q`, `[[1−e0, e1], [e0, 1−e1]]`
    /// (row = read, column = prepared), with the roles of 0 and 1 exchanged
    /// when `swapped`.
    pub fn matrix(&self, q: usize, swapped: bool) -> [[f64; 2]; 2] {
        let (a, b) = if swapped {
            (self.e1[q], self.e0[q])
        } else {
            (self.e0[q], self.e1[q])
        };
        [[1.0 - a, b], [a, 1.0 - b]]
    }

    /// Applies the confusion channel to a probability vector over the
    /// register. Qubits in `swapped` have their outcome labels exchanged
    /// relative to the physical readout.
    pub fn apply(&self, probs: &mut [f64], swapped: u64) {
        for q in 0..self.n_qubits() {
            apply_2x2(probs, q, &self.matrix(q, swapped >> q & 1 == 1));
        }
    }

    /// Inverse of [`SpamModel::apply`], one 2×2 inverse per qubit.
    pub fn invert(&self, probs: &mut [f64], swapped: u64) -> Result<()> {
        for q in 0..self.n_qubits() {
            let m = self.matrix(q, swapped >> q & 1 == 1);
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det.abs() < 1e-12 {
                return Err(Error::SingularConfusion(q));
            }
            let inv = [
                [m[1][1] / det, -m[0][1] / det],
                [-m[1][0] / det, m[0][0] / det],
            ];
            apply_2x2(probs, q, &inv);
        }
        Ok(())
    }
}

fn apply_2x2(probs: &mut [f64], q: usize, m: &[[f64; 2]; 2]) {
    let bit = 1usize << q;
    for i in 0..probs.len() {
        if i & bit == 0 {
            let (a, b) = (probs[i], probs[i | bit]);
            probs[i] = m[0][0] * a + m[0][1] * b;
            probs[i | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_qubit_channel_is_kronecker_cube() {
        let spam = SpamModel::uniform(3, 0.006, 0.013);
        let m = spam.matrix(0, false);
        for prepared in 0..8usize {
            let mut p = vec![0.0; 8];
            p[prepared] = 1.0;
            spam.apply(&mut p, 0);
            for (read, &v) in p.iter().enumerate() {
                let expect: f64 = (0..3)
                    .map(|q| m[read >> q & 1][prepared >> q & 1])
                    .product();
                assert_eq!(v, expect);
            }
        }
    }

    #[test]
    fn analytic_single_qubit_inverse() {
        let spam = SpamModel::uniform(1, 0.1, 0.1);
        let mut p = vec![0.9, 0.1];
        spam.invert(&mut p, 0).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12 && p[1].abs() < 1e-12);
    }

    #[test]
    fn half_error_is_rejected() {
        assert!(SpamModel::uniform(2, 0.5, 0.1).validate().is_err());
    }
}
