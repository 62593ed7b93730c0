//! Full configuration interaction by Lanczos iteration.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SpinOrbitalHamiltonian;
use crate::error::{contract, Error, Result};

/// Largest supported number of spin-orbitals.
pub const MAX_SPIN_ORBITALS: usize = 24;
const RESIDUAL_TOL: f64 = 1e-10;
const MAX_ITER: usize = 600;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FciSolution {
    pub energy: f64,
    pub n_spatial: usize,
    /// Determinant bitmask → coefficient, over `basis`.
    pub amplitudes: BTreeMap<u64, f64>,
    pub basis: Vec<u64>,
    pub residual: f64,
}

impl FciSolution {
    pub fn amplitude(&self, det: u64) -> f64 {
        self.amplitudes.get(&det).copied().unwrap_or(0.0)
    }
}

/// Bit strings of `n` bits with `k` set, in increasing order.
fn combinations(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        return vec![0];
    }
    let mut v: u64 = (1u64 << k) - 1;
    let limit = 1u64 << n;
    while v < limit {
        out.push(v);
        // Gosper's hack
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

/// Determinant space with fixed particle number (and S_z = 0 for even counts).
pub(crate) fn determinant_basis(ham: &SpinOrbitalHamiltonian) -> Vec<u64> {
    let n = ham.n_spatial;
    let ne = ham.n_electrons;
    let mut basis = Vec::new();
    if ne % 2 == 0 {
        let strings = combinations(n, ne / 2);
        for &a in &strings {
            for &b in &strings {
                basis.push(a | b << n);
            }
        }
    } else {
        basis = combinations(2 * n, ne);
    }
    basis.sort_unstable();
    basis
}

struct SparseSym {
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseSym {
    fn build(ham: &SpinOrbitalHamiltonian, basis: &[u64]) -> SparseSym {
        let rows = basis
            .par_iter()
            .map(|&det| {
                let mut raw = Vec::new();
                ham.apply(det, &mut raw);
                let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
                for (d, c) in raw {
                    if let Ok(i) = basis.binary_search(&d) {
                        *merged.entry(i).or_insert(0.0) += c;
                    }
                }
                merged.into_iter().filter(|(_, c)| *c != 0.0).collect()
            })
            .collect();
        SparseSym { rows }
    }

    fn matvec(&self, x: &[f64]) -> Vec<f64> {
        // H|det_j⟩ = Σ_i H_ij |det_i⟩ is stored per column j; H is symmetric so
        // column j doubles as row j.
        self.rows
            .par_iter()
            .map(|row| row.iter().map(|&(i, c)| c * x[i]).sum())
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn lowest_ritz(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (k, &e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal");
    (e, eig.eigenvectors.column(k).iter().copied().collect())
}

/// Ground state of `ham` in its fixed-particle-number determinant space.
pub fn fci_ground_state(ham: &SpinOrbitalHamiltonian) -> Result<FciSolution> {
    ham.validate()?;
    if ham.n_spin_orbitals() > MAX_SPIN_ORBITALS {
        return Err(contract(format!(
            "{} spin-orbitals exceed the FCI cap of {MAX_SPIN_ORBITALS}",
            ham.n_spin_orbitals()
        )));
    }
    let basis = determinant_basis(ham);
    let dim = basis.len();
    let h = SparseSym::build(ham, &basis);

    let reference = ham.hf_reference();
    let start = basis.binary_search(&reference).unwrap_or(0);
    let mut v0 = vec![0.0; dim];
    v0[start] = 1.0;

    let mut vs: Vec<Vec<f64>> = vec![v0];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut best = (f64::INFINITY, Vec::new(), f64::INFINITY);
    for it in 0..MAX_ITER.min(dim) {
        let v = &vs[it];
        let mut w = h.matvec(v);
        let a = dot(v, &w);
        alpha.push(a);
        for _ in 0..2 {
            for u in &vs {
                let c = dot(u, &w);
                w.iter_mut().zip(u).for_each(|(wi, ui)| *wi -= c * ui);
            }
        }
        let b = dot(&w, &w).sqrt();
        let (e, y) = lowest_ritz(&alpha, &beta);
        let residual = b * y.last().copied().unwrap_or(0.0).abs();
        best = (e, y, residual);
        if residual < RESIDUAL_TOL || b < 1e-14 || it + 1 == dim {
            break;
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        vs.push(w);
    }
    let (energy, y, residual) = best;
    let mut x = vec![0.0; dim];
    for (c, v) in y.iter().zip(&vs) {
        x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += c * vi);
    }
    let norm = dot(&x, &x).sqrt();
    let sign = if x[start] < 0.0 { -1.0 } else { 1.0 };
    x.iter_mut().for_each(|xi| *xi *= sign / norm);
    let hx = h.matvec(&x);
    let true_residual = hx
        .iter()
        .zip(&x)
        .map(|(a, b)| (a - energy * b).powi(2))
        .sum::<f64>()
        .sqrt();
    if true_residual > RESIDUAL_TOL.max(residual) * 10.0 {
        return Err(Error::NoConvergence {
            residual: true_residual,
        });
    }
    let amplitudes = basis.iter().copied().zip(x.iter().copied()).collect();
    Ok(FciSolution {
        energy,
        n_spatial: ham.n_spatial,
        amplitudes,
        basis,
        residual: true_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::hf_energy;

    #[test]
    fn gosper_enumerates_binomial_count() {
        assert_eq!(combinations(7, 5).len(), 21);
        assert_eq!(combinations(4, 0), vec![0]);
        assert!(combinations(6, 3).windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_determinant_space_equals_hf() {
        let ham = SpinOrbitalHamiltonian::from_spatial(1, 2, 0.3, &[vec![-1.0]], |_, _, _, _| 0.5);
        let fci = fci_ground_state(&ham).unwrap();
        let hf = hf_energy(&ham, ham.hf_reference()).unwrap();
        assert!((fci.energy - hf).abs() < 1e-12);
        assert_eq!(fci.basis.len(), 1);
    }
}
