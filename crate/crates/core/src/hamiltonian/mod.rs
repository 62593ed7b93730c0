//! Molecular Hamiltonians over spin-orbitals.
//!
//! Spin-orbitals use the blocked layout: spin-orbital `k + s·n_spatial` is
//! molecular orbital `k` with spin `s` (0 = α, 1 = β). The operator is
//! `H = e_core + Σ h_pq c†_p c_q + Σ h_pqrs c†_p c†_q c_r c_s`.

mod fci;
mod fcidump;
mod jordan_wigner;
mod orbitals;
mod ranking;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};

pub use fci::{fci_ground_state, FciSolution, MAX_SPIN_ORBITALS};
pub use fcidump::{parse_fcidump, to_fcidump};
pub use jordan_wigner::{double_excitation_generator, jordan_wigner, jordan_wigner_ordered, ladder};
pub use orbitals::select_orbitals;
pub use ranking::{pair_first, rank_excitations, ExcitationKind, RankedExcitation};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinOrbitalHamiltonian {
    pub n_spatial: usize,
    pub n_electrons: usize,
    pub e_core: f64,
    pub one_body: BTreeMap<(usize, usize), f64>,
    pub two_body: BTreeMap<(usize, usize, usize, usize), f64>,
}

impl SpinOrbitalHamiltonian {
    pub fn n_spin_orbitals(&self) -> usize {
        2 * self.n_spatial
    }

    /// Spin-orbital index of MO `k` with spin `s`.
    pub fn so(&self, k: usize, s: usize) -> usize {
        k + s * self.n_spatial
    }

    /// Builds the spin-orbital operator from spatial integrals: `h[i][j]` and
    /// chemist-notation `(ij|kl)` given by `eri(i, j, k, l)`.
    pub fn from_spatial(
        n_spatial: usize,
        n_electrons: usize,
        e_core: f64,
        h: &[Vec<f64>],
        eri: impl Fn(usize, usize, usize, usize) -> f64,
    ) -> Self {
        let n = n_spatial;
        let mut one_body = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if h[i][j] != 0.0 {
                    for s in 0..2 {
                        one_body.insert((i + s * n, j + s * n), h[i][j]);
                    }
                }
            }
        }
        let mut two_body = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = eri(i, j, k, l);
                        if v == 0.0 {
                            continue;
                        }
                        for s in 0..2 {
                            for t in 0..2 {
                                let p = i + s * n;
                                let q = k + t * n;
                                let r = l + t * n;
                                let u = j + s * n;
                                if p == q || r == u {
                                    continue;
                                }
                                *two_body.entry((p, q, r, u)).or_insert(0.0) += 0.5 * v;
                            }
                        }
                    }
                }
            }
        }
        SpinOrbitalHamiltonian {
            n_spatial,
            n_electrons,
            e_core,
            one_body,
            two_body,
        }
    }

    /// Aufbau closed-shell reference: lowest MOs doubly occupied, with the
    /// extra electron of an odd count placed in α.
    pub fn hf_reference(&self) -> u64 {
        let n_alpha = self.n_electrons.div_ceil(2);
        let n_beta = self.n_electrons / 2;
        let mut det = 0u64;
        for k in 0..n_alpha {
            det |= 1 << self.so(k, 0);
        }
        for k in 0..n_beta {
            det |= 1 << self.so(k, 1);
        }
        det
    }

    /// `H|det⟩` as a list of `(determinant, coefficient)` pairs, unmerged.
    pub fn apply(&self, det: u64, out: &mut Vec<(u64, f64)>) {
        if self.e_core != 0.0 {
            out.push((det, self.e_core));
        }
        for (&(p, q), &h) in &self.one_body {
            if let Some((d, s)) = annihilate(det, q).and_then(|(d, s)| {
                create(d, p).map(|(d2, s2)| (d2, s * s2))
            }) {
                out.push((d, s * h));
            }
        }
        for (&(p, q, r, s), &h) in &self.two_body {
            let step = annihilate(det, s)
                .and_then(|(d, a)| annihilate(d, r).map(|(d, b)| (d, a * b)))
                .and_then(|(d, a)| create(d, q).map(|(d, b)| (d, a * b)))
                .and_then(|(d, a)| create(d, p).map(|(d, b)| (d, a * b)));
            if let Some((d, sign)) = step {
                out.push((d, sign * h));
            }
        }
    }

    /// Checks index bounds and finiteness of all coefficients.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_spin_orbitals();
        if n > 64 {
            return Err(contract("more than 64 spin-orbitals"));
        }
        for (&(p, q), &h) in &self.one_body {
            if p >= n || q >= n || !h.is_finite() {
                return Err(contract(format!("bad one-body entry ({p},{q})")));
            }
        }
        for (&(p, q, r, s), &h) in &self.two_body {
            if [p, q, r, s].iter().any(|&i| i >= n) || !h.is_finite() {
                return Err(contract(format!("bad two-body entry ({p},{q},{r},{s})")));
            }
        }
        if !self.e_core.is_finite() {
            return Err(contract("non-finite core energy"));
        }
        Ok(())
    }
}

/// `c_p|det⟩` with the sign from occupied spin-orbitals above `p`.
pub fn annihilate(det: u64, p: usize) -> Option<(u64, f64)> {
    if det >> p & 1 == 0 {
        return None;
    }
    Some((det & !(1 << p), parity_above(det, p)))
}

/// `c†_p|det⟩` with the sign from occupied spin-orbitals above `p`.
pub fn create(det: u64, p: usize) -> Option<(u64, f64)> {
    if det >> p & 1 == 1 {
        return None;
    }
    Some((det | 1 << p, parity_above(det, p)))
}

fn parity_above(det: u64, p: usize) -> f64 {
    let above = if p >= 63 { 0 } else { det >> (p + 1) };
    if above.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Energy of a single determinant.
pub fn hf_energy(ham: &SpinOrbitalHamiltonian, reference: u64) -> Result<f64> {
    if reference.count_ones() as usize != ham.n_electrons {
        return Err(contract(format!(
            "reference has {} electrons, Hamiltonian expects {}",
            reference.count_ones(),
            ham.n_electrons
        )));
    }
    if ham.n_spin_orbitals() < 64 && reference >> ham.n_spin_orbitals() != 0 {
        return Err(contract("reference occupies spin-orbitals outside the register"));
    }
    let occ = |p: usize| reference >> p & 1 == 1;
    let mut e = ham.e_core;
    for (&(p, q), &h) in &ham.one_body {
        if p == q && occ(p) {
            e += h;
        }
    }
    for (&(p, q, r, s), &h) in &ham.two_body {
        if occ(p) && occ(q) {
            if r == q && s == p {
                e += h;
            } else if r == p && s == q {
                e -= h;
            }
        }
    }
    Ok(e)
}
