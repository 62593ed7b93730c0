//! Dense state-vector simulation.

mod sampling;
mod spam;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{rz_matrix, Angle, Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliMask, QubitHamiltonian};

pub use sampling::{sample_counts, sample_shots, stream_rng, ShotHistogram};
pub use spam::SpamModel;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    pub n_qubits: usize,
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> StateVector {
        assert!(n_qubits <= MAX_QUBITS, "register too large");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply_1q(&mut self, q: usize, m: &[Complex64; 4]) {
        let bit = 1usize << q;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let j = i | bit;
                let (a, b) = (self.amplitudes[i], self.amplitudes[j]);
                self.amplitudes[i] = m[0] * a + m[1] * b;
                self.amplitudes[j] = m[2] * a + m[3] * b;
            }
        }
    }

    pub fn apply_gate(&mut self, g: &Gate, theta: &[f64]) {
        match *g {
            Gate::Rz { q, angle } => self.apply_1q(q, &rz_matrix(angle.resolve(theta))),
            Gate::Cnot { control, target } => {
                let (c, t) = (1usize << control, 1usize << target);
                for i in 0..self.amplitudes.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amplitudes.swap(i, i | t);
                    }
                }
            }
            Gate::Xx { a, b, angle } => {
                let phi = angle.resolve(theta);
                let (cs, sn) = ((phi / 2.0).cos(), (phi / 2.0).sin());
                let mi = Complex64::new(0.0, -sn);
                let mask = (1usize << a) | (1usize << b);
                for i in 0..self.amplitudes.len() {
                    if i & (1 << a) == 0 {
                        let j = i ^ mask;
                        let (u, v) = (self.amplitudes[i], self.amplitudes[j]);
                        self.amplitudes[i] = u * cs + v * mi;
                        self.amplitudes[j] = v * cs + u * mi;
                    }
                }
            }
            _ => {
                let (q, _) = g.qubits();
                self.apply_1q(q, &g.matrix_1q().expect("constant single-qubit gate"));
            }
        }
    }

    /// Applies a Pauli string (up to global phase).
    pub fn apply_pauli(&mut self, p: PauliMask) {
        if p.is_identity() {
            return;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let (j, ph) = p.apply(i);
            out[j] = ph * a;
        }
        self.amplitudes = out;
    }

    /// Rotates each qubit so that measuring Z reads out `basis[q]`.
    pub fn rotate_to_basis(&mut self, basis: &[Pauli]) {
        for (q, p) in basis.iter().enumerate() {
            match p {
                Pauli::X => self.apply_gate(&Gate::H { q }, &[]),
                Pauli::Y => {
                    self.apply_gate(&Gate::Sdg { q }, &[]);
                    self.apply_gate(&Gate::H { q }, &[]);
                }
                _ => {}
            }
        }
    }
}

/// Every parameter id referenced by `c` must index into `theta`.
fn check_params(c: &Circuit, theta: &[f64]) -> Result<()> {
    let expected = c.n_parameters();
    if theta.len() < expected {
        return Err(Error::ParameterCount {
            expected,
            got: theta.len(),
        });
    }
    Ok(())
}

/// State after the gates only, from `|0…0⟩`, without the Pauli frame.
pub fn run_physical(c: &Circuit, theta: &[f64]) -> Result<StateVector> {
    check_params(c, theta)?;
    let mut psi = StateVector::basis(c.n_qubits, 0);
    for g in &c.gates {
        psi.apply_gate(g, theta);
    }
    Ok(psi)
}

/// State prepared by the circuit from `|0…0⟩`, Pauli frame included.
pub fn run_exact(c: &Circuit, theta: &[f64]) -> Result<StateVector> {
    let mut psi = run_physical(c, theta)?;
    psi.apply_pauli(c.frame);
    Ok(psi)
}

/// Runs the circuit on an arbitrary input state (frame included).
pub fn run_on(c: &Circuit, theta: &[f64], input: &StateVector) -> StateVector {
    let mut psi = input.clone();
    for g in &c.gates {
        psi.apply_gate(g, theta);
    }
    psi.apply_pauli(c.frame);
    psi
}

/// Dense unitary (column `j` is the image of `|j⟩`), frame included.
pub fn dense_unitary(c: &Circuit, theta: &[f64]) -> Vec<Vec<Complex64>> {
    let dim = 1usize << c.n_qubits;
    let mut u = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for j in 0..dim {
        let psi = run_on(c, theta, &StateVector::basis(c.n_qubits, j));
        for (i, a) in psi.amplitudes.into_iter().enumerate() {
            u[i][j] = a;
        }
    }
    u
}

/// `|tr(U†V)| / dim`: 1 exactly when U and V agree up to global phase.
pub fn unitary_overlap(u: &[Vec<Complex64>], v: &[Vec<Complex64>]) -> f64 {
    let dim = u.len();
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..dim {
        for j in 0..dim {
            t += u[i][j].conj() * v[i][j];
        }
    }
    t.norm() / dim as f64
}

/// Exact `⟨ψ|H|ψ⟩`.
pub fn expectation(state: &StateVector, h: &QubitHamiltonian) -> Result<f64> {
    if state.n_qubits != h.n_qubits {
        return Err(Error::QubitMismatch {
            state: state.n_qubits,
            operator: h.n_qubits,
        });
    }
    let mut e = Complex64::new(h.constant * state.norm_sqr(), 0.0);
    for (mask, c) in h.masks() {
        e += pauli_expectation_complex(state, mask) * c;
    }
    debug_assert!(e.im.abs() < 1e-10 * (1.0 + e.re.abs()), "imaginary energy {}", e.im);
    Ok(e.re)
}

fn pauli_expectation_complex(state: &StateVector, p: PauliMask) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, a) in state.amplitudes.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let (j, ph) = p.apply(i);
        acc += state.amplitudes[j].conj() * ph * a;
    }
    acc
}

/// Exact `⟨ψ|P|ψ⟩` for a Pauli string.
pub fn pauli_expectation(state: &StateVector, p: PauliMask) -> f64 {
    pauli_expectation_complex(state, p).re
}

/// A Hamiltonian grouped by X-mask with precomputed diagonals, for repeated
/// energy evaluation on one register.
#[derive(Clone, Debug)]
pub struct CompiledHamiltonian {
    pub n_qubits: usize,
    pub constant: f64,
    groups: Vec<(usize, Vec<Complex64>)>,
}

impl CompiledHamiltonian {
    pub fn new(h: &QubitHamiltonian) -> CompiledHamiltonian {
        let dim = 1usize << h.n_qubits;
        let mut by_x: std::collections::BTreeMap<u64, Vec<(PauliMask, f64)>> =
            std::collections::BTreeMap::new();
        for (m, c) in h.masks() {
            by_x.entry(m.x).or_default().push((m, c));
        }
        let groups = by_x
            .into_iter()
            .map(|(x, terms)| {
                let diag = (0..dim)
                    .map(|i| {
                        terms
                            .iter()
                            .map(|(m, c)| m.apply(i).1 * *c)
                            .sum::<Complex64>()
                    })
                    .collect();
                (x as usize, diag)
            })
            .collect();
        CompiledHamiltonian {
            n_qubits: h.n_qubits,
            constant: h.constant,
            groups,
        }
    }

    pub fn expectation(&self, state: &StateVector) -> f64 {
        let nz: Vec<usize> = state
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(i, _)| i)
            .collect();
        let amp = &state.amplitudes;
        let mut e = self.constant * state.norm_sqr();
        for (x, diag) in &self.groups {
            let mut acc = Complex64::new(0.0, 0.0);
            for &i in &nz {
                acc += amp[i ^ x].conj() * diag[i] * amp[i];
            }
            e += acc.re;
        }
        e
    }
}

/// Unused-parameter guard: a circuit whose angles are all constant.
pub fn is_constant(c: &Circuit) -> bool {
    c.gates
        .iter()
        .all(|g| !matches!(g.angle(), Some(Angle::Param { .. })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn xx_quarter_turn_on_zero() {
        let mut c = Circuit::new(2);
        c.push(Gate::Xx {
            a: 0,
            b: 1,
            angle: Angle::Const(PI / 2.0),
        });
        let psi = run_exact(&c, &[]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((psi.amplitudes[0] - Complex64::new(h, 0.0)).norm() < 1e-15);
        assert!((psi.amplitudes[3] - Complex64::new(0.0, -h)).norm() < 1e-15);
    }

    #[test]
    fn parameter_count_is_checked() {
        let mut c = Circuit::new(1);
        c.push(Gate::Rz {
            q: 0,
            angle: Angle::param(1),
        });
        assert!(matches!(
            run_exact(&c, &[0.1]),
            Err(Error::ParameterCount { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn z_on_zero_state() {
        let h = QubitHamiltonian {
            n_qubits: 1,
            constant: 0.0,
            terms: vec![crate::pauli::PauliString::new(1.0, PauliMask::single(0, Pauli::Z))],
        };
        let e = expectation(&StateVector::basis(1, 0), &h).unwrap();
        assert_eq!(e, 1.0);
    }
}
