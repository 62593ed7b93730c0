//! Reference implementations shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use ionvqe::ansatz::AnsatzSpec;
use ionvqe::circuit::{Angle, Circuit, Gate};
use ionvqe::hamiltonian::{annihilate, create, parse_fcidump, SpinOrbitalHamiltonian};
use ionvqe::pauli::{Pauli, PauliSum};
use ionvqe::vqe::Problem;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type State = BTreeMap<u64, f64>;

pub fn h2o() -> SpinOrbitalHamiltonian {
    parse_fcidump(ionvqe::H2O_STO3G_FCIDUMP).unwrap()
}

pub fn h2o_problem() -> Problem {
    Problem::full(h2o()).unwrap()
}

fn apply_string(state: &State, ops: &[(usize, bool)]) -> State {
    let mut out = State::new();
    for (&det, &amp) in state {
        let mut d = det;
        let mut sign = amp;
        let mut alive = true;
        for &(p, dagger) in ops.iter().rev() {
            let r = if dagger { create(d, p) } else { annihilate(d, p) };
            match r {
                Some((nd, s)) => {
                    d = nd;
                    sign *= s;
                }
                None => {
                    alive = false;
                    break;
                }
            }
        }
        if alive {
            *out.entry(d).or_default() += sign;
        }
    }
    out
}

/// `(T − T†)|ψ⟩` with `T = c†_p c†_q c_r c_s`, directly on determinants.
pub fn apply_generator(state: &State, (p, q, r, s): (usize, usize, usize, usize)) -> State {
    let mut out = apply_string(state, &[(p, true), (q, true), (r, false), (s, false)]);
    for (d, a) in apply_string(state, &[(s, true), (r, true), (q, false), (p, false)]) {
        *out.entry(d).or_default() -= a;
    }
    out
}

/// `exp(θ(T − T†))|ψ⟩` by Taylor series.
pub fn apply_exponential(state: &State, indices: (usize, usize, usize, usize), theta: f64) -> State {
    let mut out = state.clone();
    let mut term = state.clone();
    for k in 1..200 {
        term = apply_generator(&term, indices);
        let f = theta / k as f64;
        term.values_mut().for_each(|a| *a *= f);
        for (&d, &a) in &term {
            *out.entry(d).or_default() += a;
        }
        if term.values().all(|a| a.abs() < 1e-18) {
            break;
        }
    }
    out
}

/// `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩`.
pub fn energy(ham: &SpinOrbitalHamiltonian, state: &State) -> f64 {
    let mut buf = Vec::new();
    let mut num = 0.0;
    for (&d, &a) in state {
        buf.clear();
        ham.apply(d, &mut buf);
        for &(e, h) in &buf {
            num += a * h * state.get(&e).copied().unwrap_or(0.0);
        }
    }
    let norm: f64 = state.values().map(|a| a * a).sum();
    num / norm
}

/// Energy of the first-order, single-step product state of `spec` at
/// `theta`, computed without qubits.
pub fn oracle_energy(ham: &SpinOrbitalHamiltonian, spec: &AnsatzSpec, theta: &[f64]) -> f64 {
    let mut state = State::from([(spec.reference, 1.0)]);
    for t in &spec.terms {
        state = apply_exponential(&state, t.indices, theta[t.parameter_id]);
    }
    energy(ham, &state)
}

pub fn pauli_matrix(p: Pauli) -> DMatrix<Complex64> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let (a, b, d, e) = match p {
        Pauli::I => (c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)),
        Pauli::X => (c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)),
        Pauli::Y => (c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)),
        Pauli::Z => (c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)),
    };
    DMatrix::from_row_slice(2, 2, &[a, b, d, e])
}

/// Dense matrix of a Pauli sum; qubit 0 is the least significant bit.
pub fn dense(sum: &PauliSum, n: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(1 << n, 1 << n);
    for (mask, c) in &sum.terms {
        let mut k = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for q in (0..n).rev() {
            k = k.kronecker(&pauli_matrix(mask.get(q)));
        }
        m += k * *c;
    }
    m
}

/// `1 − |tr(U†V)| / dim`: zero exactly when U and V agree up to global phase.
pub fn phase_distance(u: &DMatrix<Complex64>, v: &DMatrix<Complex64>) -> f64 {
    let tr: Complex64 = (u.adjoint() * v).trace();
    let n = u.nrows() as f64;
    1.0 - tr.norm() / n
}

pub fn to_matrix(u: &[Vec<Complex64>]) -> DMatrix<Complex64> {
    DMatrix::from_fn(u.len(), u.len(), |i, j| u[i][j])
}

/// Random circuit on at most 8 qubits with at most 60 gates, seeded by
/// `seed`. Leading X gates mark a reference; inverse pairs, rotation runs and
/// CNOT–Rz–CNOT ladders appear often enough to exercise every pass. Returns
/// the circuit, its reference and the parameter values.
pub fn random_circuit(seed: u64) -> (Circuit, u64, Vec<f64>) {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=8usize);
    let theta: Vec<f64> = (0..3).map(|_| rng.random_range(-1.5..1.5)).collect();
    let mut c = Circuit::new(n);
    let reference: u64 = rng.random_range(0..1u64 << n);
    for q in 0..n {
        if reference >> q & 1 == 1 {
            c.push(Gate::X { q });
        }
    }
    let two = |rng: &mut rand_chacha::ChaCha8Rng| {
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        (a, b)
    };
    while c.gates.len() <= 55 {
        let q = rng.random_range(0..n);
        let angle = if rng.random_bool(0.5) {
            let quarter = [0.5, 1.0, -0.5, 0.25, 1.7];
            Angle::Const(quarter[rng.random_range(0..quarter.len())] * std::f64::consts::PI)
        } else {
            Angle::Param {
                id: rng.random_range(0..3),
                scale: [1.0, -1.0, 0.5][rng.random_range(0..3)],
            }
        };
        match rng.random_range(0..10) {
            0 => c.push(Gate::H { q }),
            1 => c.push(Gate::S { q }),
            2 => c.push(Gate::Sdg { q }),
            3 => c.push(Gate::X { q }),
            4 => c.push(Gate::Rz { q, angle }),
            5 => {
                let (control, target) = two(&mut rng);
                c.push(Gate::Cnot { control, target });
            }
            6 => {
                let (a, b) = two(&mut rng);
                c.push(Gate::Xx { a, b, angle });
            }
            7 => {
                let (control, target) = two(&mut rng);
                c.push(Gate::Cnot { control, target });
                c.push(Gate::Cnot { control, target });
            }
            8 => {
                c.push(Gate::H { q });
                c.push(Gate::S { q });
                c.push(Gate::H { q });
            }
            _ if n >= 3 => {
                let (x, t) = two(&mut rng);
                let y = (0..n).find(|&y| y != x && y != t).unwrap();
                c.push(Gate::Cnot { control: x, target: t });
                c.push(Gate::Rz { q: t, angle });
                c.push(Gate::Cnot { control: y, target: t });
                c.push(Gate::Rz { q: t, angle: angle.neg() });
                c.push(Gate::Cnot { control: x, target: t });
            }
            _ => c.push(Gate::Rz { q, angle }),
        }
        if rng.random_bool(0.04) {
            break;
        }
    }
    (c, reference, theta)
}
