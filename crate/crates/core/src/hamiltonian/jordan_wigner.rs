//! Jordan-Wigner mapping with the σz string on higher indices:
//! `c†_j = σ₊_j ⊗ Π_{k>j} σz_k`, `σ± = (σx ∓ iσy)/2`.

use num_complex::Complex64;

use super::SpinOrbitalHamiltonian;
use crate::error::Result;
use crate::pauli::{Pauli, PauliMask, PauliSum, QubitHamiltonian, PRUNE_TOL};

/// JW image of `c†_pos` (`dagger`) or `c_pos` on an `n_qubits` register.
pub fn ladder(pos: usize, dagger: bool, n_qubits: usize) -> PauliSum {
    let full = if n_qubits >= 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    };
    let tail = full & !((1u64 << (pos + 1)) - 1);
    let mut x = PauliMask::z_string(tail);
    x.set(pos, Pauli::X);
    let mut y = PauliMask::z_string(tail);
    y.set(pos, Pauli::Y);
    let sign = if dagger { -0.5 } else { 0.5 };
    let mut s = PauliSum::zero();
    s.add_term(x, Complex64::new(0.5, 0.0));
    s.add_term(y, Complex64::new(0.0, sign));
    s
}

/// JW transform in the natural order (spin-orbital `p` on qubit `p`).
pub fn jordan_wigner(ham: &SpinOrbitalHamiltonian) -> Result<QubitHamiltonian> {
    let order: Vec<usize> = (0..ham.n_spin_orbitals()).collect();
    jordan_wigner_ordered(ham, &order, ham.n_spin_orbitals())
}

/// JW transform with spin-orbital `p` placed on qubit `position[p]`.
pub fn jordan_wigner_ordered(
    ham: &SpinOrbitalHamiltonian,
    position: &[usize],
    n_qubits: usize,
) -> Result<QubitHamiltonian> {
    let n = ham.n_spin_orbitals();
    let up: Vec<PauliSum> = (0..n).map(|p| ladder(position[p], true, n_qubits)).collect();
    let down: Vec<PauliSum> = (0..n).map(|p| ladder(position[p], false, n_qubits)).collect();
    let mut sum = PauliSum::identity(Complex64::new(ham.e_core, 0.0));
    for (&(p, q), &h) in &ham.one_body {
        sum.add_scaled(&up[p].mul(&down[q]), Complex64::new(h, 0.0));
    }
    for (&(p, q, r, s), &h) in &ham.two_body {
        let left = up[p].mul(&up[q]);
        let right = down[r].mul(&down[s]);
        sum.add_scaled(&left.mul(&right), Complex64::new(h, 0.0));
    }
    sum.prune(PRUNE_TOL);
    QubitHamiltonian::from_sum(n_qubits, &sum)
}

/// JW image of `T − T†` with `T = c†_p c†_q c_r c_s` at the given qubit
/// positions `[p, q, r, s]`.
pub fn double_excitation_generator(positions: [usize; 4], n_qubits: usize) -> PauliSum {
    let [p, q, r, s] = positions;
    let t = ladder(p, true, n_qubits)
        .mul(&ladder(q, true, n_qubits))
        .mul(&ladder(r, false, n_qubits))
        .mul(&ladder(s, false, n_qubits));
    let mut g = t.clone();
    g.add_scaled(&t.dagger(), Complex64::new(-1.0, 0.0));
    g.prune(PRUNE_TOL);
    g
}
