//! Ansatz compilation.

use serde::{Deserialize, Serialize};

use super::passes::{cancel_pass, convert_cnot_to_xx, encode_filled_as_zero};
use super::synth::{synth_bosonic, synth_nonbosonic, synth_pauli_exponential};
use super::{Angle, Circuit, Gate};
use crate::ansatz::{imaginary_sum, trotterize, AnsatzSpec, TrotterConfig};
use crate::error::Result;
use crate::pauli::{Pauli, PauliMask};

/// Which optimisation passes run after synthesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassConfig {
    pub cancel: bool,
    pub convert_xx: bool,
    pub encode: bool,
}

impl Default for PassConfig {
    fn default() -> Self {
        PassConfig {
            cancel: true,
            convert_xx: true,
            encode: true,
        }
    }
}

/// Cancellation, then CNOT→XX conversion, then a final cancellation.
pub fn optimize(c: &Circuit, passes: &PassConfig) -> Circuit {
    let mut out = c.clone();
    if passes.cancel {
        out = cancel_pass(&out);
    }
    if passes.convert_xx {
        out = convert_cnot_to_xx(&out);
        if passes.cancel {
            out = cancel_pass(&out);
        }
    }
    out
}

fn synth_generic(n_qubits: usize, generator: &[(PauliMask, f64)], angle: Angle) -> Result<Circuit> {
    // exp(θ·i·c·P) = exp(−i·(−2cθ)/2·P); the products of one excitation commute.
    let mut c = Circuit::new(n_qubits);
    for &(p, coef) in generator {
        let target = 63 - p.support().leading_zeros() as usize;
        c.extend(&synth_pauli_exponential(
            n_qubits,
            p,
            angle.scaled(-2.0 * coef),
            target,
        )?);
    }
    Ok(c)
}

/// `(j, k, ε)` when the generator is `ε(σ₊ʲσ₋ᵏ − h.c.)` on two qubits `j < k`.
fn bosonic_form(generator: &[(PauliMask, f64)]) -> Option<(usize, usize, f64)> {
    let [(m1, c1), (m2, c2)] = generator else {
        return None;
    };
    let support = m1.support();
    if support.count_ones() != 2 || m1.x != support || m2.x != support {
        return None;
    }
    let j = support.trailing_zeros() as usize;
    let k = 63 - support.leading_zeros() as usize;
    let (xy, yx) = if m1.get(j) == Pauli::X { (c1, c2) } else { (c2, c1) };
    let eps = 2.0 * xy;
    let clean = (xy.abs() - 0.5).abs() < 1e-9 && (xy + yx).abs() < 1e-9 && m1.z ^ m2.z == support;
    clean.then_some((j, k, eps.signum()))
}

fn synth_term(n_qubits: usize, generator: &[(PauliMask, f64)], angle: Angle) -> Result<Circuit> {
    if let Some((j, k, eps)) = bosonic_form(generator) {
        return Ok(synth_bosonic(n_qubits, j, k, angle.scaled(eps)));
    }
    if generator.len() == 8 {
        if let Ok(c) = synth_nonbosonic(n_qubits, &imaginary_sum(generator), angle) {
            return Ok(c);
        }
    }
    synth_generic(n_qubits, generator, angle)
}

/// Compiles the ansatz with every pass enabled.
pub fn assemble(spec: &AnsatzSpec, cfg: &TrotterConfig) -> Result<Circuit> {
    assemble_with(spec, cfg, &PassConfig::default())
}

/// Reference preparation on the MO qubits, pair excitations, re-encoding of
/// split MOs onto their ancillas, remaining excitations, then the passes.
pub fn assemble_with(spec: &AnsatzSpec, cfg: &TrotterConfig, passes: &PassConfig) -> Result<Circuit> {
    spec.validate()?;
    let n = spec.n_qubits;
    let sequence = trotterize(spec, cfg)?;
    let mut body = Circuit::new(n);
    let mut encoded = false;
    for (idx, scale) in sequence {
        let term = &spec.terms[idx];
        let angle = Angle::Param {
            id: term.parameter_id,
            scale,
        };
        if term.is_bosonic() && !encoded {
            body.extend(&synth_term(n, &term.pair_generator, angle)?);
            continue;
        }
        if !encoded {
            for (mo, &anc) in &spec.ancilla_map {
                body.push(Gate::Cnot {
                    control: spec.qubit_map[mo],
                    target: anc,
                });
            }
            encoded = true;
        }
        let g = synth_term(n, &term.generator, angle)?;
        body.extend(&g);
    }
    let body = optimize(&body, passes);
    let prep = spec.prep_mask();
    let mut c = Circuit::new(n);
    for q in 0..n {
        if prep >> q & 1 == 1 {
            c.push(Gate::X { q });
        }
    }
    c.extend(&body);
    if passes.encode {
        c = encode_filled_as_zero(&c, prep)?;
    }
    Ok(c)
}
