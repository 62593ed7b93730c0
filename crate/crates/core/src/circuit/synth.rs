//! Gate templates for Pauli exponentials and excitation terms.

use super::clifford::conjugate_through;
use super::passes::cancel_pass;
use super::{Angle, Circuit, Gate};
use crate::error::{contract, Result};
use crate::pauli::{Pauli, PauliMask, PauliSum};

use Pauli::{X, Y};

/// Execution order of the eight Pauli products of a double excitation,
/// listed over its four qubits in ascending order.
pub const NONBOSONIC_ORDER: [[Pauli; 4]; 8] = [
    [X, X, X, Y],
    [X, X, Y, X],
    [Y, X, Y, Y],
    [Y, X, X, X],
    [Y, Y, X, Y],
    [Y, Y, Y, X],
    [X, Y, Y, Y],
    [X, Y, X, X],
];

fn basis_in(q: usize, p: Pauli, out: &mut Vec<Gate>) {
    match p {
        X => out.push(Gate::H { q }),
        Y => {
            out.push(Gate::Sdg { q });
            out.push(Gate::H { q });
        }
        _ => {}
    }
}

fn basis_out(q: usize, p: Pauli, out: &mut Vec<Gate>) {
    match p {
        X => out.push(Gate::H { q }),
        Y => {
            out.push(Gate::H { q });
            out.push(Gate::S { q });
        }
        _ => {}
    }
}

/// `exp(−i·angle/2·P)` as a star: every other support qubit is a CNOT control
/// onto `target`, which carries the single Rz.
pub fn synth_pauli_exponential(
    n_qubits: usize,
    pauli: PauliMask,
    angle: Angle,
    target: usize,
) -> Result<Circuit> {
    if pauli.is_identity() {
        return Err(contract("Pauli exponential of the identity"));
    }
    if pauli.get(target) == Pauli::I {
        return Err(contract(format!("target {target} outside the Pauli support")));
    }
    let factors = pauli.to_factors();
    let mut c = Circuit::new(n_qubits);
    for (&q, &p) in &factors {
        basis_in(q, p, &mut c.gates);
    }
    for &q in factors.keys().filter(|&&q| q != target) {
        c.push(Gate::Cnot {
            control: q,
            target,
        });
    }
    c.push(Gate::Rz { q: target, angle });
    for &q in factors.keys().rev().filter(|&&q| q != target) {
        c.push(Gate::Cnot {
            control: q,
            target,
        });
    }
    for (&q, &p) in factors.iter().rev() {
        basis_out(q, p, &mut c.gates);
    }
    Ok(c)
}

/// `exp[θ(σ₊ʲ σ₋ᵏ − h.c.)]` with `σ₊ = |1⟩⟨0|`, from two XX gates.
pub fn synth_bosonic(n_qubits: usize, j: usize, k: usize, angle: Angle) -> Circuit {
    assert_ne!(j, k, "bosonic template needs two qubits");
    let mut c = Circuit::new(n_qubits);
    c.push(Gate::Sdg { q: k });
    c.push(Gate::Xx {
        a: j,
        b: k,
        angle: angle.neg(),
    });
    c.push(Gate::S { q: k });
    c.push(Gate::Sdg { q: j });
    c.push(Gate::Xx { a: j, b: k, angle });
    c.push(Gate::S { q: j });
    c
}

struct Product {
    subset: u64,
    weight: f64,
}

/// `exp(angle · G)` for the JW generator `G = T − T†` of a double excitation.
///
/// The eight products are diagonalised by one shared Clifford frame and
/// emitted as a Gray-code walk of CNOTs onto the highest qubit.
pub fn synth_nonbosonic(n_qubits: usize, generator: &PauliSum, angle: Angle) -> Result<Circuit> {
    if generator.terms.len() != 8 {
        return Err(contract(format!(
            "double-excitation generator must have 8 Pauli products, got {}",
            generator.terms.len()
        )));
    }
    let first = *generator.terms.keys().next().unwrap();
    let quad = first.x;
    let jw = first.z & !quad;
    if quad.count_ones() != 4 {
        return Err(contract("double excitation must act on four qubits"));
    }
    let mut qs = [0usize; 4];
    let mut bits = quad;
    for slot in qs.iter_mut() {
        *slot = bits.trailing_zeros() as usize;
        bits &= bits - 1;
    }
    let [q1, q2, q3, q4] = qs;

    let mut frame = vec![
        Gate::H { q: q1 },
        Gate::H { q: q2 },
        Gate::H { q: q3 },
        Gate::Sdg { q: q4 },
        Gate::H { q: q4 },
    ];
    let mut z = jw;
    while z != 0 {
        frame.push(Gate::Cnot {
            control: z.trailing_zeros() as usize,
            target: q4,
        });
        z &= z - 1;
    }
    for q in [q1, q2, q3] {
        frame.push(Gate::Cnot {
            control: q,
            target: q4,
        });
    }
    for q in [q1, q2, q3] {
        frame.push(Gate::H { q });
    }

    let mut products: Vec<Option<Product>> = (0..8).map(|_| None).collect();
    for (&mask, c) in &generator.terms {
        if mask.x != quad || mask.z & !quad != jw || c.re.abs() > 1e-12 {
            return Err(contract("generator is not a double excitation"));
        }
        let pattern = [mask.get(q1), mask.get(q2), mask.get(q3), mask.get(q4)];
        let slot = NONBOSONIC_ORDER
            .iter()
            .position(|p| *p == pattern)
            .ok_or_else(|| contract("Pauli product outside the excitation pattern"))?;
        let (diag, neg) = conjugate_through(mask, &frame).expect("Clifford frame");
        let rest = diag.z & !(1u64 << q4);
        if diag.x != 0 || diag.z & (1u64 << q4) == 0 || rest & !quad != 0 {
            return Err(contract("frame does not diagonalise the product"));
        }
        let s = if neg { -1.0 } else { 1.0 };
        products[slot] = Some(Product {
            subset: rest,
            weight: -2.0 * c.im * s,
        });
    }
    let products: Vec<Product> = products
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| contract("repeated Pauli product"))?;

    let flips = best_flips(&products, [q1, q2, q3]);
    let mut c = Circuit::new(n_qubits);
    c.gates.extend_from_slice(&frame);
    let flip_gates: Vec<Gate> = [q1, q2, q3]
        .into_iter()
        .filter(|q| flips >> q & 1 == 1)
        .map(|q| Gate::X { q })
        .collect();
    c.gates.extend_from_slice(&flip_gates);
    let mut prev = 0u64;
    for p in &products {
        push_parity_cnots(prev ^ p.subset, q4, &mut c);
        let sign = flip_sign(flips, p.subset);
        c.push(Gate::Rz {
            q: q4,
            angle: angle.scaled(p.weight * sign),
        });
        prev = p.subset;
    }
    push_parity_cnots(prev, q4, &mut c);
    c.gates.extend_from_slice(&flip_gates);
    c.gates
        .extend(frame.iter().rev().map(Gate::inverse));
    Ok(cancel_pass(&c))
}

fn flip_sign(flips: u64, subset: u64) -> f64 {
    if (flips & subset).count_ones() % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

fn push_parity_cnots(mut diff: u64, target: usize, c: &mut Circuit) {
    while diff != 0 {
        c.push(Gate::Cnot {
            control: diff.trailing_zeros() as usize,
            target,
        });
        diff &= diff - 1;
    }
}

/// X-conjugation of the Gray block that maximises the number of
/// `CNOT(x)·Rz(α)·CNOT(y)·Rz(−α)·CNOT(x)` motifs; the walk's closing CNOT is
/// excluded because it is absorbed into the frame.
fn best_flips(products: &[Product], qs: [usize; 3]) -> u64 {
    let mut diffs = Vec::with_capacity(products.len());
    let mut prev = 0u64;
    for p in products {
        diffs.push(prev ^ p.subset);
        prev = p.subset;
    }
    let mut best = (0usize, 0u64);
    let mut best_key = (usize::MAX, u32::MAX, u64::MAX);
    for bits in 0u64..8 {
        let flips: u64 = (0..3)
            .filter(|i| bits >> i & 1 == 1)
            .map(|i| 1u64 << qs[i])
            .fold(0, |a, b| a | b);
        let w: Vec<f64> = products
            .iter()
            .map(|p| p.weight * flip_sign(flips, p.subset))
            .collect();
        let mut count = 0;
        let mut i = 0;
        while i + 2 < diffs.len() {
            let single = |d: u64| d.count_ones() == 1;
            if single(diffs[i])
                && single(diffs[i + 1])
                && diffs[i + 2] == diffs[i]
                && (w[i] + w[i + 1]).abs() < 1e-12
            {
                count += 1;
                i += 2;
            } else {
                i += 1;
            }
        }
        let key = (usize::MAX - count, flips.count_ones(), flips);
        if key < best_key {
            best_key = key;
            best = (count, flips);
        }
    }
    best.1
}
