//! Circuit rewrite passes.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use num_complex::Complex64;

use super::clifford::conjugate;
use super::{normalize_angle, Angle, Circuit, Gate};
use crate::error::{contract, Result};
use crate::pauli::{Pauli, PauliMask};

type M2 = [Complex64; 4];

const EPS: f64 = 1e-10;

fn mul(a: &M2, b: &M2) -> M2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// Matrix of single-qubit gates applied in time order.
fn run_matrix(gates: &[Gate]) -> M2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    gates.iter().fold([one, zero, zero, one], |acc, g| {
        mul(&g.matrix_1q().expect("constant single-qubit gate"), &acc)
    })
}

fn same_up_to_phase(a: &M2, b: &M2) -> bool {
    let t = a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2] + a[3].conj() * b[3];
    (t.norm() / 2.0 - 1.0).abs() < EPS
}

fn diag_gates(q: usize, phi: f64) -> Vec<Gate> {
    let phi = normalize_angle(phi);
    if phi.abs() < EPS {
        vec![]
    } else if (phi - FRAC_PI_2).abs() < EPS {
        vec![Gate::S { q }]
    } else if (phi + FRAC_PI_2).abs() < EPS {
        vec![Gate::Sdg { q }]
    } else {
        vec![Gate::Rz {
            q,
            angle: Angle::Const(phi),
        }]
    }
}

/// Shortest gate sequence from a small canonical family realising `u` up to
/// global phase.
fn synthesize_1q(q: usize, u: &M2) -> Option<Vec<Gate>> {
    let arg = |z: Complex64| z.arg();
    let mut cands: Vec<Vec<Gate>> = Vec::new();
    if u[1].norm() < EPS {
        cands.push(diag_gates(q, arg(u[3] / u[0])));
    } else if u[0].norm() < EPS {
        let mut g = diag_gates(q, arg(u[1] / u[2]));
        g.push(Gate::X { q });
        cands.push(g);
    } else if (u[0].norm() - FRAC_1_SQRT_2).abs() < EPS {
        let mut g = diag_gates(q, arg(u[1] / u[0]));
        g.push(Gate::H { q });
        g.extend(diag_gates(q, arg(u[2] / u[0])));
        cands.push(g);
    } else {
        let m = 2.0 * u[0].norm().min(1.0).acos();
        let big_a = arg(u[3] / u[0]);
        let big_b = arg(u[2] / u[1]);
        let (a, b) = ((big_a + big_b) / 2.0, (big_a - big_b) / 2.0);
        for m in [m, -m] {
            let mut g = diag_gates(q, b);
            g.push(Gate::H { q });
            g.push(Gate::Rz {
                q,
                angle: Angle::Const(m),
            });
            g.push(Gate::H { q });
            g.extend(diag_gates(q, a));
            cands.push(g);
        }
    }
    cands
        .into_iter()
        .find(|g| same_up_to_phase(&run_matrix(g), u))
}

fn is_const_1q(g: &Gate) -> bool {
    !g.is_two_qubit() && g.matrix_1q().is_some()
}

fn h_count(gates: &[Gate]) -> usize {
    gates.iter().filter(|g| matches!(g, Gate::H { .. })).count()
}

/// Pending edits over a gate list: `None` keeps the gate, `Some(v)` replaces
/// it by `v`.
struct Edits<'a> {
    gates: &'a [Gate],
    slots: Vec<Option<Vec<Gate>>>,
}

enum Slot<'a> {
    Original(&'a Gate),
    Removed,
    Rewritten,
}

impl<'a> Edits<'a> {
    fn new(gates: &'a [Gate]) -> Self {
        Edits {
            gates,
            slots: vec![None; gates.len()],
        }
    }

    fn slot(&self, k: usize, wires: &[usize]) -> Slot<'a> {
        match &self.slots[k] {
            None => Slot::Original(&self.gates[k]),
            Some(v) if v.iter().all(|g| wires.iter().all(|&w| !g.touches(w))) => Slot::Removed,
            Some(_) => Slot::Rewritten,
        }
    }

    fn set(&mut self, k: usize, v: Vec<Gate>) {
        self.slots[k] = Some(v);
    }

    fn finish(self) -> Option<Vec<Gate>> {
        if self.slots.iter().all(Option::is_none) {
            return None;
        }
        let mut out = Vec::with_capacity(self.gates.len());
        for (g, s) in self.gates.iter().zip(self.slots) {
            match s {
                None => out.push(*g),
                Some(v) => out.extend(v),
            }
        }
        Some(out)
    }
}

fn drop_trivial(gates: &[Gate]) -> Option<Vec<Gate>> {
    let keep = |g: &Gate| !matches!(g.angle(), Some(a) if a.is_trivial());
    if gates.iter().all(keep) {
        return None;
    }
    Some(gates.iter().copied().filter(keep).collect())
}

/// Replaces each maximal run of constant single-qubit gates on one wire by
/// its canonical form when that is shorter (or equally long with fewer H).
fn resynthesize_runs(gates: &[Gate], n_qubits: usize) -> Option<Vec<Gate>> {
    let mut edits = Edits::new(gates);
    for q in 0..n_qubits {
        let mut run: Vec<usize> = Vec::new();
        let flush = |run: &mut Vec<usize>, edits: &mut Edits| {
            if !run.is_empty() {
                let seq: Vec<Gate> = run.iter().map(|&k| gates[k]).collect();
                if let Some(c) = synthesize_1q(q, &run_matrix(&seq)) {
                    if (c.len(), h_count(&c)) < (seq.len(), h_count(&seq)) {
                        let last = *run.last().unwrap();
                        for &k in &run[..run.len() - 1] {
                            edits.set(k, vec![]);
                        }
                        edits.set(last, c);
                    }
                }
                run.clear();
            }
        };
        for (k, g) in gates.iter().enumerate() {
            if g.touches(q) {
                if is_const_1q(g) {
                    run.push(k);
                } else {
                    flush(&mut run, &mut edits);
                }
            }
        }
        flush(&mut run, &mut edits);
    }
    edits.finish()
}

/// Cancels CNOT pairs separated by gates that commute with them, and reduces
/// `CNOT·R·CNOT` with `R` a non-diagonal single-qubit run on the control.
fn cancel_cnot_pairs(gates: &[Gate]) -> Option<Vec<Gate>> {
    let mut edits = Edits::new(gates);
    let n = gates.len();
    for i in 0..n {
        let (c, t) = match (edits.slots[i].is_none(), gates[i]) {
            (true, Gate::Cnot { control, target }) => (control, target),
            _ => continue,
        };
        let mut run: Vec<usize> = Vec::new();
        let mut diagonal = true;
        let mut constant = true;
        let mut shared_control = false;
        let mut partner = None;
        for k in i + 1..n {
            let g = match edits.slot(k, &[c, t]) {
                Slot::Original(g) => g,
                Slot::Removed => continue,
                Slot::Rewritten => break,
            };
            let (on_c, on_t) = (g.touches(c), g.touches(t));
            if !on_c && !on_t {
                continue;
            }
            if *g == (Gate::Cnot { control: c, target: t }) {
                partner = Some(k);
                break;
            }
            if on_c && on_t {
                break;
            }
            if on_c {
                match g {
                    Gate::Cnot { control, .. } if *control == c => shared_control = true,
                    g if !g.is_two_qubit() => {
                        if !g.is_diagonal() {
                            diagonal = false;
                        }
                        if !is_const_1q(g) {
                            constant = false;
                        }
                        run.push(k);
                    }
                    _ => break,
                }
                if !diagonal && (!constant || shared_control) {
                    break;
                }
            } else {
                let commutes = match *g {
                    Gate::X { .. } => true,
                    Gate::Cnot { target, .. } => target == t,
                    Gate::Xx { .. } => true,
                    _ => false,
                };
                if !commutes {
                    break;
                }
            }
        }
        let Some(j) = partner else { continue };
        if diagonal {
            edits.set(i, vec![]);
            edits.set(j, vec![]);
            continue;
        }
        let seq: Vec<Gate> = run.iter().map(|&k| gates[k]).collect();
        let u = run_matrix(&seq);
        let replacement = if u[0].norm() < EPS {
            // C·(X D)·C = X_c X_t D
            synthesize_1q(c, &u).map(|mut v| {
                v.push(Gate::X { q: t });
                v
            })
        } else if (u[0].norm() - FRAC_1_SQRT_2).abs() < EPS {
            let arg = |z: Complex64| z.arg();
            let mut v = diag_gates(c, arg(u[1] / u[0]));
            v.extend([
                Gate::S { q: c },
                Gate::H { q: c },
                Gate::Cnot { control: c, target: t },
                Gate::S { q: c },
                Gate::H { q: c },
                Gate::S { q: c },
                Gate::Sdg { q: t },
                Gate::H { q: t },
                Gate::Sdg { q: t },
            ]);
            v.extend(diag_gates(c, arg(u[2] / u[0])));
            Some(v)
        } else {
            None
        };
        if let Some(v) = replacement {
            edits.set(i, vec![]);
            for &k in &run {
                edits.set(k, vec![]);
            }
            edits.set(j, v);
            // The rewritten block may enable further matches; let the
            // fixed-point loop pick them up.
            break;
        }
    }
    edits.finish()
}

fn diag_angle(g: &Gate) -> Option<Angle> {
    match *g {
        Gate::S { .. } => Some(Angle::Const(FRAC_PI_2)),
        Gate::Sdg { .. } => Some(Angle::Const(-FRAC_PI_2)),
        Gate::Rz { angle, .. } => Some(angle),
        _ => None,
    }
}

fn diag_from_angle(q: usize, a: Angle) -> Vec<Gate> {
    match a {
        Angle::Const(v) => diag_gates(q, v),
        a if a.is_trivial() => vec![],
        angle => vec![Gate::Rz { q, angle }],
    }
}

/// Merges diagonal rotations on one wire across other diagonal gates and
/// CNOT controls.
fn merge_diagonals(gates: &[Gate]) -> Option<Vec<Gate>> {
    let mut edits = Edits::new(gates);
    let n = gates.len();
    for i in 0..n {
        if edits.slots[i].is_some() {
            continue;
        }
        let Some(a) = diag_angle(&gates[i]) else { continue };
        let q = gates[i].qubits().0;
        for k in i + 1..n {
            let g = match edits.slot(k, &[q]) {
                Slot::Original(g) => g,
                Slot::Removed => continue,
                Slot::Rewritten => break,
            };
            if !g.touches(q) {
                continue;
            }
            if let Some(b) = diag_angle(g) {
                if let Some(m) = a.merge(&b) {
                    edits.set(i, vec![]);
                    edits.set(k, diag_from_angle(q, m));
                    break;
                }
                continue;
            }
            match *g {
                Gate::Cnot { control, .. } if control == q => continue,
                _ => break,
            }
        }
    }
    edits.finish()
}

/// Merges XX rotations on the same pair across gates that commute with them.
fn merge_xx(gates: &[Gate]) -> Option<Vec<Gate>> {
    let mut edits = Edits::new(gates);
    let n = gates.len();
    for i in 0..n {
        let (a, b, alpha) = match (edits.slots[i].is_none(), gates[i]) {
            (true, Gate::Xx { a, b, angle }) => (a, b, angle),
            _ => continue,
        };
        for k in i + 1..n {
            let g = match edits.slot(k, &[a, b]) {
                Slot::Original(g) => g,
                Slot::Removed => continue,
                Slot::Rewritten => break,
            };
            if !g.touches(a) && !g.touches(b) {
                continue;
            }
            match *g {
                Gate::Xx { a: x, b: y, angle } => {
                    if (x == a && y == b) || (x == b && y == a) {
                        if let Some(m) = alpha.merge(&angle) {
                            edits.set(i, vec![]);
                            edits.set(
                                k,
                                if m.is_trivial() {
                                    vec![]
                                } else {
                                    vec![Gate::Xx { a: x, b: y, angle: m }]
                                },
                            );
                            break;
                        }
                    }
                }
                Gate::X { .. } => {}
                Gate::Cnot { control, .. } if control != a && control != b => {}
                _ => break,
            }
        }
    }
    edits.finish()
}

/// Fixed-point simplification: inverse-pair removal, single-qubit run
/// resynthesis (covering `HSH = S†HS†`), rotation merging, commutation-aware
/// CNOT cancellation and the `CNOT·H·CNOT` reduction.
pub fn cancel_pass(c: &Circuit) -> Circuit {
    let mut gates = c.gates.clone();
    loop {
        let mut changed = false;
        let steps: [&dyn Fn(&[Gate]) -> Option<Vec<Gate>>; 5] = [
            &drop_trivial,
            &|g| resynthesize_runs(g, c.n_qubits),
            &merge_diagonals,
            &merge_xx,
            &cancel_cnot_pairs,
        ];
        for step in steps {
            if let Some(next) = step(&gates) {
                if next != gates {
                    gates = next;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Circuit {
        n_qubits: c.n_qubits,
        gates,
        frame: c.frame,
    }
}

fn next_on(gates: &[Gate], from: usize, q: usize) -> Option<usize> {
    (from..gates.len()).find(|&k| gates[k].touches(q))
}

/// Rewrites `CNOT(x,t)·Rz_t(α)·CNOT(y,t)·Rz_t(−α)·CNOT(x,t)` (time order,
/// `x` idle throughout) as `ZZ(α)·CNOT(y,t)·ZZ(−α)` with each `ZZ` an
/// H-conjugated XX gate.
pub fn convert_cnot_to_xx(c: &Circuit) -> Circuit {
    let g = &c.gates;
    let mut out = Vec::with_capacity(g.len());
    let mut slots: Vec<Option<Vec<Gate>>> = vec![None; g.len()];
    let mut i = 0;
    while i < g.len() {
        if slots[i].is_some() {
            i += 1;
            continue;
        }
        if let Some(rw) = match_motif(g, i) {
            let (x, t, alpha, k1, k3, k4) = rw;
            slots[i] = Some(vec![
                Gate::H { q: x },
                Gate::H { q: t },
                Gate::Xx { a: x, b: t, angle: alpha },
                Gate::H { q: t },
            ]);
            slots[k1] = Some(vec![]);
            slots[k3] = Some(vec![
                Gate::H { q: t },
                Gate::Xx {
                    a: x,
                    b: t,
                    angle: alpha.neg(),
                },
                Gate::H { q: t },
                Gate::H { q: x },
            ]);
            slots[k4] = Some(vec![]);
        }
        i += 1;
    }
    for (gate, s) in g.iter().zip(slots) {
        match s {
            None => out.push(*gate),
            Some(v) => out.extend(v),
        }
    }
    Circuit {
        n_qubits: c.n_qubits,
        gates: out,
        frame: c.frame,
    }
}

type Motif = (usize, usize, Angle, usize, usize, usize);

fn match_motif(g: &[Gate], i: usize) -> Option<Motif> {
    let Gate::Cnot { control: x, target: t } = g[i] else {
        return None;
    };
    let k1 = next_on(g, i + 1, t)?;
    let Gate::Rz { angle: alpha, .. } = g[k1] else {
        return None;
    };
    if alpha.is_trivial() {
        return None;
    }
    let k2 = next_on(g, k1 + 1, t)?;
    match g[k2] {
        Gate::Cnot { control, target } if target == t && control != x => {}
        _ => return None,
    }
    let k3 = next_on(g, k2 + 1, t)?;
    match g[k3] {
        Gate::Rz { angle, .. } if angle.is_negation_of(&alpha) => {}
        _ => return None,
    }
    let k4 = next_on(g, k3 + 1, t)?;
    if g[k4] != (Gate::Cnot { control: x, target: t }) {
        return None;
    }
    if next_on(g, i + 1, x) != Some(k4) {
        return None;
    }
    Some((x, t, alpha, k1, k3, k4))
}

/// Removes the reference-preparation X gates and carries them through the
/// circuit as a Pauli frame, flipping the sign of rotations they
/// anticommute with. The frame ends up in [`Circuit::frame`].
pub fn encode_filled_as_zero(c: &Circuit, reference: u64) -> Result<Circuit> {
    let mut gates = c.gates.clone();
    let mut frame = PauliMask::IDENTITY;
    let mut r = reference;
    while r != 0 {
        let q = r.trailing_zeros() as usize;
        r &= r - 1;
        let k = next_on(&gates, 0, q)
            .filter(|&k| gates[k] == Gate::X { q })
            .ok_or_else(|| contract(format!("no reference X gate on qubit {q}")))?;
        gates.remove(k);
        frame.set(q, Pauli::X);
    }
    let mut out = Vec::with_capacity(gates.len());
    for g in gates {
        match g {
            Gate::Rz { q, angle } => {
                let flip = !frame.commutes_with(&PauliMask::single(q, Pauli::Z));
                out.push(Gate::Rz {
                    q,
                    angle: if flip { angle.neg() } else { angle },
                });
            }
            Gate::Xx { a, b, angle } => {
                let mut xx = PauliMask::single(a, Pauli::X);
                xx.set(b, Pauli::X);
                let flip = !frame.commutes_with(&xx);
                out.push(Gate::Xx {
                    a,
                    b,
                    angle: if flip { angle.neg() } else { angle },
                });
            }
            g => {
                frame = conjugate(frame, &g).expect("Clifford gate").0;
                out.push(g);
            }
        }
    }
    Ok(Circuit {
        n_qubits: c.n_qubits,
        gates: out,
        frame: mul_frame(c.frame, frame),
    })
}

fn mul_frame(outer: PauliMask, inner: PauliMask) -> PauliMask {
    outer.mul(&inner).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{dense_unitary, unitary_overlap};

    fn equivalent(a: &Circuit, b: &Circuit, theta: &[f64]) -> bool {
        let o = unitary_overlap(&dense_unitary(a, theta), &dense_unitary(b, theta));
        (o - 1.0).abs() < 1e-10
    }

    #[test]
    fn adjacent_cnots_cancel() {
        let mut c = Circuit::new(2);
        c.push(Gate::Cnot { control: 0, target: 1 });
        c.push(Gate::Cnot { control: 0, target: 1 });
        assert!(cancel_pass(&c).gates.is_empty());
    }

    #[test]
    fn rz_rotations_merge() {
        let mut c = Circuit::new(1);
        c.push(Gate::Rz { q: 0, angle: Angle::Const(0.2) });
        c.push(Gate::Rz { q: 0, angle: Angle::Const(0.3) });
        let out = cancel_pass(&c);
        assert_eq!(out.gates.len(), 1);
        match out.gates[0] {
            Gate::Rz { angle: Angle::Const(v), .. } => assert!((v - 0.5).abs() < 1e-12),
            g => panic!("unexpected {g:?}"),
        }
    }

    #[test]
    fn hsh_rewrites_to_three_gates() {
        let mut c = Circuit::new(1);
        for g in [Gate::H { q: 0 }, Gate::S { q: 0 }, Gate::H { q: 0 }] {
            c.push(g);
        }
        let out = cancel_pass(&c);
        assert!(out.gates.len() <= 3);
        assert!(equivalent(&c, &out, &[]));
    }

    #[test]
    fn cnot_h_cnot_identity_saves_one_cnot() {
        let mut c = Circuit::new(2);
        c.push(Gate::Cnot { control: 0, target: 1 });
        c.push(Gate::H { q: 0 });
        c.push(Gate::Cnot { control: 0, target: 1 });
        let out = cancel_pass(&c);
        assert_eq!(super::super::count_gates(&out).cnot, 1);
        assert!(equivalent(&c, &out, &[]));
    }

    #[test]
    fn cancellation_through_commuting_gates() {
        let mut c = Circuit::new(3);
        c.push(Gate::Cnot { control: 0, target: 1 });
        c.push(Gate::Rz { q: 0, angle: Angle::param(0) });
        c.push(Gate::X { q: 1 });
        c.push(Gate::Cnot { control: 2, target: 1 });
        c.push(Gate::Cnot { control: 0, target: 2 });
        c.push(Gate::Cnot { control: 0, target: 1 });
        let out = cancel_pass(&c);
        assert_eq!(super::super::count_gates(&out).cnot, 2);
        assert!(equivalent(&c, &out, &[0.37]));
    }

    #[test]
    fn motif_converts_to_two_xx() {
        let mut c = Circuit::new(3);
        c.push(Gate::Cnot { control: 0, target: 2 });
        c.push(Gate::Rz { q: 2, angle: Angle::param(0) });
        c.push(Gate::Cnot { control: 1, target: 2 });
        c.push(Gate::Rz { q: 2, angle: Angle::param(0).neg() });
        c.push(Gate::Cnot { control: 0, target: 2 });
        let out = convert_cnot_to_xx(&c);
        let k = super::super::count_gates(&out);
        assert_eq!((k.cnot, k.xx_small_angle), (1, 2));
        assert!(equivalent(&c, &out, &[0.41]));
    }

    #[test]
    fn no_motif_leaves_circuit_unchanged() {
        let mut c = Circuit::new(2);
        c.push(Gate::Cnot { control: 0, target: 1 });
        c.push(Gate::Rz { q: 1, angle: Angle::param(0) });
        c.push(Gate::Cnot { control: 0, target: 1 });
        assert_eq!(convert_cnot_to_xx(&c), c);
    }

    #[test]
    fn encoding_moves_reference_into_frame() {
        let mut c = Circuit::new(2);
        c.push(Gate::X { q: 0 });
        c.push(Gate::Rz { q: 0, angle: Angle::param(0) });
        let out = encode_filled_as_zero(&c, 0b01).unwrap();
        assert_eq!(out.gates, vec![Gate::Rz { q: 0, angle: Angle::param(0).neg() }]);
        assert_eq!(out.frame, PauliMask::single(0, Pauli::X));
        assert!(equivalent(&c, &out, &[0.3]));
    }

    #[test]
    fn empty_reference_is_unchanged() {
        let mut c = Circuit::new(1);
        c.push(Gate::H { q: 0 });
        assert_eq!(encode_filled_as_zero(&c, 0).unwrap(), c);
    }
}
