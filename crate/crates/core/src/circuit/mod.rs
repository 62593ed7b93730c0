//! Gate-level circuits over {H, S, S†, X, Rz, CNOT, XX}.

mod assemble;
mod clifford;
mod passes;
mod synth;
mod text;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::pauli::{Pauli, PauliMask};

pub use assemble::{assemble, assemble_with, optimize, PassConfig};
pub use clifford::conjugate;
pub use passes::{cancel_pass, convert_cnot_to_xx, encode_filled_as_zero};
pub use synth::{
    synth_bosonic, synth_nonbosonic, synth_pauli_exponential, NONBOSONIC_ORDER,
};
pub use text::{from_text, to_text};

/// Rotation angle: a constant or `scale · θ[id]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Angle {
    Const(f64),
    Param { id: usize, scale: f64 },
}

impl Angle {
    pub fn param(id: usize) -> Angle {
        Angle::Param { id, scale: 1.0 }
    }

    pub fn resolve(&self, theta: &[f64]) -> f64 {
        match *self {
            Angle::Const(v) => v,
            Angle::Param { id, scale } => scale * theta[id],
        }
    }

    pub fn scaled(&self, f: f64) -> Angle {
        match *self {
            Angle::Const(v) => Angle::Const(v * f),
            Angle::Param { id, scale } => Angle::Param {
                id,
                scale: scale * f,
            },
        }
    }

    pub fn neg(&self) -> Angle {
        self.scaled(-1.0)
    }

    /// Sum of two angles with the same binding.
    pub fn merge(&self, other: &Angle) -> Option<Angle> {
        match (*self, *other) {
            (Angle::Const(a), Angle::Const(b)) => Some(Angle::Const(a + b)),
            (Angle::Param { id: a, scale: s }, Angle::Param { id: b, scale: t }) if a == b => {
                Some(Angle::Param { id: a, scale: s + t })
            }
            _ => None,
        }
    }

    /// True when `other == -self` for the same binding.
    pub fn is_negation_of(&self, other: &Angle) -> bool {
        match (*self, *other) {
            (Angle::Const(a), Angle::Const(b)) => (a + b).abs() < 1e-12,
            (Angle::Param { id: a, scale: s }, Angle::Param { id: b, scale: t }) => {
                a == b && (s + t).abs() < 1e-12
            }
            _ => false,
        }
    }

    /// Zero rotation, or a constant multiple of 2π (identity up to phase).
    pub fn is_trivial(&self) -> bool {
        match *self {
            Angle::Const(v) => {
                let r = v.rem_euclid(2.0 * PI);
                r < 1e-12 || 2.0 * PI - r < 1e-12
            }
            Angle::Param { scale, .. } => scale.abs() < 1e-15,
        }
    }

    pub fn param_id(&self) -> Option<usize> {
        match *self {
            Angle::Const(_) => None,
            Angle::Param { id, .. } => Some(id),
        }
    }
}

/// Reduces an angle modulo 2π into (−π, π].
pub fn normalize_angle(v: f64) -> f64 {
    let mut r = v.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum Gate {
    H { q: usize },
    S { q: usize },
    Sdg { q: usize },
    X { q: usize },
    Rz { q: usize, angle: Angle },
    Cnot { control: usize, target: usize },
    Xx { a: usize, b: usize, angle: Angle },
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H { q } | Gate::S { q } | Gate::Sdg { q } | Gate::X { q } | Gate::Rz { q, .. } => {
                (q, None)
            }
            Gate::Cnot { control, target } => (control, Some(target)),
            Gate::Xx { a, b, .. } => (a, Some(b)),
        }
    }

    pub fn touches(&self, w: usize) -> bool {
        let (a, b) = self.qubits();
        a == w || b == Some(w)
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().1.is_some()
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S { q } => Gate::Sdg { q },
            Gate::Sdg { q } => Gate::S { q },
            Gate::Rz { q, angle } => Gate::Rz { q, angle: angle.neg() },
            Gate::Xx { a, b, angle } => Gate::Xx {
                a,
                b,
                angle: angle.neg(),
            },
            g => g,
        }
    }

    pub fn angle(&self) -> Option<Angle> {
        match *self {
            Gate::Rz { angle, .. } | Gate::Xx { angle, .. } => Some(angle),
            _ => None,
        }
    }

    /// Single-qubit matrix (row-major) for constant single-qubit gates.
    pub fn matrix_1q(&self) -> Option<[Complex64; 4]> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match *self {
            Gate::H { .. } => Some([c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]),
            Gate::S { .. } => Some([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]),
            Gate::Sdg { .. } => Some([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]),
            Gate::X { .. } => Some([c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
            Gate::Rz {
                angle: Angle::Const(v),
                ..
            } => Some(rz_matrix(v)),
            _ => None,
        }
    }

    /// Diagonal in the computational basis for every parameter value.
    pub fn is_diagonal(&self) -> bool {
        matches!(self, Gate::S { .. } | Gate::Sdg { .. } | Gate::Rz { .. })
    }

    /// Resolves the angle of an XX gate into (−π, π].
    pub fn xx_angle(&self, theta: &[f64]) -> Option<f64> {
        match *self {
            Gate::Xx { angle, .. } => Some(normalize_angle(angle.resolve(theta))),
            _ => None,
        }
    }
}

pub fn rz_matrix(v: f64) -> [Complex64; 4] {
    let e = Complex64::from_polar(1.0, -v / 2.0);
    [e, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), e.conj()]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    /// Pauli frame applied after the gates. Its X/Y components flip
    /// computational-basis outcomes; see [`Circuit::classical_flips`].
    #[serde(default)]
    pub frame: PauliMask,
}

/// Per-qubit measurement basis: the Pauli whose eigenbasis is read out.
pub type BasisSpec = [Pauli];

impl Circuit {
    pub fn new(n_qubits: usize) -> Circuit {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            frame: PauliMask::IDENTITY,
        }
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn extend(&mut self, other: &Circuit) {
        debug_assert_eq!(self.n_qubits, other.n_qubits);
        self.gates.extend_from_slice(&other.gates);
    }

    /// Number of parameters referenced (highest id + 1).
    pub fn n_parameters(&self) -> usize {
        self.gates
            .iter()
            .filter_map(|g| g.angle().and_then(|a| a.param_id()))
            .map(|i| i + 1)
            .max()
            .unwrap_or(0)
    }

    /// Gate-wise inverse (frame not included).
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            frame: PauliMask::IDENTITY,
        }
    }

    /// Checks that every gate acts on distinct in-range qubits.
    pub fn is_well_formed(&self) -> bool {
        let in_range = |q: usize| q < self.n_qubits;
        let frame_ok = self.n_qubits >= 64 || self.frame.support() >> self.n_qubits == 0;
        frame_ok
            && self.gates.iter().all(|g| {
                let (a, b) = g.qubits();
                in_range(a) && b.is_none_or(|b| in_range(b) && b != a)
            })
    }

    /// Outcome bits flipped by the frame when qubit `q` is read out in the
    /// eigenbasis of `basis[q]` (Z when the slice is empty).
    pub fn classical_flips(&self, basis: &BasisSpec) -> u64 {
        let mut flips = 0u64;
        for q in 0..self.n_qubits {
            let measured = basis.get(q).copied().unwrap_or(Pauli::Z);
            let measured = if measured == Pauli::I { Pauli::Z } else { measured };
            let f = PauliMask::single(q, self.frame.get(q));
            if !f.commutes_with(&PauliMask::single(q, measured)) {
                flips |= 1 << q;
            }
        }
        flips
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub cnot: usize,
    pub xx_small_angle: usize,
    pub single_qubit: usize,
    pub entangling_total: usize,
}

/// Tallies gates. XX gates with constant angle ±π/2 count as CNOT-equivalent.
pub fn count_gates(c: &Circuit) -> GateCounts {
    let mut k = GateCounts::default();
    for g in &c.gates {
        match g {
            Gate::Cnot { .. } => k.cnot += 1,
            Gate::Xx { angle, .. } => match angle {
                Angle::Const(v) if (normalize_angle(*v).abs() - PI / 2.0).abs() < 1e-12 => {
                    k.cnot += 1
                }
                _ => k.xx_small_angle += 1,
            },
            _ => k.single_qubit += 1,
        }
    }
    k.entangling_total = k.cnot + k.xx_small_angle;
    k
}
