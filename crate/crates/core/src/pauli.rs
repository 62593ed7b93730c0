//! Pauli strings, sums and qubit Hamiltonians.
//!
//! A Pauli string is stored as a pair of bitmasks `(x, z)`: qubit `q` carries
//! X when only bit `q` of `x` is set, Z when only bit `q` of `z` is set and Y
//! when both are set. Qubit `q` is bit `q` of a basis-state index.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};

/// Coefficients smaller than this are dropped from Pauli sums.
pub const PRUNE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Bitmask form of a Pauli string without coefficient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliMask {
    pub x: u64,
    pub z: u64,
}

impl PauliMask {
    pub const IDENTITY: PauliMask = PauliMask { x: 0, z: 0 };

    pub fn single(q: usize, p: Pauli) -> PauliMask {
        let mut m = PauliMask::IDENTITY;
        m.set(q, p);
        m
    }

    pub fn z_string(mask: u64) -> PauliMask {
        PauliMask { x: 0, z: mask }
    }

    pub fn get(&self, q: usize) -> Pauli {
        match ((self.x >> q) & 1, (self.z >> q) & 1) {
            (0, 0) => Pauli::I,
            (1, 0) => Pauli::X,
            (1, 1) => Pauli::Y,
            _ => Pauli::Z,
        }
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let bit = 1u64 << q;
        let (x, z) = match p {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        };
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    /// Moves the factor on qubit `i` to qubit `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> PauliMask {
        let mut out = PauliMask::IDENTITY;
        let mut bits = self.support();
        while bits != 0 {
            let q = bits.trailing_zeros() as usize;
            out.set(perm[q], self.get(q));
            bits &= bits - 1;
        }
        out
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn n_y(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Product `self · other` as `(phase, mask)`.
    pub fn mul(&self, other: &PauliMask) -> (Complex64, PauliMask) {
        // P = i^{n_y} X^x Z^z, so moving Z^{z1} past X^{x2} costs (-1)^{|z1 & x2|}.
        let out = PauliMask {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        };
        let k = self.n_y() as i64 + other.n_y() as i64 - out.n_y() as i64
            + 2 * (self.z & other.x).count_ones() as i64;
        (i_pow(k), out)
    }

    pub fn commutes_with(&self, other: &PauliMask) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Qubit-wise compatibility: on every shared qubit the factors agree.
    pub fn qubitwise_compatible(&self, other: &PauliMask) -> bool {
        let shared = self.support() & other.support();
        (self.x ^ other.x) & shared == 0 && (self.z ^ other.z) & shared == 0
    }

    /// Action on a basis state: `P|i⟩ = phase · |i ⊕ x⟩`.
    #[inline]
    pub fn apply(&self, i: usize) -> (usize, Complex64) {
        let sign = if (i as u64 & self.z).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        (
            i ^ self.x as usize,
            i_pow(self.n_y() as i64) * sign,
        )
    }

    pub fn to_factors(&self) -> BTreeMap<usize, Pauli> {
        let mut out = BTreeMap::new();
        let mut s = self.support();
        while s != 0 {
            let q = s.trailing_zeros() as usize;
            out.insert(q, self.get(q));
            s &= s - 1;
        }
        out
    }

    pub fn from_factors(factors: &BTreeMap<usize, Pauli>) -> PauliMask {
        let mut m = PauliMask::IDENTITY;
        for (&q, &p) in factors {
            m.set(q, p);
        }
        m
    }

    /// Label over `n` qubits, qubit 0 first.
    pub fn label(&self, n: usize) -> String {
        (0..n).map(|q| self.get(q).as_char()).collect()
    }
}

/// `i^k` for integer `k`.
pub fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// A weighted Pauli string with a real coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    pub coefficient: f64,
    pub factors: BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn new(coefficient: f64, mask: PauliMask) -> Self {
        PauliString {
            coefficient,
            factors: mask.to_factors(),
        }
    }

    pub fn mask(&self) -> PauliMask {
        PauliMask::from_factors(&self.factors)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+.12e}", self.coefficient)?;
        for (q, p) in &self.factors {
            write!(f, " {}{}", p.as_char(), q)?;
        }
        Ok(())
    }
}

/// Complex-weighted sum of Pauli strings, used for operator algebra.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PauliSum {
    pub terms: BTreeMap<PauliMask, Complex64>,
}

impl PauliSum {
    pub fn zero() -> Self {
        PauliSum::default()
    }

    pub fn identity(c: Complex64) -> Self {
        let mut s = PauliSum::zero();
        s.add_term(PauliMask::IDENTITY, c);
        s
    }

    pub fn add_term(&mut self, mask: PauliMask, c: Complex64) {
        *self.terms.entry(mask).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn add(&mut self, other: &PauliSum) {
        for (m, c) in &other.terms {
            self.add_term(*m, *c);
        }
    }

    pub fn add_scaled(&mut self, other: &PauliSum, s: Complex64) {
        for (m, c) in &other.terms {
            self.add_term(*m, *c * s);
        }
    }

    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        let mut out = PauliSum::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (ph, m) = ma.mul(mb);
                out.add_term(m, ph * ca * cb);
            }
        }
        out
    }

    pub fn scale(&mut self, s: Complex64) {
        for c in self.terms.values_mut() {
            *c *= s;
        }
    }

    pub fn dagger(&self) -> PauliSum {
        PauliSum {
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, c| c.norm() >= tol);
    }
}

/// Real-weighted Pauli decomposition of a Hermitian operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitHamiltonian {
    pub n_qubits: usize,
    pub constant: f64,
    pub terms: Vec<PauliString>,
}

impl QubitHamiltonian {
    /// Builds from a complex Pauli sum, merging like strings, dropping
    /// imaginary residues and pruning small coefficients.
    pub fn from_sum(n_qubits: usize, sum: &PauliSum) -> Result<Self> {
        let mut constant = 0.0;
        let mut terms = Vec::new();
        for (m, c) in &sum.terms {
            if c.im.abs() > 1e-9 * (1.0 + c.re.abs()) {
                return Err(contract(format!(
                    "non-Hermitian residue {:.3e} on {}",
                    c.im,
                    m.label(n_qubits)
                )));
            }
            if m.support() >> n_qubits != 0 {
                return Err(contract("Pauli string outside register"));
            }
            if m.is_identity() {
                constant += c.re;
            } else if c.re.abs() >= PRUNE_TOL {
                terms.push(PauliString::new(c.re, *m));
            }
        }
        Ok(QubitHamiltonian {
            n_qubits,
            constant,
            terms,
        })
    }

    pub fn masks(&self) -> Vec<(PauliMask, f64)> {
        self.terms.iter().map(|t| (t.mask(), t.coefficient)).collect()
    }

    pub fn to_sum(&self) -> PauliSum {
        let mut s = PauliSum::identity(Complex64::new(self.constant, 0.0));
        for t in &self.terms {
            s.add_term(t.mask(), Complex64::new(t.coefficient, 0.0));
        }
        s
    }

    /// Dense matrix, row-major, for small registers.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let dim = 1usize << self.n_qubits;
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += self.constant;
        }
        for (mask, c) in self.masks() {
            for i in 0..dim {
                let (j, ph) = mask.apply(i);
                m[j][i] += ph * c;
            }
        }
        m
    }

    /// Projects pairs of qubits `(keep, merge)` onto span{|00⟩, |11⟩}, with
    /// the pair represented afterwards by qubit `keep`; merged qubits are then
    /// removed and the remaining qubits renumbered in increasing order.
    pub fn project_pairs(&self, pairs: &[(usize, usize)]) -> Result<QubitHamiltonian> {
        let projected = project_sum_pairs(&self.to_sum(), pairs);
        let removed: u64 = pairs.iter().fold(0, |acc, &(_, m)| acc | (1u64 << m));
        let compacted = compact_sum(&projected, removed);
        QubitHamiltonian::from_sum(self.n_qubits - pairs.len(), &compacted)
    }
}

/// Projection of a Pauli sum onto span{|00⟩,|11⟩} of each `(keep, merge)` pair.
pub fn project_sum_pairs(sum: &PauliSum, pairs: &[(usize, usize)]) -> PauliSum {
    let mut cur = sum.clone();
    for &(a, b) in pairs {
        let mut next = PauliSum::zero();
        for (m, c) in &cur.terms {
            let pa = m.get(a);
            let pb = m.get(b);
            let mut rest = *m;
            rest.set(a, Pauli::I);
            rest.set(b, Pauli::I);
            for (p, w) in project_pair_factor(pa, pb) {
                let mut out = rest;
                out.set(a, p);
                next.add_term(out, *c * w);
            }
        }
        next.prune(PRUNE_TOL * 1e-3);
        cur = next;
    }
    cur
}

/// Decomposes `⟨s|Pa⊗Pb|t⟩` for `s,t ∈ {00,11}` into single-qubit Paulis on
/// the encoded qubit.
fn project_pair_factor(pa: Pauli, pb: Pauli) -> Vec<(Pauli, Complex64)> {
    let mut full = PauliMask::IDENTITY;
    full.set(0, pa);
    full.set(1, pb);
    // Matrix elements between |00⟩ (index 0) and |11⟩ (index 3).
    let elem = |row: usize, col: usize| -> Complex64 {
        let (j, ph) = full.apply(col);
        if j == row {
            ph
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let m00 = elem(0, 0);
    let m01 = elem(0, 3);
    let m10 = elem(3, 0);
    let m11 = elem(3, 3);
    let half = Complex64::new(0.5, 0.0);
    let cands = [
        (Pauli::I, (m00 + m11) * half),
        (Pauli::Z, (m00 - m11) * half),
        (Pauli::X, (m01 + m10) * half),
        (Pauli::Y, (m10 - m01) * half / Complex64::new(0.0, 1.0)),
    ];
    cands
        .into_iter()
        .filter(|(_, w)| w.norm() > 1e-15)
        .collect()
}

/// Relabels every product of `sum` with [`PauliMask::permuted`].
pub fn permute_sum(sum: &PauliSum, perm: &[usize]) -> PauliSum {
    let mut out = PauliSum::zero();
    for (m, c) in &sum.terms {
        out.add_term(m.permuted(perm), *c);
    }
    out
}

/// Removes qubits in `removed` (which must carry identity) and renumbers.
pub fn compact_sum(sum: &PauliSum, removed: u64) -> PauliSum {
    let mut out = PauliSum::zero();
    for (m, c) in &sum.terms {
        debug_assert_eq!(m.support() & removed, 0);
        out.add_term(
            PauliMask {
                x: compact_bits(m.x, removed),
                z: compact_bits(m.z, removed),
            },
            *c,
        );
    }
    out
}

pub(crate) fn compact_bits(v: u64, removed: u64) -> u64 {
    let mut out = 0u64;
    let mut j = 0;
    for q in 0..64 {
        if removed >> q & 1 == 1 {
            continue;
        }
        if v >> q & 1 == 1 {
            out |= 1 << j;
        }
        j += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(m: PauliMask, n: usize) -> Vec<Vec<Complex64>> {
        let dim = 1 << n;
        let mut out = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for i in 0..dim {
            let (j, ph) = m.apply(i);
            out[j][i] = ph;
        }
        out
    }

    fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let n = a.len();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliMask::single(0, Pauli::X);
        let y = PauliMask::single(0, Pauli::Y);
        let z = PauliMask::single(0, Pauli::Z);
        assert_eq!(x.mul(&y), (Complex64::new(0.0, 1.0), z));
        assert_eq!(y.mul(&z), (Complex64::new(0.0, 1.0), x));
        assert_eq!(z.mul(&x), (Complex64::new(0.0, 1.0), y));
        assert_eq!(y.mul(&x), (Complex64::new(0.0, -1.0), z));
    }

    #[test]
    fn products_match_dense_matrices() {
        let n = 2;
        let all: Vec<PauliMask> = (0..16)
            .map(|k| {
                let mut m = PauliMask::IDENTITY;
                for q in 0..2 {
                    let p = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][(k >> (2 * q)) & 3];
                    m.set(q, p);
                }
                m
            })
            .collect();
        for a in &all {
            for b in &all {
                let (ph, c) = a.mul(b);
                let lhs = matmul(&dense(*a, n), &dense(*b, n));
                let rhs = dense(c, n);
                for i in 0..4 {
                    for j in 0..4 {
                        assert!((lhs[i][j] - ph * rhs[i][j]).norm() < 1e-14);
                    }
                }
                let ab = matmul(&dense(*a, n), &dense(*b, n));
                let ba = matmul(&dense(*b, n), &dense(*a, n));
                let same = (0..4).all(|i| (0..4).all(|j| (ab[i][j] - ba[i][j]).norm() < 1e-14));
                assert_eq!(same, a.commutes_with(b));
            }
        }
    }

    #[test]
    fn pair_projection_of_number_operators() {
        // (I - Z_a)/2 + (I - Z_b)/2 restricted to {|00>,|11>} is I - Z.
        let mut s = PauliSum::identity(Complex64::new(1.0, 0.0));
        s.add_term(PauliMask::single(0, Pauli::Z), Complex64::new(-0.5, 0.0));
        s.add_term(PauliMask::single(1, Pauli::Z), Complex64::new(-0.5, 0.0));
        let p = project_sum_pairs(&s, &[(0, 1)]);
        let p = compact_sum(&p, 0b10);
        assert_eq!(p.terms.len(), 2);
        assert!((p.terms[&PauliMask::IDENTITY] - 1.0).norm() < 1e-15);
        assert!((p.terms[&PauliMask::single(0, Pauli::Z)] + 1.0).norm() < 1e-15);
    }

    #[test]
    fn compact_bits_skips_removed() {
        assert_eq!(compact_bits(0b1011, 0b0010), 0b101);
    }
}
