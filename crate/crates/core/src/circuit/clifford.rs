//! Pauli propagation through Clifford gates.

use super::Gate;
use crate::pauli::PauliMask;

/// `G P G†` for a Clifford gate `G`, as `(mask, negated)`.
///
/// Returns `None` for non-Clifford gates (Rz, XX).
pub fn conjugate(p: PauliMask, g: &Gate) -> Option<(PauliMask, bool)> {
    let bit = |v: u64, q: usize| (v >> q) & 1 == 1;
    let mut out = p;
    let neg;
    match *g {
        Gate::H { q } => {
            let (x, z) = (bit(p.x, q), bit(p.z, q));
            neg = x && z;
            out.x = (p.x & !(1 << q)) | (z as u64) << q;
            out.z = (p.z & !(1 << q)) | (x as u64) << q;
        }
        Gate::S { q } => {
            let (x, z) = (bit(p.x, q), bit(p.z, q));
            neg = x && z;
            out.z = (p.z & !(1 << q)) | ((z ^ x) as u64) << q;
        }
        Gate::Sdg { q } => {
            let (x, z) = (bit(p.x, q), bit(p.z, q));
            neg = x && !z;
            out.z = (p.z & !(1 << q)) | ((z ^ x) as u64) << q;
        }
        Gate::X { q } => {
            neg = bit(p.z, q);
        }
        Gate::Cnot { control: c, target: t } => {
            let (xc, zc, xt, zt) = (bit(p.x, c), bit(p.z, c), bit(p.x, t), bit(p.z, t));
            neg = xc && zt && (xt == zc);
            out.x = (p.x & !(1 << t)) | ((xt ^ xc) as u64) << t;
            out.z = (p.z & !(1 << c)) | ((zc ^ zt) as u64) << c;
        }
        _ => return None,
    }
    Some((out, neg))
}

/// Conjugates through a sequence of Clifford gates applied in time order.
pub(crate) fn conjugate_through(p: PauliMask, gates: &[Gate]) -> Option<(PauliMask, bool)> {
    let mut cur = p;
    let mut neg = false;
    for g in gates {
        let (m, n) = conjugate(cur, g)?;
        cur = m;
        neg ^= n;
    }
    Some((cur, neg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;
    use crate::simulator::dense_unitary;
    use crate::circuit::Circuit;
    use num_complex::Complex64;

    fn pauli_dense(m: PauliMask, n: usize) -> Vec<Vec<Complex64>> {
        let dim = 1 << n;
        let mut out = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for i in 0..dim {
            let (j, ph) = m.apply(i);
            out[j][i] = ph;
        }
        out
    }

    fn mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let n = a.len();
        let mut o = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    o[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        o
    }

    #[test]
    fn matches_dense_conjugation() {
        let gates = [
            Gate::H { q: 0 },
            Gate::S { q: 1 },
            Gate::Sdg { q: 0 },
            Gate::X { q: 1 },
            Gate::Cnot { control: 0, target: 1 },
            Gate::Cnot { control: 1, target: 0 },
        ];
        let ps = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        for g in &gates {
            let mut c = Circuit::new(2);
            c.push(*g);
            let u = dense_unitary(&c, &[]);
            let mut udag = u.clone();
            for i in 0..4 {
                for j in 0..4 {
                    udag[i][j] = u[j][i].conj();
                }
            }
            for a in ps {
                for b in ps {
                    let mut m = PauliMask::IDENTITY;
                    m.set(0, a);
                    m.set(1, b);
                    let (out, neg) = conjugate(m, g).unwrap();
                    let lhs = mul(&mul(&u, &pauli_dense(m, 2)), &udag);
                    let rhs = pauli_dense(out, 2);
                    let s = if neg { -1.0 } else { 1.0 };
                    for i in 0..4 {
                        for j in 0..4 {
                            assert!((lhs[i][j] - rhs[i][j] * s).norm() < 1e-12, "{g:?} {a:?}{b:?}");
                        }
                    }
                }
            }
        }
    }
}
