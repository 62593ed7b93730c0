//! Measurement bases, readout correction and energy estimation.

mod bootstrap;
mod calibration;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{contract, Error, Result};
use crate::pauli::{Pauli, QubitHamiltonian};
use crate::simulator::{run_physical, ShotHistogram, SpamModel};

pub use bootstrap::{bootstrap, EnergyEstimate, SpamCalibration, DEFAULT_BOOTSTRAP};
pub use calibration::{calibration_circuit, parity, parity_calibration, ParityFit};

/// Default number of shots per measurement basis.
pub const DEFAULT_SHOTS: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub id: usize,
    /// Measured Pauli per qubit (Z where a qubit is unconstrained).
    pub paulis: Vec<Pauli>,
    /// Indices into the Hamiltonian's term list.
    pub covered_terms: Vec<usize>,
}

impl MeasurementBasis {
    /// Single-qubit rotations applied before a computational-basis readout.
    pub fn rotation_label(&self) -> String {
        self.paulis
            .iter()
            .map(|p| match p {
                Pauli::X => "H",
                Pauli::Y => "Sdg·H",
                _ => "-",
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Greedy qubit-wise commuting partition of the non-constant terms.
///
/// Terms are visited by descending |coefficient| (compared at 1e-12
/// resolution), ties by their Pauli labels with `I < X < Y < Z`; each joins
/// the first group whose per-qubit bases it does not contradict.
pub fn group_terms(h: &QubitHamiltonian) -> Vec<MeasurementBasis> {
    let n = h.n_qubits;
    let mut order: Vec<usize> = (0..h.terms.len()).collect();
    let key = |i: usize| {
        let t = &h.terms[i];
        let m = t.mask();
        let size = -(t.coefficient.abs() * 1e12).round() as i64;
        (size, (0..n).map(|q| m.get(q)).collect::<Vec<_>>())
    };
    order.sort_by_cached_key(|&i| key(i));

    let mut groups: Vec<(Vec<Pauli>, Vec<usize>)> = Vec::new();
    for i in order {
        let m = h.terms[i].mask();
        let fits = |bases: &[Pauli]| {
            (0..n).all(|q| {
                let p = m.get(q);
                p == Pauli::I || bases[q] == Pauli::I || bases[q] == p
            })
        };
        match groups.iter_mut().find(|(b, _)| fits(b)) {
            Some((bases, members)) => {
                for (q, b) in bases.iter_mut().enumerate() {
                    if m.get(q) != Pauli::I {
                        *b = m.get(q);
                    }
                }
                members.push(i);
            }
            None => {
                let bases = (0..n).map(|q| m.get(q)).collect();
                groups.push((bases, vec![i]));
            }
        }
    }
    groups
        .into_iter()
        .enumerate()
        .map(|(id, (bases, mut covered))| {
            covered.sort_unstable();
            MeasurementBasis {
                id,
                paulis: bases
                    .into_iter()
                    .map(|p| if p == Pauli::I { Pauli::Z } else { p })
                    .collect(),
                covered_terms: covered,
            }
        })
        .collect()
}

/// Readout-corrected outcome distribution of a histogram. Entries may be
/// slightly negative; they are kept as they are.
pub fn spam_correct(hist: &ShotHistogram, spam: &SpamModel) -> Result<Vec<f64>> {
    spam.validate()?;
    if spam.n_qubits() != hist.n_qubits {
        return Err(contract("SPAM model size differs from the histogram"));
    }
    let mut p = hist.frequencies();
    spam.invert(&mut p, hist.flips)?;
    Ok(p)
}

/// Noise-free outcome distribution of `c` measured in `basis`, indexed like
/// histogram keys (classical flips applied).
pub fn exact_distribution(c: &Circuit, theta: &[f64], basis: &MeasurementBasis) -> Result<Vec<f64>> {
    let mut psi = run_physical(c, theta)?;
    psi.rotate_to_basis(&basis.paulis);
    let probs = psi.probabilities();
    let flips = c.classical_flips(&basis.paulis) as usize;
    let mut out = vec![0.0; probs.len()];
    for (k, p) in probs.into_iter().enumerate() {
        out[k ^ flips] = p;
    }
    Ok(out)
}

/// Energy from one outcome distribution per basis, `distributions[b]`
/// belonging to `bases[b]`.
pub fn energy_from_distributions(
    distributions: &[Vec<f64>],
    bases: &[MeasurementBasis],
    h: &QubitHamiltonian,
) -> Result<f64> {
    let mut e = h.constant;
    for basis in bases {
        let dist = distributions
            .get(basis.id)
            .ok_or(Error::MissingBasis(basis.id))?;
        if dist.len() != 1 << h.n_qubits {
            return Err(Error::QubitMismatch {
                state: dist.len().trailing_zeros() as usize,
                operator: h.n_qubits,
            });
        }
        for &t in &basis.covered_terms {
            let term = &h.terms[t];
            let support = term.mask().support();
            let parity: f64 = dist
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    if (k as u64 & support).count_ones() % 2 == 0 {
                        *p
                    } else {
                        -*p
                    }
                })
                .sum();
            e += term.coefficient * parity;
        }
    }
    Ok(e)
}

/// Histograms ordered by basis id; errors if any basis lacks one.
fn by_basis<'a>(histograms: &'a [ShotHistogram], bases: &[MeasurementBasis]) -> Result<Vec<&'a ShotHistogram>> {
    bases
        .iter()
        .map(|b| {
            histograms
                .iter()
                .find(|h| h.basis_id == b.id)
                .ok_or(Error::MissingBasis(b.id))
        })
        .collect()
}

/// Energy from measured histograms, readout-corrected when `spam` is given.
pub fn estimate_energy(
    histograms: &[ShotHistogram],
    bases: &[MeasurementBasis],
    h: &QubitHamiltonian,
    spam: Option<&SpamModel>,
) -> Result<f64> {
    let hists = by_basis(histograms, bases)?;
    let mut dists = vec![Vec::new(); bases.iter().map(|b| b.id + 1).max().unwrap_or(0)];
    for (b, hist) in bases.iter().zip(hists) {
        dists[b.id] = match spam {
            Some(s) => spam_correct(hist, s)?,
            None => hist.frequencies(),
        };
    }
    energy_from_distributions(&dists, bases, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliMask, PauliString};
    use std::collections::BTreeMap;

    fn ham(n: usize, terms: &[(&str, f64)]) -> QubitHamiltonian {
        let terms = terms
            .iter()
            .map(|(label, c)| {
                let mut m = PauliMask::IDENTITY;
                for (q, ch) in label.chars().enumerate() {
                    m.set(q, Pauli::from_char(ch).unwrap());
                }
                PauliString::new(*c, m)
            })
            .collect();
        QubitHamiltonian {
            n_qubits: n,
            constant: 0.5,
            terms,
        }
    }

    #[test]
    fn diagonal_terms_share_one_basis() {
        let h = ham(3, &[("ZII", 1.0), ("ZZI", -0.3), ("IIZ", 0.2)]);
        let g = group_terms(&h);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].paulis, vec![Pauli::Z; 3]);
        assert_eq!(g[0].covered_terms, vec![0, 1, 2]);
    }

    #[test]
    fn conflicting_terms_open_new_groups() {
        let h = ham(2, &[("XX", 0.5), ("YY", 0.5), ("ZI", 1.0), ("XI", 0.1)]);
        let g = group_terms(&h);
        assert_eq!(g.len(), 3);
        assert_eq!(g[0].covered_terms, vec![2]);
        assert_eq!(g[1].covered_terms, vec![0, 3]);
        assert_eq!(g[2].covered_terms, vec![1]);
    }

    #[test]
    fn identity_confusion_leaves_frequencies() {
        let hist = ShotHistogram {
            basis_id: 0,
            n_qubits: 1,
            counts: BTreeMap::from([(0, 3), (1, 1)]),
            n_shots: 4,
            rng_seed: 0,
            flips: 0,
            spam: None,
        };
        let p = spam_correct(&hist, &SpamModel::uniform(1, 0.0, 0.0)).unwrap();
        assert_eq!(p, vec![0.75, 0.25]);
    }

    #[test]
    fn missing_histogram_is_reported() {
        let h = ham(1, &[("Z", 1.0)]);
        let bases = group_terms(&h);
        assert!(matches!(
            estimate_energy(&[], &bases, &h, None),
            Err(Error::MissingBasis(0))
        ));
    }
}
