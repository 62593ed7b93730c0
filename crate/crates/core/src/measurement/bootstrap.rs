//! Empirical bootstrap over measured histograms and readout calibration.

use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{by_basis, energy_from_distributions, MeasurementBasis};
use crate::error::{contract, Result};
use crate::pauli::QubitHamiltonian;
use crate::simulator::{sample_counts, stream_rng, ShotHistogram, SpamModel};

/// Default number of bootstrap replicates.
pub const DEFAULT_BOOTSTRAP: usize = 500;

/// First RNG stream used for readout calibration draws; basis histograms
/// use the streams below it.
const CALIBRATION_STREAM: u64 = 1 << 32;

/// Readout characterization: each qubit prepared in |0⟩ and in |1⟩
/// `shots` times, counting wrong readouts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpamCalibration {
    pub shots: u64,
    /// Per qubit: reads of 1 after preparing 0.
    pub false_one: Vec<u64>,
    /// Per qubit: reads of 0 after preparing 1.
    pub false_zero: Vec<u64>,
}

fn binomial(n: u64, p: f64, rng: &mut ChaCha8Rng) -> u64 {
    Binomial::new(n, p.clamp(0.0, 1.0))
        .expect("probability in [0, 1]")
        .sample(rng)
}

impl SpamCalibration {
    /// Simulated characterization runs against the true model `spam`.
    pub fn simulate(spam: &SpamModel, shots: u64, seed: u64) -> Result<SpamCalibration> {
        spam.validate()?;
        if shots == 0 {
            return Err(contract("calibration needs at least one shot"));
        }
        let mut rng = stream_rng(seed, CALIBRATION_STREAM);
        let false_one = spam.e0.iter().map(|&e| binomial(shots, e, &mut rng)).collect();
        let false_zero = spam.e1.iter().map(|&e| binomial(shots, e, &mut rng)).collect();
        Ok(SpamCalibration {
            shots,
            false_one,
            false_zero,
        })
    }

    /// Point estimate of the confusion model.
    pub fn model(&self) -> SpamModel {
        let rate = |c: &u64| *c as f64 / self.shots as f64;
        SpamModel {
            e0: self.false_one.iter().map(rate).collect(),
            e1: self.false_zero.iter().map(rate).collect(),
        }
    }

    fn resample(&self, rng: &mut ChaCha8Rng) -> SpamCalibration {
        let m = self.model();
        SpamCalibration {
            shots: self.shots,
            false_one: m.e0.iter().map(|&e| binomial(self.shots, e, rng)).collect(),
            false_zero: m.e1.iter().map(|&e| binomial(self.shots, e, rng)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramRef {
    pub basis_id: usize,
    pub n_shots: u64,
    pub rng_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyEstimate {
    /// Mean of the replicate distribution, in Hartree.
    pub mean: f64,
    /// Standard deviation of the replicate distribution.
    pub sigma: f64,
    pub n_bootstrap: usize,
    /// Estimate from the data as measured.
    pub point: f64,
    pub seed: u64,
    pub inputs: Vec<HistogramRef>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub replicates: Vec<f64>,
}

impl EnergyEstimate {
    /// One replicate energy per line, with a header.
    pub fn replicates_csv(&self) -> String {
        let mut s = String::from("replicate,energy\n");
        for (i, e) in self.replicates.iter().enumerate() {
            s.push_str(&format!("{i},{e:.12}\n"));
        }
        s
    }
}

fn distributions(
    hists: &[&ShotHistogram],
    bases: &[MeasurementBasis],
    spam: Option<&SpamModel>,
) -> Result<Vec<Vec<f64>>> {
    let mut dists = vec![Vec::new(); bases.iter().map(|b| b.id + 1).max().unwrap_or(0)];
    for (b, h) in bases.iter().zip(hists) {
        let mut p = h.frequencies();
        if let Some(s) = spam {
            s.validate()?;
            s.invert(&mut p, h.flips)?;
        }
        dists[b.id] = p;
    }
    Ok(dists)
}

/// Bootstrap estimate of the energy: every histogram is redrawn with
/// replacement at its original size and, independently, the readout
/// calibration counts are redrawn before correcting. Replicate `r` uses
/// stream `r` of `seed`.
pub fn bootstrap(
    histograms: &[ShotHistogram],
    bases: &[MeasurementBasis],
    h: &QubitHamiltonian,
    spam: Option<&SpamCalibration>,
    n: usize,
    seed: u64,
) -> Result<EnergyEstimate> {
    if n < 2 {
        return Err(contract("bootstrap needs at least two replicates"));
    }
    let hists = by_basis(histograms, bases)?;
    let point_model = spam.map(SpamCalibration::model);
    let point = energy_from_distributions(&distributions(&hists, bases, point_model.as_ref())?, bases, h)?;

    let replicates: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|r| -> Result<f64> {
            let mut rng = stream_rng(seed, r as u64);
            let redrawn: Vec<ShotHistogram> = hists
                .iter()
                .map(|hist| ShotHistogram {
                    counts: sample_counts(&hist.frequencies(), hist.n_shots, &mut rng),
                    ..(*hist).clone()
                })
                .collect();
            let model = spam.map(|c| c.resample(&mut rng).model());
            let refs: Vec<&ShotHistogram> = redrawn.iter().collect();
            energy_from_distributions(&distributions(&refs, bases, model.as_ref())?, bases, h)
        })
        .collect::<Result<_>>()?;

    let mean = replicates.iter().sum::<f64>() / n as f64;
    let var = replicates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Ok(EnergyEstimate {
        mean,
        sigma: var.sqrt(),
        n_bootstrap: n,
        point,
        seed,
        inputs: hists
            .iter()
            .map(|h| HistogramRef {
                basis_id: h.basis_id,
                n_shots: h.n_shots,
                rng_seed: h.rng_seed,
            })
            .collect(),
        replicates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{Pauli, PauliMask, PauliString};
    use std::collections::BTreeMap;

    fn z_problem(counts: BTreeMap<u64, u64>, shots: u64) -> (Vec<ShotHistogram>, Vec<MeasurementBasis>, QubitHamiltonian) {
        let h = QubitHamiltonian {
            n_qubits: 1,
            constant: 0.0,
            terms: vec![PauliString::new(1.0, PauliMask::single(0, Pauli::Z))],
        };
        let hist = ShotHistogram {
            basis_id: 0,
            n_qubits: 1,
            counts,
            n_shots: shots,
            rng_seed: 0,
            flips: 0,
            spam: None,
        };
        (vec![hist], super::super::group_terms(&h), h)
    }

    #[test]
    fn single_outcome_has_zero_spread() {
        let (hs, bs, h) = z_problem(BTreeMap::from([(1, 200)]), 200);
        let e = bootstrap(&hs, &bs, &h, None, 50, 3).unwrap();
        assert_eq!(e.sigma, 0.0);
        assert_eq!(e.mean, -1.0);
    }

    #[test]
    fn replicates_are_reproducible() {
        let (hs, bs, h) = z_problem(BTreeMap::from([(0, 60), (1, 40)]), 100);
        let a = bootstrap(&hs, &bs, &h, None, 20, 9).unwrap();
        let b = bootstrap(&hs, &bs, &h, None, 20, 9).unwrap();
        assert_eq!(a, b);
        assert!(bootstrap(&hs, &bs, &h, None, 1, 9).is_err());
    }

    #[test]
    fn calibration_estimates_rates() {
        let spam = SpamModel::uniform(2, 0.006, 0.013);
        let cal = SpamCalibration::simulate(&spam, 100_000, 1).unwrap();
        let m = cal.model();
        for q in 0..2 {
            assert!((m.e0[q] - 0.006).abs() < 1e-3);
            assert!((m.e1[q] - 0.013).abs() < 1.5e-3);
        }
    }
}
