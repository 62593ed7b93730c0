//! XX parity calibration.

use serde::{Deserialize, Serialize};

use super::MeasurementBasis;
use crate::circuit::{Angle, Circuit, Gate};
use crate::error::{contract, Error, Result};
use crate::pauli::Pauli;
use crate::simulator::{run_physical, sample_shots, SpamModel};

/// Calibration sequence for interaction strength `k` at drive `theta`: an
/// XX rotation that maps |00⟩ to cos(kΘ)|00⟩ − i sin(kΘ)|11⟩, then analysis
/// rotations (S·H on qubit 0, H on qubit 1) so that the Z-basis parity
/// reads sin(2kΘ).
pub fn calibration_circuit(k: f64, theta: f64) -> Circuit {
    let mut c = Circuit::new(2);
    c.push(Gate::Xx {
        a: 0,
        b: 1,
        angle: Angle::Const(2.0 * k * theta),
    });
    c.push(Gate::S { q: 0 });
    c.push(Gate::H { q: 0 });
    c.push(Gate::H { q: 1 });
    c
}

/// `P(00) + P(11) − P(01) − P(10)` of a two-qubit distribution.
pub fn parity(p: &[f64]) -> f64 {
    p[0] + p[3] - p[1] - p[2]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityFit {
    pub k: f64,
    pub initial_k: f64,
    pub rms_residual: f64,
    pub iterations: usize,
    /// `(Θ, parity)` per scan point.
    pub points: Vec<(f64, f64)>,
}

const MAX_ITER: usize = 100;

/// Simulates the calibration scan for the true strength `k_true` and fits
/// `Π(Θ) = sin(2kΘ)` by Gauss–Newton least squares.
///
/// With `n_shots` the parities come from sampled histograms (readout noise
/// from `spam` applied and then inverted); without, from exact
/// probabilities. The fit starts from the first downward zero crossing of
/// the scan, or from its maximum when there is none.
pub fn parity_calibration(
    thetas: &[f64],
    k_true: f64,
    n_shots: Option<u64>,
    spam: Option<&SpamModel>,
    seed: u64,
) -> Result<ParityFit> {
    if thetas.len() < 5 {
        return Err(contract("parity scan needs at least five points"));
    }
    let lo = thetas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = thetas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if 2.0 * k_true.abs() * (hi - lo) < std::f64::consts::PI * (1.0 - 1e-9) {
        return Err(contract("parity scan must span half a period"));
    }
    let basis = |id: usize| MeasurementBasis {
        id,
        paulis: vec![Pauli::Z, Pauli::Z],
        covered_terms: Vec::new(),
    };
    let mut points = Vec::with_capacity(thetas.len());
    for (i, &t) in thetas.iter().enumerate() {
        let c = calibration_circuit(k_true, t);
        let probs = match n_shots {
            None => run_physical(&c, &[])?.probabilities(),
            Some(n) => {
                let hist = sample_shots(&c, &[], &basis(i), n, spam, seed)?;
                match spam {
                    Some(s) => super::spam_correct(&hist, s)?,
                    None => hist.frequencies(),
                }
            }
        };
        points.push((t, parity(&probs)));
    }
    let mut sorted = points.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let k0 = initial_k(&sorted)?;

    let mut k = k0;
    for it in 1..=MAX_ITER {
        let (mut jr, mut jj) = (0.0, 0.0);
        for &(t, p) in &points {
            let r = p - (2.0 * k * t).sin();
            let j = -2.0 * t * (2.0 * k * t).cos();
            jr += j * r;
            jj += j * j;
        }
        if jj == 0.0 {
            return Err(Error::Fit("flat Jacobian".into()));
        }
        let step = -jr / jj;
        k += step;
        if !k.is_finite() {
            return Err(Error::Fit("diverged".into()));
        }
        if step.abs() <= 1e-13 * k.abs().max(1.0) {
            let rms = (points
                .iter()
                .map(|&(t, p)| (p - (2.0 * k * t).sin()).powi(2))
                .sum::<f64>()
                / points.len() as f64)
                .sqrt();
            return Ok(ParityFit {
                k,
                initial_k: k0,
                rms_residual: rms,
                iterations: it,
                points,
            });
        }
    }
    Err(Error::Fit(format!("no convergence in {MAX_ITER} iterations")))
}

fn initial_k(sorted: &[(f64, f64)]) -> Result<f64> {
    for w in sorted.windows(2) {
        let ((t0, p0), (t1, p1)) = (w[0], w[1]);
        if t0 > 0.0 && p0 > 0.0 && p1 <= 0.0 {
            let tz = t0 + (t1 - t0) * p0 / (p0 - p1);
            return Ok(std::f64::consts::PI / (2.0 * tz));
        }
    }
    let &(tm, pm) = sorted
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty scan");
    if tm <= 0.0 || pm <= 0.0 {
        return Err(Error::Fit("scan has no positive parity".into()));
    }
    Ok(std::f64::consts::PI / (4.0 * tm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn exact_parity(k: f64, t: f64) -> f64 {
        parity(&run_physical(&calibration_circuit(k, t), &[]).unwrap().probabilities())
    }

    #[test]
    fn parity_endpoints() {
        assert!(exact_parity(1.0, 0.0).abs() < 1e-15);
        assert!((exact_parity(1.0, PI / 4.0) - 1.0).abs() < 1e-12);
        assert!((exact_parity(0.7, 0.3) - (2.0 * 0.7 * 0.3f64).sin()).abs() < 1e-12);
    }

    #[test]
    fn noiseless_fit_recovers_strength() {
        let thetas: Vec<f64> = (0..=16).map(|i| i as f64 * PI / 24.0).collect();
        for k in [0.8, 1.0, 1.3] {
            let fit = parity_calibration(&thetas, k, None, None, 0).unwrap();
            assert!((fit.k - k).abs() < 1e-9, "k {k} fit {}", fit.k);
        }
    }

    #[test]
    fn short_scans_are_rejected() {
        assert!(parity_calibration(&[0.0, 0.1, 0.2], 1.0, None, None, 0).is_err());
        let narrow: Vec<f64> = (0..6).map(|i| i as f64 * 0.1).collect();
        assert!(parity_calibration(&narrow, 1.0, None, None, 0).is_err());
    }
}
