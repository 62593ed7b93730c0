//! Shot sampling.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::{run_physical, SpamModel};
use crate::circuit::Circuit;
use crate::error::{contract, Result};
use crate::measurement::MeasurementBasis;

/// Generator for stream `stream` of run `seed`. Streams of one seed are
/// independent, so per-basis and per-replicate draws never share state.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Measurement outcomes of one basis. Keys are outcome bitmasks (bit `q` is
/// qubit `q`) after the circuit's classical flips.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotHistogram {
    pub basis_id: usize,
    pub n_qubits: usize,
    pub counts: BTreeMap<u64, u64>,
    pub n_shots: u64,
    pub rng_seed: u64,
    /// Outcome bits inverted relative to the physical readout.
    pub flips: u64,
    pub spam: Option<SpamModel>,
}

impl ShotHistogram {
    pub fn frequencies(&self) -> Vec<f64> {
        let mut f = vec![0.0; 1 << self.n_qubits];
        for (&k, &v) in &self.counts {
            f[k as usize] = v as f64 / self.n_shots as f64;
        }
        f
    }
}

/// Multinomial draw by sequential binomials over the outcome list.
pub fn sample_counts(probs: &[f64], n_shots: u64, rng: &mut ChaCha8Rng) -> BTreeMap<u64, u64> {
    let mut counts = BTreeMap::new();
    let mut remaining = n_shots;
    let mut mass: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let p = p.max(0.0);
        if p == 0.0 {
            continue;
        }
        let frac = if mass > 0.0 { (p / mass).min(1.0) } else { 1.0 };
        let k = Binomial::new(remaining, frac)
            .expect("probability in [0, 1]")
            .sample(rng);
        if k > 0 {
            counts.insert(i as u64, k);
        }
        remaining -= k;
        mass -= p;
    }
    if remaining > 0 {
        // Round-off left some mass unassigned; give it to the likeliest outcome.
        let best = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i as u64)
            .unwrap_or(0);
        *counts.entry(best).or_default() += remaining;
    }
    counts
}

/// Samples `n_shots` readouts of `c` in `basis`, with optional readout
/// errors, using stream `basis.id` of `seed`.
pub fn sample_shots(
    c: &Circuit,
    theta: &[f64],
    basis: &MeasurementBasis,
    n_shots: u64,
    spam: Option<&SpamModel>,
    seed: u64,
) -> Result<ShotHistogram> {
    if n_shots == 0 {
        return Err(contract("n_shots must be at least 1"));
    }
    let mut psi = run_physical(c, theta)?;
    psi.rotate_to_basis(&basis.paulis);
    let mut probs = psi.probabilities();
    if let Some(s) = spam {
        s.validate()?;
        if s.n_qubits() != c.n_qubits {
            return Err(contract("SPAM model size differs from the register"));
        }
        s.apply(&mut probs, 0);
    }
    let mut rng = stream_rng(seed, basis.id as u64);
    let flips = c.classical_flips(&basis.paulis);
    let counts = sample_counts(&probs, n_shots, &mut rng)
        .into_iter()
        .map(|(k, v)| (k ^ flips, v))
        .collect();
    Ok(ShotHistogram {
        basis_id: basis.id,
        n_qubits: c.n_qubits,
        counts,
        n_shots,
        rng_seed: seed,
        flips,
        spam: spam.cloned(),
    })
}
