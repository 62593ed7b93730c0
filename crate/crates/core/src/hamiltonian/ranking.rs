//! Ranking of double excitations by FCI amplitude.

use serde::{Deserialize, Serialize};

use super::FciSolution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExcitationKind {
    Bosonic,
    NonBosonic,
}

/// The excitation `c†_p c†_q c_r c_s` with `p < q` particles and `r < s` holes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedExcitation {
    pub indices: (usize, usize, usize, usize),
    pub amplitude: f64,
    pub kind: ExcitationKind,
}

impl RankedExcitation {
    pub fn new(indices: (usize, usize, usize, usize), amplitude: f64, n_spatial: usize) -> Self {
        let (p, q, r, s) = indices;
        let kind = if q == p + n_spatial && s == r + n_spatial && p < n_spatial && r < n_spatial {
            ExcitationKind::Bosonic
        } else {
            ExcitationKind::NonBosonic
        };
        RankedExcitation {
            indices,
            amplitude,
            kind,
        }
    }

    pub fn is_bosonic(&self) -> bool {
        self.kind == ExcitationKind::Bosonic
    }
}

fn lowest_two(mut v: u64) -> Option<(usize, usize)> {
    if v.count_ones() != 2 {
        return None;
    }
    let a = v.trailing_zeros() as usize;
    v &= v - 1;
    Some((a, v.trailing_zeros() as usize))
}

/// Double excitations of `reference` present in `fci`, by descending
/// |amplitude|. Amplitudes equal to within 1e-9 are ordered by index tuple.
pub fn rank_excitations(fci: &FciSolution, reference: u64, limit: usize) -> Vec<RankedExcitation> {
    let mut out: Vec<RankedExcitation> = fci
        .basis
        .iter()
        .filter(|&&d| d != reference && d.count_ones() == reference.count_ones())
        .filter_map(|&d| {
            let (p, q) = lowest_two(d & !reference)?;
            let (r, s) = lowest_two(reference & !d)?;
            Some(RankedExcitation::new((p, q, r, s), fci.amplitude(d), fci.n_spatial))
        })
        .collect();
    out.sort_by(|a, b| b.amplitude.abs().total_cmp(&a.amplitude.abs()));
    // Group near-equal magnitudes (spin partners differ only by round-off)
    // and order each group by index tuple.
    let mut start = 0;
    while start < out.len() {
        let head = out[start].amplitude.abs();
        let mut end = start + 1;
        while end < out.len() && head - out[end].amplitude.abs() <= 1e-9 {
            end += 1;
        }
        out[start..end].sort_by_key(|e| e.indices);
        start = end;
    }
    out.truncate(limit);
    out
}

/// Stable reordering with electron-pair excitations first.
pub fn pair_first(ranked: &[RankedExcitation]) -> Vec<RankedExcitation> {
    let (b, nb): (Vec<_>, Vec<_>) = ranked.iter().cloned().partition(|e| e.is_bosonic());
    b.into_iter().chain(nb).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifies_pairs() {
        assert!(RankedExcitation::new((3, 10, 1, 8), 0.1, 7).is_bosonic());
        assert!(!RankedExcitation::new((3, 10, 2, 8), 0.1, 7).is_bosonic());
        assert!(!RankedExcitation::new((3, 5, 1, 2), 0.1, 7).is_bosonic());
    }

    #[test]
    fn pair_first_is_stable() {
        let a = RankedExcitation::new((3, 5, 1, 2), 0.3, 7);
        let b = RankedExcitation::new((3, 10, 1, 8), 0.2, 7);
        let c = RankedExcitation::new((4, 11, 1, 8), 0.1, 7);
        let out = pair_first(&[a.clone(), b.clone(), c.clone()]);
        assert_eq!(out, vec![b, c, a]);
    }
}
