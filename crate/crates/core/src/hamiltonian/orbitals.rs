//! Active-space reduction.

use std::collections::{BTreeMap, BTreeSet};

use super::SpinOrbitalHamiltonian;
use crate::error::{contract, Result};

/// Folds `frozen` MOs into the core and removes `dropped` MOs.
///
/// Frozen MOs must be doubly occupied in the aufbau reference. A dropped MO
/// that is occupied in the reference stays filled, so it is folded like a
/// frozen one; a dropped virtual MO is discarded together with every term
/// touching it. Remaining MOs keep their relative order.
pub fn select_orbitals(
    ham: &SpinOrbitalHamiltonian,
    frozen: &BTreeSet<usize>,
    dropped: &BTreeSet<usize>,
) -> Result<SpinOrbitalHamiltonian> {
    let n = ham.n_spatial;
    if let Some(k) = frozen.intersection(dropped).next() {
        return Err(contract(format!("MO {k} is both frozen and dropped")));
    }
    if let Some(&k) = frozen.iter().chain(dropped).find(|&&k| k >= n) {
        return Err(contract(format!("MO {k} outside 0..{n}")));
    }
    let n_docc = ham.n_electrons / 2;
    if let Some(k) = frozen.iter().find(|&&k| k >= n_docc) {
        return Err(contract(format!("frozen MO {k} is not doubly occupied")));
    }
    let held: BTreeSet<usize> = frozen
        .iter()
        .chain(dropped.iter().filter(|&&k| k < n_docc))
        .copied()
        .collect();
    let active: Vec<usize> = (0..n)
        .filter(|k| !frozen.contains(k) && !dropped.contains(k))
        .collect();
    let na = active.len();
    let mut new_index = vec![None; 2 * n];
    for (i, &k) in active.iter().enumerate() {
        new_index[k] = Some(i);
        new_index[k + n] = Some(i + na);
    }
    let is_fixed = |p: usize| held.contains(&(p % n));

    let mut e_core = ham.e_core;
    let mut one: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (&(p, q), &h) in &ham.one_body {
        if is_fixed(p) || is_fixed(q) {
            if p == q {
                e_core += h;
            }
            continue;
        }
        if let (Some(a), Some(b)) = (new_index[p], new_index[q]) {
            *one.entry((a, b)).or_insert(0.0) += h;
        }
    }
    let mut two: BTreeMap<(usize, usize, usize, usize), f64> = BTreeMap::new();
    for (&(p, q, r, s), &h) in &ham.two_body {
        let fixed_mask = [p, q, r, s].map(is_fixed);
        match fixed_mask {
            [false, false, false, false] => {
                if let (Some(a), Some(b), Some(c), Some(d)) =
                    (new_index[p], new_index[q], new_index[r], new_index[s])
                {
                    *two.entry((a, b, c, d)).or_insert(0.0) += h;
                }
            }
            [true, true, true, true] => {
                if r == q && s == p {
                    e_core += h;
                } else if r == p && s == q {
                    e_core -= h;
                }
            }
            _ => {
                // One fixed creator paired with the same fixed annihilator
                // contracts to a one-body term on the remaining pair.
                let (sign, a, b) = if fixed_mask == [true, false, false, true] && p == s {
                    (1.0, q, r)
                } else if fixed_mask == [true, false, true, false] && p == r {
                    (-1.0, q, s)
                } else if fixed_mask == [false, true, false, true] && q == s {
                    (-1.0, p, r)
                } else if fixed_mask == [false, true, true, false] && q == r {
                    (1.0, p, s)
                } else {
                    continue;
                };
                if let (Some(a), Some(b)) = (new_index[a], new_index[b]) {
                    *one.entry((a, b)).or_insert(0.0) += sign * h;
                }
            }
        }
    }
    one.retain(|_, v| *v != 0.0);
    two.retain(|_, v| *v != 0.0);
    Ok(SpinOrbitalHamiltonian {
        n_spatial: na,
        n_electrons: ham.n_electrons - 2 * held.len(),
        e_core,
        one_body: one,
        two_body: two,
    })
}
