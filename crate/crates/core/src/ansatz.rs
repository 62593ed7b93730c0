//! UCC ansatz construction, product-formula expansion, term ordering and
//! qubit assignment.
//!
//! The register uses a hybrid encoding. Every active MO owns one "MO qubit"
//! holding its electron pair while only pair excitations have been applied.
//! MOs touched by a non-pair excitation are re-encoded before the first such
//! term: a CNOT copies the MO qubit onto an ancilla, after which the MO qubit
//! holds the α spin-orbital and the ancilla the β one. MO qubits come first
//! (in mapped order), ancillas after them in the same order.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{count_gates, optimize, synth_nonbosonic, Angle, Circuit, PassConfig};
use crate::error::{contract, Result};
use crate::hamiltonian::{
    double_excitation_generator, jordan_wigner_ordered, pair_first, select_orbitals,
    ExcitationKind, RankedExcitation, SpinOrbitalHamiltonian,
};
use crate::pauli::{compact_sum, permute_sum, project_sum_pairs, PauliMask, PauliSum, QubitHamiltonian};

/// `i Σ c·P` from `(P, c)` pairs.
pub fn imaginary_sum(terms: &[(PauliMask, f64)]) -> PauliSum {
    let mut s = PauliSum::zero();
    for &(m, c) in terms {
        s.add_term(m, Complex64::new(0.0, c));
    }
    s
}

/// Size of the ranked window from which HF+N ansätze draw their terms.
pub const RANK_WINDOW: usize = 21;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcitationTerm {
    /// `(p, q, r, s)` of `c†_p c†_q c_r c_s` in full-problem spin-orbitals.
    pub indices: (usize, usize, usize, usize),
    pub parameter_id: usize,
    pub kind: ExcitationKind,
    /// Bosonic: `[particle MO qubit, hole MO qubit]`. Otherwise the register
    /// qubits of `p, q, r, s`.
    pub qubits: Vec<usize>,
    /// Register qubits acted on by the generator, σz string included.
    pub jw_support: u64,
    /// `G = T − T† = i Σ c·P` in the re-encoded register, as `(P, c)`.
    pub generator: Vec<(PauliMask, f64)>,
    /// Bosonic terms only: the generator on the MO qubits while every MO is
    /// still pair-encoded.
    pub pair_generator: Vec<(PauliMask, f64)>,
}

impl ExcitationTerm {
    pub fn generator_sum(&self) -> PauliSum {
        imaginary_sum(&self.generator)
    }

    pub fn is_bosonic(&self) -> bool {
        self.kind == ExcitationKind::Bosonic
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub n_spatial: usize,
    pub n_electrons: usize,
    /// Full-problem HF occupation over spin-orbitals.
    pub reference: u64,
    /// Terms in execution order.
    pub terms: Vec<ExcitationTerm>,
    pub n_parameters: usize,
    /// Active MOs, ascending.
    pub active: Vec<usize>,
    pub frozen: Vec<usize>,
    pub dropped: Vec<usize>,
    /// MO → MO qubit.
    pub qubit_map: BTreeMap<usize, usize>,
    /// Re-encoded MO → ancilla qubit (holds the β spin-orbital).
    pub ancilla_map: BTreeMap<usize, usize>,
    /// Jordan–Wigner position of each active spin-orbital, indexed `a + s·n`
    /// over active MOs `a`.
    pub jw_position: Vec<usize>,
    /// Relabeling applied to the register after pair projection.
    pub register_perm: Vec<usize>,
    pub n_qubits: usize,
}

/// Orbital space of an ansatz: full problem size and MOs excluded by hand.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OrbitalSpace {
    pub n_spatial: usize,
    pub n_electrons: usize,
    pub frozen: BTreeSet<usize>,
    pub dropped: BTreeSet<usize>,
}

impl OrbitalSpace {
    pub fn full(n_spatial: usize, n_electrons: usize) -> Self {
        OrbitalSpace {
            n_spatial,
            n_electrons,
            ..Default::default()
        }
    }

    fn excludes(&self, e: &RankedExcitation) -> bool {
        let (p, q, r, s) = e.indices;
        [p, q, r, s].iter().any(|&i| {
            let k = i % self.n_spatial;
            self.frozen.contains(&k) || self.dropped.contains(&k)
        })
    }
}

/// HF+N term sequence: the top ranked excitations not touching excluded MOs,
/// limited to `window`, with electron-pair excitations moved to the front.
pub fn hfplus_sequence(
    ranked: &[RankedExcitation],
    space: &OrbitalSpace,
    window: usize,
) -> Vec<RankedExcitation> {
    let kept: Vec<RankedExcitation> = ranked
        .iter()
        .filter(|e| !space.excludes(e))
        .take(window)
        .cloned()
        .collect();
    pair_first(&kept)
}

fn mos_of(e: &RankedExcitation, n: usize) -> [usize; 4] {
    let (p, q, r, s) = e.indices;
    [p % n, q % n, r % n, s % n]
}

/// HF+n ansatz from the first `n` entries of `sequence`.
pub fn build_ucc_ansatz(
    sequence: &[RankedExcitation],
    n: usize,
    space: &OrbitalSpace,
) -> Result<AnsatzSpec> {
    if n > sequence.len() {
        return Err(contract(format!(
            "HF+{n} requested but only {} ranked terms",
            sequence.len()
        )));
    }
    let ns = space.n_spatial;
    let chosen = &sequence[..n];
    if let Some(e) = chosen.iter().find(|e| space.excludes(e)) {
        return Err(contract(format!(
            "term {:?} touches a frozen or dropped MO",
            e.indices
        )));
    }
    let n_docc = space.n_electrons / 2;
    let touched: BTreeSet<usize> = chosen.iter().flat_map(|e| mos_of(e, ns)).collect();
    let split: BTreeSet<usize> = chosen
        .iter()
        .filter(|e| !e.is_bosonic())
        .flat_map(|e| mos_of(e, ns))
        .collect();
    let active: Vec<usize> = touched.iter().copied().collect();
    let mut frozen = space.frozen.clone();
    let mut dropped = space.dropped.clone();
    for k in 0..ns {
        if !touched.contains(&k) && !space.frozen.contains(&k) && !space.dropped.contains(&k) {
            if k < n_docc {
                frozen.insert(k);
            } else {
                dropped.insert(k);
            }
        }
    }

    let na = active.len();
    let local = |mo: usize| active.iter().position(|&a| a == mo).unwrap();
    let local_terms: Vec<(usize, usize, usize, usize)> = chosen
        .iter()
        .map(|e| {
            let (p, q, r, s) = e.indices;
            let f = |i: usize| local(i % ns) + (i / ns) * na;
            (f(p), f(q), f(r), f(s))
        })
        .collect();
    let greedy = map_qubits(&local_terms, na);
    let jw_position = optimize_jw_order(&local_terms, na, &greedy);

    let mut by_alpha: Vec<usize> = (0..na).collect();
    by_alpha.sort_by_key(|&a| jw_position[a]);
    let mut qubit_map = BTreeMap::new();
    for (q, &a) in by_alpha.iter().enumerate() {
        qubit_map.insert(active[a], q);
    }
    let mut split_by_qubit: Vec<usize> = split.iter().copied().collect();
    split_by_qubit.sort_by_key(|mo| qubit_map[mo]);
    let mut ancilla_map = BTreeMap::new();
    for (i, &mo) in split_by_qubit.iter().enumerate() {
        ancilla_map.insert(mo, na + i);
    }
    let n_qubits = na + split.len();

    let mut spec = AnsatzSpec {
        n_spatial: ns,
        n_electrons: space.n_electrons,
        reference: hf_reference(ns, space.n_electrons),
        terms: Vec::new(),
        n_parameters: n,
        active,
        frozen: frozen.into_iter().collect(),
        dropped: dropped.into_iter().collect(),
        qubit_map,
        ancilla_map,
        jw_position,
        register_perm: (0..n_qubits).collect(),
        n_qubits,
    };

    let mut bosonic = Vec::new();
    let mut other = Vec::new();
    for (id, e) in chosen.iter().enumerate() {
        let (p, q, r, s) = e.indices;
        let fermionic = spec.fermionic_generator([p, q, r, s]);
        let as_pairs = |sum: &PauliSum| -> Vec<(PauliMask, f64)> {
            sum.terms.iter().map(|(m, c)| (*m, c.im)).collect()
        };
        let generator = as_pairs(&spec.project(&fermionic, &spec.paired()));
        let jw_support = generator.iter().fold(0, |acc, (m, _)| acc | m.support());
        let (qubits, pair_generator) = if e.is_bosonic() {
            let all = spec.active.clone();
            (
                vec![spec.qubit_map[&(p % ns)], spec.qubit_map[&(r % ns)]],
                as_pairs(&spec.project(&fermionic, &all)),
            )
        } else {
            let qubits = [p, q, r, s]
                .iter()
                .map(|&i| spec.register_qubit(i).expect("split MO"))
                .collect();
            (qubits, Vec::new())
        };
        let term = ExcitationTerm {
            indices: e.indices,
            parameter_id: id,
            kind: e.kind,
            qubits,
            jw_support,
            generator,
            pair_generator,
        };
        if e.is_bosonic() {
            bosonic.push(term);
        } else {
            other.push(term);
        }
    }
    spec.terms = bosonic.into_iter().chain(other).collect();
    let nb: Vec<ExcitationTerm> = spec.terms.iter().filter(|t| !t.is_bosonic()).cloned().collect();
    spec.relabel(&assign_labels(&nb, n_qubits));
    let (bosonic, other): (Vec<_>, Vec<_>) = std::mem::take(&mut spec.terms)
        .into_iter()
        .partition(|t| t.is_bosonic());
    spec.terms = bosonic.into_iter().chain(order_terms(&other, n_qubits)).collect();
    Ok(spec)
}

fn hf_reference(n_spatial: usize, n_electrons: usize) -> u64 {
    let n_alpha = n_electrons.div_ceil(2);
    let n_beta = n_electrons / 2;
    let mut r = 0u64;
    for k in 0..n_alpha {
        r |= 1 << k;
    }
    for k in 0..n_beta {
        r |= 1 << (k + n_spatial);
    }
    r
}

impl AnsatzSpec {
    fn n_active(&self) -> usize {
        self.active.len()
    }

    /// Blocked index `a + s·n_active` of a full-problem spin-orbital.
    fn local_so(&self, so: usize) -> usize {
        let (mo, s) = (so % self.n_spatial, so / self.n_spatial);
        let a = self.active.iter().position(|&x| x == mo).expect("active MO");
        a + s * self.n_active()
    }

    /// Register label of each blocked spin-orbital before pair projection:
    /// α at its MO qubit, β at MO qubit + number of active MOs.
    fn unprojected_labels(&self) -> Vec<usize> {
        let na = self.n_active();
        (0..2 * na)
            .map(|i| self.base_qubit(self.active[i % na]) + (i / na) * na)
            .collect()
    }

    /// MO qubit before [`AnsatzSpec::register_perm`]: MOs in order of their α
    /// JW position.
    fn base_qubit(&self, mo: usize) -> usize {
        let na = self.n_active();
        let a = self.active.iter().position(|&x| x == mo).expect("active MO");
        (0..na).filter(|&b| self.jw_position[b] < self.jw_position[a]).count()
    }

    /// Relabeling from JW positions to unprojected register labels.
    fn position_to_label(&self) -> Vec<usize> {
        let labels = self.unprojected_labels();
        let mut perm = vec![0; labels.len()];
        for (so, &pos) in self.jw_position.iter().enumerate() {
            perm[pos] = labels[so];
        }
        perm
    }

    /// `T − T†` for `T = c†_p c†_q c_r c_s` on the unprojected register.
    fn fermionic_generator(&self, indices: [usize; 4]) -> PauliSum {
        let positions = indices.map(|i| self.jw_position[self.local_so(i)]);
        let g = double_excitation_generator(positions, 2 * self.n_active());
        permute_sum(&g, &self.position_to_label())
    }

    /// Register qubit of a spin-orbital once split MOs are re-encoded.
    pub fn register_qubit(&self, so: usize) -> Option<usize> {
        let (mo, s) = (so % self.n_spatial, so / self.n_spatial);
        if s == 0 {
            self.qubit_map.get(&mo).copied()
        } else {
            self.ancilla_map.get(&mo).copied()
        }
    }

    /// MOs held with one qubit throughout.
    pub fn paired(&self) -> Vec<usize> {
        self.active
            .iter()
            .copied()
            .filter(|mo| !self.ancilla_map.contains_key(mo))
            .collect()
    }

    fn pair_projection(&self, mos: &[usize]) -> (Vec<(usize, usize)>, u64) {
        let na = self.n_active();
        let pairs: Vec<(usize, usize)> = mos
            .iter()
            .map(|&mo| (self.base_qubit(mo), self.base_qubit(mo) + na))
            .collect();
        let removed = pairs.iter().fold(0u64, |acc, &(_, m)| acc | 1 << m);
        (pairs, removed)
    }

    /// Restricts an unprojected operator to the pair subspace of `mos`.
    fn project(&self, sum: &PauliSum, mos: &[usize]) -> PauliSum {
        let (pairs, removed) = self.pair_projection(mos);
        let mut out = compact_sum(&project_sum_pairs(sum, &pairs), removed);
        out.prune(crate::pauli::PRUNE_TOL);
        permute_sum(&out, &self.register_perm)
    }

    /// Moves register qubit `q` to `perm[q]`.
    fn relabel(&mut self, perm: &[usize]) {
        let moved = |terms: &[(PauliMask, f64)]| -> Vec<(PauliMask, f64)> {
            terms.iter().map(|&(m, c)| (m.permuted(perm), c)).collect()
        };
        for t in &mut self.terms {
            t.generator = moved(&t.generator);
            t.pair_generator = moved(&t.pair_generator);
            t.qubits = t.qubits.iter().map(|&q| perm[q]).collect();
            t.jw_support = PauliMask::z_string(t.jw_support).permuted(perm).z;
        }
        for q in self.qubit_map.values_mut().chain(self.ancilla_map.values_mut()) {
            *q = perm[*q];
        }
        self.register_perm = self.register_perm.iter().map(|&q| perm[q]).collect();
    }

    /// Qubit Hamiltonian on this register for the full-problem `ham`.
    pub fn register_hamiltonian(&self, ham: &SpinOrbitalHamiltonian) -> Result<QubitHamiltonian> {
        if ham.n_spatial != self.n_spatial {
            return Err(contract("Hamiltonian size does not match the ansatz"));
        }
        let frozen: BTreeSet<usize> = self.frozen.iter().copied().collect();
        let dropped: BTreeSet<usize> = self.dropped.iter().copied().collect();
        let reduced = select_orbitals(ham, &frozen, &dropped)?;
        let n = 2 * self.n_active();
        let full = jordan_wigner_ordered(&reduced, &self.jw_position, n)?;
        let relabeled = QubitHamiltonian::from_sum(n, &permute_sum(&full.to_sum(), &self.position_to_label()))?;
        let (pairs, _) = self.pair_projection(&self.paired());
        let projected = relabeled.project_pairs(&pairs)?;
        QubitHamiltonian::from_sum(self.n_qubits, &permute_sum(&projected.to_sum(), &self.register_perm))
    }

    /// MO qubits of doubly occupied active MOs: the reference preparation.
    pub fn prep_mask(&self) -> u64 {
        let n_docc = self.n_electrons / 2;
        self.active
            .iter()
            .filter(|&&mo| mo < n_docc)
            .fold(0, |acc, mo| acc | 1 << self.qubit_map[mo])
    }

    /// The reference state on the re-encoded register.
    pub fn register_reference(&self) -> u64 {
        let n_docc = self.n_electrons / 2;
        let mut r = self.prep_mask();
        for (mo, &anc) in &self.ancilla_map {
            if *mo < n_docc {
                r |= 1 << anc;
            }
        }
        r
    }

    pub fn validate(&self) -> Result<()> {
        let mut ids: Vec<usize> = self.terms.iter().map(|t| t.parameter_id).collect();
        ids.sort_unstable();
        if ids != (0..self.n_parameters).collect::<Vec<_>>() {
            return Err(contract("parameter ids are not 0..n_parameters"));
        }
        let first_nb = self.terms.iter().position(|t| !t.is_bosonic());
        if let Some(i) = first_nb {
            if self.terms[i..].iter().any(|t| t.is_bosonic()) {
                return Err(contract("bosonic terms must precede non-bosonic terms"));
            }
        }
        Ok(())
    }
}

/// Product-formula order and number of steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrotterConfig {
    pub order: usize,
    pub steps: usize,
}

impl Default for TrotterConfig {
    fn default() -> Self {
        TrotterConfig { order: 1, steps: 1 }
    }
}

impl TrotterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || (self.order > 1 && self.order % 2 == 1) {
            return Err(contract(format!("Trotter order {} must be 1 or even", self.order)));
        }
        if self.steps == 0 {
            return Err(contract("Trotter steps must be at least 1"));
        }
        Ok(())
    }
}

fn suzuki(order: usize, lambda: f64, n_terms: usize, out: &mut Vec<(usize, f64)>) {
    match order {
        1 => out.extend((0..n_terms).map(|j| (j, lambda))),
        2 => {
            out.extend((0..n_terms).map(|j| (j, lambda / 2.0)));
            out.extend((0..n_terms).rev().map(|j| (j, lambda / 2.0)));
        }
        _ => {
            let k = order / 2;
            let pk = 1.0 / (4.0 - 4f64.powf(1.0 / (2 * k - 1) as f64));
            for f in [pk, pk, 1.0 - 4.0 * pk, pk, pk] {
                suzuki(order - 2, f * lambda, n_terms, out);
            }
        }
    }
}

/// Product-formula expansion as `(term index, angle scale)` pairs in
/// execution order.
pub fn trotterize(spec: &AnsatzSpec, cfg: &TrotterConfig) -> Result<Vec<(usize, f64)>> {
    cfg.validate()?;
    let lambda = 1.0 / cfg.steps as f64;
    let mut one = Vec::new();
    suzuki(cfg.order, lambda, spec.terms.len(), &mut one);
    Ok((0..cfg.steps).flat_map(|_| one.iter().copied()).collect())
}

fn compile_sequence(terms: &[&ExcitationTerm], n_qubits: usize) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    for t in terms {
        let g = synth_nonbosonic(n_qubits, &t.generator_sum(), Angle::param(t.parameter_id))
            .expect("double excitation generator");
        c.extend(&g);
    }
    optimize(&c, &PassConfig::default())
}

fn entanglers(terms: &[&ExcitationTerm], n_qubits: usize) -> usize {
    count_gates(&compile_sequence(terms, n_qubits)).entangling_total
}

fn relabeled(terms: &[ExcitationTerm], perm: &[usize]) -> Vec<ExcitationTerm> {
    terms
        .iter()
        .map(|t| ExcitationTerm {
            generator: t.generator.iter().map(|&(m, c)| (m.permuted(perm), c)).collect(),
            ..t.clone()
        })
        .collect()
}

/// Swap descent over register relabelings for a fixed term order, then a
/// fresh [`order_terms`]; repeated while the compiled count drops.
fn descend_labels(terms: &[ExcitationTerm], n_qubits: usize, mut perm: Vec<usize>) -> (usize, Vec<usize>) {
    let count = |ts: &[ExcitationTerm]| entanglers(&ts.iter().collect::<Vec<_>>(), n_qubits);
    let mut order = order_terms(&relabeled(terms, &perm), n_qubits);
    let mut best = count(&order);
    loop {
        let mut swap: Vec<usize> = (0..n_qubits).collect();
        let mut cur = best;
        let mut improved = true;
        while improved {
            improved = false;
            for a in 0..n_qubits {
                for b in a + 1..n_qubits {
                    let mut p = swap.clone();
                    p.swap(a, b);
                    let c = count(&relabeled(&order, &p));
                    if c < cur {
                        cur = c;
                        swap = p;
                        improved = true;
                    }
                }
            }
        }
        let next: Vec<usize> = perm.iter().map(|&q| swap[q]).collect();
        let next_order = order_terms(&relabeled(terms, &next), n_qubits);
        let c = count(&next_order);
        if c >= best {
            return (best, perm);
        }
        best = c;
        perm = next;
        order = next_order;
    }
}

/// Register relabeling that minimises the compiled entangling count of the
/// non-pair terms. Searches from the identity and from the order in which
/// qubits used by more terms sit higher; ties keep the identity.
fn assign_labels(terms: &[ExcitationTerm], n_qubits: usize) -> Vec<usize> {
    let identity: Vec<usize> = (0..n_qubits).collect();
    if terms.len() < 2 {
        return identity;
    }
    let mut uses = vec![0usize; n_qubits];
    for t in terms {
        for &q in &t.qubits {
            uses[q] += 1;
        }
    }
    let mut by_use: Vec<usize> = (0..n_qubits).collect();
    by_use.sort_by_key(|&q| (uses[q], q));
    let by_use = positions_of(&by_use);
    let a = descend_labels(terms, n_qubits, identity);
    let b = descend_labels(terms, n_qubits, by_use);
    if b.0 < a.0 {
        b.1
    } else {
        a.1
    }
}

/// Orders non-bosonic terms so that neighbours share as much of their
/// compiled structure as possible.
///
/// Terms are first put in canonical index order. Each start term seeds a
/// greedy chain that always appends the term saving the most entangling
/// gates at the new boundary; the chain with the fewest compiled entangling
/// gates wins, ties going to the earliest start.
pub fn order_terms(terms: &[ExcitationTerm], n_qubits: usize) -> Vec<ExcitationTerm> {
    let mut canon: Vec<&ExcitationTerm> = terms.iter().collect();
    canon.sort_by_key(|t| (t.indices, t.parameter_id));
    let n = canon.len();
    if n <= 1 {
        return canon.into_iter().cloned().collect();
    }
    let single: Vec<usize> = canon.iter().map(|t| entanglers(&[t], n_qubits)).collect();
    let mut saving = vec![vec![0i64; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                let joint = entanglers(&[canon[a], canon[b]], n_qubits);
                saving[a][b] = (single[a] + single[b]) as i64 - joint as i64;
            }
        }
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for start in 0..n {
        let mut chain = vec![start];
        let mut used = vec![false; n];
        used[start] = true;
        while chain.len() < n {
            let cur = *chain.last().unwrap();
            let next = (0..n)
                .filter(|&b| !used[b])
                .max_by(|&x, &y| saving[cur][x].cmp(&saving[cur][y]).then(y.cmp(&x)))
                .unwrap();
            used[next] = true;
            chain.push(next);
        }
        let seq: Vec<&ExcitationTerm> = chain.iter().map(|&i| canon[i]).collect();
        let total = entanglers(&seq, n_qubits);
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            best = Some((total, chain));
        }
    }
    best.unwrap().1.into_iter().map(|i| canon[i].clone()).collect()
}

fn is_pair_term(&(p, q, r, s): &(usize, usize, usize, usize), n: usize) -> bool {
    p < n && r < n && q == p + n && s == r + n
}

fn interior(pos: &[usize], (p, q, r, s): (usize, usize, usize, usize)) -> [std::ops::Range<usize>; 2] {
    let mut a = [pos[p], pos[q], pos[r], pos[s]];
    a.sort_unstable();
    [a[0] + 1..a[1], a[2] + 1..a[3]]
}

/// Total σz-string length of the non-pair excitations when spin-orbital `i`
/// (blocked over `n_orbitals` MOs) sits at JW position `pos[i]`.
pub fn jw_length(excitations: &[(usize, usize, usize, usize)], n_orbitals: usize, pos: &[usize]) -> usize {
    excitations
        .iter()
        .filter(|e| !is_pair_term(e, n_orbitals))
        .map(|&e| interior(pos, e).iter().map(|r| r.len()).sum::<usize>())
        .sum()
}

/// Greedy placement of spin-orbitals: pairs that co-occur most often in the
/// excitations are chained at adjacent JW positions; isolated spin-orbitals
/// keep ascending order. Falls back to the identity when that gives shorter
/// σz strings. Excitations use blocked spin-orbitals `k + s·n_orbitals` and
/// the result maps spin-orbital → position.
pub fn map_qubits(excitations: &[(usize, usize, usize, usize)], n_orbitals: usize) -> Vec<usize> {
    let n = 2 * n_orbitals;
    let identity: Vec<usize> = (0..n).collect();
    if n < 2 {
        return identity;
    }
    let mut weight: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(p, q, r, s) in excitations {
        let sos: Vec<usize> = [p, q, r, s].into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        for i in 0..sos.len() {
            for j in i + 1..sos.len() {
                *weight.entry((sos[i], sos[j])).or_default() += 1;
            }
        }
    }
    let mut edges: Vec<((usize, usize), usize)> = weight.into_iter().collect();
    edges.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut degree = vec![0usize; n];
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(comp: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while comp[r] != r {
            r = comp[r];
        }
        comp[x] = r;
        r
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for ((u, v), _) in edges {
        if degree[u] >= 2 || degree[v] >= 2 {
            continue;
        }
        let (cu, cv) = (find(&mut comp, u), find(&mut comp, v));
        if cu == cv {
            continue;
        }
        comp[cu] = cv;
        degree[u] += 1;
        degree[v] += 1;
        adj[u].push(v);
        adj[v].push(u);
    }
    // Walk each chain from its smaller endpoint; chains ordered by their
    // smallest member.
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for k in 0..n {
        if seen[k] {
            continue;
        }
        let mut members = vec![k];
        seen[k] = true;
        let mut stack = vec![k];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    stack.push(y);
                }
            }
        }
        let start = members
            .iter()
            .copied()
            .filter(|&m| adj[m].len() < 2)
            .min()
            .unwrap_or(k);
        order.push(start);
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = adj[cur].iter().find(|&&y| y != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
    }
    let map = positions_of(&order);
    if jw_length(excitations, n_orbitals, &map) > jw_length(excitations, n_orbitals, &identity) {
        identity
    } else {
        map
    }
}

fn positions_of(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (i, &so) in order.iter().enumerate() {
        pos[so] = i;
    }
    pos
}

/// Cost model for a JW order on the hybrid register.
struct JwCost {
    n: usize,
    pair_terms: Vec<(usize, usize, usize, usize)>,
    excitations: Vec<(usize, usize, usize, usize)>,
    paired: Vec<bool>,
}

/// Weight of one σz left on a pair excitation relative to one σz on a
/// non-pair excitation.
const PAIR_STRING_PENALTY: usize = 1000;

impl JwCost {
    fn new(excitations: &[(usize, usize, usize, usize)], n: usize) -> Self {
        let (pair_terms, other): (Vec<_>, Vec<_>) =
            excitations.iter().partition(|e| is_pair_term(e, n));
        let mut paired = vec![true; n];
        for &(p, q, r, s) in &other {
            for i in [p, q, r, s] {
                paired[i % n] = false;
            }
        }
        JwCost {
            n,
            pair_terms,
            excitations: other,
            paired,
        }
    }

    /// σz count of one excitation after projecting the MOs in `paired`.
    fn string(&self, at: &[usize], pos: &[usize], e: (usize, usize, usize, usize), paired: &[bool], parity: &mut [bool]) -> usize {
        parity.iter_mut().for_each(|b| *b = false);
        let mut total = 0;
        for range in interior(pos, e) {
            for p in range {
                let mo = at[p] % self.n;
                if paired[mo] {
                    parity[mo] ^= true;
                } else {
                    total += 1;
                }
            }
        }
        total + parity.iter().filter(|&&b| b).count()
    }

    /// σz count of the non-pair excitations on the hybrid register, plus a
    /// penalty for σz left on pair excitations while every MO is pair-encoded;
    /// those must reduce to the two-qubit bosonic form.
    fn eval(&self, pos: &[usize]) -> usize {
        let mut at = vec![0; 2 * self.n];
        for (so, &p) in pos.iter().enumerate() {
            at[p] = so;
        }
        let mut parity = vec![false; self.n];
        let all = vec![true; self.n];
        let mut total = 0;
        for &e in &self.pair_terms {
            total += PAIR_STRING_PENALTY * self.string(&at, pos, e, &all, &mut parity);
        }
        for &e in &self.excitations {
            total += self.string(&at, pos, e, &self.paired, &mut parity);
        }
        total
    }

    /// Best-improvement descent over single remove-and-insert moves.
    fn descend(&self, mut order: Vec<usize>) -> (usize, Vec<usize>) {
        let mut cost = self.eval(&positions_of(&order));
        loop {
            let mut best: Option<(usize, Vec<usize>)> = None;
            for i in 0..order.len() {
                for j in 0..order.len() {
                    if i == j {
                        continue;
                    }
                    let mut cand = order.clone();
                    let so = cand.remove(i);
                    cand.insert(j, so);
                    let c = self.eval(&positions_of(&cand));
                    if c < best.as_ref().map_or(cost, |b| b.0) {
                        best = Some((c, cand));
                    }
                }
            }
            match best {
                Some((c, o)) => {
                    cost = c;
                    order = o;
                }
                None => return (cost, order),
            }
        }
    }
}

/// Restarts of the JW-order search beyond the blocked and greedy orders.
const JW_RESTARTS: usize = 48;

/// JW positions for the hybrid register minimising the σz strings of the
/// non-pair excitations after pair projection, subject to every pair
/// excitation keeping its two-qubit form.
///
/// Local search from the blocked order, from `start`, and from seeded random
/// orders; the lowest cost wins with ties going to the earliest candidate.
pub fn optimize_jw_order(
    excitations: &[(usize, usize, usize, usize)],
    n_orbitals: usize,
    start: &[usize],
) -> Vec<usize> {
    let n = 2 * n_orbitals;
    let blocked: Vec<usize> = (0..n).collect();
    let cost = JwCost::new(excitations, n_orbitals);
    let blocked_cost = cost.eval(&blocked);
    if n < 3 || blocked_cost == 0 {
        return blocked;
    }
    let mut from_start = vec![0; n];
    for (so, &p) in start.iter().enumerate() {
        from_start[p] = so;
    }
    let mut seeds = vec![blocked.clone(), from_start];
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a77);
    for _ in 0..JW_RESTARTS {
        let mut o = blocked.clone();
        o.shuffle(&mut rng);
        seeds.push(o);
    }
    let mut best = (blocked_cost, blocked);
    for seed in seeds {
        let (c, o) = cost.descend(seed);
        if c < best.0 {
            best = (c, o);
        }
    }
    positions_of(&best.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ranked(indices: (usize, usize, usize, usize), n: usize) -> RankedExcitation {
        RankedExcitation::new(indices, 0.1, n)
    }

    #[test]
    fn empty_ansatz_has_no_qubits() {
        let space = OrbitalSpace::full(4, 4);
        let spec = build_ucc_ansatz(&[], 0, &space).unwrap();
        assert!(spec.terms.is_empty());
        assert_eq!(spec.n_qubits, 0);
        assert_eq!(spec.frozen, vec![0, 1]);
        assert_eq!(spec.dropped, vec![2, 3]);
    }

    #[test]
    fn pair_terms_use_one_qubit_per_mo() {
        let space = OrbitalSpace::full(4, 4);
        let seq = [ranked((2, 6, 1, 5), 4), ranked((3, 7, 0, 4), 4)];
        let spec = build_ucc_ansatz(&seq, 2, &space).unwrap();
        assert_eq!(spec.n_qubits, 4);
        assert!(spec.ancilla_map.is_empty());
        spec.validate().unwrap();
    }

    #[test]
    fn non_pair_term_adds_ancillas() {
        let space = OrbitalSpace::full(4, 4);
        let seq = [ranked((2, 6, 1, 5), 4), ranked((2, 7, 1, 5), 4)];
        let spec = build_ucc_ansatz(&seq, 2, &space).unwrap();
        assert_eq!(spec.n_qubits, 6);
        assert_eq!(spec.ancilla_map.len(), 3);
        let nb = &spec.terms[1];
        assert_eq!(nb.generator.len(), 8);
        assert_eq!(nb.qubits.len(), 4);
    }

    #[test]
    fn trotter_scales_sum_to_one() {
        let space = OrbitalSpace::full(4, 4);
        let seq = [ranked((2, 6, 1, 5), 4), ranked((3, 7, 0, 4), 4)];
        let spec = build_ucc_ansatz(&seq, 2, &space).unwrap();
        for (order, steps) in [(1, 1), (1, 3), (2, 1), (2, 2), (4, 1), (6, 2)] {
            let seq = trotterize(&spec, &TrotterConfig { order, steps }).unwrap();
            for j in 0..2 {
                let total: f64 = seq.iter().filter(|(t, _)| *t == j).map(|(_, s)| s).sum();
                assert!((total - 1.0).abs() < 1e-12, "order {order} steps {steps}");
            }
        }
        assert!(trotterize(&spec, &TrotterConfig { order: 3, steps: 1 }).is_err());
    }

    #[test]
    fn second_order_is_a_palindrome() {
        let space = OrbitalSpace::full(4, 4);
        let seq = [ranked((2, 6, 1, 5), 4), ranked((3, 7, 0, 4), 4)];
        let spec = build_ucc_ansatz(&seq, 2, &space).unwrap();
        let s = trotterize(&spec, &TrotterConfig { order: 2, steps: 1 }).unwrap();
        assert_eq!(s, vec![(0, 0.5), (1, 0.5), (1, 0.5), (0, 0.5)]);
    }

    #[test]
    fn co_occurring_orbitals_become_adjacent() {
        let map = map_qubits(&[(5, 13, 0, 8)], 8);
        assert_eq!(map[0].abs_diff(map[5]), 1);
        assert_eq!(map_qubits(&[], 3), vec![0, 1, 2, 3, 4, 5]);
    }
}
