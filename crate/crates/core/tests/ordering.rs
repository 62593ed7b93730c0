//! Term ordering against compiled entangling-gate counts.

mod common;

use ionvqe::ansatz::{order_terms, AnsatzSpec, ExcitationTerm, TrotterConfig};
use ionvqe::circuit::{assemble_with, count_gates, PassConfig};

fn entanglers(spec: &AnsatzSpec, terms: &[ExcitationTerm]) -> usize {
    let mut s = spec.clone();
    let bosonic: Vec<ExcitationTerm> = spec.terms.iter().filter(|t| t.is_bosonic()).cloned().collect();
    s.terms = bosonic.into_iter().chain(terms.iter().cloned()).collect();
    for (i, t) in s.terms.iter_mut().enumerate() {
        t.parameter_id = i;
    }
    s.n_parameters = s.terms.len();
    count_gates(&assemble_with(&s, &TrotterConfig::default(), &PassConfig::default()).unwrap()).entangling_total
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn non_pair(spec: &AnsatzSpec) -> Vec<ExcitationTerm> {
    spec.terms.iter().filter(|t| !t.is_bosonic()).cloned().collect()
}

#[test]
fn overlapping_pairs_compile_no_worse_than_reversed() {
    let spec = common::h2o_problem().ansatz(17).unwrap();
    let terms = non_pair(&spec);
    let mut strict = 0;
    for (i, a) in terms.iter().enumerate() {
        for b in &terms[i + 1..] {
            if (a.jw_support & b.jw_support).count_ones() < 3 {
                continue;
            }
            let ordered = order_terms(&[a.clone(), b.clone()], spec.n_qubits);
            let reversed = [ordered[1].clone(), ordered[0].clone()];
            let (fwd, rev) = (entanglers(&spec, &ordered), entanglers(&spec, &reversed));
            assert!(fwd <= rev, "{:?}, {:?}: {fwd} > {rev}", ordered[0].indices, ordered[1].indices);
            strict += usize::from(fwd < rev);
        }
    }
    assert!(strict > 0, "ordering never helps an overlapping pair");
}

#[test]
fn chosen_order_is_the_cheapest_permutation() {
    let spec = common::h2o_problem().ansatz(17).unwrap();
    let terms: Vec<ExcitationTerm> = non_pair(&spec).into_iter().take(5).collect();
    let chosen = entanglers(&spec, &order_terms(&terms, spec.n_qubits));
    let counts: Vec<usize> = permutations(terms.len())
        .iter()
        .map(|p| entanglers(&spec, &p.iter().map(|&i| terms[i].clone()).collect::<Vec<_>>()))
        .collect();
    assert_eq!(chosen, *counts.iter().min().unwrap());
    assert!(chosen < *counts.iter().max().unwrap());
}

#[test]
fn single_term_is_unchanged() {
    let spec = common::h2o_problem().ansatz(17).unwrap();
    let t = spec.terms.iter().find(|t| !t.is_bosonic()).unwrap().clone();
    assert_eq!(order_terms(std::slice::from_ref(&t), spec.n_qubits), vec![t]);
}
