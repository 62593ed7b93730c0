//! Circuit energies against a qubit-free determinant-space reference.

mod common;

use ionvqe::ansatz::{OrbitalSpace, TrotterConfig};
use ionvqe::circuit::PassConfig;
use ionvqe::vqe::{Mode, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn check(problem: &Problem, sizes: &[usize], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &n in sizes {
        let spec = problem.ansatz(n).unwrap();
        let ev = problem
            .evaluator(n, &TrotterConfig::default(), &PassConfig::default(), &Mode::Exact)
            .unwrap();
        for _ in 0..3 {
            let theta: Vec<f64> = (0..n).map(|_| rng.random_range(-0.3..0.3)).collect();
            let circuit = ev.exact_energy(&theta).unwrap();
            let reference = oracle_energy(&problem.hamiltonian, &spec, &theta);
            assert!(
                (circuit - reference).abs() < 1e-9,
                "HF+{n}: circuit {circuit} reference {reference}"
            );
        }
    }
}

#[test]
fn full_problem_matches_determinant_reference() {
    check(&h2o_problem(), &[1, 2, 3, 5, 8, 12, 17], 11);
}

#[test]
fn reduced_problem_matches_determinant_reference() {
    let ham = h2o();
    let space = OrbitalSpace {
        frozen: [0].into(),
        dropped: [4].into(),
        ..OrbitalSpace::full(ham.n_spatial, ham.n_electrons)
    };
    check(&Problem::new(ham, space).unwrap(), &[1, 4, 9, 16], 12);
}

#[test]
fn unoptimized_circuit_prepares_the_same_state() {
    let problem = h2o_problem();
    let theta: Vec<f64> = (0..10).map(|i| 0.02 * i as f64 - 0.07).collect();
    let raw = PassConfig {
        cancel: false,
        convert_xx: false,
        encode: false,
    };
    let a = problem
        .evaluator(10, &TrotterConfig::default(), &raw, &Mode::Exact)
        .unwrap()
        .exact_energy(&theta)
        .unwrap();
    let b = problem
        .evaluator(10, &TrotterConfig::default(), &PassConfig::default(), &Mode::Exact)
        .unwrap()
        .exact_energy(&theta)
        .unwrap();
    assert!((a - b).abs() < 1e-10);
}
