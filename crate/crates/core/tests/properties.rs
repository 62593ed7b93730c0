//! Randomized invariants of the compiler, the fermion encoding and the
//! measurement pipeline.

mod common;

use ionvqe::ansatz::TrotterConfig;
use ionvqe::circuit::{
    cancel_pass, convert_cnot_to_xx, encode_filled_as_zero, optimize, synth_bosonic, synth_nonbosonic, Angle,
    PassConfig,
};
use ionvqe::hamiltonian::{double_excitation_generator, ladder};
use ionvqe::measurement::group_terms;
use ionvqe::pauli::{permute_sum, Pauli, PauliSum};
use ionvqe::simulator::{dense_unitary, unitary_overlap, SpamModel};
use ionvqe::vqe::Mode;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::sample::subsequence;

use common::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn sum_matrix(a: &PauliSum, b: &PauliSum, n: usize) -> DMatrix<Complex64> {
    let (ma, mb) = (dense(a, n), dense(b, n));
    &ma * &mb + &mb * &ma
}

fn four_positions(n: usize) -> impl Strategy<Value = [usize; 4]> {
    subsequence((0..n).collect::<Vec<_>>(), 4)
        .prop_shuffle()
        .prop_map(|v| [v[0], v[1], v[2], v[3]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn passes_preserve_the_unitary(seed in any::<u64>()) {
        let (circ, reference, theta) = random_circuit(seed);
        let u = dense_unitary(&circ, &theta);
        let encoded = encode_filled_as_zero(&circ, reference).unwrap();
        for out in [
            cancel_pass(&circ),
            convert_cnot_to_xx(&circ),
            optimize(&circ, &PassConfig::default()),
            encoded.clone(),
            optimize(&encoded, &PassConfig::default()),
        ] {
            let o = unitary_overlap(&u, &dense_unitary(&out, &theta));
            prop_assert!((1.0 - o).abs() < 1e-10, "overlap {o}");
        }
    }

    #[test]
    fn cancellation_never_adds_entanglers(seed in any::<u64>()) {
        let (circ, _, _) = random_circuit(seed);
        let before = ionvqe::circuit::count_gates(&circ).entangling_total;
        prop_assert!(ionvqe::circuit::count_gates(&cancel_pass(&circ)).entangling_total <= before);
    }

    #[test]
    fn double_excitation_template_matches_exponential(
        (n, pos) in (4usize..=7).prop_flat_map(|n| (Just(n), four_positions(n))),
        theta in -3.0f64..3.0,
    ) {
        let g = double_excitation_generator(pos, n);
        prop_assume!(g.terms.len() == 8);
        let circ = synth_nonbosonic(n, &g, Angle::Const(theta)).unwrap();
        let exact = (dense(&g, n) * c(theta)).exp();
        let d = phase_distance(&exact, &to_matrix(&dense_unitary(&circ, &[])));
        prop_assert!(d.abs() < 1e-10, "distance {d}");
    }

    #[test]
    fn pair_template_matches_exponential(
        (n, j, k) in (2usize..=5).prop_flat_map(|n| (Just(n), 0..n, 0..n)),
        theta in -3.0f64..3.0,
    ) {
        prop_assume!(j != k);
        let sp = |q: usize| {
            let mut m = DMatrix::from_element(1, 1, c(1.0));
            for w in (0..n).rev() {
                let f = if w == q {
                    DMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)])
                } else {
                    DMatrix::identity(2, 2)
                };
                m = m.kronecker(&f);
            }
            m
        };
        let t = sp(j) * sp(k).adjoint();
        let exact = ((&t - t.adjoint()) * c(theta)).exp();
        let circ = synth_bosonic(n, j, k, Angle::Const(theta));
        let d = phase_distance(&exact, &to_matrix(&dense_unitary(&circ, &[])));
        prop_assert!(d.abs() < 1e-10, "distance {d}");
    }

    #[test]
    fn jordan_wigner_anticommutators(n in 1usize..=6, p in 0usize..6, q in 0usize..6) {
        prop_assume!(p < n && q < n);
        let dim = 1 << n;
        let a = ladder(p, false, n);
        let ad = ladder(q, true, n);
        let expected = if p == q { DMatrix::identity(dim, dim) } else { DMatrix::zeros(dim, dim) };
        prop_assert!((sum_matrix(&a, &ad, n) - expected).norm() < 1e-14);
        prop_assert!(sum_matrix(&ladder(p, false, n), &ladder(q, false, n), n).norm() < 1e-14);
        prop_assert!(sum_matrix(&ladder(p, true, n), &ladder(q, true, n), n).norm() < 1e-14);
    }

    #[test]
    fn permutation_is_an_algebra_map(
        perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
        pos in four_positions(5),
    ) {
        let a = double_excitation_generator(pos, 5);
        let b = ladder(pos[0], true, 5).mul(&ladder(pos[2], false, 5));
        let lhs = permute_sum(&a.mul(&b), &perm);
        let rhs = permute_sum(&a, &perm).mul(&permute_sum(&b, &perm));
        prop_assert!((dense(&lhs, 5) - dense(&rhs, 5)).norm() < 1e-12);
        let mut inv = vec![0; 5];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        prop_assert!((dense(&permute_sum(&permute_sum(&a, &perm), &inv), 5) - dense(&a, 5)).norm() < 1e-14);
    }

    #[test]
    fn spam_round_trip(
        n in 1usize..=4,
        e0 in 0.0f64..0.2,
        e1 in 0.0f64..0.2,
        swapped in any::<u64>(),
        raw in prop::collection::vec(0.0f64..1.0, 16),
    ) {
        let dim = 1 << n;
        let total: f64 = raw[..dim].iter().sum::<f64>() + 1e-9;
        let p: Vec<f64> = raw[..dim].iter().map(|x| (x + 1e-9 / dim as f64) / total).collect();
        let spam = SpamModel::uniform(n, e0, e1);
        let swapped = swapped & ((1 << n) - 1);
        let mut q = p.clone();
        spam.apply(&mut q, swapped);
        prop_assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        spam.invert(&mut q, swapped).unwrap();
        for (a, b) in p.iter().zip(&q) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn grouping_partitions_every_register_hamiltonian() {
    let problem = h2o_problem();
    for n in [0, 1, 3, 8, 17] {
        let h = problem.ansatz(n).unwrap().register_hamiltonian(&problem.hamiltonian).unwrap();
        let bases = group_terms(&h);
        let mut seen = vec![0usize; h.terms.len()];
        for b in &bases {
            for &t in &b.covered_terms {
                seen[t] += 1;
                let mask = h.terms[t].mask();
                for q in 0..h.n_qubits {
                    let p = mask.get(q);
                    assert!(p == Pauli::I || p == b.paulis[q], "HF+{n}: term {t} not diagonal in basis {}", b.id);
                }
            }
        }
        assert!(seen.iter().all(|&k| k == 1), "HF+{n}: terms not covered exactly once");
        if (1..=3).contains(&n) {
            assert_eq!(bases.len(), 3, "HF+{n}");
        }
    }
}

proptest! {
    #[test]
    fn grouping_partitions_random_hamiltonians(
        labels in prop::collection::vec(prop::collection::vec(0u8..4, 6), 1..40),
    ) {
        let mut terms = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let mut m = ionvqe::pauli::PauliMask::IDENTITY;
            for (q, &k) in l.iter().enumerate() {
                m.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][k as usize]);
            }
            if !m.is_identity() && !terms.iter().any(|t: &ionvqe::pauli::PauliString| t.mask() == m) {
                terms.push(ionvqe::pauli::PauliString::new(0.1 + i as f64, m));
            }
        }
        let h = ionvqe::pauli::QubitHamiltonian { n_qubits: 6, constant: 0.0, terms };
        let mut seen = vec![0; h.terms.len()];
        for b in group_terms(&h) {
            for &t in &b.covered_terms {
                seen[t] += 1;
                for q in 0..6 {
                    let p = h.terms[t].mask().get(q);
                    prop_assert!(p == Pauli::I || p == b.paulis[q]);
                }
            }
        }
        prop_assert!(seen.iter().all(|&k| k == 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn exact_energies_are_variational(n in 0usize..=8, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let problem = h2o_problem();
        let ev = problem
            .evaluator(n, &TrotterConfig::default(), &PassConfig::default(), &Mode::Exact)
            .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let theta: Vec<f64> = (0..n).map(|_| rng.random_range(-3.2..3.2)).collect();
        prop_assert!(ev.exact_energy(&theta).unwrap() >= problem.fci_energy - 1e-9);
    }
}
