//! Compiles HF+N ansätze to the trapped-ion gate set and prints gate counts,
//! with and without the optimization passes. Pass N as the first argument to
//! print that circuit.

use ionvqe::ansatz::TrotterConfig;
use ionvqe::circuit::{assemble_with, count_gates, to_text, PassConfig};
use ionvqe::hamiltonian::parse_fcidump;
use ionvqe::vqe::Problem;

fn main() -> ionvqe::Result<()> {
    let problem = Problem::full(parse_fcidump(ionvqe::H2O_STO3G_FCIDUMP)?)?;
    let raw = PassConfig {
        cancel: false,
        convert_xx: false,
        encode: false,
    };
    println!(" N  qubits  raw CNOT  CNOT  XX  entangling");
    for n in [0, 1, 2, 3, 5, 8, 12, 17, 21] {
        let spec = problem.ansatz(n)?;
        let before = count_gates(&assemble_with(&spec, &TrotterConfig::default(), &raw)?);
        let after = count_gates(&assemble_with(&spec, &TrotterConfig::default(), &PassConfig::default())?);
        println!(
            "{n:>2}  {:>6}  {:>8}  {:>4}  {:>2}  {:>10}",
            spec.n_qubits, before.cnot, after.cnot, after.xx_small_angle, after.entangling_total
        );
    }
    if let Some(n) = std::env::args().nth(1) {
        let n: usize = n.parse().expect("N must be an integer");
        let spec = problem.ansatz(n)?;
        print!("\n{}", to_text(&assemble_with(&spec, &TrotterConfig::default(), &PassConfig::default())?));
    }
    Ok(())
}
