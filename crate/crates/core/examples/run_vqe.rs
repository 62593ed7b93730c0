//! Exact-mode VQE for HF+1, HF+2 and HF+3.

use ionvqe::ansatz::TrotterConfig;
use ionvqe::circuit::PassConfig;
use ionvqe::hamiltonian::parse_fcidump;
use ionvqe::vqe::{minimize, Mode, NelderMeadConfig, Problem};

fn main() -> ionvqe::Result<()> {
    let problem = Problem::full(parse_fcidump(ionvqe::H2O_STO3G_FCIDUMP)?)?;
    println!("HF {:.6}  FCI {:.6}", problem.hf_energy, problem.fci_energy);
    for n in 1..=3 {
        let ev = problem.evaluator(n, &TrotterConfig::default(), &PassConfig::default(), &Mode::Exact)?;
        let run = minimize(&ev, &NelderMeadConfig::default(), None)?;
        println!(
            "HF+{n}: {:.6} Ha after {} evaluations, theta = {:.4?}",
            run.best.mean, run.evaluations, run.best_theta
        );
    }
    Ok(())
}
