//! HF+N convergence table as CSV. Optional arguments: largest N (default
//! 21), then `reduced` to freeze the lowest MO and drop MO 4.

use ionvqe::ansatz::OrbitalSpace;
use ionvqe::hamiltonian::parse_fcidump;
use ionvqe::vqe::{convergence_report, Mode, Problem, ReportConfig};

fn main() -> ionvqe::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_max: usize = args.next().map_or(21, |a| a.parse().expect("N must be an integer"));
    let ham = parse_fcidump(ionvqe::H2O_STO3G_FCIDUMP)?;
    let mut space = OrbitalSpace::full(ham.n_spatial, ham.n_electrons);
    if args.next().as_deref() == Some("reduced") {
        space.frozen.insert(0);
        space.dropped.insert(4);
    }
    let problem = Problem::new(ham, space)?;
    let n_max = n_max.min(problem.max_terms());
    let report = convergence_report(&problem, n_max, &Mode::Exact, &ReportConfig::default())?;
    eprintln!("HF {:.6}  FCI {:.6}", report.hf_energy, report.fci_energy);
    print!("{}", report.to_csv());
    Ok(())
}
