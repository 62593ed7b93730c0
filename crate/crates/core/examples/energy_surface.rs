//! Energy surfaces: the HF+1 curve and an HF+2 grid, as CSV on stdout.

use ionvqe::ansatz::TrotterConfig;
use ionvqe::circuit::PassConfig;
use ionvqe::hamiltonian::parse_fcidump;
use ionvqe::vqe::{scan_surface, surface_csv, Mode, Problem};

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn main() -> ionvqe::Result<()> {
    let problem = Problem::full(parse_fcidump(ionvqe::H2O_STO3G_FCIDUMP)?)?;
    let exact = |n| problem.evaluator(n, &TrotterConfig::default(), &PassConfig::default(), &Mode::Exact);

    let curve = scan_surface(&exact(1)?, &[axis(-0.3, 0.3, 25)])?;
    print!("{}", surface_csv(&curve));
    let best = curve.iter().min_by(|a, b| a.energy.total_cmp(&b.energy)).unwrap();
    eprintln!("HF+1 grid minimum {:.6} at theta {:.3}", best.energy, best.theta[0]);

    let grid = scan_surface(&exact(2)?, &[axis(-0.2, 0.2, 9), axis(-0.2, 0.2, 9)])?;
    println!();
    print!("{}", surface_csv(&grid));
    Ok(())
}
