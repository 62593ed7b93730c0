//! Shot-based energy estimation for HF+1: measurement bases, sampled
//! histograms with readout errors, readout correction and a bootstrap error
//! bar.

use ionvqe::ansatz::TrotterConfig;
use ionvqe::circuit::PassConfig;
use ionvqe::hamiltonian::parse_fcidump;
use ionvqe::measurement::{bootstrap, estimate_energy, SpamCalibration};
use ionvqe::simulator::SpamModel;
use ionvqe::vqe::{Mode, Problem, SampledConfig};

fn main() -> ionvqe::Result<()> {
    let problem = Problem::full(parse_fcidump(ionvqe::H2O_STO3G_FCIDUMP)?)?;
    let mode = Mode::Sampled(SampledConfig {
        shots: 1000,
        spam: Some((0.006, 0.013)),
        seed: 3,
        ..Default::default()
    });
    let ev = problem.evaluator(1, &TrotterConfig::default(), &PassConfig::default(), &mode)?;
    let theta = [0.11];

    for b in &ev.bases {
        println!("basis {}: {} ({} terms)", b.id, b.rotation_label(), b.covered_terms.len());
    }
    let hists = ev.histograms(&theta)?;
    let truth = SpamModel::uniform(ev.spec.n_qubits, 0.006, 0.013);
    let calibration = SpamCalibration::simulate(&truth, 1000, 3)?;
    let raw = estimate_energy(&hists, &ev.bases, &ev.hamiltonian, None)?;
    let corrected = estimate_energy(&hists, &ev.bases, &ev.hamiltonian, Some(&calibration.model()))?;
    let boot = bootstrap(&hists, &ev.bases, &ev.hamiltonian, Some(&calibration), 500, 3)?;

    println!("exact      {:.5} Ha", ev.exact_energy(&theta)?);
    println!("raw        {raw:.5} Ha");
    println!("corrected  {corrected:.5} Ha");
    println!("bootstrap  {:.5} +- {:.5} Ha ({} replicates)", boot.mean, boot.sigma, boot.n_bootstrap);
    Ok(())
}
