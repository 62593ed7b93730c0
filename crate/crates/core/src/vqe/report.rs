//! HF+N convergence table.

use serde::{Deserialize, Serialize};

use super::{minimize, Mode, NelderMeadConfig, Problem};
use crate::ansatz::TrotterConfig;
use crate::circuit::{GateCounts, PassConfig};
use crate::error::{contract, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub trotter: TrotterConfig,
    pub passes: PassConfig,
    pub optimizer: NelderMeadConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n_terms: usize,
    pub n_qubits: usize,
    pub gates: GateCounts,
    pub energy: f64,
    pub sigma: f64,
    pub gap_to_fci: f64,
    pub converged: bool,
    pub evaluations: usize,
    pub theta: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub hf_energy: f64,
    pub fci_energy: f64,
    pub mode: Mode,
    pub rows: Vec<ReportRow>,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "n_terms,n_qubits,cnot,xx,entangling,single_qubit,energy,sigma,gap_to_fci,converged,evaluations\n",
        );
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{:.10},{:.10},{:.10},{},{}\n",
                r.n_terms,
                r.n_qubits,
                r.gates.cnot,
                r.gates.xx_small_angle,
                r.gates.entangling_total,
                r.gates.single_qubit,
                r.energy,
                r.sigma,
                r.gap_to_fci,
                r.converged,
                r.evaluations
            ));
        }
        s
    }
}

/// Builds, compiles and minimizes HF+0 … HF+`n_max`.
///
/// Rows run in order: HF+N starts from the HF+(N−1) optimum with the new
/// parameter at zero, which is the previous state up to the reordering of
/// non-pair terms.
pub fn convergence_report(
    problem: &Problem,
    n_max: usize,
    mode: &Mode,
    cfg: &ReportConfig,
) -> Result<ConvergenceReport> {
    if n_max > problem.max_terms() {
        return Err(contract(format!(
            "HF+{n_max} requested but only {} ranked terms",
            problem.max_terms()
        )));
    }
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut start: Vec<f64> = Vec::new();
    for n in 0..=n_max {
        let ev = problem.evaluator(n, &cfg.trotter, &cfg.passes, mode)?;
        start.resize(n, 0.0);
        let run = minimize(&ev, &cfg.optimizer, Some(&start))?;
        start = run.best_theta.clone();
        rows.push(ReportRow {
            n_terms: n,
            n_qubits: ev.spec.n_qubits,
            gates: run.gate_counts,
            energy: run.best.mean,
            sigma: run.best.sigma,
            gap_to_fci: run.best.mean - problem.fci_energy,
            converged: run.converged,
            evaluations: run.evaluations,
            theta: run.best_theta,
        });
    }
    Ok(ConvergenceReport {
        hf_energy: problem.hf_energy,
        fci_energy: problem.fci_energy,
        mode: mode.clone(),
        rows,
    })
}
