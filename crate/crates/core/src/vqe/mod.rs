//! Energy evaluation, surface scans, minimization and the HF+N convergence
//! report.

mod nelder_mead;
mod report;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build_ucc_ansatz, hfplus_sequence, AnsatzSpec, OrbitalSpace, TrotterConfig, RANK_WINDOW};
use crate::circuit::{assemble_with, count_gates, Circuit, GateCounts, PassConfig};
use crate::error::{contract, Result};
use crate::hamiltonian::{fci_ground_state, hf_energy, rank_excitations, RankedExcitation, SpinOrbitalHamiltonian};
use crate::measurement::{
    bootstrap, group_terms, EnergyEstimate, MeasurementBasis, SpamCalibration, DEFAULT_BOOTSTRAP, DEFAULT_SHOTS,
};
use crate::pauli::QubitHamiltonian;
use crate::simulator::{run_exact, sample_shots, CompiledHamiltonian, ShotHistogram, SpamModel};

pub use nelder_mead::{nelder_mead, Minimum, NelderMeadConfig, Sample};
pub use report::{convergence_report, ConvergenceReport, ReportConfig, ReportRow};

/// Shot-based evaluation settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledConfig {
    pub shots: u64,
    /// Uniform readout errors `(ε₀, ε₁)` injected on every qubit and
    /// corrected with a simulated calibration.
    pub spam: Option<(f64, f64)>,
    /// Shots per prepared state in the readout calibration.
    pub calibration_shots: u64,
    pub n_bootstrap: usize,
    pub seed: u64,
}

impl Default for SampledConfig {
    fn default() -> Self {
        SampledConfig {
            shots: DEFAULT_SHOTS,
            spam: None,
            calibration_shots: DEFAULT_SHOTS,
            n_bootstrap: DEFAULT_BOOTSTRAP,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Exact,
    Sampled(SampledConfig),
}

/// A compiled ansatz together with everything needed to price a parameter
/// vector.
#[derive(Clone, Debug)]
pub struct Evaluator {
    pub spec: AnsatzSpec,
    pub circuit: Circuit,
    pub hamiltonian: QubitHamiltonian,
    pub bases: Vec<MeasurementBasis>,
    pub mode: Mode,
    compiled: CompiledHamiltonian,
    spam: Option<(SpamModel, SpamCalibration)>,
}

impl Evaluator {
    pub fn new(
        spec: &AnsatzSpec,
        ham: &SpinOrbitalHamiltonian,
        trotter: &TrotterConfig,
        passes: &PassConfig,
        mode: &Mode,
    ) -> Result<Evaluator> {
        let circuit = assemble_with(spec, trotter, passes)?;
        let hamiltonian = spec.register_hamiltonian(ham)?;
        let spam = match mode {
            Mode::Sampled(SampledConfig {
                spam: Some((e0, e1)),
                calibration_shots,
                seed,
                ..
            }) => {
                let truth = SpamModel::uniform(spec.n_qubits, *e0, *e1);
                let cal = SpamCalibration::simulate(&truth, *calibration_shots, *seed)?;
                Some((truth, cal))
            }
            _ => None,
        };
        Ok(Evaluator {
            spec: spec.clone(),
            bases: group_terms(&hamiltonian),
            compiled: CompiledHamiltonian::new(&hamiltonian),
            circuit,
            hamiltonian,
            mode: mode.clone(),
            spam,
        })
    }

    pub fn n_parameters(&self) -> usize {
        self.spec.n_parameters
    }

    pub fn gate_counts(&self) -> GateCounts {
        count_gates(&self.circuit)
    }

    fn check(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.n_parameters() {
            return Err(crate::error::Error::ParameterCount {
                expected: self.n_parameters(),
                got: theta.len(),
            });
        }
        Ok(())
    }

    /// Noise-free energy of the prepared state.
    pub fn exact_energy(&self, theta: &[f64]) -> Result<f64> {
        self.check(theta)?;
        Ok(self.compiled.expectation(&run_exact(&self.circuit, theta)?))
    }

    /// One histogram per measurement basis, sampled with this evaluator's
    /// shot budget and readout noise. Exact mode uses the default budget.
    pub fn histograms(&self, theta: &[f64]) -> Result<Vec<ShotHistogram>> {
        self.check(theta)?;
        let (shots, seed) = match &self.mode {
            Mode::Sampled(s) => (s.shots, s.seed),
            Mode::Exact => (DEFAULT_SHOTS, 0),
        };
        let truth = self.spam.as_ref().map(|(t, _)| t);
        self.bases
            .iter()
            .map(|b| sample_shots(&self.circuit, theta, b, shots, truth, seed))
            .collect()
    }

    /// Energy at `theta`: exact with zero sigma, or a bootstrap estimate
    /// over freshly sampled histograms. Every call of one evaluator reuses
    /// the same seed.
    pub fn energy_at(&self, theta: &[f64]) -> Result<EnergyEstimate> {
        match &self.mode {
            Mode::Exact => {
                let e = self.exact_energy(theta)?;
                Ok(EnergyEstimate {
                    mean: e,
                    sigma: 0.0,
                    n_bootstrap: 0,
                    point: e,
                    seed: 0,
                    inputs: Vec::new(),
                    replicates: Vec::new(),
                })
            }
            Mode::Sampled(s) => {
                let hists = self.histograms(theta)?;
                let cal = self.spam.as_ref().map(|(_, c)| c);
                bootstrap(&hists, &self.bases, &self.hamiltonian, cal, s.n_bootstrap, s.seed)
            }
        }
    }
}

/// Hamiltonian, reference energies and the ranked term sequence of one
/// problem; the starting point for every HF+N ansatz.
#[derive(Clone, Debug)]
pub struct Problem {
    pub hamiltonian: SpinOrbitalHamiltonian,
    pub space: OrbitalSpace,
    pub hf_energy: f64,
    pub fci_energy: f64,
    pub sequence: Vec<RankedExcitation>,
}

/// Ranked excitations kept from the FCI vector.
const RANK_LIMIT: usize = 10_000;

impl Problem {
    pub fn new(hamiltonian: SpinOrbitalHamiltonian, space: OrbitalSpace) -> Result<Problem> {
        if space.n_spatial != hamiltonian.n_spatial || space.n_electrons != hamiltonian.n_electrons {
            return Err(contract("orbital space does not match the Hamiltonian"));
        }
        let reference = hamiltonian.hf_reference();
        let hf = hf_energy(&hamiltonian, reference)?;
        let fci = fci_ground_state(&hamiltonian)?;
        let ranked = rank_excitations(&fci, reference, RANK_LIMIT);
        Ok(Problem {
            sequence: hfplus_sequence(&ranked, &space, RANK_WINDOW),
            hf_energy: hf,
            fci_energy: fci.energy,
            hamiltonian,
            space,
        })
    }

    /// The whole problem with no orbitals excluded by hand.
    pub fn full(hamiltonian: SpinOrbitalHamiltonian) -> Result<Problem> {
        let space = OrbitalSpace::full(hamiltonian.n_spatial, hamiltonian.n_electrons);
        Problem::new(hamiltonian, space)
    }

    pub fn max_terms(&self) -> usize {
        self.sequence.len()
    }

    pub fn ansatz(&self, n: usize) -> Result<AnsatzSpec> {
        build_ucc_ansatz(&self.sequence, n, &self.space)
    }

    pub fn evaluator(&self, n: usize, trotter: &TrotterConfig, passes: &PassConfig, mode: &Mode) -> Result<Evaluator> {
        Evaluator::new(&self.ansatz(n)?, &self.hamiltonian, trotter, passes, mode)
    }
}

/// Energy of `spec` at `theta` with the default product formula and passes.
pub fn energy_at(
    spec: &AnsatzSpec,
    ham: &SpinOrbitalHamiltonian,
    theta: &[f64],
    mode: &Mode,
) -> Result<EnergyEstimate> {
    Evaluator::new(spec, ham, &TrotterConfig::default(), &PassConfig::default(), mode)?.energy_at(theta)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub theta: Vec<f64>,
    pub energy: f64,
    pub sigma: f64,
}

/// Energies over the Cartesian product of per-parameter value lists, in
/// row-major order (last parameter fastest).
pub fn scan_surface(ev: &Evaluator, grid: &[Vec<f64>]) -> Result<Vec<SurfacePoint>> {
    if grid.len() != ev.n_parameters() {
        return Err(contract(format!(
            "grid has {} axes for {} parameters",
            grid.len(),
            ev.n_parameters()
        )));
    }
    if grid.iter().any(Vec::is_empty) {
        return Err(contract("grid axis without values"));
    }
    let total: usize = grid.iter().map(Vec::len).product();
    (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut theta = vec![0.0; grid.len()];
            for (k, axis) in grid.iter().enumerate().rev() {
                theta[k] = axis[idx % axis.len()];
                idx /= axis.len();
            }
            let e = ev.energy_at(&theta)?;
            Ok(SurfacePoint {
                theta,
                energy: e.mean,
                sigma: e.sigma,
            })
        })
        .collect()
}

/// `theta0,…,energy,sigma` rows.
pub fn surface_csv(points: &[SurfacePoint]) -> String {
    let n = points.first().map_or(0, |p| p.theta.len());
    let mut s: String = (0..n).map(|i| format!("theta{i},")).collect();
    s.push_str("energy,sigma\n");
    for p in points {
        for t in &p.theta {
            s.push_str(&format!("{t:.10},"));
        }
        s.push_str(&format!("{:.12},{:.12}\n", p.energy, p.sigma));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub theta: Vec<f64>,
    pub energy: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeRun {
    pub ansatz: AnsatzSpec,
    pub mode: Mode,
    pub gate_counts: GateCounts,
    /// Every objective evaluation in order.
    pub trace: Vec<TracePoint>,
    pub best_theta: Vec<f64>,
    pub best: EnergyEstimate,
    pub converged: bool,
    pub evaluations: usize,
}

impl VqeRun {
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("step,energy,sigma,theta\n");
        for (i, p) in self.trace.iter().enumerate() {
            let theta: Vec<String> = p.theta.iter().map(|t| format!("{t:.10}")).collect();
            s.push_str(&format!("{i},{:.12},{:.12},{}\n", p.energy, p.sigma, theta.join(";")));
        }
        s
    }
}

/// Nelder–Mead over the ansatz parameters from `start` (θ = 0 by default).
/// The simplex stops once its energies span less than `cfg.spread_tol`, or
/// half the bootstrap sigma in sampled mode.
pub fn minimize(ev: &Evaluator, cfg: &NelderMeadConfig, start: Option<&[f64]>) -> Result<VqeRun> {
    let zero = vec![0.0; ev.n_parameters()];
    let x0 = start.unwrap_or(&zero);
    if x0.len() != ev.n_parameters() {
        return Err(contract("start point has the wrong length"));
    }
    let mut trace = Vec::new();
    let m = nelder_mead(
        |theta| {
            let e = ev.energy_at(theta)?;
            trace.push(TracePoint {
                theta: theta.to_vec(),
                energy: e.mean,
                sigma: e.sigma,
            });
            Ok(Sample {
                value: e.mean,
                tol: e.sigma / 2.0,
            })
        },
        x0,
        cfg,
    )?;
    let best = ev.energy_at(&m.x)?;
    Ok(VqeRun {
        ansatz: ev.spec.clone(),
        mode: ev.mode.clone(),
        gate_counts: ev.gate_counts(),
        trace,
        best_theta: m.x,
        best,
        converged: m.converged,
        evaluations: m.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::parse_fcidump;

    fn problem() -> Problem {
        Problem::full(parse_fcidump(crate::H2O_STO3G_FCIDUMP).unwrap()).unwrap()
    }

    fn exact(p: &Problem, n: usize) -> Evaluator {
        p.evaluator(n, &TrotterConfig::default(), &PassConfig::default(), &Mode::Exact)
            .unwrap()
    }

    #[test]
    fn hf0_is_the_reference_energy() {
        let p = problem();
        let ev = exact(&p, 0);
        assert_eq!(ev.gate_counts().entangling_total, 0);
        assert!((ev.exact_energy(&[]).unwrap() - p.hf_energy).abs() < 1e-10);
    }

    #[test]
    fn scan_order_and_size() {
        let p = problem();
        let ev = exact(&p, 2);
        let pts = scan_surface(&ev, &[vec![0.0, 0.1], vec![-0.1, 0.0, 0.1]]).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1].theta, vec![0.0, 0.0]);
        assert_eq!(pts[3].theta, vec![0.1, -0.1]);
        assert!((pts[1].energy - p.hf_energy).abs() < 1e-10);
        assert!(scan_surface(&ev, &[vec![0.0]]).is_err());
        assert_eq!(surface_csv(&pts).lines().count(), 7);
    }

    #[test]
    fn minimize_is_deterministic_and_variational() {
        let p = problem();
        let ev = exact(&p, 2);
        let a = minimize(&ev, &NelderMeadConfig::default(), None).unwrap();
        let b = minimize(&ev, &NelderMeadConfig::default(), None).unwrap();
        assert_eq!(a.trace, b.trace);
        assert!(a.converged);
        assert!(a.best.mean < p.hf_energy && a.best.mean >= p.fci_energy - 1e-9);
        assert!(minimize(&ev, &NelderMeadConfig::default(), Some(&[0.0])).is_err());
    }

    #[test]
    fn sampled_estimate_carries_sigma() {
        let p = problem();
        let mode = Mode::Sampled(SampledConfig {
            shots: 200,
            n_bootstrap: 20,
            ..Default::default()
        });
        let ev = p
            .evaluator(1, &TrotterConfig::default(), &PassConfig::default(), &mode)
            .unwrap();
        let e = ev.energy_at(&[0.05]).unwrap();
        assert!(e.sigma > 0.0 && e.n_bootstrap == 20);
        assert_eq!(e, ev.energy_at(&[0.05]).unwrap());
    }

    #[test]
    fn report_rows_nest() {
        let p = problem();
        let r = convergence_report(&p, 2, &Mode::Exact, &ReportConfig::default()).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert!(r.rows.windows(2).all(|w| w[1].energy <= w[0].energy + 1e-12));
        assert_eq!(r.to_csv().lines().count(), 4);
        assert!(convergence_report(&p, p.max_terms() + 1, &Mode::Exact, &ReportConfig::default()).is_err());
    }
}
