//! Variational quantum eigensolver toolkit for molecular ground states on a
//! trapped-ion gate set.
//!
//! The pipeline runs from molecular integrals to energy estimates:
//!
//! - [`hamiltonian`]: FCIDUMP ingestion, HF and FCI energies, excitation
//!   ranking, orbital selection and the Jordan-Wigner map.
//! - [`ansatz`]: HF+N unitary coupled-cluster ansatz, product formulas,
//!   term ordering and qubit assignment.
//! - [`circuit`]: gate IR, excitation templates and optimization passes.
//! - [`simulator`]: dense state-vector simulation, sampling and SPAM noise.
//! - [`measurement`]: basis grouping, SPAM correction, bootstrap and
//!   parity calibration.
//! - [`vqe`]: energy evaluation, surface scans, minimization and the HF+N
//!   convergence report.
//! - [`cli`]: run configuration and the command implementations behind the
//!   `ionvqe` binary.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod ansatz;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod hamiltonian;
pub mod measurement;
pub mod pauli;
pub mod simulator;
pub mod vqe;

pub use error::{Error, Result};

/// The bundled H₂O/STO-3G integral file.
pub const H2O_STO3G_FCIDUMP: &str = include_str!("../data/h2o_sto3g.fcidump");
