//! Run configuration and the commands behind the `ionvqe` binary.
//!
//! A run is described by a [`RunConfig`], read from a `key = value` file and
//! then overridden by command-line flags of the same names. Every artifact
//! carries the configuration digest and seed.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::ansatz::{OrbitalSpace, TrotterConfig};
use crate::circuit::{count_gates, to_text, PassConfig};
use crate::error::{contract, Error, Result};
use crate::hamiltonian::{parse_fcidump, SpinOrbitalHamiltonian};
use crate::measurement::{DEFAULT_BOOTSTRAP, DEFAULT_SHOTS};
use crate::vqe::{minimize, scan_surface, surface_csv, Mode, NelderMeadConfig, Problem, SampledConfig};

/// Exit status for bad input (files, flags, contract violations).
pub const EXIT_INPUT: i32 = 1;
/// Exit status for numerical failures.
pub const EXIT_NUMERIC: i32 = 2;

pub fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_NUMERIC
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    #[default]
    Exact,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Integral file; the bundled H₂O/STO-3G integrals when absent.
    pub fcidump: Option<PathBuf>,
    pub freeze: Vec<usize>,
    pub drop: Vec<usize>,
    pub hfplus: usize,
    pub trotter_order: usize,
    pub trotter_steps: usize,
    pub mode: ModeKind,
    pub shots: u64,
    pub spam: Option<(f64, f64)>,
    pub bootstrap: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Scan axes, one per parameter: `start:stop:count` or `v1,v2,…`.
    pub grid: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            fcidump: None,
            freeze: Vec::new(),
            drop: Vec::new(),
            hfplus: 0,
            trotter_order: 1,
            trotter_steps: 1,
            mode: ModeKind::Exact,
            shots: DEFAULT_SHOTS,
            spam: None,
            bootstrap: DEFAULT_BOOTSTRAP,
            seed: 0,
            out: None,
            grid: Vec::new(),
        }
    }
}

fn parse_list(value: &str) -> Result<Vec<usize>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| contract(format!("bad orbital index {s:?}"))))
        .collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| contract(format!("bad value {value:?} for {key}")))
}

impl RunConfig {
    /// Sets one field from its textual form. Keys accept `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let v = value.trim();
        match key.as_str() {
            "fcidump" => self.fcidump = Some(PathBuf::from(v)),
            "freeze" => self.freeze = parse_list(v)?,
            "drop" => self.drop = parse_list(v)?,
            "hfplus" => self.hfplus = parse_num(&key, v)?,
            "trotter_order" => self.trotter_order = parse_num(&key, v)?,
            "trotter_steps" => self.trotter_steps = parse_num(&key, v)?,
            "mode" => {
                self.mode = match v {
                    "exact" => ModeKind::Exact,
                    "sampled" => ModeKind::Sampled,
                    _ => return Err(contract(format!("unknown mode {v:?}"))),
                }
            }
            "shots" => self.shots = parse_num(&key, v)?,
            "spam" => {
                let (a, b) = v
                    .split_once(',')
                    .ok_or_else(|| contract("spam takes e0,e1"))?;
                self.spam = Some((parse_num(&key, a)?, parse_num(&key, b)?));
            }
            "bootstrap" => self.bootstrap = parse_num(&key, v)?,
            "seed" => self.seed = parse_num(&key, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            "grid" => self.grid = v.split(';').map(|s| s.trim().to_string()).collect(),
            _ => return Err(contract(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn from_kv(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected key = value, got {line:?}"),
            })?;
            let v = v.trim().trim_matches('"');
            cfg.set(k, v).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<RunConfig> {
        RunConfig::from_kv(&fs::read_to_string(path)?)
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        let hash = Sha256::digest(&canonical);
        hash.iter().fold(String::new(), |mut s, b| {
            write!(s, "{b:02x}").unwrap();
            s
        })
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(p) = &self.fcidump {
            if !p.is_file() {
                return Err(Error::Io(std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    format!("integral file {} not found", p.display()),
                )));
            }
        }
        self.trotter().validate()?;
        if self.mode == ModeKind::Sampled && (self.shots == 0 || self.bootstrap < 2) {
            return Err(contract("sampled mode needs shots ≥ 1 and bootstrap ≥ 2"));
        }
        Ok(())
    }

    pub fn trotter(&self) -> TrotterConfig {
        TrotterConfig {
            order: self.trotter_order,
            steps: self.trotter_steps,
        }
    }

    pub fn run_mode(&self) -> Mode {
        match self.mode {
            ModeKind::Exact => Mode::Exact,
            ModeKind::Sampled => Mode::Sampled(SampledConfig {
                shots: self.shots,
                spam: self.spam,
                calibration_shots: self.shots,
                n_bootstrap: self.bootstrap,
                seed: self.seed,
            }),
        }
    }

    pub fn hamiltonian(&self) -> Result<SpinOrbitalHamiltonian> {
        match &self.fcidump {
            Some(p) => parse_fcidump(&fs::read_to_string(p)?),
            None => parse_fcidump(crate::H2O_STO3G_FCIDUMP),
        }
    }

    pub fn problem(&self) -> Result<Problem> {
        let ham = self.hamiltonian()?;
        let space = OrbitalSpace {
            n_spatial: ham.n_spatial,
            n_electrons: ham.n_electrons,
            frozen: self.freeze.iter().copied().collect::<BTreeSet<_>>(),
            dropped: self.drop.iter().copied().collect::<BTreeSet<_>>(),
        };
        if let Some(&k) = space.frozen.iter().chain(&space.dropped).find(|&&k| k >= ham.n_spatial) {
            return Err(contract(format!("orbital {k} outside the {}-orbital problem", ham.n_spatial)));
        }
        Problem::new(ham, space)
    }

    fn header(&self) -> Value {
        json!({ "config": self, "config_digest": self.digest(), "seed": self.seed })
    }

    fn csv_header(&self, what: &str) -> String {
        format!("# ionvqe {what} seed={} config_digest={}\n", self.seed, self.digest())
    }
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut base, extra) {
        a.extend(b);
    }
    base
}

/// Artifacts of one command: named files plus the JSON summary printed on
/// standard output.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub summary: Value,
    pub files: Vec<(String, String)>,
}

impl Output {
    /// Writes every file into `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (name, body) in &self.files {
            fs::write(dir.join(name), body)?;
        }
        Ok(())
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value");
    s.push('\n');
    s
}

/// HF and FCI energies of the integral file.
pub fn cmd_fci(cfg: &RunConfig) -> Result<Output> {
    cfg.validate()?;
    let p = cfg.problem()?;
    let summary = merge(
        cfg.header(),
        json!({
            "hf_energy": p.hf_energy,
            "fci_energy": p.fci_energy,
            "correlation_energy": p.fci_energy - p.hf_energy,
            "n_spatial": p.hamiltonian.n_spatial,
            "n_electrons": p.hamiltonian.n_electrons,
        }),
    );
    Ok(Output {
        files: vec![("fci.json".into(), pretty(&summary))],
        summary,
    })
}

/// Compiled HF+N circuit and its gate counts.
pub fn cmd_synth(cfg: &RunConfig) -> Result<Output> {
    cfg.validate()?;
    let p = cfg.problem()?;
    let spec = p.ansatz(cfg.hfplus)?;
    let circuit = crate::circuit::assemble_with(&spec, &cfg.trotter(), &PassConfig::default())?;
    let counts = count_gates(&circuit);
    let text = format!("# ionvqe synth HF+{} seed={} config_digest={}\n{}", cfg.hfplus, cfg.seed, cfg.digest(), to_text(&circuit));
    let summary = merge(
        cfg.header(),
        json!({
            "n_terms": cfg.hfplus,
            "n_qubits": spec.n_qubits,
            "gate_counts": counts,
            "qubit_map": spec.qubit_map,
            "ancilla_map": spec.ancilla_map,
        }),
    );
    Ok(Output {
        files: vec![
            ("circuit.txt".into(), text),
            ("gate_counts.json".into(), pretty(&summary)),
            ("ansatz.json".into(), pretty(&serde_json::to_value(&spec)?)),
        ],
        summary,
    })
}

/// Minimized HF+N energy, its estimate and the optimizer trace.
pub fn cmd_vqe(cfg: &RunConfig) -> Result<Output> {
    cfg.validate()?;
    let p = cfg.problem()?;
    let ev = p.evaluator(cfg.hfplus, &cfg.trotter(), &PassConfig::default(), &cfg.run_mode())?;
    let run = minimize(&ev, &NelderMeadConfig::default(), None)?;
    let mut estimate = run.best.clone();
    let replicates = estimate.replicates_csv();
    estimate.replicates.clear();
    let summary = merge(
        cfg.header(),
        json!({
            "n_terms": cfg.hfplus,
            "n_qubits": ev.spec.n_qubits,
            "energy": estimate,
            "theta": run.best_theta,
            "converged": run.converged,
            "evaluations": run.evaluations,
            "gate_counts": run.gate_counts,
            "hf_energy": p.hf_energy,
            "fci_energy": p.fci_energy,
            "gap_to_fci": run.best.mean - p.fci_energy,
        }),
    );
    let mut files = vec![
        ("vqe.json".into(), pretty(&summary)),
        ("trace.csv".into(), cfg.csv_header("vqe trace") + &run.trace_csv()),
    ];
    if cfg.mode == ModeKind::Sampled {
        files.push(("bootstrap.csv".into(), cfg.csv_header("bootstrap") + &replicates));
    }
    Ok(Output { summary, files })
}

/// Parses one scan axis: `start:stop:count` or a comma-separated list.
pub fn parse_axis(spec: &str) -> Result<Vec<f64>> {
    let bad = || contract(format!("bad grid axis {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [a, b, n] => {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            match n {
                0 => Err(bad()),
                1 => Ok(vec![a]),
                _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
            }
        }
        [list] => list
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect(),
        _ => Err(bad()),
    }
}

/// Energy surface over the configured grid.
pub fn cmd_scan(cfg: &RunConfig) -> Result<Output> {
    cfg.validate()?;
    let grid: Vec<Vec<f64>> = cfg.grid.iter().map(|a| parse_axis(a)).collect::<Result<_>>()?;
    if grid.len() != cfg.hfplus {
        return Err(contract(format!(
            "grid has {} axes but HF+{} has {} parameters",
            grid.len(),
            cfg.hfplus,
            cfg.hfplus
        )));
    }
    let p = cfg.problem()?;
    let ev = p.evaluator(cfg.hfplus, &cfg.trotter(), &PassConfig::default(), &cfg.run_mode())?;
    let points = scan_surface(&ev, &grid)?;
    let csv = cfg.csv_header("scan") + &surface_csv(&points);
    let summary = merge(
        cfg.header(),
        json!({
            "n_terms": cfg.hfplus,
            "points": points.len(),
            "min_energy": points.iter().map(|p| p.energy).fold(f64::INFINITY, f64::min),
        }),
    );
    Ok(Output {
        files: vec![("scan.csv".into(), csv)],
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_file_and_flags() {
        let mut cfg = RunConfig::from_kv("hfplus = 3\n# comment\nspam = 0.006, 0.013\nfreeze=0\n").unwrap();
        assert_eq!(cfg.hfplus, 3);
        assert_eq!(cfg.spam, Some((0.006, 0.013)));
        assert_eq!(cfg.freeze, vec![0]);
        cfg.set("trotter-order", "2").unwrap();
        assert_eq!(cfg.trotter_order, 2);
        assert!(RunConfig::from_kv("nonsense = 1").is_err());
        assert!(matches!(RunConfig::from_kv("a\nb"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn digest_tracks_content() {
        let a = RunConfig::default();
        let mut b = a.clone();
        assert_eq!(a.digest(), b.digest());
        b.seed = 1;
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
    }

    #[test]
    fn axes() {
        assert_eq!(parse_axis("-0.5:0.5:3").unwrap(), vec![-0.5, 0.0, 0.5]);
        assert_eq!(parse_axis("0.1,0.2").unwrap(), vec![0.1, 0.2]);
        assert!(parse_axis("1:2:0").is_err());
    }

    #[test]
    fn missing_file_is_an_input_error() {
        let cfg = RunConfig {
            fcidump: Some("/nonexistent/file.fcidump".into()),
            ..Default::default()
        };
        let e = cmd_fci(&cfg).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_INPUT);
    }
}
