//! Derivative-free simplex minimization.

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadConfig {
    /// Initial simplex edge along each coordinate.
    pub step: f64,
    /// Stop when the simplex values span less than this, or less than the
    /// tolerance reported with the best vertex, whichever is larger.
    pub spread_tol: f64,
    pub max_evals: usize,
    /// Fresh simplices built around the optimum after convergence; stops
    /// early once a restart gains less than the tolerance.
    pub restarts: usize,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        NelderMeadConfig {
            step: 0.05,
            spread_tol: 1e-7,
            max_evals: 50_000,
            restarts: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// One objective evaluation: value and the spread below which the simplex
/// counts as converged when this point is the best vertex.
pub struct Sample {
    pub value: f64,
    pub tol: f64,
}

struct Vertex {
    x: Vec<f64>,
    value: f64,
    tol: f64,
}

struct Search<'a, F> {
    f: &'a mut F,
    evals: usize,
    max_evals: usize,
}

impl<F: FnMut(&[f64]) -> Result<Sample>> Search<'_, F> {
    fn eval(&mut self, x: Vec<f64>) -> Result<Vertex> {
        self.evals += 1;
        let s = (self.f)(&x)?;
        Ok(Vertex {
            x,
            value: s.value,
            tol: s.tol,
        })
    }

    fn exhausted(&self) -> bool {
        self.evals >= self.max_evals
    }
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect()
}

/// Nelder–Mead with reflection 1, expansion 2, contraction ½ and shrink ½.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], cfg: &NelderMeadConfig) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> Result<Sample>,
{
    let n = x0.len();
    let mut s = Search {
        f: &mut f,
        evals: 0,
        max_evals: cfg.max_evals.max(1),
    };
    let mut best = s.eval(x0.to_vec())?;
    if n == 0 {
        return Ok(Minimum {
            x: best.x,
            value: best.value,
            evaluations: s.evals,
            converged: true,
        });
    }
    let mut converged = false;
    for round in 0..=cfg.restarts {
        let start_value = best.value;
        let mut simplex = vec![best];
        for i in 0..n {
            let mut x = simplex[0].x.clone();
            x[i] += cfg.step;
            simplex.push(s.eval(x)?);
        }
        converged = false;
        loop {
            simplex.sort_by(|a, b| a.value.total_cmp(&b.value));
            let spread = simplex[n].value - simplex[0].value;
            if spread < cfg.spread_tol.max(simplex[0].tol) {
                converged = true;
                break;
            }
            if s.exhausted() {
                break;
            }
            let mut centroid = vec![0.0; n];
            for v in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(&v.x) {
                    *c += x / n as f64;
                }
            }
            let worst = &simplex[n];
            let r = s.eval(lerp(&centroid, &worst.x, -1.0))?;
            if r.value < simplex[0].value {
                let e = s.eval(lerp(&centroid, &worst.x, -2.0))?;
                simplex[n] = if e.value < r.value { e } else { r };
                continue;
            }
            if r.value < simplex[n - 1].value {
                simplex[n] = r;
                continue;
            }
            let outside = r.value < worst.value;
            let c = if outside {
                s.eval(lerp(&centroid, &r.x, 0.5))?
            } else {
                s.eval(lerp(&centroid, &worst.x, 0.5))?
            };
            let accept = if outside { c.value <= r.value } else { c.value < worst.value };
            if accept {
                simplex[n] = c;
                continue;
            }
            let anchor = simplex[0].x.clone();
            for v in simplex.iter_mut().skip(1) {
                *v = s.eval(lerp(&anchor, &v.x, 0.5))?;
            }
        }
        simplex.sort_by(|a, b| a.value.total_cmp(&b.value));
        best = simplex.swap_remove(0);
        let gained = start_value - best.value;
        if (round > 0 && gained < cfg.spread_tol.max(best.tol)) || !converged {
            break;
        }
    }
    Ok(Minimum {
        x: best.x,
        value: best.value,
        evaluations: s.evals,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(v: f64) -> Result<Sample> {
        Ok(Sample { value: v, tol: 0.0 })
    }

    #[test]
    fn quadratic_bowl() {
        let m = nelder_mead(
            |x| exact((x[0] - 0.3).powi(2) + 2.0 * (x[1] + 0.1).powi(2)),
            &[0.0, 0.0],
            &NelderMeadConfig {
                spread_tol: 1e-14,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(m.converged);
        assert!((m.x[0] - 0.3).abs() < 1e-5 && (m.x[1] + 0.1).abs() < 1e-5);
    }

    #[test]
    fn rosenbrock() {
        let m = nelder_mead(
            |x| exact(100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2)),
            &[-1.2, 1.0],
            &NelderMeadConfig {
                step: 0.5,
                spread_tol: 1e-16,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((m.x[0] - 1.0).abs() < 1e-4, "{:?}", m.x);
    }

    #[test]
    fn no_parameters_evaluates_once() {
        let mut calls = 0;
        let m = nelder_mead(
            |_| {
                calls += 1;
                exact(4.0)
            },
            &[],
            &NelderMeadConfig::default(),
        )
        .unwrap();
        assert_eq!((m.value, m.evaluations, calls), (4.0, 1, 1));
    }

    #[test]
    fn evaluation_cap_is_reported() {
        let m = nelder_mead(
            |x| exact(x.iter().map(|v| (v - 1.0).powi(2)).sum()),
            &[0.0; 4],
            &NelderMeadConfig {
                max_evals: 10,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!m.converged);
        assert!(m.value < 4.0);
    }
}
