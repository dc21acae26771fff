use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::evaluate::{evaluate_instance, tolerance_cost, InstanceResult, PENALTY};
use super::model::{AircraftError, HxKind, OperatingPoint, PhysicalConstants, ToleranceVector};

/// Outcome of [`nelder_mead_minimize`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// Best value after each iteration.
    pub history: Vec<f64>,
}

/// Nelder–Mead simplex search in a box. Candidate points are clamped into the
/// box; the initial simplex steps `0.05·(hi − lo)` along each axis.
pub fn nelder_mead_minimize<F>(
    mut f: F,
    x0: &[f64],
    bounds: &[(f64, f64)],
    max_iter: usize,
) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;
    let n = x0.len();
    assert!(n >= 1 && bounds.len() == n, "dimension mismatch");
    let clamp = |x: Vec<f64>| -> Vec<f64> {
        x.iter()
            .zip(bounds)
            .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
            .collect()
    };
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let start = clamp(x0.to_vec());
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(start.clone(), eval(&start))];
    for i in 0..n {
        let (lo, hi) = bounds[i];
        let step = 0.05 * (hi - lo);
        let mut x = start.clone();
        x[i] = if x[i] + step <= hi {
            x[i] + step
        } else {
            x[i] - step
        };
        let fx = eval(&x);
        simplex.push((x, fx));
    }

    let mut history = Vec::with_capacity(max_iter);
    let mut iterations = 0;
    while iterations < max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread.abs() <= 1e-14 && size <= 1e-12 {
            break;
        }
        iterations += 1;
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |from: &[f64], t: f64| -> Vec<f64> {
            clamp(
                centroid
                    .iter()
                    .zip(from)
                    .map(|(c, x)| c + t * (x - c))
                    .collect(),
            )
        };
        let worst = simplex[n].clone();
        let xr = along(&worst.0, -ALPHA);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(&xr, GAMMA);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = along(&xr, RHO);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(&worst.0, RHO);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < fr.min(worst.1) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, fx) in simplex.iter_mut().skip(1) {
                    *x = clamp(
                        best.iter()
                            .zip(x.iter())
                            .map(|(b, v)| b + SIGMA * (v - b))
                            .collect(),
                    );
                    *fx = eval(x);
                }
            }
        }
        history.push(simplex.iter().map(|s| s.1).fold(f64::INFINITY, f64::min));
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    NelderMeadResult {
        x,
        f: fx,
        iterations,
        evaluations,
        history,
    }
}

/// Settings of the tolerance optimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizeConfig {
    pub constants: PhysicalConstants,
    pub op: OperatingPoint,
    pub hx: HxKind,
    pub start: ToleranceVector,
    pub lower: f64,
    pub upper: f64,
    pub max_iter: usize,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            constants: PhysicalConstants::default(),
            op: OperatingPoint {
                alt: 15.0,
                thrust: 20000.0,
                mdot_in: 9.316,
                mdot_a: 0.429,
            },
            hx: HxKind::Controlled,
            start: ToleranceVector::uniform(0.01),
            lower: 0.01,
            upper: 0.10,
            max_iter: 2000,
        }
    }
}

/// Start, end and progress of a tolerance optimization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeReport {
    pub start: InstanceResult,
    pub start_cost: f64,
    pub best: InstanceResult,
    pub best_cost: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// Every tolerance vector evaluated, in order, with its cost.
    pub trajectory: Vec<(ToleranceVector, f64)>,
    /// Best cost after each iteration.
    pub history: Vec<f64>,
}

/// Searches the tolerance box for the loosest components whose composition
/// still meets the loop requirements with bounds close to its limits.
pub fn optimize(cfg: &OptimizeConfig) -> Result<OptimizeReport, AircraftError> {
    cfg.constants.validate()?;
    cfg.op.validate()?;
    if !(cfg.lower >= 0.0 && cfg.lower < cfg.upper) {
        return Err(AircraftError::Config(
            "tolerance box must satisfy 0 <= lower < upper".into(),
        ));
    }
    let cost_of = |eps: &ToleranceVector| -> Result<(InstanceResult, f64), AircraftError> {
        let r = evaluate_instance(&cfg.constants, &cfg.op, eps, cfg.hx)?;
        let c = tolerance_cost(&cfg.constants, &r);
        Ok((r, c))
    };
    let start_eps = ToleranceVector::from_slice(
        &cfg.start
            .to_array()
            .iter()
            .map(|e| e.clamp(cfg.lower, cfg.upper))
            .collect::<Vec<_>>(),
    );
    let (start, start_cost) = cost_of(&start_eps)?;
    let mut trajectory = Vec::new();
    let mut failure = None;
    let nm = nelder_mead_minimize(
        |x| {
            let eps = ToleranceVector::from_slice(x);
            match cost_of(&eps) {
                Ok((_, c)) => {
                    trajectory.push((eps, c));
                    c
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    PENALTY * 10.0
                }
            }
        },
        &start_eps.to_array(),
        &[(cfg.lower, cfg.upper); 7],
        cfg.max_iter,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let (best, best_cost) = cost_of(&ToleranceVector::from_slice(&nm.x))?;
    Ok(OptimizeReport {
        start,
        start_cost,
        best,
        best_cost,
        iterations: nm.iterations,
        evaluations: nm.evaluations,
        trajectory,
        history: nm.history,
    })
}

/// Writes `optimize.json`.
pub fn write_optimize_output(report: &OptimizeReport, dir: &Path) -> Result<(), AircraftError> {
    fs::create_dir_all(dir)?;
    fs::write(
        dir.join("optimize.json"),
        serde_json::to_string_pretty(report)?,
    )?;
    Ok(())
}
