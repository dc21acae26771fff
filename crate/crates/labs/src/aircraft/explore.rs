use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evaluate::{evaluate_instance, InstanceResult};
use super::model::{AircraftError, HxKind, OperatingPoint, PhysicalConstants, ToleranceVector};
use crate::svg;

/// Grid of flight regimes and design points to sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExploreConfig {
    pub constants: PhysicalConstants,
    pub eps: ToleranceVector,
    pub altitudes: Vec<f64>,
    pub thrusts: Vec<f64>,
    pub mdot_in: Vec<f64>,
    pub mdot_a: Vec<f64>,
    pub hx_kinds: Vec<HxKind>,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        Self {
            constants: PhysicalConstants::default(),
            eps: ToleranceVector::uniform(0.01),
            altitudes: vec![5.0, 10.0, 15.0],
            thrusts: vec![5000.0, 10000.0, 15000.0, 20000.0],
            mdot_in: vec![4.0, 6.0, 8.0, 10.0, 12.0],
            mdot_a: vec![1.0, 2.0, 3.0, 4.0],
            hx_kinds: vec![HxKind::Fixed, HxKind::Controlled],
        }
    }
}

impl ExploreConfig {
    pub fn validate(&self) -> Result<(), AircraftError> {
        let grids = [
            ("altitudes", self.altitudes.len()),
            ("thrusts", self.thrusts.len()),
            ("mdot_in", self.mdot_in.len()),
            ("mdot_a", self.mdot_a.len()),
            ("hx_kinds", self.hx_kinds.len()),
        ];
        for (name, n) in grids {
            if n == 0 {
                return Err(AircraftError::Config(format!("{name} grid is empty")));
            }
        }
        self.constants.validate()?;
        self.eps.validate()
    }

    fn instances(&self) -> Vec<(HxKind, OperatingPoint)> {
        let mut out = Vec::new();
        for &hx in &self.hx_kinds {
            for &alt in &self.altitudes {
                for &thrust in &self.thrusts {
                    for &mdot_in in &self.mdot_in {
                        for &mdot_a in &self.mdot_a {
                            out.push((
                                hx,
                                OperatingPoint {
                                    alt,
                                    thrust,
                                    mdot_in,
                                    mdot_a,
                                },
                            ));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Evaluates every instance of the grid, in grid order. Instances whose flow
/// rates are not physical are reported as not valid.
pub fn explore_grid(
    cfg: &ExploreConfig,
    jobs: Option<usize>,
) -> Result<Vec<InstanceResult>, AircraftError> {
    cfg.validate()?;
    let instances = cfg.instances();
    let work = || {
        instances
            .par_iter()
            .map(
                |(hx, op)| match evaluate_instance(&cfg.constants, op, &cfg.eps, *hx) {
                    Err(AircraftError::Construction(msg)) => Ok(InstanceResult {
                        op: *op,
                        eps: cfg.eps,
                        hx: *hx,
                        refines_spec: false,
                        t_e: None,
                        t_out: None,
                        reason: Some(msg),
                    }),
                    other => other,
                },
            )
            .collect::<Result<Vec<_>, _>>()
    };
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| AircraftError::Config(e.to_string()))?
            .install(work),
        None => work(),
    }
}

fn regimes(results: &[InstanceResult], hx: HxKind) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for r in results.iter().filter(|r| r.hx == hx) {
        if !out.contains(&(r.op.alt, r.op.thrust)) {
            out.push((r.op.alt, r.op.thrust));
        }
    }
    out
}

fn valid_at(
    results: &[InstanceResult],
    hx: HxKind,
    regime: (f64, f64),
    pick: impl Fn(&OperatingPoint) -> bool,
) -> bool {
    results
        .iter()
        .any(|r| r.hx == hx && (r.op.alt, r.op.thrust) == regime && pick(&r.op) && r.valid())
}

/// `(mdot_in, mdot_a)` pairs valid in every flight regime of the sweep.
pub fn covering_pairs(results: &[InstanceResult], hx: HxKind) -> Vec<(f64, f64)> {
    let regimes = regimes(results, hx);
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for r in results.iter().filter(|r| r.hx == hx) {
        let p = (r.op.mdot_in, r.op.mdot_a);
        if !pairs.contains(&p) {
            pairs.push(p);
        }
    }
    pairs
        .into_iter()
        .filter(|&(mi, ma)| {
            regimes
                .iter()
                .all(|&g| valid_at(results, hx, g, |op| op.mdot_in == mi && op.mdot_a == ma))
        })
        .collect()
}

/// First pair of fuel-flow levels `lo ≤ hi` such that every flight regime has
/// a valid instance at one of them; a single level that suffices comes first.
pub fn two_level_policy(results: &[InstanceResult], hx: HxKind) -> Option<(f64, f64)> {
    let regimes = regimes(results, hx);
    let mut levels: Vec<f64> = Vec::new();
    for r in results.iter().filter(|r| r.hx == hx) {
        if !levels.contains(&r.op.mdot_in) {
            levels.push(r.op.mdot_in);
        }
    }
    levels.sort_by(f64::total_cmp);
    for &lo in &levels {
        if regimes
            .iter()
            .all(|&g| valid_at(results, hx, g, |op| op.mdot_in == lo))
        {
            return Some((lo, lo));
        }
    }
    for (i, &lo) in levels.iter().enumerate() {
        for &hi in &levels[i + 1..] {
            if regimes
                .iter()
                .all(|&g| valid_at(results, hx, g, |op| op.mdot_in == lo || op.mdot_in == hi))
            {
                return Some((lo, hi));
            }
        }
    }
    None
}

#[derive(Serialize)]
struct CsvRow<'a> {
    hx: HxKind,
    alt: f64,
    thrust: f64,
    mdot_in: f64,
    mdot_a: f64,
    mdot_e: f64,
    refines_spec: bool,
    t_e_lo: Option<f64>,
    t_e_hi: Option<f64>,
    t_out_lo: Option<f64>,
    t_out_hi: Option<f64>,
    reason: &'a str,
}

const COLORS: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

/// Writes `explore.csv`, `validity_<hx>_alt<alt>.svg` (valid design points per
/// thrust level) and `bounds_<hx>.svg` (temperature ranges in the last regime).
pub fn write_explore_outputs(
    cfg: &ExploreConfig,
    results: &[InstanceResult],
    dir: &Path,
) -> Result<(), AircraftError> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("explore.csv"))?;
    for r in results {
        w.serialize(CsvRow {
            hx: r.hx,
            alt: r.op.alt,
            thrust: r.op.thrust,
            mdot_in: r.op.mdot_in,
            mdot_a: r.op.mdot_a,
            mdot_e: r.op.mdot_e(),
            refines_spec: r.refines_spec,
            t_e_lo: r.t_e.map(|b| b.0),
            t_e_hi: r.t_e.map(|b| b.1),
            t_out_lo: r.t_out.map(|b| b.0),
            t_out_hi: r.t_out.map(|b| b.1),
            reason: r.reason.as_deref().unwrap_or(""),
        })?;
    }
    w.flush()?;

    let kinds: BTreeSet<String> = results.iter().map(|r| r.hx.to_string()).collect();
    for kind in kinds {
        let of_kind: Vec<&InstanceResult> = results
            .iter()
            .filter(|r| r.hx.to_string() == kind)
            .collect();
        let mut alts: Vec<f64> = of_kind.iter().map(|r| r.op.alt).collect();
        alts.sort_by(f64::total_cmp);
        alts.dedup();
        let mut thrusts: Vec<f64> = of_kind.iter().map(|r| r.op.thrust).collect();
        thrusts.sort_by(f64::total_cmp);
        thrusts.dedup();
        for &alt in &alts {
            let names: Vec<String> = thrusts.iter().map(|t| format!("thrust {t}")).collect();
            let points: Vec<Vec<(f64, f64)>> = thrusts
                .iter()
                .enumerate()
                .map(|(j, &t)| {
                    let shift = 0.12 * (j as f64 - (thrusts.len() as f64 - 1.0) / 2.0);
                    of_kind
                        .iter()
                        .filter(|r| r.op.alt == alt && r.op.thrust == t && r.valid())
                        .map(|r| (r.op.mdot_in + shift, r.op.mdot_a))
                        .collect()
                })
                .collect();
            let series: Vec<(&str, &str, &[(f64, f64)])> = names
                .iter()
                .zip(&points)
                .enumerate()
                .map(|(j, (n, p))| (n.as_str(), COLORS[j % COLORS.len()], p.as_slice()))
                .collect();
            let doc = svg::scatter(
                &format!("valid designs, {kind} heat exchanger, altitude {alt} km"),
                "fuel flow (kg/s)",
                "air flow (kg/s)",
                &series,
            );
            fs::write(dir.join(format!("validity_{kind}_alt{alt}.svg")), doc)?;
        }
        if let Some(last) = of_kind.last() {
            let regime: Vec<&&InstanceResult> = of_kind
                .iter()
                .filter(|r| r.op.alt == last.op.alt && r.op.thrust == last.op.thrust)
                .collect();
            let mut labels = Vec::new();
            let mut intervals = Vec::new();
            for r in &regime {
                if let (Some(te), Some(to)) = (r.t_e, r.t_out) {
                    labels.push(format!("T_e {}/{}", r.op.mdot_in, r.op.mdot_a));
                    intervals.push(te);
                    labels.push(format!("T_out {}/{}", r.op.mdot_in, r.op.mdot_a));
                    intervals.push(to);
                }
            }
            let doc = svg::interval_chart(
                &format!(
                    "temperature ranges, {kind}, altitude {} km, thrust {}",
                    last.op.alt, last.op.thrust
                ),
                &labels,
                &intervals,
                Some(cfg.constants.t_e_range),
            );
            fs::write(dir.join(format!("bounds_{kind}.svg")), doc)?;
        }
    }
    Ok(())
}
