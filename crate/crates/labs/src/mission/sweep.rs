use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lhs::latin_hypercube_sample;
use super::model::{
    Interval, MissionError, OperationalRequirements, TaskHyperparameters, TaskKind,
};
use super::scenario::{build_scenario, check_schedulable, requirements_contract};
use crate::svg;

/// Sampling box of one capability: its range is `[mean − dev, mean + dev]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanDev {
    pub mean: (f64, f64),
    pub dev: (f64, f64),
}

const fn md(mean: (f64, f64), dev: (f64, f64)) -> MeanDev {
    MeanDev { mean, dev }
}

/// Sampling boxes of the twelve capabilities, in the order of
/// [`TaskHyperparameters::ranges`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HyperRanges {
    pub dsn_cons: MeanDev,
    pub sbo_cons: MeanDev,
    pub tcm_h_cons: MeanDev,
    pub tcm_dv_cons: MeanDev,
    pub chrg_gen: MeanDev,
    pub dsn_rate: MeanDev,
    pub sbo_sgen: MeanDev,
    pub dsn_noise: MeanDev,
    pub chrg_noise: MeanDev,
    pub tcm_dv_noise: MeanDev,
    pub sbo_imp: MeanDev,
    pub tcm_dv_imp: MeanDev,
}

impl Default for HyperRanges {
    fn default() -> Self {
        Self {
            dsn_cons: md((0.05, 0.6), (0.0, 0.1)),
            sbo_cons: md((0.05, 0.6), (0.0, 0.1)),
            tcm_h_cons: md((0.05, 0.6), (0.0, 0.1)),
            tcm_dv_cons: md((0.05, 0.6), (0.0, 0.1)),
            chrg_gen: md((0.2, 2.0), (0.0, 0.2)),
            dsn_rate: md((0.2, 2.0), (0.0, 0.2)),
            sbo_sgen: md((0.2, 1.5), (0.0, 0.2)),
            dsn_noise: md((0.0, 10.0), (0.0, 2.0)),
            chrg_noise: md((0.0, 10.0), (0.0, 2.0)),
            tcm_dv_noise: md((0.0, 0.3), (0.0, 0.05)),
            sbo_imp: md((-0.2, 1.0), (0.0, 0.2)),
            tcm_dv_imp: md((0.0, 1.0), (0.0, 0.2)),
        }
    }
}

impl HyperRanges {
    fn boxes(&self) -> [MeanDev; 12] {
        [
            self.dsn_cons,
            self.sbo_cons,
            self.tcm_h_cons,
            self.tcm_dv_cons,
            self.chrg_gen,
            self.dsn_rate,
            self.sbo_sgen,
            self.dsn_noise,
            self.chrg_noise,
            self.tcm_dv_noise,
            self.sbo_imp,
            self.tcm_dv_imp,
        ]
    }

    /// The 24 sampled dimensions: mean and deviation of every capability.
    pub fn dims(&self) -> Vec<(f64, f64)> {
        self.boxes().iter().flat_map(|b| [b.mean, b.dev]).collect()
    }

    /// Capability ranges from one 24-dimensional sample. Ranges other than
    /// the observation improvement are clipped at zero.
    pub fn to_hyper(point: &[f64]) -> TaskHyperparameters {
        let mut ranges = [Interval::new(0.0, 0.0); 12];
        for (i, r) in ranges.iter_mut().enumerate() {
            let (mean, dev) = (point[2 * i], point[2 * i + 1].abs());
            let floor = if i == 10 { f64::NEG_INFINITY } else { 0.0 };
            *r = Interval::new((mean - dev).max(floor), (mean + dev).max(floor));
        }
        TaskHyperparameters::from_ranges(ranges)
    }
}

/// Sampling ranges of the operational requirements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RequirementRanges {
    pub min_soc: (f64, f64),
    pub min_step_duration: (f64, f64),
    pub initial_data_volume: (f64, f64),
    pub initial_uncertainty: (f64, f64),
}

impl Default for RequirementRanges {
    fn default() -> Self {
        Self {
            min_soc: (60.0, 90.0),
            min_step_duration: (10.0, 50.0),
            initial_data_volume: (60.0, 100.0),
            initial_uncertainty: (40.0, 90.0),
        }
    }
}

impl RequirementRanges {
    pub fn dims(&self) -> Vec<(f64, f64)> {
        vec![
            self.min_soc,
            self.min_step_duration,
            self.initial_data_volume,
            self.initial_uncertainty,
        ]
    }

    pub fn to_requirements(point: &[f64]) -> OperationalRequirements {
        OperationalRequirements {
            min_soc: point[0],
            min_step_duration: point[1],
            initial_data_volume: point[2],
            initial_uncertainty: point[3],
        }
    }
}

/// Mission sweep configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    /// Task names; "TCM" expands to its two phases.
    pub sequence: Vec<String>,
    pub hyper_ranges: HyperRanges,
    pub requirement_ranges: RequirementRanges,
    /// Number of sampled scenarios.
    pub scenarios: usize,
    /// Number of sampled requirement sets.
    pub requirements: usize,
    pub seed: u64,
    /// Write one bound chart per admissible schedule.
    pub svg: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            sequence: ["DSN", "CHRG", "SBO", "TCM"].map(String::from).to_vec(),
            hyper_ranges: HyperRanges::default(),
            requirement_ranges: RequirementRanges::default(),
            scenarios: 20,
            requirements: 20,
            seed: 7,
            svg: false,
        }
    }
}

/// Mean of the signed capability midpoints, and mean of the requirement values.
///
/// Generation, downlink and both improvements count positively; consumption,
/// science generation and noise count negatively.
pub fn score(hyper: &TaskHyperparameters, req: &OperationalRequirements) -> (f64, f64) {
    let signs = [
        -1.0, -1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0, 1.0, 1.0,
    ];
    let s: f64 = hyper
        .ranges()
        .iter()
        .zip(signs)
        .map(|((_, r), sign)| sign * r.mid())
        .sum();
    let v = req.values();
    (s / 12.0, v.iter().sum::<f64>() / v.len() as f64)
}

/// One (scenario, requirements) combination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub scenario: usize,
    pub requirement: usize,
    pub scenario_score: f64,
    pub requirement_score: f64,
    pub admissible: bool,
    pub avg_soc_min: Option<f64>,
    pub avg_soc_max: Option<f64>,
    pub soc_bounds: Option<Vec<(f64, f64)>>,
    /// Why the scenario itself could not be built, if it could not.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub sequence: Vec<TaskKind>,
    pub hypers: Vec<TaskHyperparameters>,
    pub requirements: Vec<OperationalRequirements>,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn admissible_count(&self) -> usize {
        self.rows.iter().filter(|r| r.admissible).count()
    }

    pub fn admissible_rate(&self) -> f64 {
        self.admissible_count() as f64 / self.rows.len().max(1) as f64
    }
}

/// Samples scenarios and requirement sets and checks every combination.
///
/// Rows are ordered by scenario, then requirement set, whatever `jobs` is.
pub fn run_sweep(cfg: &SweepConfig, jobs: Option<usize>) -> Result<SweepReport, MissionError> {
    let sequence = TaskKind::parse_sequence(&cfg.sequence)?;
    if cfg.scenarios == 0 || cfg.requirements == 0 {
        return Err(MissionError::Config(
            "sample counts must be positive".into(),
        ));
    }
    let hypers: Vec<TaskHyperparameters> =
        latin_hypercube_sample(cfg.scenarios, &cfg.hyper_ranges.dims(), cfg.seed)
            .iter()
            .map(|p| HyperRanges::to_hyper(p))
            .collect();
    let requirements: Vec<OperationalRequirements> = latin_hypercube_sample(
        cfg.requirements,
        &cfg.requirement_ranges.dims(),
        cfg.seed.wrapping_add(1),
    )
    .iter()
    .map(|p| RequirementRanges::to_requirements(p))
    .collect();
    let steps = sequence.len();
    let work = || -> Result<Vec<SweepRow>, MissionError> {
        let scenarios: Vec<Result<_, String>> = hypers
            .par_iter()
            .map(|h| build_scenario(&sequence, h).map_err(|e| e.to_string()))
            .collect();
        let req_contracts = requirements
            .iter()
            .map(|r| requirements_contract(r, steps))
            .collect::<Result<Vec<_>, _>>()?;
        let pairs: Vec<(usize, usize)> = (0..hypers.len())
            .flat_map(|s| (0..requirements.len()).map(move |r| (s, r)))
            .collect();
        pairs
            .par_iter()
            .map(|&(s, r)| {
                let (scenario_score, requirement_score) = score(&hypers[s], &requirements[r]);
                let mut row = SweepRow {
                    scenario: s,
                    requirement: r,
                    scenario_score,
                    requirement_score,
                    admissible: false,
                    avg_soc_min: None,
                    avg_soc_max: None,
                    soc_bounds: None,
                    note: None,
                };
                match &scenarios[s] {
                    Ok(c) => {
                        let res = check_schedulable(c, steps, &req_contracts[r])?;
                        row.admissible = res.admissible;
                        row.avg_soc_min = res.avg_soc_min;
                        row.avg_soc_max = res.avg_soc_max;
                        row.soc_bounds = res.soc_bounds;
                    }
                    Err(e) => row.note = Some(e.clone()),
                }
                Ok(row)
            })
            .collect()
    };
    let rows = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| MissionError::Config(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    Ok(SweepReport {
        sequence,
        hypers,
        requirements,
        rows,
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    scenario: usize,
    requirement: usize,
    scenario_score: f64,
    requirement_score: f64,
    min_soc: f64,
    min_step_duration: f64,
    initial_data_volume: f64,
    initial_uncertainty: f64,
    admissible: bool,
    avg_soc_min: Option<f64>,
    avg_soc_max: Option<f64>,
    note: &'a str,
}

#[derive(Serialize)]
struct BoundsEntry<'a> {
    scenario: usize,
    requirement: usize,
    soc_bounds: &'a [(f64, f64)],
    avg_soc_min: Option<f64>,
    avg_soc_max: Option<f64>,
}

/// Writes `results.csv`, `bounds.json`, `scores.svg` and, when `per_schedule_svg`
/// is set, `schedule_<s>_<r>.svg` for every admissible combination.
pub fn write_outputs(
    report: &SweepReport,
    dir: &Path,
    per_schedule_svg: bool,
) -> Result<(), MissionError> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("results.csv"))?;
    for row in &report.rows {
        let req = &report.requirements[row.requirement];
        w.serialize(CsvRow {
            scenario: row.scenario,
            requirement: row.requirement,
            scenario_score: row.scenario_score,
            requirement_score: row.requirement_score,
            min_soc: req.min_soc,
            min_step_duration: req.min_step_duration,
            initial_data_volume: req.initial_data_volume,
            initial_uncertainty: req.initial_uncertainty,
            admissible: row.admissible,
            avg_soc_min: row.avg_soc_min,
            avg_soc_max: row.avg_soc_max,
            note: row.note.as_deref().unwrap_or(""),
        })?;
    }
    w.flush()?;

    let entries: Vec<BoundsEntry> = report
        .rows
        .iter()
        .filter_map(|row| {
            row.soc_bounds.as_deref().map(|b| BoundsEntry {
                scenario: row.scenario,
                requirement: row.requirement,
                soc_bounds: b,
                avg_soc_min: row.avg_soc_min,
                avg_soc_max: row.avg_soc_max,
            })
        })
        .collect();
    fs::write(
        dir.join("bounds.json"),
        serde_json::to_string_pretty(&entries)?,
    )?;

    let mins: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter_map(|r| r.avg_soc_min.map(|v| (r.scenario_score, v)))
        .collect();
    let maxs: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter_map(|r| r.avg_soc_max.map(|v| (r.scenario_score, v)))
        .collect();
    let chart = svg::scatter(
        "Mean exit state of charge over admissible schedules",
        "scenario score",
        "mean soc (%)",
        &[("min", "#1f77b4", &mins), ("max", "#ff7f0e", &maxs)],
    );
    fs::write(dir.join("scores.svg"), chart)?;

    if per_schedule_svg {
        let labels: Vec<String> = report.sequence.iter().map(|k| k.to_string()).collect();
        for row in &report.rows {
            if let Some(bounds) = &row.soc_bounds {
                let req = &report.requirements[row.requirement];
                let chart = svg::interval_chart(
                    &format!(
                        "Exit state of charge, scenario {} / requirements {}",
                        row.scenario, row.requirement
                    ),
                    &labels,
                    bounds,
                    Some((req.min_soc, 100.0)),
                );
                fs::write(
                    dir.join(format!("schedule_{}_{}.svg", row.scenario, row.requirement)),
                    chart,
                )?;
            }
        }
    }
    Ok(())
}
