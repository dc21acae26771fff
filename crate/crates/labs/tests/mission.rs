mod common;

use contract_forge::{LinearTerm, TermList};
use contract_forge_labs::mission::*;

#[test]
fn power_chain_power_composition() {
    for hyper in common::power_chain_instances() {
        common::check_power_chain(&hyper).unwrap();
    }
}

#[test]
fn viewpoints_do_not_share_variables() {
    let hyper = TaskHyperparameters::default();
    let seq = five_step_sequence();
    let chains: Vec<_> = Viewpoint::ALL
        .iter()
        .map(|&v| viewpoint_chain(&seq, v, &hyper).unwrap())
        .collect();
    let prefixes = [
        &["soc_", "dt_"][..],
        &["d_", "c_", "dt_"][..],
        &["u_", "r_", "dt_"][..],
    ];
    for (chain, allowed) in chains.iter().zip(prefixes) {
        for v in chain.behavior().vars() {
            assert!(allowed.iter().any(|p| v.starts_with(p)), "{v}");
        }
    }
}

#[test]
fn power_chain_ignores_other_capabilities() {
    let seq = five_step_sequence();
    let base = TaskHyperparameters::default();
    let other = TaskHyperparameters {
        dsn_rate: Interval::new(1.5, 2.0),
        sbo_imp: Interval::new(0.5, 0.9),
        dsn_noise: Interval::new(5.0, 9.0),
        ..base.clone()
    };
    let a = viewpoint_chain(&seq, Viewpoint::Power, &base).unwrap();
    let b = viewpoint_chain(&seq, Viewpoint::Power, &other).unwrap();
    assert_eq!(a, b);
}

#[test]
fn merge_order_does_not_matter() {
    let hyper = TaskHyperparameters::default();
    let seq = five_step_sequence();
    let [p, s, n] = Viewpoint::ALL.map(|v| viewpoint_chain(&seq, v, &hyper).unwrap());
    let forward = p.merge(&s).unwrap().merge(&n).unwrap();
    let backward = n.merge(&s).unwrap().merge(&p).unwrap();
    assert!(forward.equivalent(&backward));
}

fn pinned_feasible(behavior: &TermList, v: &str, x: f64) -> bool {
    let mut t = behavior.clone();
    t.push(LinearTerm::eq([(v, 1.0)], x));
    t.is_satisfiable()
}

#[test]
fn charge_bounds_are_tight() {
    let cases = [
        (
            TaskHyperparameters::default(),
            OperationalRequirements::default(),
        ),
        (
            TaskHyperparameters {
                chrg_gen: Interval::new(1.0, 1.5),
                ..TaskHyperparameters::default()
            },
            OperationalRequirements {
                min_soc: 60.0,
                min_step_duration: 20.0,
                ..OperationalRequirements::default()
            },
        ),
        (
            TaskHyperparameters {
                dsn_cons: Interval::new(0.1, 0.2),
                ..TaskHyperparameters::default()
            },
            OperationalRequirements {
                min_soc: 80.0,
                min_step_duration: 10.0,
                ..OperationalRequirements::default()
            },
        ),
    ];
    for (hyper, req) in cases {
        let r = schedule(&five_step_sequence(), &hyper, &req).unwrap();
        assert!(r.admissible);
        let behavior = r.merged.behavior();
        for (k, (lo, hi)) in r.soc_bounds.unwrap().into_iter().enumerate() {
            let v = var("soc", k + 1);
            assert!(
                pinned_feasible(&behavior, &v, lo) && pinned_feasible(&behavior, &v, hi),
                "{v}"
            );
            assert!(
                !pinned_feasible(&behavior, &v, lo - 1e-3)
                    && !pinned_feasible(&behavior, &v, hi + 1e-3),
                "{v}"
            );
            assert!(lo >= req.min_soc - 1e-6 && hi <= 100.0 + 1e-6);
        }
    }
}

#[test]
fn raising_minimum_charge_eventually_fails() {
    let hyper = TaskHyperparameters::default();
    let seq = five_step_sequence();
    let mut seen_admissible = false;
    let mut last = true;
    for min_soc in [40.0, 60.0, 80.0, 95.0, 99.0] {
        let req = OperationalRequirements {
            min_soc,
            min_step_duration: 30.0,
            ..OperationalRequirements::default()
        };
        let ok = schedule(&seq, &hyper, &req).unwrap().admissible;
        assert!(last || !ok, "admissibility must be monotone in min_soc");
        seen_admissible |= ok;
        last = ok;
    }
    assert!(seen_admissible && !last);
}

#[test]
fn twenty_step_schedule() {
    let seq = twenty_step_sequence();
    assert_eq!(seq.len(), 20);
    let req = OperationalRequirements {
        min_soc: 40.0,
        min_step_duration: 5.0,
        ..OperationalRequirements::default()
    };
    let gentle = TaskHyperparameters {
        sbo_imp: Interval::new(0.0, 0.05),
        tcm_dv_imp: Interval::new(0.05, 0.1),
        ..TaskHyperparameters::default()
    };
    let r = schedule(&seq, &gentle, &req).unwrap();
    assert!(r.admissible);
    assert_eq!(r.soc_bounds.unwrap().len(), 20);
    // Wide improvement ranges make the accumulated navigation conditions
    // demand more trajectory progress than the bound on r allows.
    let r = schedule(&seq, &TaskHyperparameters::default(), &req).unwrap();
    assert!(!r.admissible);
}

#[test]
fn sweep_is_deterministic_per_seed() {
    let cfg = SweepConfig {
        scenarios: 4,
        requirements: 4,
        ..SweepConfig::default()
    };
    let a = run_sweep(&cfg, None).unwrap();
    let b = run_sweep(&cfg, Some(2)).unwrap();
    assert_eq!(a, b);
    let c = run_sweep(&SweepConfig { seed: 8, ..cfg }, None).unwrap();
    assert_ne!(a.hypers, c.hypers);
}

#[test]
fn sweep_outputs() {
    let dir = std::env::temp_dir().join(format!("forge-mission-{}", std::process::id()));
    let cfg = SweepConfig {
        scenarios: 3,
        requirements: 3,
        svg: true,
        ..SweepConfig::default()
    };
    let report = run_sweep(&cfg, None).unwrap();
    write_outputs(&report, &dir, true).unwrap();
    let csv = std::fs::read_to_string(dir.join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert!(dir.join("bounds.json").exists() && dir.join("scores.svg").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn latin_hypercube_marginals_are_uniform() {
    let n = 200;
    let dims = [(0.0, 1.0), (-5.0, 5.0), (10.0, 20.0)];
    let pts = latin_hypercube_sample(n, &dims, 11);
    let bins = 10;
    let expected = n as f64 / bins as f64;
    for (d, &(lo, hi)) in dims.iter().enumerate() {
        let mut counts = vec![0usize; bins];
        for p in &pts {
            assert!(p[d] >= lo && p[d] <= hi);
            counts[(((p[d] - lo) / (hi - lo) * bins as f64) as usize).min(bins - 1)] += 1;
        }
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 95% quantile of chi-square with 9 degrees of freedom.
        assert!(chi2 < 16.919, "dimension {d}: {chi2}");
    }
}

#[test]
fn unknown_task_names_are_rejected() {
    assert!(TaskKind::parse_sequence(&["DSN", "NAP"]).is_err());
    let seq = TaskKind::parse_sequence(&["DSN", "TCM"]).unwrap();
    assert_eq!(seq, vec![TaskKind::Dsn, TaskKind::TcmH, TaskKind::TcmDv]);
}
