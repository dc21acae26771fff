use contract_forge::{LinearTerm, TermList};
use contract_forge_labs::aircraft::*;

fn reference_op() -> OperatingPoint {
    OperatingPoint {
        alt: 15.0,
        thrust: 20000.0,
        mdot_in: 9.316,
        mdot_a: 0.429,
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn pinned(values: &[(&str, f64)]) -> TermList {
    values
        .iter()
        .map(|&(v, x)| LinearTerm::eq([(v, 1.0)], x))
        .collect()
}

#[test]
fn isa_layers() {
    assert_eq!(isa_air_temperature(0.0).unwrap(), 288.15);
    assert!(close(isa_air_temperature(5.0).unwrap(), 255.65, 1e-9));
    assert_eq!(isa_air_temperature(15.0).unwrap(), 216.65);
    assert!(close(isa_air_temperature(11.0).unwrap(), 216.65, 1e-9));
    assert!(matches!(
        isa_air_temperature(20.5),
        Err(AircraftError::Range(_))
    ));
    assert!(matches!(
        isa_air_temperature(-0.1),
        Err(AircraftError::Range(_))
    ));
}

#[test]
fn pump_heating_with_low_fuel_heat_capacity() {
    let k = PhysicalConstants {
        c_f: 200.0,
        ..PhysicalConstants::default()
    };
    let expected = 0.4 * 6.9e6 / (200.0 * 800.0 * 0.6);
    assert!(close(expected, 28.75, 1e-12));
    let pump = make_component(
        ComponentKind::Pump,
        &k,
        &reference_op(),
        &ToleranceVector::uniform(0.0),
    )
    .unwrap();
    let ctx = pump.guarantees().concat(&pinned(&[("T_in", 288.0)]));
    let (lo, hi) = ctx.var_bounds("T_ep").unwrap();
    assert!(close(lo, 288.0 + expected, 1e-9) && close(hi, 288.0 + expected, 1e-9));
}

#[test]
fn pump_power_and_engine_heat() {
    let k = PhysicalConstants::default();
    let op = reference_op();
    let eps = ToleranceVector::uniform(0.0);
    let pump = make_component(ComponentKind::Pump, &k, &op, &eps).unwrap();
    let (lo, hi) = pump.guarantees().var_bounds("w_ep").unwrap();
    assert!(close(lo * 1000.0, 133_917.5, 1e-6) && close(hi, lo, 1e-12));
    assert!(close(op.mdot_e(), 3.888_888_9, 1e-7));
    let engine = make_component(ComponentKind::Engine, &k, &op, &eps).unwrap();
    let (h, _) = engine.guarantees().var_bounds("h_e").unwrap();
    assert!(close(h * 1000.0, 19_444.444, 1e-3));
}

#[test]
fn tolerance_bands_scale_nominal() {
    let k = PhysicalConstants::default();
    let eps = ToleranceVector {
        eps_l_w: 0.1,
        ..ToleranceVector::uniform(0.0)
    };
    let load = make_component(ComponentKind::Load, &k, &reference_op(), &eps).unwrap();
    let ctx = load.guarantees().concat(&pinned(&[("w_nom", 140.0)]));
    let (lo, hi) = ctx.var_bounds("w_l").unwrap();
    assert!(close(lo, 126.0, 1e-9) && close(hi, 154.0, 1e-9));
    let (h_lo, h_hi) = ctx.var_bounds("h_l").unwrap();
    assert!(close(h_lo, 63.0, 1e-9) && close(h_hi, 77.0, 1e-9));
}

#[test]
fn fuel_flow_must_exceed_engine_burn() {
    let op = OperatingPoint {
        mdot_in: 3.0,
        ..reference_op()
    };
    let r = make_component(
        ComponentKind::HxFixed,
        &PhysicalConstants::default(),
        &op,
        &ToleranceVector::uniform(0.01),
    );
    assert!(matches!(r, Err(AircraftError::Construction(_))));
}

#[test]
fn spec_bands() {
    let k = PhysicalConstants::default();
    let spec = make_spec(&k, &reference_op()).unwrap();
    let a = spec.assumptions();
    let check = |v: &str, lo: f64, hi: f64| {
        let (l, h) = a.var_bounds(v).unwrap();
        assert!(close(l, lo, 1e-3) && close(h, hi, 1e-3), "{v}: {l} {h}");
    };
    check("T_in", 282.24, 293.76);
    check("T_a", 212.317, 220.983);
    check("w_nom", 133.0, 147.0);
    assert_eq!(spec.inputs().len(), 3);
    assert_eq!(spec.outputs(), &["T_e".to_string(), "T_out".to_string()]);
}

#[test]
fn sud_interface() {
    let k = PhysicalConstants::default();
    for hx in [HxKind::Fixed, HxKind::Controlled] {
        let sud = build_sud(&k, &reference_op(), &ToleranceVector::uniform(0.01), hx).unwrap();
        let mut inputs = sud.inputs().to_vec();
        inputs.sort();
        assert_eq!(inputs, ["T_a", "T_in", "w_nom"]);
        assert_eq!(
            sud.output_set(),
            ["T_e", "T_out"].map(String::from).into_iter().collect()
        );
    }
}

#[test]
fn heat_balance_at_zero_tolerance() {
    let k = PhysicalConstants::default();
    let eps = ToleranceVector::uniform(0.0);
    for op in [
        reference_op(),
        OperatingPoint {
            alt: 5.0,
            thrust: 5000.0,
            mdot_in: 6.0,
            mdot_a: 2.0,
        },
    ] {
        let sud = build_sud(&k, &op, &eps, HxKind::Fixed).unwrap();
        assert!(sud.guarantees().iter().any(|t| t.is_eq()));
        let (t_in, w_nom) = (288.0, 140.0);
        let t_a = isa_air_temperature(op.alt).unwrap();
        let w_ep = op.mdot_in * k.dp_ep / (k.rho_f * k.eta_ep) / 1000.0;
        let heat = (1.0 / k.eta_g - 1.0) * (w_ep + w_nom)
            + (1.0 - k.eta_l) * w_nom
            + k.k_e * op.mdot_e() / 1000.0;
        let dt_pump = (1.0 - k.eta_ep) * k.dp_ep / (k.c_f * k.rho_f * k.eta_ep);
        let dt_heat = heat * 1000.0 / (op.mdot_in * k.c_f);
        let t_s = t_in + dt_pump + dt_heat;
        let gain = k.eta_x * op.mdot_a * k.c_a / ((op.mdot_in - op.mdot_e()) * k.c_f);
        let dt_hx = gain * (t_s - t_a);
        let ctx =
            sud.guarantees()
                .concat(&pinned(&[("T_in", t_in), ("T_a", t_a), ("w_nom", w_nom)]));
        let (lo, hi) = ctx.var_bounds("T_out").unwrap();
        assert!(
            close(lo, t_in + dt_pump + dt_heat - dt_hx, 1e-6) && close(hi, lo, 1e-6),
            "{lo} {hi}"
        );
        let (e_lo, e_hi) = ctx.var_bounds("T_e").unwrap();
        assert!(close(e_lo, t_s, 1e-6) && close(e_hi, t_s, 1e-6));
    }
}

#[test]
fn reference_instance_with_controlled_exchanger_refines_spec() {
    let k = PhysicalConstants::default();
    let r = evaluate_instance(
        &k,
        &reference_op(),
        &ToleranceVector::uniform(0.01),
        HxKind::Controlled,
    )
    .unwrap();
    assert!(r.refines_spec, "{:?}", r.reason);
    let (lo, hi) = r.t_e.unwrap();
    assert!(lo >= 300.0 && hi <= 330.0);
    let (o_lo, o_hi) = r.t_out.unwrap();
    assert!(close(o_lo, 282.24 - 5.0, 1e-6) && close(o_hi, 293.76 + 5.0, 1e-6));
}

#[test]
fn controlled_exchanger_needs_a_temperature_gap() {
    let k = PhysicalConstants {
        eta_ep: 0.999,
        eta_g: 0.999,
        eta_l: 0.999,
        k_e: 1.0,
        ..PhysicalConstants::default()
    };
    let op = OperatingPoint {
        alt: 0.0,
        ..reference_op()
    };
    let eps = ToleranceVector::uniform(0.01);
    let sud = build_sud(&k, &op, &eps, HxKind::Controlled).unwrap();
    assert!(sud.assumptions().mentions("T_a"));
    let spec = make_spec(&k, &op).unwrap();
    let err = close_with_environment(&spec, &sud).unwrap_err();
    let d = err.diagnostic().expect("diagnostic");
    assert!(d.failed_terms.iter().any(|t| t.mentions("T_a")));
    let r = evaluate_instance(&k, &op, &eps, HxKind::Controlled).unwrap();
    assert!(!r.refines_spec);
    assert!(r
        .reason
        .unwrap()
        .starts_with("Could not eliminate variables"));
    assert!(r.t_e.is_none());
}

#[test]
fn refinement_implies_bounds_inside_spec() {
    let cfg = ExploreConfig {
        altitudes: vec![10.0],
        thrusts: vec![5000.0, 20000.0],
        ..ExploreConfig::default()
    };
    let results = explore_grid(&cfg, Some(1)).unwrap();
    assert_eq!(results.len(), 2 * 2 * 5 * 4);
    assert!(results.iter().any(|r| r.valid()));
    for r in results.iter().filter(|r| r.valid()) {
        let (lo, hi) = r.t_e.unwrap();
        assert!(lo >= 300.0 - 1e-4 && hi <= 330.0 + 1e-4);
        let (o_lo, o_hi) = r.t_out.unwrap();
        assert!(o_lo >= 282.24 - 10.0 - 1e-4 && o_hi <= 293.76 + 10.0 + 1e-4);
    }
}

#[test]
fn grid_cardinality_and_config_errors() {
    let cfg = ExploreConfig {
        mdot_in: vec![9.316],
        mdot_a: vec![0.429],
        ..ExploreConfig::default()
    };
    let results = explore_grid(&cfg, None).unwrap();
    for hx in [HxKind::Fixed, HxKind::Controlled] {
        assert_eq!(results.iter().filter(|r| r.hx == hx).count(), 12);
    }
    let empty = ExploreConfig {
        mdot_a: vec![],
        ..ExploreConfig::default()
    };
    assert!(matches!(
        explore_grid(&empty, None),
        Err(AircraftError::Config(_))
    ));
}

#[test]
fn unphysical_grid_points_are_recorded() {
    let cfg = ExploreConfig {
        altitudes: vec![5.0],
        thrusts: vec![20000.0],
        mdot_in: vec![2.0],
        ..ExploreConfig::default()
    };
    let results = explore_grid(&cfg, None).unwrap();
    assert!(results.iter().all(|r| !r.valid() && r.reason.is_some()));
}

#[test]
fn cost_terms() {
    let k = PhysicalConstants::default();
    let mut r = evaluate_instance(
        &k,
        &reference_op(),
        &ToleranceVector::uniform(1.0),
        HxKind::Controlled,
    )
    .unwrap();
    r.refines_spec = true;
    r.t_e = Some((300.0, 330.0));
    r.t_out = Some((278.0, 298.0));
    assert!(close(tolerance_cost(&k, &r), 0.0, 1e-12));
    r.eps = ToleranceVector::uniform(0.0);
    assert!(close(tolerance_cost(&k, &r), 7f64.sqrt(), 1e-12));
    r.t_e = Some((299.0, 330.0));
    assert!(tolerance_cost(&k, &r) >= PENALTY);
    r.t_e = Some((300.0, 330.0));
    r.refines_spec = false;
    assert!(tolerance_cost(&k, &r) >= PENALTY);
}

#[test]
fn nelder_mead_quadratic() {
    let r = nelder_mead_minimize(
        |x| x[0] * x[0] + x[1] * x[1],
        &[1.0, 1.0],
        &[(-5.0, 5.0), (-5.0, 5.0)],
        200,
    );
    assert!(r.iterations <= 200);
    assert!(r.x.iter().all(|v| v.abs() < 1e-4), "{:?}", r.x);
}

#[test]
fn nelder_mead_one_dimension() {
    let r = nelder_mead_minimize(|x| (x[0] - 3.0).powi(2), &[0.0], &[(0.0, 10.0)], 500);
    assert!(close(r.x[0], 3.0, 1e-4));
}

#[test]
fn nelder_mead_rosenbrock_agrees_with_grid_search() {
    let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
    let bounds = [(-2.0, 2.0), (-2.0, 2.0)];
    let r = nelder_mead_minimize(f, &[-1.2, 1.0], &bounds, 2000);
    let mut grid_best = (f64::INFINITY, [0.0, 0.0]);
    for i in 0..=80 {
        for j in 0..=80 {
            let p = [-2.0 + 0.05 * i as f64, -2.0 + 0.05 * j as f64];
            if f(&p) < grid_best.0 {
                grid_best = (f(&p), p);
            }
        }
    }
    assert!(r.f < 1e-3);
    assert!(
        r.x.iter()
            .zip(grid_best.1)
            .all(|(a, b)| (a - b).abs() <= 0.05),
        "{:?} vs {:?}",
        r.x,
        grid_best.1
    );
}

#[test]
fn nelder_mead_clamps_into_box() {
    let mut seen = Vec::new();
    let r = nelder_mead_minimize(
        |x| {
            seen.push(x.to_vec());
            -(x[0] + x[1])
        },
        &[0.5, 0.5],
        &[(0.0, 1.0), (0.0, 1.0)],
        100,
    );
    assert!(seen.iter().flatten().all(|v| (0.0..=1.0).contains(v)));
    assert!(close(r.x[0], 1.0, 1e-9) && close(r.x[1], 1.0, 1e-9));
}

#[test]
fn optimizer_is_deterministic() {
    let cfg = OptimizeConfig {
        max_iter: 50,
        ..OptimizeConfig::default()
    };
    let a = optimize(&cfg).unwrap();
    let b = optimize(&cfg).unwrap();
    assert_eq!(a.best.eps, b.best.eps);
    assert_eq!(a.history, b.history);
    assert!(a.best_cost <= a.start_cost);
}

#[test]
fn engine_temperature_range_matches_full_behaviour() {
    let k = PhysicalConstants::default();
    let eps = ToleranceVector::uniform(0.03);
    for hx in [HxKind::Fixed, HxKind::Controlled] {
        for mdot_in in [6.0, 9.316, 12.0] {
            for mdot_a in [0.429, 2.0, 4.0] {
                let op = OperatingPoint {
                    mdot_in,
                    mdot_a,
                    ..reference_op()
                };
                let r = evaluate_instance(&k, &op, &eps, hx).unwrap();
                let spec = make_spec(&k, &op).unwrap();
                let sud = build_sud(&k, &op, &eps, hx).unwrap();
                let full = close_with_environment(&spec, &sud)
                    .unwrap()
                    .behavior()
                    .var_bounds("T_e")
                    .unwrap();
                let (lo, hi) = r.t_e.unwrap();
                assert!(
                    close(lo, full.0, 1e-6) && close(hi, full.1, 1e-6),
                    "{hx} {mdot_in} {mdot_a}"
                );
            }
        }
    }
}
