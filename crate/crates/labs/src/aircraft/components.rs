use std::collections::BTreeSet;

use contract_forge::{LinearTerm, PolyhedralContract, TermList};

use super::model::{
    AircraftError, ComponentKind, HxKind, OperatingPoint, PhysicalConstants, ToleranceVector,
};

/// `out` within `(1 ± eps)·Σ scale·v + (1 ± eps)·offset`; an equality when `eps = 0`.
fn band(out: &str, nominal: &[(&str, f64)], offset: f64, eps: f64, rows: &mut Vec<LinearTerm>) {
    let row = |f: f64| -> Vec<(String, f64)> {
        let mut c: Vec<(String, f64)> = vec![(out.to_string(), 1.0)];
        c.extend(nominal.iter().map(|&(v, s)| (v.to_string(), -f * s)));
        c
    };
    if eps == 0.0 {
        rows.push(LinearTerm::eq(row(1.0), offset));
    } else {
        rows.push(LinearTerm::leq(row(1.0 + eps), (1.0 + eps) * offset));
        let lower: Vec<(String, f64)> = row(1.0 - eps).into_iter().map(|(v, c)| (v, -c)).collect();
        rows.push(LinearTerm::leq(lower, -(1.0 - eps) * offset));
    }
}

/// `|to − from| ≤ half_width`; an equality when the width is zero.
fn pass_through(to: &str, from: &str, half_width: f64, rows: &mut Vec<LinearTerm>) {
    if half_width == 0.0 {
        rows.push(LinearTerm::eq([(to, 1.0), (from, -1.0)], 0.0));
    } else {
        rows.push(LinearTerm::leq([(to, 1.0), (from, -1.0)], half_width));
        rows.push(LinearTerm::leq([(to, -1.0), (from, 1.0)], half_width));
    }
}

/// The contract of one component at an operating point.
pub fn make_component(
    kind: ComponentKind,
    k: &PhysicalConstants,
    op: &OperatingPoint,
    eps: &ToleranceVector,
) -> Result<PolyhedralContract, AircraftError> {
    op.validate()?;
    let mut a = Vec::new();
    let mut g = Vec::new();
    let (inputs, outputs): (&[&str], &[&str]) = match kind {
        ComponentKind::Pump => {
            band("w_ep", &[], k.pump_power(op.mdot_in), eps.eps_ep_w, &mut g);
            pump_heating_rows(k, eps.eps_ep_t, &mut g);
            (&["T_in"], &["T_ep", "w_ep"])
        }
        ComponentKind::Load => {
            band("w_l", &[("w_nom", 1.0)], 0.0, eps.eps_l_w, &mut g);
            band("h_l", &[("w_l", 1.0 - k.eta_l)], 0.0, eps.eps_l_h, &mut g);
            (&["w_nom"], &["w_l", "h_l"])
        }
        ComponentKind::Generator => {
            let loss = 1.0 / k.eta_g - 1.0;
            band(
                "h_g",
                &[("w_ep", loss), ("w_l", loss)],
                0.0,
                eps.eps_g,
                &mut g,
            );
            (&["w_ep", "w_l"], &["h_g"])
        }
        ComponentKind::Engine => {
            band("h_e", &[], op.engine_heat(k), 0.0, &mut g);
            (&[], &["h_e"])
        }
        ComponentKind::HeatLoad => {
            let s = k.heating_per_kw(op.mdot_in);
            heat_rows(&[("h_g", s), ("h_l", s), ("h_e", s)], eps.eps_hl, &mut g);
            (&["T_ep", "h_g", "h_l", "h_e"], &["T_hl"])
        }
        ComponentKind::Splitter => {
            pass_through("T_e", "T_hl", eps.eps_s * k.t_ref, &mut g);
            pass_through("T_s", "T_hl", eps.eps_s * k.t_ref, &mut g);
            (&["T_hl"], &["T_e", "T_s"])
        }
        ComponentKind::HxFixed => {
            let gain = k.hx_gain(op);
            g.push(LinearTerm::eq(
                [("T_out", 1.0), ("T_s", gain - 1.0), ("T_a", -gain)],
                0.0,
            ));
            (&["T_s", "T_a"], &["T_out"])
        }
        ComponentKind::HxControlled => {
            a.push(LinearTerm::leq([("T_s", -1.0), ("T_a", 1.0)], -10.0));
            g.push(LinearTerm::leq([("T_out", 1.0), ("T_in", -1.0)], 5.0));
            g.push(LinearTerm::leq([("T_out", -1.0), ("T_in", 1.0)], 5.0));
            (&["T_s", "T_a", "T_in"], &["T_out"])
        }
    };
    Ok(PolyhedralContract::new(
        inputs.iter().copied(),
        outputs.iter().copied(),
        TermList::new(a),
        TermList::new(g),
    )?)
}

/// `T_ep − T_in` within `(1 ± eps)` of the nominal pump heating.
fn pump_heating_rows(k: &PhysicalConstants, eps: f64, g: &mut Vec<LinearTerm>) {
    let dt = k.pump_heating();
    if eps == 0.0 {
        g.push(LinearTerm::eq([("T_ep", 1.0), ("T_in", -1.0)], dt));
    } else {
        g.push(LinearTerm::leq(
            [("T_ep", 1.0), ("T_in", -1.0)],
            (1.0 + eps) * dt,
        ));
        g.push(LinearTerm::leq(
            [("T_ep", -1.0), ("T_in", 1.0)],
            -(1.0 - eps) * dt,
        ));
    }
}

/// `T_hl − T_ep` within `(1 ± eps)·Σ s·h`.
fn heat_rows(heats: &[(&str, f64)], eps: f64, g: &mut Vec<LinearTerm>) {
    let row = |f: f64, sign: f64| -> Vec<(String, f64)> {
        let mut c = vec![("T_hl".to_string(), sign), ("T_ep".to_string(), -sign)];
        c.extend(heats.iter().map(|&(v, s)| (v.to_string(), -sign * f * s)));
        c
    };
    if eps == 0.0 {
        g.push(LinearTerm::eq(row(1.0, 1.0), 0.0));
    } else {
        g.push(LinearTerm::leq(row(1.0 + eps, 1.0), 0.0));
        g.push(LinearTerm::leq(row(1.0 - eps, -1.0), 0.0));
    }
}

/// Components of the system under design in composition order.
pub fn sud_components(hx: HxKind) -> [ComponentKind; 7] {
    [
        ComponentKind::Pump,
        ComponentKind::Load,
        ComponentKind::Generator,
        ComponentKind::Engine,
        ComponentKind::HeatLoad,
        ComponentKind::Splitter,
        match hx {
            HxKind::Fixed => ComponentKind::HxFixed,
            HxKind::Controlled => ComponentKind::HxControlled,
        },
    ]
}

/// The system under design: components composed left to right, every
/// connection eliminated except the engine and return temperatures.
pub fn build_sud(
    k: &PhysicalConstants,
    op: &OperatingPoint,
    eps: &ToleranceVector,
    hx: HxKind,
) -> Result<PolyhedralContract, AircraftError> {
    let parts = sud_components(hx)
        .iter()
        .map(|&c| make_component(c, k, op, eps))
        .collect::<Result<Vec<_>, _>>()?;
    let mut acc = parts[0].clone();
    for (i, next) in parts.iter().enumerate().skip(1) {
        let mut keep: BTreeSet<String> = ["T_e", "T_out"].map(String::from).into_iter().collect();
        for later in &parts[i + 1..] {
            keep.extend(later.inputs().iter().cloned());
        }
        acc = acc.compose_keeping(next, &keep)?;
    }
    Ok(acc)
}
