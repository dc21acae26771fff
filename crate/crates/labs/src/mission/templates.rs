use contract_forge::{LinearTerm, PolyhedralContract, TermList};

use super::model::{Interval, MissionError, TaskHyperparameters, TaskKind, Viewpoint};

/// `name_k`.
pub fn var(name: &str, k: usize) -> String {
    format!("{name}_{k}")
}

#[derive(Default)]
struct Terms(Vec<LinearTerm>);

impl Terms {
    fn le(&mut self, coeffs: &[(&str, f64)], bound: f64) -> &mut Self {
        self.0
            .push(LinearTerm::leq(coeffs.iter().map(|&(v, c)| (v, c)), bound));
        self
    }

    fn ge(&mut self, coeffs: &[(&str, f64)], bound: f64) -> &mut Self {
        self.0.push(LinearTerm::leq(
            coeffs.iter().map(|&(v, c)| (v, -c)),
            -bound,
        ));
        self
    }

    fn eq(&mut self, coeffs: &[(&str, f64)], bound: f64) -> &mut Self {
        self.0
            .push(LinearTerm::eq(coeffs.iter().map(|&(v, c)| (v, c)), bound));
        self
    }

    fn within(&mut self, v: &str, lo: f64, hi: f64) -> &mut Self {
        self.ge(&[(v, 1.0)], lo).le(&[(v, 1.0)], hi)
    }

    /// `r.min·dt ≤ to − from ≤ r.max·dt`, or a per-event change without `dt`.
    fn change(&mut self, to: &str, from: &str, dt: Option<&str>, r: Interval) -> &mut Self {
        match dt {
            Some(dt) => self
                .le(&[(to, 1.0), (from, -1.0), (dt, -r.max)], 0.0)
                .ge(&[(to, 1.0), (from, -1.0), (dt, -r.min)], 0.0),
            None => self
                .le(&[(to, 1.0), (from, -1.0)], r.max)
                .ge(&[(to, 1.0), (from, -1.0)], r.min),
        }
    }

    fn take(&mut self) -> TermList {
        TermList::new(std::mem::take(&mut self.0))
    }
}

/// The contract of one viewpoint of one task at step `step` (1-based).
///
/// Entry variables carry index `step − 1` and exit variables index `step`;
/// the duration is `dt_step`.
pub fn task_viewpoint_contract(
    kind: TaskKind,
    viewpoint: Viewpoint,
    hyper: &TaskHyperparameters,
    step: usize,
) -> Result<PolyhedralContract, MissionError> {
    if step == 0 {
        return Err(MissionError::Config("steps are numbered from 1".into()));
    }
    let dt = var("dt", step);
    let dt = dt.as_str();
    let mut a = Terms::default();
    let mut g = Terms::default();
    let (inputs, outputs) = match viewpoint {
        Viewpoint::Power => {
            let (s0, s1) = (var("soc", step - 1), var("soc", step));
            a.ge(&[(dt, 1.0)], 0.0).ge(&[(&s0, 1.0)], 0.0);
            match kind {
                TaskKind::Chrg => g.change(&s1, &s0, Some(dt), hyper.chrg_gen),
                _ => g.change(&s0, &s1, Some(dt), consumption(kind, hyper)),
            };
            g.within(&s1, 0.0, 100.0);
            (vec![s0, dt.to_string()], vec![s1])
        }
        Viewpoint::Science => {
            let (d0, d1, c0, c1) = (
                var("d", step - 1),
                var("d", step),
                var("c", step - 1),
                var("c", step),
            );
            match kind {
                TaskKind::Dsn => {
                    a.ge(&[(dt, 1.0)], 0.0).within(&d0, 0.0, 100.0);
                    g.change(&d0, &d1, Some(dt), hyper.dsn_rate)
                        .eq(&[(&c1, 1.0), (&c0, -1.0)], 0.0);
                    (vec![d0, c0, dt.to_string()], vec![d1, c1])
                }
                TaskKind::Sbo => {
                    a.ge(&[(dt, 1.0)], 0.0)
                        .ge(&[(&c0, 1.0)], 0.0)
                        .ge(&[(&d0, 1.0)], 0.0)
                        .le(&[(&d0, 1.0), (dt, hyper.sbo_sgen.max)], 100.0);
                    g.le(&[(&d1, 1.0)], 100.0)
                        .change(&d1, &d0, Some(dt), hyper.sbo_sgen)
                        .change(&c1, &c0, Some(dt), hyper.sbo_sgen);
                    (vec![d0, c0, dt.to_string()], vec![d1, c1])
                }
                _ => {
                    g.eq(&[(&d1, 1.0), (&d0, -1.0)], 0.0)
                        .eq(&[(&c1, 1.0), (&c0, -1.0)], 0.0);
                    (vec![d0, c0], vec![d1, c1])
                }
            }
        }
        Viewpoint::Nav => {
            let (u0, u1, r0, r1) = (
                var("u", step - 1),
                var("u", step),
                var("r", step - 1),
                var("r", step),
            );
            match kind {
                TaskKind::Dsn | TaskKind::Chrg => {
                    let noise = if kind == TaskKind::Dsn {
                        hyper.dsn_noise
                    } else {
                        hyper.chrg_noise
                    };
                    a.within(&u0, 0.0, 100.0).within(&r0, 0.0, 100.0);
                    g.eq(&[(&r1, 1.0), (&r0, -1.0)], 0.0)
                        .le(&[(&u1, 1.0)], 100.0)
                        .change(&u1, &u0, None, noise);
                    (vec![u0, r0], vec![u1, r1])
                }
                TaskKind::Sbo => {
                    a.ge(&[(dt, 1.0)], 0.0).le(&[(&u0, 1.0)], 100.0);
                    g.eq(&[(&r1, 1.0), (&r0, -1.0)], 0.0)
                        .within(&u1, 0.0, 100.0)
                        .change(&u0, &u1, Some(dt), hyper.sbo_imp);
                    (vec![u0, r0, dt.to_string()], vec![u1, r1])
                }
                TaskKind::TcmH => {
                    g.eq(&[(&u1, 1.0), (&u0, -1.0)], 0.0)
                        .eq(&[(&r1, 1.0), (&r0, -1.0)], 0.0);
                    (vec![u0, r0], vec![u1, r1])
                }
                TaskKind::TcmDv => {
                    a.ge(&[(dt, 1.0)], 0.0)
                        .within(&u0, 0.0, 100.0)
                        .le(&[(&r0, 1.0)], 100.0);
                    g.ge(&[(&r1, 1.0)], 0.0)
                        .within(&u1, 0.0, 100.0)
                        .change(&r1, &r0, Some(dt), hyper.tcm_dv_imp)
                        .change(&u1, &u0, Some(dt), hyper.tcm_dv_noise);
                    (vec![u0, r0, dt.to_string()], vec![u1, r1])
                }
            }
        }
    };
    Ok(PolyhedralContract::new(
        inputs,
        outputs,
        a.take(),
        g.take(),
    )?)
}

fn consumption(kind: TaskKind, hyper: &TaskHyperparameters) -> Interval {
    match kind {
        TaskKind::Dsn => hyper.dsn_cons,
        TaskKind::Sbo => hyper.sbo_cons,
        TaskKind::TcmH => hyper.tcm_h_cons,
        TaskKind::TcmDv => hyper.tcm_dv_cons,
        TaskKind::Chrg => hyper.chrg_gen,
    }
}
