use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::simplex::{DenseSimplex, LpProblem, LpRow, LpSolver, LpStatus, VarDomain};
use super::term::{LinearExpr, LinearTerm, Relation, VarName};
use crate::tolerance::{approx_le, tolerance};

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Min,
    Max,
}

/// Outcome of [`lp_optimize`]. `value` and `witness` are present iff the
/// status is optimal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub value: Option<f64>,
    pub witness: Option<BTreeMap<VarName, f64>>,
}

impl LpOutcome {
    fn status_only(status: LpStatus) -> Self {
        Self {
            status,
            value: None,
            witness: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

static DEFAULT_SOLVER: DenseSimplex = DenseSimplex {
    degenerate_limit: 20,
};

/// The solver used by every query that does not take one explicitly.
pub fn default_solver() -> &'static dyn LpSolver {
    &DEFAULT_SOLVER
}

/// Optimizes `objective` over the conjunction of `constraints`.
pub fn lp_optimize<'a, I>(objective: &LinearExpr, constraints: I, direction: Direction) -> LpOutcome
where
    I: IntoIterator<Item = &'a LinearTerm>,
{
    lp_optimize_with(default_solver(), objective, constraints, direction)
}

/// [`lp_optimize`] with an explicit backend.
pub fn lp_optimize_with<'a, I>(
    solver: &dyn LpSolver,
    objective: &LinearExpr,
    constraints: I,
    direction: Direction,
) -> LpOutcome
where
    I: IntoIterator<Item = &'a LinearTerm>,
{
    let rows: Vec<&LinearTerm> = constraints.into_iter().collect();
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for t in &rows {
        for v in t.vars() {
            let next = index.len();
            index.entry(v.as_str()).or_insert(next);
        }
    }
    for v in objective.vars() {
        let next = index.len();
        index.entry(v.as_str()).or_insert(next);
    }
    let names: Vec<&str> = {
        let mut names = vec![""; index.len()];
        for (name, &j) in &index {
            names[j] = name;
        }
        names
    };

    // Single-variable inequalities become variable domains when possible.
    let n = names.len();
    let mut lower: Vec<Option<(f64, usize)>> = vec![None; n];
    let mut upper: Vec<Option<(f64, usize)>> = vec![None; n];
    for (r, t) in rows.iter().enumerate() {
        if t.relation() != Relation::Leq || t.coeffs().len() != 1 {
            continue;
        }
        let (v, &c) = t.coeffs().iter().next().expect("one coefficient");
        let j = index[v.as_str()];
        let b = t.bound() / c;
        if c > 0.0 {
            if upper[j].is_none_or(|(u, _)| b < u) {
                upper[j] = Some((b, r));
            }
        } else if lower[j].is_none_or(|(l, _)| b > l) {
            lower[j] = Some((b, r));
        }
    }
    let mut domains = vec![VarDomain::Free; n];
    let mut skip = vec![false; rows.len()];
    for j in 0..n {
        match (lower[j], upper[j]) {
            (Some((lo, _)), up) => {
                domains[j] = VarDomain::AtLeast(lo);
                if let Some((hi, _)) = up {
                    if hi < lo && !approx_le(lo, hi) {
                        return LpOutcome::status_only(LpStatus::Infeasible);
                    }
                }
            }
            (None, Some((hi, _))) => domains[j] = VarDomain::AtMost(hi),
            (None, None) => {}
        }
    }
    for (r, t) in rows.iter().enumerate() {
        if t.relation() != Relation::Leq || t.coeffs().len() != 1 {
            continue;
        }
        let (v, &c) = t.coeffs().iter().next().expect("one coefficient");
        let j = index[v.as_str()];
        // Every lower singleton is implied by the domain; among upper
        // singletons only the tightest is kept when the domain is a lower bound.
        skip[r] = match domains[j] {
            VarDomain::AtLeast(_) => c < 0.0 || upper[j].is_some_and(|(_, keep)| keep != r),
            VarDomain::AtMost(_) => true,
            VarDomain::Free => false,
        };
    }

    let mut lp_rows = Vec::with_capacity(rows.len());
    for (r, t) in rows.iter().enumerate() {
        if skip[r] {
            continue;
        }
        if let Some(holds) = t.triviality() {
            if !holds {
                return LpOutcome::status_only(LpStatus::Infeasible);
            }
            continue;
        }
        lp_rows.push(LpRow {
            coeffs: t
                .coeffs()
                .iter()
                .map(|(v, &c)| (index[v.as_str()], c))
                .collect(),
            rhs: t.bound(),
            is_eq: t.is_eq(),
        });
    }

    let sign = match direction {
        Direction::Min => 1.0,
        Direction::Max => -1.0,
    };
    let mut cost = vec![0.0; n];
    for (v, &c) in objective.coeffs() {
        cost[index[v.as_str()]] = sign * c;
    }
    let problem = LpProblem {
        objective: cost,
        rows: lp_rows,
        domains,
        feasibility_tol: tolerance(),
    };
    let solution = solver.solve(&problem);
    match solution.status {
        LpStatus::Optimal => {
            let x = solution.x.expect("optimal solution has a point");
            let witness: BTreeMap<VarName, f64> = names
                .iter()
                .map(|name| (name.to_string(), x[index[name]]))
                .collect();
            let value = objective
                .evaluate(|v| witness.get(v).copied())
                .expect("objective vars are indexed");
            LpOutcome {
                status: LpStatus::Optimal,
                value: Some(value),
                witness: Some(witness),
            }
        }
        status => LpOutcome::status_only(status),
    }
}

/// Whether the conjunction of `constraints` has a solution.
pub fn is_satisfiable<'a, I>(constraints: I) -> bool
where
    I: IntoIterator<Item = &'a LinearTerm>,
{
    lp_optimize(&LinearExpr::zero(), constraints, Direction::Min).is_optimal()
}

/// Whether every point satisfying `context` satisfies `term`.
pub fn is_implied<'a, I>(term: &LinearTerm, context: I) -> bool
where
    I: IntoIterator<Item = &'a LinearTerm>,
{
    let context: Vec<&LinearTerm> = context.into_iter().collect();
    if term.is_trivially_true() {
        return true;
    }
    for part in term.as_inequalities() {
        let outcome = lp_optimize(&part.lhs(), context.iter().copied(), Direction::Max);
        match outcome.status {
            LpStatus::Infeasible => return true,
            LpStatus::Unbounded => return false,
            LpStatus::Optimal => {
                if !approx_le(outcome.value.expect("optimal value"), part.bound()) {
                    return false;
                }
            }
        }
    }
    true
}

/// Cheap sufficient test for "not implied", valid when `context` is known to
/// be satisfiable: some variable of `term` can grow in the direction that
/// increases the left-hand side without hitting any context row.
pub(crate) fn obviously_not_implied(term: &LinearTerm, context: &[&LinearTerm]) -> bool {
    term.as_inequalities().iter().any(|part| {
        part.coeffs().iter().any(|(v, &c)| {
            !context.iter().any(|row| {
                let a = row.coefficient(v);
                a != 0.0 && (row.is_eq() || a.signum() == c.signum())
            })
        })
    })
}
