use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::lp::{self, Direction, LpOutcome};
use super::simplex::LpStatus;
use super::term::{LinearExpr, LinearTerm, VarName};

/// The constraints have no solution.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("infeasible region")]
pub struct InfeasibleRegion;

/// Fourier–Motzkin produced too many intermediate terms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("variable elimination exceeded {limit} intermediate terms while eliminating {var}")]
pub struct ExplosionError {
    pub var: VarName,
    pub limit: usize,
}

/// A conjunction of linear terms, i.e. a convex polyhedron.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TermList {
    terms: Vec<LinearTerm>,
}

impl TermList {
    pub fn new(terms: Vec<LinearTerm>) -> Self {
        Self { terms }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[LinearTerm] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<LinearTerm> {
        self.terms
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LinearTerm> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: LinearTerm) {
        self.terms.push(term);
    }

    /// Terms of `self` followed by terms of `other`.
    pub fn concat(&self, other: &TermList) -> TermList {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TermList { terms }
    }

    /// All variables mentioned by any term.
    pub fn vars(&self) -> BTreeSet<VarName> {
        self.terms.iter().flat_map(|t| t.vars().cloned()).collect()
    }

    pub fn mentions(&self, var: &str) -> bool {
        self.terms.iter().any(|t| t.mentions(var))
    }

    /// Equalities split into pairs of inequalities.
    pub fn expanded(&self) -> TermList {
        TermList {
            terms: self
                .terms
                .iter()
                .flat_map(|t| t.as_inequalities())
                .collect(),
        }
    }

    pub fn renamed(&self, map: &BTreeMap<VarName, VarName>) -> TermList {
        TermList {
            terms: self.terms.iter().map(|t| t.renamed(map)).collect(),
        }
    }

    /// Whether a point satisfies every term within `tol`.
    pub fn contains_point<F>(&self, mut value_of: F, tol: f64) -> bool
    where
        F: FnMut(&str) -> Option<f64>,
    {
        self.terms
            .iter()
            .all(|t| t.is_satisfied_by(&mut value_of, tol))
    }

    pub fn is_satisfiable(&self) -> bool {
        lp::is_satisfiable(&self.terms)
    }

    /// Whether every point of `self` satisfies `term`.
    pub fn implies(&self, term: &LinearTerm) -> bool {
        lp::is_implied(term, &self.terms)
    }

    /// Whether every point of `self` satisfies every term of `other`.
    pub fn implies_all(&self, other: &TermList) -> bool {
        other.terms.iter().all(|t| self.implies(t))
    }

    /// Mutual implication.
    pub fn equivalent(&self, other: &TermList) -> bool {
        self.implies_all(other) && other.implies_all(self)
    }

    pub fn optimize(&self, objective: &LinearExpr, direction: Direction) -> LpOutcome {
        lp::lp_optimize(objective, &self.terms, direction)
    }

    /// Range of `var` over the polyhedron; unbounded sides are infinite.
    pub fn var_bounds(&self, var: &str) -> Result<(f64, f64), InfeasibleRegion> {
        let objective = LinearExpr::var(var);
        let side = |direction, infinity: f64| match self.optimize(&objective, direction) {
            LpOutcome {
                status: LpStatus::Optimal,
                value: Some(v),
                ..
            } => Ok(v),
            LpOutcome {
                status: LpStatus::Unbounded,
                ..
            } => Ok(infinity),
            _ => Err(InfeasibleRegion),
        };
        let lower = side(Direction::Min, f64::NEG_INFINITY)?;
        let upper = side(Direction::Max, f64::INFINITY)?;
        Ok((lower, upper.max(lower)))
    }

    /// Drops every term implied by the terms kept so far plus the terms not
    /// yet scanned. The result is equivalent to `self`.
    pub fn reduce(&self) -> TermList {
        super::reduce::reduce_in_context(self, &TermList::empty())
    }

    /// Like [`TermList::reduce`], with `context` added to every implication check.
    pub fn reduce_in_context(&self, context: &TermList) -> TermList {
        super::reduce::reduce_in_context(self, context)
    }

    /// Projects out `drop` by Fourier–Motzkin elimination, then reduces.
    pub fn eliminate(&self, drop: &BTreeSet<VarName>) -> Result<TermList, ExplosionError> {
        super::eliminate::eliminate(self, drop)
    }

    /// [`TermList::eliminate`] without the final reduction; callers that
    /// reduce in a larger context anyway use this to skip one pass.
    pub fn eliminate_unreduced(
        &self,
        drop: &BTreeSet<VarName>,
    ) -> Result<TermList, ExplosionError> {
        super::eliminate::eliminate_unreduced(self, drop)
    }
}

impl FromIterator<LinearTerm> for TermList {
    fn from_iter<I: IntoIterator<Item = LinearTerm>>(iter: I) -> Self {
        TermList {
            terms: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a TermList {
    type Item = &'a LinearTerm;
    type IntoIter = std::slice::Iter<'a, LinearTerm>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl IntoIterator for TermList {
    type Item = LinearTerm;
    type IntoIter = std::vec::IntoIter<LinearTerm>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}
