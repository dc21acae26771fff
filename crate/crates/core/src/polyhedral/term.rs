use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::tolerance::{approx_eq, approx_le};

/// A variable name: letters, digits and underscores, not starting with a digit.
pub type VarName = String;

/// Returns true if `name` is a valid [`VarName`].
pub fn is_valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

// Coefficients smaller than this fraction of the largest one are dropped.
const RELATIVE_ZERO: f64 = 1e-12;

fn prune(coeffs: &mut BTreeMap<VarName, f64>) {
    let scale = coeffs.values().fold(1.0f64, |m, c| m.max(c.abs()));
    coeffs.retain(|_, c| c.abs() > RELATIVE_ZERO * scale);
}

/// Relation of a [`LinearTerm`] to its bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `lhs <= bound`
    Leq,
    /// `lhs = bound`
    Eq,
}

/// An affine expression `Σ c_v·v + constant`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearExpr {
    coeffs: BTreeMap<VarName, f64>,
    constant: f64,
}

impl LinearExpr {
    /// The zero expression.
    pub fn zero() -> Self {
        Self::default()
    }

    /// A constant expression.
    pub fn constant(value: f64) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            constant: value,
        }
    }

    /// The expression `1·name`.
    pub fn var(name: impl Into<VarName>) -> Self {
        Self::from_coeffs([(name.into(), 1.0)], 0.0)
    }

    /// Builds an expression, summing repeated variables and dropping zeros.
    pub fn from_coeffs<I, S>(coeffs: I, constant: f64) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<VarName>,
    {
        let mut map = BTreeMap::new();
        for (name, c) in coeffs {
            *map.entry(name.into()).or_insert(0.0) += c;
        }
        prune(&mut map);
        Self {
            coeffs: map,
            constant,
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<VarName, f64> {
        &self.coeffs
    }

    pub fn constant_part(&self) -> f64 {
        self.constant
    }

    pub fn coefficient(&self, var: &str) -> f64 {
        self.coeffs.get(var).copied().unwrap_or(0.0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarName> {
        self.coeffs.keys()
    }

    /// `self + factor·other`.
    pub fn add_scaled(&self, factor: f64, other: &LinearExpr) -> LinearExpr {
        let mut coeffs = self.coeffs.clone();
        for (v, c) in &other.coeffs {
            *coeffs.entry(v.clone()).or_insert(0.0) += factor * c;
        }
        prune(&mut coeffs);
        LinearExpr {
            coeffs,
            constant: self.constant + factor * other.constant,
        }
    }

    pub fn scaled(&self, factor: f64) -> LinearExpr {
        LinearExpr::zero().add_scaled(factor, self)
    }

    /// Evaluates the expression; unknown variables are an error.
    pub fn evaluate<F>(&self, mut value_of: F) -> Option<f64>
    where
        F: FnMut(&str) -> Option<f64>,
    {
        let mut total = self.constant;
        for (v, c) in &self.coeffs {
            total += c * value_of(v)?;
        }
        Some(total)
    }

    /// Renames variables through `map`; unmapped names are kept.
    pub fn renamed(&self, map: &BTreeMap<VarName, VarName>) -> LinearExpr {
        LinearExpr::from_coeffs(
            self.coeffs
                .iter()
                .map(|(v, c)| (map.get(v).cloned().unwrap_or_else(|| v.clone()), *c)),
            self.constant,
        )
    }
}

/// One linear constraint `Σ c_v·v ≤ bound` or `Σ c_v·v = bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearTerm {
    coeffs: BTreeMap<VarName, f64>,
    relation: Relation,
    bound: f64,
}

impl LinearTerm {
    /// Builds a term, summing repeated variables and dropping zero coefficients.
    pub fn new<I, S>(coeffs: I, relation: Relation, bound: f64) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<VarName>,
    {
        let expr = LinearExpr::from_coeffs(coeffs, 0.0);
        Self {
            coeffs: expr.coeffs,
            relation,
            bound,
        }
    }

    pub fn leq<I, S>(coeffs: I, bound: f64) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<VarName>,
    {
        Self::new(coeffs, Relation::Leq, bound)
    }

    pub fn eq<I, S>(coeffs: I, bound: f64) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<VarName>,
    {
        Self::new(coeffs, Relation::Eq, bound)
    }

    /// `expr <relation> 0`, with the constant moved to the right-hand side.
    pub fn from_expr(expr: &LinearExpr, relation: Relation) -> Self {
        Self {
            coeffs: expr.coeffs.clone(),
            relation,
            bound: -expr.constant,
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<VarName, f64> {
        &self.coeffs
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn is_eq(&self) -> bool {
        self.relation == Relation::Eq
    }

    pub fn coefficient(&self, var: &str) -> f64 {
        self.coeffs.get(var).copied().unwrap_or(0.0)
    }

    pub fn mentions(&self, var: &str) -> bool {
        self.coeffs.contains_key(var)
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarName> {
        self.coeffs.keys()
    }

    pub fn var_set(&self) -> BTreeSet<VarName> {
        self.coeffs.keys().cloned().collect()
    }

    /// The left-hand side as an expression.
    pub fn lhs(&self) -> LinearExpr {
        LinearExpr {
            coeffs: self.coeffs.clone(),
            constant: 0.0,
        }
    }

    /// For a term without variables: `Some(true)` if it always holds,
    /// `Some(false)` if it never holds. `None` when variables are present.
    pub fn triviality(&self) -> Option<bool> {
        if !self.coeffs.is_empty() {
            return None;
        }
        Some(match self.relation {
            Relation::Leq => approx_le(0.0, self.bound),
            Relation::Eq => approx_eq(0.0, self.bound),
        })
    }

    pub fn is_trivially_true(&self) -> bool {
        self.triviality() == Some(true)
    }

    pub fn is_trivially_false(&self) -> bool {
        self.triviality() == Some(false)
    }

    /// The opposite inequality `-lhs <= -bound`, keeping the relation.
    pub fn negated(&self) -> LinearTerm {
        self.scaled(-1.0)
    }

    /// Multiplies both sides by `factor`. Only non-negative factors keep the
    /// meaning of an inequality.
    pub fn scaled(&self, factor: f64) -> LinearTerm {
        LinearTerm::new(
            self.coeffs.iter().map(|(v, c)| (v.clone(), c * factor)),
            self.relation,
            self.bound * factor,
        )
    }

    /// Splits an equality into its two inequalities; inequalities are returned as is.
    pub fn as_inequalities(&self) -> Vec<LinearTerm> {
        match self.relation {
            Relation::Leq => vec![self.clone()],
            Relation::Eq => {
                let upper = LinearTerm {
                    relation: Relation::Leq,
                    ..self.clone()
                };
                let lower = upper.negated();
                vec![upper, lower]
            }
        }
    }

    /// `self + factor·other`, removing `cancel` exactly. The result is an
    /// equality only if both operands are equalities.
    pub fn combine(&self, factor: f64, other: &LinearTerm, cancel: Option<&str>) -> LinearTerm {
        let mut coeffs = self.coeffs.clone();
        for (v, c) in &other.coeffs {
            *coeffs.entry(v.clone()).or_insert(0.0) += factor * c;
        }
        if let Some(v) = cancel {
            coeffs.remove(v);
        }
        prune(&mut coeffs);
        let relation = if self.is_eq() && other.is_eq() {
            Relation::Eq
        } else {
            Relation::Leq
        };
        LinearTerm {
            coeffs,
            relation,
            bound: self.bound + factor * other.bound,
        }
    }

    /// Left-hand side value at a point given by `value_of`.
    pub fn lhs_value<F>(&self, value_of: F) -> Option<f64>
    where
        F: FnMut(&str) -> Option<f64>,
    {
        self.lhs().evaluate(value_of)
    }

    /// Whether a point satisfies the term within `tol` (absolute).
    pub fn is_satisfied_by<F>(&self, value_of: F, tol: f64) -> bool
    where
        F: FnMut(&str) -> Option<f64>,
    {
        let Some(lhs) = self.lhs_value(value_of) else {
            return false;
        };
        match self.relation {
            Relation::Leq => lhs <= self.bound + tol,
            Relation::Eq => (lhs - self.bound).abs() <= tol,
        }
    }

    /// Renames variables through `map`; unmapped names are kept.
    pub fn renamed(&self, map: &BTreeMap<VarName, VarName>) -> LinearTerm {
        LinearTerm::new(
            self.coeffs
                .iter()
                .map(|(v, c)| (map.get(v).cloned().unwrap_or_else(|| v.clone()), *c)),
            self.relation,
            self.bound,
        )
    }

    /// Scales a single-variable term so that its coefficient is ±1.
    pub fn unit_normalized(&self) -> LinearTerm {
        if self.coeffs.len() != 1 {
            return self.clone();
        }
        let c = self.coeffs.values().next().copied().unwrap_or(1.0).abs();
        if c == 1.0 {
            self.clone()
        } else {
            self.scaled(1.0 / c)
        }
    }

    /// Same coefficients and bound up to `tol`.
    pub fn approx_same(&self, other: &LinearTerm, tol: f64) -> bool {
        self.relation == other.relation
            && self.coeffs.len() == other.coeffs.len()
            && (self.bound - other.bound).abs() <= tol
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|((v1, c1), (v2, c2))| v1 == v2 && (c1 - c2).abs() <= tol)
    }
}

impl fmt::Display for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render_term(
            self,
            crate::parser::Precision::Display,
        ))
    }
}

impl fmt::Display for LinearExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render_expr(
            self,
            crate::parser::Precision::Display,
        ))
    }
}
