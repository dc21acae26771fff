use std::collections::BTreeMap;

use crate::polyhedral::{LinearExpr, LinearTerm, Relation, TermList, VarName};

/// Number formatting used by the renderer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// Six significant digits, for people.
    Display,
    /// Shortest representation that parses back to the same `f64`.
    Full,
}

/// Formats a number with the given precision.
pub fn format_number(x: f64, precision: Precision) -> String {
    let x = match precision {
        Precision::Full => x,
        Precision::Display => format!("{x:.5e}").parse().unwrap_or(x),
    };
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs();
    if !(1e-5..1e15).contains(&mag) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn write_linear(coeffs: &BTreeMap<VarName, f64>, precision: Precision, out: &mut String) {
    for (k, (v, &c)) in coeffs.iter().enumerate() {
        let mag = format_number(c.abs(), precision);
        let negative = c < 0.0;
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push(' ');
        }
        out.push_str(v);
    }
}

/// Renders an expression with variables in alphabetical order and the constant last.
pub fn render_expr(expr: &LinearExpr, precision: Precision) -> String {
    let mut out = String::new();
    write_linear(expr.coeffs(), precision, &mut out);
    let k = expr.constant_part();
    if out.is_empty() {
        return format_number(k, precision);
    }
    if k != 0.0 {
        out.push_str(if k < 0.0 { " - " } else { " + " });
        out.push_str(&format_number(k.abs(), precision));
    }
    out
}

/// Renders one term as `lhs <= k` or `lhs = k`. Equalities are written with
/// a non-negative right-hand side.
pub fn render_term(term: &LinearTerm, precision: Precision) -> String {
    let flipped;
    let term = if term.is_eq() && term.bound() < 0.0 {
        flipped = term.scaled(-1.0);
        &flipped
    } else {
        term
    };
    let mut out = String::new();
    write_linear(term.coeffs(), precision, &mut out);
    if out.is_empty() {
        out.push('0');
    }
    out.push_str(match term.relation() {
        Relation::Leq => " <= ",
        Relation::Eq => " = ",
    });
    out.push_str(&format_number(term.bound(), precision));
    out
}

fn is_mirror(a: &LinearTerm, b: &LinearTerm, precision: Precision) -> bool {
    if a.relation() != Relation::Leq
        || b.relation() != Relation::Leq
        || a.coeffs().len() != b.coeffs().len()
    {
        return false;
    }
    let same = |x: f64, y: f64| match precision {
        Precision::Full => x == y,
        Precision::Display => format_number(x, precision) == format_number(y, precision),
    };
    same(a.bound(), b.bound())
        && a.coeffs()
            .iter()
            .zip(b.coeffs())
            .all(|((v1, c1), (v2, c2))| v1 == v2 && same(*c1, -*c2))
}

/// Renders a term list, re-sugaring mirrored pairs `e <= k`, `-e <= k` as `|e| <= k`.
pub fn render_with(terms: &TermList, precision: Precision) -> Vec<String> {
    let terms = terms.terms();
    let mut used = vec![false; terms.len()];
    let mut out = Vec::with_capacity(terms.len());
    for i in 0..terms.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mirror = (i + 1..terms.len()).find(|&j| {
            !used[j] && !terms[i].coeffs().is_empty() && is_mirror(&terms[i], &terms[j], precision)
        });
        match mirror {
            Some(j) => {
                used[j] = true;
                let first_positive = terms[i].coeffs().values().next().is_some_and(|c| *c > 0.0);
                let inner = if first_positive { &terms[i] } else { &terms[j] };
                let mut s = String::from("|");
                write_linear(inner.coeffs(), precision, &mut s);
                s.push_str("| <= ");
                s.push_str(&format_number(inner.bound(), precision));
                out.push(s);
            }
            None => out.push(render_term(&terms[i], precision)),
        }
    }
    out
}

/// Renders a term list for display (six significant digits).
pub fn render(terms: &TermList) -> Vec<String> {
    render_with(terms, Precision::Display)
}
