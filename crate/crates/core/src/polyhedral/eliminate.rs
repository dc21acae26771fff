use std::collections::BTreeSet;

use super::term::{LinearTerm, VarName};
use super::termlist::{ExplosionError, TermList};

/// Upper limit on intermediate terms during elimination.
pub const EXPLOSION_LIMIT: usize = 50_000;

pub(crate) fn eliminate(
    constraints: &TermList,
    drop: &BTreeSet<VarName>,
) -> Result<TermList, ExplosionError> {
    Ok(eliminate_unreduced(constraints, drop)?.reduce())
}

/// Projection without the final redundancy removal.
pub(crate) fn eliminate_unreduced(
    constraints: &TermList,
    drop: &BTreeSet<VarName>,
) -> Result<TermList, ExplosionError> {
    let mut rows: Vec<LinearTerm> = constraints
        .iter()
        .filter(|t| !t.is_trivially_true())
        .cloned()
        .collect();
    for v in drop {
        if !rows.iter().any(|t| t.mentions(v)) {
            continue;
        }
        rows = match equality_pivot(&rows, v) {
            Some(p) => substitute(rows, p, v),
            None => pair_opposite_signs(rows, v)?,
        };
        rows = tidy(rows);
    }
    Ok(TermList::new(rows))
}

/// Index of the equality with the largest |coefficient| on `v`; first wins ties.
fn equality_pivot(rows: &[LinearTerm], v: &str) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, t) in rows.iter().enumerate() {
        if !t.is_eq() {
            continue;
        }
        let a = t.coefficient(v).abs();
        if a > 0.0 && best.is_none_or(|(_, b)| a > b) {
            best = Some((i, a));
        }
    }
    best.map(|(i, _)| i)
}

fn substitute(mut rows: Vec<LinearTerm>, pivot: usize, v: &str) -> Vec<LinearTerm> {
    let p = rows.remove(pivot);
    let a = p.coefficient(v);
    rows.into_iter()
        .map(|t| {
            let c = t.coefficient(v);
            if c == 0.0 {
                t
            } else {
                t.combine(-c / a, &p, Some(v))
            }
        })
        .collect()
}

fn pair_opposite_signs(rows: Vec<LinearTerm>, v: &str) -> Result<Vec<LinearTerm>, ExplosionError> {
    let mut out = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for t in rows {
        let c = t.coefficient(v);
        if c > 0.0 {
            pos.push(t);
        } else if c < 0.0 {
            neg.push(t);
        } else {
            out.push(t);
        }
    }
    if out.len() + pos.len() * neg.len() > EXPLOSION_LIMIT {
        return Err(ExplosionError {
            var: v.to_string(),
            limit: EXPLOSION_LIMIT,
        });
    }
    for p in &pos {
        let a_p = p.coefficient(v);
        for n in &neg {
            let a_n = n.coefficient(v);
            let combined = p.scaled(-a_n).combine(a_p, n, Some(v));
            if !combined.is_trivially_true() {
                out.push(combined);
            }
        }
    }
    Ok(out)
}

/// Drops tautologies, rescales single-variable rows to unit coefficients and
/// removes syntactic duplicates and parallel inequalities with looser bounds.
fn tidy(rows: Vec<LinearTerm>) -> Vec<LinearTerm> {
    let rows: Vec<LinearTerm> = rows
        .into_iter()
        .filter(|t| !t.is_trivially_true())
        .map(|t| t.unit_normalized())
        .collect();
    if rows.len() > 4000 {
        return rows;
    }
    let normalized: Vec<Option<LinearTerm>> = rows
        .iter()
        .map(|t| {
            let scale = t.coeffs().values().fold(0.0f64, |m, c| m.max(c.abs()));
            (scale > 0.0 && !t.is_eq()).then(|| t.scaled(1.0 / scale))
        })
        .collect();
    let mut keep = vec![true; rows.len()];
    for i in 0..rows.len() {
        if !keep[i] {
            continue;
        }
        for j in (i + 1)..rows.len() {
            if !keep[j] {
                continue;
            }
            if rows[i] == rows[j] {
                keep[j] = false;
                continue;
            }
            let (Some(a), Some(b)) = (&normalized[i], &normalized[j]) else {
                continue;
            };
            if a.coeffs().len() != b.coeffs().len()
                || !a
                    .coeffs()
                    .iter()
                    .zip(b.coeffs())
                    .all(|((v1, c1), (v2, c2))| v1 == v2 && (c1 - c2).abs() <= 1e-12)
            {
                continue;
            }
            if a.bound() <= b.bound() {
                keep[j] = false;
            } else {
                keep[i] = false;
                break;
            }
        }
    }
    rows.into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(t, _)| t)
        .collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use crate::polyhedral::{LinearTerm, TermList};

    fn leq(coeffs: &[(&str, f64)], b: f64) -> LinearTerm {
        LinearTerm::leq(coeffs.iter().map(|&(v, c)| (v, c)), b)
    }

    fn eq(coeffs: &[(&str, f64)], b: f64) -> LinearTerm {
        LinearTerm::eq(coeffs.iter().map(|&(v, c)| (v, c)), b)
    }

    fn set(vars: &[&str]) -> BTreeSet<String> {
        vars.iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn fourier_motzkin_pairs_opposite_rows() {
        let x = TermList::new(vec![
            leq(&[("o_p", 1.0), ("o", -1.0)], 0.0),
            leq(&[("o", 1.0), ("i", -1.0)], 0.0),
            leq(&[("i", 1.0), ("o", -2.0)], 2.0),
        ]);
        let r = x.eliminate(&set(&["o"])).unwrap();
        let expected = TermList::new(vec![
            leq(&[("o_p", 1.0), ("i", -1.0)], 0.0),
            leq(&[("i", -1.0)], 2.0),
        ]);
        assert!(!r.vars().contains("o"));
        assert!(r.equivalent(&expected));
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn equalities_are_substituted_first() {
        let x = TermList::new(vec![
            eq(&[("o", 1.0), ("i", -2.0)], 0.0),
            eq(&[("o_p", 1.0), ("i", -2.0)], 1.0),
            leq(&[("i", 1.0)], 2.0),
            leq(&[("i", -1.0)], 2.0),
        ]);
        let r = x.eliminate(&set(&["i"])).unwrap();
        let expected = TermList::new(vec![
            eq(&[("o_p", 1.0), ("o", -1.0)], 1.0),
            leq(&[("o", 1.0)], 4.0),
            leq(&[("o", -1.0)], 4.0),
        ]);
        assert!(r.equivalent(&expected));
        assert!(r.terms().contains(&eq(&[("o_p", 1.0), ("o", -1.0)], 1.0)));
        assert!(r.terms().contains(&leq(&[("o", 1.0)], 4.0)));
    }

    #[test]
    fn absent_variable_is_a_no_op() {
        let x = TermList::new(vec![leq(&[("x", 1.0)], 5.0)]);
        assert_eq!(x.eliminate(&set(&["y"])).unwrap(), x);
    }

    #[test]
    fn unbounded_direction_vanishes() {
        let x = TermList::new(vec![
            leq(&[("x", 1.0), ("y", 1.0)], 1.0),
            leq(&[("x", -1.0)], 0.0),
        ]);
        let r = x.eliminate(&set(&["y"])).unwrap();
        assert_eq!(r, TermList::new(vec![leq(&[("x", -1.0)], 0.0)]));
    }
}
