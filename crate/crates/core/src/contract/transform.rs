use std::collections::BTreeSet;

use thiserror::Error;

use crate::polyhedral::{LinearTerm, TermList, VarName};

/// No sufficient condition free of the dropped variables was found.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("could not discharge '{term}' over {vars:?}")]
pub struct DischargeFailure {
    pub term: LinearTerm,
    pub vars: BTreeSet<VarName>,
}

// Search nodes explored per term before giving up.
const NODE_LIMIT: usize = 100_000;

/// Replaces `term` by conditions free of `drop` that, together with
/// `context`, imply it.
///
/// A variable with a positive coefficient is replaced through a context row
/// bounding it from above (a row with a positive coefficient on it), a
/// negative one through a row bounding it from below; equalities work both
/// ways. Every substitution chain of length at most `|drop|` is explored and
/// the weakest fully eliminated candidates are returned. A direct rewrite
/// through one row relating several variables is tried first; the full search
/// runs only when no such rewrite yields a candidate.
pub fn transform_sufficient(
    term: &LinearTerm,
    drop: &BTreeSet<VarName>,
    context: &TermList,
) -> Result<TermList, DischargeFailure> {
    let mut out = Vec::new();
    for part in term.as_inequalities() {
        if !part.vars().any(|v| drop.contains(v)) {
            out.push(part);
            continue;
        }
        let mut search = Search {
            drop,
            context,
            candidates: Vec::new(),
            nodes: 0,
            discharged: false,
        };
        let mut used: Vec<bool> = context.iter().map(|row| row.coeffs().len() < 2).collect();
        search.explore(part.clone(), &mut used, 1);
        if !search.discharged && search.candidates.is_empty() {
            search.nodes = 0;
            let mut used = vec![false; context.len()];
            search.explore(part.clone(), &mut used, drop.len());
        }
        if search.discharged {
            continue;
        }
        if search.candidates.is_empty() {
            return Err(DischargeFailure {
                term: term.clone(),
                vars: term.vars().filter(|v| drop.contains(*v)).cloned().collect(),
            });
        }
        out.extend(weakest(search.candidates));
    }
    Ok(TermList::new(out))
}

struct Search<'a> {
    drop: &'a BTreeSet<VarName>,
    context: &'a TermList,
    candidates: Vec<LinearTerm>,
    nodes: usize,
    discharged: bool,
}

impl Search<'_> {
    fn explore(&mut self, cand: LinearTerm, used: &mut [bool], depth_left: usize) {
        if self.discharged || self.nodes >= NODE_LIMIT {
            return;
        }
        self.nodes += 1;
        let Some(v) = cand.vars().find(|v| self.drop.contains(*v)).cloned() else {
            match cand.triviality() {
                Some(true) => self.discharged = true,
                Some(false) => {}
                None => self.candidates.push(cand),
            }
            return;
        };
        if depth_left == 0 {
            return;
        }
        let c = cand.coefficient(&v);
        for (k, row) in self.context.iter().enumerate() {
            if used[k] {
                continue;
            }
            let a = row.coefficient(&v);
            if a == 0.0 || !(row.is_eq() || a.signum() == c.signum()) {
                continue;
            }
            let next = cand.combine(-c / a, row, Some(&v));
            used[k] = true;
            self.explore(next, used, depth_left - 1);
            used[k] = false;
        }
    }
}

/// Removes duplicates, then every candidate that implies another one.
fn weakest(candidates: Vec<LinearTerm>) -> Vec<LinearTerm> {
    let implies = |x: &LinearTerm, y: &LinearTerm| TermList::new(vec![x.clone()]).implies(y);
    let mut unique: Vec<LinearTerm> = Vec::new();
    for c in candidates {
        if !unique.iter().any(|u| implies(u, &c) && implies(&c, u)) {
            unique.push(c);
        }
    }
    let keep: Vec<bool> = (0..unique.len())
        .map(|i| !(0..unique.len()).any(|j| j != i && implies(&unique[i], &unique[j])))
        .collect();
    unique
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(t, _)| t)
        .collect()
}
