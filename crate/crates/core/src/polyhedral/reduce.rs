use super::lp::{is_implied, is_satisfiable, obviously_not_implied};
use super::term::LinearTerm;
use super::termlist::TermList;

pub(crate) fn reduce_in_context(terms: &TermList, context: &TermList) -> TermList {
    let candidates: Vec<&LinearTerm> = terms.iter().filter(|t| !t.is_trivially_true()).collect();
    if let Some(falsum) = candidates.iter().find(|t| t.is_trivially_false()) {
        return TermList::new(vec![(*falsum).clone()]);
    }
    let feasible = is_satisfiable(context.iter().chain(candidates.iter().copied()));
    let mut kept = vec![true; candidates.len()];
    let mut others: Vec<&LinearTerm> = Vec::with_capacity(context.len() + candidates.len());
    for i in 0..candidates.len() {
        others.clear();
        others.extend(context.iter());
        others.extend(
            candidates
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i && kept[j])
                .map(|(_, t)| *t),
        );
        if feasible && obviously_not_implied(candidates[i], &others) {
            continue;
        }
        if is_implied(candidates[i], others.iter().copied()) {
            kept[i] = false;
        }
    }
    candidates
        .into_iter()
        .zip(kept)
        .filter(|(_, k)| *k)
        .map(|(t, _)| t.clone())
        .collect()
}
