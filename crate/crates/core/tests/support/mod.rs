#![allow(dead_code)]

use std::collections::BTreeSet;

use contract_forge::parser::{render_with, Precision};
use contract_forge::{parse_constraints, LinearTerm, PolyhedralContract, Relation, TermList};
use proptest::prelude::*;

pub const TOL: f64 = 1e-6;
const VARS: [&str; 4] = ["w", "x", "y", "z"];

fn int_term(vars: &'static [&'static str]) -> impl Strategy<Value = LinearTerm> {
    (
        proptest::collection::vec(-5i32..=5, vars.len()),
        -10i32..=10,
        prop_oneof![5 => Just(Relation::Leq), 1 => Just(Relation::Eq)],
    )
        .prop_map(move |(c, b, rel)| {
            LinearTerm::new(
                vars.iter().zip(c).map(|(v, c)| (*v, c as f64)),
                rel,
                b as f64,
            )
        })
}

/// Term lists over at most three variables with integer coefficients in
/// `[−5, 5]`, paired with the variable to project out.
pub fn projection_case() -> impl Strategy<Value = (TermList, String)> {
    let vars: &'static [&'static str] = &VARS[1..];
    (proptest::collection::vec(int_term(vars), 1..=5), 0usize..3)
        .prop_map(|(terms, d)| (TermList::new(terms), VARS[1 + d].to_string()))
}

/// Margin by which `point` (with `drop` chosen freely) satisfies `terms`;
/// negative when no value of `drop` works.
fn projection_margin(terms: &TermList, drop: &str, value: &dyn Fn(&str) -> f64) -> f64 {
    let rest = |t: &LinearTerm| -> f64 {
        t.coeffs()
            .iter()
            .filter(|(v, _)| v.as_str() != drop)
            .map(|(v, c)| c * value(v))
            .sum()
    };
    let slack = |t: &LinearTerm, d: f64| -> f64 {
        let lhs = rest(t) + t.coefficient(drop) * d;
        match t.relation() {
            Relation::Leq => t.bound() - lhs,
            Relation::Eq => -(lhs - t.bound()).abs(),
        }
    };
    if let Some(p) = terms
        .iter()
        .find(|t| t.is_eq() && t.coefficient(drop) != 0.0)
    {
        let d = (p.bound() - rest(p)) / p.coefficient(drop);
        return terms
            .iter()
            .filter(|t| !std::ptr::eq(*t, p))
            .map(|t| slack(t, d))
            .fold(f64::INFINITY, f64::min);
    }
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut margin = f64::INFINITY;
    for t in terms.iter() {
        let a = t.coefficient(drop);
        if a == 0.0 {
            margin = margin.min(slack(t, 0.0));
        } else if a > 0.0 {
            hi = hi.min((t.bound() - rest(t)) / a);
        } else {
            lo = lo.max((t.bound() - rest(t)) / a);
        }
    }
    margin.min(hi - lo)
}

/// Compares `eliminate` with a pointwise oracle on a grid over the kept
/// variables. Points within `1e-3` of the projection's boundary are skipped.
pub fn check_projection(terms: &TermList, drop: &str) -> Result<(), String> {
    let kept: Vec<String> = terms.vars().into_iter().filter(|v| v != drop).collect();
    let projected = terms
        .eliminate(&BTreeSet::from([drop.to_string()]))
        .map_err(|e| e.to_string())?;
    if projected.mentions(drop) {
        return Err(format!("{drop} survives elimination"));
    }
    let axis: Vec<f64> = (0..=24).map(|k| -6.0 + 0.5 * k as f64).collect();
    let mut point = vec![0usize; kept.len()];
    loop {
        let value = |v: &str| {
            kept.iter()
                .position(|k| k == v)
                .map_or(0.0, |i| axis[point[i]])
        };
        let margin = projection_margin(terms, drop, &value);
        if margin.abs() > 1e-3 {
            let inside = projected.contains_point(|v| Some(value(v)), TOL);
            if inside != (margin > 0.0) {
                let at: Vec<String> = kept.iter().map(|v| format!("{v}={}", value(v))).collect();
                return Err(format!(
                    "at {at:?}: oracle margin {margin}, projection says {inside}; input {:?} projected {:?}",
                    contract_forge::render(terms),
                    contract_forge::render(&projected)
                ));
            }
        }
        let mut i = 0;
        loop {
            if i == point.len() {
                return Ok(());
            }
            point[i] += 1;
            if point[i] < axis.len() {
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

/// Term lists over at most four variables with coefficients in `[−10, 10]`
/// on a 0.01 grid.
pub fn round_trip_case() -> impl Strategy<Value = TermList> {
    let term = (
        proptest::collection::vec(prop_oneof![1 => Just(0i32), 2 => -1000i32..=1000], 4),
        -1000i32..=1000,
        prop_oneof![4 => Just(Relation::Leq), 1 => Just(Relation::Eq)],
    )
        .prop_map(|(c, b, rel)| {
            LinearTerm::new(
                VARS.iter().zip(c).map(|(v, c)| (*v, c as f64 / 100.0)),
                rel,
                b as f64 / 100.0,
            )
        });
    proptest::collection::vec(term, 1..=6).prop_map(TermList::new)
}

fn same_terms(a: &TermList, b: &TermList) -> bool {
    let a = a.expanded();
    let b = b.expanded();
    a.iter().all(|t| b.iter().any(|u| t.approx_same(u, 1e-9)))
        && b.iter().all(|t| a.iter().any(|u| t.approx_same(u, 1e-9)))
}

/// `parse(render(X))` has the same terms as `X` and is equivalent to it, in
/// both display and full precision.
pub fn check_round_trip(terms: &TermList) -> Result<(), String> {
    for precision in [Precision::Display, Precision::Full] {
        let lines = render_with(terms, precision);
        let back = parse_constraints(&lines).map_err(|e| format!("{lines:?}: {e}"))?;
        if !same_terms(terms, &back) || !back.equivalent(terms) {
            return Err(format!(
                "{lines:?} reparsed as {:?}",
                contract_forge::render(&back)
            ));
        }
    }
    Ok(())
}

/// Two contracts connected through one variable `o`; `c1` reads `i` (and
/// maybe `j`), `c2` reads `o` and writes `p`.
pub fn compose_case() -> impl Strategy<Value = (PolyhedralContract, PolyhedralContract)> {
    (
        1i32..=3,
        any::<bool>(),
        (-2i32..=2, 0i32..=3, -2i32..=2, 0i32..=3, -1i32..=1),
        (0i32..=8, 0i32..=8),
        (-2i32..=2, 0i32..=3, -2i32..=2, 0i32..=3),
    )
        .prop_map(|(m, with_j, (a, b, c, d, e), (u, l), (f, g, h, k))| {
            let mut inputs = vec!["i"];
            let mut a1 = vec![format!("|i| <= {m}")];
            let mut g1 = vec![format!("o - {a} i <= {b}"), format!("-o + {c} i <= {d}")];
            if with_j {
                inputs.push("j");
                a1.push("|j| <= 2".into());
                g1.push(format!("o + {e} j <= {}", b + 2));
            }
            let c1 = contract(&inputs, &["o"], &a1, &g1);
            let a2 = [format!("o <= {u}"), format!("-o <= {l}")];
            let g2 = [format!("p - {f} o <= {g}"), format!("-p + {h} o <= {k}")];
            let c2 = contract(&["o"], &["p"], &a2, &g2);
            (c1, c2)
        })
}

/// Samples a grid over all variables: points satisfying `A_sys ∪ G1 ∪ G2`
/// satisfy `G_sys`, and points satisfying `A_sys ∪ G1` satisfy `A2`.
/// Returns whether the pair composed.
pub fn check_compose_soundness(
    c1: &PolyhedralContract,
    c2: &PolyhedralContract,
) -> Result<bool, String> {
    let Ok(sys) = c1.compose(c2) else {
        return Ok(false);
    };
    if sys.guarantees().mentions("o") || sys.assumptions().mentions("o") {
        return Err("connection variable survives".into());
    }
    let vars: Vec<String> = c1
        .behavior()
        .concat(&c2.behavior())
        .vars()
        .into_iter()
        .collect();
    let axis: Vec<f64> = (0..=16).map(|k| -4.0 + 0.5 * k as f64).collect();
    let upstream = sys.assumptions().concat(c1.guarantees());
    let full = upstream.concat(c2.guarantees());
    let mut point = vec![0usize; vars.len()];
    loop {
        let value = |v: &str| vars.iter().position(|k| k == v).map(|i| axis[point[i]]);
        if upstream.contains_point(value, TOL) && !c2.assumptions().contains_point(value, TOL) {
            return Err(format!("A2 violated at {point:?} over {vars:?}"));
        }
        if full.contains_point(value, TOL) && !sys.guarantees().contains_point(value, TOL) {
            return Err(format!("G_sys violated at {point:?} over {vars:?}"));
        }
        let mut i = 0;
        loop {
            if i == point.len() {
                return Ok(true);
            }
            point[i] += 1;
            if point[i] < axis.len() {
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

/// Builds a contract from owned constraint strings.
pub fn contract(
    inputs: &[&str],
    outputs: &[&str],
    a: &[String],
    g: &[String],
) -> PolyhedralContract {
    let i: Vec<String> = inputs.iter().map(|s| s.to_string()).collect();
    let o: Vec<String> = outputs.iter().map(|s| s.to_string()).collect();
    PolyhedralContract::from_strings(&i, &o, a, g).unwrap()
}

fn fixed(inputs: &[&str], outputs: &[&str], a: &[&str], g: &[&str]) -> PolyhedralContract {
    PolyhedralContract::from_strings(inputs, outputs, a, g).unwrap()
}

/// A component `i -> o` and a downstream consumer `o -> o_p`.
pub fn series_pair() -> (PolyhedralContract, PolyhedralContract) {
    (
        fixed(
            &["i"],
            &["o"],
            &["|i| <= 2"],
            &["o - i <= 0", "i - 2o <= 2"],
        ),
        fixed(
            &["o"],
            &["o_p"],
            &["o <= 0.2", "-o <= 1"],
            &["o_p - o <= 0"],
        ),
    )
}

/// An upstream component whose guarantee `|o| <= 3` is too weak for the consumer.
pub fn weak_upstream() -> PolyhedralContract {
    fixed(&["i"], &["o"], &["|i| <= 2"], &["|o| <= 3"])
}

/// A top-level contract and a partial implementation doubling its input.
pub fn quotient_pair() -> (PolyhedralContract, PolyhedralContract) {
    (
        fixed(&["i"], &["o_p"], &["|i| <= 1"], &["o_p - 2i = 1"]),
        fixed(&["i"], &["o"], &["|i| <= 2"], &["o - 2i = 0"]),
    )
}

/// A functional and a power viewpoint of one component.
pub fn viewpoints() -> (PolyhedralContract, PolyhedralContract) {
    (
        fixed(&["i"], &["o"], &["|i| <= 2"], &["o - 2i = 1"]),
        fixed(&["temp"], &["P"], &["temp <= 90"], &["P <= 2.1"]),
    )
}

pub fn terms(lines: &[&str]) -> TermList {
    parse_constraints(lines).unwrap()
}
