use std::collections::{HashMap, VecDeque};

use super::action::SimplicialGroupAction;
use super::cochain::{push_chain, Chain};
use super::complex::SimplicialComplex;
use super::CohomologyError;

/// Coherently oriented facets of a closed pseudomanifold, as a top chain.
///
/// Orientations are propagated across ridges: the two facets sharing a
/// ridge must induce opposite orientations on it.
pub fn fundamental_cycle(complex: &SimplicialComplex) -> Result<Chain, CohomologyError> {
    let d = complex.dim();
    if !complex.is_pure() {
        return Err(CohomologyError::NotPseudomanifold("complex is not pure".into()));
    }
    let top = complex.count(d);
    if d == 0 {
        return if top == 1 { Ok(vec![(0, 1)]) } else { Err(CohomologyError::NotPseudomanifold("disconnected points".into())) };
    }
    // ridge → [(facet, sign of ridge in ∂facet)]
    let mut ridges: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
    for (f, col) in complex.boundary_columns(d).into_iter().enumerate() {
        for (r, s) in col {
            ridges.entry(r).or_default().push((f, s));
        }
    }
    if ridges.len() != complex.count(d - 1) {
        return Err(CohomologyError::NotPseudomanifold("some ridge lies in no facet".into()));
    }
    let mut ridge_list: Vec<(&usize, &Vec<(usize, i64)>)> = ridges.iter().collect();
    ridge_list.sort_unstable_by_key(|(r, _)| **r);
    let mut adjacency: Vec<Vec<(usize, i64, i64)>> = vec![Vec::new(); top];
    for (r, cofaces) in ridge_list {
        if cofaces.len() != 2 {
            let ridge = &complex.simplices(d - 1)[*r];
            return Err(CohomologyError::NotPseudomanifold(format!(
                "ridge {ridge:?} lies in {} facets",
                cofaces.len()
            )));
        }
        let (a, sa) = cofaces[0];
        let (b, sb) = cofaces[1];
        adjacency[a].push((b, sa, sb));
        adjacency[b].push((a, sb, sa));
    }
    let mut orient = vec![0i64; top];
    for start in 0..top {
        if orient[start] != 0 {
            continue;
        }
        orient[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            for &(g, sf, sg) in &adjacency[f] {
                // orient[f]·sf + orient[g]·sg = 0
                let want = -orient[f] * sf * sg;
                if orient[g] == 0 {
                    orient[g] = want;
                    queue.push_back(g);
                } else if orient[g] != want {
                    return Err(CohomologyError::NonOrientable);
                }
            }
        }
    }
    Ok(orient.into_iter().enumerate().collect())
}

/// `ε_g` with `g_*[M] = ε_g [M]` for every group element.
pub fn orientation_character(
    complex: &SimplicialComplex,
    action: &SimplicialGroupAction,
    cycle: &Chain,
) -> Result<Vec<i64>, CohomologyError> {
    let d = complex.dim();
    let negated: Chain = cycle.iter().map(|&(i, v)| (i, -v)).collect();
    action
        .elements()
        .iter()
        .map(|g| {
            let pushed = push_chain(complex, d, g, cycle).ok_or_else(|| CohomologyError::NotSimplicial(format!("{g:?}")))?;
            if pushed == *cycle {
                Ok(1)
            } else if pushed == negated {
                Ok(-1)
            } else {
                Err(CohomologyError::NotPseudomanifold("action does not preserve the fundamental class up to sign".into()))
            }
        })
        .collect()
}

/// The fundamental cycle of `X`, provided `Γ` preserves its orientation so
/// that it descends to `Γ\X`.
pub fn quotient_fundamental_cycle(
    complex: &SimplicialComplex,
    action: &SimplicialGroupAction,
) -> Result<Chain, CohomologyError> {
    let cycle = fundamental_cycle(complex)?;
    if orientation_character(complex, action, &cycle)?.iter().any(|&e| e < 0) {
        return Err(CohomologyError::NonOrientable);
    }
    Ok(cycle)
}
