//! Sparse fraction-free column reduction over ℤ ⊂ ℚ.
//!
//! Columns are reduced left to right within each batch; a column is reduced
//! against the earlier column sharing its lowest nonzero row by the
//! fraction-free update `c ← a·c − b·c_k` followed by division by the content.
//! The change-of-basis columns `V` are tracked alongside, so zero columns of
//! `R = D·V` yield cycles. Batches are processed in order and every pivot row
//! of an earlier batch is cleared (skipped) in later batches.

use std::collections::HashMap;

use num_integer::Integer;

use super::CohomologyError;

pub type IntColumn = Vec<(usize, i64)>;

#[derive(Debug, Default)]
pub struct Reduction {
    /// Pivot row → reducing column.
    pub pivots: HashMap<usize, usize>,
    /// Columns whose reduced form is zero and were not cleared, with their
    /// `V` column.
    pub zero_columns: HashMap<usize, IntColumn>,
    /// Largest absolute coefficient seen during the reduction.
    pub max_entry: i64,
}

fn overflow() -> CohomologyError {
    CohomologyError::CoefficientOverflow
}

/// `a·x − b·y` for sorted sparse columns.
fn combine(a: i64, x: &IntColumn, b: i64, y: &IntColumn) -> Result<IntColumn, CohomologyError> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a.checked_mul(x[i].1).ok_or_else(overflow)?));
            i += 1;
        } else if take_y {
            out.push((y[j].0, b.checked_mul(y[j].1).ok_or_else(overflow)?.checked_neg().ok_or_else(overflow)?));
            j += 1;
        } else {
            let v = a
                .checked_mul(x[i].1)
                .and_then(|p| b.checked_mul(y[j].1).and_then(|q| p.checked_sub(q)))
                .ok_or_else(overflow)?;
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

fn content(cols: &[&IntColumn]) -> i64 {
    cols.iter().flat_map(|c| c.iter()).fold(0i64, |g, &(_, v)| g.gcd(&v))
}

fn divide(col: &mut IntColumn, g: i64) {
    if g > 1 {
        for e in col.iter_mut() {
            e.1 /= g;
        }
    }
}

/// Reduces `columns` (sorted sparse, indexed by global position) batch by
/// batch. `V` columns are kept for every processed column.
pub fn reduce(columns: &[IntColumn], batches: &[Vec<usize>]) -> Result<Reduction, CohomologyError> {
    let mut out = Reduction::default();
    let mut reduced: HashMap<usize, (IntColumn, IntColumn)> = HashMap::new();
    for batch in batches {
        for &j in batch {
            if out.pivots.contains_key(&j) {
                continue;
            }
            let mut r = columns[j].clone();
            let mut v: IntColumn = vec![(j, 1)];
            while let Some(&(low, b)) = r.last() {
                let Some(&k) = out.pivots.get(&low) else { break };
                let (rk, vk) = &reduced[&k];
                let a = rk.last().expect("pivot columns are nonzero").1;
                let g = a.gcd(&b);
                let (a, b) = (a / g, b / g);
                r = combine(a, &r, b, rk)?;
                v = combine(a, &v, b, vk)?;
                let g = content(&[&r, &v]);
                divide(&mut r, g);
                divide(&mut v, g);
                for &(_, x) in r.iter().chain(v.iter()) {
                    out.max_entry = out.max_entry.max(x.checked_abs().ok_or_else(overflow)?);
                }
            }
            match r.last() {
                None => {
                    out.zero_columns.insert(j, v);
                }
                Some(&(low, _)) => {
                    out.pivots.insert(low, j);
                    reduced.insert(j, (r, v));
                }
            }
        }
    }
    Ok(out)
}
