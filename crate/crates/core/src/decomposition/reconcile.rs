use std::fmt;

use super::{Decomposition, JacobiBlock};
use crate::paths::Verdict;

/// Where two decompositions first disagree.
#[derive(Debug, Clone, PartialEq)]
pub enum Deviation {
    /// Operator kinds or depths differ.
    Header(String),
    /// A block (by id in the first or second decomposition) has no
    /// counterpart with the same start sphere and length.
    Unmatched { side: usize, block_id: usize, copies: u64 },
    /// Matched blocks whose coefficient at `index` differs by `amount`.
    Coefficient {
        left_block: usize,
        right_block: usize,
        field: char,
        index: usize,
        amount: f64,
    },
}

impl fmt::Display for Deviation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Header(s) => f.write_str(s),
            Self::Unmatched { side, block_id, copies } => {
                write!(f, "block {block_id} of decomposition {side} has {copies} unmatched copies")
            }
            Self::Coefficient {
                left_block,
                right_block,
                field,
                index,
                amount,
            } => write!(f, "blocks {left_block}/{right_block}: {field}[{index}] differs by {amount:e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconcileReport {
    pub verdict: Verdict,
    /// Largest coefficient difference over matched blocks.
    pub max_deviation: f64,
    /// Number of block copies matched.
    pub matched: u64,
    pub first_deviation: Option<Deviation>,
}

/// `(field, index, amount)` of the largest coefficient gap; `a` compared in
/// absolute value.
fn gap(x: &JacobiBlock, y: &JacobiBlock) -> (char, usize, f64) {
    let mut worst = ('b', 0, 0.0);
    for (i, (p, q)) in x.a.iter().zip(&y.a).enumerate() {
        let d = (p.abs() - q.abs()).abs();
        if d > worst.2 {
            worst = ('a', i, d);
        }
    }
    for (i, (p, q)) in x.b.iter().zip(&y.b).enumerate() {
        let d = (p - q).abs();
        if d > worst.2 {
            worst = ('b', i, d);
        }
    }
    worst
}

/// Matches the blocks of two decompositions up to order, grouping into
/// multiplicities, and signs of `a`. Blocks correspond only when start
/// sphere and length agree; among those the closest is taken.
pub fn reconcile(d1: &Decomposition, d2: &Decomposition, tol: f64) -> ReconcileReport {
    let mut first_deviation = None;
    if d1.kind != d2.kind || d1.depth != d2.depth {
        return ReconcileReport {
            verdict: Verdict::Fail,
            max_deviation: f64::INFINITY,
            matched: 0,
            first_deviation: Some(Deviation::Header(format!(
                "{} depth {} vs {} depth {}",
                d1.kind, d1.depth, d2.kind, d2.depth
            ))),
        };
    }
    let mut left: Vec<u64> = d1.blocks.iter().map(|b| b.multiplicity).collect();
    let mut right: Vec<u64> = d2.blocks.iter().map(|b| b.multiplicity).collect();
    let mut max_deviation: f64 = 0.0;
    let mut matched = 0;
    for (i, x) in d1.blocks.iter().enumerate() {
        while left[i] > 0 {
            let best = d2
                .blocks
                .iter()
                .enumerate()
                .filter(|&(j, y)| right[j] > 0 && y.start_sphere == x.start_sphere && y.len() == x.len())
                .map(|(j, y)| (j, gap(x, y)))
                .min_by(|p, q| p.1 .2.total_cmp(&q.1 .2));
            let Some((j, (field, index, amount))) = best else {
                break;
            };
            let take = left[i].min(right[j]);
            left[i] -= take;
            right[j] -= take;
            matched += take;
            max_deviation = max_deviation.max(amount);
            if amount >= tol && first_deviation.is_none() {
                first_deviation = Some(Deviation::Coefficient {
                    left_block: i,
                    right_block: j,
                    field,
                    index,
                    amount,
                });
            }
        }
    }
    let unmatched = left
        .iter()
        .enumerate()
        .map(|(id, &c)| (1, id, c))
        .chain(right.iter().enumerate().map(|(id, &c)| (2, id, c)))
        .find(|&(_, _, c)| c > 0);
    if let Some((side, block_id, copies)) = unmatched {
        first_deviation.get_or_insert(Deviation::Unmatched { side, block_id, copies });
    }
    ReconcileReport {
        verdict: Verdict::from_pass(unmatched.is_none() && max_deviation < tol),
        max_deviation,
        matched,
        first_deviation,
    }
}
