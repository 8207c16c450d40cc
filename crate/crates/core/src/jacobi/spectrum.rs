use std::fmt::Write as _;

use crate::decomposition::Decomposition;
use crate::error::Result;

use super::tridiagonal::eigenvalues_tridiagonal;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub value: f64,
    pub block_id: usize,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumTable {
    /// Sorted by value, then block id.
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Total count with multiplicity.
    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.multiplicity).sum()
    }

    /// Every eigenvalue repeated by its multiplicity, ascending.
    pub fn values(&self) -> Vec<f64> {
        self.rows
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity as usize))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,block_id,multiplicity\n");
        for r in &self.rows {
            writeln!(out, "{},{},{}", r.value, r.block_id, r.multiplicity).unwrap();
        }
        out
    }
}

/// Eigenvalues of every block's truncated Jacobi matrix, each tagged with
/// the block multiplicity.
pub fn spectrum_union(d: &Decomposition, tol: f64) -> Result<SpectrumTable> {
    let mut rows = Vec::new();
    for (block_id, block) in d.blocks.iter().enumerate() {
        let j = block.jacobi()?;
        rows.extend(eigenvalues_tridiagonal(&j, tol).into_iter().map(|value| SpectrumRow {
            value,
            block_id,
            multiplicity: block.multiplicity,
        }));
    }
    rows.sort_by(|x, y| x.value.total_cmp(&y.value).then(x.block_id.cmp(&y.block_id)));
    Ok(SpectrumTable { rows })
}

/// Largest `|x_i - y_i|` after sorting both lists; `None` when their
/// lengths differ.
pub fn max_sorted_deviation(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() {
        return None;
    }
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(f64::total_cmp);
        v
    };
    let (x, y) = (sorted(x), sorted(y));
    Some(x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}
