//! Direct-sum decompositions of ball operators into Jacobi blocks.
//!
//! Each block lives on a cyclic subspace spanned by vectors
//! `phi_0, phi_1, ...` with `phi_k` supported on sphere `start + k`. The
//! operator acts on that basis as the Jacobi matrix with diagonal `b` and
//! off-diagonal `a`, and the blocks together span the whole ball.

mod closed_form;
mod eigenfunction;
mod generic;
mod reconcile;

use std::fmt::Write as _;

pub use closed_form::{antitree_closed_form, tree_cs_block, tree_cs_closed_form};
pub use eigenfunction::{verify_finitely_supported_eigenfunctions, EigenfunctionCheck, EigenfunctionReport};
pub use generic::{tridiagonalize, tridiagonalize_with_chains, Chain, DEFAULT_TOL};
pub use reconcile::{reconcile, Deviation, ReconcileReport};

use crate::error::Result;
use crate::jacobi::JacobiMatrix;
use crate::operator::OperatorKind;

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiBlock {
    pub start_sphere: usize,
    /// Seed vectors on `S_start`, one per represented copy. Empty for
    /// closed forms, which do not construct a basis.
    pub seeds: Vec<Vec<f64>>,
    /// Off-diagonal, length `len - 1`, positive.
    pub a: Vec<f64>,
    /// Diagonal, length `len`.
    pub b: Vec<f64>,
    pub multiplicity: u64,
}

impl JacobiBlock {
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn scalar(start_sphere: usize, value: f64, multiplicity: u64) -> Self {
        Self {
            start_sphere,
            seeds: Vec::new(),
            a: Vec::new(),
            b: vec![value],
            multiplicity,
        }
    }

    pub fn jacobi(&self) -> Result<JacobiMatrix> {
        JacobiMatrix::new(self.b.clone(), self.a.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub kind: OperatorKind,
    pub depth: usize,
    pub blocks: Vec<JacobiBlock>,
}

impl Decomposition {
    /// `sum multiplicity * length`, or `None` on overflow.
    pub fn dimension(&self) -> Option<u64> {
        self.blocks
            .iter()
            .try_fold(0u64, |acc, b| acc.checked_add(b.multiplicity.checked_mul(b.len() as u64)?))
    }

    /// Two tables separated by a blank line: blocks
    /// `(block_id, start_sphere, multiplicity, length)` and coefficients
    /// `(block_id, index, a, b)`; `a` is empty on the last row of a block.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("block_id,start_sphere,multiplicity,length\n");
        for (id, b) in self.blocks.iter().enumerate() {
            writeln!(out, "{id},{},{},{}", b.start_sphere, b.multiplicity, b.len()).unwrap();
        }
        out.push_str("\nblock_id,index,a,b\n");
        for (id, blk) in self.blocks.iter().enumerate() {
            for (i, b) in blk.b.iter().enumerate() {
                match blk.a.get(i) {
                    Some(a) => writeln!(out, "{id},{i},{a},{b}").unwrap(),
                    None => writeln!(out, "{id},{i},,{b}").unwrap(),
                }
            }
        }
        out
    }
}
