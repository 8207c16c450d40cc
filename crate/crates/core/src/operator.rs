//! Compressions of the adjacency matrix and the Laplacians to a ball.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::LayeredGraph;
use crate::intmat::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Adjacency,
    Laplacian,
    /// `I - D^{-1/2} A D^{-1/2}`, unitarily equivalent to the normalized
    /// Laplacian acting on `l^2(G, deg)`.
    Normalized,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 3] = [Self::Adjacency, Self::Laplacian, Self::Normalized];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Adjacency => "adjacency",
            Self::Laplacian => "laplacian",
            Self::Normalized => "normalized",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjacency" => Ok(Self::Adjacency),
            "laplacian" => Ok(Self::Laplacian),
            "normalized" => Ok(Self::Normalized),
            other => Err(Error::InvalidArgument(format!("unknown operator kind {other:?}"))),
        }
    }
}

/// Adjacency matrix of the ball in sphere-major vertex order.
pub fn adjacency_exact(g: &LayeredGraph) -> IntMatrix {
    let n = g.vertex_count();
    let mut a = IntMatrix::zeros(n, n);
    for s in 0..=g.depth() {
        let off = g.offset(s);
        let v = g.intra(s);
        for i in 0..v.rows() {
            for j in 0..v.cols() {
                a[(off + i, off + j)] = v[(i, j)];
            }
        }
    }
    for s in 0..g.depth() {
        let (lo, hi) = (g.offset(s), g.offset(s + 1));
        let e = g.cross(s);
        for i in 0..e.rows() {
            for j in 0..e.cols() {
                a[(hi + i, lo + j)] = e[(i, j)];
                a[(lo + j, hi + i)] = e[(i, j)];
            }
        }
    }
    a
}

/// Compressed Laplacian `D - A` with ambient degrees on the boundary.
pub fn laplacian_exact(g: &LayeredGraph) -> IntMatrix {
    let mut l = adjacency_exact(g);
    let degrees = g.degrees();
    for i in 0..l.rows() {
        for j in 0..l.cols() {
            l[(i, j)] = -l[(i, j)];
        }
        l[(i, i)] += degrees[i] as i64;
    }
    l
}

pub fn compress_operator(g: &LayeredGraph, kind: OperatorKind) -> Result<DMatrix<f64>> {
    match kind {
        OperatorKind::Adjacency => Ok(adjacency_exact(g).to_f64()),
        OperatorKind::Laplacian => Ok(laplacian_exact(g).to_f64()),
        OperatorKind::Normalized => {
            let degrees = g.degrees();
            if let Some(pos) = degrees.iter().position(|&d| d == 0) {
                let v = g.vertex_at(pos);
                return Err(Error::ZeroDegree {
                    sphere: v.sphere,
                    index: v.index,
                });
            }
            let a = adjacency_exact(g);
            let scale: Vec<f64> = degrees.iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
            let n = g.vertex_count();
            Ok(DMatrix::from_fn(n, n, |i, j| {
                let off = -(a[(i, j)] as f64) * scale[i] * scale[j];
                if i == j {
                    1.0 + off
                } else {
                    off
                }
            }))
        }
    }
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn dense_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}
