use crate::error::{Error, Result};
use crate::graph::LayeredGraph;
use crate::intmat::IntMatrix;
use crate::operator::laplacian_exact;
use crate::paths::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenfunctionCheck {
    pub sphere: usize,
    /// `s_{n-1} + s_{n+1}`.
    pub eigenvalue: i64,
    /// Number of basis vectors tested, `s_n - 1`.
    pub vectors: usize,
    /// Largest entry of `L phi - eigenvalue * phi` over the tested vectors.
    pub max_residual: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenfunctionReport {
    pub verdict: Verdict,
    pub checks: Vec<EigenfunctionCheck>,
}

fn antitree_check(g: &LayeredGraph) -> Result<()> {
    for n in 0..g.depth() {
        let e = g.cross(n);
        if *e != IntMatrix::ones(e.rows(), e.cols()) {
            return Err(Error::NotAntitree(format!("E_{n} is not complete")));
        }
    }
    if let Some(n) = (0..=g.depth()).find(|&n| !g.intra(n).is_zero()) {
        return Err(Error::NotAntitree(format!("sphere {n} has inner edges")));
    }
    let out = g.outward_degrees();
    if out.iter().any(|&d| d != out[0]) {
        return Err(Error::NotAntitree("boundary outward degrees differ".into()));
    }
    Ok(())
}

/// For every sphere `n >= 1` checks that the zero-sum vectors
/// `delta_0 - delta_i` on `S_n` satisfy `L phi = (s_{n-1} + s_{n+1}) phi`
/// in exact integer arithmetic, with `s_{N+1}` the boundary outward degree.
pub fn verify_finitely_supported_eigenfunctions(g: &LayeredGraph) -> Result<EigenfunctionReport> {
    antitree_check(g)?;
    let l = laplacian_exact(g);
    let size = g.vertex_count();
    let mut checks = Vec::new();
    for n in 1..=g.depth() {
        let next = if n == g.depth() {
            g.outward_degrees()[0] as i64
        } else {
            g.sphere_size(n + 1) as i64
        };
        let eigenvalue = g.sphere_size(n - 1) as i64 + next;
        let off = g.offset(n);
        let mut max_residual = 0i64;
        for i in 1..g.sphere_size(n) {
            let mut phi = vec![0i64; size];
            phi[off] = 1;
            phi[off + i] = -1;
            for (r, &p) in phi.iter().enumerate() {
                let lphi: i64 = (0..size).map(|c| l[(r, c)] * phi[c]).sum();
                max_residual = max_residual.max((lphi - eigenvalue * p).abs());
            }
        }
        checks.push(EigenfunctionCheck {
            sphere: n,
            eigenvalue,
            vectors: g.sphere_size(n) - 1,
            max_residual,
        });
    }
    let verdict = Verdict::from_pass(checks.iter().all(|c| c.max_residual == 0));
    Ok(EigenfunctionReport { verdict, checks })
}
