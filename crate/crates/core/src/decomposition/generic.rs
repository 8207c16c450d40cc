use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::LayeredGraph;
use crate::operator::{compress_operator, OperatorKind};

use super::{Decomposition, JacobiBlock};

/// Default tolerance for residuals, orthogonality and block grouping.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative tolerance for splitting eigenvalue clusters.
const CLUSTER_TOL: f64 = 1e-8;

/// The basis vectors of one generated block: `vectors[k]` holds the
/// coefficients on sphere `start_sphere + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub block_id: usize,
    pub start_sphere: usize,
    pub vectors: Vec<Vec<f64>>,
}

/// Max absolute row sum.
fn row_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

struct Blocks {
    /// `H_{n,n}`.
    diag: Vec<DMatrix<f64>>,
    /// `H_{n+1,n}`, mapping `S_n` to `S_{n+1}`.
    down: Vec<DMatrix<f64>>,
}

impl Blocks {
    fn new(g: &LayeredGraph, h: &DMatrix<f64>) -> Self {
        let block = |r: usize, c: usize| {
            h.view((g.offset(r), g.offset(c)), (g.sphere_size(r), g.sphere_size(c)))
                .into_owned()
        };
        Self {
            diag: (0..=g.depth()).map(|n| block(n, n)).collect(),
            down: (0..g.depth()).map(|n| block(n + 1, n)).collect(),
        }
    }

    /// `V_m`, then for each radius `j` the forward operator
    /// `F^T F` and the potential `F^T H_{m+j,m+j} F` with
    /// `F = H_{m+j,m+j-1} ... H_{m+1,m}`.
    fn family(&self, m: usize) -> Vec<DMatrix<f64>> {
        let mut ops = vec![self.diag[m].clone()];
        let mut chain = DMatrix::identity(self.diag[m].nrows(), self.diag[m].nrows());
        for j in m..self.down.len() {
            chain = &self.down[j] * chain;
            let ct = chain.transpose();
            ops.push(&ct * &chain);
            ops.push(&ct * &self.diag[j + 1] * &chain);
        }
        ops
    }
}

/// Orthonormal basis of the complement of `used` in `R^size`, as columns.
fn orthocomplement(used: &[DVector<f64>], size: usize) -> DMatrix<f64> {
    if used.is_empty() {
        return DMatrix::identity(size, size);
    }
    let mut p = DMatrix::<f64>::identity(size, size);
    for u in used {
        p -= u * u.transpose();
    }
    let eig = SymmetricEigen::new(p);
    let cols: Vec<DVector<f64>> = (0..size)
        .filter(|&i| eig.eigenvalues[i] > 0.5)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    DMatrix::from_columns(&cols)
}

/// Splits the column space of `q` into eigenspaces of `q^T f q`.
fn split(q: &DMatrix<f64>, f: &DMatrix<f64>, tol: f64) -> Vec<DMatrix<f64>> {
    if q.ncols() <= 1 {
        return vec![q.clone()];
    }
    let m = q.transpose() * f * q;
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(gr) if eig.eigenvalues[i] - eig.eigenvalues[*gr.last().unwrap()] <= tol => gr.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
        .into_iter()
        .map(|gr| {
            let cols: Vec<DVector<f64>> = gr.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
            q * DMatrix::from_columns(&cols)
        })
        .collect()
}

/// Orthonormal common eigenvectors of `family` spanning the columns of `w`.
fn joint_eigenbasis(w: &DMatrix<f64>, family: &[DMatrix<f64>], sphere: usize, tol: f64) -> Result<Vec<DVector<f64>>> {
    let restricted: Vec<DMatrix<f64>> = family.iter().map(|f| w.transpose() * f * w).collect();
    let mut clusters = vec![DMatrix::<f64>::identity(w.ncols(), w.ncols())];
    for f in &restricted {
        let ctol = CLUSTER_TOL * row_norm(f).max(1.0);
        clusters = clusters.iter().flat_map(|q| split(q, f, ctol)).collect();
    }
    let mut out = Vec::with_capacity(w.ncols());
    for q in &clusters {
        for col in q.column_iter() {
            let mut v = w * col;
            // deterministic sign: largest entry positive
            let imax = v.iamax();
            if v[imax] < 0.0 {
                v = -v;
            }
            for f in family {
                let fv = f * &v;
                let rayleigh = v.dot(&fv);
                let residual = (fv - rayleigh * &v).norm();
                if residual > 1e3 * tol * row_norm(f).max(1.0) {
                    return Err(Error::JointDiagonalization { sphere, residual });
                }
            }
            out.push(v);
        }
    }
    Ok(out)
}

struct RawBlock {
    start: usize,
    seed: DVector<f64>,
    vectors: Vec<DVector<f64>>,
    a: Vec<f64>,
    b: Vec<f64>,
}

fn close(x: &[f64], y: &[f64], tol: f64) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(p, q)| (p - q).abs() <= tol * p.abs().max(q.abs()).max(1.0))
}

/// Jacobi decomposition of the compressed operator, built sphere by sphere
/// from seeds that are common eigenvectors of the sphere operators.
///
/// Fails with a residual violation when the cyclic subspace of a seed
/// leaves the span of one vector per sphere, which happens exactly when
/// the input is not path commuting (strongly, for the Laplacians).
pub fn tridiagonalize(g: &LayeredGraph, kind: OperatorKind, tol: f64) -> Result<Decomposition> {
    tridiagonalize_with_chains(g, kind, tol).map(|(d, _)| d)
}

/// [`tridiagonalize`] together with the basis vectors of every block copy.
pub fn tridiagonalize_with_chains(g: &LayeredGraph, kind: OperatorKind, tol: f64) -> Result<(Decomposition, Vec<Chain>)> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let h = compress_operator(g, kind)?;
    let scale = row_norm(&h).max(1.0);
    let limit = tol * scale;
    let depth = g.depth();
    let blocks = Blocks::new(g, &h);
    let mut basis: Vec<Vec<DVector<f64>>> = vec![Vec::new(); depth + 1];
    let mut raw: Vec<RawBlock> = Vec::new();

    for m in 0..=depth {
        let size = g.sphere_size(m);
        if basis[m].len() == size {
            continue;
        }
        let w = orthocomplement(&basis[m], size);
        let seeds = joint_eigenbasis(&w, &blocks.family(m), m, tol)?;
        for seed in seeds {
            basis[m].push(seed.clone());
            let mut vectors = vec![seed.clone()];
            let (mut a, mut b) = (Vec::new(), Vec::new());
            loop {
                let k = vectors.len() - 1;
                let n = m + k;
                let phi = &vectors[k];
                let within = &blocks.diag[n] * phi;
                let bk = phi.dot(&within);
                let mut r2 = (within - bk * phi).norm_squared();
                if n > 0 {
                    let back = blocks.down[n - 1].transpose() * phi;
                    r2 += match k.checked_sub(1).map(|i| &vectors[i]) {
                        Some(prev) => (&back - prev.dot(&back) * prev).norm_squared(),
                        None => back.norm_squared(),
                    };
                }
                if r2.sqrt() > limit {
                    return Err(Error::ResidualViolation {
                        sphere: n,
                        norm: r2.sqrt(),
                        tol: limit,
                    });
                }
                b.push(bk);
                if n == depth {
                    break;
                }
                let forward = &blocks.down[n] * phi;
                let norm = forward.norm();
                if norm < limit {
                    break;
                }
                let next = forward / norm;
                let overlap = basis[n + 1]
                    .iter()
                    .map(|u| u.dot(&next).powi(2))
                    .sum::<f64>()
                    .sqrt();
                if overlap > limit {
                    return Err(Error::ResidualViolation {
                        sphere: n + 1,
                        norm: overlap,
                        tol: limit,
                    });
                }
                basis[n + 1].push(next.clone());
                vectors.push(next);
                a.push(norm);
            }
            raw.push(RawBlock {
                start: m,
                seed,
                vectors,
                a,
                b,
            });
        }
    }

    let mut grouped: Vec<JacobiBlock> = Vec::new();
    let mut chains = Vec::with_capacity(raw.len());
    for r in raw {
        let found = grouped
            .iter()
            .position(|gb| gb.start_sphere == r.start && close(&gb.a, &r.a, tol) && close(&gb.b, &r.b, tol));
        let id = match found {
            Some(id) => {
                grouped[id].multiplicity += 1;
                grouped[id].seeds.push(r.seed.as_slice().to_vec());
                id
            }
            None => {
                grouped.push(JacobiBlock {
                    start_sphere: r.start,
                    seeds: vec![r.seed.as_slice().to_vec()],
                    a: r.a,
                    b: r.b,
                    multiplicity: 1,
                });
                grouped.len() - 1
            }
        };
        chains.push(Chain {
            block_id: id,
            start_sphere: r.start,
            vectors: r.vectors.iter().map(|v| v.as_slice().to_vec()).collect(),
        });
    }
    let d = Decomposition {
        kind,
        depth,
        blocks: grouped,
    };
    if d.dimension() != Some(g.vertex_count() as u64) {
        return Err(Error::InvalidGraph(format!(
            "decomposition spans {:?} dimensions, ball has {}",
            d.dimension(),
            g.vertex_count()
        )));
    }
    Ok((d, chains))
}
