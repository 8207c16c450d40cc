#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spectral_layers::fixtures::{Fixture, DEFAULT_RAY_LENGTH};
use spectral_layers::sequence::sparse_gamma_spec;
use spectral_layers::{build_antitree, build_tree_complete_spheres, LayeredGraph, LayeredGraphBuilder, SequenceSpec};

pub fn spec(s: &str) -> SequenceSpec {
    s.parse().unwrap()
}

pub fn antitree(s: &str, depth: usize) -> LayeredGraph {
    build_antitree(&spec(s), depth).unwrap()
}

pub fn tree_cs(k: &str, gamma: &str, depth: usize) -> LayeredGraph {
    build_tree_complete_spheres(&spec(k), &spec(gamma), depth).unwrap()
}

fn built(sizes: &[usize], cross: &[(usize, usize, usize)], intra: &[(usize, usize, usize)], outward: u64) -> LayeredGraph {
    let mut b = LayeredGraphBuilder::new(sizes.to_vec()).unwrap();
    for &(n, p, c) in cross {
        b.add_cross(n, p, c).unwrap();
    }
    for &(n, i, j) in intra {
        b.add_intra(n, i, j).unwrap();
    }
    for i in 0..sizes[sizes.len() - 1] {
        b.set_outward(i, outward).unwrap();
    }
    b.build().unwrap()
}

/// Rooted 3-cube.
pub fn cube() -> LayeredGraph {
    built(
        &[1, 3, 3, 1],
        &[
            (0, 0, 0),
            (0, 0, 1),
            (0, 0, 2),
            (1, 0, 0),
            (1, 0, 1),
            (1, 1, 0),
            (1, 1, 2),
            (1, 2, 1),
            (1, 2, 2),
            (2, 0, 0),
            (2, 1, 0),
            (2, 2, 0),
        ],
        &[],
        0,
    )
}

/// 6-cycle rooted at a vertex.
pub fn hexagon() -> LayeredGraph {
    built(&[1, 2, 2, 1], &[(0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 1, 1), (2, 0, 0), (2, 1, 0)], &[], 0)
}

/// Triangle `o, a, b` with a common neighbor `c` of `a` and `b`.
pub fn kite() -> LayeredGraph {
    built(&[1, 2, 1], &[(0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 1, 0)], &[(1, 0, 1)], 0)
}

/// Root with children of 2 and 1 children, continued by unit rays.
pub fn lopsided_tree() -> LayeredGraph {
    built(&[1, 2, 3], &[(0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 0, 1), (1, 1, 2)], &[], 1)
}

/// Two disjoint triangles on `S_1` under the root, one edge inside `S_2`.
pub fn triangles() -> LayeredGraph {
    built(
        &[1, 3, 3],
        &[(0, 0, 0), (0, 0, 1), (0, 0, 2), (1, 0, 0), (1, 1, 1), (1, 2, 2)],
        &[(1, 0, 1), (1, 1, 2), (1, 0, 2), (2, 0, 1)],
        1,
    )
}

/// Twenty graphs mixing symmetric families and counterexamples.
pub fn fixture_graphs() -> Vec<(String, LayeredGraph)> {
    let mut out: Vec<(String, LayeredGraph)> = Fixture::ALL
        .iter()
        .map(|f| (f.name().to_owned(), f.graph(DEFAULT_RAY_LENGTH).unwrap()))
        .collect();
    out.push(("fig4b-bare".into(), Fixture::Fig4b.graph(0).unwrap()));
    out.push(("fig5-bare".into(), Fixture::Fig5.graph(0).unwrap()));
    out.push(("antitree-1;2,3".into(), antitree("1;2,3", 5)));
    out.push(("antitree-c4".into(), antitree("1,2,1,0;", 2)));
    out.push(("antitree-1;3".into(), antitree("1;3", 4)));
    out.push(("path".into(), antitree("1;1", 6)));
    out.push(("tree-cs-2|1".into(), tree_cs("2", "1", 4)));
    out.push(("tree-2".into(), tree_cs("2", "0", 4)));
    out.push(("tree-cs-3|0,1;0".into(), tree_cs("3", "0,1;0", 3)));
    let sparse = sparse_gamma_spec(2, 8).unwrap();
    out.push((
        "tree-cs-sparse".into(),
        build_tree_complete_spheres(&spec("1,2;1"), &sparse, 6).unwrap(),
    ));
    out.push(("cube".into(), cube()));
    out.push(("hexagon".into(), hexagon()));
    out.push(("kite".into(), kite()));
    out.push(("lopsided".into(), lopsided_tree()));
    out.push(("triangles".into(), triangles()));
    assert_eq!(out.len(), 20);
    out
}

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// ascending. Independent of the library's solvers.
pub fn jacobi_rotation_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a = m.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (lo, hi) = a.split_at_mut(q);
                for (apk, aqk) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let (x, y) = (*apk, *aqk);
                    *apk = c * x - s * y;
                    *aqk = s * x + c * y;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn tridiagonal_dense(b: &[f64], a: &[f64]) -> Vec<Vec<f64>> {
    let n = b.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = b[i];
        if i + 1 < n {
            m[i][i + 1] = a[i];
            m[i + 1][i] = a[i];
        }
    }
    m
}

/// Seeded generator for reproducible random inputs.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
