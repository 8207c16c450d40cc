//! Rooted graphs stored sphere by sphere.
//!
//! A ball of radius `N` around the root `o` is kept as the sphere sizes
//! `s_0..s_N`, the cross-sphere incidence blocks `E_n` (shape
//! `s_{n+1} x s_n`, entry `(i, j)` set when vertex `i` of `S_{n+1}` is joined
//! to vertex `j` of `S_n`), the intra-sphere adjacency blocks `V_n`, and for
//! each vertex of the outermost sphere the number of neighbors it has in
//! `S_{N+1}` of the ambient (possibly infinite) graph. Operators built from
//! a ball are compressions of the ambient operator, so boundary degrees count
//! those outward edges.

use std::fmt;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::sequence::SequenceSpec;

/// Upper bound on the number of stored vertices; blocks are dense.
pub const MAX_BALL_SIZE: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub sphere: usize,
    pub index: usize,
}

impl VertexId {
    pub const ROOT: VertexId = VertexId {
        sphere: 0,
        index: 0,
    };

    pub fn new(sphere: usize, index: usize) -> Self {
        Self { sphere, index }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.sphere, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredGraph {
    sphere_sizes: Vec<usize>,
    offsets: Vec<usize>,
    cross: Vec<IntMatrix>,
    intra: Vec<IntMatrix>,
    outward: Vec<u64>,
}

impl LayeredGraph {
    /// Validates and assembles a ball. `cross[n]` is `E_n`, `intra[n]` is
    /// `V_n`, `outward[i]` is the forward degree of vertex `i` of `S_N`.
    pub fn new(
        sphere_sizes: Vec<usize>,
        cross: Vec<IntMatrix>,
        intra: Vec<IntMatrix>,
        outward: Vec<u64>,
    ) -> Result<Self> {
        let depth = match sphere_sizes.len() {
            0 => return Err(Error::InvalidGraph("no spheres".into())),
            l => l - 1,
        };
        if sphere_sizes[0] != 1 {
            return Err(Error::InvalidGraph(format!(
                "sphere 0 must hold exactly the root, got size {}",
                sphere_sizes[0]
            )));
        }
        if let Some(n) = sphere_sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidGraph(format!("sphere {n} is empty")));
        }
        let total: usize = sphere_sizes.iter().sum();
        if total > MAX_BALL_SIZE {
            return Err(Error::InvalidGraph(format!(
                "ball has {total} vertices, limit is {MAX_BALL_SIZE}"
            )));
        }
        if cross.len() != depth || intra.len() != depth + 1 {
            return Err(Error::InvalidGraph("block count does not match depth".into()));
        }
        if outward.len() != sphere_sizes[depth] {
            return Err(Error::InvalidGraph(format!(
                "expected {} outward degrees, got {}",
                sphere_sizes[depth],
                outward.len()
            )));
        }
        for (n, e) in cross.iter().enumerate() {
            if e.rows() != sphere_sizes[n + 1] || e.cols() != sphere_sizes[n] {
                return Err(Error::InvalidGraph(format!("E_{n} has wrong shape")));
            }
            check_binary(e, &format!("E_{n}"))?;
            for i in 0..e.rows() {
                if e.row_sum(i) == 0 {
                    return Err(Error::DisconnectedVertex {
                        sphere: n + 1,
                        index: i,
                    });
                }
            }
        }
        for (n, v) in intra.iter().enumerate() {
            if v.rows() != sphere_sizes[n] || v.cols() != sphere_sizes[n] {
                return Err(Error::InvalidGraph(format!("V_{n} has wrong shape")));
            }
            check_binary(v, &format!("V_{n}"))?;
            if let Some(i) = (0..v.rows()).find(|&i| v[(i, i)] != 0) {
                return Err(Error::SelfLoop { sphere: n, index: i });
            }
            if !v.is_symmetric() {
                return Err(Error::InvalidGraph(format!("V_{n} is not symmetric")));
            }
        }
        let mut offsets = Vec::with_capacity(sphere_sizes.len() + 1);
        let mut acc = 0;
        for &s in &sphere_sizes {
            offsets.push(acc);
            acc += s;
        }
        offsets.push(acc);
        Ok(Self {
            sphere_sizes,
            offsets,
            cross,
            intra,
            outward,
        })
    }

    /// The one-vertex ball.
    pub fn root_only(outward_degree: u64) -> Self {
        Self::new(
            vec![1],
            Vec::new(),
            vec![IntMatrix::zeros(1, 1)],
            vec![outward_degree],
        )
        .expect("root-only ball is valid")
    }

    pub fn depth(&self) -> usize {
        self.sphere_sizes.len() - 1
    }

    pub fn sphere_sizes(&self) -> &[usize] {
        &self.sphere_sizes
    }

    pub fn sphere_size(&self, n: usize) -> usize {
        self.sphere_sizes[n]
    }

    /// `E_n`, shape `s_{n+1} x s_n`.
    pub fn cross(&self, n: usize) -> &IntMatrix {
        &self.cross[n]
    }

    /// `V_n`.
    pub fn intra(&self, n: usize) -> &IntMatrix {
        &self.intra[n]
    }

    pub fn outward_degrees(&self) -> &[u64] {
        &self.outward
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets[self.sphere_sizes.len()]
    }

    /// Global index of the first vertex of `S_n` in sphere-major order.
    pub fn offset(&self, n: usize) -> usize {
        self.offsets[n]
    }

    pub fn sphere_range(&self, n: usize) -> std::ops::Range<usize> {
        self.offsets[n]..self.offsets[n + 1]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.sphere <= self.depth() && v.index < self.sphere_sizes[v.sphere]
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!("vertex {v} not in ball of depth {}", self.depth())))
        }
    }

    pub fn global_index(&self, v: VertexId) -> usize {
        self.offsets[v.sphere] + v.index
    }

    pub fn vertex_at(&self, global: usize) -> VertexId {
        let sphere = self.offsets.partition_point(|&o| o <= global) - 1;
        VertexId::new(sphere, global - self.offsets[sphere])
    }

    /// Neighbors in `S_{n-1}`.
    pub fn backward_degree(&self, v: VertexId) -> u64 {
        if v.sphere == 0 {
            0
        } else {
            self.cross[v.sphere - 1].row_sum(v.index) as u64
        }
    }

    pub fn intra_degree(&self, v: VertexId) -> u64 {
        self.intra[v.sphere].row_sum(v.index) as u64
    }

    /// Neighbors in `S_{n+1}`, taken from the outward data on the boundary.
    pub fn forward_degree(&self, v: VertexId) -> u64 {
        if v.sphere == self.depth() {
            self.outward[v.index]
        } else {
            self.cross[v.sphere].col_sum(v.index) as u64
        }
    }

    pub fn degree(&self, v: VertexId) -> u64 {
        self.backward_degree(v) + self.intra_degree(v) + self.forward_degree(v)
    }

    /// Ambient degrees in global order.
    pub fn degrees(&self) -> Vec<u64> {
        (0..self.vertex_count())
            .map(|g| self.degree(self.vertex_at(g)))
            .collect()
    }

    /// Neighbor lists inside the ball, global indices, ascending.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for n in 0..=self.depth() {
            let v = &self.intra[n];
            for i in 0..v.rows() {
                for j in 0..v.cols() {
                    if v[(i, j)] != 0 {
                        adj[self.offsets[n] + i].push(self.offsets[n] + j);
                    }
                }
            }
        }
        for (n, e) in self.cross.iter().enumerate() {
            for i in 0..e.rows() {
                for j in 0..e.cols() {
                    if e[(i, j)] != 0 {
                        let child = self.offsets[n + 1] + i;
                        let parent = self.offsets[n] + j;
                        adj[child].push(parent);
                        adj[parent].push(child);
                    }
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn is_tree(&self) -> bool {
        self.intra.iter().all(IntMatrix::is_zero)
            && (0..self.depth()).all(|n| (0..self.sphere_sizes[n + 1]).all(|i| self.cross[n].row_sum(i) == 1))
    }

    /// Copy with every intra-sphere block cleared.
    pub fn without_intra_edges(&self) -> Self {
        let mut g = self.clone();
        for v in &mut g.intra {
            *v = IntMatrix::zeros(v.rows(), v.cols());
        }
        g
    }

    /// Continues every boundary vertex with a nonzero outward degree by a
    /// ray of `length` further spheres. The rays themselves keep going, so
    /// the new boundary has outward degree 1.
    pub fn with_rays(&self, length: usize) -> Result<Self> {
        if length == 0 {
            return Ok(self.clone());
        }
        let boundary: Vec<usize> = (0..self.sphere_size(self.depth()))
            .filter(|&i| self.outward[i] > 0)
            .collect();
        if let Some(&i) = boundary.iter().find(|&&i| self.outward[i] != 1) {
            return Err(Error::InvalidGraph(format!(
                "ray continuation needs outward degree 1, vertex {i} has {}",
                self.outward[i]
            )));
        }
        if boundary.is_empty() {
            return Err(Error::InvalidGraph("no boundary vertex to continue".into()));
        }
        let mut sizes = self.sphere_sizes.clone();
        let mut cross = self.cross.clone();
        let mut intra = self.intra.clone();
        let r = boundary.len();
        let mut first = IntMatrix::zeros(r, self.sphere_size(self.depth()));
        for (c, &p) in boundary.iter().enumerate() {
            first[(c, p)] = 1;
        }
        cross.push(first);
        for _ in 1..length {
            cross.push(IntMatrix::identity(r));
        }
        for _ in 0..length {
            sizes.push(r);
            intra.push(IntMatrix::zeros(r, r));
        }
        Self::new(sizes, cross, intra, vec![1; r])
    }
}

fn check_binary(m: &IntMatrix, name: &str) -> Result<()> {
    for i in 0..m.rows() {
        if m.row(i).iter().any(|&x| x != 0 && x != 1) {
            return Err(Error::InvalidGraph(format!("{name} has a non 0/1 entry in row {i}")));
        }
    }
    Ok(())
}

/// Incremental construction, used by the LGF parser and the fixtures.
#[derive(Debug, Clone)]
pub struct LayeredGraphBuilder {
    sizes: Vec<usize>,
    cross: Vec<IntMatrix>,
    intra: Vec<IntMatrix>,
    outward: Vec<u64>,
}

impl LayeredGraphBuilder {
    pub fn new(sphere_sizes: Vec<usize>) -> Result<Self> {
        if sphere_sizes.is_empty() {
            return Err(Error::InvalidGraph("no spheres".into()));
        }
        let total: usize = sphere_sizes.iter().sum();
        if total > MAX_BALL_SIZE {
            return Err(Error::InvalidGraph(format!(
                "ball has {total} vertices, limit is {MAX_BALL_SIZE}"
            )));
        }
        let depth = sphere_sizes.len() - 1;
        let cross = (0..depth)
            .map(|n| IntMatrix::zeros(sphere_sizes[n + 1], sphere_sizes[n]))
            .collect();
        let intra = sphere_sizes.iter().map(|&s| IntMatrix::zeros(s, s)).collect();
        let outward = vec![0; sphere_sizes[depth]];
        Ok(Self {
            sizes: sphere_sizes,
            cross,
            intra,
            outward,
        })
    }

    pub fn depth(&self) -> usize {
        self.sizes.len() - 1
    }

    /// Edge between `parent` in `S_n` and `child` in `S_{n+1}`.
    pub fn add_cross(&mut self, n: usize, parent: usize, child: usize) -> Result<&mut Self> {
        if n >= self.depth() {
            return Err(Error::OutOfRange(format!(
                "cross edge from sphere {n} in a ball of depth {}",
                self.depth()
            )));
        }
        if parent >= self.sizes[n] || child >= self.sizes[n + 1] {
            return Err(Error::OutOfRange(format!(
                "cross edge {n}: vertex {parent} of S_{n} (size {}) to vertex {child} of S_{} (size {})",
                self.sizes[n],
                n + 1,
                self.sizes[n + 1]
            )));
        }
        self.cross[n][(child, parent)] = 1;
        Ok(self)
    }

    pub fn add_intra(&mut self, n: usize, i: usize, j: usize) -> Result<&mut Self> {
        if n > self.depth() || i >= self.sizes[n] || j >= self.sizes[n] {
            return Err(Error::OutOfRange(format!("intra edge {n} {i} {j}")));
        }
        if i == j {
            return Err(Error::SelfLoop { sphere: n, index: i });
        }
        self.intra[n][(i, j)] = 1;
        self.intra[n][(j, i)] = 1;
        Ok(self)
    }

    pub fn set_outward(&mut self, i: usize, degree: u64) -> Result<&mut Self> {
        let n = self.depth();
        if i >= self.sizes[n] {
            return Err(Error::OutOfRange(format!("outdeg for vertex {i} of S_{n} (size {})", self.sizes[n])));
        }
        self.outward[i] = degree;
        Ok(self)
    }

    pub fn build(self) -> Result<LayeredGraph> {
        LayeredGraph::new(self.sizes, self.cross, self.intra, self.outward)
    }
}

/// Antitree ball: every vertex of `S_n` joined to all of `S_{n-1}` and
/// `S_{n+1}`. `s.value_at(depth + 1) == 0` means the graph ends at `depth`.
pub fn build_antitree(s: &SequenceSpec, depth: usize) -> Result<LayeredGraph> {
    let sizes = s.take(depth + 2)?;
    if sizes[0] != 1 {
        return Err(Error::InvalidSequence(format!("antitree needs s_0 = 1, got {}", sizes[0])));
    }
    if let Some(n) = sizes[..=depth].iter().position(|&x| x == 0) {
        return Err(Error::InvalidSequence(format!("antitree sphere {n} is empty")));
    }
    let ball: Vec<usize> = sizes[..=depth].iter().map(|&x| x as usize).collect();
    check_ball_size(&ball)?;
    let cross = (0..depth)
        .map(|n| IntMatrix::ones(ball[n + 1], ball[n]))
        .collect();
    let intra = ball.iter().map(|&x| IntMatrix::zeros(x, x)).collect();
    let outward = vec![sizes[depth + 1]; ball[depth]];
    LayeredGraph::new(ball, cross, intra, outward)
}

/// Spherically symmetric tree with branching `k_{n+1}` below each vertex
/// of `S_n`, with `S_n` made complete whenever `gamma_n = 1` (`n >= 1`).
/// Vertex `i` of `S_{n+1}` hangs below vertex `i / k_{n+1}` of `S_n`.
pub fn build_tree_complete_spheres(
    k: &SequenceSpec,
    gamma: &SequenceSpec,
    depth: usize,
) -> Result<LayeredGraph> {
    let branching = k.take(depth + 2)?;
    if let Some(n) = (1..=depth).find(|&n| branching[n] == 0) {
        return Err(Error::InvalidSequence(format!("branching k_{n} must be >= 1")));
    }
    let mut ball = vec![1usize];
    for n in 1..=depth {
        let next = ball[n - 1]
            .checked_mul(branching[n] as usize)
            .filter(|&x| x <= MAX_BALL_SIZE)
            .ok_or_else(|| Error::InvalidGraph("tree ball too large".into()))?;
        ball.push(next);
    }
    check_ball_size(&ball)?;
    let mut gammas = vec![0u64; depth + 1];
    for (n, g) in gammas.iter_mut().enumerate().skip(1) {
        *g = gamma.value_at(n)?;
        if *g > 1 {
            return Err(Error::InvalidSequence(format!("gamma_{n} = {g} is not a bit")));
        }
    }
    let cross = (0..depth)
        .map(|n| {
            let kn = branching[n + 1] as usize;
            let mut e = IntMatrix::zeros(ball[n + 1], ball[n]);
            for i in 0..ball[n + 1] {
                e[(i, i / kn)] = 1;
            }
            e
        })
        .collect();
    let intra = ball
        .iter()
        .zip(&gammas)
        .map(|(&s, &g)| {
            let mut v = IntMatrix::zeros(s, s);
            if g == 1 {
                for i in 0..s {
                    for j in 0..s {
                        if i != j {
                            v[(i, j)] = 1;
                        }
                    }
                }
            }
            v
        })
        .collect();
    let outward = vec![branching[depth + 1]; ball[depth]];
    LayeredGraph::new(ball, cross, intra, outward)
}

fn check_ball_size(ball: &[usize]) -> Result<()> {
    let total = ball.iter().try_fold(0usize, |acc, &s| acc.checked_add(s));
    match total {
        Some(t) if t <= MAX_BALL_SIZE => Ok(()),
        _ => Err(Error::InvalidGraph(format!("ball exceeds {MAX_BALL_SIZE} vertices"))),
    }
}
