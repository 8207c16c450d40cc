//! Path counting between vertices of one sphere, and the path commuting
//! property.
//!
//! For `x, y` in `S_n` all six path species reduce to entries of products
//! of the sphere operators
//!
//! * `Lambda(n, +j) = E_n^T ... E_{n+j-1}^T E_{n+j-1} ... E_n` (j-forward paths),
//! * `Lambda(n, -j) = E_{n-1} ... E_{n-j} E_{n-j}^T ... E_{n-1}^T` (j-backward paths),
//! * `V_n` (one step inside the sphere).
//!
//! Everything here is exact integer arithmetic. Counts that would need
//! edges beyond the stored ball are never formed.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{LayeredGraph, VertexId};
use crate::intmat::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LambdaKind {
    pub direction: Direction,
    pub n: usize,
    pub j: usize,
}

impl LambdaKind {
    pub fn plus(n: usize, j: usize) -> Self {
        Self {
            direction: Direction::Plus,
            n,
            j,
        }
    }

    pub fn minus(n: usize, j: usize) -> Self {
        Self {
            direction: Direction::Minus,
            n,
            j,
        }
    }
}

/// `E_{n+j-1} ... E_n`, shape `s_{n+j} x s_n`.
fn forward_chain(g: &LayeredGraph, n: usize, j: usize) -> Result<IntMatrix> {
    let mut chain = IntMatrix::identity(g.sphere_size(n));
    for m in n..n + j {
        chain = g.cross(m).mul(&chain)?;
    }
    Ok(chain)
}

/// `E_{n-1} ... E_{n-j}`, shape `s_n x s_{n-j}`.
fn backward_chain(g: &LayeredGraph, n: usize, j: usize) -> Result<IntMatrix> {
    let mut chain = IntMatrix::identity(g.sphere_size(n));
    for m in (n - j..n).rev() {
        chain = chain.mul(g.cross(m))?;
    }
    Ok(chain)
}

/// `Lambda(n, +j)` or `Lambda(n, -j)`. The minus operator is the identity
/// when `n = 0` or `j > n`; the plus operator needs `n + j <= depth`.
pub fn lambda(g: &LayeredGraph, kind: LambdaKind) -> Result<IntMatrix> {
    let LambdaKind { direction, n, j } = kind;
    if n > g.depth() {
        return Err(Error::OutOfRange(format!("sphere {n} beyond depth {}", g.depth())));
    }
    match direction {
        Direction::Plus => {
            if n + j > g.depth() {
                return Err(Error::RadiusOutOfRange {
                    sphere: n,
                    radius: j,
                    depth: g.depth(),
                });
            }
            let f = forward_chain(g, n, j)?;
            f.transpose().mul(&f)
        }
        Direction::Minus => {
            if n == 0 || j > n {
                return Ok(IntMatrix::identity(g.sphere_size(n)));
            }
            let b = backward_chain(g, n, j)?;
            b.mul(&b.transpose())
        }
    }
}

/// The operators attached to one sphere, up to radius `j_max` (clamped to
/// what the ball determines).
#[derive(Debug, Clone)]
pub struct SphereFamily {
    pub n: usize,
    pub intra: IntMatrix,
    /// `plus[j] = Lambda(n, +j)` for `j = 0..=forward_max`.
    pub plus: Vec<IntMatrix>,
    /// `minus[j] = Lambda(n, -j)` for `j = 0..=backward_max`.
    pub minus: Vec<IntMatrix>,
    /// `plus_potential[j] = F^T V_{n+j} F` with `F = E_{n+j-1} ... E_n`.
    pub plus_potential: Vec<IntMatrix>,
    /// `minus_potential[j] = B V_{n-j} B^T` with `B = E_{n-1} ... E_{n-j}`.
    pub minus_potential: Vec<IntMatrix>,
}

impl SphereFamily {
    pub fn new(g: &LayeredGraph, n: usize, j_max: usize) -> Result<Self> {
        if n > g.depth() {
            return Err(Error::OutOfRange(format!("sphere {n} beyond depth {}", g.depth())));
        }
        let forward_max = j_max.min(g.depth() - n);
        let backward_max = j_max.min(n);
        let size = g.sphere_size(n);
        let mut plus = vec![IntMatrix::identity(size)];
        let mut plus_potential = vec![g.intra(n).clone()];
        let mut chain = IntMatrix::identity(size);
        for j in 1..=forward_max {
            chain = g.cross(n + j - 1).mul(&chain)?;
            let ct = chain.transpose();
            plus.push(ct.mul(&chain)?);
            plus_potential.push(ct.mul(g.intra(n + j))?.mul(&chain)?);
        }
        let mut minus = vec![IntMatrix::identity(size)];
        let mut minus_potential = vec![g.intra(n).clone()];
        let mut chain = IntMatrix::identity(size);
        for j in 1..=backward_max {
            chain = chain.mul(g.cross(n - j))?;
            let ct = chain.transpose();
            minus.push(chain.mul(&ct)?);
            minus_potential.push(chain.mul(g.intra(n - j))?.mul(&ct)?);
        }
        Ok(Self {
            n,
            intra: g.intra(n).clone(),
            plus,
            minus,
            plus_potential,
            minus_potential,
        })
    }

    pub fn forward_max(&self) -> usize {
        self.plus.len() - 1
    }

    pub fn backward_max(&self) -> usize {
        self.minus.len() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathSpecies {
    /// k-forward path followed by an l-backward path.
    ForwardBackward { k: usize, l: usize },
    /// l-backward path followed by a k-forward path.
    BackwardForward { l: usize, k: usize },
    TailedForward { k: usize },
    HeadedForward { k: usize },
    TailedBackward { k: usize },
    HeadedBackward { k: usize },
}

impl PathSpecies {
    fn radii(self) -> (usize, usize) {
        match self {
            Self::ForwardBackward { k, l } | Self::BackwardForward { l, k } => (k, l),
            Self::TailedForward { k } | Self::HeadedForward { k } => (k, 0),
            Self::TailedBackward { k } | Self::HeadedBackward { k } => (0, k),
        }
    }

    fn profile(self) -> Vec<Step> {
        use Step::*;
        let rep = |s: Step, times: usize| std::iter::repeat_n(s, times);
        let steps: Vec<Step> = match self {
            Self::ForwardBackward { k, l } => rep(Out, k).chain(rep(In, k)).chain(rep(In, l)).chain(rep(Out, l)).collect(),
            Self::BackwardForward { l, k } => rep(In, l).chain(rep(Out, l)).chain(rep(Out, k)).chain(rep(In, k)).collect(),
            Self::TailedForward { k } => rep(Out, k).chain(rep(In, k)).chain(rep(Intra, 1)).collect(),
            Self::HeadedForward { k } => rep(Intra, 1).chain(rep(Out, k)).chain(rep(In, k)).collect(),
            Self::TailedBackward { k } => rep(In, k).chain(rep(Out, k)).chain(rep(Intra, 1)).collect(),
            Self::HeadedBackward { k } => rep(Intra, 1).chain(rep(In, k)).chain(rep(Out, k)).collect(),
        };
        steps
    }
}

impl fmt::Display for PathSpecies {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::ForwardBackward { k, l } => write!(f, "fb({k},{l})"),
            Self::BackwardForward { l, k } => write!(f, "bf({l},{k})"),
            Self::TailedForward { k } => write!(f, "tailed_f({k})"),
            Self::HeadedForward { k } => write!(f, "headed_f({k})"),
            Self::TailedBackward { k } => write!(f, "tailed_b({k})"),
            Self::HeadedBackward { k } => write!(f, "headed_b({k})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    /// Entries of products of `Lambda` and `V`.
    Matrix,
    /// Depth-first enumeration of every admissible walk.
    Enumerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Out,
    In,
    Intra,
}

fn check_radii(g: &LayeredGraph, n: usize, species: PathSpecies) -> Result<()> {
    let (forward, backward) = species.radii();
    if n + forward > g.depth() {
        return Err(Error::RadiusOutOfRange {
            sphere: n,
            radius: forward,
            depth: g.depth(),
        });
    }
    if backward > n {
        return Err(Error::RadiusOutOfRange {
            sphere: n,
            radius: backward,
            depth: g.depth(),
        });
    }
    Ok(())
}

/// Number of paths of the given species from `x` to `y` (both in `S_n`).
pub fn count_paths(
    g: &LayeredGraph,
    species: PathSpecies,
    x: VertexId,
    y: VertexId,
    method: CountMethod,
) -> Result<u64> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x.sphere != y.sphere {
        return Err(Error::MismatchedSpheres(x.sphere, y.sphere));
    }
    let n = x.sphere;
    check_radii(g, n, species)?;
    match method {
        CountMethod::Matrix => {
            let m = species_matrix(g, n, species)?;
            Ok(m[(y.index, x.index)] as u64)
        }
        CountMethod::Enumerate => Ok(PathEnumerator::new(g).counts_from(species, x)[y.index]),
    }
}

/// Matrix `M` with `M[y][x]` = number of paths of `species` from `x` to `y`.
pub fn species_matrix(g: &LayeredGraph, n: usize, species: PathSpecies) -> Result<IntMatrix> {
    check_radii(g, n, species)?;
    let plus = |k| lambda(g, LambdaKind::plus(n, k));
    let minus = |l| lambda(g, LambdaKind::minus(n, l));
    let v = g.intra(n);
    match species {
        PathSpecies::ForwardBackward { k, l } => minus(l)?.mul(&plus(k)?),
        PathSpecies::BackwardForward { l, k } => plus(k)?.mul(&minus(l)?),
        PathSpecies::TailedForward { k } => v.mul(&plus(k)?),
        PathSpecies::HeadedForward { k } => plus(k)?.mul(v),
        PathSpecies::TailedBackward { k } => v.mul(&minus(k)?),
        PathSpecies::HeadedBackward { k } => minus(k)?.mul(v),
    }
}

/// Walk enumeration over neighbor lists split by direction.
pub struct PathEnumerator<'g> {
    graph: &'g LayeredGraph,
    outward: Vec<Vec<usize>>,
    inward: Vec<Vec<usize>>,
    sideways: Vec<Vec<usize>>,
}

impl<'g> PathEnumerator<'g> {
    pub fn new(graph: &'g LayeredGraph) -> Self {
        let adj = graph.adjacency_lists();
        let sphere: Vec<usize> = (0..graph.vertex_count()).map(|v| graph.vertex_at(v).sphere).collect();
        let split = |pick: &dyn Fn(usize, usize) -> bool| -> Vec<Vec<usize>> {
            adj.iter()
                .enumerate()
                .map(|(v, list)| list.iter().copied().filter(|&w| pick(sphere[v], sphere[w])).collect())
                .collect()
        };
        Self {
            outward: split(&|a, b| b == a + 1),
            inward: split(&|a, b| b + 1 == a),
            sideways: split(&|a, b| a == b),
            graph,
        }
    }

    /// Path counts from `x` to every vertex of its sphere.
    pub fn counts_from(&self, species: PathSpecies, x: VertexId) -> Vec<u64> {
        let profile = species.profile();
        let mut counts = vec![0u64; self.graph.sphere_size(x.sphere)];
        let start = self.graph.global_index(x);
        self.walk(start, &profile, &mut counts);
        counts
    }

    fn walk(&self, v: usize, rest: &[Step], counts: &mut [u64]) {
        match rest.split_first() {
            None => counts[self.graph.vertex_at(v).index] += 1,
            Some((step, tail)) => {
                let next = match step {
                    Step::Out => &self.outward[v],
                    Step::In => &self.inward[v],
                    Step::Intra => &self.sideways[v],
                };
                for &w in next {
                    self.walk(w, tail, counts);
                }
            }
        }
    }
}

/// Which defining equality a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    /// `fb(k,l)(x,y) != bf(l,k)(x,y)`.
    ForwardBackward,
    /// `tailed_f(k)(x,y) != headed_f(k)(x,y)`.
    TailedHeadedForward,
    /// `tailed_b(k)(x,y) != headed_b(k)(x,y)`.
    TailedHeadedBackward,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ForwardBackward => "fb/bf",
            Self::TailedHeadedForward => "tailed_f/headed_f",
            Self::TailedHeadedBackward => "tailed_b/headed_b",
        }
    }

    /// The two species compared by this equality.
    pub fn species(self, k: usize, l: usize) -> (PathSpecies, PathSpecies) {
        match self {
            Self::ForwardBackward => (PathSpecies::ForwardBackward { k, l }, PathSpecies::BackwardForward { l, k }),
            Self::TailedHeadedForward => (PathSpecies::TailedForward { k }, PathSpecies::HeadedForward { k }),
            Self::TailedHeadedBackward => (PathSpecies::TailedBackward { k }, PathSpecies::HeadedBackward { k }),
        }
    }
}

/// A failed path-count equality. `l` is 0 for the tailed/headed kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub n: usize,
    pub kind: ViolationKind,
    pub k: usize,
    pub l: usize,
    pub x: VertexId,
    pub y: VertexId,
    pub count_lhs: u64,
    pub count_rhs: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DegreeViolation {
    pub sphere: usize,
    pub x: VertexId,
    pub y: VertexId,
    pub degree_x: u64,
    pub degree_y: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Self::Pass
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Finite-depth certificate: only counts fully determined by the ball are
/// compared.
#[derive(Debug, Clone, PartialEq)]
pub struct PathCommutingReport {
    pub verdict: Verdict,
    pub depth: usize,
    pub tested_n_max: usize,
    pub tested_k_max: usize,
    /// Sorted lexicographically.
    pub violations: Vec<Violation>,
    /// Empty unless the strong property was checked.
    pub degree_violations: Vec<DegreeViolation>,
    pub warnings: Vec<String>,
}

impl PathCommutingReport {
    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

fn compare(
    lhs: &IntMatrix,
    rhs: &IntMatrix,
    n: usize,
    kind: ViolationKind,
    k: usize,
    l: usize,
    out: &mut Vec<Violation>,
) {
    for x in 0..lhs.cols() {
        for y in 0..lhs.rows() {
            if lhs[(y, x)] != rhs[(y, x)] {
                out.push(Violation {
                    n,
                    kind,
                    k,
                    l,
                    x: VertexId::new(n, x),
                    y: VertexId::new(n, y),
                    count_lhs: lhs[(y, x)] as u64,
                    count_rhs: rhs[(y, x)] as u64,
                });
            }
        }
    }
}

pub fn check_path_commuting(g: &LayeredGraph, n_max: usize, k_max: usize) -> Result<PathCommutingReport> {
    let depth = g.depth();
    let mut warnings = Vec::new();
    let tested_n_max = n_max.min(depth);
    let tested_k_max = k_max.min(depth);
    if n_max > depth {
        warnings.push(format!("n_max {n_max} clamped to depth {depth}"));
    }
    if tested_n_max + tested_k_max > depth {
        warnings.push(format!(
            "forward radii clamped to depth - n (n_max {tested_n_max} + k_max {tested_k_max} > depth {depth})"
        ));
    }
    let mut violations = Vec::new();
    for n in 0..=tested_n_max {
        let fam = SphereFamily::new(g, n, tested_k_max)?;
        for k in 1..=fam.forward_max() {
            for l in 1..=fam.backward_max() {
                let fb = fam.minus[l].mul(&fam.plus[k])?;
                let bf = fam.plus[k].mul(&fam.minus[l])?;
                compare(&fb, &bf, n, ViolationKind::ForwardBackward, k, l, &mut violations);
            }
        }
        for k in 1..=fam.forward_max() {
            let tailed = fam.intra.mul(&fam.plus[k])?;
            let headed = fam.plus[k].mul(&fam.intra)?;
            compare(&tailed, &headed, n, ViolationKind::TailedHeadedForward, k, 0, &mut violations);
        }
        for k in 1..=fam.backward_max() {
            let tailed = fam.intra.mul(&fam.minus[k])?;
            let headed = fam.minus[k].mul(&fam.intra)?;
            compare(&tailed, &headed, n, ViolationKind::TailedHeadedBackward, k, 0, &mut violations);
        }
    }
    violations.sort();
    Ok(PathCommutingReport {
        verdict: Verdict::from_pass(violations.is_empty()),
        depth,
        tested_n_max,
        tested_k_max,
        violations,
        degree_violations: Vec::new(),
        warnings,
    })
}

/// Path commuting plus constant degree on every sphere of the ball
/// (boundary degrees include the outward edges).
pub fn check_strongly_path_commuting(g: &LayeredGraph, n_max: usize, k_max: usize) -> Result<PathCommutingReport> {
    let mut report = check_path_commuting(g, n_max, k_max)?;
    for n in 0..=g.depth() {
        let first = VertexId::new(n, 0);
        let d0 = g.degree(first);
        for i in 1..g.sphere_size(n) {
            let y = VertexId::new(n, i);
            let d = g.degree(y);
            if d != d0 {
                report.degree_violations.push(DegreeViolation {
                    sphere: n,
                    x: first,
                    y,
                    degree_x: d0,
                    degree_y: d,
                });
            }
        }
    }
    report.verdict = Verdict::from_pass(report.violations.is_empty() && report.degree_violations.is_empty());
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyMember {
    Intra,
    Plus(usize),
    Minus(usize),
    PlusPotential(usize),
    MinusPotential(usize),
}

impl fmt::Display for FamilyMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Intra => write!(f, "V"),
            Self::Plus(j) => write!(f, "Lambda+{j}"),
            Self::Minus(j) => write!(f, "Lambda-{j}"),
            Self::PlusPotential(j) => write!(f, "P+{j}"),
            Self::MinusPotential(j) => write!(f, "P-{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorEntry {
    pub left: FamilyMember,
    pub right: FamilyMember,
    /// Max-norm of `left * right - right * left`.
    pub max_abs: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutationReport {
    pub n: usize,
    pub forward_max: usize,
    pub backward_max: usize,
    /// Pairwise commutators of `{V_n, Lambda(n, +j), Lambda(n, -j)}`.
    pub family: Vec<CommutatorEntry>,
    /// `[Lambda(n, +j), P(n, +j)]` and `[Lambda(n, -j), P(n, -j)]`.
    pub potentials: Vec<CommutatorEntry>,
    /// Verdict on the family commutators.
    pub verdict: Verdict,
    pub potentials_verdict: Verdict,
}

pub fn check_commuting_family(g: &LayeredGraph, n: usize, j_max: usize) -> Result<CommutationReport> {
    let fam = SphereFamily::new(g, n, j_max)?;
    let mut members: Vec<(FamilyMember, &IntMatrix)> = vec![(FamilyMember::Intra, &fam.intra)];
    members.extend((1..=fam.forward_max()).map(|j| (FamilyMember::Plus(j), &fam.plus[j])));
    members.extend((1..=fam.backward_max()).map(|j| (FamilyMember::Minus(j), &fam.minus[j])));
    let mut family = Vec::new();
    for (a, (la, ma)) in members.iter().enumerate() {
        for (lb, mb) in &members[a + 1..] {
            family.push(CommutatorEntry {
                left: *la,
                right: *lb,
                max_abs: ma.commutator(mb)?.max_abs(),
            });
        }
    }
    let mut potentials = Vec::new();
    for j in 1..=fam.forward_max() {
        potentials.push(CommutatorEntry {
            left: FamilyMember::Plus(j),
            right: FamilyMember::PlusPotential(j),
            max_abs: fam.plus[j].commutator(&fam.plus_potential[j])?.max_abs(),
        });
    }
    for j in 1..=fam.backward_max() {
        potentials.push(CommutatorEntry {
            left: FamilyMember::Minus(j),
            right: FamilyMember::MinusPotential(j),
            max_abs: fam.minus[j].commutator(&fam.minus_potential[j])?.max_abs(),
        });
    }
    let verdict = Verdict::from_pass(family.iter().all(|c| c.max_abs == 0));
    let potentials_verdict = Verdict::from_pass(potentials.iter().all(|c| c.max_abs == 0));
    Ok(CommutationReport {
        n,
        forward_max: fam.forward_max(),
        backward_max: fam.backward_max(),
        family,
        potentials,
        verdict,
        potentials_verdict,
    })
}
