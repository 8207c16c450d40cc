//! Rooted automorphisms of a ball, searched by colour refinement with
//! individualization and backtracking.
//!
//! The search colours the graph twice, once for the domain and once for
//! the image side, and refines both with a shared signature table so that
//! equal colours mean "may correspond". A vertex is individualized on the
//! domain side and tried against every vertex of the same colour on the
//! image side until the colouring becomes discrete. Boundary vertices are
//! coloured by their outward degree, so only maps compatible with the
//! ambient graph's boundary data are accepted.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{LayeredGraph, VertexId};
use crate::paths::Verdict;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AutomorphismConstraint {
    pub required_images: Vec<(VertexId, VertexId)>,
    pub pointwise_fixed_spheres: BTreeSet<usize>,
}

impl AutomorphismConstraint {
    pub fn mapping(x: VertexId, y: VertexId) -> Self {
        Self {
            required_images: vec![(x, y)],
            ..Self::default()
        }
    }

    pub fn fix_spheres(mut self, spheres: impl IntoIterator<Item = usize>) -> Self {
        self.pointwise_fixed_spheres.extend(spheres);
        self
    }

    fn validate(&self, g: &LayeredGraph) -> Result<()> {
        for &(x, y) in &self.required_images {
            g.check_vertex(x)?;
            g.check_vertex(y)?;
            if x.sphere != y.sphere {
                return Err(Error::MismatchedSpheres(x.sphere, y.sphere));
            }
        }
        if let Some(&n) = self.pointwise_fixed_spheres.iter().find(|&&n| n > g.depth()) {
            return Err(Error::OutOfRange(format!("fixed sphere {n} beyond depth {}", g.depth())));
        }
        Ok(())
    }
}

/// A sphere-preserving permutation: `images[n][i]` is the index in `S_n`
/// of the image of vertex `i` of `S_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpherePermutation {
    images: Vec<Vec<usize>>,
}

impl SpherePermutation {
    pub fn identity(g: &LayeredGraph) -> Self {
        Self {
            images: g.sphere_sizes().iter().map(|&s| (0..s).collect()).collect(),
        }
    }

    /// Validates that each sphere map is a bijection.
    pub fn from_images(images: Vec<Vec<usize>>) -> Result<Self> {
        for (n, sphere) in images.iter().enumerate() {
            let mut seen = vec![false; sphere.len()];
            for &i in sphere {
                if i >= sphere.len() || std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidArgument(format!("sphere {n} map is not a bijection")));
                }
            }
        }
        Ok(Self { images })
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        VertexId::new(v.sphere, self.images[v.sphere][v.index])
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().all(|s| s.iter().enumerate().all(|(i, &j)| i == j))
    }

    /// `self` after `first`: `v -> self(first(v))`.
    pub fn after(&self, first: &Self) -> Self {
        Self {
            images: first
                .images
                .iter()
                .zip(&self.images)
                .map(|(f, s)| f.iter().map(|&i| s[i]).collect())
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let images = self
            .images
            .iter()
            .map(|s| {
                let mut inv = vec![0; s.len()];
                for (i, &j) in s.iter().enumerate() {
                    inv[j] = i;
                }
                inv
            })
            .collect();
        Self { images }
    }

    /// Checks `P_{n+1} E_n P_n^T = E_n`, `P_n V_n P_n^T = V_n`, and that
    /// boundary outward degrees are preserved.
    pub fn preserves(&self, g: &LayeredGraph) -> bool {
        if self.images.len() != g.depth() + 1
            || self.images.iter().zip(g.sphere_sizes()).any(|(s, &n)| s.len() != n)
        {
            return false;
        }
        for n in 0..=g.depth() {
            let v = g.intra(n);
            let p = &self.images[n];
            for i in 0..v.rows() {
                for j in 0..v.cols() {
                    if v[(i, j)] != v[(p[i], p[j])] {
                        return false;
                    }
                }
            }
        }
        for n in 0..g.depth() {
            let e = g.cross(n);
            let (pc, pp) = (&self.images[n + 1], &self.images[n]);
            for c in 0..e.rows() {
                for p in 0..e.cols() {
                    if e[(c, p)] != e[(pc[c], pp[p])] {
                        return false;
                    }
                }
            }
        }
        let out = g.outward_degrees();
        let last = &self.images[g.depth()];
        (0..out.len()).all(|i| out[i] == out[last[i]])
    }

    pub fn satisfies(&self, c: &AutomorphismConstraint) -> bool {
        c.required_images.iter().all(|&(x, y)| self.apply(x) == y)
            && c
                .pointwise_fixed_spheres
                .iter()
                .all(|&n| self.images.get(n).is_some_and(|s| s.iter().enumerate().all(|(i, &j)| i == j)))
    }
}

struct Search<'g> {
    graph: &'g LayeredGraph,
    adj: Vec<Vec<usize>>,
}

type Colouring = Vec<u32>;

impl<'g> Search<'g> {
    fn new(graph: &'g LayeredGraph) -> Self {
        Self {
            adj: graph.adjacency_lists(),
            graph,
        }
    }

    fn initial(&self, c: &AutomorphismConstraint) -> Option<(Colouring, Colouring)> {
        let g = self.graph;
        let count = g.vertex_count();
        let depth = g.depth();
        let out = g.outward_degrees();
        // (sphere, outward degree, label); label 0 is "unconstrained".
        let base = |v: usize| -> (usize, u64, usize) {
            let id = g.vertex_at(v);
            let od = if id.sphere == depth { out[id.index] } else { 0 };
            (id.sphere, od, 0)
        };
        let mut left: Vec<(usize, u64, usize)> = (0..count).map(base).collect();
        let mut right = left.clone();
        let mut image_of: BTreeMap<usize, usize> = BTreeMap::new();
        for &n in &c.pointwise_fixed_spheres {
            for v in g.sphere_range(n) {
                image_of.insert(v, v);
            }
        }
        let mut preimage: BTreeMap<usize, usize> = image_of.iter().map(|(&a, &b)| (b, a)).collect();
        for &(x, y) in &c.required_images {
            let (x, y) = (g.global_index(x), g.global_index(y));
            match (image_of.get(&x), preimage.get(&y)) {
                (Some(&y0), _) if y0 != y => return None,
                (_, Some(&x0)) if x0 != x => return None,
                _ => {}
            }
            image_of.insert(x, y);
            preimage.insert(y, x);
        }
        for (label, (&x, &y)) in image_of.iter().enumerate() {
            left[x].2 = label + 1;
            right[y].2 = label + 1;
        }
        let mut table: Vec<_> = left.iter().chain(&right).copied().collect();
        table.sort_unstable();
        table.dedup();
        let id = |t: &(usize, u64, usize)| table.binary_search(t).unwrap() as u32;
        Some((left.iter().map(id).collect(), right.iter().map(id).collect()))
    }

    /// Joint refinement to a stable colouring. Returns false when the two
    /// sides stop being compatible.
    fn refine(&self, left: &mut Colouring, right: &mut Colouring) -> bool {
        let mut classes = distinct(left, right);
        loop {
            if !same_histogram(left, right) {
                return false;
            }
            let sig = |col: &Colouring, v: usize| -> (u32, Vec<u32>) {
                let mut nb: Vec<u32> = self.adj[v].iter().map(|&w| col[w]).collect();
                nb.sort_unstable();
                (col[v], nb)
            };
            let ls: Vec<_> = (0..left.len()).map(|v| sig(left, v)).collect();
            let rs: Vec<_> = (0..right.len()).map(|v| sig(right, v)).collect();
            let mut table: Vec<&(u32, Vec<u32>)> = ls.iter().chain(&rs).collect();
            table.sort_unstable();
            table.dedup();
            let id = |s: &(u32, Vec<u32>)| table.binary_search(&s).unwrap() as u32;
            *left = ls.iter().map(id).collect();
            *right = rs.iter().map(id).collect();
            let now = distinct(left, right);
            if now == classes {
                return same_histogram(left, right);
            }
            classes = now;
        }
    }

    fn search(&self, mut left: Colouring, mut right: Colouring) -> Option<Vec<usize>> {
        if !self.refine(&mut left, &mut right) {
            return None;
        }
        let mut cells: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (v, &c) in left.iter().enumerate() {
            cells.entry(c).or_default().push(v);
        }
        let target = cells
            .iter()
            .filter(|(_, vs)| vs.len() > 1)
            .min_by_key(|(&c, vs)| (vs.len(), c))
            .map(|(&c, vs)| (c, vs[0]));
        let Some((colour, v)) = target else {
            let mut by_colour = vec![usize::MAX; left.len()];
            for (w, &c) in right.iter().enumerate() {
                by_colour[c as usize] = w;
            }
            let map: Vec<usize> = left.iter().map(|&c| by_colour[c as usize]).collect();
            return self.is_automorphism(&map).then_some(map);
        };
        let fresh = left.len().max(right.len()) as u32;
        let candidates: Vec<usize> = (0..right.len()).filter(|&w| right[w] == colour).collect();
        for w in candidates {
            let (mut l2, mut r2) = (left.clone(), right.clone());
            l2[v] = fresh;
            r2[w] = fresh;
            if let Some(map) = self.search(l2, r2) {
                return Some(map);
            }
        }
        None
    }

    fn is_automorphism(&self, map: &[usize]) -> bool {
        self.adj.iter().enumerate().all(|(v, list)| {
            let mut image: Vec<usize> = list.iter().map(|&w| map[w]).collect();
            image.sort_unstable();
            image == self.adj[map[v]]
        })
    }

    fn to_permutation(&self, map: &[usize]) -> SpherePermutation {
        let g = self.graph;
        let images = (0..=g.depth())
            .map(|n| g.sphere_range(n).map(|v| g.vertex_at(map[v]).index).collect())
            .collect();
        SpherePermutation { images }
    }

    fn find(&self, c: &AutomorphismConstraint) -> Option<SpherePermutation> {
        let (left, right) = self.initial(c)?;
        let map = self.search(left, right)?;
        let perm = self.to_permutation(&map);
        debug_assert!(perm.preserves(self.graph) && perm.satisfies(c));
        Some(perm)
    }
}

fn distinct(left: &Colouring, right: &Colouring) -> usize {
    left.iter().chain(right).collect::<BTreeSet<_>>().len()
}

fn same_histogram(left: &Colouring, right: &Colouring) -> bool {
    let hist = |c: &Colouring| {
        let mut h = c.clone();
        h.sort_unstable();
        h
    };
    hist(left) == hist(right)
}

/// A rooted automorphism of the ball satisfying `c`, or `None` when the
/// exhaustive search finds none.
pub fn find_rooted_automorphism(g: &LayeredGraph, c: &AutomorphismConstraint) -> Result<Option<SpherePermutation>> {
    c.validate(g)?;
    Ok(Search::new(g).find(c))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereOrbit {
    pub sphere: usize,
    /// Indices reachable from vertex 0 of the sphere.
    pub orbit: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub verdict: Verdict,
    pub depth: usize,
    pub orbits: Vec<SphereOrbit>,
    /// First vertex pair `(representative, v)` with no automorphism.
    pub first_split: Option<(VertexId, VertexId)>,
}

/// Transitivity of the rooted automorphism group of the ball on each
/// sphere, tested from vertex 0 of each sphere.
pub fn check_spherically_symmetric(g: &LayeredGraph) -> SymmetryReport {
    let search = Search::new(g);
    let mut orbits = Vec::new();
    let mut first_split = None;
    for n in 0..=g.depth() {
        let rep = VertexId::new(n, 0);
        let mut reached = vec![false; g.sphere_size(n)];
        reached[0] = true;
        for i in 1..g.sphere_size(n) {
            if reached[i] {
                continue;
            }
            let c = AutomorphismConstraint::mapping(rep, VertexId::new(n, i));
            match search.find(&c) {
                Some(perm) => {
                    // close the known orbit under the new automorphism
                    let mut stack: Vec<usize> = (0..reached.len()).filter(|&j| reached[j]).collect();
                    while let Some(j) = stack.pop() {
                        let k = perm.images[n][j];
                        if !reached[k] {
                            reached[k] = true;
                            stack.push(k);
                        }
                    }
                }
                None => {
                    if first_split.is_none() {
                        first_split = Some((rep, VertexId::new(n, i)));
                    }
                }
            }
        }
        orbits.push(SphereOrbit {
            sphere: n,
            orbit: (0..reached.len()).filter(|&j| reached[j]).collect(),
        });
    }
    SymmetryReport {
        verdict: Verdict::from_pass(first_split.is_none()),
        depth: g.depth(),
        orbits,
        first_split,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyCondition {
    /// Forward brothers, with `S_{n+1}, S_{n+2}, ...` fixed pointwise.
    ForwardBrothers,
    /// Backward brothers, with `S_0, ..., S_{n-1}` fixed pointwise.
    BackwardBrothers,
    /// Neighbors inside a sphere, swapped.
    Neighbors,
}

impl FamilyCondition {
    pub const ALL: [FamilyCondition; 3] = [Self::ForwardBrothers, Self::BackwardBrothers, Self::Neighbors];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::ForwardBrothers => "i",
            Self::BackwardBrothers => "ii",
            Self::Neighbors => "iii",
        }
    }

    /// Constraint for the pair `(x, y)` of `S_n` in a ball of depth `depth`.
    pub fn constraint(self, x: VertexId, y: VertexId, depth: usize) -> AutomorphismConstraint {
        let n = x.sphere;
        match self {
            Self::ForwardBrothers => AutomorphismConstraint::mapping(x, y).fix_spheres(n + 1..=depth),
            Self::BackwardBrothers => AutomorphismConstraint::mapping(x, y).fix_spheres(0..n),
            Self::Neighbors => AutomorphismConstraint {
                required_images: vec![(x, y), (y, x)],
                ..Default::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyWitness {
    pub condition: FamilyCondition,
    pub x: VertexId,
    pub y: VertexId,
    pub permutation: SpherePermutation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyPreservingReport {
    pub depth: usize,
    pub tested_n_max: usize,
    /// Verdicts for conditions (i), (ii), (iii), in that order.
    pub conditions: [Verdict; 3],
    /// Pairs `x < y` with no admissible automorphism.
    pub counterexamples: Vec<(FamilyCondition, VertexId, VertexId)>,
    pub witnesses: Vec<FamilyWitness>,
    pub warnings: Vec<String>,
}

impl FamilyPreservingReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_pass(self.conditions.iter().all(|v| v.passed()))
    }

    pub fn condition(&self, c: FamilyCondition) -> Verdict {
        self.conditions[c as usize]
    }
}

fn brother_pairs(g: &LayeredGraph, n: usize, condition: FamilyCondition) -> Vec<(usize, usize)> {
    let size = g.sphere_size(n);
    let related = |x: usize, y: usize| -> bool {
        match condition {
            FamilyCondition::ForwardBrothers => {
                let e = g.cross(n);
                (0..e.rows()).any(|c| e[(c, x)] != 0 && e[(c, y)] != 0)
            }
            FamilyCondition::BackwardBrothers => {
                let e = g.cross(n - 1);
                (0..e.cols()).any(|p| e[(x, p)] != 0 && e[(y, p)] != 0)
            }
            FamilyCondition::Neighbors => g.intra(n)[(x, y)] != 0,
        }
    };
    (0..size)
        .flat_map(|x| (x + 1..size).map(move |y| (x, y)))
        .filter(|&(x, y)| related(x, y))
        .collect()
}

/// Checks the three family conditions on spheres `0..=n_max`. Forward
/// brothers need `S_{n+1}` and are tested only for `n < depth`.
pub fn check_family_preserving(g: &LayeredGraph, n_max: usize) -> FamilyPreservingReport {
    let depth = g.depth();
    let mut warnings = Vec::new();
    if n_max + 1 > depth {
        warnings.push(format!(
            "n_max {n_max} clamped: forward brothers tested up to sphere {}",
            depth.saturating_sub(1)
        ));
    }
    let tested_n_max = n_max.min(depth);
    let search = Search::new(g);
    let mut counterexamples = Vec::new();
    let mut witnesses = Vec::new();
    for condition in FamilyCondition::ALL {
        for n in 0..=tested_n_max {
            let applicable = match condition {
                FamilyCondition::ForwardBrothers => n < depth,
                FamilyCondition::BackwardBrothers => n >= 1,
                FamilyCondition::Neighbors => true,
            };
            if !applicable {
                continue;
            }
            for (x, y) in brother_pairs(g, n, condition) {
                let (x, y) = (VertexId::new(n, x), VertexId::new(n, y));
                match search.find(&condition.constraint(x, y, depth)) {
                    Some(permutation) => witnesses.push(FamilyWitness {
                        condition,
                        x,
                        y,
                        permutation,
                    }),
                    None => counterexamples.push((condition, x, y)),
                }
            }
        }
    }
    let conditions = FamilyCondition::ALL.map(|c| Verdict::from_pass(counterexamples.iter().all(|&(k, _, _)| k != c)));
    FamilyPreservingReport {
        depth,
        tested_n_max,
        conditions,
        counterexamples,
        witnesses,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Fixture;
    use crate::graph::{build_antitree, build_tree_complete_spheres};

    #[test]
    fn antitree_swap() {
        let g = build_antitree(&"1;2,2".parse().unwrap(), 2).unwrap();
        let c = AutomorphismConstraint::mapping(VertexId::new(1, 0), VertexId::new(1, 1));
        let p = find_rooted_automorphism(&g, &c).unwrap().unwrap();
        assert!(p.preserves(&g) && p.satisfies(&c));
        assert_eq!(p.images()[1], vec![1, 0]);
    }

    #[test]
    fn identity_when_unconstrained() {
        let g = Fixture::Fig3a.graph(0).unwrap();
        let p = find_rooted_automorphism(&g, &AutomorphismConstraint::default()).unwrap().unwrap();
        assert!(p.preserves(&g));
        let fixed = AutomorphismConstraint::default().fix_spheres(0..=g.depth());
        assert!(find_rooted_automorphism(&g, &fixed).unwrap().unwrap().is_identity());
    }

    #[test]
    fn degree_obstruction() {
        let f = Fixture::Fig3a;
        let g = f.graph(0).unwrap();
        let c = AutomorphismConstraint::mapping(f.label("v2").unwrap(), f.label("v3").unwrap());
        assert_eq!(find_rooted_automorphism(&g, &c).unwrap(), None);
    }

    #[test]
    fn bad_constraints_are_errors() {
        let g = Fixture::Fig3a.graph(0).unwrap();
        let c = AutomorphismConstraint::mapping(VertexId::new(1, 0), VertexId::new(2, 0));
        assert!(find_rooted_automorphism(&g, &c).is_err());
        let c = AutomorphismConstraint::default().fix_spheres([7]);
        assert!(find_rooted_automorphism(&g, &c).is_err());
    }

    #[test]
    fn conflicting_constraints_have_no_solution() {
        let g = build_antitree(&"1;2,2".parse().unwrap(), 2).unwrap();
        let c = AutomorphismConstraint::mapping(VertexId::new(1, 0), VertexId::new(1, 1)).fix_spheres([1]);
        assert_eq!(find_rooted_automorphism(&g, &c).unwrap(), None);
    }

    #[test]
    fn spherical_symmetry_of_fixtures() {
        let a = check_spherically_symmetric(&Fixture::Fig4a.graph(2).unwrap());
        assert_eq!(a.verdict, Verdict::Fail);
        assert_eq!(a.first_split, Some((VertexId::new(3, 0), VertexId::new(3, 1))));
        let b = check_spherically_symmetric(&Fixture::Fig4b.graph(2).unwrap());
        assert_eq!(b.verdict, Verdict::Pass);
    }

    #[test]
    fn family_preserving_examples() {
        let g = build_antitree(&"1;2,3".parse().unwrap(), 5).unwrap();
        let r = check_family_preserving(&g, 4);
        assert_eq!(r.verdict(), Verdict::Pass);
        for w in &r.witnesses {
            let c = w.condition.constraint(w.x, w.y, r.depth);
            assert!(w.permutation.preserves(&g) && w.permutation.satisfies(&c));
        }
        let t = build_tree_complete_spheres(&"2".parse().unwrap(), &"1".parse().unwrap(), 4).unwrap();
        assert_eq!(check_family_preserving(&t, 3).verdict(), Verdict::Pass);
        let f5 = check_family_preserving(&Fixture::Fig5.graph(2).unwrap(), 3);
        assert_eq!(f5.verdict(), Verdict::Fail);
        assert!(!f5.counterexamples.is_empty());
    }

    #[test]
    fn composition_is_an_automorphism() {
        let g = build_antitree(&"1;3".parse().unwrap(), 2).unwrap();
        let c1 = AutomorphismConstraint::mapping(VertexId::new(1, 0), VertexId::new(1, 1));
        let c2 = AutomorphismConstraint::mapping(VertexId::new(2, 0), VertexId::new(2, 2));
        let p1 = find_rooted_automorphism(&g, &c1).unwrap().unwrap();
        let p2 = find_rooted_automorphism(&g, &c2).unwrap().unwrap();
        let comp = p2.after(&p1);
        assert!(comp.preserves(&g));
        let v = VertexId::new(1, 0);
        let c = AutomorphismConstraint::mapping(v, comp.apply(v));
        assert!(find_rooted_automorphism(&g, &c).unwrap().is_some());
        assert!(p1.after(&p1.inverse()).is_identity());
    }
}
