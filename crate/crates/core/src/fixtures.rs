//! Small named graphs used as counterexamples.
//!
//! | name    | shape                                                        |
//! |---------|--------------------------------------------------------------|
//! | `fig3a` | tree, `v3` has two children and `v2` one                     |
//! | `fig3b` | tree, `v2` and `v3` have one child each                      |
//! | `fig4a` | `v5` shared by `v2` and `v3`, boundary continued by rays     |
//! | `fig4b` | three branches re-joined cyclically in `S_3`, rays after     |
//! | `fig5`  | `S_1` and `S_2` form a 6-cycle, rays after `S_2`              |
//!
//! Vertex labels `v1, v2, ...` number the vertices sphere by sphere in
//! index order, so `label(name, "v5")` is stable.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{LayeredGraph, VertexId};
use crate::lgf::parse_lgf;

/// Default number of extra spheres appended to open-ended fixtures.
pub const DEFAULT_RAY_LENGTH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixture {
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5,
}

impl Fixture {
    pub const ALL: [Fixture; 5] = [Self::Fig3a, Self::Fig3b, Self::Fig4a, Self::Fig4b, Self::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig3a => "fig3a",
            Self::Fig3b => "fig3b",
            Self::Fig4a => "fig4a",
            Self::Fig4b => "fig4b",
            Self::Fig5 => "fig5",
        }
    }

    pub fn lgf(self) -> &'static str {
        match self {
            Self::Fig3a => include_str!("../fixtures/fig3a.lgf"),
            Self::Fig3b => include_str!("../fixtures/fig3b.lgf"),
            Self::Fig4a => include_str!("../fixtures/fig4a.lgf"),
            Self::Fig4b => include_str!("../fixtures/fig4b.lgf"),
            Self::Fig5 => include_str!("../fixtures/fig5.lgf"),
        }
    }

    /// Whether the graph continues past the stored spheres.
    pub fn is_open(self) -> bool {
        matches!(self, Self::Fig4a | Self::Fig4b | Self::Fig5)
    }

    /// The fixture with `ray_length` extra spheres on open ends.
    pub fn graph(self, ray_length: usize) -> Result<LayeredGraph> {
        let g = parse_lgf(self.lgf())?;
        if self.is_open() {
            g.with_rays(ray_length)
        } else {
            Ok(g)
        }
    }

    /// `v1, v2, ...` in sphere-major order; the root is `o`.
    pub fn label(self, label: &str) -> Result<VertexId> {
        let g = parse_lgf(self.lgf())?;
        if label == "o" {
            return Ok(VertexId::ROOT);
        }
        let k: usize = label
            .strip_prefix('v')
            .and_then(|s| s.parse().ok())
            .filter(|&k| k >= 1 && k < g.vertex_count())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex label {label:?} for {}", self.name())))?;
        Ok(g.vertex_at(k))
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown fixture {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_parse() {
        for f in Fixture::ALL {
            let g = f.graph(DEFAULT_RAY_LENGTH).unwrap();
            assert_eq!(g.sphere_size(0), 1);
            assert_eq!(f.name().parse::<Fixture>().unwrap(), f);
        }
        assert!("fig9".parse::<Fixture>().is_err());
    }

    #[test]
    fn labels_follow_sphere_order() {
        assert_eq!(Fixture::Fig3a.label("v2").unwrap(), VertexId::new(2, 0));
        assert_eq!(Fixture::Fig3a.label("v6").unwrap(), VertexId::new(3, 2));
        assert_eq!(Fixture::Fig4b.label("v7").unwrap(), VertexId::new(2, 3));
        assert_eq!(Fixture::Fig4b.label("v12").unwrap(), VertexId::new(3, 2));
        assert!(Fixture::Fig3b.label("v9").is_err());
    }

    #[test]
    fn rays_extend_open_fixtures() {
        let g = Fixture::Fig4a.graph(3).unwrap();
        assert_eq!(g.sphere_sizes(), &[1, 1, 2, 3, 3, 3, 3]);
        assert_eq!(g.outward_degrees(), &[1, 1, 1]);
        assert_eq!(Fixture::Fig3a.graph(3).unwrap().depth(), 3);
        let g0 = Fixture::Fig5.graph(0).unwrap();
        assert_eq!(g0.sphere_sizes(), &[1, 3, 3]);
    }
}
