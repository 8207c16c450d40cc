//! Line-oriented layered-graph format (LGF).
//!
//! ```text
//! # comment
//! spheres s_0 s_1 ... s_N
//! cross n p c     # vertex p of S_n joined to vertex c of S_{n+1}
//! intra n i j     # edge inside S_n, i != j (either orientation)
//! outdeg i d      # vertex i of S_N has d neighbors in S_{N+1}; default 0
//! ```
//!
//! The canonical form puts the `spheres` line first, followed by the edge
//! lines sorted by `(keyword, n, i, j)`. Intra edges are written once with
//! `i < j`, and zero outward degrees are omitted.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{LayeredGraph, LayeredGraphBuilder};

pub fn parse_lgf(text: &str) -> Result<LayeredGraph> {
    let mut builder: Option<LayeredGraphBuilder> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next().unwrap();
        let args: Vec<u64> = tokens
            .map(|t| {
                t.parse::<u64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("expected a nonnegative integer, found {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        let at_line = |e: Error| match e {
            Error::Parse { .. } => e,
            other => Error::Parse {
                line,
                message: other.to_string(),
            },
        };
        match keyword {
            "spheres" => {
                if builder.is_some() {
                    return Err(Error::Parse {
                        line,
                        message: "duplicate spheres line".into(),
                    });
                }
                if args.is_empty() {
                    return Err(Error::Parse {
                        line,
                        message: "spheres needs at least one size".into(),
                    });
                }
                let sizes = args.iter().map(|&s| s as usize).collect();
                builder = Some(LayeredGraphBuilder::new(sizes).map_err(at_line)?);
            }
            "cross" | "intra" | "outdeg" => {
                let b = builder.as_mut().ok_or_else(|| Error::Parse {
                    line,
                    message: format!("{keyword} before spheres line"),
                })?;
                let want = if keyword == "outdeg" { 2 } else { 3 };
                if args.len() != want {
                    return Err(Error::Parse {
                        line,
                        message: format!("{keyword} takes {want} arguments, found {}", args.len()),
                    });
                }
                let a = |i: usize| args[i] as usize;
                match keyword {
                    "cross" => b.add_cross(a(0), a(1), a(2)).map(|_| ()),
                    "intra" => b.add_intra(a(0), a(1), a(2)).map(|_| ()),
                    _ => b.set_outward(a(0), args[1]).map(|_| ()),
                }
                .map_err(at_line)?;
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown keyword {other:?}"),
                })
            }
        }
    }
    builder
        .ok_or(Error::Parse {
            line: 0,
            message: "missing spheres line".into(),
        })?
        .build()
}

pub fn serialize_lgf(g: &LayeredGraph) -> String {
    let mut out = String::from("spheres");
    for s in g.sphere_sizes() {
        write!(out, " {s}").unwrap();
    }
    out.push('\n');
    for n in 0..g.depth() {
        let e = g.cross(n);
        for p in 0..e.cols() {
            for c in 0..e.rows() {
                if e[(c, p)] != 0 {
                    writeln!(out, "cross {n} {p} {c}").unwrap();
                }
            }
        }
    }
    for n in 0..=g.depth() {
        let v = g.intra(n);
        for i in 0..v.rows() {
            for j in i + 1..v.cols() {
                if v[(i, j)] != 0 {
                    writeln!(out, "intra {n} {i} {j}").unwrap();
                }
            }
        }
    }
    for (i, &d) in g.outward_degrees().iter().enumerate() {
        if d != 0 {
            writeln!(out, "outdeg {i} {d}").unwrap();
        }
    }
    out
}

/// Canonical form of an LGF document.
pub fn normalize_lgf(text: &str) -> Result<String> {
    parse_lgf(text).map(|g| serialize_lgf(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexId;

    const FORK: &str = "spheres 1 2\ncross 0 0 0\ncross 0 0 1\noutdeg 0 0\noutdeg 1 0";

    #[test]
    fn parses_path_fork() {
        let g = parse_lgf(FORK).unwrap();
        assert_eq!(g.sphere_sizes(), &[1, 2]);
        assert_eq!(g.degree(VertexId::ROOT), 2);
        assert_eq!(g.degree(VertexId::new(1, 1)), 1);
        assert_eq!(serialize_lgf(&g), "spheres 1 2\ncross 0 0 0\ncross 0 0 1\n");
    }

    #[test]
    fn self_loop_rejected() {
        let err = parse_lgf("spheres 1 2\ncross 0 0 0\ncross 0 0 1\nintra 1 0 0\n").unwrap_err();
        assert!(err.to_string().contains("self loop"), "{err}");
        assert!(matches!(err, Error::Parse { line: 4, .. }));
    }

    #[test]
    fn disconnected_vertex_rejected() {
        let err = parse_lgf("spheres 1 2\ncross 0 0 0\n").unwrap_err();
        assert!(err.to_string().contains("disconnected vertex"), "{err}");
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let err = parse_lgf("# header\nspheres 1 2\ncross 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_lgf("spheres 1 2\nbogus 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_lgf("spheres 1 2\ncross 0 0 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(err.to_string().contains("out of range"));
        assert!(parse_lgf("cross 0 0 0\n").is_err());
        assert!(parse_lgf("").is_err());
    }

    #[test]
    fn comments_and_orientation_are_normalized() {
        let text = "spheres 1 3   # three leaves\noutdeg 2 4\nintra 1 2 0\ncross 0 0 2\ncross 0 0 0\ncross 0 0 1\n";
        let canon = normalize_lgf(text).unwrap();
        assert_eq!(
            canon,
            "spheres 1 3\ncross 0 0 0\ncross 0 0 1\ncross 0 0 2\nintra 1 0 2\noutdeg 2 4\n"
        );
        assert_eq!(normalize_lgf(&canon).unwrap(), canon);
    }
}
