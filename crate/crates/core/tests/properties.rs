mod common;

use proptest::prelude::*;
use spectral_layers::automorphism::{
    check_spherically_symmetric, find_rooted_automorphism, AutomorphismConstraint,
};
use spectral_layers::decomposition::{
    antitree_closed_form, reconcile, tree_cs_closed_form, tridiagonalize, DEFAULT_TOL,
};
use spectral_layers::jacobi::{eigenvalues_tridiagonal, max_sorted_deviation, spectrum_union, sturm_count, JacobiMatrix};
use spectral_layers::lgf::{parse_lgf, serialize_lgf};
use spectral_layers::operator::dense_eigenvalues;
use spectral_layers::paths::{
    check_commuting_family, check_path_commuting, species_matrix, PathEnumerator, PathSpecies, Verdict,
};
use spectral_layers::{
    build_antitree, build_tree_complete_spheres, compress_operator, LayeredGraph, LayeredGraphBuilder, OperatorKind,
    SequenceSpec, VertexId,
};

use common::{jacobi_rotation_eigenvalues, tridiagonal_dense};

fn sequence(max: u64) -> impl Strategy<Value = SequenceSpec> {
    (
        prop::collection::vec(1..=max, 0..3),
        prop::collection::vec(1..=max, 1..3),
    )
        .prop_map(|(prefix, tail)| SequenceSpec::new(prefix, Some(tail)).unwrap())
}

fn antitree_spec() -> impl Strategy<Value = SequenceSpec> {
    sequence(4).prop_map(|s| {
        let mut prefix = vec![1];
        prefix.extend_from_slice(s.prefix());
        SequenceSpec::new(prefix, s.tail().map(<[u64]>::to_vec)).unwrap()
    })
}

fn bits() -> impl Strategy<Value = SequenceSpec> {
    (prop::collection::vec(0..=1u64, 0..4), prop::collection::vec(0..=1u64, 1..3))
        .prop_map(|(p, t)| SequenceSpec::new(p, Some(t)).unwrap())
}

/// Random connected layered ball with up to four vertices per sphere.
fn layered_graph() -> impl Strategy<Value = LayeredGraph> {
    prop::collection::vec(1..=4usize, 1..=4)
        .prop_flat_map(|tail| {
            let mut sizes = vec![1];
            sizes.extend(tail);
            let depth = sizes.len() - 1;
            let cross_bits: usize = (0..depth).map(|n| sizes[n] * sizes[n + 1]).sum();
            let intra_bits: usize = sizes.iter().map(|s| s * s).sum();
            (
                Just(sizes.clone()),
                prop::collection::vec(any::<bool>(), cross_bits),
                prop::collection::vec(any::<bool>(), intra_bits),
                prop::collection::vec(0..=2u64, sizes[depth]),
            )
        })
        .prop_map(|(sizes, cross, intra, outward)| {
            let depth = sizes.len() - 1;
            let mut b = LayeredGraphBuilder::new(sizes.clone()).unwrap();
            let mut bit = cross.into_iter();
            for n in 0..depth {
                for c in 0..sizes[n + 1] {
                    let mut any = false;
                    for p in 0..sizes[n] {
                        if bit.next().unwrap() {
                            b.add_cross(n, p, c).unwrap();
                            any = true;
                        }
                    }
                    if !any {
                        b.add_cross(n, c % sizes[n], c).unwrap();
                    }
                }
            }
            let mut bit = intra.into_iter();
            for (n, &s) in sizes.iter().enumerate() {
                for i in 0..s {
                    for j in 0..s {
                        if bit.next().unwrap() && i < j {
                            b.add_intra(n, i, j).unwrap();
                        }
                    }
                }
            }
            for (i, d) in outward.into_iter().enumerate() {
                b.set_outward(i, d).unwrap();
            }
            b.build().unwrap()
        })
}

fn tridiagonal() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=30usize).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(0.01..5.0f64, n - 1),
        )
    })
}

fn dense_spectrum(g: &LayeredGraph, kind: OperatorKind) -> Vec<f64> {
    dense_eigenvalues(&compress_operator(g, kind).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn antitree_closed_form_matches_dense(s in antitree_spec(), depth in 1..=7usize, kind_id in 0..3usize) {
        let kind = OperatorKind::ALL[kind_id];
        let g = build_antitree(&s, depth).unwrap();
        let d = antitree_closed_form(&s, depth, kind).unwrap();
        let union = spectrum_union(&d, 1e-13).unwrap().values();
        let dev = max_sorted_deviation(&union, &dense_spectrum(&g, kind)).unwrap();
        prop_assert!(dev < 1e-8, "{s} depth {depth} {kind}: {dev:e}");
    }

    #[test]
    fn antitree_generic_reconciles(s in antitree_spec(), depth in 1..=6usize) {
        let g = build_antitree(&s, depth).unwrap();
        let generic = tridiagonalize(&g, OperatorKind::Laplacian, DEFAULT_TOL).unwrap();
        let closed = antitree_closed_form(&s, depth, OperatorKind::Laplacian).unwrap();
        let r = reconcile(&generic, &closed, 1e-9);
        prop_assert_eq!(r.verdict, Verdict::Pass, "{} depth {}: {:?}", s, depth, r.first_deviation);
    }

    #[test]
    fn tree_cs_closed_form_matches_dense(k in sequence(3), gamma in bits(), depth in 1..=4usize) {
        let g = build_tree_complete_spheres(&k, &gamma, depth).unwrap();
        let d = tree_cs_closed_form(&k, &gamma, depth).unwrap();
        prop_assert_eq!(d.dimension(), Some(g.vertex_count() as u64));
        let union = spectrum_union(&d, 1e-13).unwrap().values();
        let dev = max_sorted_deviation(&union, &dense_spectrum(&g, OperatorKind::Laplacian)).unwrap();
        prop_assert!(dev < 1e-8, "k {k} gamma {gamma} depth {depth}: {dev:e}");
        let generic = tridiagonalize(&g, OperatorKind::Laplacian, DEFAULT_TOL).unwrap();
        prop_assert_eq!(reconcile(&generic, &d, 1e-9).verdict, Verdict::Pass);
    }

    #[test]
    fn symmetric_families_are_symmetric(s in antitree_spec(), k in sequence(3), gamma in bits(), depth in 1..=3usize) {
        let a = build_antitree(&s, depth).unwrap();
        prop_assert_eq!(check_spherically_symmetric(&a).verdict, Verdict::Pass);
        let t = build_tree_complete_spheres(&k, &gamma, depth).unwrap();
        prop_assert_eq!(check_spherically_symmetric(&t).verdict, Verdict::Pass);
        prop_assert_eq!(check_path_commuting(&t, depth, depth).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn sturm_matches_rotation_oracle((b, a) in tridiagonal(), probes in prop::collection::vec(-25.0..25.0f64, 20)) {
        let j = JacobiMatrix::new(b.clone(), a.clone()).unwrap();
        let ev = eigenvalues_tridiagonal(&j, 1e-12);
        let oracle = jacobi_rotation_eigenvalues(&tridiagonal_dense(&b, &a));
        prop_assert!(max_sorted_deviation(&ev, &oracle).unwrap() < 1e-8);
        for lambda in probes {
            prop_assert_eq!(sturm_count(&j, lambda), ev.partition_point(|&e| e < lambda));
        }
    }

    #[test]
    fn rotation_oracle_matches_nalgebra(g in layered_graph()) {
        let m = compress_operator(&g, OperatorKind::Laplacian).unwrap();
        let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect();
        let dev = max_sorted_deviation(&jacobi_rotation_eigenvalues(&rows), &dense_eigenvalues(&m)).unwrap();
        prop_assert!(dev < 1e-9);
    }

    #[test]
    fn lgf_round_trip(g in layered_graph()) {
        let text = serialize_lgf(&g);
        let back = parse_lgf(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize_lgf(&back), text);
    }

    #[test]
    fn path_commuting_iff_commuting_family(g in layered_graph()) {
        let pc = check_path_commuting(&g, g.depth(), g.depth()).unwrap().verdict;
        let fam = (0..=g.depth()).all(|n| check_commuting_family(&g, n, g.depth()).unwrap().verdict.passed());
        prop_assert_eq!(pc.passed(), fam);
    }

    #[test]
    fn matrix_counts_equal_walks(g in layered_graph()) {
        let walker = PathEnumerator::new(&g);
        for n in 0..=g.depth() {
            let mut species = Vec::new();
            for k in 1..=2 {
                for l in 1..=2 {
                    species.push(PathSpecies::ForwardBackward { k, l });
                    species.push(PathSpecies::BackwardForward { l, k });
                }
                species.extend([
                    PathSpecies::TailedForward { k },
                    PathSpecies::HeadedForward { k },
                    PathSpecies::TailedBackward { k },
                    PathSpecies::HeadedBackward { k },
                ]);
            }
            for s in species {
                let Ok(m) = species_matrix(&g, n, s) else { continue };
                for x in 0..g.sphere_size(n) {
                    let walks = walker.counts_from(s, VertexId::new(n, x));
                    for (y, &c) in walks.iter().enumerate() {
                        prop_assert_eq!(m[(y, x)] as u64, c, "{} at n={} x={} y={}", s, n, x, y);
                    }
                }
            }
        }
    }

    #[test]
    fn found_automorphisms_are_valid(g in layered_graph(), pick in any::<(usize, usize, usize)>()) {
        let n = pick.0 % (g.depth() + 1);
        let x = VertexId::new(n, pick.1 % g.sphere_size(n));
        let y = VertexId::new(n, pick.2 % g.sphere_size(n));
        let c = AutomorphismConstraint::mapping(x, y);
        if let Some(p) = find_rooted_automorphism(&g, &c).unwrap() {
            prop_assert!(p.preserves(&g));
            prop_assert!(p.satisfies(&c));
            prop_assert_eq!(p.apply(x), y);
            prop_assert!(p.after(&p.inverse()).is_identity());
        }
        let id = find_rooted_automorphism(&g, &AutomorphismConstraint::mapping(x, x)).unwrap();
        prop_assert!(id.is_some());
    }

    #[test]
    fn sequence_text_round_trip(s in sequence(9)) {
        let back: SequenceSpec = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }
}
