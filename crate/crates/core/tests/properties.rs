use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use phylomso::decomposition::{decomposition_from_forest, validate};
use phylomso::displaygraph::{build_display, VertexTag};
use phylomso::forests::umaf;
use phylomso::treeio::{
    augment_root, deaugment, default_labels, is_isomorphic, parse_newick, random_rooted_tree, random_unrooted_tree,
    root_on_edge, PhyloTree,
};

fn tree(n: usize, seed: u64, rooted: bool) -> PhyloTree {
    let labels = default_labels(n);
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if rooted {
        random_rooted_tree(&refs, &mut rng)
    } else {
        random_unrooted_tree(&refs, &mut rng)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn newick_round_trip(n in 3usize..12, seed: u64, rooted: bool) {
        let t = tree(n, seed, rooted);
        let back = parse_newick(&t.to_newick()).unwrap();
        prop_assert_eq!(back.to_newick(), t.to_newick());
        prop_assert!(is_isomorphic(&t, &back).unwrap());
        prop_assert_eq!(back.is_rooted(), rooted);
    }

    #[test]
    fn rooting_keeps_the_unrooted_topology(n in 3usize..10, seed: u64, pick: usize) {
        let t = tree(n, seed, false);
        let e = pick % t.edge_count();
        let r = root_on_edge(&t, e).unwrap();
        prop_assert!(r.is_rooted());
        prop_assert_eq!(r.taxa(), t.taxa());
        prop_assert!(is_isomorphic(&deaugment(&augment_root(&r).unwrap()).unwrap(), &r).unwrap());
    }

    #[test]
    fn restriction_keeps_chosen_taxa(n in 4usize..10, seed: u64, keep_mask in 7u64..1024) {
        let t = tree(n, seed, false);
        let labels = default_labels(n);
        let keep: Vec<&String> = labels.iter().enumerate().filter(|(i, _)| keep_mask >> i & 1 == 1).map(|(_, l)| l).collect();
        prop_assume!(keep.len() >= 3);
        let r = t.restrict(&keep).unwrap();
        prop_assert_eq!(r.leaf_count(), keep.len());
        prop_assert_eq!(r.edge_count(), 2 * keep.len() - 3);
    }

    #[test]
    fn display_graph_shape(n in 3usize..10, s1: u64, s2: u64, rooted: bool) {
        let t1 = tree(n, s1, rooted);
        let t2 = tree(n, s2, rooted);
        let d = build_display(&t1, &t2).unwrap();
        let x = n + usize::from(rooted);
        prop_assert_eq!(d.taxon_count(), x);
        prop_assert_eq!(d.vertex_count(), 3 * x - 4);
        prop_assert_eq!(d.edge_count(), 4 * x - 6);
        for v in 0..d.vertex_count() {
            let degree = d.incident(v).len();
            match d.vertex_tag(v) {
                VertexTag::Taxon | VertexTag::Rho => prop_assert_eq!(degree, 2),
                _ => prop_assert_eq!(degree, 3),
            }
        }
        let v1 = d.v1();
        let taxa: Vec<usize> = (0..d.vertex_count()).filter(|&v| d.is_taxon(v)).collect();
        for &a in &taxa {
            for &b in &taxa {
                prop_assert!(d.path_avoiding_cuts(&v1, a, b, &[]).unwrap());
            }
        }
    }

    #[test]
    fn forest_decomposition_is_valid(n in 4usize..9, s1: u64, s2: u64) {
        let t1 = tree(n, s1, false);
        let t2 = tree(n, s2, false);
        let f = umaf(&t1, &t2).unwrap();
        let td = decomposition_from_forest(&t1, &t2, &f).unwrap();
        prop_assert!(validate(&td, &build_display(&t1, &t2).unwrap().graph()).is_ok());
        prop_assert!(td.width() <= f.size() + 1);
    }
}
