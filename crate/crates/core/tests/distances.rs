use phylomso::distances::{
    d2mp, d_rspr, d_tbr, fitch_bruteforce, fitch_score, fitch_score_rooted_at, hyb_number, rspr_distances_from,
    tbr_distances_from, tbr_move_bfs, tbr_neighbors, Character, D2MP_DEFAULT_BOUND,
};
use phylomso::forests::umaf;
use phylomso::treeio::{all_rooted_trees, all_unrooted_trees, is_isomorphic, parse_newick, random_unrooted_tree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn tbr_distance_matches_move_search_up_to_five_taxa() {
    for n in 4..=5 {
        let labels = &["a", "b", "c", "d", "e"][..n];
        let trees = all_unrooted_trees(labels);
        for t1 in &trees {
            let bfs = tbr_distances_from(t1).unwrap();
            assert_eq!(bfs.len(), trees.len());
            for t2 in &trees {
                let (d, _) = d_tbr(t1, t2).unwrap();
                assert_eq!(d, bfs[&t2.to_newick()], "{t1} {t2}");
                assert_eq!(d == 0, is_isomorphic(t1, t2).unwrap());
            }
        }
    }
}

#[test]
fn tbr_distance_matches_move_search_on_random_six_taxa() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let labels = ["a", "b", "c", "d", "e", "f"];
    for _ in 0..50 {
        let t1 = random_unrooted_tree(&labels, &mut rng);
        let t2 = random_unrooted_tree(&labels, &mut rng);
        assert_eq!(d_tbr(&t1, &t2).unwrap().0, tbr_move_bfs(&t1, &t2).unwrap(), "{t1} {t2}");
    }
}

#[test]
fn caterpillar_neighbours_have_two_component_forests() {
    let cat = parse_newick("(a,b,(c,(d,e)));").unwrap();
    for n in tbr_neighbors(&cat) {
        if !is_isomorphic(&cat, &n).unwrap() {
            assert_eq!(umaf(&cat, &n).unwrap().size(), 2);
        }
    }
}

#[test]
fn rspr_distance_matches_move_search_up_to_five_taxa() {
    for n in 2..=5 {
        let labels = &["a", "b", "c", "d", "e"][..n];
        let trees = all_rooted_trees(labels);
        for t1 in &trees {
            let bfs = rspr_distances_from(t1).unwrap();
            assert_eq!(bfs.len(), trees.len());
            for t2 in &trees {
                let (d, _) = d_rspr(t1, t2).unwrap();
                assert_eq!(d, bfs[&t2.to_newick()], "{t1} {t2}");
                assert_eq!(d == 0, is_isomorphic(t1, t2).unwrap());
            }
        }
    }
}

#[test]
fn hybridization_number_has_matching_certificates() {
    let trees = all_rooted_trees(&["a", "b", "c", "d"]);
    for t1 in &trees {
        for t2 in &trees {
            let h = hyb_number(t1, t2, true).unwrap();
            assert!(h.value >= d_rspr(t1, t2).unwrap().0);
            assert_eq!(h.value == 0, is_isomorphic(t1, t2).unwrap());
        }
    }
}

#[test]
fn fitch_matches_exhaustive_colouring_and_ignores_rooting() {
    for n in 3..=6 {
        let labels = &["a", "b", "c", "d", "e", "f"][..n];
        let taxa: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        for t in all_unrooted_trees(labels) {
            for mask in 0u64..1 << n {
                let f = Character::from_mask(&taxa, mask);
                let score = fitch_score(&t, &f).unwrap().score;
                assert_eq!(score, fitch_bruteforce(&t, &f).unwrap());
                for e in 0..t.edge_count() {
                    assert_eq!(fitch_score_rooted_at(&t, e, &f).unwrap(), score);
                }
            }
        }
    }
}

#[test]
fn parsimony_distance_is_bounded_by_tbr() {
    let trees = all_unrooted_trees(&["a", "b", "c", "d", "e"]);
    for t1 in &trees {
        for t2 in &trees {
            let d = d2mp(t1, t2, D2MP_DEFAULT_BOUND).unwrap();
            assert!(d.value <= d_tbr(t1, t2).unwrap().0);
            assert_eq!(d.value, d2mp(t2, t1, D2MP_DEFAULT_BOUND).unwrap().value);
            assert_eq!(d.value == 0, is_isomorphic(t1, t2).unwrap());
            assert_eq!(d.value, d.scores.0.abs_diff(d.scores.1));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let labels = ["a", "b", "c", "d", "e", "f", "g", "h"];
    for _ in 0..20 {
        let t1 = random_unrooted_tree(&labels, &mut rng);
        let t2 = random_unrooted_tree(&labels, &mut rng);
        assert!(d2mp(&t1, &t2, D2MP_DEFAULT_BOUND).unwrap().value <= d_tbr(&t1, &t2).unwrap().0);
    }
}
