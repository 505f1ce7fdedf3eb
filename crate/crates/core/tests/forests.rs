use std::collections::{BTreeSet, HashSet};

use phylomso::decomposition::{decomposition_from_forest, validate};
use phylomso::displaygraph::build_display;
use phylomso::forests::{
    apply_cuts, inheritance_graph, is_agreement_forest, is_tree_sequence, maaf, maf_rooted, min_tree_sequence,
    umaf, AgreementForest,
};
use phylomso::treeio::{
    all_rooted_trees, all_unrooted_trees, augment_root, is_isomorphic, quartet_set, random_unrooted_tree, restrict,
    triplet_set, PhyloTree, RHO,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Signature = BTreeSet<(BTreeSet<String>, String)>;

/// Components of every cut set, described by taxa and a topology fingerprint
/// built from quartets (unrooted) or triplets of the rooted restriction.
fn signatures(tree: &PhyloTree) -> Vec<Signature> {
    let (cut_tree, rooted) = if tree.is_rooted() {
        (augment_root(tree).unwrap(), Some(tree))
    } else {
        (tree.clone(), None)
    };
    let m = cut_tree.edge_count();
    (0..1usize << m)
        .filter_map(|mask| {
            let k: Vec<usize> = (0..m).filter(|e| mask >> e & 1 == 1).collect();
            let f = apply_cuts(&cut_tree, &k).unwrap();
            if f.dropped > 0 {
                return None;
            }
            Some(
                f.components
                    .iter()
                    .map(|c| {
                        let taxa = c.taxa();
                        let print = match rooted {
                            None => format!("{:?}", quartet_set(c)),
                            Some(t) => {
                                let rest: Vec<&String> = taxa.iter().filter(|x| *x != RHO).collect();
                                if rest.is_empty() {
                                    String::new()
                                } else {
                                    format!("{:?}", triplet_set(&restrict(t, &rest).unwrap()))
                                }
                            }
                        };
                        (taxa, print)
                    })
                    .collect(),
            )
        })
        .collect()
}

fn brute_force_size(t1: &PhyloTree, t2: &PhyloTree) -> usize {
    let s2: HashSet<Signature> = signatures(t2).into_iter().collect();
    signatures(t1)
        .into_iter()
        .filter(|s| s2.contains(s))
        .map(|s| s.len())
        .min()
        .unwrap()
}

fn reapply(t1: &PhyloTree, t2: &PhyloTree, f: &AgreementForest) {
    let again = is_agreement_forest(t1, t2, &f.k1, &f.k2).unwrap().expect("certificate must agree");
    assert_eq!(again.blocks(), f.blocks());
    assert_eq!(f.k1.len(), f.size() - 1);
    assert_eq!(f.k2.len(), f.size() - 1);
}

#[test]
fn umaf_matches_exhaustive_cuts_on_five_taxa() {
    let trees = all_unrooted_trees(&["a", "b", "c", "d", "e"]);
    for t1 in &trees {
        for t2 in &trees {
            let f = umaf(t1, t2).unwrap();
            assert_eq!(f.size(), brute_force_size(t1, t2), "{t1} {t2}");
            reapply(t1, t2, &f);
            assert_eq!(f.size() == 1, is_isomorphic(t1, t2).unwrap());
            assert_eq!(umaf(t2, t1).unwrap().size(), f.size());
        }
    }
}

#[test]
fn umaf_matches_exhaustive_cuts_on_random_six_taxa() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let labels = ["a", "b", "c", "d", "e", "f"];
    for _ in 0..25 {
        let t1 = random_unrooted_tree(&labels, &mut rng);
        let t2 = random_unrooted_tree(&labels, &mut rng);
        let f = umaf(&t1, &t2).unwrap();
        assert_eq!(f.size(), brute_force_size(&t1, &t2), "{t1} {t2}");
        reapply(&t1, &t2, &f);
    }
}

#[test]
fn rooted_forests_on_four_taxa() {
    let trees = all_rooted_trees(&["a", "b", "c", "d"]);
    for t1 in &trees {
        for t2 in &trees {
            let maf = maf_rooted(t1, t2).unwrap();
            assert_eq!(maf.size(), brute_force_size(t1, t2), "{t1} {t2}");
            reapply(t1, t2, &maf);
            let acyclic = maaf(t1, t2).unwrap();
            reapply(t1, t2, &acyclic);
            assert!(inheritance_graph(t1, t2, &acyclic).unwrap().is_acyclic());
            assert!(acyclic.size() >= maf.size());
            let u = umaf(&augment_root(t1).unwrap(), &augment_root(t2).unwrap()).unwrap();
            assert!(maf.size() >= u.size());
            let seq = min_tree_sequence(t1, t2).unwrap();
            assert!(is_tree_sequence(t1, t2, &seq.sets).unwrap());
            assert_eq!(seq.len() + 1, acyclic.size(), "{t1} {t2}");
        }
    }
}

#[test]
fn some_four_taxon_forest_has_a_two_cycle() {
    let trees = all_rooted_trees(&["a", "b", "c", "d"]);
    let small_cuts: Vec<Vec<usize>> = (0..1usize << 7)
        .filter(|m| m.count_ones() <= 3)
        .map(|m| (0..7).filter(|e| m >> e & 1 == 1).collect())
        .collect();
    let found = trees.iter().any(|t1| {
        trees.iter().any(|t2| {
            small_cuts.iter().any(|k1| {
                small_cuts.iter().any(|k2| {
                    let Some(f) = is_agreement_forest(t1, t2, k1, k2).unwrap() else {
                        return false;
                    };
                    let g = inheritance_graph(t1, t2, &f).unwrap();
                    g.arcs.iter().any(|&(i, j)| g.arcs.contains(&(j, i))) && !g.is_acyclic()
                })
            })
        })
    });
    assert!(found);
}

#[test]
fn tree_sequences_match_acyclic_forests_on_five_taxa() {
    let trees = all_rooted_trees(&["a", "b", "c", "d", "e"]);
    for (i, t1) in trees.iter().enumerate() {
        for t2 in trees.iter().skip(i) {
            let h = maaf(t1, t2).unwrap().size() - 1;
            assert_eq!(min_tree_sequence(t1, t2).unwrap().len(), h, "{t1} {t2}");
        }
    }
}

#[test]
fn forest_decompositions_are_valid_on_five_taxa() {
    let trees = all_unrooted_trees(&["a", "b", "c", "d", "e"]);
    for t1 in &trees {
        for t2 in &trees {
            let f = umaf(t1, t2).unwrap();
            let g = build_display(t1, t2).unwrap().graph();
            let td = decomposition_from_forest(t1, t2, &f).unwrap();
            assert_eq!(validate(&td, &g), Ok(()), "{t1} {t2}");
            assert!(td.width() <= f.size() + 1);
        }
    }
    let rooted = all_rooted_trees(&["a", "b", "c", "d"]);
    for t1 in &rooted {
        for t2 in &rooted {
            for f in [maf_rooted(t1, t2).unwrap(), maaf(t1, t2).unwrap()] {
                let g = build_display(t1, t2).unwrap().graph();
                let td = decomposition_from_forest(t1, t2, &f).unwrap();
                assert_eq!(validate(&td, &g), Ok(()), "{t1} {t2}");
                assert!(td.width() <= f.size() + 1);
            }
        }
    }
}

#[test]
fn non_minimal_forests_with_taxa_free_pieces_still_decompose() {
    let t1 = phylomso::treeio::parse_newick("((a,b),(c,d),(e,f));").unwrap();
    let t2 = phylomso::treeio::parse_newick("((a,c),(b,e),(d,f));").unwrap();
    // cut every edge: all singletons, centre vertices become taxa-free
    let k1: Vec<usize> = (0..t1.edge_count()).collect();
    let k2: Vec<usize> = (0..t2.edge_count()).collect();
    let f = is_agreement_forest(&t1, &t2, &k1, &k2).unwrap().unwrap();
    assert_eq!(f.size(), 6);
    let g = build_display(&t1, &t2).unwrap().graph();
    let td = decomposition_from_forest(&t1, &t2, &f).unwrap();
    assert_eq!(validate(&td, &g), Ok(()));
}
