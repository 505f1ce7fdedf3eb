use std::collections::BTreeSet;

use itertools::Itertools;
use phylomso::displaygraph::build_display;
use phylomso::distances::{d2mp_directional, fitch_score, Character, D2MP_DEFAULT_BOUND};
use phylomso::forests::umaf;
use phylomso::msol::*;
use phylomso::treeio::{all_rooted_trees, all_unrooted_trees, parse_newick, triplet_topology, TripletTopology};
use phylomso::{PhyloTree, RHO};

fn bits(m: u64) -> Vec<usize> {
    (0..64).filter(|i| m >> i & 1 == 1).collect()
}

fn rooted_pairs(max: usize) -> Vec<(PhyloTree, PhyloTree)> {
    let names = ["a", "b", "c", "d"];
    (2..=max)
        .flat_map(|n| {
            let ts = all_rooted_trees(&names[..n]);
            ts.iter().cartesian_product(ts.iter()).map(|(a, b)| (a.clone(), b.clone())).collect_vec()
        })
        .collect()
}

fn unrooted_pairs(n: usize) -> Vec<(PhyloTree, PhyloTree)> {
    let names = ["a", "b", "c", "d", "e"];
    let ts = all_unrooted_trees(&names[..n]);
    ts.iter().cartesian_product(ts.iter()).map(|(a, b)| (a.clone(), b.clone())).collect()
}

fn all_pairs() -> Vec<(PhyloTree, PhyloTree)> {
    let mut v = rooted_pairs(4);
    v.extend(unrooted_pairs(3));
    v.extend(unrooted_pairs(4));
    v
}

#[test]
fn compiled_reachability_matches_display_graph_search() {
    for (t1, t2) in all_pairs() {
        let d = build_display(&t1, &t2).unwrap();
        let s = structure_from_display(&d).unwrap();
        let mut ev = Evaluator::new(&s, EvalConfig::all_compiled());
        let nv = s.vertex_count();
        let zs = [d.v1(), d.v2(), (0..nv).collect_vec()];
        for z in &zs {
            let zm = z.iter().fold(0u64, |m, &v| m | 1 << v);
            let cuts: Vec<Vec<usize>> =
                std::iter::once(vec![]).chain((0..d.edge_count()).map(|e| vec![e])).collect();
            for (&x1, &x2) in z.iter().cartesian_product(z.iter()) {
                for k in &cuts {
                    let km = k.iter().fold(0u64, |m, &e| m | 1 << (nv + e));
                    let args = [Value::Set(zm), Value::Element(x1), Value::Element(x2), Value::Set(km)];
                    assert_eq!(
                        ev.call("PAC", &args).unwrap(),
                        d.path_avoiding_cuts(z, x1, x2, k).unwrap(),
                        "{t1} {t2} {z:?} {x1} {x2} {k:?}"
                    );
                }
                for &u in z {
                    let args = [Value::Set(zm), Value::Element(x1), Value::Element(x2), Value::Element(u)];
                    assert_eq!(
                        ev.call("pathSurvivesVertexCut", &args).unwrap(),
                        d.path_survives_vertex_cut(z, x1, x2, u).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn triplets_match_tree_topology() {
    for (t1, t2) in rooted_pairs(4) {
        let s = structure_from_display(&build_display(&t1, &t2).unwrap()).unwrap();
        let mut generic = Evaluator::new(&s, reference_config("Triplet1"));
        let mut compiled = Evaluator::new(&s, EvalConfig::all_compiled());
        for xs in bits(s.sort(Sort::Taxa)).into_iter().permutations(3) {
            let args = xs.iter().map(|&x| Value::Element(x)).collect_vec();
            let names = xs.iter().map(|&x| s.name(x)).collect_vec();
            for (i, t) in [(1, &t1), (2, &t2)] {
                let want = triplet_topology(t, [names[0], names[1], names[2]]).unwrap()
                    == TripletTopology::new(names[0], names[1], names[2]);
                let p = format!("Triplet{i}");
                assert_eq!(generic.call(&p, &args).unwrap(), want, "{t} {names:?}");
                assert_eq!(compiled.call(&p, &args).unwrap(), want);
            }
        }
    }
}

#[test]
fn child_matches_parent_relation() {
    for (t1, t2) in rooted_pairs(4) {
        let d = build_display(&t1, &t2).unwrap();
        let s = structure_from_display(&d).unwrap();
        let mut generic = Evaluator::new(&s, reference_config("child1"));
        let mut compiled = Evaluator::new(&s, EvalConfig::all_compiled());
        for i in [1, 2] {
            let (tree, map): (&PhyloTree, &dyn Fn(usize) -> usize) = if i == 1 {
                (d.tree1(), &|v| d.from_tree1_vertex(v))
            } else {
                (d.tree2(), &|v| d.from_tree2_vertex(v))
            };
            // The augmented tree is stored unoriented; orient it away from ρ.
            let rho = tree.leaf_of(RHO).unwrap();
            let mut want = BTreeSet::new();
            let mut stack = vec![(rho, usize::MAX)];
            while let Some((v, from)) = stack.pop() {
                for &w in tree.neighbors(v) {
                    if w != from {
                        want.insert((map(v), map(w)));
                        stack.push((w, v));
                    }
                }
            }
            let vi = bits(s.sort(Sort::vertices_of(i)));
            for (&u, &v) in vi.iter().cartesian_product(vi.iter()) {
                let args = [Value::Element(u), Value::Element(v)];
                let name = format!("child{i}");
                assert_eq!(generic.call(&name, &args).unwrap(), want.contains(&(u, v)), "{t1} {t2}");
                assert_eq!(compiled.call(&name, &args).unwrap(), want.contains(&(u, v)));
            }
        }
    }
}

/// Connected simple graphs on `n` vertices, one per isomorphism class.
fn connected_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs = (0..n).tuple_combinations::<(usize, usize)>().collect_vec();
    let perms = (0..n).permutations(n).collect_vec();
    let mut seen = BTreeSet::new();
    let mut out = vec![];
    for code in 0u32..1 << pairs.len() {
        let edges = pairs.iter().enumerate().filter(|(j, _)| code >> j & 1 == 1).map(|(_, &p)| p).collect_vec();
        let mut reach = 1u32;
        loop {
            let next = edges.iter().fold(reach, |r, &(a, b)| {
                if r >> a & 1 == 1 || r >> b & 1 == 1 {
                    r | 1 << a | 1 << b
                } else {
                    r
                }
            });
            if next == reach {
                break;
            }
            reach = next;
        }
        if reach != (1 << n) - 1 {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut e = edges.iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect_vec();
                e.sort();
                e
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(edges);
        }
    }
    out
}

#[test]
fn reachability_predicates_on_small_graphs() {
    let counts = (1..=6).map(|n| connected_graphs(n).len()).collect_vec();
    assert_eq!(counts, [1, 1, 2, 6, 21, 112]);
    let family = (1..=6)
        .flat_map(|n| {
            connected_graphs(n).into_iter().map(move |e| ValidationStructure {
                label: format!("{n} {e:?}"),
                structure: structure_from_graph(n, &e).unwrap(),
            })
        })
        .collect_vec();
    for name in ["PAC", "PACe", "path", "pathSurvivesVertexCut"] {
        let r = validate_predicate(name, &family).unwrap();
        assert!(r.tuples > 0);
        assert!(r.mismatches.is_empty(), "{name}: {:?}", &r.mismatches[..1]);
    }
}

#[test]
fn conjunct_order_does_not_matter() {
    let structures = display_structures(3, false).unwrap();
    for name in ["PAC", "path", "Quartet1", "QAC2", "Clade1", "CPS[1]", "Partition[3]", "child2", "TAC1"] {
        let def = definition(name).unwrap();
        let reversed = def.body.reversed();
        for vs in &structures {
            let s = &vs.structure;
            let mut ev = Evaluator::new(s, reference_config(name));
            for args in validation_tuples(name, s).into_iter().step_by(7) {
                let env = def.params.iter().zip(&args).map(|((p, _), v)| (p.as_str(), *v)).collect_vec();
                assert_eq!(ev.evaluate(&def.body, &env).unwrap(), ev.evaluate(&reversed, &env).unwrap(), "{name}");
            }
        }
    }
}

#[test]
fn tac_implies_triplet() {
    for vs in display_structures(4, true).unwrap() {
        let s = &vs.structure;
        if s.rho().is_none() {
            continue;
        }
        let mut ev = Evaluator::new(s, reference_config("TAC1"));
        for i in [1, 2] {
            for args in validation_tuples(&format!("TAC{i}"), s) {
                if ev.call(&format!("TAC{i}"), &args).unwrap() {
                    assert!(ev.call(&format!("Triplet{i}"), &args[..3]).unwrap());
                }
            }
        }
    }
}

#[test]
fn umaf_formula_is_monotone_and_matches_forests() {
    for (t1, t2) in unrooted_pairs(4) {
        let size = umaf(&t1, &t2).unwrap().size();
        let answers = (0..=4).map(|k| check_umaf_formula(&t1, &t2, k).unwrap()).collect_vec();
        assert!(answers.windows(2).all(|w| w[0] <= w[1]), "{t1} {t2} {answers:?}");
        for (k, &a) in answers.iter().enumerate() {
            assert_eq!(a, size <= k, "{t1} {t2} k={k}");
        }
    }
}

#[test]
fn generic_leaves_agree_with_compiled_leaves() {
    // Same checks, once with only the lowest layer compiled.
    let t1 = parse_newick("(a,b,(c,d));").unwrap();
    let t2 = parse_newick("(a,c,(b,d));").unwrap();
    let opts = CheckOptions {
        config: EvalConfig::with_compiled(LAYERS[0].iter().copied()),
        ..CheckOptions::default()
    };
    for k in 1..=2 {
        assert_eq!(
            check_umaf_formula_with(&t1, &t2, k, &opts).unwrap(),
            check_umaf_formula(&t1, &t2, k).unwrap()
        );
    }
}

#[test]
fn fitch_partition_is_unique() {
    let names = ["a", "b", "c", "d", "e"];
    for n in 2..=5 {
        let labels = names[..n].iter().map(|s| s.to_string()).collect_vec();
        let mut trees = all_rooted_trees(&names[..n]);
        if n >= 3 {
            trees.extend(all_unrooted_trees(&names[..n]));
        }
        for t in &trees {
            for m in 0..1u64 << n {
                let f = Character::from_mask(&labels, m);
                let found = fitch_assignments(t, &f).unwrap();
                assert_eq!(found.len(), 1, "{t} {m}");
                assert_eq!(found[0][3].count_ones() as usize, fitch_score(t, &f).unwrap().score);
            }
        }
    }
}

#[test]
fn fitch_optimum_matches_parsimony_distance() {
    for n in 3..=4 {
        for (t1, t2) in unrooted_pairs(n) {
            let want = d2mp_directional(&t1, &t2, D2MP_DEFAULT_BOUND).unwrap().value as i64;
            assert_eq!(fitch_mso_optimum(&t1, &t2).unwrap(), want, "{t1} {t2}");
        }
    }
}

#[test]
fn structure_dump_is_json() {
    let t1 = parse_newick("(u,v,(w,y));").unwrap();
    let t2 = parse_newick("(u,w,(v,y));").unwrap();
    let s = structure_from_display(&build_display(&t1, &t2).unwrap()).unwrap();
    let v = serde_json::to_value(s.dump()).unwrap();
    assert_eq!(v["universe"].as_array().unwrap().len(), 18);
    assert_eq!(v["incidence"].as_array().unwrap().len(), 10);
    assert_eq!(v["X"].as_array().unwrap().len(), 4);
}
