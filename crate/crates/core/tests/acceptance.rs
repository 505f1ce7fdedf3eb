//! Acceptance run: one line per criterion, nonzero exit if any fails.
//! Built without the libtest harness so the lines always reach the log.

use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use phylomso::decomposition::{decomposition_from_forest, exact_treewidth, validate, DEFAULT_EXACT_BOUND};
use phylomso::displaygraph::{build_display, DisplayGraph};
use phylomso::distances::{
    d2mp, d2mp_directional, d_rspr, d_tbr, fitch_bruteforce, fitch_score, fitch_score_rooted_at, hyb_number,
    rspr_distances_from, tbr_distances_from, tbr_move_bfs, Character, D2MP_DEFAULT_BOUND,
};
use phylomso::forests::{maaf, min_tree_sequence, umaf};
use phylomso::msol::{
    check_hybnum_formula, check_umaf_formula, display_structures, fitch_mso_optimum, validate_predicate,
};
use phylomso::treeio::{all_rooted_trees, all_unrooted_trees, parse_newick, random_unrooted_tree};
use phylomso::PhyloTree;

const LABELS: [&str; 7] = ["a", "b", "c", "d", "e", "f", "g"];

/// Time limits stated by the criteria.
const QUARTET_PAIR_LIMIT: Duration = Duration::from_secs(1);
const TREEWIDTH_LIMIT: Duration = Duration::from_secs(5 * 60);
const MSOL_LIMIT: Duration = Duration::from_secs(30 * 60);

type Outcome = Result<String, String>;

/// Display graph size checks accumulated over every suite.
#[derive(Default)]
struct Counts {
    graphs: usize,
    violations: Vec<String>,
}

impl Counts {
    fn display(&mut self, t1: &PhyloTree, t2: &PhyloTree) -> DisplayGraph {
        let d = build_display(t1, t2).unwrap();
        // For rooted inputs the taxa include ρ.
        let x = d.taxon_count();
        self.graphs += 1;
        if d.vertex_count() != 3 * x - 4 || d.edge_count() != 4 * x - 6 {
            self.violations.push(format!("{t1} {t2}: {} vertices {} edges", d.vertex_count(), d.edge_count()));
        }
        d
    }
}

fn unrooted(n: usize) -> Vec<PhyloTree> {
    all_unrooted_trees(&LABELS[..n])
}

fn rooted(n: usize) -> Vec<PhyloTree> {
    all_rooted_trees(&LABELS[..n])
}

fn random_pairs(n: usize, count: usize, seed: u64) -> Vec<(PhyloTree, PhyloTree)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (random_unrooted_tree(&LABELS[..n], &mut rng), random_unrooted_tree(&LABELS[..n], &mut rng)))
        .collect()
}

fn pairs(trees: &[PhyloTree]) -> Vec<(PhyloTree, PhyloTree)> {
    trees.iter().cartesian_product(trees).map(|(a, b)| (a.clone(), b.clone())).collect()
}

fn verdict(mismatches: &[String], what: String) -> Outcome {
    match mismatches.first() {
        None => Ok(what),
        Some(first) => Err(format!("{} mismatches, first: {first}", mismatches.len())),
    }
}

fn within(limit: Duration, start: Instant, r: Outcome) -> Outcome {
    let took = start.elapsed();
    match r {
        Ok(s) if took > limit => Err(format!("{s}, but took {took:.1?} (limit {limit:?})")),
        r => r,
    }
}

fn quartet_pair(c: &mut Counts) -> Outcome {
    let start = Instant::now();
    let t1 = parse_newick("(u,v,(w,y));").unwrap();
    let t2 = parse_newick("(u,w,(v,y));").unwrap();
    c.display(&t1, &t2);
    let size = umaf(&t1, &t2).unwrap().size();
    let (d, _) = d_tbr(&t1, &t2).unwrap();
    let r = if size == 2 && d == 1 {
        Ok(format!("umaf size {size}, d_tbr {d}"))
    } else {
        Err(format!("umaf size {size}, d_tbr {d}"))
    };
    within(QUARTET_PAIR_LIMIT, start, r)
}

fn treewidth_bound(c: &mut Counts) -> Outcome {
    let start = Instant::now();
    let mut instances = pairs(&unrooted(4));
    instances.extend(pairs(&unrooted(5)));
    instances.extend(random_pairs(6, 100, 6));
    instances.extend(random_pairs(7, 100, 7));
    let mut bad = vec![];
    for (t1, t2) in &instances {
        let d = c.display(t1, t2);
        let g = d.graph();
        let f = umaf(t1, t2).unwrap();
        let td = decomposition_from_forest(t1, t2, &f).unwrap();
        if let Err(v) = validate(&td, &g) {
            bad.push(format!("{t1} {t2}: {v}"));
        }
        if td.width() > f.size() + 1 {
            bad.push(format!("{t1} {t2}: width {} > {}", td.width(), f.size() + 1));
        }
        let (tw, _) = exact_treewidth(&g, DEFAULT_EXACT_BOUND).unwrap();
        if tw > f.size() + 1 {
            bad.push(format!("{t1} {t2}: treewidth {tw} > {}", f.size() + 1));
        }
    }
    within(TREEWIDTH_LIMIT, start, verdict(&bad, format!("{} pairs, 0 violations", instances.len())))
}

fn tightness(c: &mut Counts) -> Outcome {
    let t1 = parse_newick("(u,v,(w,x));").unwrap();
    let t2 = parse_newick("(u,x,(v,w));").unwrap();
    let d = c.display(&t1, &t2);
    let (tw, _) = exact_treewidth(&d.graph(), DEFAULT_EXACT_BOUND).unwrap();
    let size = umaf(&t1, &t2).unwrap().size();
    let msg = format!("treewidth {tw}, umaf size {size}");
    if tw == 3 && size == 2 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn tbr_oracle(random6: &[(PhyloTree, PhyloTree)]) -> Outcome {
    let trees = unrooted(5);
    let mut bad = vec![];
    for t1 in &trees {
        let bfs = tbr_distances_from(t1).unwrap();
        for t2 in &trees {
            let (d, _) = d_tbr(t1, t2).unwrap();
            if d != bfs[&t2.to_newick()] {
                bad.push(format!("{t1} {t2}"));
            }
        }
    }
    for (t1, t2) in random6 {
        if d_tbr(t1, t2).unwrap().0 != tbr_move_bfs(t1, t2).unwrap() {
            bad.push(format!("{t1} {t2}"));
        }
    }
    verdict(&bad, format!("{} pairs", trees.len().pow(2) + random6.len()))
}

fn rspr_oracle() -> Outcome {
    let mut bad = vec![];
    let mut count = 0;
    for n in 2..=5 {
        let trees = rooted(n);
        for t1 in &trees {
            let bfs = rspr_distances_from(t1).unwrap();
            for t2 in &trees {
                count += 1;
                if d_rspr(t1, t2).unwrap().0 != bfs[&t2.to_newick()] {
                    bad.push(format!("{t1} {t2}"));
                }
            }
        }
    }
    verdict(&bad, format!("{count} pairs"))
}

fn hybridization_certificates() -> Outcome {
    let mut bad = vec![];
    let mut count = 0;
    for n in 2..=5 {
        for (t1, t2) in pairs(&rooted(n)) {
            count += 1;
            let forest = maaf(&t1, &t2).unwrap().size() - 1;
            let seq = min_tree_sequence(&t1, &t2).unwrap().len();
            if forest != seq {
                bad.push(format!("{t1} {t2}: {forest} vs {seq}"));
            }
        }
    }
    verdict(&bad, format!("{count} pairs"))
}

fn fitch() -> Outcome {
    let mut bad = vec![];
    let mut count = 0;
    for n in 3..=6 {
        let taxa = LABELS[..n].iter().map(|s| s.to_string()).collect_vec();
        for t in unrooted(n) {
            for mask in 0u64..1 << n {
                count += 1;
                let f = Character::from_mask(&taxa, mask);
                let score = fitch_score(&t, &f).unwrap().score;
                if score != fitch_bruteforce(&t, &f).unwrap()
                    || (0..t.edge_count()).any(|e| fitch_score_rooted_at(&t, e, &f).unwrap() != score)
                {
                    bad.push(format!("{t} {mask:b}"));
                }
            }
        }
    }
    verdict(&bad, format!("{count} tree-character pairs"))
}

fn parsimony_bound(random6: &[(PhyloTree, PhyloTree)]) -> Outcome {
    let mut instances = pairs(&unrooted(5));
    instances.extend(random6.iter().cloned());
    let mut bad = vec![];
    for (t1, t2) in &instances {
        let mp = d2mp(t1, t2, D2MP_DEFAULT_BOUND).unwrap().value;
        let tbr = d_tbr(t1, t2).unwrap().0;
        if mp > tbr {
            bad.push(format!("{t1} {t2}: {mp} > {tbr}"));
        }
        if d2mp(t1, t1, D2MP_DEFAULT_BOUND).unwrap().value != 0 {
            bad.push(format!("{t1} with itself"));
        }
    }
    verdict(&bad, format!("{} pairs", instances.len()))
}

fn msol_equivalence(c: &mut Counts) -> Outcome {
    let start = Instant::now();
    let mut bad = vec![];

    // (a) every display structure from pairs with at most four taxa
    let family = display_structures(4, false).unwrap();
    for n in 3..=4 {
        for (t1, t2) in pairs(&unrooted(n)) {
            c.display(&t1, &t2);
        }
    }
    for n in 2..=4 {
        for (t1, t2) in pairs(&rooted(n)) {
            c.display(&t1, &t2);
        }
    }
    let predicates = [
        "PAC",
        "path",
        "pathSurvivesVertexCut",
        "Quartet1",
        "Quartet2",
        "Triplet1",
        "Triplet2",
        "InCladeUnder1",
        "InCladeUnder2",
        "Clade1",
        "Clade2",
        "Clade1[1]",
        "Clade2[1]",
        "child1",
        "child2",
        "CPS",
        "CPS[1]",
    ];
    let mut tuples = 0;
    for p in predicates {
        let r = validate_predicate(p, &family).unwrap();
        tuples += r.tuples;
        bad.extend(r.mismatches.iter().map(|m| format!("{p} on {} at {:?}", m.structure, m.arguments)));
    }

    // (b) uMAF formula against the forest size
    for (t1, t2) in pairs(&unrooted(4)) {
        let size = umaf(&t1, &t2).unwrap().size();
        for k in 1..=3 {
            if check_umaf_formula(&t1, &t2, k).unwrap() != (size <= k) {
                bad.push(format!("umaf {t1} {t2} k={k}"));
            }
        }
    }

    // (c) HybNum against the hybridization number
    for n in 2..=4 {
        for (t1, t2) in pairs(&rooted(n)) {
            let h = hyb_number(&t1, &t2, false).unwrap().value;
            for k in 1..=3 {
                if check_hybnum_formula(&t1, &t2, k).unwrap() != (h <= k) {
                    bad.push(format!("hybnum {t1} {t2} k={k}"));
                }
            }
        }
    }

    // (d) Fitch optimum against the directional parsimony distance
    for n in 3..=4 {
        for (t1, t2) in pairs(&unrooted(n)) {
            let want = d2mp_directional(&t1, &t2, D2MP_DEFAULT_BOUND).unwrap().value as i64;
            if fitch_mso_optimum(&t1, &t2).unwrap() != want {
                bad.push(format!("fitch {t1} {t2}"));
            }
        }
    }
    let summary = format!("{} structures, {tuples} predicate tuples, formula checks on all pairs", family.len());
    within(MSOL_LIMIT, start, verdict(&bad, summary))
}

fn counts(c: &Counts) -> Outcome {
    verdict(&c.violations, format!("{} display graphs", c.graphs))
}

fn main() {
    let mut c = Counts::default();
    let random6 = random_pairs(6, 50, 46);
    let mut failed = 0;
    let mut report = |n: usize, name: &str, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {n:>2} {tag} {name}: {detail} [{:.1?}]", start.elapsed());
    };
    report(1, "quartet pair instance", &mut || quartet_pair(&mut c));
    report(2, "treewidth at most forest size plus one", &mut || treewidth_bound(&mut c));
    report(3, "tight instance", &mut || tightness(&mut c));
    report(4, "d_tbr equals move search", &mut || tbr_oracle(&random6));
    report(5, "d_rspr equals move search", &mut || rspr_oracle());
    report(6, "acyclic forest equals tree sequence", &mut || hybridization_certificates());
    report(7, "Fitch equals exhaustive colouring", &mut || fitch());
    report(8, "d2mp at most d_tbr", &mut || parsimony_bound(&random6));
    report(10, "MSO formulas equal the algorithms", &mut || msol_equivalence(&mut c));
    report(9, "display graph counts", &mut || counts(&c));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
