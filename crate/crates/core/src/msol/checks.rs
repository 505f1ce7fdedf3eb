//! Formula-level decision procedures and the harness comparing compiled
//! predicates with their definitions.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use super::eval::{EvalConfig, Evaluator, Value};
use super::library::family;
use super::structure::{structure_from_display, MsoStructure, Sort};
use crate::displaygraph::build_display;
use crate::distances::Character;
use crate::treeio::{all_rooted_trees, all_unrooted_trees, is_isomorphic, root_on_edge, PhyloTree};
use crate::{Error, Result, TreeKind};

/// Largest taxon count accepted by the formula checks unless raised explicitly.
pub const GENERIC_MAX_TAXA: usize = 4;

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub config: EvalConfig,
    pub max_taxa: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            config: EvalConfig::leaves(),
            max_taxa: GENERIC_MAX_TAXA,
        }
    }
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn mask_of<'a>(xs: impl IntoIterator<Item = &'a usize>) -> u64 {
    xs.into_iter().fold(0, |m, &x| m | 1 << x)
}

fn guarded_structure(t1: &PhyloTree, t2: &PhyloTree, kind: TreeKind, opts: &CheckOptions) -> Result<MsoStructure> {
    for t in [t1, t2] {
        if t.kind() != kind {
            return Err(Error::WrongKind {
                expected: if kind == TreeKind::Rooted { "rooted" } else { "unrooted" },
            });
        }
    }
    let n = t1.leaf_count();
    if n > opts.max_taxa {
        return Err(Error::SizeGuard {
            size: n,
            bound: opts.max_taxa,
        });
    }
    structure_from_display(&build_display(t1, t2)?)
}

/// Searches cut pairs `|K1| = |K2| = k - 1` for one satisfying `phi`.
fn search_cuts(s: &MsoStructure, phi: &str, k: usize, config: &EvalConfig) -> Result<(bool, Vec<String>)> {
    if k == 0 {
        return Ok((false, vec![]));
    }
    let mut ev = Evaluator::new(s, config.clone());
    let e1 = bits(s.sort(Sort::E1));
    let e2 = bits(s.sort(Sort::E2));
    for k1 in e1.iter().combinations(k - 1) {
        let m1 = mask_of(k1);
        for k2 in e2.iter().combinations(k - 1) {
            if ev.call(phi, &[Value::Set(m1), Value::Set(mask_of(k2))])? {
                return Ok((true, ev.trace().to_vec()));
            }
        }
    }
    Ok((false, ev.trace().to_vec()))
}

/// Whether cut sets of size `k - 1` in both unrooted trees satisfy the uMAF formula.
pub fn check_umaf_formula(t1: &PhyloTree, t2: &PhyloTree, k: usize) -> Result<bool> {
    check_umaf_formula_with(t1, t2, k, &CheckOptions::default())
}

pub fn check_umaf_formula_with(t1: &PhyloTree, t2: &PhyloTree, k: usize, opts: &CheckOptions) -> Result<bool> {
    Ok(check_umaf_formula_traced(t1, t2, k, opts)?.0)
}

/// The answer together with the calls recorded up to `opts.config`'s trace depth.
pub fn check_umaf_formula_traced(
    t1: &PhyloTree,
    t2: &PhyloTree,
    k: usize,
    opts: &CheckOptions,
) -> Result<(bool, Vec<String>)> {
    let s = guarded_structure(t1, t2, TreeKind::Unrooted, opts)?;
    search_cuts(&s, &format!("PhiUMAF[{k}]"), k, &opts.config)
}

/// The rooted variant: partition checks over `X ∪ {ρ}`, triplets via TAC.
pub fn check_rspr_formula(t1: &PhyloTree, t2: &PhyloTree, k: usize) -> Result<bool> {
    check_rspr_formula_with(t1, t2, k, &CheckOptions::default())
}

pub fn check_rspr_formula_with(t1: &PhyloTree, t2: &PhyloTree, k: usize, opts: &CheckOptions) -> Result<bool> {
    Ok(check_rspr_formula_traced(t1, t2, k, opts)?.0)
}

pub fn check_rspr_formula_traced(
    t1: &PhyloTree,
    t2: &PhyloTree,
    k: usize,
    opts: &CheckOptions,
) -> Result<(bool, Vec<String>)> {
    let s = guarded_structure(t1, t2, TreeKind::Rooted, opts)?;
    search_cuts(&s, &format!("PhiRSPR[{k}]"), k, &opts.config)
}

/// Whether a tree sequence of length `k` exists, via `HybNum[k]`. The case
/// `k = 0` is an isomorphism test.
pub fn check_hybnum_formula(t1: &PhyloTree, t2: &PhyloTree, k: usize) -> Result<bool> {
    check_hybnum_formula_with(t1, t2, k, &CheckOptions::default())
}

pub fn check_hybnum_formula_with(t1: &PhyloTree, t2: &PhyloTree, k: usize, opts: &CheckOptions) -> Result<bool> {
    Ok(check_hybnum_formula_traced(t1, t2, k, opts)?.0)
}

pub fn check_hybnum_formula_traced(
    t1: &PhyloTree,
    t2: &PhyloTree,
    k: usize,
    opts: &CheckOptions,
) -> Result<(bool, Vec<String>)> {
    let s = guarded_structure(t1, t2, TreeKind::Rooted, opts)?;
    if k == 0 {
        return Ok((is_isomorphic(t1, t2)?, vec![]));
    }
    let mut ev = Evaluator::new(&s, opts.config.clone());
    let holds = ev.call(&format!("HybNum[{k}]"), &[])?;
    Ok((holds, ev.trace().to_vec()))
}

/// Fitch classes of one tree as element masks: `[R, B, RB_I, RB_U]`.
pub type FitchSets = [u64; 4];

/// Roots an unrooted tree on the edge at its smallest taxon.
fn rooted_for_fitch(t: &PhyloTree) -> Result<PhyloTree> {
    let smallest = t.leaves().min_by(|&a, &b| t.label(a).cmp(&t.label(b))).ok_or(Error::EmptyTaxa)?;
    let e = t
        .edges()
        .iter()
        .position(|&(a, b)| a == smallest || b == smallest)
        .ok_or_else(|| Error::InvalidTree("single-leaf tree".into()))?;
    root_on_edge(t, e)
}

/// Children of every vertex of tree `i`, read off the structure via `child^i`.
fn children(s: &MsoStructure, ev: &mut Evaluator, i: usize) -> Result<Vec<Vec<usize>>> {
    let vi = bits(s.sort(Sort::vertices_of(i)));
    let mut kids = vec![vec![]; s.vertex_count()];
    for &u in &vi {
        for &v in &vi {
            if ev.call(&format!("child{i}"), &[Value::Element(u), Value::Element(v)])? {
                kids[u].push(v);
            }
        }
    }
    Ok(kids)
}

/// Bottom-up Fitch classes for the character with blue taxa `blue`.
fn derive_fitch(s: &MsoStructure, kids: &[Vec<usize>], i: usize, blue: u64) -> Result<FitchSets> {
    let rho = s.rho().ok_or_else(|| Error::Mso("the structure has no ρ".into()))?;
    let taxa = s.sort(Sort::Taxa);
    let mut sets = [0u64; 4];
    // class: 0 R, 1 B, 2 RB_I, 3 RB_U
    fn visit(v: usize, kids: &[Vec<usize>], taxa: u64, blue: u64, sets: &mut FitchSets) -> Result<usize> {
        let class = if taxa >> v & 1 == 1 {
            (blue >> v & 1) as usize
        } else {
            let [a, b] = kids[v][..] else {
                return Err(Error::Mso(format!("vertex {v} does not have two children")));
            };
            let (ca, cb) = (visit(a, kids, taxa, blue, sets)?, visit(b, kids, taxa, blue, sets)?);
            let colours = |c: usize| if c < 2 { 1u8 << c } else { 3 };
            match colours(ca) & colours(cb) {
                1 => 0,
                2 => 1,
                3 => 2,
                _ => 3,
            }
        };
        sets[class] |= 1 << v;
        Ok(class)
    }
    let root = match kids[rho][..] {
        [r] => r,
        _ => return Err(Error::Mso(format!("ρ of tree {i} must have one child"))),
    };
    visit(root, kids, taxa, blue, &mut sets)?;
    Ok(sets)
}

/// Maximum of `|RB¹_U| - |RB²_U|` over assignments satisfying both Fitch
/// constraint blocks and the character agreement constraint. Both trees are
/// rooted on the edge at their smallest taxon.
pub fn fitch_mso_optimum(t1: &PhyloTree, t2: &PhyloTree) -> Result<i64> {
    fitch_mso_optimum_with(t1, t2, &CheckOptions::default())
}

pub fn fitch_mso_optimum_with(t1: &PhyloTree, t2: &PhyloTree, opts: &CheckOptions) -> Result<i64> {
    for t in [t1, t2] {
        if t.is_rooted() {
            return Err(Error::WrongKind { expected: "unrooted" });
        }
    }
    let s = guarded_structure(&rooted_for_fitch(t1)?, &rooted_for_fitch(t2)?, TreeKind::Rooted, opts)?;
    let mut config = opts.config.clone();
    config.compiled.extend(["child1".to_string(), "child2".to_string()]);
    let mut ev = Evaluator::new(&s, config);
    let kids = [children(&s, &mut ev, 1)?, children(&s, &mut ev, 2)?];
    let taxa = bits(s.sort(Sort::Taxa));
    let agree = agreement_formula();
    let mut best = None;
    for m in 0u64..1 << taxa.len() {
        let blue = taxa.iter().enumerate().filter(|(j, _)| m >> j & 1 == 1).fold(0, |b, (_, &x)| b | 1 << x);
        let f1 = derive_fitch(&s, &kids[0], 1, blue)?;
        let f2 = derive_fitch(&s, &kids[1], 2, blue)?;
        for (i, f) in [(1, f1), (2, f2)] {
            if !ev.call(&format!("Fitch{i}"), &f.map(Value::Set))? {
                return Err(Error::Mso(format!("derived Fitch classes violate the constraints of tree {i}")));
            }
        }
        let env = [
            ("R1", Value::Set(f1[0])),
            ("B1", Value::Set(f1[1])),
            ("R2", Value::Set(f2[0])),
            ("B2", Value::Set(f2[1])),
        ];
        if !ev.evaluate(&agree, &env)? {
            return Err(Error::Mso("derived classes disagree on the taxa".into()));
        }
        let gain = f1[3].count_ones() as i64 - f2[3].count_ones() as i64;
        best = best.max(Some(gain));
    }
    best.ok_or(Error::EmptyTaxa)
}

fn agreement_formula() -> super::Formula {
    use super::formula::*;
    forall(
        "x",
        Sort::Taxa,
        and([iff(mem("x", "R1"), mem("x", "R2")), iff(mem("x", "B1"), mem("x", "B2"))]),
    )
}

/// All assignments of the vertices of a tree (paired with itself in a display
/// graph) to the four Fitch classes that satisfy the constraint block for
/// character `f`. Taxa follow `f`; internal vertices range freely. Unrooted
/// trees are rooted as in [`fitch_mso_optimum`].
pub fn fitch_assignments(tree: &PhyloTree, f: &Character) -> Result<Vec<FitchSets>> {
    let rooted = if tree.is_rooted() { tree.clone() } else { rooted_for_fitch(tree)? };
    let s = structure_from_display(&build_display(&rooted, &rooted)?)?;
    let mut ev = Evaluator::new(&s, EvalConfig::leaves());
    let taxa = bits(s.sort(Sort::Taxa));
    let (mut red, mut blue) = (0u64, 0u64);
    for &x in &taxa {
        match f.color(s.name(x))? {
            crate::distances::Color::Red => red |= 1 << x,
            crate::distances::Color::Blue => blue |= 1 << x,
        }
    }
    let internal = bits(s.sort(Sort::V1Core) & !s.sort(Sort::Taxa));
    let mut found = vec![];
    for code in 0..4usize.pow(internal.len() as u32) {
        let mut sets = [red, blue, 0, 0];
        let mut c = code;
        for &v in &internal {
            sets[c % 4] |= 1 << v;
            c /= 4;
        }
        if ev.call("Fitch1", &sets.map(Value::Set))? {
            found.push(sets);
        }
    }
    Ok(found)
}

// ---------------------------------------------------------------------------
// validation harness

/// A structure in a validation family, with a description of its origin.
#[derive(Clone, Debug)]
pub struct ValidationStructure {
    pub label: String,
    pub structure: MsoStructure,
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub structure: String,
    pub arguments: Vec<String>,
    pub generic: bool,
    pub compiled: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub predicate: String,
    pub structures: usize,
    pub tuples: usize,
    /// Families evaluated by their compiled procedure inside the definition under test.
    pub inner_compiled: Vec<String>,
    pub mismatches: Vec<Mismatch>,
}

/// Validation order. Inside the definition of a predicate, the predicates of
/// earlier layers run compiled; they have been validated first.
pub const LAYERS: &[&[&str]] = &[
    &["Union", "NoIntersect", "Intersect", "Bipartition", "allDiff3", "allDiff4", "adj", "Partition"],
    &["PAC", "PACe", "path", "pathSurvivesVertexCut"],
    &["Quartet1", "Quartet2", "QAC1", "QAC2", "InCladeUnder1", "InCladeUnder2", "child1", "child2"],
    &["Triplet1", "Triplet2", "Clade1", "Clade2"],
    &["TAC1", "TAC2", "CPS"],
];

/// Predicates (with macro instances) covered by the standard suite.
pub const SUITE: &[&str] = &[
    "Union",
    "NoIntersect",
    "Intersect",
    "Bipartition",
    "allDiff3",
    "allDiff4",
    "adj",
    "Partition[3]",
    "PAC",
    "PACe",
    "path",
    "pathSurvivesVertexCut",
    "Quartet1",
    "Quartet2",
    "QAC1",
    "QAC2",
    "InCladeUnder1",
    "InCladeUnder2",
    "child1",
    "child2",
    "Triplet1",
    "Triplet2",
    "Clade1",
    "Clade2",
    "Clade1[1]",
    "Clade2[1]",
    "Clade1[2]",
    "Clade2[2]",
    "TAC1",
    "TAC2",
    "CPS",
    "CPS[1]",
];

fn layer_of(name: &str) -> Option<usize> {
    let base = family(name).0;
    LAYERS.iter().position(|l| l.contains(&base))
}

/// The configuration used as reference for `name`: its own definition is
/// evaluated, lower layers run compiled.
pub fn reference_config(name: &str) -> EvalConfig {
    let layer = layer_of(name).unwrap_or(LAYERS.len());
    EvalConfig::with_compiled(LAYERS[..layer].iter().flat_map(|l| l.iter().copied()))
}

fn subsets(mask: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut sub = 0u64;
    loop {
        out.push(sub);
        if sub == mask {
            return out;
        }
        sub = (sub | !mask).wrapping_add(1) & mask;
    }
}

fn tuples<T: Clone>(pools: &[Vec<T>]) -> Vec<Vec<T>> {
    pools.iter().map(|p| p.iter().cloned()).multi_cartesian_product().collect()
}

fn els(xs: &[usize]) -> Vec<Value> {
    xs.iter().map(|&x| Value::Element(x)).collect()
}

fn sets(ms: &[u64]) -> Vec<Value> {
    ms.iter().map(|&m| Value::Set(m)).collect()
}

fn distinct(t: &[Value]) -> bool {
    t.iter().all_unique()
}

/// Argument tuples for `name` on `s`. Families needing `ρ` are empty on
/// structures without it.
pub fn validation_tuples(name: &str, s: &MsoStructure) -> Vec<Vec<Value>> {
    let v = s.sort(Sort::Vertices);
    let taxa = s.sort(Sort::Taxa);
    let trho = s.sort(Sort::TaxaRho);
    let has_rho = s.rho().is_some();
    let trees: Vec<usize> = [1, 2].into_iter().filter(|&i| s.sort(Sort::vertices_of(i)) != 0).collect();
    let vi = |i: usize| s.sort(Sort::vertices_of(i));
    let ei = |i: usize| s.sort(Sort::edges_of(i));
    let single_cuts = |i: usize| {
        let mut ks = vec![0u64];
        ks.extend(bits(ei(i)).into_iter().map(|e| 1u64 << e));
        ks
    };
    let (base, param) = family(name);
    let tree_of = |stem: &str| base.strip_prefix(stem).and_then(|r| r.parse::<usize>().ok());
    let mut out: Vec<Vec<Value>> = vec![];
    match base {
        "Union" | "Bipartition" => {
            for &i in &trees {
                let z = vi(i);
                let extra = bits(s.sort(Sort::Edges)).first().map_or(0, |&e| 1u64 << e);
                for p in subsets(z) {
                    let rest = z & !p;
                    for q in [rest, rest | (p & p.wrapping_neg()), rest & (rest.wrapping_sub(1)), rest | extra, p] {
                        out.push(sets(&[z, p, q]));
                    }
                }
            }
        }
        "NoIntersect" => out = tuples(&[sets(&subsets(trho)), sets(&subsets(trho))]),
        "Intersect" => out = tuples(&[sets(&subsets(trho)), sets(&subsets(trho)), els(&bits(trho))]),
        "allDiff3" => out = tuples(&vec![els(&bits(trho)); 3]),
        "allDiff4" => out = tuples(&vec![els(&bits(trho)); 4]),
        "adj" => out = tuples(&vec![els(&bits(s.all())); 2]),
        "Partition" => {
            let n = param.unwrap_or(3);
            for whole in [taxa, trho] {
                let mut pools = vec![sets(&[whole])];
                pools.extend(vec![sets(&subsets(taxa)); n]);
                out.extend(tuples(&pools));
            }
        }
        "PAC" => {
            for &i in &trees {
                let mut cuts: Vec<u64> = vec![0];
                for k in 1..=2 {
                    cuts.extend(bits(ei(i)).into_iter().combinations(k).map(|c| mask_of(&c)));
                }
                out.extend(tuples(&[sets(&[vi(i)]), els(&bits(v)), els(&bits(v)), sets(&cuts)]));
                out.extend(tuples(&[sets(&subsets(vi(i))), els(&bits(vi(i))), els(&bits(vi(i))), sets(&[0, ei(i)])]));
            }
            out.extend(tuples(&[sets(&[v]), els(&bits(v)), els(&bits(v)), sets(&single_cuts(1))]));
        }
        "PACe" => {
            for &i in &trees {
                out.extend(tuples(&[sets(&[vi(i)]), els(&bits(v)), els(&bits(v)), els(&bits(s.all()))]));
            }
        }
        "path" => {
            for &i in &trees {
                let outside = bits(v & !vi(i)).into_iter().take(1);
                let xs: Vec<usize> = bits(vi(i)).into_iter().chain(outside).collect();
                out.extend(tuples(&[sets(&subsets(vi(i))), els(&xs), els(&xs)]));
            }
            out.extend(tuples(&[sets(&[v]), els(&bits(v)), els(&bits(v))]));
        }
        "pathSurvivesVertexCut" => {
            let mut zs: Vec<u64> = trees.iter().map(|&i| vi(i)).collect();
            zs.push(v);
            out = tuples(&[sets(&zs), els(&bits(v)), els(&bits(v)), els(&bits(v))]);
        }
        _ => {
            // The quartet embeddings are only ever applied to distinct
            // taxa (with ρ in the rooted case); other tuples are skipped.
            if let Some(i) = tree_of("Quartet") {
                let pool = els(&bits(trho & vi(i)));
                out = tuples(&vec![pool; 4]).into_iter().filter(|t| distinct(t)).collect();
            } else if let Some(i) = tree_of("QAC") {
                let pool = els(&bits(taxa & vi(i)));
                out = tuples(&[pool.clone(), pool.clone(), pool.clone(), pool, sets(&single_cuts(i))])
                    .into_iter()
                    .filter(|t| distinct(&t[..4]))
                    .collect();
            } else if !has_rho {
            } else if tree_of("Triplet").is_some() {
                out = tuples(&vec![els(&bits(taxa)); 3]);
            } else if let Some(i) = tree_of("TAC") {
                let pool = els(&bits(taxa));
                out = tuples(&[pool.clone(), pool.clone(), pool, sets(&single_cuts(i))])
                    .into_iter()
                    .filter(|t| distinct(&t[..3]))
                    .collect();
            } else if tree_of("InCladeUnder").is_some() || tree_of("child").is_some() {
                out = tuples(&vec![els(&bits(v)); 2]);
            } else if tree_of("Clade").is_some() || base == "CPS" {
                match param {
                    None => out = tuples(&[sets(&subsets(trho))]),
                    Some(1) => out = tuples(&[sets(&subsets(taxa)), sets(&subsets(taxa))]),
                    Some(t) => {
                        let mut small: Vec<u64> = vec![0];
                        small.extend(bits(taxa).into_iter().map(|x| 1u64 << x));
                        let mut pools = vec![sets(&subsets(taxa))];
                        pools.extend(vec![sets(&small); t]);
                        out = tuples(&pools);
                    }
                }
            }
        }
    }
    out
}

fn render(s: &MsoStructure, args: &[Value]) -> Vec<String> {
    args.iter()
        .map(|a| match *a {
            Value::Element(x) => s.name(x).to_string(),
            Value::Set(m) => s.render_set(m),
        })
        .collect()
}

/// Compares the definition of `name` (inner layers compiled) with its compiled
/// procedure on every tuple of [`validation_tuples`] over every structure.
pub fn validate_predicate(name: &str, family: &[ValidationStructure]) -> Result<ValidationReport> {
    let reference = reference_config(name);
    let mut report = ValidationReport {
        predicate: name.to_string(),
        structures: 0,
        tuples: 0,
        inner_compiled: reference.compiled.iter().cloned().collect(),
        mismatches: vec![],
    };
    for vs in family {
        let s = &vs.structure;
        let args = validation_tuples(name, s);
        if args.is_empty() {
            continue;
        }
        report.structures += 1;
        let mut generic = Evaluator::new(s, reference.clone());
        let mut compiled = Evaluator::new(s, EvalConfig::with_compiled([super::library::family(name).0]));
        for a in args {
            report.tuples += 1;
            let g = generic.call(name, &a)?;
            let c = compiled.call(name, &a)?;
            if g != c {
                report.mismatches.push(Mismatch {
                    structure: vs.label.clone(),
                    arguments: render(s, &a),
                    generic: g,
                    compiled: c,
                });
            }
        }
    }
    Ok(report)
}

fn relabel_key(t1: &PhyloTree, t2: &PhyloTree, labels: &[String]) -> Result<(String, String)> {
    let mut best: Option<(String, String)> = None;
    for perm in labels.iter().permutations(labels.len()) {
        let map = |t: &PhyloTree| -> Result<String> {
            let mut labs: Vec<Option<String>> = (0..t.vertex_count()).map(|v| t.label(v).map(str::to_string)).collect();
            for l in labs.iter_mut().flatten() {
                if let Some(j) = labels.iter().position(|x| x == l) {
                    *l = perm[j].clone();
                }
            }
            let edges = t.edges().to_vec();
            Ok(PhyloTree::from_parts(t.kind(), labs, edges, t.root())?.to_newick())
        };
        let key = (map(t1)?, map(t2)?);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    Ok(best.expect("at least one permutation"))
}

/// Display structures of all ordered tree pairs, unrooted with 3..=`max_taxa`
/// taxa and rooted with 2..=`max_taxa`. With `up_to_relabeling` one pair per
/// orbit under permutations of the taxa is kept; predicates are invariant
/// under such isomorphisms.
pub fn display_structures(max_taxa: usize, up_to_relabeling: bool) -> Result<Vec<ValidationStructure>> {
    let names = ["a", "b", "c", "d", "e", "f"];
    if max_taxa > names.len() {
        return Err(Error::SizeGuard {
            size: max_taxa,
            bound: names.len(),
        });
    }
    let mut out = vec![];
    let mut seen = BTreeSet::new();
    for rooted in [false, true] {
        let lo = if rooted { 2 } else { 3 };
        for n in lo..=max_taxa {
            let labels = &names[..n];
            let trees = if rooted { all_rooted_trees(labels) } else { all_unrooted_trees(labels) };
            let owned: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
            for t1 in &trees {
                for t2 in &trees {
                    if up_to_relabeling && !seen.insert((rooted, relabel_key(t1, t2, &owned)?)) {
                        continue;
                    }
                    out.push(ValidationStructure {
                        label: format!("{t1} {t2}"),
                        structure: structure_from_display(&build_display(t1, t2)?)?,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Runs [`validate_predicate`] for every entry of [`SUITE`].
pub fn predicate_suite(family: &[ValidationStructure]) -> Result<Vec<ValidationReport>> {
    SUITE.iter().map(|name| validate_predicate(name, family)).collect()
}

/// Outcome of comparing one formula check with the direct algorithm.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub check: String,
    pub instances: usize,
    pub mismatches: Vec<String>,
}

fn ordered_pairs(trees: &[PhyloTree]) -> impl Iterator<Item = (&PhyloTree, &PhyloTree)> {
    trees.iter().cartesian_product(trees.iter())
}

/// Compares the formula checks with the forest, hybridization and parsimony
/// algorithms on all tree pairs up to `max_taxa` taxa, for every `k` in `ks`.
pub fn formula_sweep(max_taxa: usize, ks: &[usize]) -> Result<Vec<SweepReport>> {
    use crate::distances::{d2mp_directional, hyb_number, D2MP_DEFAULT_BOUND};
    use crate::forests::{maf_rooted, umaf};
    let names = ["a", "b", "c", "d", "e", "f"];
    let max_taxa = max_taxa.min(names.len());
    let report = |check: &str| SweepReport {
        check: check.to_string(),
        instances: 0,
        mismatches: vec![],
    };
    let (mut um, mut rs, mut hn, mut fi) = (report("umaf"), report("rspr"), report("hybnum"), report("fitch"));
    for n in 3..=max_taxa {
        let trees = all_unrooted_trees(&names[..n]);
        for (t1, t2) in ordered_pairs(&trees) {
            let size = umaf(t1, t2)?.size();
            for &k in ks {
                um.instances += 1;
                if check_umaf_formula(t1, t2, k)? != (size <= k) {
                    um.mismatches.push(format!("{t1} {t2} k={k}"));
                }
            }
            fi.instances += 1;
            let want = d2mp_directional(t1, t2, D2MP_DEFAULT_BOUND)?.value as i64;
            let got = fitch_mso_optimum(t1, t2)?;
            if got != want {
                fi.mismatches.push(format!("{t1} {t2}: {got} vs {want}"));
            }
        }
    }
    for n in 2..=max_taxa {
        let trees = all_rooted_trees(&names[..n]);
        for (t1, t2) in ordered_pairs(&trees) {
            let maf = maf_rooted(t1, t2)?.size();
            let h = hyb_number(t1, t2, false)?.value;
            for &k in ks {
                rs.instances += 1;
                if check_rspr_formula(t1, t2, k)? != (maf <= k) {
                    rs.mismatches.push(format!("{t1} {t2} k={k}"));
                }
                hn.instances += 1;
                if check_hybnum_formula(t1, t2, k)? != (h <= k) {
                    hn.mismatches.push(format!("{t1} {t2} k={k}"));
                }
            }
        }
    }
    Ok(vec![um, rs, hn, fi])
}
