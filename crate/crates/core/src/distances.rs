//! Tree distances derived from agreement forests, the move-based search
//! oracles they are checked against, Fitch parsimony and the binary-character
//! parsimony distance.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::forests::{maaf, maf_rooted, min_tree_sequence, umaf, AgreementForest, TreeSequence};
use crate::treeio::{root_on_edge, PhyloTree, TreeKind};
use crate::{Error, Result};

/// TBR distance with its maximum agreement forest.
pub fn d_tbr(t1: &PhyloTree, t2: &PhyloTree) -> Result<(usize, AgreementForest)> {
    let f = umaf(t1, t2)?;
    Ok((f.size() - 1, f))
}

/// Rooted SPR distance with its maximum agreement forest.
pub fn d_rspr(t1: &PhyloTree, t2: &PhyloTree) -> Result<(usize, AgreementForest)> {
    let f = maf_rooted(t1, t2)?;
    Ok((f.size() - 1, f))
}

#[derive(Clone, Debug, Serialize)]
pub struct Hybridization {
    pub value: usize,
    pub forest: AgreementForest,
    /// A shortest tree sequence, when dual certification was requested.
    pub sequence: Option<TreeSequence>,
}

/// Hybridization number from a maximum acyclic agreement forest. With
/// `dual_certify` a shortest tree sequence is computed as well and its length
/// must agree.
pub fn hyb_number(t1: &PhyloTree, t2: &PhyloTree, dual_certify: bool) -> Result<Hybridization> {
    let forest = maaf(t1, t2)?;
    let value = forest.size() - 1;
    let sequence = if dual_certify {
        let s = min_tree_sequence(t1, t2)?;
        if s.len() != value {
            return Err(Error::Certification(format!(
                "acyclic agreement forest gives {value}, tree sequence gives {}",
                s.len()
            )));
        }
        Some(s)
    } else {
        None
    };
    Ok(Hybridization {
        value,
        forest,
        sequence,
    })
}

// ------------------------------------------------------------ move oracles

/// Growable edge list used to splice trees together.
#[derive(Clone)]
struct Raw {
    labels: Vec<Option<String>>,
    edges: Vec<(usize, usize)>,
}

impl Raw {
    fn of(t: &PhyloTree) -> Raw {
        Raw {
            labels: (0..t.vertex_count()).map(|v| t.label(v).map(str::to_string)).collect(),
            edges: t.edges().to_vec(),
        }
    }

    fn subdivide(&mut self, e: usize) -> usize {
        let (a, b) = self.edges[e];
        self.labels.push(None);
        let w = self.labels.len() - 1;
        self.edges[e] = (a, w);
        self.edges.push((w, b));
        w
    }

    fn absorb(&mut self, other: &Raw) -> usize {
        let off = self.labels.len();
        self.labels.extend(other.labels.iter().cloned());
        self.edges.extend(other.edges.iter().map(|&(a, b)| (a + off, b + off)));
        off
    }

    fn finish(self, kind: TreeKind, root: Option<usize>) -> PhyloTree {
        PhyloTree::from_parts(kind, self.labels, self.edges, root).expect("spliced tree is binary")
    }
}

/// Attachment points of a side: its single vertex, or a new vertex on each edge.
fn attachments(side: &PhyloTree) -> Vec<(Raw, usize)> {
    if side.edge_count() == 0 {
        return vec![(Raw::of(side), 0)];
    }
    (0..side.edge_count())
        .map(|e| {
            let mut r = Raw::of(side);
            let w = r.subdivide(e);
            (r, w)
        })
        .collect()
}

/// All trees one TBR move away from an unrooted tree (possibly including itself).
pub fn tbr_neighbors(tree: &PhyloTree) -> Vec<PhyloTree> {
    let mut out = Vec::new();
    let (order, parent) = tree.preorder_from(0);
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); tree.vertex_count()];
    for &v in order.iter().rev() {
        if tree.is_leaf(v) {
            below[v].push(v);
        }
        if let Some(p) = parent[v] {
            let moved = below[v].clone();
            below[p].extend(moved);
        }
    }
    for &(a, b) in tree.edges() {
        let child = if parent[b] == Some(a) { b } else { a };
        let mut inside = vec![false; tree.vertex_count()];
        for &l in &below[child] {
            inside[l] = true;
        }
        let (left, _) = tree.restrict_by(|v| inside[v]).unwrap();
        let (right, _) = tree.restrict_by(|v| !inside[v]).unwrap();
        let ra = attachments(&left);
        let rb = attachments(&right);
        for (la, pa) in &ra {
            for (lb, pb) in &rb {
                let mut joined = la.clone();
                let off = joined.absorb(lb);
                joined.edges.push((*pa, pb + off));
                out.push(joined.finish(TreeKind::Unrooted, None));
            }
        }
    }
    out
}

/// All trees one rooted SPR move away from a rooted tree.
pub fn rspr_neighbors(tree: &PhyloTree) -> Vec<PhyloTree> {
    let root = tree.root().expect("rooted tree");
    let (order, parent) = tree.preorder_from(root);
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); tree.vertex_count()];
    for &v in order.iter().rev() {
        if tree.is_leaf(v) {
            below[v].push(v);
        }
        if let Some(p) = parent[v] {
            let moved = below[v].clone();
            below[p].extend(moved);
        }
    }
    let mut out = Vec::new();
    for v in 0..tree.vertex_count() {
        if v == root {
            continue;
        }
        let mut inside = vec![false; tree.vertex_count()];
        for &l in &below[v] {
            inside[l] = true;
        }
        let (pruned, _) = tree.restrict_by(|x| inside[x]).unwrap();
        let (rest, _) = tree.restrict_by(|x| !inside[x]).unwrap();
        let sub = Raw::of(&pruned);
        let sub_root = pruned.root().unwrap();
        let rest_root = rest.root().unwrap();
        for e in 0..rest.edge_count() {
            let mut r = Raw::of(&rest);
            let w = r.subdivide(e);
            let off = r.absorb(&sub);
            r.edges.push((w, sub_root + off));
            out.push(r.finish(TreeKind::Rooted, Some(rest_root)));
        }
        let mut r = Raw::of(&rest);
        let off = r.absorb(&sub);
        r.labels.push(None);
        let top = r.labels.len() - 1;
        r.edges.push((top, rest_root));
        r.edges.push((top, sub_root + off));
        out.push(r.finish(TreeKind::Rooted, Some(top)));
    }
    out
}

fn bfs(
    source: &PhyloTree,
    target: Option<&str>,
    step: fn(&PhyloTree) -> Vec<PhyloTree>,
) -> HashMap<String, usize> {
    let mut dist = HashMap::from([(source.to_newick(), 0usize)]);
    let mut queue = VecDeque::from([(source.clone(), 0usize)]);
    if target == Some(source.to_newick().as_str()) {
        return dist;
    }
    while let Some((t, d)) = queue.pop_front() {
        for n in step(&t) {
            let key = n.to_newick();
            if dist.contains_key(&key) {
                continue;
            }
            let hit = target == Some(key.as_str());
            dist.insert(key, d + 1);
            if hit {
                return dist;
            }
            queue.push_back((n, d + 1));
        }
    }
    dist
}

fn check_pair(t1: &PhyloTree, t2: &PhyloTree, kind: TreeKind, bound: usize) -> Result<()> {
    if t1.kind() != kind || t2.kind() != kind {
        return Err(Error::WrongKind {
            expected: if kind == TreeKind::Rooted { "rooted" } else { "unrooted" },
        });
    }
    if t1.taxa() != t2.taxa() {
        return Err(Error::LabelMismatch);
    }
    if t1.leaf_count() > bound {
        return Err(Error::SizeGuard {
            size: t1.leaf_count(),
            bound,
        });
    }
    Ok(())
}

pub const TBR_BFS_BOUND: usize = 6;
pub const RSPR_BFS_BOUND: usize = 5;

/// Number of TBR moves between two trees, by breadth-first search.
pub fn tbr_move_bfs(t1: &PhyloTree, t2: &PhyloTree) -> Result<usize> {
    check_pair(t1, t2, TreeKind::Unrooted, TBR_BFS_BOUND)?;
    let target = t2.to_newick();
    Ok(bfs(t1, Some(&target), tbr_neighbors)[&target])
}

/// TBR distances from `source` to every topology on its taxa, keyed by
/// canonical Newick.
pub fn tbr_distances_from(source: &PhyloTree) -> Result<HashMap<String, usize>> {
    check_pair(source, source, TreeKind::Unrooted, TBR_BFS_BOUND)?;
    Ok(bfs(source, None, tbr_neighbors))
}

/// Number of rooted SPR moves between two trees, by breadth-first search.
pub fn rspr_move_bfs(t1: &PhyloTree, t2: &PhyloTree) -> Result<usize> {
    check_pair(t1, t2, TreeKind::Rooted, RSPR_BFS_BOUND)?;
    let target = t2.to_newick();
    Ok(bfs(t1, Some(&target), rspr_neighbors)[&target])
}

pub fn rspr_distances_from(source: &PhyloTree) -> Result<HashMap<String, usize>> {
    check_pair(source, source, TreeKind::Rooted, RSPR_BFS_BOUND)?;
    Ok(bfs(source, None, rspr_neighbors))
}

// ------------------------------------------------------------------ Fitch

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

/// A binary character: a colour for every taxon.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Character(pub BTreeMap<String, Color>);

impl Character {
    pub fn new<S: AsRef<str>>(pairs: &[(S, Color)]) -> Character {
        Character(pairs.iter().map(|(l, c)| (l.as_ref().to_string(), *c)).collect())
    }

    /// Colours `taxa` in order by the bits of `mask` (bit set means blue).
    pub fn from_mask(taxa: &[String], mask: u64) -> Character {
        Character(
            taxa.iter()
                .enumerate()
                .map(|(i, t)| (t.clone(), if mask >> i & 1 == 1 { Color::Blue } else { Color::Red }))
                .collect(),
        )
    }

    pub fn color(&self, taxon: &str) -> Result<Color> {
        self.0
            .get(taxon)
            .copied()
            .ok_or_else(|| Error::PartialCharacter(taxon.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FitchState {
    Red,
    Blue,
    /// Both colours, from intersecting two `{red, blue}` children.
    BothIntersection,
    /// Both colours, from a union of disjoint child sets.
    BothUnion,
}

impl FitchState {
    fn set(self) -> u8 {
        match self {
            FitchState::Red => 1,
            FitchState::Blue => 2,
            _ => 3,
        }
    }
}

/// Fitch states on a rooted version of the tree.
#[derive(Clone, Debug, Serialize)]
pub struct FitchLabeling {
    #[serde(skip)]
    pub tree: PhyloTree,
    pub states: Vec<FitchState>,
    pub score: usize,
}

fn fitch_rooted(tree: &PhyloTree, f: &Character) -> Result<FitchLabeling> {
    let root = tree.root().unwrap();
    let (order, _) = tree.preorder_from(root);
    let mut states = vec![FitchState::Red; tree.vertex_count()];
    let mut score = 0;
    for &v in order.iter().rev() {
        if let Some(l) = tree.label(v) {
            states[v] = match f.color(l)? {
                Color::Red => FitchState::Red,
                Color::Blue => FitchState::Blue,
            };
            continue;
        }
        let kids: Vec<u8> = tree.children(v).map(|c| states[c].set()).collect();
        let meet = kids[0] & kids[1];
        states[v] = match meet {
            1 => FitchState::Red,
            2 => FitchState::Blue,
            3 => FitchState::BothIntersection,
            _ => {
                score += 1;
                FitchState::BothUnion
            }
        };
    }
    Ok(FitchLabeling {
        tree: tree.clone(),
        states,
        score,
    })
}

fn check_character(tree: &PhyloTree, f: &Character) -> Result<()> {
    for t in tree.taxa() {
        f.color(&t)?;
    }
    Ok(())
}

/// Fitch parsimony score. An unrooted tree is rooted on the edge at its
/// smallest taxon.
pub fn fitch_score(tree: &PhyloTree, f: &Character) -> Result<FitchLabeling> {
    check_character(tree, f)?;
    if tree.is_rooted() {
        return fitch_rooted(tree, f);
    }
    if tree.leaf_count() == 1 {
        let rooted = PhyloTree::from_parts(
            TreeKind::Rooted,
            vec![tree.label(0).map(str::to_string)],
            vec![],
            Some(0),
        )?;
        return fitch_rooted(&rooted, f);
    }
    let smallest = tree.leaves().min_by(|&a, &b| tree.label(a).cmp(&tree.label(b))).unwrap();
    let e = tree
        .edges()
        .iter()
        .position(|&(a, b)| a == smallest || b == smallest)
        .unwrap();
    fitch_rooted(&root_on_edge(tree, e)?, f)
}

/// Fitch score with the unrooted tree rooted on edge `edge`.
pub fn fitch_score_rooted_at(tree: &PhyloTree, edge: usize, f: &Character) -> Result<usize> {
    check_character(tree, f)?;
    Ok(fitch_rooted(&root_on_edge(tree, edge)?, f)?.score)
}

pub const FITCH_BRUTEFORCE_BOUND: usize = 8;

/// Fewest bichromatic edges over all colourings of the internal vertices.
pub fn fitch_bruteforce(tree: &PhyloTree, f: &Character) -> Result<usize> {
    check_character(tree, f)?;
    if tree.leaf_count() > FITCH_BRUTEFORCE_BOUND {
        return Err(Error::SizeGuard {
            size: tree.leaf_count(),
            bound: FITCH_BRUTEFORCE_BOUND,
        });
    }
    let internal: Vec<usize> = (0..tree.vertex_count()).filter(|&v| !tree.is_leaf(v)).collect();
    let mut colour = vec![false; tree.vertex_count()];
    for v in tree.leaves() {
        colour[v] = f.color(tree.label(v).unwrap())? == Color::Blue;
    }
    let mut best = usize::MAX;
    for mask in 0u64..1 << internal.len() {
        for (i, &v) in internal.iter().enumerate() {
            colour[v] = mask >> i & 1 == 1;
        }
        let cost = tree.edges().iter().filter(|&&(a, b)| colour[a] != colour[b]).count();
        best = best.min(cost);
    }
    Ok(best)
}

// ------------------------------------------------------------------ d2MP

pub const D2MP_DEFAULT_BOUND: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct ParsimonyDistance {
    pub value: usize,
    pub witness: Character,
    /// Parsimony scores of the witness on the first and second tree.
    pub scores: (usize, usize),
}

fn unrooted_pair(t1: &PhyloTree, t2: &PhyloTree, bound: usize) -> Result<Vec<String>> {
    check_pair(t1, t2, TreeKind::Unrooted, bound)?;
    Ok(t1.taxa().into_iter().collect())
}

/// Scores of both trees for every character with the first taxon red, in
/// increasing mask order.
fn score_table(t1: &PhyloTree, t2: &PhyloTree, taxa: &[String]) -> Result<Vec<(u64, usize, usize)>> {
    let n = taxa.len();
    (0u64..1 << (n - 1))
        .map(|m| {
            let f = Character::from_mask(taxa, m << 1);
            Ok((m << 1, fitch_score(t1, &f)?.score, fitch_score(t2, &f)?.score))
        })
        .collect()
}

/// Key ordering characters lexicographically along the taxa, red first.
fn lex_key(mask: u64, n: usize) -> u64 {
    (0..n).fold(0, |k, i| k << 1 | (mask >> i & 1))
}

fn best_of(
    table: &[(u64, usize, usize)],
    n: usize,
    gain: impl Fn(usize, usize) -> isize,
) -> (isize, u64, usize, usize) {
    table
        .iter()
        .map(|&(m, a, b)| (gain(a, b), m, a, b))
        .max_by(|x, y| x.0.cmp(&y.0).then(lex_key(y.1, n).cmp(&lex_key(x.1, n))))
        .unwrap()
}

/// Largest `l_f(T1) - l_f(T2)` over binary characters (clamped at 0).
pub fn d2mp_directional(t1: &PhyloTree, t2: &PhyloTree, bound: usize) -> Result<ParsimonyDistance> {
    let taxa = unrooted_pair(t1, t2, bound)?;
    let table = score_table(t1, t2, &taxa)?;
    let (gain, m, a, b) = best_of(&table, taxa.len(), |a, b| a as isize - b as isize);
    Ok(ParsimonyDistance {
        value: gain.max(0) as usize,
        witness: Character::from_mask(&taxa, m),
        scores: (a, b),
    })
}

/// Binary-character parsimony distance: the larger of the two directional
/// maxima. Ties between witnesses go to the lexicographically first character
/// (taxa in label order, red before blue).
pub fn d2mp(t1: &PhyloTree, t2: &PhyloTree, bound: usize) -> Result<ParsimonyDistance> {
    let taxa = unrooted_pair(t1, t2, bound)?;
    let n = taxa.len();
    let table = score_table(t1, t2, &taxa)?;
    let forward = best_of(&table, n, |a, b| a as isize - b as isize);
    let backward = best_of(&table, n, |a, b| b as isize - a as isize);
    let pick = if forward.0 > backward.0 || forward.0 == backward.0 && lex_key(forward.1, n) <= lex_key(backward.1, n) {
        forward
    } else {
        backward
    };
    Ok(ParsimonyDistance {
        value: pick.0.max(0) as usize,
        witness: Character::from_mask(&taxa, pick.1),
        scores: (pick.2, pick.3),
    })
}

/// Distinct canonical forms among `trees`.
pub fn distinct_topologies(trees: &[PhyloTree]) -> usize {
    trees.iter().map(PhyloTree::to_newick).collect::<HashSet<_>>().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treeio::parse_newick;

    fn t(s: &str) -> PhyloTree {
        parse_newick(s).unwrap()
    }

    fn uv_red() -> Character {
        Character::new(&[("u", Color::Red), ("v", Color::Red), ("w", Color::Blue), ("y", Color::Blue)])
    }

    #[test]
    fn conflicting_quartets() {
        let a = t("(u,v,(w,y));");
        let b = t("(u,w,(v,y));");
        assert_eq!(d_tbr(&a, &b).unwrap().0, 1);
        assert_eq!(tbr_move_bfs(&a, &b).unwrap(), 1);
        assert_eq!(tbr_move_bfs(&a, &a).unwrap(), 0);
        let d = d2mp(&a, &b, 16).unwrap();
        assert_eq!(d.value, 1);
        assert_eq!(d.witness, uv_red());
        assert_eq!(d.scores, (1, 2));
    }

    #[test]
    fn fitch_examples() {
        let a = t("(u,v,(w,y));");
        let b = t("(u,w,(v,y));");
        assert_eq!(fitch_score(&a, &uv_red()).unwrap().score, 1);
        assert_eq!(fitch_score(&b, &uv_red()).unwrap().score, 2);
        assert_eq!(fitch_bruteforce(&b, &uv_red()).unwrap(), 2);
        let constant = Character::new(&[("u", Color::Red), ("v", Color::Red), ("w", Color::Red), ("y", Color::Red)]);
        assert_eq!(fitch_score(&a, &constant).unwrap().score, 0);
        let partial = Character::new(&[("u", Color::Red)]);
        assert_eq!(fitch_score(&a, &partial).unwrap_err(), Error::PartialCharacter("v".into()));
    }

    #[test]
    fn rooted_triplets() {
        let a = t("((a,b),c);");
        let b = t("((b,c),a);");
        assert_eq!(d_rspr(&a, &b).unwrap().0, 1);
        assert_eq!(rspr_move_bfs(&a, &b).unwrap(), 1);
        let h = hyb_number(&a, &b, true).unwrap();
        assert_eq!(h.value, 1);
        assert_eq!(h.sequence.unwrap().len(), 1);
    }

    #[test]
    fn neighbourhoods_stay_one_move_away() {
        let cat = t("(a,b,(c,(d,e)));");
        for n in tbr_neighbors(&cat) {
            assert!(d_tbr(&cat, &n).unwrap().0 <= 1);
        }
        assert_eq!(distinct_topologies(&rspr_neighbors(&t("((a,b),c);"))), 3);
    }

    #[test]
    fn guards() {
        let big = t("((a,b),(c,d),((e,f),g));");
        assert!(matches!(tbr_move_bfs(&big, &big), Err(Error::SizeGuard { .. })));
    }
}
