//! Agreement forests obtained by cutting edges, minimum agreement forests
//! (unrooted, rooted, acyclic), inheritance graphs and tree sequences.
//!
//! Taxa are handled as `u64` bitmasks. Bit `i` is the `i`-th taxon in label
//! order, with `ρ` (rooted setting) last; this matches the taxon numbering of
//! the display graph.

use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use serde::Serialize;

use crate::treeio::{augment_root, PhyloTree, TreeKind, RHO};
use crate::{Error, Result};

/// One component of an agreement forest.
///
/// In the rooted setting a component without `ρ` is the rooted subtree
/// induced in the input tree; the component holding `ρ` is the unrooted
/// subtree induced in the `ρ`-augmented tree.
#[derive(Clone, Debug)]
pub struct Component {
    pub taxa: Vec<String>,
    pub tree: PhyloTree,
}

impl Serialize for Component {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Component", 2)?;
        st.serialize_field("taxa", &self.taxa)?;
        st.serialize_field("newick", &self.tree.to_newick())?;
        st.end()
    }
}

/// An agreement forest with the edge cuts producing it in each tree. For
/// rooted inputs the edge ids refer to the `ρ`-augmented trees, whose last
/// edge is the `ρ` edge.
#[derive(Clone, Debug, Serialize)]
pub struct AgreementForest {
    pub kind: TreeKind,
    pub components: Vec<Component>,
    pub k1: Vec<usize>,
    pub k2: Vec<usize>,
}

impl AgreementForest {
    pub fn size(&self) -> usize {
        self.components.len()
    }

    /// Taxon sets of the components.
    pub fn blocks(&self) -> Vec<BTreeSet<String>> {
        self.components
            .iter()
            .map(|c| c.taxa.iter().cloned().collect())
            .collect()
    }
}

/// Result of deleting edges from a tree.
#[derive(Clone, Debug)]
pub struct CutForest {
    /// Labelled components ordered by their smallest taxon.
    pub components: Vec<PhyloTree>,
    /// Number of components without any taxon, which were discarded.
    pub dropped: usize,
}

/// Deletes the edges `k` and cleans each labelled component into a binary tree.
pub fn apply_cuts(tree: &PhyloTree, k: &[usize]) -> Result<CutForest> {
    let cut = edge_flags(tree, k)?;
    let comp = components(tree, &cut);
    let count = comp.iter().max().map_or(0, |m| m + 1);
    let mut labelled = vec![false; count];
    for v in tree.leaves() {
        labelled[comp[v]] = true;
    }
    let mut trees: Vec<PhyloTree> = (0..count)
        .filter(|&c| labelled[c])
        .map(|c| tree.restrict_by(|v| comp[v] == c).unwrap().0)
        .collect();
    trees.sort_by_key(|t| t.taxa().into_iter().next());
    Ok(CutForest {
        dropped: labelled.iter().filter(|&&l| !l).count(),
        components: trees,
    })
}

pub(crate) fn edge_flags(tree: &PhyloTree, k: &[usize]) -> Result<Vec<bool>> {
    let mut cut = vec![false; tree.edge_count()];
    for &e in k {
        *cut.get_mut(e).ok_or(Error::UnknownEdge(e))? = true;
    }
    Ok(cut)
}

/// Component index of every vertex after deleting the flagged edges.
pub(crate) fn components(tree: &PhyloTree, cut: &[bool]) -> Vec<usize> {
    let n = tree.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for (e, &(a, b)) in tree.edges().iter().enumerate() {
        if !cut[e] {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// One tree of the pair, prepared for repeated cutting.
struct Side {
    /// The tree the cuts act on (augmented in the rooted setting).
    cut_tree: PhyloTree,
    /// The rooted input tree, in the rooted setting.
    rooted: Option<PhyloTree>,
    cut_bits: Vec<u64>,
    rooted_bits: Vec<u64>,
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Parent and depth in `cut_tree` hung from `ρ` (rooted setting).
    up: Vec<Option<usize>>,
    depth: Vec<usize>,
    keys: HashMap<u64, String>,
}

struct Pair {
    taxa: Vec<String>,
    rooted: bool,
    rho_bit: u64,
    sides: [Side; 2],
}

fn leaf_bits(tree: &PhyloTree, taxa: &[String]) -> Vec<u64> {
    (0..tree.vertex_count())
        .map(|v| match tree.label(v) {
            Some(l) => 1u64 << taxa.iter().position(|t| t == l).unwrap(),
            None => 0,
        })
        .collect()
}

impl Side {
    fn new(tree: &PhyloTree, taxa: &[String]) -> Result<Side> {
        let (cut_tree, rooted) = if tree.is_rooted() {
            (augment_root(tree)?, Some(tree.clone()))
        } else {
            (tree.clone(), None)
        };
        let n = cut_tree.vertex_count();
        let mut adjacency = vec![Vec::new(); n];
        for (e, &(a, b)) in cut_tree.edges().iter().enumerate() {
            adjacency[a].push((b, e));
            adjacency[b].push((a, e));
        }
        let (mut up, mut depth) = (vec![None; n], vec![0; n]);
        if let Some(rho) = cut_tree.leaf_of(RHO) {
            let (order, parent) = cut_tree.preorder_from(rho);
            for v in order {
                if let Some(p) = parent[v] {
                    depth[v] = depth[p] + 1;
                }
            }
            up = parent;
        }
        Ok(Side {
            cut_bits: leaf_bits(&cut_tree, taxa),
            rooted_bits: rooted.as_ref().map_or(Vec::new(), |t| leaf_bits(t, taxa)),
            cut_tree,
            rooted,
            adjacency,
            up,
            depth,
            keys: HashMap::new(),
        })
    }

    /// Taxon masks of the components of `cut_tree - cut`, sorted; `None` if
    /// some component carries no taxon.
    fn partition(&self, cut: &[usize]) -> Option<Vec<u64>> {
        let n = self.cut_tree.vertex_count();
        let mut seen = vec![false; n];
        let mut blocks = Vec::with_capacity(cut.len() + 1);
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut mask = 0u64;
            while let Some(v) = stack.pop() {
                mask |= self.cut_bits[v];
                for &(w, e) in &self.adjacency[v] {
                    if !seen[w] && !cut.contains(&e) {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            if mask == 0 {
                return None;
            }
            blocks.push(mask);
        }
        blocks.sort_unstable();
        Some(blocks)
    }

    fn component_tree(&self, mask: u64, rho_bit: u64) -> PhyloTree {
        match &self.rooted {
            Some(t) if mask & rho_bit == 0 => t.restrict_by(|v| self.rooted_bits[v] & mask != 0),
            _ => self.cut_tree.restrict_by(|v| self.cut_bits[v] & mask != 0),
        }
        .unwrap()
        .0
    }

    fn key(&mut self, mask: u64, rho_bit: u64) -> &str {
        if !self.keys.contains_key(&mask) {
            let key = self.component_tree(mask, rho_bit).to_newick();
            self.keys.insert(mask, key);
        }
        &self.keys[&mask]
    }

    /// Root of the subtree spanned by `mask` when hanging from `ρ`.
    fn lca(&self, mask: u64) -> usize {
        let mut acc: Option<usize> = None;
        for v in 0..self.cut_tree.vertex_count() {
            if self.cut_bits[v] & mask == 0 {
                continue;
            }
            acc = Some(match acc {
                None => v,
                Some(mut a) => {
                    let mut b = v;
                    while self.depth[a] > self.depth[b] {
                        a = self.up[a].unwrap();
                    }
                    while self.depth[b] > self.depth[a] {
                        b = self.up[b].unwrap();
                    }
                    while a != b {
                        a = self.up[a].unwrap();
                        b = self.up[b].unwrap();
                    }
                    a
                }
            });
        }
        acc.unwrap()
    }

    fn strict_ancestor(&self, a: usize, mut b: usize) -> bool {
        while let Some(p) = self.up[b] {
            if p == a {
                return true;
            }
            b = p;
        }
        false
    }
}

impl Pair {
    fn new(t1: &PhyloTree, t2: &PhyloTree) -> Result<Pair> {
        if t1.kind() != t2.kind() {
            return Err(Error::WrongKind {
                expected: if t1.is_rooted() { "rooted" } else { "unrooted" },
            });
        }
        if t1.taxa() != t2.taxa() {
            return Err(Error::LabelMismatch);
        }
        let rooted = t1.is_rooted();
        let mut taxa: Vec<String> = t1.taxa().into_iter().collect();
        if rooted {
            taxa.push(RHO.to_string());
        }
        if taxa.len() > 64 {
            return Err(Error::SizeGuard {
                size: taxa.len(),
                bound: 64,
            });
        }
        let rho_bit = if rooted { 1u64 << (taxa.len() - 1) } else { 0 };
        Ok(Pair {
            sides: [Side::new(t1, &taxa)?, Side::new(t2, &taxa)?],
            taxa,
            rooted,
            rho_bit,
        })
    }

    /// Blocks small enough to have a unique topology need no comparison.
    fn trivial(&self, mask: u64) -> bool {
        let n = (mask & !self.rho_bit).count_ones();
        if self.rooted {
            n <= 2
        } else {
            n <= 3
        }
    }

    fn blocks_agree(&mut self, blocks: &[u64]) -> bool {
        let rho_bit = self.rho_bit;
        for &b in blocks {
            if self.trivial(b) {
                continue;
            }
            let [s1, s2] = &mut self.sides;
            if s1.key(b, rho_bit) != s2.key(b, rho_bit) {
                return false;
            }
        }
        true
    }

    fn labels(&self, mask: u64) -> Vec<String> {
        (0..self.taxa.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.taxa[i].clone())
            .collect()
    }

    fn forest(&self, blocks: &[u64], k1: Vec<usize>, k2: Vec<usize>) -> AgreementForest {
        let mut blocks = blocks.to_vec();
        blocks.sort_by_key(|m| m.trailing_zeros());
        AgreementForest {
            kind: if self.rooted {
                TreeKind::Rooted
            } else {
                TreeKind::Unrooted
            },
            components: blocks
                .iter()
                .map(|&m| Component {
                    taxa: self.labels(m),
                    tree: self.sides[0].component_tree(m, self.rho_bit),
                })
                .collect(),
            k1,
            k2,
        }
    }

    fn acyclic(&self, blocks: &[u64]) -> bool {
        inheritance_arcs(&self.sides, blocks, self.rho_bit).is_acyclic()
    }

    /// Iterative deepening over the number of components.
    fn search(&mut self, acyclic_only: bool) -> AgreementForest {
        let m1 = self.sides[0].cut_tree.edge_count();
        let m2 = self.sides[1].cut_tree.edge_count();
        for size in 1..=self.taxa.len() {
            let r = size - 1;
            let mut by_partition: HashMap<Vec<u64>, Vec<Vec<usize>>> = HashMap::new();
            for k2 in (0..m2).combinations(r) {
                if let Some(p) = self.sides[1].partition(&k2) {
                    by_partition.entry(p).or_default().push(k2);
                }
            }
            let mut checked: HashSet<Vec<u64>> = HashSet::new();
            for k1 in (0..m1).combinations(r) {
                let Some(p) = self.sides[0].partition(&k1) else {
                    continue;
                };
                let Some(k2s) = by_partition.get(&p) else {
                    continue;
                };
                // every cut pair inducing the same partition gives the same verdict
                if !checked.insert(p.clone()) {
                    continue;
                }
                if self.blocks_agree(&p) && (!acyclic_only || self.acyclic(&p)) {
                    let k2 = k2s[0].clone();
                    return self.forest(&p, k1, k2);
                }
            }
        }
        unreachable!("the forest of singletons always agrees")
    }
}

/// The agreement forest induced by the cuts, if the two cut trees agree.
/// Rooted inputs are cut in their `ρ`-augmented form.
pub fn is_agreement_forest(
    t1: &PhyloTree,
    t2: &PhyloTree,
    k1: &[usize],
    k2: &[usize],
) -> Result<Option<AgreementForest>> {
    let mut pair = Pair::new(t1, t2)?;
    let mut parts = Vec::new();
    for (side, k) in pair.sides.iter().zip([k1, k2]) {
        let cut = edge_flags(&side.cut_tree, k)?;
        let comp = components(&side.cut_tree, &cut);
        let mut masks: HashMap<usize, u64> = HashMap::new();
        for v in side.cut_tree.leaves() {
            *masks.entry(comp[v]).or_default() |= side.cut_bits[v];
        }
        let mut blocks: Vec<u64> = masks.into_values().collect();
        blocks.sort_unstable();
        parts.push(blocks);
    }
    if parts[0] != parts[1] || !pair.blocks_agree(&parts[0]) {
        return Ok(None);
    }
    let mut k1 = k1.to_vec();
    let mut k2 = k2.to_vec();
    k1.sort_unstable();
    k2.sort_unstable();
    Ok(Some(pair.forest(&parts[0], k1, k2)))
}

/// Maximum agreement forest of two unrooted trees.
pub fn umaf(t1: &PhyloTree, t2: &PhyloTree) -> Result<AgreementForest> {
    if t1.is_rooted() || t2.is_rooted() {
        return Err(Error::WrongKind { expected: "unrooted" });
    }
    Ok(Pair::new(t1, t2)?.search(false))
}

/// Maximum agreement forest of two rooted trees.
pub fn maf_rooted(t1: &PhyloTree, t2: &PhyloTree) -> Result<AgreementForest> {
    if !t1.is_rooted() || !t2.is_rooted() {
        return Err(Error::WrongKind { expected: "rooted" });
    }
    Ok(Pair::new(t1, t2)?.search(false))
}

/// Maximum acyclic agreement forest of two rooted trees.
pub fn maaf(t1: &PhyloTree, t2: &PhyloTree) -> Result<AgreementForest> {
    if !t1.is_rooted() || !t2.is_rooted() {
        return Err(Error::WrongKind { expected: "rooted" });
    }
    Ok(Pair::new(t1, t2)?.search(true))
}

/// Arcs between forest components, indexed like the forest's components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InheritanceGraph {
    pub nodes: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl InheritanceGraph {
    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.nodes];
        for &(_, j) in &self.arcs {
            indeg[j] += 1;
        }
        let mut ready: Vec<usize> = (0..self.nodes).filter(|&v| indeg[v] == 0).collect();
        let mut done = 0;
        while let Some(v) = ready.pop() {
            done += 1;
            for &(i, j) in &self.arcs {
                if i == v {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        ready.push(j);
                    }
                }
            }
        }
        done == self.nodes
    }
}

fn inheritance_arcs(sides: &[Side; 2], blocks: &[u64], rho_bit: u64) -> InheritanceGraph {
    let roots: Vec<[usize; 2]> = blocks
        .iter()
        .map(|&b| {
            let r = |s: &Side| {
                if b & rho_bit != 0 {
                    s.cut_tree.leaf_of(RHO).unwrap()
                } else {
                    s.lca(b)
                }
            };
            [r(&sides[0]), r(&sides[1])]
        })
        .collect();
    let mut arcs = Vec::new();
    for i in 0..blocks.len() {
        for j in 0..blocks.len() {
            if i != j
                && (sides[0].strict_ancestor(roots[i][0], roots[j][0])
                    || sides[1].strict_ancestor(roots[i][1], roots[j][1]))
            {
                arcs.push((i, j));
            }
        }
    }
    InheritanceGraph {
        nodes: blocks.len(),
        arcs,
    }
}

/// Inheritance graph of a rooted agreement forest.
pub fn inheritance_graph(t1: &PhyloTree, t2: &PhyloTree, forest: &AgreementForest) -> Result<InheritanceGraph> {
    let pair = Pair::new(t1, t2)?;
    if !pair.rooted {
        return Err(Error::WrongKind { expected: "rooted" });
    }
    let mut covered = 0u64;
    let mut blocks = Vec::new();
    for c in &forest.components {
        let mut mask = 0u64;
        for t in &c.taxa {
            let i = pair
                .taxa
                .iter()
                .position(|x| x == t)
                .ok_or_else(|| Error::UnknownTaxon(t.clone()))?;
            mask |= 1 << i;
        }
        if mask & covered != 0 || mask == 0 {
            return Err(Error::InvalidForest("components overlap".into()));
        }
        covered |= mask;
        blocks.push(mask);
    }
    let all = if pair.taxa.len() == 64 {
        u64::MAX
    } else {
        (1u64 << pair.taxa.len()) - 1
    };
    if covered != all {
        return Err(Error::InvalidForest("components do not cover the taxa".into()));
    }
    let mut check = Pair::new(t1, t2)?;
    if !check.blocks_agree(&blocks) {
        return Err(Error::InvalidForest("components disagree".into()));
    }
    Ok(inheritance_arcs(&pair.sides, &blocks, pair.rho_bit))
}

/// Taxon sets pruned in order, and the taxa left over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeSequence {
    pub sets: Vec<Vec<String>>,
    pub remainder: Vec<String>,
}

impl TreeSequence {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

struct Rooted {
    taxa: Vec<String>,
    t: [PhyloTree; 2],
    bits: [Vec<u64>; 2],
    /// Leaf set below each vertex.
    below: [Vec<u64>; 2],
}

impl Rooted {
    fn new(t1: &PhyloTree, t2: &PhyloTree) -> Result<Rooted> {
        if !t1.is_rooted() || !t2.is_rooted() {
            return Err(Error::WrongKind { expected: "rooted" });
        }
        if t1.taxa() != t2.taxa() {
            return Err(Error::LabelMismatch);
        }
        let taxa: Vec<String> = t1.taxa().into_iter().collect();
        if taxa.len() > 64 {
            return Err(Error::SizeGuard {
                size: taxa.len(),
                bound: 64,
            });
        }
        let bits = [leaf_bits(t1, &taxa), leaf_bits(t2, &taxa)];
        let below = [0, 1].map(|i| {
            let t = if i == 0 { t1 } else { t2 };
            let (order, parent) = t.preorder_from(t.root().unwrap());
            let mut below = bits[i].clone();
            for &v in order.iter().rev() {
                if let Some(p) = parent[v] {
                    below[p] |= below[v];
                }
            }
            below
        });
        Ok(Rooted {
            taxa,
            t: [t1.clone(), t2.clone()],
            bits,
            below,
        })
    }

    fn restricted(&self, i: usize, mask: u64) -> Option<PhyloTree> {
        self.t[i]
            .restrict_by(|v| self.bits[i][v] & mask != 0)
            .map(|(t, _)| t)
    }

    /// Clades of `T_i | remaining`.
    fn clades(&self, i: usize, remaining: u64) -> BTreeSet<u64> {
        self.below[i]
            .iter()
            .map(|&b| b & remaining)
            .filter(|&b| b != 0)
            .collect()
    }

    fn pendant(&self, remaining: u64) -> Vec<u64> {
        let c2 = self.clades(1, remaining);
        let mut out: Vec<u64> = self
            .clades(0, remaining)
            .into_iter()
            .filter(|c| c2.contains(c))
            .filter(|&c| {
                c.count_ones() <= 2
                    || self.restricted(0, c).unwrap().to_newick()
                        == self.restricted(1, c).unwrap().to_newick()
            })
            .collect();
        out.sort_by_key(|&c| (c.count_ones(), c.trailing_zeros(), c));
        out
    }

    fn agree(&self, remaining: u64) -> bool {
        remaining.count_ones() <= 2
            || self.restricted(0, remaining).unwrap().to_newick()
                == self.restricted(1, remaining).unwrap().to_newick()
    }

    fn labels(&self, mask: u64) -> Vec<String> {
        (0..self.taxa.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.taxa[i].clone())
            .collect()
    }

    fn mask(&self, taxa: &[String]) -> Result<u64> {
        let mut m = 0;
        for t in taxa {
            let i = self
                .taxa
                .iter()
                .position(|x| x == t)
                .ok_or_else(|| Error::UnknownTaxon(t.clone()))?;
            if m & (1 << i) != 0 {
                return Err(Error::RepeatedTaxon);
            }
            m |= 1 << i;
        }
        Ok(m)
    }

    fn sequence(&self, remaining: u64, budget: usize, failed: &mut HashSet<(u64, usize)>, out: &mut Vec<u64>) -> bool {
        if self.agree(remaining) {
            return true;
        }
        if budget == 0 || failed.contains(&(remaining, budget)) {
            return false;
        }
        for c in self.pendant(remaining) {
            if c == remaining {
                continue;
            }
            out.push(c);
            if self.sequence(remaining & !c, budget - 1, failed, out) {
                return true;
            }
            out.pop();
        }
        failed.insert((remaining, budget));
        false
    }
}

/// Taxon sets forming a pendant subtree with the same topology in both
/// trees once the `pruned` taxa are removed.
pub fn common_pendant_subtrees(
    t1: &PhyloTree,
    t2: &PhyloTree,
    pruned: &[Vec<String>],
) -> Result<Vec<Vec<String>>> {
    let r = Rooted::new(t1, t2)?;
    let mut gone = 0u64;
    for set in pruned {
        let m = r.mask(set)?;
        if m & gone != 0 {
            return Err(Error::RepeatedTaxon);
        }
        gone |= m;
    }
    let all = (0..r.taxa.len()).fold(0u64, |a, i| a | 1 << i);
    let remaining = all & !gone;
    if remaining == 0 {
        return Err(Error::EmptyAfterPruning);
    }
    Ok(r.pendant(remaining).into_iter().map(|c| r.labels(c)).collect())
}

/// Shortest tree sequence, by iterative deepening on its length.
pub fn min_tree_sequence(t1: &PhyloTree, t2: &PhyloTree) -> Result<TreeSequence> {
    let r = Rooted::new(t1, t2)?;
    let all = (0..r.taxa.len()).fold(0u64, |a, i| a | 1 << i);
    let mut failed = HashSet::new();
    for p in 0..r.taxa.len() {
        let mut out = Vec::new();
        if r.sequence(all, p, &mut failed, &mut out) {
            let rest = out.iter().fold(all, |a, &c| a & !c);
            return Ok(TreeSequence {
                sets: out.iter().map(|&c| r.labels(c)).collect(),
                remainder: r.labels(rest),
            });
        }
    }
    unreachable!("pruning all but one taxon always works")
}

/// Checks that `seq` is a tree sequence for the pair.
pub fn is_tree_sequence(t1: &PhyloTree, t2: &PhyloTree, seq: &[Vec<String>]) -> Result<bool> {
    let r = Rooted::new(t1, t2)?;
    let mut remaining = (0..r.taxa.len()).fold(0u64, |a, i| a | 1 << i);
    for set in seq {
        let m = r.mask(set)?;
        if m & !remaining != 0 || m == remaining || !r.pendant(remaining).contains(&m) {
            return Ok(false);
        }
        remaining &= !m;
    }
    Ok(r.agree(remaining))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treeio::parse_newick;

    fn t(s: &str) -> PhyloTree {
        parse_newick(s).unwrap()
    }

    #[test]
    fn cuts_identity_and_pendant() {
        let q = t("(u,v,(w,y));");
        let f = apply_cuts(&q, &[]).unwrap();
        assert_eq!(f.components.len(), 1);
        assert_eq!(f.components[0].to_newick(), q.to_newick());
        let u = q.leaf_of("u").unwrap();
        let e = q.edges().iter().position(|&(a, b)| a == u || b == u).unwrap();
        let f = apply_cuts(&q, &[e]).unwrap();
        assert_eq!(f.components.len(), 2);
        assert_eq!(f.components[0].to_newick(), "u;");
        assert_eq!(f.dropped, 0);
    }

    #[test]
    fn taxa_free_component_is_dropped() {
        let q = t("(u,v,(w,y));");
        let centre = q.neighbors(q.leaf_of("u").unwrap())[0];
        let cut: Vec<usize> = q
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == centre || b == centre)
            .map(|(e, _)| e)
            .collect();
        let f = apply_cuts(&q, &cut).unwrap();
        assert_eq!(f.dropped, 1);
        assert_eq!(f.components.len(), 3);
    }

    #[test]
    fn conflicting_quartets() {
        let a = t("(u,v,(w,y));");
        let b = t("(u,w,(v,y));");
        assert!(is_agreement_forest(&a, &b, &[], &[]).unwrap().is_none());
        let f = umaf(&a, &b).unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(umaf(&a, &a).unwrap().size(), 1);
        let again = is_agreement_forest(&a, &b, &f.k1, &f.k2).unwrap().unwrap();
        assert_eq!(again.blocks(), f.blocks());
    }

    #[test]
    fn rooted_triplets() {
        let a = t("((a,b),c);");
        let b = t("((b,c),a);");
        assert_eq!(maf_rooted(&a, &b).unwrap().size(), 2);
        let f = maaf(&a, &b).unwrap();
        assert_eq!(f.size(), 2);
        assert!(inheritance_graph(&a, &b, &f).unwrap().is_acyclic());
        assert_eq!(maaf(&a, &a).unwrap().size(), 1);
        let s = min_tree_sequence(&a, &b).unwrap();
        assert_eq!(s.len(), 1);
        assert!(is_tree_sequence(&a, &b, &s.sets).unwrap());
        assert!(min_tree_sequence(&a, &a).unwrap().is_empty());
    }

    #[test]
    fn rho_component_points_at_everything() {
        let a = t("((a,b),(c,d));");
        let b = t("((a,c),(b,d));");
        let f = maf_rooted(&a, &b).unwrap();
        let g = inheritance_graph(&a, &b, &f).unwrap();
        let rho = f.components.iter().position(|c| c.taxa.iter().any(|x| x == RHO)).unwrap();
        for j in 0..f.size() {
            if j != rho {
                assert!(g.arcs.contains(&(rho, j)));
            }
        }
    }

    #[test]
    fn pendant_subtrees() {
        let a = t("((a,b),c);");
        let all = common_pendant_subtrees(&a, &a, &[]).unwrap();
        assert_eq!(all.len(), 5);
        assert!(all.contains(&vec!["a".to_string(), "b".into(), "c".into()]));
        let b = t("((b,c),a);");
        let shared = common_pendant_subtrees(&a, &b, &[]).unwrap();
        assert_eq!(shared.len(), 3);
        let err = common_pendant_subtrees(&a, &b, &[vec!["a".into(), "b".into(), "c".into()]]);
        assert_eq!(err.unwrap_err(), Error::EmptyAfterPruning);
    }
}
