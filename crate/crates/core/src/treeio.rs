//! Binary phylogenetic trees: Newick input and output, induced subtrees,
//! root augmentation, quartets, triplets and topology comparison.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::{Error, Result};

/// Reserved label of the artificial taxon that marks the root location.
pub const RHO: &str = "ρ";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeKind {
    Rooted,
    Unrooted,
}

impl TreeKind {
    fn name(self) -> &'static str {
        match self {
            TreeKind::Rooted => "rooted",
            TreeKind::Unrooted => "unrooted",
        }
    }
}

/// A binary leaf-labelled tree.
///
/// Vertices are dense indices. Edge ids index [`PhyloTree::edges`]; in a
/// rooted tree every edge is stored as `(parent, child)`.
#[derive(Clone, Debug)]
pub struct PhyloTree {
    kind: TreeKind,
    neighbors: Vec<Vec<usize>>,
    labels: Vec<Option<String>>,
    edges: Vec<(usize, usize)>,
    root: Option<usize>,
    parent: Vec<Option<usize>>,
}

impl PhyloTree {
    /// Builds a tree from raw parts and checks every binary-tree invariant.
    /// For rooted trees edges are re-oriented away from `root`.
    pub fn from_parts(
        kind: TreeKind,
        labels: Vec<Option<String>>,
        edges: Vec<(usize, usize)>,
        root: Option<usize>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::InvalidTree(format!(
                "{} vertices but {} edges",
                n,
                edges.len()
            )));
        }
        let mut neighbors = vec![Vec::new(); n];
        for &(a, b) in &edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidTree(format!("bad edge ({a}, {b})")));
            }
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        // connectivity (with n-1 edges this also rules out cycles)
        let start = root.unwrap_or(0);
        if start >= n {
            return Err(Error::InvalidTree("root out of range".into()));
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in &neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    order.push(w);
                }
            }
        }
        if order.len() != n {
            return Err(Error::InvalidTree("graph is not connected".into()));
        }

        let mut seen_labels = HashSet::new();
        for (v, label) in labels.iter().enumerate() {
            let deg = neighbors[v].len();
            let is_leaf = match kind {
                TreeKind::Unrooted => deg <= 1,
                TreeKind::Rooted => Some(v) != root && deg == 1 || n == 1,
            };
            match label {
                Some(l) => {
                    if !is_leaf {
                        return Err(Error::InvalidTree(format!(
                            "internal vertex {v} carries label `{l}`"
                        )));
                    }
                    if l.is_empty() {
                        return Err(Error::InvalidTree("empty label".into()));
                    }
                    if !seen_labels.insert(l.clone()) {
                        return Err(Error::DuplicateLabel(l.clone()));
                    }
                }
                None if is_leaf => {
                    return Err(Error::InvalidTree(format!("leaf {v} is unlabelled")));
                }
                None => {}
            }
            if !is_leaf {
                let expected = match kind {
                    TreeKind::Rooted if Some(v) == root => 2,
                    _ => 3,
                };
                if deg == 2 && expected == 3 {
                    return Err(Error::DegreeTwo);
                }
                if deg != expected {
                    let children = if Some(v) == root || kind == TreeKind::Unrooted {
                        deg
                    } else {
                        deg - 1
                    };
                    return Err(Error::NonBinary(children));
                }
            }
        }

        let (edges, root, parent) = match kind {
            TreeKind::Rooted => {
                let root = root.ok_or_else(|| Error::InvalidTree("rooted tree without root".into()))?;
                let edges = edges
                    .into_iter()
                    .map(|(a, b)| if parent[b] == Some(a) { (a, b) } else { (b, a) })
                    .collect();
                (edges, Some(root), parent)
            }
            TreeKind::Unrooted => (edges, None, vec![None; n]),
        };
        Ok(PhyloTree {
            kind,
            neighbors,
            labels,
            edges,
            root,
            parent,
        })
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn is_rooted(&self) -> bool {
        self.kind == TreeKind::Rooted
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Children of `v` in a rooted tree.
    pub fn children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let p = self.parent[v];
        self.neighbors[v].iter().copied().filter(move |&w| Some(w) != p)
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.labels[v].is_some()
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.labels.len()).filter(|&v| self.labels[v].is_some())
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// The label set, sorted.
    pub fn taxa(&self) -> BTreeSet<String> {
        self.labels.iter().flatten().cloned().collect()
    }

    pub fn leaf_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.as_deref() == Some(label))
    }

    pub fn contains_rho(&self) -> bool {
        self.leaf_of(RHO).is_some()
    }

    /// Vertices in an order where every vertex follows its parent, starting
    /// from `start` (the root for rooted trees).
    pub(crate) fn preorder_from(&self, start: usize) -> (Vec<usize>, Vec<Option<usize>>) {
        let n = self.vertex_count();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in &self.neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    order.push(w);
                }
            }
        }
        (order, parent)
    }

    /// Canonical Newick: children ordered by their smallest descendant label.
    pub fn to_newick(&self) -> String {
        write_newick(self)
    }

    /// Induced subtree `T|_Y`; see [`restrict`].
    pub fn restrict<S: AsRef<str>>(&self, taxa: &[S]) -> Result<PhyloTree> {
        restrict(self, taxa)
    }

    /// Keeps the leaves for which `keep` holds. Returns the induced subtree and,
    /// for each of its vertices, the vertex of `self` it came from.
    pub(crate) fn restrict_by(&self, keep: impl Fn(usize) -> bool) -> Option<(PhyloTree, Vec<usize>)> {
        let n = self.vertex_count();
        let kept: Vec<bool> = (0..n).map(|v| self.is_leaf(v) && keep(v)).collect();
        let total = kept.iter().filter(|&&k| k).count();
        if total == 0 {
            return None;
        }
        let start = match self.kind {
            TreeKind::Rooted => self.root.unwrap(),
            TreeKind::Unrooted => (0..n).find(|&v| kept[v]).unwrap(),
        };
        let (order, parent) = self.preorder_from(start);
        let mut below = vec![0usize; n];
        for &v in order.iter().rev() {
            if kept[v] {
                below[v] += 1;
            }
            if let Some(p) = parent[v] {
                below[p] += below[v];
            }
        }
        let mut b = Builder::default();
        let kids = |v: usize| -> Vec<usize> {
            self.neighbors[v]
                .iter()
                .copied()
                .filter(|&w| Some(w) != parent[v] && below[w] > 0)
                .collect()
        };
        // Iterative construction to avoid deep recursion on long caterpillars.
        fn build(
            tree: &PhyloTree,
            b: &mut Builder,
            kids: &dyn Fn(usize) -> Vec<usize>,
            mut v: usize,
        ) -> usize {
            loop {
                let k = kids(v);
                match k.len() {
                    0 => return b.leaf(tree.labels[v].clone().unwrap(), v),
                    1 => v = k[0],
                    _ => {
                        let left = build(tree, b, kids, k[0]);
                        let right = build(tree, b, kids, k[1]);
                        let u = b.internal(v);
                        b.connect(u, left);
                        b.connect(u, right);
                        return u;
                    }
                }
            }
        }
        match self.kind {
            TreeKind::Rooted => {
                let mut lca = start;
                loop {
                    let k = kids(lca);
                    if k.len() == 1 {
                        lca = k[0];
                    } else {
                        break;
                    }
                }
                let r = build(self, &mut b, &kids, lca);
                Some(b.finish(TreeKind::Rooted, Some(r)))
            }
            TreeKind::Unrooted => {
                let y0 = b.leaf(self.labels[start].clone().unwrap(), start);
                if total > 1 {
                    let w = self.neighbors[start][0];
                    let sub = build(self, &mut b, &kids, w);
                    b.connect(y0, sub);
                }
                Some(b.finish(TreeKind::Unrooted, None))
            }
        }
    }
}

impl fmt::Display for PhyloTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_newick())
    }
}

#[derive(Default)]
pub(crate) struct Builder {
    labels: Vec<Option<String>>,
    edges: Vec<(usize, usize)>,
    origin: Vec<usize>,
}

impl Builder {
    pub(crate) fn leaf(&mut self, label: String, origin: usize) -> usize {
        self.labels.push(Some(label));
        self.origin.push(origin);
        self.labels.len() - 1
    }

    pub(crate) fn internal(&mut self, origin: usize) -> usize {
        self.labels.push(None);
        self.origin.push(origin);
        self.labels.len() - 1
    }

    pub(crate) fn connect(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    pub(crate) fn finish(self, kind: TreeKind, root: Option<usize>) -> (PhyloTree, Vec<usize>) {
        let tree = PhyloTree::from_parts(kind, self.labels, self.edges, root)
            .expect("builder produced an invalid tree");
        (tree, self.origin)
    }

    pub(crate) fn try_finish(self, kind: TreeKind, root: Option<usize>) -> Result<PhyloTree> {
        PhyloTree::from_parts(kind, self.labels, self.edges, root)
    }
}

// ---------------------------------------------------------------- Newick

struct NewickNode {
    label: Option<String>,
    children: Vec<NewickNode>,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) -> Result<()> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('[') => {
                    // comment
                    while let Some(c) = self.bump() {
                        if c == ']' {
                            break;
                        }
                    }
                    if !self.src[..self.pos].ends_with(']') {
                        return self.err("unterminated comment");
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn node(&mut self, depth: usize) -> Result<NewickNode> {
        if depth > 10_000 {
            return self.err("nesting too deep");
        }
        self.skip_ws()?;
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.bump();
            loop {
                children.push(self.node(depth + 1)?);
                self.skip_ws()?;
                match self.bump() {
                    Some(',') => continue,
                    Some(')') => break,
                    _ => return self.err("expected `,` or `)`"),
                }
            }
        }
        self.skip_ws()?;
        let label = self.label()?;
        self.skip_ws()?;
        if self.peek() == Some(':') {
            self.bump();
            self.skip_ws()?;
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit() || "+-.eE".contains(c)) {
                self.bump();
            }
            if self.src[start..self.pos].parse::<f64>().is_err() {
                return self.err("malformed branch length");
            }
        }
        Ok(NewickNode { label, children })
    }

    fn label(&mut self) -> Result<Option<String>> {
        if self.peek() == Some('\'') {
            self.bump();
            let mut out = String::new();
            loop {
                match self.bump() {
                    Some('\'') if self.peek() == Some('\'') => {
                        self.bump();
                        out.push('\'');
                    }
                    Some('\'') => break,
                    Some(c) => out.push(c),
                    None => return self.err("unterminated quoted label"),
                }
            }
            return Ok(Some(out));
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if !c.is_whitespace() && !"(),:;[]'".contains(c)) {
            self.bump();
        }
        let raw = &self.src[start..self.pos];
        Ok((!raw.is_empty()).then(|| raw.replace('_', " ")))
    }
}

/// Parses one Newick tree. A top-level bifurcation gives a rooted tree, a
/// top-level trifurcation an unrooted one. Branch lengths, comments and
/// internal node labels are discarded.
pub fn parse_newick(text: &str) -> Result<PhyloTree> {
    let mut p = Parser { src: text, pos: 0 };
    let top = p.node(0)?;
    p.skip_ws()?;
    if p.bump() != Some(';') {
        return p.err("expected `;`");
    }
    p.skip_ws()?;
    if p.pos != text.len() {
        return p.err("trailing input after `;`");
    }

    let kind = match top.children.len() {
        0 | 3 => TreeKind::Unrooted,
        2 => TreeKind::Rooted,
        1 => return Err(Error::DegreeTwo),
        k => return Err(Error::NonBinary(k)),
    };
    let mut b = Builder::default();
    let mut seen = HashSet::new();
    fn add(node: NewickNode, b: &mut Builder, seen: &mut HashSet<String>, top: bool) -> Result<usize> {
        if node.children.is_empty() {
            let label = node
                .label
                .ok_or_else(|| Error::InvalidTree("unlabelled leaf".into()))?;
            if label == RHO {
                return Err(Error::ReservedLabel);
            }
            if !seen.insert(label.clone()) {
                return Err(Error::DuplicateLabel(label));
            }
            return Ok(b.leaf(label, 0));
        }
        if !top {
            match node.children.len() {
                1 => return Err(Error::DegreeTwo),
                2 => {}
                k => return Err(Error::NonBinary(k)),
            }
        }
        let v = b.internal(0);
        for child in node.children {
            let c = add(child, b, seen, false)?;
            b.connect(v, c);
        }
        Ok(v)
    }
    let root = add(top, &mut b, &mut seen, true)?;
    b.try_finish(kind, (kind == TreeKind::Rooted).then_some(root))
}

/// Parses a file with one Newick tree per non-empty line.
pub fn parse_newick_lines(text: &str) -> Result<Vec<PhyloTree>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_newick)
        .collect()
}

fn quote(label: &str) -> String {
    if label.chars().any(|c| c.is_whitespace() || "(),:;[]'_".contains(c)) {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}

/// Writes canonical Newick: children sorted by smallest descendant label; an
/// unrooted tree is written around the neighbour of its smallest leaf.
pub fn write_newick(tree: &PhyloTree) -> String {
    fn rec<'t>(tree: &'t PhyloTree, v: usize, parent: Option<usize>, out: &mut Vec<(&'t str, String)>) {
        if let Some(l) = tree.label(v) {
            out.push((l, quote(l)));
            return;
        }
        let mut parts = Vec::new();
        for &w in tree.neighbors(v) {
            if Some(w) != parent {
                rec(tree, w, Some(v), &mut parts);
            }
        }
        parts.sort();
        let min = parts[0].0;
        let body: Vec<String> = parts.into_iter().map(|(_, s)| s).collect();
        out.push((min, format!("({})", body.join(","))));
    }
    let mut out = Vec::new();
    match tree.kind {
        TreeKind::Rooted => rec(tree, tree.root.unwrap(), None, &mut out),
        TreeKind::Unrooted => {
            let n = tree.vertex_count();
            if n == 1 {
                rec(tree, 0, None, &mut out);
            } else {
                let smallest = tree
                    .leaves()
                    .min_by(|&a, &b| tree.label(a).cmp(&tree.label(b)))
                    .unwrap();
                if n == 2 {
                    let other = tree.neighbors(smallest)[0];
                    out.push((
                        "",
                        format!(
                            "({},{})",
                            quote(tree.label(smallest).unwrap()),
                            quote(tree.label(other).unwrap())
                        ),
                    ));
                } else {
                    rec(tree, tree.neighbors(smallest)[0], None, &mut out);
                }
            }
        }
    }
    format!("{};", out.pop().unwrap().1)
}

// ---------------------------------------------------------- transforms

/// Attaches a new leaf `ρ` to the root and returns the unrooted interpretation.
/// Edge ids of the input are preserved; the `ρ` edge is appended last.
pub fn augment_root(tree: &PhyloTree) -> Result<PhyloTree> {
    if !tree.is_rooted() {
        return Err(Error::WrongKind { expected: "rooted" });
    }
    if tree.contains_rho() {
        return Err(Error::AlreadyAugmented);
    }
    let mut labels = tree.labels.clone();
    labels.push(Some(RHO.to_string()));
    let mut edges = tree.edges.clone();
    edges.push((tree.root.unwrap(), labels.len() - 1));
    PhyloTree::from_parts(TreeKind::Unrooted, labels, edges, None)
}

/// Inverse of [`augment_root`]: removes the `ρ` leaf of an unrooted tree and
/// roots the rest at its former neighbour.
pub fn deaugment(tree: &PhyloTree) -> Result<PhyloTree> {
    if tree.is_rooted() {
        return Err(Error::WrongKind { expected: "unrooted" });
    }
    let rho = tree.leaf_of(RHO).ok_or(Error::UnknownTaxon(RHO.into()))?;
    if tree.vertex_count() < 2 {
        return Err(Error::EmptyTaxa);
    }
    let top = tree.neighbors[rho][0];
    let keep: Vec<usize> = (0..tree.vertex_count()).filter(|&v| v != rho).collect();
    let mut index = vec![usize::MAX; tree.vertex_count()];
    for (i, &v) in keep.iter().enumerate() {
        index[v] = i;
    }
    let labels = keep.iter().map(|&v| tree.labels[v].clone()).collect();
    let edges = tree
        .edges
        .iter()
        .filter(|&&(a, b)| a != rho && b != rho)
        .map(|&(a, b)| (index[a], index[b]))
        .collect();
    PhyloTree::from_parts(TreeKind::Rooted, labels, edges, Some(index[top]))
}

/// Roots an unrooted tree by subdividing edge `edge`; the new vertex is the root.
pub fn root_on_edge(tree: &PhyloTree, edge: usize) -> Result<PhyloTree> {
    if tree.is_rooted() {
        return Err(Error::WrongKind { expected: "unrooted" });
    }
    let &(a, b) = tree.edges.get(edge).ok_or(Error::UnknownEdge(edge))?;
    let mut labels = tree.labels.clone();
    labels.push(None);
    let r = labels.len() - 1;
    let mut edges: Vec<_> = tree
        .edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != edge)
        .map(|(_, &e)| e)
        .collect();
    edges.push((r, a));
    edges.push((r, b));
    PhyloTree::from_parts(TreeKind::Rooted, labels, edges, Some(r))
}

fn lookup_taxa<S: AsRef<str>>(tree: &PhyloTree, taxa: &[S]) -> Result<Vec<bool>> {
    let mut keep = vec![false; tree.vertex_count()];
    for t in taxa {
        let v = tree
            .leaf_of(t.as_ref())
            .ok_or_else(|| Error::UnknownTaxon(t.as_ref().to_string()))?;
        keep[v] = true;
    }
    Ok(keep)
}

/// Induced subtree `T|_Y`: the minimal subtree connecting `taxa` with
/// degree-2 vertices suppressed. In a rooted tree the vertex closest to the
/// old root becomes the new root.
pub fn restrict<S: AsRef<str>>(tree: &PhyloTree, taxa: &[S]) -> Result<PhyloTree> {
    if taxa.is_empty() {
        return Err(Error::EmptyTaxa);
    }
    let keep = lookup_taxa(tree, taxa)?;
    Ok(tree.restrict_by(|v| keep[v]).unwrap().0)
}

/// `T - Y`, the subtree induced by the remaining taxa.
pub fn remove_taxa<S: AsRef<str>>(tree: &PhyloTree, taxa: &[S]) -> Result<PhyloTree> {
    let drop = lookup_taxa(tree, taxa)?;
    let rest: Vec<usize> = tree.leaves().filter(|&v| !drop[v]).collect();
    if rest.is_empty() {
        return Err(Error::EmptyTaxa);
    }
    Ok(tree.restrict_by(|v| !drop[v]).unwrap().0)
}

// ------------------------------------------------- quartets and triplets

/// Split `ab|cd` of a four-taxon unrooted tree; each side and the pair of
/// sides are stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuartetTopology {
    pub left: [String; 2],
    pub right: [String; 2],
}

impl QuartetTopology {
    pub fn new(a: &str, b: &str, c: &str, d: &str) -> Self {
        let mut l = [a.to_string(), b.to_string()];
        let mut r = [c.to_string(), d.to_string()];
        l.sort();
        r.sort();
        if r < l {
            std::mem::swap(&mut l, &mut r);
        }
        QuartetTopology { left: l, right: r }
    }
}

impl fmt::Display for QuartetTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}|{}{}", self.left[0], self.left[1], self.right[0], self.right[1])
    }
}

/// Rooted triplet `xy|z`: `z` hangs off the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TripletTopology {
    pub cherry: [String; 2],
    pub outgroup: String,
}

impl TripletTopology {
    pub fn new(x: &str, y: &str, z: &str) -> Self {
        let mut cherry = [x.to_string(), y.to_string()];
        cherry.sort();
        TripletTopology {
            cherry,
            outgroup: z.to_string(),
        }
    }
}

impl fmt::Display for TripletTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}|{}", self.cherry[0], self.cherry[1], self.outgroup)
    }
}

fn distinct<S: AsRef<str>>(taxa: &[S]) -> Result<()> {
    let set: HashSet<&str> = taxa.iter().map(AsRef::as_ref).collect();
    if set.len() != taxa.len() {
        return Err(Error::RepeatedTaxon);
    }
    Ok(())
}

pub fn quartet_topology(tree: &PhyloTree, taxa: [&str; 4]) -> Result<QuartetTopology> {
    if tree.is_rooted() {
        return Err(Error::WrongKind { expected: "unrooted" });
    }
    distinct(&taxa)?;
    let q = restrict(tree, &taxa)?;
    // the two internal vertices each carry one side of the split
    let inner = (0..q.vertex_count()).find(|&v| !q.is_leaf(v)).unwrap();
    let side: Vec<&str> = q.neighbors(inner).iter().filter_map(|&w| q.label(w)).collect();
    let other: Vec<&str> = taxa.iter().copied().filter(|t| !side.contains(t)).collect();
    Ok(QuartetTopology::new(side[0], side[1], other[0], other[1]))
}

pub fn triplet_topology(tree: &PhyloTree, taxa: [&str; 3]) -> Result<TripletTopology> {
    if !tree.is_rooted() {
        return Err(Error::WrongKind { expected: "rooted" });
    }
    distinct(&taxa)?;
    let t = restrict(tree, &taxa)?;
    let root = t.root().unwrap();
    let out = t.children(root).find(|&c| t.is_leaf(c)).unwrap();
    let z = t.label(out).unwrap();
    let rest: Vec<&str> = taxa.iter().copied().filter(|&x| x != z).collect();
    Ok(TripletTopology::new(rest[0], rest[1], z))
}

/// Topological equality of two trees of the same kind on the same taxa.
/// Canonical Newick strings coincide exactly when the quartet (unrooted) or
/// triplet (rooted) sets coincide.
pub fn is_isomorphic(t1: &PhyloTree, t2: &PhyloTree) -> Result<bool> {
    if t1.kind != t2.kind {
        return Err(Error::WrongKind {
            expected: t1.kind.name(),
        });
    }
    if t1.taxa() != t2.taxa() {
        return Err(Error::LabelMismatch);
    }
    Ok(write_newick(t1) == write_newick(t2))
}

// ------------------------------------------------------------ enumeration

/// Returns a copy of an unrooted tree with a new leaf inserted on `edge`.
pub fn insert_leaf(tree: &PhyloTree, edge: usize, label: &str) -> Result<PhyloTree> {
    if tree.is_rooted() {
        return Err(Error::WrongKind { expected: "unrooted" });
    }
    let &(a, b) = tree.edges.get(edge).ok_or(Error::UnknownEdge(edge))?;
    let mut labels = tree.labels.clone();
    labels.push(None);
    let mid = labels.len() - 1;
    labels.push(Some(label.to_string()));
    let leaf = labels.len() - 1;
    let mut edges = tree.edges.clone();
    edges[edge] = (a, mid);
    edges.push((mid, b));
    edges.push((mid, leaf));
    PhyloTree::from_parts(TreeKind::Unrooted, labels, edges, None)
}

fn small_unrooted(labels: &[&str]) -> PhyloTree {
    let mut b = Builder::default();
    match labels.len() {
        1 => {
            b.leaf(labels[0].to_string(), 0);
        }
        2 => {
            let x = b.leaf(labels[0].to_string(), 0);
            let y = b.leaf(labels[1].to_string(), 0);
            b.connect(x, y);
        }
        _ => {
            let c = b.internal(0);
            for l in &labels[..3] {
                let x = b.leaf(l.to_string(), 0);
                b.connect(c, x);
            }
        }
    }
    b.finish(TreeKind::Unrooted, None).0
}

/// Every unrooted binary topology on `labels` ((2n-5)!! of them for n >= 3).
pub fn all_unrooted_trees(labels: &[&str]) -> Vec<PhyloTree> {
    assert!(!labels.is_empty());
    let mut trees = vec![small_unrooted(&labels[..labels.len().min(3)])];
    for l in labels.iter().skip(3) {
        trees = trees
            .iter()
            .flat_map(|t| (0..t.edge_count()).map(move |e| insert_leaf(t, e, l).unwrap()))
            .collect();
    }
    trees
}

/// Every rooted binary topology on `labels` ((2n-3)!! of them).
pub fn all_rooted_trees(labels: &[&str]) -> Vec<PhyloTree> {
    let mut with_rho = vec![RHO];
    with_rho.extend_from_slice(labels);
    all_unrooted_trees(&with_rho)
        .iter()
        .map(|t| deaugment(t).unwrap())
        .collect()
}

/// Uniform random unrooted topology via random stepwise insertion.
pub fn random_unrooted_tree<R: Rng + ?Sized>(labels: &[&str], rng: &mut R) -> PhyloTree {
    assert!(!labels.is_empty());
    let mut t = small_unrooted(&labels[..labels.len().min(3)]);
    for l in labels.iter().skip(3) {
        let e = rng.gen_range(0..t.edge_count());
        t = insert_leaf(&t, e, l).unwrap();
    }
    t
}

pub fn random_rooted_tree<R: Rng + ?Sized>(labels: &[&str], rng: &mut R) -> PhyloTree {
    let mut with_rho = vec![RHO];
    with_rho.extend_from_slice(labels);
    deaugment(&random_unrooted_tree(&with_rho, rng)).unwrap()
}

/// Taxon labels `a, b, c, ...` used by sweeps and tests.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("t{i}")
            }
        })
        .collect()
}

/// All quartets of an unrooted tree; used as an isomorphism oracle.
pub fn quartet_set(tree: &PhyloTree) -> BTreeSet<QuartetTopology> {
    let taxa: Vec<String> = tree.taxa().into_iter().collect();
    let mut out = BTreeSet::new();
    let n = taxa.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    out.insert(
                        quartet_topology(tree, [&taxa[a], &taxa[b], &taxa[c], &taxa[d]]).unwrap(),
                    );
                }
            }
        }
    }
    out
}

/// All triplets of a rooted tree.
pub fn triplet_set(tree: &PhyloTree) -> BTreeSet<TripletTopology> {
    let taxa: Vec<String> = tree.taxa().into_iter().collect();
    let mut out = BTreeSet::new();
    let n = taxa.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.insert(triplet_topology(tree, [&taxa[a], &taxa[b], &taxa[c]]).unwrap());
            }
        }
    }
    out
}

/// Leaf sets below every vertex of a rooted tree, keyed by vertex.
pub fn clades(tree: &PhyloTree) -> BTreeMap<usize, BTreeSet<String>> {
    let root = tree.root().expect("clades of an unrooted tree");
    let (order, parent) = tree.preorder_from(root);
    let mut out: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for &v in order.iter().rev() {
        let mut set = out.remove(&v).unwrap_or_default();
        if let Some(l) = tree.label(v) {
            set.insert(l.to_string());
        }
        if let Some(p) = parent[v] {
            out.entry(p).or_default().extend(set.iter().cloned());
        }
        out.insert(v, set);
    }
    out
}
