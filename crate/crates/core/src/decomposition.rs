//! Tree decompositions: validation, PACE text formats, exact treewidth of
//! small graphs, and the bounded-width decomposition of a display graph
//! obtained from an agreement forest.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::displaygraph::build_display;
use crate::forests::{components, edge_flags, is_agreement_forest, AgreementForest};
use crate::treeio::PhyloTree;
use crate::{Error, Result};

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            assert!(a < n && b < n, "edge ({a}, {b}) out of range");
            if a != b && !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        Graph { n, edges, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn emit_gr(&self) -> String {
        let mut out = format!("p tw {} {}\n", self.n, self.edges.len());
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "{} {}", a + 1, b + 1);
        }
        out
    }
}

/// Bags of graph vertices joined into a tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one (0 for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }
}

pub fn width(td: &TreeDecomposition) -> usize {
    td.width()
}

/// The first broken condition found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// The bags and decomposition edges do not form a tree.
    NotATree,
    UnknownVertex { bag: usize, vertex: usize },
    UncoveredVertex(usize),
    UncoveredEdge(usize, usize),
    /// The bags holding this vertex are not connected.
    Disconnected(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree => write!(f, "decomposition graph is not a tree"),
            Violation::UnknownVertex { bag, vertex } => {
                write!(f, "bag {} holds unknown vertex {}", bag + 1, vertex + 1)
            }
            Violation::UncoveredVertex(v) => write!(f, "vertex {} lies in no bag", v + 1),
            Violation::UncoveredEdge(a, b) => write!(f, "edge {} {} lies in no bag", a + 1, b + 1),
            Violation::Disconnected(v) => write!(f, "bags holding vertex {} are not connected", v + 1),
        }
    }
}

fn connected(nodes: &[usize], adj: &[Vec<usize>]) -> bool {
    let Some(&start) = nodes.first() else {
        return true;
    };
    let mut member = vec![false; adj.len()];
    for &b in nodes {
        member[b] = true;
    }
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(b) = stack.pop() {
        for &c in &adj[b] {
            if member[c] && !seen[c] {
                seen[c] = true;
                count += 1;
                stack.push(c);
            }
        }
    }
    count == nodes.len()
}

/// Checks the three tree decomposition conditions.
pub fn validate(td: &TreeDecomposition, g: &Graph) -> std::result::Result<(), Violation> {
    let nb = td.bags.len();
    let mut adj = vec![Vec::new(); nb];
    for &(a, b) in &td.edges {
        if a >= nb || b >= nb || a == b {
            return Err(Violation::NotATree);
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let all: Vec<usize> = (0..nb).collect();
    if nb == 0 && g.n > 0 || nb > 0 && (td.edges.len() != nb - 1 || !connected(&all, &adj)) {
        return Err(Violation::NotATree);
    }
    let mut holding = vec![Vec::new(); g.n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= g.n {
                return Err(Violation::UnknownVertex { bag: i, vertex: v });
            }
            if holding[v].last() != Some(&i) {
                holding[v].push(i);
            }
        }
    }
    if let Some(v) = (0..g.n).find(|&v| holding[v].is_empty()) {
        return Err(Violation::UncoveredVertex(v));
    }
    for &(a, b) in &g.edges {
        if !holding[a].iter().any(|i| td.bags[*i].contains(&b)) {
            return Err(Violation::UncoveredEdge(a, b));
        }
    }
    for v in 0..g.n {
        if !connected(&holding[v], &adj) {
            return Err(Violation::Disconnected(v));
        }
    }
    Ok(())
}

/// PACE `.td` text. The header's third field is the largest bag size.
pub fn emit_td(td: &TreeDecomposition, vertex_count: usize) -> String {
    let max = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.bags.len(), max, vertex_count);
    for (i, bag) in td.bags.iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}

fn numbers(line: &str, format: &'static str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|w| {
            w.parse::<usize>().map_err(|_| Error::Format {
                format,
                line: lineno,
                msg: format!("expected a number, found `{w}`"),
            })
        })
        .collect()
}

fn one_based(v: usize, n: usize, format: &'static str, line: usize) -> Result<usize> {
    if v == 0 || v > n {
        return Err(Error::Format {
            format,
            line,
            msg: format!("index {v} out of range 1..={n}"),
        });
    }
    Ok(v - 1)
}

/// Parses PACE `.gr` text.
pub fn parse_gr(text: &str) -> Result<Graph> {
    let fmt_err = |line, msg: &str| Error::Format {
        format: "gr",
        line,
        msg: msg.into(),
    };
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let mut parts = rest.split_whitespace();
            if parts.next() != Some("tw") || header.is_some() {
                return Err(fmt_err(lineno, "bad problem line"));
            }
            let nums = numbers(&parts.collect::<Vec<_>>().join(" "), "gr", lineno)?;
            if nums.len() != 2 {
                return Err(fmt_err(lineno, "expected `p tw <vertices> <edges>`"));
            }
            header = Some((nums[0], nums[1]));
            continue;
        }
        let (n, _) = header.ok_or_else(|| fmt_err(lineno, "edge before problem line"))?;
        let nums = numbers(line, "gr", lineno)?;
        if nums.len() != 2 {
            return Err(fmt_err(lineno, "expected two endpoints"));
        }
        edges.push((one_based(nums[0], n, "gr", lineno)?, one_based(nums[1], n, "gr", lineno)?));
    }
    let (n, m) = header.ok_or_else(|| fmt_err(0, "missing problem line"))?;
    if edges.len() != m {
        return Err(fmt_err(0, &format!("header announces {m} edges, found {}", edges.len())));
    }
    Ok(Graph::new(n, edges))
}

/// Parses PACE `.td` text; returns the decomposition and the vertex count
/// announced in its header.
pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize)> {
    let fmt_err = |line, msg: &str| Error::Format {
        format: "td",
        line,
        msg: msg.into(),
    };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('s') {
            let mut parts = rest.split_whitespace();
            if parts.next() != Some("td") || header.is_some() {
                return Err(fmt_err(lineno, "bad solution line"));
            }
            let nums = numbers(&parts.collect::<Vec<_>>().join(" "), "td", lineno)?;
            if nums.len() != 3 {
                return Err(fmt_err(lineno, "expected `s td <bags> <max bag size> <vertices>`"));
            }
            header = Some((nums[0], nums[1], nums[2]));
            bags = vec![None; nums[0]];
            continue;
        }
        let (nb, max, n) = header.ok_or_else(|| fmt_err(lineno, "content before solution line"))?;
        if let Some(rest) = line.strip_prefix('b') {
            let nums = numbers(rest, "td", lineno)?;
            let (&id, content) = nums
                .split_first()
                .ok_or_else(|| fmt_err(lineno, "bag line without index"))?;
            let id = one_based(id, nb, "td", lineno)?;
            if bags[id].is_some() {
                return Err(fmt_err(lineno, "bag listed twice"));
            }
            if content.len() > max {
                return Err(fmt_err(lineno, "bag larger than announced"));
            }
            let mut bag = content
                .iter()
                .map(|&v| one_based(v, n, "td", lineno))
                .collect::<Result<Vec<_>>>()?;
            bag.sort_unstable();
            bag.dedup();
            bags[id] = Some(bag);
        } else {
            let nums = numbers(line, "td", lineno)?;
            if nums.len() != 2 {
                return Err(fmt_err(lineno, "expected two bag indices"));
            }
            edges.push((one_based(nums[0], nb, "td", lineno)?, one_based(nums[1], nb, "td", lineno)?));
        }
    }
    let (_, _, n) = header.ok_or_else(|| fmt_err(0, "missing solution line"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| fmt_err(0, &format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok((TreeDecomposition { bags, edges }, n))
}

// ------------------------------------------------------- exact treewidth

/// Vertices outside `s ∪ {v}` reachable from `v` through vertices of `s`.
fn q_set(adj: &[u64], s: u64, v: usize) -> u64 {
    let mut reached = 1u64 << v;
    let mut frontier = reached;
    let mut out = 0u64;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let w = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[w];
        }
        next &= !reached;
        reached |= next;
        out |= next & !s;
        frontier = next & s;
    }
    out
}

fn bit_adjacency(g: &Graph) -> Vec<u64> {
    (0..g.n)
        .map(|v| g.adj[v].iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

/// Width of an elimination order: the largest higher-neighbourhood size.
pub fn elimination_width(g: &Graph, order: &[usize]) -> usize {
    let adj = bit_adjacency(g);
    let mut s = 0u64;
    let mut best = 0;
    for &v in order {
        best = best.max(q_set(&adj, s, v).count_ones() as usize);
        s |= 1 << v;
    }
    best
}

/// Decomposition whose bags are `{v} ∪ Q(eliminated, v)` along the order.
pub fn decomposition_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let adj = bit_adjacency(g);
    let mut position = vec![0; g.n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut s = 0u64;
    let mut bags = Vec::with_capacity(g.n);
    let mut higher = Vec::with_capacity(g.n);
    for &v in order {
        let q = q_set(&adj, s, v);
        let mut bag: Vec<usize> = (0..g.n).filter(|&w| w == v || q >> w & 1 == 1).collect();
        bag.sort_unstable();
        bags.push(bag);
        higher.push(q);
        s |= 1 << v;
    }
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &q) in higher.iter().enumerate() {
        let next = (0..g.n)
            .filter(|&w| q >> w & 1 == 1)
            .min_by_key(|&w| position[w]);
        match next {
            Some(w) => edges.push((i, position[w])),
            None => roots.push(i),
        }
    }
    for pair in roots.windows(2) {
        edges.push((pair[0], pair[1]));
    }
    if bags.is_empty() {
        bags.push(Vec::new());
    }
    TreeDecomposition { bags, edges }
}

fn greedy_order(g: &Graph) -> Vec<usize> {
    let adj = bit_adjacency(g);
    let mut s = 0u64;
    let mut order = Vec::with_capacity(g.n);
    for _ in 0..g.n {
        let v = (0..g.n)
            .filter(|&v| s >> v & 1 == 0)
            .min_by_key(|&v| q_set(&adj, s, v).count_ones())
            .unwrap();
        order.push(v);
        s |= 1 << v;
    }
    order
}

pub const DEFAULT_EXACT_BOUND: usize = 20;

/// Exact treewidth with an optimal decomposition, by dynamic programming over
/// sets of eliminated vertices. Refuses graphs above `bound` vertices.
pub fn exact_treewidth(g: &Graph, bound: usize) -> Result<(usize, TreeDecomposition)> {
    if g.n > bound.min(63) {
        return Err(Error::SizeGuard {
            size: g.n,
            bound: bound.min(63),
        });
    }
    let greedy = greedy_order(g);
    let upper = elimination_width(g, &greedy);
    let adj = bit_adjacency(g);
    let full = (1u64 << g.n) - 1;
    // value and last eliminated vertex for each reachable set
    let mut levels: Vec<HashMap<u64, (usize, usize)>> = vec![HashMap::from([(0u64, (0, usize::MAX))])];
    for _ in 0..g.n {
        let mut next: HashMap<u64, (usize, usize)> = HashMap::new();
        let mut keys: Vec<u64> = levels.last().unwrap().keys().copied().collect();
        keys.sort_unstable();
        for s in keys {
            let tw = levels.last().unwrap()[&s].0;
            for v in 0..g.n {
                if s >> v & 1 == 1 {
                    continue;
                }
                let val = tw.max(q_set(&adj, s, v).count_ones() as usize);
                if val >= upper {
                    continue;
                }
                let t = s | 1 << v;
                match next.get(&t) {
                    Some(&(old, _)) if old <= val => {}
                    _ => {
                        next.insert(t, (val, v));
                    }
                }
            }
        }
        levels.push(next);
    }
    let Some(&(tw, _)) = levels[g.n].get(&full) else {
        return Ok((upper, decomposition_from_order(g, &greedy)));
    };
    let mut order = Vec::with_capacity(g.n);
    let mut s = full;
    for level in (1..=g.n).rev() {
        let v = levels[level][&s].1;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let td = decomposition_from_order(g, &order);
    debug_assert_eq!(td.width(), tw);
    Ok((tw, td))
}

// --------------------------------------------- decomposition from a forest

struct Builder {
    bags: Vec<BTreeSet<usize>>,
    edges: Vec<(usize, usize)>,
    home: Vec<Option<usize>>,
}

impl Builder {
    fn add(&mut self, bag: impl IntoIterator<Item = usize>, attach: Option<usize>) -> usize {
        let bag: BTreeSet<usize> = bag.into_iter().collect();
        let id = self.bags.len();
        for &v in &bag {
            self.home[v].get_or_insert(id);
        }
        self.bags.push(bag);
        if let Some(a) = attach {
            self.edges.push((a, id));
        }
        id
    }

    fn holding(&self, u: usize, v: usize) -> usize {
        (0..self.bags.len())
            .find(|&b| self.bags[b].contains(&u) && self.bags[b].contains(&v))
            .expect("skeleton edge missing from base bags")
    }

    /// Bags `{u,x1,v}, {x1,x2,v}, ..., {x_{j-1},x_j,v}` for the path
    /// `u, x1, ..., xj, v`.
    fn chain(&mut self, u: usize, inner: &[usize], v: usize) {
        let mut attach = self.holding(u, v);
        let mut prev = u;
        for &x in inner {
            attach = self.add([prev, x, v], Some(attach));
            prev = x;
        }
    }

    /// Adds `u` to the bags on a shortest decomposition path from a bag
    /// holding `u` to one holding `v`.
    fn thread(&mut self, u: usize, v: usize) {
        let nb = self.bags.len();
        let mut adj = vec![Vec::new(); nb];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut dist = vec![usize::MAX; nb];
        let mut pred = vec![usize::MAX; nb];
        let mut queue = VecDeque::new();
        for b in 0..nb {
            if self.bags[b].contains(&u) {
                dist[b] = 0;
                queue.push_back(b);
            }
        }
        while let Some(b) = queue.pop_front() {
            for &c in &adj[b] {
                if dist[c] == usize::MAX {
                    dist[c] = dist[b] + 1;
                    pred[c] = b;
                    queue.push_back(c);
                }
            }
        }
        let target = (0..nb)
            .filter(|&b| self.bags[b].contains(&v))
            .min_by_key(|&b| (dist[b], b))
            .unwrap();
        let mut b = target;
        while dist[b] > 0 {
            self.bags[b].insert(u);
            b = pred[b];
        }
    }
}

/// Tripartition key of each internal vertex of an unrooted tree, as taxon masks.
fn internal_keys(tree: &PhyloTree, bit: &dyn Fn(&str) -> u64) -> HashMap<Vec<u64>, usize> {
    let root = tree.leaves().next().unwrap();
    let (order, parent) = tree.preorder_from(root);
    let mut below = vec![0u64; tree.vertex_count()];
    for &v in order.iter().rev() {
        if let Some(l) = tree.label(v) {
            below[v] |= bit(l);
        }
        if let Some(p) = parent[v] {
            below[p] |= below[v];
        }
    }
    let all = below[root];
    let mut out = HashMap::new();
    for v in 0..tree.vertex_count() {
        if tree.is_leaf(v) {
            continue;
        }
        let mut parts: Vec<u64> = tree
            .neighbors(v)
            .iter()
            .map(|&w| if Some(w) == parent[v] { all & !below[v] } else { below[w] })
            .collect();
        parts.sort_unstable();
        out.insert(parts, v);
    }
    out
}

/// Inner vertices of the path between `a` and `b` in `tree`, from `a` side.
fn tree_path(tree: &PhyloTree, a: usize, b: usize) -> Vec<usize> {
    let (_, parent) = tree.preorder_from(b);
    let mut out = Vec::new();
    let mut v = parent[a].unwrap();
    while v != b {
        out.push(v);
        v = parent[v].unwrap();
    }
    out
}

/// Tree decomposition of the display graph of `t1` and `t2` of width at most
/// `|forest| + 1`, built from the forest and its cut certificate.
pub fn decomposition_from_forest(
    t1: &PhyloTree,
    t2: &PhyloTree,
    forest: &AgreementForest,
) -> Result<TreeDecomposition> {
    let checked = is_agreement_forest(t1, t2, &forest.k1, &forest.k2)?
        .ok_or_else(|| Error::InvalidForest("the cuts do not produce an agreement forest".into()))?;
    let mut expected = forest.blocks();
    let mut found = checked.blocks();
    expected.sort();
    found.sort();
    if expected != found {
        return Err(Error::InvalidForest("components differ from those produced by the cuts".into()));
    }

    let d = build_display(t1, t2)?;
    let trees = [d.tree1(), d.tree2()];
    let to_display = |i: usize, v: usize| {
        if i == 0 {
            d.from_tree1_vertex(v)
        } else {
            d.from_tree2_vertex(v)
        }
    };
    let bit = |l: &str| 1u64 << d.vertex_of_taxon(l).unwrap();
    let mut b = Builder {
        bags: Vec::new(),
        edges: Vec::new(),
        home: vec![None; d.vertex_count()],
    };
    let mut skeleton = [vec![false; trees[0].vertex_count()], vec![false; trees[1].vertex_count()]];
    // tree-vertex endpoints of skeleton edges, per tree
    let mut paths: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];

    for block in &expected {
        let mask = block.iter().fold(0u64, |m, l| m | bit(l));
        let keep = |i: usize| {
            let t = trees[i];
            move |v: usize| t.label(v).is_some_and(|l| mask & bit(l) != 0)
        };
        let (r1, o1) = trees[0].restrict_by(keep(0)).unwrap();
        let (r2, o2) = trees[1].restrict_by(keep(1)).unwrap();
        // step (i): width-2 decomposition of the doubled component
        if r1.vertex_count() <= 2 {
            let leaves: Vec<usize> = r1.leaves().map(|v| to_display(0, o1[v])).collect();
            b.add(leaves, None);
            if r1.vertex_count() == 2 {
                paths[0].push((o1[0], o1[1]));
                paths[1].push((o2[0], o2[1]));
            }
        } else {
            let keys2 = internal_keys(&r2, &bit);
            let mut partner = vec![usize::MAX; r1.vertex_count()];
            for (key, v) in internal_keys(&r1, &bit) {
                partner[v] = *keys2
                    .get(&key)
                    .ok_or_else(|| Error::InvalidForest("component topologies differ".into()))?;
            }
            for v in r1.leaves() {
                partner[v] = r2.leaf_of(r1.label(v).unwrap()).unwrap();
            }
            let copy1 = |v: usize| to_display(0, o1[v]);
            let copy2 = |v: usize| to_display(1, o2[partner[v]]);
            let root = (0..r1.vertex_count()).find(|&v| !r1.is_leaf(v)).unwrap();
            let (order, parent) = r1.preorder_from(root);
            let mut lower = vec![usize::MAX; r1.vertex_count()];
            lower[root] = b.add([copy1(root), copy2(root)], None);
            for &c in &order[1..] {
                let p = parent[c].unwrap();
                let u = b.add([copy1(p), copy2(p), copy1(c)], Some(lower[p]));
                lower[c] = b.add([copy2(p), copy1(c), copy2(c)], Some(u));
                paths[0].push((o1[p], o1[c]));
                paths[1].push((o2[partner[p]], o2[partner[c]]));
            }
        }
    }

    // step (ii): suppressed paths
    for i in 0..2 {
        for &(a, c) in &paths[i] {
            let inner = tree_path(trees[i], a, c);
            skeleton[i][a] = true;
            skeleton[i][c] = true;
            for &x in &inner {
                skeleton[i][x] = true;
            }
            let inner: Vec<usize> = inner.iter().map(|&x| to_display(i, x)).collect();
            b.chain(to_display(i, a), &inner, to_display(i, c));
        }
        for v in trees[i].leaves() {
            skeleton[i][v] = true;
        }
    }

    // step (ii), unlabelled parts hanging off the skeletons inside each
    // component of T_i - K_i
    let ks = [&forest.k1, &forest.k2];
    for i in 0..2 {
        let t = trees[i];
        let cut = edge_flags(t, ks[i])?;
        let comp = components(t, &cut);
        let mut placed = skeleton[i].clone();
        let mut queue: VecDeque<usize> = (0..t.vertex_count()).filter(|&v| placed[v]).collect();
        loop {
            while let Some(v) = queue.pop_front() {
                let mut next: Vec<usize> = t
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&w| !placed[w] && comp[w] == comp[v])
                    .collect();
                next.sort_unstable();
                for w in next {
                    placed[w] = true;
                    let dv = to_display(i, v);
                    let attach = b.home[dv];
                    b.add([dv, to_display(i, w)], attach);
                    queue.push_back(w);
                }
            }
            // a component of T_i - K_i without taxa
            let Some(w) = (0..t.vertex_count()).find(|&w| !placed[w]) else {
                break;
            };
            placed[w] = true;
            let attach = if i == 0 { None } else { Some(0) };
            b.add([to_display(i, w)], attach);
            queue.push_back(w);
        }
    }

    // step (iii): first-tree cut edges bridge the pieces
    let mut k1 = forest.k1.clone();
    k1.sort_unstable();
    for e in k1 {
        let (x, y) = trees[0].edges()[e];
        let (x, y) = (to_display(0, x), to_display(0, y));
        let (hx, hy) = (b.home[x].unwrap(), b.home[y].unwrap());
        let id = b.add([x, y], Some(hx));
        b.edges.push((id, hy));
    }

    // step (iv): second-tree cut edges are threaded through the decomposition
    let mut k2 = forest.k2.clone();
    k2.sort_unstable();
    for e in k2 {
        let (x, y) = trees[1].edges()[e];
        b.thread(to_display(1, x), to_display(1, y));
    }

    Ok(TreeDecomposition {
        bags: b.bags.into_iter().map(|s| s.into_iter().collect()).collect(),
        edges: b.edges,
    })
}
