//! Display graph of two trees on the same taxa: the union of both trees with
//! equally labelled leaves identified.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::decomposition::Graph;
use crate::treeio::{augment_root, PhyloTree, RHO};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VertexTag {
    Internal1,
    Internal2,
    Taxon,
    Rho,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeTag {
    E1,
    E2,
}

/// Vertex numbering: taxa in label order (`ρ` last), then the internal
/// vertices of the first tree, then those of the second. Edge numbering: the
/// edges of the first tree in tree order, then those of the second.
#[derive(Clone, Debug)]
pub struct DisplayGraph {
    t1: PhyloTree,
    t2: PhyloTree,
    labels: Vec<Option<String>>,
    tags: Vec<VertexTag>,
    edges: Vec<(usize, usize)>,
    edge_tags: Vec<EdgeTag>,
    adjacency: Vec<Vec<(usize, usize)>>,
    map1: Vec<usize>,
    map2: Vec<usize>,
    origin: Vec<(Option<usize>, Option<usize>)>,
}

/// Builds the display graph. Rooted inputs are `ρ`-augmented first.
pub fn build_display(t1: &PhyloTree, t2: &PhyloTree) -> Result<DisplayGraph> {
    if t1.kind() != t2.kind() {
        return Err(Error::WrongKind {
            expected: if t1.is_rooted() { "rooted" } else { "unrooted" },
        });
    }
    if t1.taxa() != t2.taxa() {
        return Err(Error::LabelMismatch);
    }
    let (t1, t2) = if t1.is_rooted() {
        (augment_root(t1)?, augment_root(t2)?)
    } else {
        (t1.clone(), t2.clone())
    };
    DisplayGraph::from_unrooted(t1, t2)
}

impl DisplayGraph {
    fn from_unrooted(t1: PhyloTree, t2: PhyloTree) -> Result<Self> {
        let mut taxa: Vec<String> = t1.taxa().into_iter().filter(|l| l != RHO).collect();
        let has_rho = t1.contains_rho();
        if has_rho {
            taxa.push(RHO.to_string());
        }
        let mut labels: Vec<Option<String>> = taxa.iter().cloned().map(Some).collect();
        let mut tags: Vec<VertexTag> = taxa
            .iter()
            .map(|l| if l == RHO { VertexTag::Rho } else { VertexTag::Taxon })
            .collect();
        let mut origin: Vec<(Option<usize>, Option<usize>)> = taxa
            .iter()
            .map(|l| (t1.leaf_of(l), t2.leaf_of(l)))
            .collect();

        let index_of = |l: &str| taxa.iter().position(|t| t == l).unwrap();
        let mut map = |t: &PhyloTree, tag: VertexTag, second: bool| -> Vec<usize> {
            (0..t.vertex_count())
                .map(|v| match t.label(v) {
                    Some(l) => index_of(l),
                    None => {
                        labels.push(None);
                        tags.push(tag);
                        origin.push(if second { (None, Some(v)) } else { (Some(v), None) });
                        labels.len() - 1
                    }
                })
                .collect()
        };
        let map1 = map(&t1, VertexTag::Internal1, false);
        let map2 = map(&t2, VertexTag::Internal2, true);

        let mut edges = Vec::with_capacity(t1.edge_count() + t2.edge_count());
        let mut edge_tags = Vec::with_capacity(edges.capacity());
        for &(a, b) in t1.edges() {
            edges.push((map1[a], map1[b]));
            edge_tags.push(EdgeTag::E1);
        }
        for &(a, b) in t2.edges() {
            edges.push((map2[a], map2[b]));
            edge_tags.push(EdgeTag::E2);
        }
        let mut adjacency = vec![Vec::new(); labels.len()];
        for (e, &(a, b)) in edges.iter().enumerate() {
            adjacency[a].push((b, e));
            adjacency[b].push((a, e));
        }
        Ok(DisplayGraph {
            t1,
            t2,
            labels,
            tags,
            edges,
            edge_tags,
            adjacency,
            map1,
            map2,
            origin,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The (unrooted, possibly augmented) first tree.
    pub fn tree1(&self) -> &PhyloTree {
        &self.t1
    }

    pub fn tree2(&self) -> &PhyloTree {
        &self.t2
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn vertex_tag(&self, v: usize) -> VertexTag {
        self.tags[v]
    }

    pub fn edge_tag(&self, e: usize) -> EdgeTag {
        self.edge_tags[e]
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    /// `(neighbour, edge)` pairs.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn taxon_count(&self) -> usize {
        self.tags
            .iter()
            .filter(|t| matches!(t, VertexTag::Taxon | VertexTag::Rho))
            .count()
    }

    pub fn vertex_of_taxon(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.as_deref() == Some(label))
    }

    pub fn rho(&self) -> Option<usize> {
        self.tags.iter().position(|&t| t == VertexTag::Rho)
    }

    pub fn in_v1(&self, v: usize) -> bool {
        self.tags[v] != VertexTag::Internal2
    }

    pub fn in_v2(&self, v: usize) -> bool {
        self.tags[v] != VertexTag::Internal1
    }

    pub fn is_taxon(&self, v: usize) -> bool {
        self.tags[v] == VertexTag::Taxon
    }

    pub fn v1(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.in_v1(v)).collect()
    }

    pub fn v2(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.in_v2(v)).collect()
    }

    pub fn e1(&self) -> Vec<usize> {
        (0..self.t1.edge_count()).collect()
    }

    pub fn e2(&self) -> Vec<usize> {
        (self.t1.edge_count()..self.edge_count()).collect()
    }

    /// Display vertex of vertex `v` of the first tree.
    pub fn from_tree1_vertex(&self, v: usize) -> usize {
        self.map1[v]
    }

    pub fn from_tree2_vertex(&self, v: usize) -> usize {
        self.map2[v]
    }

    pub fn from_tree1_edge(&self, e: usize) -> usize {
        e
    }

    pub fn from_tree2_edge(&self, e: usize) -> usize {
        self.t1.edge_count() + e
    }

    /// The tree vertices a display vertex stands for, in the first and second tree.
    pub fn origin(&self, v: usize) -> (Option<usize>, Option<usize>) {
        self.origin[v]
    }

    pub fn graph(&self) -> Graph {
        Graph::new(self.vertex_count(), self.edges.clone())
    }

    /// Reachability from `x1` to `x2` through vertices with `in_z`, over edges
    /// without `cut`, never entering `avoid`.
    pub(crate) fn connected_within(
        &self,
        in_z: impl Fn(usize) -> bool,
        cut: impl Fn(usize) -> bool,
        avoid: Option<usize>,
        x1: usize,
        x2: usize,
    ) -> bool {
        if x1 == x2 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count()];
        seen[x1] = true;
        let mut queue = VecDeque::from([x1]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &self.adjacency[v] {
                if seen[w] || cut(e) || !in_z(w) || Some(w) == avoid {
                    continue;
                }
                if w == x2 {
                    return true;
                }
                seen[w] = true;
                queue.push_back(w);
            }
        }
        false
    }

    fn membership(&self, z: &[usize], x: &[usize]) -> Result<Vec<bool>> {
        let mut in_z = vec![false; self.vertex_count()];
        for &v in z {
            if v >= self.vertex_count() {
                return Err(Error::OutsideVertexSet(v));
            }
            in_z[v] = true;
        }
        for &v in x {
            if v >= self.vertex_count() || !in_z[v] {
                return Err(Error::OutsideVertexSet(v));
            }
        }
        Ok(in_z)
    }

    /// Whether some path from `x1` to `x2` uses only vertices of `z` and no
    /// edge of `k`.
    pub fn path_avoiding_cuts(&self, z: &[usize], x1: usize, x2: usize, k: &[usize]) -> Result<bool> {
        let in_z = self.membership(z, &[x1, x2])?;
        let mut cut = vec![false; self.edge_count()];
        for &e in k {
            *cut.get_mut(e).ok_or(Error::UnknownEdge(e))? = true;
        }
        Ok(self.connected_within(|v| in_z[v], |e| cut[e], None, x1, x2))
    }

    /// Whether `x1` and `x2` stay connected within `z` once `u` is deleted.
    pub fn path_survives_vertex_cut(&self, z: &[usize], x1: usize, x2: usize, u: usize) -> Result<bool> {
        let in_z = self.membership(z, &[x1, x2])?;
        if u == x1 || u == x2 {
            return Ok(false);
        }
        Ok(self.connected_within(|v| in_z[v], |_| false, Some(u), x1, x2))
    }

    fn vertex_name(&self, v: usize) -> String {
        match (&self.labels[v], self.tags[v]) {
            (Some(l), _) => l.clone(),
            (None, VertexTag::Internal1) => format!("v1_{}", self.origin[v].0.unwrap()),
            (None, _) => format!("v2_{}", self.origin[v].1.unwrap()),
        }
    }

    /// Graphviz rendering; first-tree edges red, second-tree edges blue.
    pub fn emit_dot(&self) -> String {
        let mut out = String::from("graph display {\n");
        for v in 0..self.vertex_count() {
            let (shape, color) = match self.tags[v] {
                VertexTag::Taxon => ("box", "black"),
                VertexTag::Rho => ("box", "darkgreen"),
                VertexTag::Internal1 => ("circle", "red"),
                VertexTag::Internal2 => ("circle", "blue"),
            };
            let _ = writeln!(
                out,
                "  {v} [label=\"{}\", shape={shape}, color={color}];",
                self.vertex_name(v).replace('"', "\\\"")
            );
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            let color = match self.edge_tags[e] {
                EdgeTag::E1 => "red",
                EdgeTag::E2 => "blue",
            };
            let _ = writeln!(out, "  {a} -- {b} [color={color}];");
        }
        out.push_str("}\n");
        out
    }

    /// PACE `.gr` text with 1-indexed vertices; tags are given as comments.
    pub fn emit_gr(&self) -> String {
        let mut out = format!("p tw {} {}\n", self.vertex_count(), self.edge_count());
        for v in 0..self.vertex_count() {
            let tag = match self.tags[v] {
                VertexTag::Taxon => "X",
                VertexTag::Rho => "rho",
                VertexTag::Internal1 => "V1",
                VertexTag::Internal2 => "V2",
            };
            let _ = writeln!(out, "c v {} {tag} {}", v + 1, self.vertex_name(v));
        }
        let _ = writeln!(out, "c edges 1..{} are E1, the rest E2", self.t1.edge_count());
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "{} {}", a + 1, b + 1);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treeio::parse_newick;

    fn pair(a: &str, b: &str) -> DisplayGraph {
        build_display(&parse_newick(a).unwrap(), &parse_newick(b).unwrap()).unwrap()
    }

    #[test]
    fn conflicting_quartets_counts() {
        let d = pair("(u,v,(w,y));", "(u,w,(v,y));");
        assert_eq!(d.vertex_count(), 8);
        assert_eq!(d.edge_count(), 10);
        assert!(d.emit_gr().starts_with("p tw 8 10\n"));
        let dot = d.emit_dot();
        assert_eq!(dot.matches("color=red];").count() - 2, 5);
        assert_eq!(dot.matches(" -- ").count(), 10);
    }

    #[test]
    fn identical_stars() {
        let d = pair("(a,b,c);", "(a,b,c);");
        assert_eq!((d.vertex_count(), d.edge_count()), (5, 6));
    }

    #[test]
    fn rooted_pairs_are_augmented() {
        let d = pair("((a,b),c);", "((a,c),b);");
        assert_eq!((d.vertex_count(), d.edge_count()), (8, 10));
        assert_eq!(d.rho(), Some(3));
        assert_eq!(d.vertex_tag(3), VertexTag::Rho);
    }

    #[test]
    fn mismatched_taxa() {
        let a = parse_newick("(a,b,c);").unwrap();
        let b = parse_newick("(a,b,d);").unwrap();
        assert_eq!(build_display(&a, &b).unwrap_err(), Error::LabelMismatch);
    }

    #[test]
    fn pendant_cut_severs_taxon() {
        let d = pair("(u,v,(w,y));", "(u,w,(v,y));");
        let u = d.vertex_of_taxon("u").unwrap();
        let v = d.vertex_of_taxon("v").unwrap();
        let pendant = (0..d.tree1().edge_count())
            .find(|&e| {
                let (a, b) = d.endpoints(e);
                a == u || b == u
            })
            .unwrap();
        let v1 = d.v1();
        assert!(!d.path_avoiding_cuts(&v1, u, v, &[pendant]).unwrap());
        assert!(d.path_avoiding_cuts(&v1, u, v, &[]).unwrap());
        assert!(d.path_avoiding_cuts(&v1, u, u, &[pendant]).unwrap());
        let inner = d.v2().into_iter().find(|&x| !d.is_taxon(x)).unwrap();
        assert_eq!(d.path_avoiding_cuts(&v1, u, inner, &[]).unwrap_err(), Error::OutsideVertexSet(inner));
    }

    #[test]
    fn vertex_cuts() {
        let d = pair("(u,v,(w,y));", "(u,w,(v,y));");
        let u = d.vertex_of_taxon("u").unwrap();
        let w = d.vertex_of_taxon("w").unwrap();
        let y = d.vertex_of_taxon("y").unwrap();
        let v1 = d.v1();
        let hub = d.from_tree1_vertex(d.tree1().neighbors(d.tree1().leaf_of("u").unwrap())[0]);
        assert!(!d.path_survives_vertex_cut(&v1, u, w, hub).unwrap());
        assert!(d.path_survives_vertex_cut(&v1, u, w, y).unwrap());
        assert!(!d.path_survives_vertex_cut(&v1, u, w, u).unwrap());
    }
}
