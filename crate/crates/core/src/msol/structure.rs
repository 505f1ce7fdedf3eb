//! The relational structure of a display graph: vertices and edges form the
//! universe, `R^D` links each edge to its endpoints, and unary predicates
//! mark the tree of origin.

use serde::Serialize;

use crate::displaygraph::{DisplayGraph, EdgeTag, VertexTag};
use crate::{Error, Result};

/// Named subsets of the universe usable as quantifier domains and set constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sort {
    Universe,
    Vertices,
    Edges,
    V1,
    V2,
    E1,
    E2,
    /// The taxa, without `ρ`.
    Taxa,
    /// The taxa together with `ρ`.
    TaxaRho,
    /// `V1` without `ρ`.
    V1Core,
    V2Core,
}

impl Sort {
    pub const ALL: [Sort; 11] = [
        Sort::Universe,
        Sort::Vertices,
        Sort::Edges,
        Sort::V1,
        Sort::V2,
        Sort::E1,
        Sort::E2,
        Sort::Taxa,
        Sort::TaxaRho,
        Sort::V1Core,
        Sort::V2Core,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Sort::Universe => "U",
            Sort::Vertices => "V",
            Sort::Edges => "E",
            Sort::V1 => "V1",
            Sort::V2 => "V2",
            Sort::E1 => "E1",
            Sort::E2 => "E2",
            Sort::Taxa => "X",
            Sort::TaxaRho => "X∪{ρ}",
            Sort::V1Core => "V1∖{ρ}",
            Sort::V2Core => "V2∖{ρ}",
        }
    }

    /// The vertex sort of tree `i` (1 or 2).
    pub fn vertices_of(i: usize) -> Sort {
        if i == 1 {
            Sort::V1
        } else {
            Sort::V2
        }
    }

    pub fn edges_of(i: usize) -> Sort {
        if i == 1 {
            Sort::E1
        } else {
            Sort::E2
        }
    }

    pub fn core_of(i: usize) -> Sort {
        if i == 1 {
            Sort::V1Core
        } else {
            Sort::V2Core
        }
    }
}

/// Universe elements are `0..vertex_count` (vertices) followed by the edges.
/// Sets of elements are `u64` bitmasks.
#[derive(Clone, Debug)]
pub struct MsoStructure {
    names: Vec<String>,
    vertex_count: usize,
    endpoints: Vec<(usize, usize)>,
    sorts: [u64; 11],
    rho: Option<usize>,
    adjacency: Vec<u64>,
    incident_edges: Vec<u64>,
}

pub const MAX_UNIVERSE: usize = 64;

impl MsoStructure {
    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn is_vertex(&self, x: usize) -> bool {
        x < self.vertex_count
    }

    pub fn is_edge(&self, x: usize) -> bool {
        x >= self.vertex_count && x < self.size()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Endpoints of edge element `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.endpoints[e - self.vertex_count]
    }

    /// `R^D(e, v)`.
    pub fn incident(&self, e: usize, v: usize) -> bool {
        self.is_edge(e) && {
            let (a, b) = self.endpoints(e);
            a == v || b == v
        }
    }

    pub fn sort(&self, s: Sort) -> u64 {
        self.sorts[s as usize]
    }

    pub fn rho(&self) -> Option<usize> {
        self.rho
    }

    /// Vertices adjacent to vertex `v`.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adjacency[v]
    }

    /// Edge elements incident to vertex `v`.
    pub fn edges_at(&self, v: usize) -> u64 {
        self.incident_edges[v]
    }

    /// Edge elements incident to both `p` and `q` (all edges at `p` when `p = q`).
    pub fn edges_between(&self, p: usize, q: usize) -> u64 {
        if p >= self.vertex_count || q >= self.vertex_count {
            return 0;
        }
        self.incident_edges[p] & self.incident_edges[q]
    }

    pub fn all(&self) -> u64 {
        self.sort(Sort::Universe)
    }

    pub fn render_set(&self, mask: u64) -> String {
        let items: Vec<&str> = (0..self.size())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.name(i))
            .collect();
        format!("{{{}}}", items.join(","))
    }

    pub fn dump(&self) -> StructureDump {
        let list = |s: Sort| -> Vec<String> {
            (0..self.size())
                .filter(|&i| self.sort(s) >> i & 1 == 1)
                .map(|i| self.names[i].clone())
                .collect()
        };
        StructureDump {
            universe: self.names.clone(),
            incidence: (self.vertex_count..self.size())
                .map(|e| {
                    let (a, b) = self.endpoints(e);
                    (self.names[e].clone(), self.names[a].clone(), self.names[b].clone())
                })
                .collect(),
            v1: list(Sort::V1),
            e1: list(Sort::E1),
            v2: list(Sort::V2),
            e2: list(Sort::E2),
            x: list(Sort::Taxa),
            rho: self.rho.map(|r| self.names[r].clone()),
        }
    }
}

/// JSON form of a structure.
#[derive(Clone, Debug, Serialize)]
pub struct StructureDump {
    pub universe: Vec<String>,
    /// `(edge, endpoint, endpoint)` triples of `R^D`.
    pub incidence: Vec<(String, String, String)>,
    #[serde(rename = "V1")]
    pub v1: Vec<String>,
    #[serde(rename = "E1")]
    pub e1: Vec<String>,
    #[serde(rename = "V2")]
    pub v2: Vec<String>,
    #[serde(rename = "E2")]
    pub e2: Vec<String>,
    #[serde(rename = "X")]
    pub x: Vec<String>,
    pub rho: Option<String>,
}

/// Relational structure of a display graph.
pub fn structure_from_display(d: &DisplayGraph) -> Result<MsoStructure> {
    let nv = d.vertex_count();
    let size = nv + d.edge_count();
    if size > MAX_UNIVERSE {
        return Err(Error::SizeGuard {
            size,
            bound: MAX_UNIVERSE,
        });
    }
    let mut names = Vec::with_capacity(size);
    for v in 0..nv {
        names.push(match (d.label(v), d.vertex_tag(v)) {
            (Some(l), _) => l.to_string(),
            (None, VertexTag::Internal1) => format!("p{}", d.origin(v).0.unwrap()),
            (None, _) => format!("q{}", d.origin(v).1.unwrap()),
        });
    }
    let mut sorts = [0u64; 11];
    let mut set = |s: Sort, x: usize| sorts[s as usize] |= 1 << x;
    for v in 0..nv {
        set(Sort::Universe, v);
        set(Sort::Vertices, v);
        let tag = d.vertex_tag(v);
        if d.in_v1(v) {
            set(Sort::V1, v);
            if tag != VertexTag::Rho {
                set(Sort::V1Core, v);
            }
        }
        if d.in_v2(v) {
            set(Sort::V2, v);
            if tag != VertexTag::Rho {
                set(Sort::V2Core, v);
            }
        }
        match tag {
            VertexTag::Taxon => {
                set(Sort::Taxa, v);
                set(Sort::TaxaRho, v);
            }
            VertexTag::Rho => set(Sort::TaxaRho, v),
            _ => {}
        }
    }
    let mut endpoints = Vec::with_capacity(d.edge_count());
    let mut adjacency = vec![0u64; nv];
    let mut incident_edges = vec![0u64; nv];
    for e in 0..d.edge_count() {
        let x = nv + e;
        let (a, b) = d.endpoints(e);
        names.push(format!("e{e}"));
        set(Sort::Universe, x);
        set(Sort::Edges, x);
        set(if d.edge_tag(e) == EdgeTag::E1 { Sort::E1 } else { Sort::E2 }, x);
        endpoints.push((a, b));
        adjacency[a] |= 1 << b;
        adjacency[b] |= 1 << a;
        incident_edges[a] |= 1 << x;
        incident_edges[b] |= 1 << x;
    }
    Ok(MsoStructure {
        names,
        vertex_count: nv,
        endpoints,
        sorts,
        rho: d.rho(),
        adjacency,
        incident_edges,
    })
}

/// Structure of an arbitrary simple graph: every vertex is in `V1`, every
/// edge in `E1`; there are no taxa and no `ρ`.
pub fn structure_from_graph(n: usize, edges: &[(usize, usize)]) -> Result<MsoStructure> {
    let size = n + edges.len();
    if size > MAX_UNIVERSE {
        return Err(Error::SizeGuard {
            size,
            bound: MAX_UNIVERSE,
        });
    }
    let mut names: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
    let mut sorts = [0u64; 11];
    let mut adjacency = vec![0u64; n];
    let mut incident_edges = vec![0u64; n];
    for v in 0..n {
        for s in [Sort::Universe, Sort::Vertices, Sort::V1, Sort::V1Core] {
            sorts[s as usize] |= 1 << v;
        }
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a >= n || b >= n || a == b {
            return Err(Error::Mso(format!("bad edge ({a},{b})")));
        }
        let x = n + i;
        names.push(format!("e{i}"));
        for s in [Sort::Universe, Sort::Edges, Sort::E1] {
            sorts[s as usize] |= 1 << x;
        }
        adjacency[a] |= 1 << b;
        adjacency[b] |= 1 << a;
        incident_edges[a] |= 1 << x;
        incident_edges[b] |= 1 << x;
    }
    Ok(MsoStructure {
        names,
        vertex_count: n,
        endpoints: edges.to_vec(),
        sorts,
        rho: None,
        adjacency,
        incident_edges,
    })
}
