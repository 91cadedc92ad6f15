//! Simple undirected graphs over arbitrary nonnegative integer labels.
//!
//! Vertices are stored in ascending label order and every neighbor list is
//! sorted, so iteration order (and everything derived from it) is
//! deterministic. Graphs are immutable once built; operations such as
//! [`Graph::induced_subgraph`] and [`Graph::without`] return new graphs.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::validate::CycleWitness;

/// A vertex label.
pub type Vertex = u64;

/// An ordered set of vertex labels.
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("{0}")]
    Malformed(String),
    #[error("invalid JSON graph: {0}")]
    Json(String),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<GraphError>,
    },
}

impl GraphError {
    fn at_line(self, line: usize) -> Self {
        GraphError::AtLine {
            line,
            source: Box::new(self),
        }
    }
}

/// Immutable simple undirected graph.
///
/// Internally vertices are addressed by their position in the sorted label
/// list; the index-level accessors are exposed for algorithms that want
/// dense arrays.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    labels: Vec<Vertex>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Wire form: `{"vertices":[...], "edges":[[u,v],...]}`.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    #[serde(default)]
    vertices: Vec<Vertex>,
    #[serde(default)]
    edges: Vec<[Vertex; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(value: GraphJson) -> Result<Self, Self::Error> {
        Graph::new(value.vertices, value.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            vertices: g.labels.clone(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    /// Builds a graph from declared vertices plus an edge list. Edge
    /// endpoints need not be declared.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = Vertex>,
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut builder = Builder::default();
        for v in vertices {
            builder.vertex(v);
        }
        for (u, v) in edges {
            builder.edge(u, v)?;
        }
        Ok(builder.finish())
    }

    pub fn from_edges<E>(edges: E) -> Result<Self, GraphError>
    where
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Self::new(std::iter::empty(), edges)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Parses either the edge-list text format or the JSON graph format,
    /// choosing by the first non-blank character.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::parse_edge_list(text)
        }
    }

    /// Parses lines of `u v` (an edge) or `v` (an isolated vertex).
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut builder = Builder::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let labels = trimmed
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<Vertex>().map_err(|_| {
                        GraphError::Malformed(format!("invalid vertex label '{tok}'")).at_line(line)
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            match labels[..] {
                [v] => builder.vertex(v),
                [u, v] => builder.edge(u, v).map_err(|e| e.at_line(line))?,
                _ => {
                    return Err(GraphError::Malformed(format!(
                        "expected one or two labels, found {}",
                        labels.len()
                    ))
                    .at_line(line))
                }
            }
        }
        Ok(builder.finish())
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let raw: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Graph::try_from(raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    /// Edge-list text: sorted edges, then isolated vertices one per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        for (i, &v) in self.labels.iter().enumerate() {
            if self.adj[i].is_empty() {
                let _ = writeln!(out, "{v}");
            }
        }
        out
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = Vertex> + '_ {
        self.labels.iter().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn labels(&self) -> &[Vertex] {
        &self.labels
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index_of(v).is_some()
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.labels.binary_search(&v).ok()
    }

    pub fn label(&self, i: usize) -> Vertex {
        self.labels[i]
    }

    pub fn neighbor_indices(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// Neighbors of `v` in ascending order; empty when `v` is unknown.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.index_of(v)
            .into_iter()
            .flat_map(move |i| self.adj[i].iter().map(move |&j| self.labels[j]))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.index_of(v).map_or(0, |i| self.adj[i].len())
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.adj[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(move |(i, nbrs)| {
            nbrs.iter()
                .filter(move |&&j| j > i)
                .map(move |&j| (self.labels[i], self.labels[j]))
        })
    }

    /// `N(S)`: every vertex adjacent to some member of `set`.
    pub fn neighborhood(&self, set: &VertexSet) -> VertexSet {
        set.iter().flat_map(|&v| self.neighbors(v)).collect()
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|&v| self.neighbors(v).all(|w| !set.contains(&w)))
    }

    /// `G⟨S⟩`, labels preserved.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<Graph, GraphError> {
        let mut keep = vec![false; self.order()];
        for &v in set {
            let i = self.index_of(v).ok_or(GraphError::UnknownVertex(v))?;
            keep[i] = true;
        }
        Ok(self.induced_by_mask(&keep))
    }

    /// The graph with `removed` deleted; unknown labels are ignored.
    pub fn without(&self, removed: &VertexSet) -> Graph {
        let keep: Vec<bool> = self.labels.iter().map(|v| !removed.contains(v)).collect();
        self.induced_by_mask(&keep)
    }

    fn induced_by_mask(&self, keep: &[bool]) -> Graph {
        let mut remap = vec![usize::MAX; self.order()];
        let mut labels = Vec::new();
        for (i, &k) in keep.iter().enumerate() {
            if k {
                remap[i] = labels.len();
                labels.push(self.labels[i]);
            }
        }
        let mut edge_count = 0;
        let adj: Vec<Vec<usize>> = (0..self.order())
            .filter(|&i| keep[i])
            .map(|i| {
                let row: Vec<usize> = self.adj[i]
                    .iter()
                    .filter(|&&j| keep[j])
                    .map(|&j| remap[j])
                    .collect();
                edge_count += row.len();
                row
            })
            .collect();
        Graph {
            labels,
            adj,
            edge_count: edge_count / 2,
        }
    }

    /// Vertex sets of the connected components, ordered by smallest label.
    pub fn component_vertex_sets(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for start in 0..self.order() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut comp = VertexSet::new();
            while let Some(i) = queue.pop_front() {
                comp.insert(self.labels[i]);
                for &j in &self.adj[i] {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Maximal connected induced subgraphs, ordered by smallest label.
    pub fn connected_components(&self) -> Vec<Graph> {
        self.component_vertex_sets()
            .iter()
            .map(|set| {
                self.induced_subgraph(set)
                    .expect("component labels belong to graph")
            })
            .collect()
    }

    /// Two-colors the graph component by component. In each component the
    /// side holding the smallest label becomes `side_x`. A non-bipartite
    /// graph yields an odd cycle instead.
    pub fn bipartition(&self) -> Result<Bipartition, CycleWitness> {
        let n = self.order();
        let mut color: Vec<Option<bool>> = vec![None; n];
        let mut parent = vec![usize::MAX; n];
        for start in 0..n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                let ci = color[i].unwrap();
                for &j in &self.adj[i] {
                    match color[j] {
                        None => {
                            color[j] = Some(!ci);
                            parent[j] = i;
                            queue.push_back(j);
                        }
                        Some(cj) if cj == ci => return Err(self.odd_cycle(&parent, i, j)),
                        Some(_) => {}
                    }
                }
            }
        }
        let mut bp = Bipartition::default();
        for (i, c) in color.into_iter().enumerate() {
            if c == Some(false) {
                bp.side_x.insert(self.labels[i]);
            } else {
                bp.side_y.insert(self.labels[i]);
            }
        }
        Ok(bp)
    }

    /// Closes the BFS-tree paths from `a` and `b` up to their common
    /// ancestor with the edge `a-b`.
    fn odd_cycle(&self, parent: &[usize], a: usize, b: usize) -> CycleWitness {
        let ancestors = |mut x: usize| {
            let mut path = vec![x];
            while parent[x] != usize::MAX {
                x = parent[x];
                path.push(x);
            }
            path
        };
        let mut pa = ancestors(a);
        let mut pb = ancestors(b);
        // Strip the shared suffix, keeping the lowest common ancestor on `pa`.
        while pa.len() >= 2 && pb.len() >= 2 && pa[pa.len() - 2] == pb[pb.len() - 2] {
            pa.pop();
            pb.pop();
        }
        pb.pop();
        // a .. lca, then down the b side to b; the edge b-a closes it.
        let mut cycle: Vec<Vertex> = pa.iter().map(|&i| self.labels[i]).collect();
        cycle.extend(pb.iter().rev().map(|&i| self.labels[i]));
        CycleWitness::from_open(cycle)
    }
}

#[derive(Default)]
struct Builder {
    vertices: VertexSet,
    edges: BTreeSet<(Vertex, Vertex)>,
}

impl Builder {
    fn vertex(&mut self, v: Vertex) {
        self.vertices.insert(v);
    }

    fn edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let key = (u.min(v), u.max(v));
        if !self.edges.insert(key) {
            return Err(GraphError::DuplicateEdge(key.0, key.1));
        }
        self.vertices.insert(u);
        self.vertices.insert(v);
        Ok(())
    }

    fn finish(self) -> Graph {
        let labels: Vec<Vertex> = self.vertices.into_iter().collect();
        let mut adj = vec![Vec::new(); labels.len()];
        let idx = |v: Vertex| labels.binary_search(&v).unwrap();
        for &(u, v) in &self.edges {
            let (i, j) = (idx(u), idx(v));
            adj[i].push(j);
            adj[j].push(i);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        Graph {
            labels,
            adj,
            edge_count: self.edges.len(),
        }
    }
}

/// A 2-coloring of a bipartite graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    pub side_x: VertexSet,
    pub side_y: VertexSet,
}

impl Bipartition {
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.side_x.is_disjoint(&self.side_y)
            && self.side_x.len() + self.side_y.len() == g.order()
            && g.vertices()
                .all(|v| self.side_x.contains(&v) || self.side_y.contains(&v))
            && g.edges()
                .all(|(u, v)| self.side_x.contains(&u) != self.side_x.contains(&v))
    }

    pub fn in_x(&self, v: Vertex) -> bool {
        self.side_x.contains(&v)
    }
}
