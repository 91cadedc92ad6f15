//! Maximum bipartite matching and alternating reachability.
//!
//! [`maximum_matching`] is Hopcroft–Karp with every scan done in ascending
//! label order, so the matching it returns for a given graph is fixed.
//! [`alternating_reach`] grows the `M`-alternating BFS forest that defines
//! the even- and odd-reachable sets `R_e(X, M)` and `R_o(X, M)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Bipartition, Graph, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("vertex {0} is covered by two matching edges")]
    NotDisjoint(Vertex),
    #[error("matching edge {{{0}, {1}}} is not an edge of the graph")]
    EdgeNotInGraph(Vertex, Vertex),
    #[error("source vertex {0} is saturated by the matching")]
    SourceSaturated(Vertex),
    #[error("vertex {0} not in support")]
    NotInSupport(Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
}

/// A set of pairwise-disjoint edges together with the partner lookup.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    edges: BTreeSet<(Vertex, Vertex)>,
    partner: BTreeMap<Vertex, Vertex>,
}

impl Serialize for Matching {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.edges.iter().map(|&(u, v)| [u, v]))
    }
}

impl Matching {
    pub fn new<E>(edges: E) -> Result<Self, MatchingError>
    where
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut m = Matching::default();
        for (u, v) in edges {
            for x in [u, v] {
                if m.partner.contains_key(&x) {
                    return Err(MatchingError::NotDisjoint(x));
                }
            }
            if u == v {
                return Err(MatchingError::NotDisjoint(u));
            }
            m.insert(u, v);
        }
        Ok(m)
    }

    /// Like [`Matching::new`], additionally requiring every edge in `g`.
    pub fn in_graph<E>(g: &Graph, edges: E) -> Result<Self, MatchingError>
    where
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let m = Self::new(edges)?;
        m.check_in(g)?;
        Ok(m)
    }

    fn insert(&mut self, u: Vertex, v: Vertex) {
        self.edges.insert((u.min(v), u.max(v)));
        self.partner.insert(u, v);
        self.partner.insert(v, u);
    }

    fn remove(&mut self, u: Vertex, v: Vertex) {
        self.edges.remove(&(u.min(v), u.max(v)));
        self.partner.remove(&u);
        self.partner.remove(&v);
    }

    pub fn check_in(&self, g: &Graph) -> Result<(), MatchingError> {
        match self.edges.iter().find(|&&(u, v)| !g.has_edge(u, v)) {
            Some(&(u, v)) => Err(MatchingError::EdgeNotInGraph(u, v)),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn contains_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn partner(&self, v: Vertex) -> Option<Vertex> {
        self.partner.get(&v).copied()
    }

    /// The bijection `M(v)`: the partner, or `v` itself when unsaturated.
    pub fn image(&self, v: Vertex) -> Vertex {
        self.partner(v).unwrap_or(v)
    }

    pub fn is_saturated(&self, v: Vertex) -> bool {
        self.partner.contains_key(&v)
    }

    /// `M ∩ E(h)`.
    pub fn restricted_to(&self, h: &Graph) -> Matching {
        let mut m = Matching::default();
        for &(u, v) in &self.edges {
            if h.has_edge(u, v) {
                m.insert(u, v);
            }
        }
        m
    }
}

/// Hopcroft–Karp over the given bipartition. `bp` must be a valid
/// bipartition of `g`.
pub fn maximum_matching(g: &Graph, bp: &Bipartition) -> Matching {
    debug_assert!(bp.is_valid_for(g));
    let n = g.order();
    let left: Vec<usize> = (0..n).filter(|&i| bp.in_x(g.label(i))).collect();
    let mut mate: Vec<Option<usize>> = vec![None; n];
    let mut dist = vec![usize::MAX; n];

    loop {
        // Layer the free left vertices and everything reachable from them.
        let mut queue = VecDeque::new();
        for &u in &left {
            if mate[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbor_indices(u) {
                match mate[w] {
                    None => found = true,
                    Some(x) if dist[x] == usize::MAX => {
                        dist[x] = dist[u] + 1;
                        queue.push_back(x);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }
        for &u in &left {
            if mate[u].is_none() {
                augment(g, u, &mut mate, &mut dist);
            }
        }
    }

    let mut m = Matching::default();
    for &u in &left {
        if let Some(w) = mate[u] {
            m.insert(g.label(u), g.label(w));
        }
    }
    m
}

fn augment(g: &Graph, u: usize, mate: &mut [Option<usize>], dist: &mut [usize]) -> bool {
    for &w in g.neighbor_indices(u) {
        let ok = match mate[w] {
            None => true,
            Some(x) => dist[x] == dist[u].wrapping_add(1) && augment(g, x, mate, dist),
        };
        if ok {
            mate[u] = Some(w);
            mate[w] = Some(u);
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

/// `U(M)`: the vertices of `g` not covered by `m`.
pub fn unsaturated(g: &Graph, m: &Matching) -> VertexSet {
    g.vertices().filter(|&v| !m.is_saturated(v)).collect()
}

/// `R_e(X, M)` and `R_o(X, M)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReachSets {
    pub even: VertexSet,
    pub odd: VertexSet,
}

/// BFS forest of `M`-alternating paths that leave each source along a
/// non-matching edge. Parents are kept separately for the even and odd
/// occurrence of a vertex.
struct Forest {
    even: Vec<bool>,
    odd: Vec<bool>,
    parent_of_even: Vec<Option<usize>>,
    parent_of_odd: Vec<Option<usize>>,
}

const NO_PARENT: Option<usize> = None;

fn grow_forest(g: &Graph, m: &Matching, sources: &VertexSet) -> Result<Forest, MatchingError> {
    let n = g.order();
    let mut f = Forest {
        even: vec![false; n],
        odd: vec![false; n],
        parent_of_even: vec![NO_PARENT; n],
        parent_of_odd: vec![NO_PARENT; n],
    };
    let mate = |i: usize| m.partner(g.label(i)).and_then(|p| g.index_of(p));
    let mut queue = VecDeque::new();
    for &s in sources {
        let i = g.index_of(s).ok_or(MatchingError::UnknownVertex(s))?;
        if m.is_saturated(s) {
            return Err(MatchingError::SourceSaturated(s));
        }
        f.even[i] = true;
        queue.push_back(i);
    }
    while let Some(x) = queue.pop_front() {
        let own = mate(x);
        for &w in g.neighbor_indices(x) {
            if Some(w) == own || f.odd[w] {
                continue;
            }
            f.odd[w] = true;
            f.parent_of_odd[w] = Some(x);
            if let Some(y) = mate(w) {
                if !f.even[y] {
                    f.even[y] = true;
                    f.parent_of_even[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(f)
}

/// Even/odd `M`-alternating reachability from `sources`, each of which
/// must be unsaturated. Sources count as even-reachable via the empty path.
pub fn alternating_reach(
    g: &Graph,
    m: &Matching,
    sources: &VertexSet,
) -> Result<ReachSets, MatchingError> {
    let f = grow_forest(g, m, sources)?;
    let pick = |flags: &[bool]| {
        flags
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b)
            .map(|(i, _)| g.label(i))
            .collect()
    };
    Ok(ReachSets {
        even: pick(&f.even),
        odd: pick(&f.odd),
    })
}

/// An `M`-augmenting path, if one is reachable from `U(M)` by the
/// alternating BFS. On bipartite graphs `None` certifies that `m` is
/// maximum.
pub fn find_augmenting_path(g: &Graph, m: &Matching) -> Option<Vec<Vertex>> {
    let free = unsaturated(g, m);
    let f = grow_forest(g, m, &free).expect("unsaturated sources");
    let end = (0..g.order()).find(|&i| f.odd[i] && !m.is_saturated(g.label(i)))?;
    let mut path = vec![g.label(end)];
    let mut cur = f.parent_of_odd[end];
    while let Some(x) = cur {
        path.push(g.label(x));
        cur = f.parent_of_even[x].and_then(|w| {
            path.push(g.label(w));
            f.parent_of_odd[w]
        });
    }
    Some(path)
}

/// True when `m` is a matching of the bipartite graph `g` with no
/// augmenting path.
pub fn is_maximum(g: &Graph, m: &Matching) -> bool {
    m.check_in(g).is_ok() && find_augmenting_path(g, m).is_none()
}

/// Swaps `m` along an even alternating path from an unsaturated vertex to
/// `v`, giving a matching of the same size that leaves `v` unsaturated.
pub fn retarget_matching(g: &Graph, m: &Matching, v: Vertex) -> Result<Matching, MatchingError> {
    let vi = g.index_of(v).ok_or(MatchingError::UnknownVertex(v))?;
    m.check_in(g)?;
    if !m.is_saturated(v) {
        return Ok(m.clone());
    }
    let f = grow_forest(g, m, &unsaturated(g, m))?;
    if !f.even[vi] {
        return Err(MatchingError::NotInSupport(v));
    }
    // Walk back to the root: matched edge x-w, then free edge w-parent.
    let mut matched = Vec::new();
    let mut free = Vec::new();
    let mut x = vi;
    while let Some(w) = f.parent_of_even[x] {
        let up = f.parent_of_odd[w].expect("odd vertex has a parent");
        matched.push((g.label(x), g.label(w)));
        free.push((g.label(w), g.label(up)));
        x = up;
    }
    let mut out = m.clone();
    for (a, b) in matched {
        out.remove(a, b);
    }
    for (a, b) in free {
        out.insert(a, b);
    }
    Ok(out)
}
