//! Explicit null vectors built from alternating reachability.
//!
//! For an unsaturated `v`, let `H = G⟨R_e(v) ∪ R_o(v)⟩` and `H' = H − v`.
//! `H'` has a perfect matching, so `A(H')` is invertible and
//! `A(H') x = A(H) e_v` has a unique solution. The vector that is `−1` at
//! `v`, `x` on `H'` and zero elsewhere lies in `Null(A(G))`.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::linalg::{self, int, LinalgError, Rational, RationalVector};
use crate::matching::{self, Matching, MatchingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NullBasisError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
    #[error("vertex {0} is saturated by the matching")]
    Saturated(Vertex),
    #[error("reduced system for anchor {0} is singular")]
    Singular(Vertex),
    #[error("label {0} is missing on one side of a lift or restriction")]
    LabelMismatch(Vertex),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `H = G⟨R_e(v) ∪ R_o(v)⟩` for an unsaturated `v`.
pub fn reach_subgraph(g: &Graph, m: &Matching, v: Vertex) -> Result<Graph, NullBasisError> {
    if !g.contains(v) {
        return Err(NullBasisError::UnknownVertex(v));
    }
    if m.is_saturated(v) {
        return Err(NullBasisError::Saturated(v));
    }
    let reach = matching::alternating_reach(g, m, &VertexSet::from([v]))?;
    let set: VertexSet = reach.even.union(&reach.odd).copied().collect();
    Ok(g.induced_subgraph(&set).expect("reach sets lie in V(g)"))
}

/// The null vector anchored at `v`, on `V(H)` only.
pub fn local_null_vector(
    g: &Graph,
    m: &Matching,
    v: Vertex,
) -> Result<RationalVector, NullBasisError> {
    let h = reach_subgraph(g, m, v)?;
    let rest: Vec<Vertex> = h.vertices().filter(|&u| u != v).collect();
    let reduced = h.without(&VertexSet::from([v]));
    let a = linalg::adjacency_matrix(&reduced, &rest)?;
    let rhs = RationalVector::from_ints(rest.iter().map(|&u| (u, i64::from(h.has_edge(v, u)))));
    let x = linalg::solve(&a, &rhs).map_err(|e| match e {
        LinalgError::Singular => NullBasisError::Singular(v),
        other => other.into(),
    })?;
    let mut y = x;
    y.set(v, int(-1));
    Ok(y)
}

/// The null vector anchored at `v`, lifted to all of `V(G)`.
pub fn null_vector_for(
    g: &Graph,
    m: &Matching,
    v: Vertex,
) -> Result<RationalVector, NullBasisError> {
    lift(&local_null_vector(g, m, v)?, g)
}

/// One null vector per unsaturated vertex, ordered by anchor.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NullBasis {
    pub anchors: Vec<Vertex>,
    pub vectors: Vec<RationalVector>,
}

impl NullBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &RationalVector)> + '_ {
        self.anchors.iter().copied().zip(&self.vectors)
    }

    /// Union of the supports of all vectors.
    pub fn support(&self) -> VertexSet {
        self.vectors.iter().flat_map(|x| x.support()).collect()
    }

    pub fn to_json(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(self).expect("basis serializes")
        } else {
            serde_json::to_string(self).expect("basis serializes")
        }
    }
}

impl Serialize for NullBasis {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            anchor: Vertex,
            entries: &'a RationalVector,
        }
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for (anchor, entries) in self.iter() {
            seq.serialize_element(&Entry { anchor, entries })?;
        }
        seq.end()
    }
}

pub fn null_basis(g: &Graph, m: &Matching) -> Result<NullBasis, NullBasisError> {
    m.check_in(g)?;
    let anchors: Vec<Vertex> = matching::unsaturated(g, m).into_iter().collect();
    let vectors = anchors
        .iter()
        .map(|&v| null_vector_for(g, m, v))
        .collect::<Result<_, _>>()?;
    Ok(NullBasis { anchors, vectors })
}

/// Extends `x` by zeros to `V(g)`. Every label of `x` must be a vertex of
/// `g`.
pub fn lift(x: &RationalVector, g: &Graph) -> Result<RationalVector, NullBasisError> {
    let mut out = RationalVector::zeros(g.vertices());
    for (v, value) in x.iter() {
        if !g.contains(v) {
            return Err(NullBasisError::LabelMismatch(v));
        }
        out.set(v, value.clone());
    }
    Ok(out)
}

/// Restricts `x` to `V(h)`. Every vertex of `h` must be a label of `x`.
pub fn restrict(x: &RationalVector, h: &Graph) -> Result<RationalVector, NullBasisError> {
    h.vertices()
        .map(|v| {
            x.get(v)
                .map(|value| (v, value.clone()))
                .ok_or(NullBasisError::LabelMismatch(v))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(RationalVector::from_pairs)
}

/// Greedy maximal `(M, x)`-alternating walk from `start`: matching edges
/// at even positions, and each step off a matching edge goes to the
/// smallest neighbor whose `x` value has the opposite sign to the vertex
/// two steps back. Stops when no step is possible or a vertex repeats.
pub fn alternating_walk(g: &Graph, m: &Matching, x: &RationalVector, start: Vertex) -> Vec<Vertex> {
    let zero = Rational::from_integer(0.into());
    let value = |v: Vertex| x.get(v).cloned().unwrap_or_else(|| zero.clone());
    let mut walk = vec![start];
    let mut seen = VertexSet::from([start]);
    loop {
        let current = walk[walk.len() - 1];
        let next = if walk.len() % 2 == 1 {
            m.partner(current)
        } else {
            let back = value(walk[walk.len() - 2]);
            g.neighbors(current).find(|&w| value(w) * &back < zero)
        };
        let Some(next) = next else { break };
        walk.push(next);
        if !seen.insert(next) {
            break;
        }
    }
    walk
}
