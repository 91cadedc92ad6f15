//! Brute-force reference implementations.
//!
//! Nothing here goes through the matching or decomposition code; the point
//! is to have something independent to compare against. Everything works
//! on bitmasks and therefore caps out at 64 vertices, with a tighter
//! user-chosen budget on top.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::linalg;
use crate::matching::Matching;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {order} vertices, over the oracle budget of {budget}")]
    OverBudget { order: usize, budget: usize },
}

fn masks(g: &Graph, budget: usize) -> Result<Vec<u64>, OracleError> {
    let budget = budget.min(64);
    if g.order() > budget {
        return Err(OracleError::OverBudget {
            order: g.order(),
            budget,
        });
    }
    Ok((0..g.order())
        .map(|i| g.neighbor_indices(i).iter().fold(0u64, |m, &j| m | 1 << j))
        .collect())
}

fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn labels_of(g: &Graph, mask: u64) -> VertexSet {
    (0..g.order())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| g.label(i))
        .collect()
}

/// Every maximum independent set of `g`.
pub fn enumerate_max_independent_sets(
    g: &Graph,
    budget: usize,
) -> Result<Vec<VertexSet>, OracleError> {
    let nbr = masks(g, budget)?;
    let mut search = MisSearch {
        nbr: &nbr,
        best: 0,
        found: Vec::new(),
    };
    search.run(0, 0, 0, full(g.order()));
    Ok(search.found.into_iter().map(|m| labels_of(g, m)).collect())
}

struct MisSearch<'a> {
    nbr: &'a [u64],
    best: u32,
    found: Vec<u64>,
}

impl MisSearch<'_> {
    /// `open` holds the undecided vertices that are not adjacent to
    /// anything chosen so far.
    fn run(&mut self, i: usize, chosen: u64, size: u32, open: u64) {
        let open = open & !full(i);
        if size + open.count_ones() < self.best {
            return;
        }
        if open == 0 {
            if size > self.best {
                self.best = size;
                self.found.clear();
            }
            self.found.push(chosen);
            return;
        }
        let next = open.trailing_zeros() as usize;
        self.run(
            next + 1,
            chosen | 1 << next,
            size + 1,
            open & !self.nbr[next],
        );
        self.run(next + 1, chosen, size, open);
    }
}

/// Maximum matching size by exhaustive search over vertex subsets, with
/// memoization keyed by the set of vertices still available.
struct NuOracle<'a> {
    nbr: &'a [u64],
    memo: HashMap<u64, u32>,
}

impl NuOracle<'_> {
    fn nu(&mut self, alive: u64) -> u32 {
        if alive.count_ones() < 2 {
            return 0;
        }
        if let Some(&v) = self.memo.get(&alive) {
            return v;
        }
        let i = alive.trailing_zeros() as usize;
        let rest = alive & !(1 << i);
        let mut best = self.nu(rest);
        let mut candidates = self.nbr[i] & rest;
        while candidates != 0 && best < alive.count_ones() / 2 {
            let j = candidates.trailing_zeros();
            candidates &= candidates - 1;
            best = best.max(1 + self.nu(rest & !(1 << j)));
        }
        self.memo.insert(alive, best);
        best
    }
}

/// Every maximum matching of `g`, edges as `(smaller, larger)` labels.
pub fn enumerate_maximum_matchings(g: &Graph, budget: usize) -> Result<Vec<Matching>, OracleError> {
    let nbr = masks(g, budget)?;
    let all = full(g.order());
    let target = NuOracle {
        nbr: &nbr,
        memo: HashMap::new(),
    }
    .nu(all);
    let mut out = Vec::new();
    let mut stack = Vec::new();
    enumerate_matchings(&nbr, all, target, &mut stack, &mut out);
    Ok(out
        .into_iter()
        .map(|pairs| {
            Matching::new(pairs.into_iter().map(|(i, j)| (g.label(i), g.label(j))))
                .expect("disjoint by construction")
        })
        .collect())
}

fn enumerate_matchings(
    nbr: &[u64],
    alive: u64,
    need: u32,
    stack: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if need == 0 {
        out.push(stack.clone());
        return;
    }
    if alive.count_ones() < 2 * need {
        return;
    }
    let i = alive.trailing_zeros() as usize;
    let rest = alive & !(1 << i);
    let mut candidates = nbr[i] & rest;
    while candidates != 0 {
        let j = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        stack.push((i, j));
        enumerate_matchings(nbr, rest & !(1 << j), need - 1, stack, out);
        stack.pop();
    }
    enumerate_matchings(nbr, rest, need, stack, out);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Intersection and union of all maximum independent sets.
    Independence,
    /// `D`, `A`, `C` from the matching structure.
    GallaiEdmonds,
    /// Supports of the null space of `A(G)`.
    NullSpace,
}

/// A three-way split of `V(G)` in the common shape of the three classical
/// decompositions. `always` lines up with `Supp`, `never` with `Core`, and
/// `sometimes` with `Npart`. `overlap` is only nonempty for the null-space
/// split of a graph outside the certified class, where `never` is `N(supp)`
/// and can meet `always`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleDecomposition {
    pub source: Source,
    pub always: VertexSet,
    pub never: VertexSet,
    pub sometimes: VertexSet,
    pub overlap: VertexSet,
}

impl TripleDecomposition {
    /// Same three sets, ignoring where they came from.
    pub fn same_sets(&self, other: &TripleDecomposition) -> bool {
        self.always == other.always
            && self.never == other.never
            && self.sometimes == other.sometimes
            && self.overlap == other.overlap
    }
}

/// Vertices in every maximum independent set, vertices in none, the rest.
pub fn independence_decomposition(
    g: &Graph,
    budget: usize,
) -> Result<TripleDecomposition, OracleError> {
    let sets = enumerate_max_independent_sets(g, budget)?;
    let mut always = g.vertex_set();
    let mut seen = VertexSet::new();
    for s in &sets {
        always.retain(|v| s.contains(v));
        seen.extend(s);
    }
    let never: VertexSet = g.vertices().filter(|v| !seen.contains(v)).collect();
    let sometimes = seen.difference(&always).copied().collect();
    Ok(TripleDecomposition {
        source: Source::Independence,
        always,
        never,
        sometimes,
        overlap: VertexSet::new(),
    })
}

/// `D` = vertices missed by some maximum matching (`ν(G − v) = ν(G)`),
/// `A = N(D) \ D`, `C` = the rest.
pub fn gallai_edmonds_decomposition(
    g: &Graph,
    budget: usize,
) -> Result<TripleDecomposition, OracleError> {
    let nbr = masks(g, budget)?;
    let mut oracle = NuOracle {
        nbr: &nbr,
        memo: HashMap::new(),
    };
    let all = full(g.order());
    let nu = oracle.nu(all);
    let d_mask = (0..g.order())
        .filter(|&i| oracle.nu(all & !(1 << i)) == nu)
        .fold(0u64, |m, i| m | 1 << i);
    let a_mask = (0..g.order())
        .filter(|&i| d_mask >> i & 1 == 1)
        .fold(0u64, |m, i| m | nbr[i])
        & !d_mask;
    let c_mask = all & !d_mask & !a_mask;
    Ok(TripleDecomposition {
        source: Source::GallaiEdmonds,
        always: labels_of(g, d_mask),
        never: labels_of(g, a_mask),
        sometimes: labels_of(g, c_mask),
        overlap: VertexSet::new(),
    })
}

/// `supp` = union of supports of `Null(A(G))`, `core = N(supp)`,
/// `npart` = the rest. Works on any graph.
pub fn nullspace_decomposition(g: &Graph) -> TripleDecomposition {
    let basis = linalg::nullspace_basis(&linalg::adjacency(g));
    let supp: VertexSet = basis.iter().flat_map(|x| x.support()).collect();
    let core = g.neighborhood(&supp);
    let sometimes = g
        .vertices()
        .filter(|v| !supp.contains(v) && !core.contains(v))
        .collect();
    TripleDecomposition {
        source: Source::NullSpace,
        overlap: supp.intersection(&core).copied().collect(),
        always: supp,
        never: core,
        sometimes,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleComparison {
    pub independence: TripleDecomposition,
    pub gallai_edmonds: TripleDecomposition,
    pub null_space: TripleDecomposition,
}

impl OracleComparison {
    pub fn all_agree(&self) -> bool {
        self.independence.same_sets(&self.gallai_edmonds)
            && self.gallai_edmonds.same_sets(&self.null_space)
    }
}

pub fn compare_decompositions(g: &Graph, budget: usize) -> Result<OracleComparison, OracleError> {
    Ok(OracleComparison {
        independence: independence_decomposition(g, budget)?,
        gallai_edmonds: gallai_edmonds_decomposition(g, budget)?,
        null_space: nullspace_decomposition(g),
    })
}

/// Cycle lengths by trying every vertex subset as the vertex set of a
/// cycle: a subset spans a cycle through all of it iff some Hamiltonian
/// cycle exists on it, checked by DP over subsets. Only for tiny graphs.
pub fn cycle_lengths_brute_force(g: &Graph) -> std::collections::BTreeSet<usize> {
    let n = g.order();
    assert!(
        n <= 16,
        "brute-force cycle oracle is limited to 16 vertices"
    );
    let nbr: Vec<u32> = (0..n)
        .map(|i| g.neighbor_indices(i).iter().fold(0u32, |m, &j| m | 1 << j))
        .collect();
    // reach[mask][v]: a path starting at the lowest vertex of mask, visiting
    // exactly mask, ending at v.
    let size = 1usize << n;
    let mut reach = vec![0u32; size];
    for s in 0..n {
        reach[1 << s] = 1 << s;
    }
    let mut lengths = std::collections::BTreeSet::new();
    for mask in 1..size {
        let ends = reach[mask];
        if ends == 0 {
            continue;
        }
        let low = mask.trailing_zeros() as usize;
        let mut e = ends;
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            if mask.count_ones() >= 3 && nbr[v] >> low & 1 == 1 {
                lengths.insert(mask.count_ones() as usize);
            }
            let mut ext = nbr[v] as usize & !mask & !((1usize << low) - 1);
            while ext != 0 {
                let w = ext.trailing_zeros() as usize;
                ext &= ext - 1;
                reach[mask | 1 << w] |= 1 << w;
            }
        }
    }
    lengths
}
