//! Certification of the C₄ₖ-free bipartite class.
//!
//! Bipartiteness is decided by 2-coloring. Cycle lengths come from an
//! elementary-cycle enumeration (Johnson's blocking scheme run on the
//! symmetric digraph, keeping one orientation of each undirected cycle),
//! bounded by a caller-supplied cap.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::graph::{Bipartition, Graph, Vertex};

pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

/// A closed walk `v0, v1, ..., v0` with distinct interior vertices.
///
/// Stored normalized: the smallest label first, oriented so the second
/// vertex is smaller than the last interior vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    pub cycle: Vec<Vertex>,
    pub length: usize,
}

impl CycleWitness {
    /// Builds a witness from the open vertex sequence of a cycle.
    pub fn from_open(mut open: Vec<Vertex>) -> Self {
        if let Some(pos) = open
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| *v)
            .map(|(i, _)| i)
        {
            open.rotate_left(pos);
        }
        if open.len() >= 3 && open[1] > open[open.len() - 1] {
            open[1..].reverse();
        }
        let length = open.len();
        if let Some(&first) = open.first() {
            open.push(first);
        }
        CycleWitness {
            cycle: open,
            length,
        }
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// Checks adjacency of consecutive vertices, closure, distinct interior
    /// vertices and the recorded length.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let c = &self.cycle;
        if c.len() < 4 || c.first() != c.last() || self.length != c.len() - 1 {
            return false;
        }
        let interior: BTreeSet<_> = c[..c.len() - 1].iter().collect();
        interior.len() == self.length && c.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }
}

/// Outcome of a capped cycle enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleLengths {
    Complete(BTreeSet<usize>),
    Inconclusive { cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Scan {
    Completed(usize),
    Stopped,
    CapExceeded,
}

/// Calls `visit` once per undirected elementary cycle (open vertex
/// sequence, starting at its smallest label). Visiting more than `cap`
/// cycles aborts the scan.
fn scan_cycles<F>(g: &Graph, cap: usize, mut visit: F) -> Scan
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let n = g.order();
    let mut state = Johnson {
        g,
        start: 0,
        blocked: vec![false; n],
        blocked_by: vec![Vec::new(); n],
        stack: Vec::new(),
        count: 0,
        cap,
        halt: None,
    };
    for start in 0..n {
        state.start = start;
        state.blocked.iter_mut().for_each(|b| *b = false);
        state.blocked_by.iter_mut().for_each(Vec::clear);
        state.circuit(start, &mut visit);
        if let Some(halt) = state.halt.take() {
            return halt;
        }
    }
    Scan::Completed(state.count)
}

struct Johnson<'g> {
    g: &'g Graph,
    start: usize,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    stack: Vec<usize>,
    count: usize,
    cap: usize,
    halt: Option<Scan>,
}

impl Johnson<'_> {
    fn circuit<F>(&mut self, v: usize, visit: &mut F) -> bool
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in self.g.neighbor_indices(v) {
            if self.halt.is_some() {
                break;
            }
            if w < self.start {
                continue;
            }
            if w == self.start {
                found = true;
                let len = self.stack.len();
                // Skip the 2-cycle of a single edge and the reversed copy.
                if len >= 3 && self.stack[1] < self.stack[len - 1] {
                    self.count += 1;
                    if self.count > self.cap {
                        self.halt = Some(Scan::CapExceeded);
                    } else if visit(&self.stack).is_break() {
                        self.halt = Some(Scan::Stopped);
                    }
                }
            } else if !self.blocked[w] && self.circuit(w, visit) {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in self.g.neighbor_indices(v) {
                if w >= self.start && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.stack.pop();
        found
    }

    fn unblock(&mut self, u: usize) {
        let mut pending = vec![u];
        while let Some(x) = pending.pop() {
            self.blocked[x] = false;
            for w in std::mem::take(&mut self.blocked_by[x]) {
                if self.blocked[w] {
                    pending.push(w);
                }
            }
        }
    }
}

fn witness(g: &Graph, idx: &[usize]) -> CycleWitness {
    CycleWitness::from_open(idx.iter().map(|&i| g.label(i)).collect())
}

/// Lengths of all elementary cycles, or `Inconclusive` past `cap` cycles.
pub fn enumerate_cycle_lengths(g: &Graph, cap: usize) -> CycleLengths {
    let mut lengths = BTreeSet::new();
    match scan_cycles(g, cap, |c| {
        lengths.insert(c.len());
        ControlFlow::Continue(())
    }) {
        Scan::CapExceeded => CycleLengths::Inconclusive { cap },
        _ => CycleLengths::Complete(lengths),
    }
}

/// Every elementary cycle in discovery order, or `None` past `cap` cycles.
pub fn elementary_cycles(g: &Graph, cap: usize) -> Option<Vec<CycleWitness>> {
    let mut out = Vec::new();
    match scan_cycles(g, cap, |c| {
        out.push(witness(g, c));
        ControlFlow::Continue(())
    }) {
        Scan::CapExceeded => None,
        _ => Some(out),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub bipartition: Bipartition,
    pub cycle_lengths: BTreeSet<usize>,
    pub cycle_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "witness", rename_all = "snake_case")]
pub enum Rejection {
    OddCycle(CycleWitness),
    CycleLengthMultipleOfFour(CycleWitness),
}

impl Rejection {
    pub fn witness(&self) -> &CycleWitness {
        match self {
            Rejection::OddCycle(w) | Rejection::CycleLengthMultipleOfFour(w) => w,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Certified(Certificate),
    Rejected(Rejection),
    Inconclusive { cap: usize },
}

impl Validation {
    pub fn is_certified(&self) -> bool {
        matches!(self, Validation::Certified(_))
    }

    /// 0 certified, 1 rejected, 2 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self {
            Validation::Certified(_) => 0,
            Validation::Rejected(_) => 1,
            Validation::Inconclusive { .. } => 2,
        }
    }
}

/// Certifies `g` as bipartite with no cycle of length ≡ 0 (mod 4).
/// The cycle scan stops at the first offending cycle.
pub fn check_c4kfree_bipartite(g: &Graph, cap: usize) -> Validation {
    let bipartition = match g.bipartition() {
        Ok(bp) => bp,
        Err(odd) => return Validation::Rejected(Rejection::OddCycle(odd)),
    };
    let mut lengths = BTreeSet::new();
    let mut bad = None;
    let scan = scan_cycles(g, cap, |c| {
        if c.len() % 4 == 0 {
            bad = Some(witness(g, c));
            return ControlFlow::Break(());
        }
        lengths.insert(c.len());
        ControlFlow::Continue(())
    });
    match (scan, bad) {
        (_, Some(w)) => Validation::Rejected(Rejection::CycleLengthMultipleOfFour(w)),
        (Scan::CapExceeded, None) => Validation::Inconclusive { cap },
        (Scan::Completed(count), None) => Validation::Certified(Certificate {
            bipartition,
            cycle_lengths: lengths,
            cycle_count: count,
        }),
        (Scan::Stopped, None) => unreachable!("scan only stops on a witness"),
    }
}
