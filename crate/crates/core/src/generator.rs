//! Seeded random instances.
//!
//! The generator is self-contained so that a `(family, n, extra, seed)`
//! tuple names the same graph on every platform and every release. The
//! seed is expanded with SplitMix64 and the stream is xorshift64*
//! (shifts 12, 25, 27; multiplier `0x2545F4914F6CDD1D`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Vertex};
use crate::validate::{self, Validation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rng {
    state: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let state = splitmix64(seed);
        Rng {
            state: if state == 0 {
                0x9E37_79B9_7F4A_7C15
            } else {
                state
            },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `0..bound` by rejection. `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}

/// Uniform labelled tree on `1..=n` from a random Prüfer sequence.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    tree_from(&mut Rng::new(seed), n)
}

fn tree_from(rng: &mut Rng, n: usize) -> Graph {
    match n {
        0 => return Graph::empty(),
        1 => return Graph::new([1], []).expect("single vertex"),
        _ => {}
    }
    let code: Vec<usize> = (0..n - 2)
        .map(|_| rng.below(n as u64) as usize + 1)
        .collect();
    let mut degree = vec![1usize; n + 1];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> =
        (1..=n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = leaves.pop_first().expect("a tree always has a leaf");
        edges.push((leaf as Vertex, c as Vertex));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let u = leaves.pop_first().expect("two leaves remain");
    let w = leaves.pop_first().expect("two leaves remain");
    edges.push((u as Vertex, w as Vertex));
    Graph::new((1..=n as Vertex).collect::<Vec<_>>(), edges)
        .expect("Prüfer decoding yields a simple tree")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Bare random tree.
    Tree,
    /// Tree plus cross edges that keep it certified.
    C4kFree,
    /// Tree plus arbitrary cross edges between the two sides.
    BipartiteAny,
    /// Tree plus arbitrary extra edges.
    General,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Tree => "tree",
            Family::C4kFree => "c4kfree",
            Family::BipartiteAny => "bipartite_any",
            Family::General => "general",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tree" => Ok(Family::Tree),
            "c4kfree" => Ok(Family::C4kFree),
            "bipartite_any" | "bipartite" => Ok(Family::BipartiteAny),
            "general" => Ok(Family::General),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub extra_edges: usize,
    pub family: Family,
    pub seed: u64,
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "--family {} --n {} --extra {} --seed {}",
            self.family, self.n, self.extra_edges, self.seed
        )
    }
}

/// Attempts per requested extra edge before giving up.
pub const TRIES_PER_EDGE: usize = 64;

/// `g + uv` if that graph is still certified.
pub fn with_edge_if_certified(g: &Graph, u: Vertex, v: Vertex) -> Option<Graph> {
    let h = with_edge(g, u, v)?;
    matches!(
        validate::check_c4kfree_bipartite(&h, validate::DEFAULT_CYCLE_CAP),
        Validation::Certified(_)
    )
    .then_some(h)
}

fn with_edge(g: &Graph, u: Vertex, v: Vertex) -> Option<Graph> {
    if u == v || g.has_edge(u, v) {
        return None;
    }
    Graph::new(g.vertices(), g.edges().chain([(u, v)])).ok()
}

/// Tree plus up to `extra_edges` cross edges, each kept only if the graph
/// stays certified. After `max_tries` candidate edges it returns whatever
/// has been accepted so far, which may be the bare tree.
pub fn random_c4kfree(spec: &GenSpec, max_tries: usize) -> Graph {
    let mut rng = Rng::new(spec.seed);
    let mut g = tree_from(&mut rng, spec.n);
    let Some((xs, ys)) = sides(&g) else {
        return g;
    };
    let mut added = 0;
    for _ in 0..max_tries {
        if added == spec.extra_edges {
            break;
        }
        let (u, v) = cross_pair(&mut rng, &xs, &ys);
        if let Some(h) = with_edge_if_certified(&g, u, v) {
            g = h;
            added += 1;
        }
    }
    g
}

fn sides(g: &Graph) -> Option<(Vec<Vertex>, Vec<Vertex>)> {
    let bp = g.bipartition().ok()?;
    let xs: Vec<Vertex> = bp.side_x.iter().copied().collect();
    let ys: Vec<Vertex> = bp.side_y.iter().copied().collect();
    (!xs.is_empty() && !ys.is_empty()).then_some((xs, ys))
}

fn cross_pair(rng: &mut Rng, xs: &[Vertex], ys: &[Vertex]) -> (Vertex, Vertex) {
    let u = xs[rng.below(xs.len() as u64) as usize];
    let v = ys[rng.below(ys.len() as u64) as usize];
    (u, v)
}

pub fn generate(spec: &GenSpec) -> Graph {
    let max_tries = TRIES_PER_EDGE * spec.extra_edges.max(1);
    match spec.family {
        Family::Tree => random_tree(spec.n, spec.seed),
        Family::C4kFree => random_c4kfree(spec, max_tries),
        Family::BipartiteAny => {
            let mut rng = Rng::new(spec.seed);
            let mut g = tree_from(&mut rng, spec.n);
            let Some((xs, ys)) = sides(&g) else {
                return g;
            };
            let mut added = 0;
            for _ in 0..max_tries {
                if added == spec.extra_edges {
                    break;
                }
                let (u, v) = cross_pair(&mut rng, &xs, &ys);
                if let Some(h) = with_edge(&g, u, v) {
                    g = h;
                    added += 1;
                }
            }
            g
        }
        Family::General => {
            let mut rng = Rng::new(spec.seed);
            let mut g = tree_from(&mut rng, spec.n);
            if spec.n < 2 {
                return g;
            }
            let mut added = 0;
            for _ in 0..max_tries {
                if added == spec.extra_edges {
                    break;
                }
                let u = rng.below(spec.n as u64) + 1;
                let v = rng.below(spec.n as u64) + 1;
                if let Some(h) = with_edge(&g, u, v) {
                    g = h;
                    added += 1;
                }
            }
            g
        }
    }
}
