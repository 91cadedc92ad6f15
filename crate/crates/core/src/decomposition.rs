//! The null decomposition `V = Supp ∪ Core ∪ Npart` and everything derived
//! from it.
//!
//! For a C₄ₖ-free bipartite graph and any maximum matching `M`,
//! `Supp = R_e(U(M), M)` and `Core = R_o(U(M), M)`, so the decomposition is
//! computed without touching the adjacency matrix. The matrix only shows up
//! in the optional algebraic audit.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::linalg::{self, Inertia};
use crate::matching::{self, find_augmenting_path, Matching, MatchingError};
use crate::validate::{self, CycleWitness, Rejection, Validation};

/// Largest component (in vertices) the brute-force counters accept.
pub const DEFAULT_BUDGET: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("graph is not C4k-free bipartite: {0:?}")]
    Rejected(Rejection),
    #[error("cycle enumeration exceeded the cap of {cap} cycles")]
    Inconclusive { cap: usize },
    #[error("graph is not bipartite (odd cycle {:?})", .0.cycle)]
    NotBipartite(CycleWitness),
    #[error("matching is not maximum: augmenting path {0:?}")]
    NotMaximum(Vec<Vertex>),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("vertex {0} is not in npart")]
    NotInNpart(Vertex),
    #[error(
        "component {index} (smallest vertex {smallest}) has {order} vertices, over the budget of {budget}"
    )]
    OverBudget {
        index: usize,
        smallest: Vertex,
        order: usize,
        budget: usize,
    },
    #[error("count overflowed 128 bits")]
    CountOverflow,
}

/// `(Supp, Core, Npart)` with the induced subgraphs `C_S = G⟨Supp ∪ Core⟩`
/// and `C_N = G⟨Npart⟩` and their connected components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullDecomposition {
    pub supp: VertexSet,
    pub core: VertexSet,
    pub npart: VertexSet,
    pub c_s: Graph,
    pub c_n: Graph,
    pub s_components: Vec<Graph>,
    pub n_components: Vec<Graph>,
}

impl NullDecomposition {
    /// `|Supp| - |Core|`.
    pub fn nullity(&self) -> usize {
        self.supp.len() - self.core.len()
    }

    /// `|Core| + |Npart|/2`.
    pub fn nu(&self) -> usize {
        self.core.len() + self.npart.len() / 2
    }

    pub fn rank(&self) -> usize {
        2 * self.core.len() + self.npart.len()
    }

    pub fn alpha(&self) -> usize {
        self.supp.len() + self.npart.len() / 2
    }

    pub fn inertia(&self) -> Inertia {
        Inertia::new(self.nu(), self.nullity(), self.nu())
    }
}

/// Decomposes `g` using the maximum matching `m`. `g` should be certified
/// (or at least bipartite; see [`AnalysisOptions::unchecked`]).
pub fn null_decomposition(g: &Graph, m: &Matching) -> Result<NullDecomposition, AnalysisError> {
    m.check_in(g)?;
    if let Some(path) = find_augmenting_path(g, m) {
        return Err(AnalysisError::NotMaximum(path));
    }
    let free = matching::unsaturated(g, m);
    let reach = matching::alternating_reach(g, m, &free)?;
    let npart: VertexSet = g
        .vertices()
        .filter(|v| !reach.even.contains(v) && !reach.odd.contains(v))
        .collect();
    let s_side: VertexSet = reach.even.union(&reach.odd).copied().collect();
    let c_s = g.induced_subgraph(&s_side).expect("subset of V(g)");
    let c_n = g.induced_subgraph(&npart).expect("subset of V(g)");
    Ok(NullDecomposition {
        supp: reach.even,
        core: reach.odd,
        npart,
        s_components: c_s.connected_components(),
        n_components: c_n.connected_components(),
        c_s,
        c_n,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Cycle cap handed to the validator.
    pub cycle_cap: usize,
    /// Per-component vertex budget of the brute-force counters.
    pub budget: usize,
    /// Skip certification. The graph must still be bipartite.
    pub unchecked: bool,
    /// Recompute rank and inertia from the exact adjacency matrix.
    pub algebraic_audit: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            cycle_cap: validate::DEFAULT_CYCLE_CAP,
            budget: DEFAULT_BUDGET,
            unchecked: false,
            algebraic_audit: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditMethod {
    /// Closed form against a combinatorial count.
    Formula,
    /// Closed form against exact linear algebra.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub identity: &'static str,
    pub method: AuditMethod,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl AuditEntry {
    fn new<T: PartialEq + std::fmt::Debug>(
        identity: &'static str,
        method: AuditMethod,
        expected: T,
        actual: T,
    ) -> Self {
        AuditEntry {
            identity,
            method,
            pass: expected == actual,
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub nu: usize,
    pub rank: usize,
    pub nullity: usize,
    pub alpha: usize,
    pub inertia: Inertia,
    pub m_count: u128,
    pub a_count: u128,
    pub certified: bool,
    pub matching: Matching,
    pub decomposition: NullDecomposition,
    pub audit: Vec<AuditEntry>,
}

impl AnalysisReport {
    pub fn audit_passed(&self) -> bool {
        self.audit.iter().all(|a| a.pass)
    }

    pub fn to_json(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(self).expect("report serializes")
        } else {
            serde_json::to_string(self).expect("report serializes")
        }
    }
}

fn component_lists(components: &[Graph]) -> Vec<Vec<Vertex>> {
    components.iter().map(|c| c.labels().to_vec()).collect()
}

impl Serialize for AnalysisReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            nu: usize,
            rank: usize,
            nullity: usize,
            alpha: usize,
            inertia: Inertia,
            m_count: u128,
            a_count: u128,
            supp: &'a VertexSet,
            core: &'a VertexSet,
            npart: &'a VertexSet,
            s_components: Vec<Vec<Vertex>>,
            n_components: Vec<Vec<Vertex>>,
            certified: bool,
            matching: &'a Matching,
            audit: &'a [AuditEntry],
        }
        let d = &self.decomposition;
        Wire {
            nu: self.nu,
            rank: self.rank,
            nullity: self.nullity,
            alpha: self.alpha,
            inertia: self.inertia,
            m_count: self.m_count,
            a_count: self.a_count,
            supp: &d.supp,
            core: &d.core,
            npart: &d.npart,
            s_components: component_lists(&d.s_components),
            n_components: component_lists(&d.n_components),
            certified: self.certified,
            matching: &self.matching,
            audit: &self.audit,
        }
        .serialize(serializer)
    }
}

/// Certifies `g` (unless `unchecked`) and returns its canonical maximum
/// matching.
pub fn certify_and_match(g: &Graph, opts: &AnalysisOptions) -> Result<Matching, AnalysisError> {
    if !opts.unchecked {
        match validate::check_c4kfree_bipartite(g, opts.cycle_cap) {
            Validation::Certified(cert) => {
                return Ok(matching::maximum_matching(g, &cert.bipartition))
            }
            Validation::Rejected(r) => return Err(AnalysisError::Rejected(r)),
            Validation::Inconclusive { cap } => return Err(AnalysisError::Inconclusive { cap }),
        }
    }
    let bp = g.bipartition().map_err(AnalysisError::NotBipartite)?;
    Ok(matching::maximum_matching(g, &bp))
}

/// Full report for `g` using its canonical maximum matching.
pub fn analysis_report(g: &Graph, opts: &AnalysisOptions) -> Result<AnalysisReport, AnalysisError> {
    let m = certify_and_match(g, opts)?;
    report_with_matching(g, &m, opts)
}

/// Full report for `g` using the supplied maximum matching. Certification
/// is the caller's business.
pub fn report_with_matching(
    g: &Graph,
    m: &Matching,
    opts: &AnalysisOptions,
) -> Result<AnalysisReport, AnalysisError> {
    let d = null_decomposition(g, m)?;
    let m_count = count_from_components(&d, opts.budget)?;
    let a_count = independent_count_from_components(&d, opts.budget)?;
    let audit = audit(g, m, &d, opts.algebraic_audit);
    Ok(AnalysisReport {
        nu: d.nu(),
        rank: d.rank(),
        nullity: d.nullity(),
        alpha: d.alpha(),
        inertia: d.inertia(),
        m_count,
        a_count,
        certified: !opts.unchecked,
        matching: m.clone(),
        decomposition: d,
        audit,
    })
}

fn audit(g: &Graph, m: &Matching, d: &NullDecomposition, algebraic: bool) -> Vec<AuditEntry> {
    use AuditMethod::{Formula, Oracle};
    let n = g.order();
    let free = matching::unsaturated(g, m).len();
    let mut out = vec![
        AuditEntry::new(
            "supp ∩ core = ∅",
            Formula,
            true,
            d.supp.is_disjoint(&d.core),
        ),
        AuditEntry::new(
            "core = N(supp)",
            Formula,
            d.core.clone(),
            g.neighborhood(&d.supp),
        ),
        AuditEntry::new("nu = core + npart/2", Formula, d.nu(), m.len()),
        AuditEntry::new("rank = 2·core + npart", Formula, d.rank(), 2 * m.len()),
        AuditEntry::new("nullity = supp − core", Formula, d.nullity(), free),
        AuditEntry::new(
            "nullity = |V| − 2·nu",
            Formula,
            d.nullity(),
            n - 2 * m.len(),
        ),
        AuditEntry::new("rank + nullity = |V|", Formula, n, d.rank() + d.nullity()),
        AuditEntry::new(
            "alpha = supp + npart/2",
            Formula,
            d.alpha(),
            d.nullity() + d.nu(),
        ),
        AuditEntry::new("nu + alpha = |V|", Formula, n, d.nu() + d.alpha()),
        AuditEntry::new(
            "inertia = (nu, nullity, nu)",
            Formula,
            (m.len(), free, m.len()),
            triple(d.inertia()),
        ),
    ];
    if algebraic {
        let a = linalg::adjacency(g);
        let r = linalg::rank(&a);
        out.push(AuditEntry::new("rank(A(G)) = 2·nu", Oracle, d.rank(), r));
        out.push(AuditEntry::new(
            "dim Null(A(G)) = nullity",
            Oracle,
            d.nullity(),
            n - r,
        ));
        if let Ok(inertia) = linalg::inertia_algebraic(&a) {
            out.push(AuditEntry::new(
                "inertia(A(G)) = (nu, nullity, nu)",
                Oracle,
                triple(d.inertia()),
                triple(inertia),
            ));
        }
    }
    out
}

fn triple(i: Inertia) -> (usize, usize, usize) {
    (i.negative, i.zero, i.positive)
}

fn budget_check(components: &[Graph], offset: usize, budget: usize) -> Result<(), AnalysisError> {
    for (i, h) in components.iter().enumerate() {
        if h.order() > budget {
            return Err(AnalysisError::OverBudget {
                index: offset + i,
                smallest: h.label(0),
                order: h.order(),
                budget,
            });
        }
    }
    Ok(())
}

fn product<I: IntoIterator<Item = u128>>(factors: I) -> Result<u128, AnalysisError> {
    factors.into_iter().try_fold(1u128, |acc, f| {
        acc.checked_mul(f).ok_or(AnalysisError::CountOverflow)
    })
}

fn count_from_components(d: &NullDecomposition, budget: usize) -> Result<u128, AnalysisError> {
    budget_check(&d.s_components, 0, budget)?;
    budget_check(&d.n_components, d.s_components.len(), budget)?;
    product(
        d.s_components
            .iter()
            .chain(&d.n_components)
            .map(count_component_maximum_matchings),
    )
}

fn independent_count_from_components(
    d: &NullDecomposition,
    budget: usize,
) -> Result<u128, AnalysisError> {
    budget_check(&d.n_components, d.s_components.len(), budget)?;
    product(
        d.n_components
            .iter()
            .map(count_component_maximum_independent_sets),
    )
}

/// `m(G)` as the product of per-component counts over `C_S` and `C_N`.
pub fn count_maximum_matchings(g: &Graph, opts: &AnalysisOptions) -> Result<u128, AnalysisError> {
    let m = certify_and_match(g, opts)?;
    count_from_components(&null_decomposition(g, &m)?, opts.budget)
}

/// `a(G)` as the product of per-component counts over `C_N`.
pub fn count_maximum_independent_sets(
    g: &Graph,
    opts: &AnalysisOptions,
) -> Result<u128, AnalysisError> {
    let m = certify_and_match(g, opts)?;
    independent_count_from_components(&null_decomposition(g, &m)?, opts.budget)
}

fn matching_number(h: &Graph) -> usize {
    let bp = h
        .bipartition()
        .expect("components of a bipartite graph are bipartite");
    matching::maximum_matching(h, &bp).len()
}

/// Number of maximum matchings of a bipartite graph by exhaustive
/// branching: each vertex in turn is left free or matched to a later free
/// neighbor, and branches leaving too many vertices free are cut.
pub fn count_component_maximum_matchings(h: &Graph) -> u128 {
    let n = h.order();
    let target = matching_number(h);
    let mut used = vec![false; n];
    count_matchings(h, 0, n - 2 * target, &mut used)
}

fn count_matchings(h: &Graph, from: usize, free_left: usize, used: &mut [bool]) -> u128 {
    let Some(i) = (from..used.len()).find(|&i| !used[i]) else {
        return 1;
    };
    used[i] = true;
    let mut total = 0;
    if free_left > 0 {
        total += count_matchings(h, i + 1, free_left - 1, used);
    }
    for &j in h.neighbor_indices(i) {
        if j > i && !used[j] {
            used[j] = true;
            total += count_matchings(h, i + 1, free_left, used);
            used[j] = false;
        }
    }
    used[i] = false;
    total
}

/// Number of maximum independent sets of a bipartite graph, with
/// `α = |V| − ν` by König's theorem as the target size.
pub fn count_component_maximum_independent_sets(h: &Graph) -> u128 {
    let n = h.order();
    let target = n - matching_number(h);
    let mut state = vec![false; n];
    count_independent(h, 0, target, &mut state)
}

fn count_independent(h: &Graph, i: usize, need: usize, chosen: &mut [bool]) -> u128 {
    if need == 0 {
        return 1;
    }
    if chosen.len() - i < need {
        return 0;
    }
    let mut total = count_independent(h, i + 1, need, chosen);
    if h.neighbor_indices(i).iter().all(|&j| !chosen[j]) {
        chosen[i] = true;
        total += count_independent(h, i + 1, need - 1, chosen);
        chosen[i] = false;
    }
    total
}

/// Report for `G − v − M(v)` where `v ∈ Npart(G)`.
pub fn stability_delete_pair(
    g: &Graph,
    m: &Matching,
    v: Vertex,
    opts: &AnalysisOptions,
) -> Result<AnalysisReport, AnalysisError> {
    let d = null_decomposition(g, m)?;
    if !d.npart.contains(&v) {
        return Err(AnalysisError::NotInNpart(v));
    }
    let partner = m.partner(v).ok_or(AnalysisError::NotInNpart(v))?;
    let reduced = g.without(&VertexSet::from([v, partner]));
    // Induced subgraphs of a certified graph stay in the class.
    let opts = AnalysisOptions {
        unchecked: true,
        ..*opts
    };
    let mut report = analysis_report(&reduced, &opts)?;
    report.certified = true;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(edges: &[(Vertex, Vertex)]) -> Graph {
        Graph::from_edges(edges.iter().copied()).unwrap()
    }

    fn report(graph: &Graph) -> AnalysisReport {
        analysis_report(graph, &AnalysisOptions::default()).unwrap()
    }

    fn cycle(n: Vertex) -> Graph {
        Graph::from_edges((1..=n).map(|i| (i, i % n + 1))).unwrap()
    }

    #[test]
    fn k2_is_all_npart() {
        let k2 = g(&[(1, 2)]);
        let r = report(&k2);
        assert!(r.decomposition.supp.is_empty() && r.decomposition.core.is_empty());
        assert_eq!(r.decomposition.npart, VertexSet::from([1, 2]));
        assert_eq!(r.decomposition.c_n, k2);
        assert!(r.decomposition.c_s.is_empty());
        assert_eq!((r.nu, r.rank, r.nullity, r.alpha), (1, 2, 0, 1));
        assert_eq!(r.inertia, Inertia::new(1, 0, 1));
        assert_eq!((r.m_count, r.a_count), (1, 2));
        assert!(r.audit_passed());
    }

    #[test]
    fn p3_and_star() {
        let r = report(&g(&[(1, 2), (2, 3)]));
        assert_eq!(r.decomposition.supp, VertexSet::from([1, 3]));
        assert_eq!(r.decomposition.core, VertexSet::from([2]));
        assert!(r.decomposition.npart.is_empty());
        assert_eq!(
            (r.nu, r.nullity, r.alpha, r.m_count, r.a_count),
            (1, 1, 2, 2, 1)
        );

        let star = g(&[(0, 1), (0, 2), (0, 3)]);
        let r = report(&star);
        assert_eq!((r.nu, r.rank, r.nullity, r.alpha), (1, 2, 2, 3));
        assert_eq!(r.inertia, Inertia::new(1, 2, 1));
        assert_eq!((r.m_count, r.a_count), (3, 1));
    }

    #[test]
    fn empty_graph_and_isolated_vertex() {
        let r = report(&Graph::empty());
        assert_eq!((r.nu, r.rank, r.nullity, r.alpha), (0, 0, 0, 0));
        assert_eq!(r.inertia, Inertia::default());
        assert_eq!((r.m_count, r.a_count), (1, 1));
        let single = Graph::new([4], []).unwrap();
        let r = report(&single);
        assert_eq!(r.decomposition.supp, VertexSet::from([4]));
        assert_eq!((r.nullity, r.alpha), (1, 1));
    }

    #[test]
    fn component_counters() {
        assert_eq!(count_component_maximum_matchings(&g(&[(1, 2), (2, 3)])), 2);
        assert_eq!(count_component_maximum_matchings(&cycle(6)), 2);
        let p4 = g(&[(1, 2), (2, 3), (3, 4)]);
        assert_eq!(count_component_maximum_independent_sets(&p4), 3);
        assert_eq!(count_component_maximum_independent_sets(&g(&[(1, 2)])), 2);
        let opts = AnalysisOptions::default();
        assert_eq!(count_maximum_matchings(&cycle(6), &opts).unwrap(), 2);
        assert_eq!(
            count_maximum_independent_sets(&g(&[(1, 2), (2, 3)]), &opts).unwrap(),
            1
        );
    }

    #[test]
    fn budget_is_enforced() {
        let p30 = Graph::from_edges((1..30).map(|i| (i, i + 1))).unwrap();
        let opts = AnalysisOptions {
            budget: 10,
            ..Default::default()
        };
        let err = analysis_report(&p30, &opts).unwrap_err();
        assert!(matches!(
            err,
            AnalysisError::OverBudget {
                index: 0,
                order: 30,
                ..
            }
        ));
    }

    #[test]
    fn rejects_non_maximum_matching_and_bad_inputs() {
        let p4 = g(&[(1, 2), (2, 3), (3, 4)]);
        let m = Matching::new([(2, 3)]).unwrap();
        assert!(matches!(
            null_decomposition(&p4, &m),
            Err(AnalysisError::NotMaximum(_))
        ));
        let c4 = cycle(4);
        let err = analysis_report(&c4, &AnalysisOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            AnalysisError::Rejected(Rejection::CycleLengthMultipleOfFour(_))
        ));
        let c5 = cycle(5);
        let unchecked = AnalysisOptions {
            unchecked: true,
            ..Default::default()
        };
        assert!(matches!(
            analysis_report(&c5, &unchecked),
            Err(AnalysisError::NotBipartite(_))
        ));
    }

    #[test]
    fn unchecked_c4_fails_its_own_audit() {
        let opts = AnalysisOptions {
            unchecked: true,
            ..Default::default()
        };
        let r = analysis_report(&cycle(4), &opts).unwrap();
        assert_eq!(r.decomposition.npart.len(), 4);
        assert!(!r.certified);
        assert!(!r.audit_passed());
    }

    #[test]
    fn stability_examples() {
        let opts = AnalysisOptions::default();
        let k2 = g(&[(1, 2)]);
        let m = Matching::new([(1, 2)]).unwrap();
        let r = stability_delete_pair(&k2, &m, 1, &opts).unwrap();
        assert_eq!((r.nu, r.nullity, r.rank), (0, 0, 0));

        let c6 = cycle(6);
        let m = certify_and_match(&c6, &opts).unwrap();
        assert_eq!(m.partner(1), Some(2));
        let r = stability_delete_pair(&c6, &m, 1, &opts).unwrap();
        assert_eq!((r.nu, r.nullity, r.rank), (2, 0, 4));

        let p3 = g(&[(1, 2), (2, 3)]);
        let m = Matching::new([(1, 2)]).unwrap();
        assert_eq!(
            stability_delete_pair(&p3, &m, 1, &opts),
            Err(AnalysisError::NotInNpart(1))
        );
    }

    #[test]
    fn report_json_shape() {
        let r = report(&g(&[(1, 2), (2, 3)]));
        let v: serde_json::Value = serde_json::from_str(&r.to_json(false)).unwrap();
        assert_eq!(v["nu"], 1);
        assert_eq!(v["inertia"], serde_json::json!([1, 1, 1]));
        assert_eq!(v["supp"], serde_json::json!([1, 3]));
        assert_eq!(v["s_components"], serde_json::json!([[1, 2, 3]]));
        assert_eq!(v["n_components"], serde_json::json!([]));
        assert_eq!(v["matching"], serde_json::json!([[1, 2]]));
        assert!(v["audit"]
            .as_array()
            .unwrap()
            .iter()
            .all(|a| a["pass"] == true));
    }
}
