//! Every structural check for a single instance, run end to end.
//!
//! `check_instance` certifies the graph, runs the pipeline and then
//! cross-examines each result against the exact algebra and the brute-force
//! oracles. The fuzzer and the acceptance suite both drive this.

use std::fmt;

use thiserror::Error;

use crate::decomposition::{self, AnalysisOptions, NullDecomposition};
use crate::generator::Rng;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::linalg::{self, int, RationalVector};
use crate::matching::{self, Matching, MatchingError};
use crate::null_basis::{self, NullBasis};
use crate::oracles;
use crate::validate::{self, Validation};

/// A failed check: which one, and what was seen.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{check}: {detail}")]
pub struct Violation {
    pub check: &'static str,
    pub detail: String,
}

fn fail(check: &'static str, detail: impl fmt::Display) -> Violation {
    Violation {
        check,
        detail: detail.to_string(),
    }
}

fn ensure(ok: bool, check: &'static str, detail: impl FnOnce() -> String) -> Result<(), Violation> {
    if ok {
        Ok(())
    } else {
        Err(fail(check, detail()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvariantOptions {
    pub cycle_cap: usize,
    /// Largest graph the whole-graph oracles are run on.
    pub oracle_budget: usize,
    /// Largest core for which the Hall bound is checked on every subset.
    pub hall_exhaustive: usize,
    pub hall_samples: usize,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions {
            cycle_cap: validate::DEFAULT_CYCLE_CAP,
            oracle_budget: 24,
            hall_exhaustive: 16,
            hall_samples: 4096,
        }
    }
}

/// What a passing instance looked like.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSummary {
    pub order: usize,
    pub size: usize,
    pub nu: usize,
    pub nullity: usize,
    pub npart: usize,
    pub m_count: u128,
    pub a_count: u128,
    pub matchings_checked: usize,
}

pub fn check_instance(g: &Graph, opts: &InvariantOptions) -> Result<InstanceSummary, Violation> {
    let bp = match validate::check_c4kfree_bipartite(g, opts.cycle_cap) {
        Validation::Certified(cert) => cert.bipartition,
        other => return Err(fail("certification", format!("{other:?}"))),
    };
    let m = matching::maximum_matching(g, &bp);
    ensure(matching::is_maximum(g, &m), "maximum matching", || {
        format!("{m:?}")
    })?;
    let d = decomposition::null_decomposition(g, &m).map_err(|e| fail("decomposition", e))?;

    check_reach_lemma(g, &m)?;
    check_partition(g, &d)?;
    check_counts(g, &m, &d)?;
    let matchings = matching_sample(g, &m, &d)?;
    for other in &matchings {
        check_matching_split(g, other, &d)?;
    }
    check_idempotence(&d)?;
    check_hall(g, &d, opts)?;
    check_stability(g, &m, &d)?;
    check_c_n(&d, opts)?;
    check_linear_algebra(g, &d)?;
    let basis = null_basis::null_basis(g, &m).map_err(|e| fail("null basis", e))?;
    check_basis(g, &m, &d, &basis)?;
    let report = decomposition::report_with_matching(
        g,
        &m,
        &AnalysisOptions {
            budget: opts.oracle_budget,
            ..Default::default()
        },
    )
    .map_err(|e| fail("report", e))?;
    ensure(report.audit_passed(), "self-audit", || {
        format!("{:?}", report.audit)
    })?;
    if g.order() <= opts.oracle_budget {
        check_oracles(g, &d, report.m_count, report.a_count, opts)?;
    }
    Ok(InstanceSummary {
        order: g.order(),
        size: g.size(),
        nu: m.len(),
        nullity: d.nullity(),
        npart: d.npart.len(),
        m_count: report.m_count,
        a_count: report.a_count,
        matchings_checked: matchings.len(),
    })
}

/// The five items about `R_e(v, M)` and `R_o(v, M)` for each `v ∈ U(M)`.
pub fn check_reach_lemma(g: &Graph, m: &Matching) -> Result<(), Violation> {
    let free = matching::unsaturated(g, m);
    for &v in &free {
        let r = matching::alternating_reach(g, m, &VertexSet::from([v]))
            .map_err(|e| fail("reach", e))?;
        ensure(r.even.is_disjoint(&r.odd), "R_e ∩ R_o = ∅", || {
            format!("v={v} {r:?}")
        })?;
        ensure(r.odd.is_disjoint(&free), "R_o ∩ U(M) = ∅", || {
            format!("v={v} {r:?}")
        })?;
        ensure(r.even.len() == r.odd.len() + 1, "|R_e| = |R_o| + 1", || {
            format!("v={v} {r:?}")
        })?;
        ensure(
            g.neighborhood(&r.even).is_subset(&r.odd),
            "N(R_e) ⊆ R_o",
            || format!("v={v} {r:?}"),
        )?;
        ensure(
            g.is_independent(&r.even) && g.is_independent(&r.odd),
            "R_e, R_o independent",
            || format!("v={v} {r:?}"),
        )?;
    }
    Ok(())
}

fn check_partition(g: &Graph, d: &NullDecomposition) -> Result<(), Violation> {
    let sets = || format!("supp={:?} core={:?} npart={:?}", d.supp, d.core, d.npart);
    ensure(d.supp.is_disjoint(&d.core), "supp ∩ core = ∅", sets)?;
    let mut all = d.supp.clone();
    all.extend(&d.core);
    all.extend(&d.npart);
    ensure(
        all == g.vertex_set() && d.npart.is_disjoint(&d.supp) && d.npart.is_disjoint(&d.core),
        "partition",
        sets,
    )?;
    ensure(g.neighborhood(&d.supp) == d.core, "core = N(supp)", sets)?;
    ensure(g.is_independent(&d.supp), "supp independent", sets)?;
    ensure(d.npart.len().is_multiple_of(2), "npart even", sets)
}

fn check_counts(g: &Graph, m: &Matching, d: &NullDecomposition) -> Result<(), Violation> {
    let n = g.order();
    let free = matching::unsaturated(g, m).len();
    ensure(d.nu() == m.len(), "nu = core + npart/2", || {
        format!("{} vs {}", d.nu(), m.len())
    })?;
    ensure(d.nullity() == free, "nullity = |U(M)|", || {
        format!("{} vs {free}", d.nullity())
    })?;
    let r = linalg::rank(&linalg::adjacency(g));
    ensure(r == 2 * m.len(), "rank = 2nu", || {
        format!("rank {r}, nu {}", m.len())
    })?;
    ensure(n - r == d.nullity(), "nullity = |V| - 2nu", || {
        format!("{} vs {}", n - r, d.nullity())
    })?;
    let perfect = 2 * m.len() == n;
    ensure(
        perfect == (r == n) && perfect == (d.npart.len() == n),
        "perfect matching ⇔ nonsingular ⇔ G = C_N",
        || format!("perfect={perfect} rank={r} npart={}", d.npart.len()),
    )?;
    let inertia =
        linalg::inertia_algebraic(&linalg::adjacency(g)).map_err(|e| fail("inertia", e))?;
    ensure(
        inertia == d.inertia(),
        "inertia = (nu, nullity, nu)",
        || format!("{inertia:?} vs {:?}", d.inertia()),
    )?;
    ensure(
        d.alpha() == d.nullity() + d.nu(),
        "alpha = nullity + nu",
        || format!("{} vs {}", d.alpha(), d.nullity() + d.nu()),
    )
}

/// The canonical matching plus one retargeted matching per support vertex,
/// each checked to be maximum, to free its target and to give the same
/// decomposition.
fn matching_sample(
    g: &Graph,
    m: &Matching,
    d: &NullDecomposition,
) -> Result<Vec<Matching>, Violation> {
    let mut out = vec![m.clone()];
    for &v in &d.supp {
        let m2 = matching::retarget_matching(g, m, v)
            .map_err(|e| fail("retarget", format!("v={v}: {e}")))?;
        ensure(
            m2.len() == m.len() && !m2.is_saturated(v),
            "retarget frees v",
            || format!("v={v} {m2:?}"),
        )?;
        ensure(
            matching::is_maximum(g, &m2),
            "retarget keeps maximality",
            || format!("v={v}"),
        )?;
        let d2 = decomposition::null_decomposition(g, &m2).map_err(|e| fail("decomposition", e))?;
        ensure(
            d2.supp == d.supp && d2.core == d.core && d2.npart == d.npart,
            "matching independence",
            || format!("v={v}: {:?} vs {:?}", d2.supp, d.supp),
        )?;
        check_reach_lemma(g, &m2)?;
        out.push(m2);
    }
    for &v in d.core.iter().chain(&d.npart) {
        ensure(
            matches!(
                matching::retarget_matching(g, m, v),
                Err(MatchingError::NotInSupport(_))
            ),
            "only support vertices can be freed",
            || format!("v={v}"),
        )?;
    }
    Ok(out)
}

fn check_matching_split(g: &Graph, m: &Matching, d: &NullDecomposition) -> Result<(), Violation> {
    let on_s = m.restricted_to(&d.c_s);
    let on_n = m.restricted_to(&d.c_n);
    let nu_s = matching_number(&d.c_s);
    ensure(on_s.len() == nu_s, "M ∩ E(C_S) maximum in C_S", || {
        format!("{} vs {nu_s}", on_s.len())
    })?;
    ensure(
        2 * on_n.len() == d.npart.len(),
        "M ∩ E(C_N) perfect in C_N",
        || format!("{} edges on {} vertices", on_n.len(), d.npart.len()),
    )?;
    ensure(
        on_s.len() + on_n.len() == m.len(),
        "no M edge joins core to npart",
        || format!("{m:?}"),
    )?;
    for &c in &d.core {
        ensure(
            m.partner(c).is_some_and(|p| d.supp.contains(&p)),
            "M(core) ⊆ supp",
            || format!("vertex {c}"),
        )?;
    }
    for &v in &d.npart {
        ensure(
            m.partner(v).is_some_and(|p| d.npart.contains(&p)),
            "M(npart) = npart",
            || format!("vertex {v}"),
        )?;
    }
    ensure(
        g.order() == d.c_s.order() + d.c_n.order(),
        "C_S and C_N cover V",
        String::new,
    )
}

fn matching_number(h: &Graph) -> usize {
    match h.bipartition() {
        Ok(bp) => matching::maximum_matching(h, &bp).len(),
        Err(_) => unreachable!("subgraphs of bipartite graphs are bipartite"),
    }
}

fn decompose(h: &Graph) -> Result<NullDecomposition, Violation> {
    let bp = h
        .bipartition()
        .map_err(|w| fail("bipartition", format!("{w:?}")))?;
    let m = matching::maximum_matching(h, &bp);
    decomposition::null_decomposition(h, &m).map_err(|e| fail("decomposition", e))
}

fn check_idempotence(d: &NullDecomposition) -> Result<(), Violation> {
    let ds = decompose(&d.c_s)?;
    ensure(
        ds.supp == d.supp && ds.core == d.core && ds.npart.is_empty(),
        "idempotence on C_S",
        || format!("{:?} {:?} {:?}", ds.supp, ds.core, ds.npart),
    )?;
    let dn = decompose(&d.c_n)?;
    ensure(dn.npart == d.npart, "idempotence on C_N", || {
        format!("{:?}", dn.npart)
    })?;
    for h in &d.s_components {
        let dh = decompose(h)?;
        let vs = h.vertex_set();
        ensure(
            dh.supp == d.supp.intersection(&vs).copied().collect()
                && dh.core == d.core.intersection(&vs).copied().collect(),
            "per-component restriction",
            || format!("component {:?}", h.labels()),
        )?;
    }
    Ok(())
}

fn check_hall(g: &Graph, d: &NullDecomposition, opts: &InvariantOptions) -> Result<(), Violation> {
    let core: Vec<Vertex> = d.core.iter().copied().collect();
    let check = |mask: u64| -> Result<(), Violation> {
        let u: VertexSet = (0..core.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| core[i])
            .collect();
        let reach = g.neighborhood(&u).intersection(&d.supp).count();
        ensure(
            u.len() <= reach,
            "Hall bound |U| ≤ |N(U) ∩ supp|",
            || format!("U={u:?}"),
        )
    };
    if core.len() <= opts.hall_exhaustive {
        (0..1u64 << core.len()).try_for_each(check)
    } else {
        let mut rng = Rng::new(core.len() as u64);
        let full = if core.len() >= 64 {
            u64::MAX
        } else {
            (1u64 << core.len()) - 1
        };
        (0..opts.hall_samples).try_for_each(|_| check(rng.next_u64() & full))
    }
}

fn check_stability(g: &Graph, m: &Matching, d: &NullDecomposition) -> Result<(), Violation> {
    let rank = linalg::rank(&linalg::adjacency(g));
    let opts = AnalysisOptions::default();
    for &v in &d.npart {
        let r = decomposition::stability_delete_pair(g, m, v, &opts)
            .map_err(|e| fail("stability", e))?;
        ensure(
            r.nu + 1 == d.nu() && r.nullity == d.nullity() && r.rank + 2 == d.rank(),
            "stability: nu − 1, nullity fixed, rank − 2",
            || format!("v={v}: nu {} nullity {} rank {}", r.nu, r.nullity, r.rank),
        )?;
        let partner = m.partner(v).expect("npart is saturated");
        let reduced = g.without(&VertexSet::from([v, partner]));
        let r_alg = linalg::rank(&linalg::adjacency(&reduced));
        ensure(
            r_alg + 2 == rank,
            "stability: exact rank drops by 2",
            || format!("v={v}"),
        )?;
        ensure(
            r.decomposition.supp == d.supp && r.decomposition.core == d.core,
            "stability: supp and core unchanged",
            || format!("v={v}"),
        )?;
    }
    Ok(())
}

fn check_c_n(d: &NullDecomposition, opts: &InvariantOptions) -> Result<(), Violation> {
    if d.c_n.order() > opts.oracle_budget {
        return Ok(());
    }
    let sets = oracles::enumerate_max_independent_sets(&d.c_n, opts.oracle_budget)
        .map_err(|e| fail("oracle", e))?;
    let alpha = sets.first().map_or(0, |s| s.len());
    ensure(alpha == d.npart.len() / 2, "alpha(C_N) = npart/2", || {
        format!("{alpha} vs {}", d.npart.len())
    })?;
    let bp = d
        .c_n
        .bipartition()
        .map_err(|w| fail("bipartition", format!("{w:?}")))?;
    ensure(
        bp.side_x.len() == alpha && bp.side_y.len() == alpha,
        "sides of C_N are maximum independent sets",
        || format!("{:?}", bp),
    )
}

fn lifted(vectors: Vec<RationalVector>, g: &Graph) -> Result<Vec<RationalVector>, Violation> {
    vectors
        .iter()
        .map(|x| null_basis::lift(x, g).map_err(|e| fail("lift", e)))
        .collect()
}

fn check_linear_algebra(g: &Graph, d: &NullDecomposition) -> Result<(), Violation> {
    let a = linalg::adjacency(g);
    let a_s = linalg::adjacency(&d.c_s);
    let a_n = linalg::adjacency(&d.c_n);
    let (r, r_s, r_n) = (linalg::rank(&a), linalg::rank(&a_s), linalg::rank(&a_n));
    let by_component: usize = d
        .s_components
        .iter()
        .chain(&d.n_components)
        .map(|h| linalg::rank(&linalg::adjacency(h)))
        .sum();
    ensure(
        r == r_s + r_n && r == by_component,
        "rank additivity",
        || format!("{r} vs {r_s} + {r_n}, components {by_component}"),
    )?;

    let mut columns = lifted(linalg::column_space_basis(&a_s), g)?;
    columns.extend(lifted(linalg::column_space_basis(&a_n), g)?);
    let joint = linalg::rank_of_vectors(&columns).map_err(|e| fail("column space", e))?;
    ensure(joint == r, "column space direct sum", || {
        format!("{joint} vs {r}")
    })?;
    let full_columns = linalg::column_space_basis(&a);
    ensure(
        linalg::same_span(&columns, &full_columns).unwrap_or(false),
        "column space equals lifted pieces",
        String::new,
    )?;

    let null_g = linalg::nullspace_basis(&a);
    let null_s = lifted(linalg::nullspace_basis(&a_s), g)?;
    ensure(
        linalg::same_span(&null_g, &null_s).unwrap_or(false),
        "Null(G) = lift of Null(C_S)",
        String::new,
    )?;
    ensure(
        linalg::nullspace_basis(&a_n).is_empty(),
        "C_N nonsingular",
        String::new,
    )
}

fn check_basis(
    g: &Graph,
    m: &Matching,
    d: &NullDecomposition,
    basis: &NullBasis,
) -> Result<(), Violation> {
    let a = linalg::adjacency(g);
    ensure(basis.len() == d.nullity(), "basis size = nullity", || {
        format!("{}", basis.len())
    })?;
    for (anchor, z) in basis.iter() {
        let az = a.mul_vec(z).map_err(|e| fail("A z", e))?;
        ensure(az.is_zero(), "A z = 0", || format!("anchor {anchor}"))?;
        ensure(
            z.support().is_subset(&d.supp),
            "support(z) ⊆ supp",
            || format!("anchor {anchor}"),
        )?;
        for &other in &basis.anchors {
            let expected = if other == anchor { int(-1) } else { int(0) };
            ensure(
                z.get(other) == Some(&expected),
                "anchor block is −I",
                || format!("anchor {anchor} at {other}"),
            )?;
        }
        for start in z.support() {
            let walk = null_basis::alternating_walk(g, m, z, start);
            let distinct: VertexSet = walk.iter().copied().collect();
            let last = *walk.last().expect("walk has its start");
            ensure(
                distinct.len() == walk.len(),
                "alternating walk is a path",
                || format!("{walk:?}"),
            )?;
            ensure(
                walk.len() % 2 == 1,
                "maximal alternating walk has even length",
                || format!("{walk:?}"),
            )?;
            ensure(
                !m.is_saturated(last) && d.supp.contains(&last),
                "walk ends in U(M) ∩ supp",
                || format!("{walk:?}"),
            )?;
        }
    }
    ensure(basis.support() == d.supp, "support union = supp", || {
        format!("{:?}", basis.support())
    })?;
    let algebraic = linalg::nullspace_basis(&a);
    ensure(
        linalg::same_span(&basis.vectors, &algebraic).unwrap_or(false),
        "constructed and algebraic null bases span the same space",
        String::new,
    )?;
    let components: Vec<VertexSet> = d.s_components.iter().map(|h| h.vertex_set()).collect();
    let algebraic_s = linalg::nullspace_basis(&linalg::adjacency(&d.c_s));
    for z in algebraic_s.iter().chain(&basis.vectors) {
        let s = z.support();
        ensure(
            components.iter().filter(|c| !c.is_disjoint(&s)).count() == 1,
            "null vectors live in one component of C_S",
            || format!("{s:?}"),
        )?;
    }
    Ok(())
}

fn check_oracles(
    g: &Graph,
    d: &NullDecomposition,
    m_count: u128,
    a_count: u128,
    opts: &InvariantOptions,
) -> Result<(), Violation> {
    let budget = opts.oracle_budget;
    let cmp = oracles::compare_decompositions(g, budget).map_err(|e| fail("oracle", e))?;
    for t in [&cmp.independence, &cmp.gallai_edmonds, &cmp.null_space] {
        ensure(
            t.always == d.supp
                && t.never == d.core
                && t.sometimes == d.npart
                && t.overlap.is_empty(),
            "three-way decomposition equivalence",
            || {
                format!(
                    "{:?}: {:?} {:?} {:?}",
                    t.source, t.always, t.never, t.sometimes
                )
            },
        )?;
    }
    let sets = oracles::enumerate_max_independent_sets(g, budget).map_err(|e| fail("oracle", e))?;
    ensure(
        sets.len() as u128 == a_count,
        "a(G) product formula",
        || format!("{} vs {a_count}", sets.len()),
    )?;
    for s in &sets {
        ensure(
            s.is_superset(&d.supp) && s.is_disjoint(&d.core),
            "I ⊇ supp and I ∩ core = ∅",
            || format!("{s:?}"),
        )?;
        ensure(
            s.intersection(&d.npart).count() == d.npart.len() / 2,
            "I ∩ npart maximum in C_N",
            || format!("{s:?}"),
        )?;
        ensure(s.len() == d.alpha(), "alpha = supp + npart/2", || {
            format!("{s:?}")
        })?;
    }
    let matchings =
        oracles::enumerate_maximum_matchings(g, budget).map_err(|e| fail("oracle", e))?;
    ensure(
        matchings.len() as u128 == m_count,
        "m(G) product formula",
        || format!("{} vs {m_count}", matchings.len()),
    )?;
    for mm in &matchings {
        check_matching_split(g, mm, d)?;
    }
    Ok(())
}
