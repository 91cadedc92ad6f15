//! Acceptance criteria, one line each. Run with
//! `cargo test -p nulldecomp --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use nulldecomp::decomposition::{self, AnalysisOptions};
use nulldecomp::generator::{generate, Family, GenSpec};
use nulldecomp::graph::{Graph, Vertex, VertexSet};
use nulldecomp::invariants::{check_instance, InvariantOptions};
use nulldecomp::linalg::{self, int, Inertia, RationalMatrix, RationalVector};
use nulldecomp::matching::{self, Matching};
use nulldecomp::null_basis;
use nulldecomp::oracles;
use nulldecomp::validate::{self, Rejection, Validation};

const G1: &str = include_str!("fixtures/g1.el");
const G3: &str = include_str!("fixtures/g3.el");
const H: &str = include_str!("fixtures/h.el");
const C4: &str = include_str!("fixtures/c4.el");

type Outcome = Result<String, String>;

struct Suite {
    failed: usize,
}

impl Suite {
    fn criterion(&mut self, id: &str, title: &str, body: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = body();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] {id} {title}: {detail} ({})", ms(elapsed)),
            Err(detail) => {
                self.failed += 1;
                println!("[FAIL] {id} {title}: {detail} ({})", ms(elapsed));
            }
        }
    }
}

fn ms(d: Duration) -> String {
    format!("{:.1} ms", d.as_secs_f64() * 1e3)
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn set(items: impl IntoIterator<Item = Vertex>) -> VertexSet {
    items.into_iter().collect()
}

fn load(text: &str) -> Graph {
    Graph::parse(text).expect("fixture parses")
}

fn g1_analysis() -> Outcome {
    let start = Instant::now();
    let g = load(G1);
    let r = decomposition::analysis_report(&g, &AnalysisOptions::default())
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let d = &r.decomposition;
    let supp = set([
        2, 3, 7, 8, 9, 10, 13, 14, 15, 21, 22, 23, 24, 25, 26, 27, 28,
    ]);
    let core = set([1, 4, 5, 6, 11, 12, 16, 17, 18, 19, 20]);
    let npart = set(29..=56);
    check((g.order(), g.size()) == (56, 60), || {
        format!("fixture has {} vertices, {} edges", g.order(), g.size())
    })?;
    check(d.supp == supp, || format!("supp {:?}", d.supp))?;
    check(d.core == core, || format!("core {:?}", d.core))?;
    check(d.npart == npart, || format!("npart {:?}", d.npart))?;
    let values = (r.nu, r.rank, r.nullity, r.alpha, r.inertia);
    check(values == (25, 50, 6, 31, Inertia::new(25, 6, 25)), || {
        format!("{values:?}")
    })?;
    check(r.audit_passed(), || format!("audit {:?}", r.audit))?;
    check(elapsed < Duration::from_secs(1), || {
        format!("took {}", ms(elapsed))
    })?;
    Ok(format!(
        "|supp|=17 |core|=11 |npart|=28, nu=25 rank=50 nullity=6 alpha=31 inertia=(25,6,25) in {}",
        ms(elapsed)
    ))
}

fn g1_matching_count() -> Outcome {
    let g = load(G1);
    let opts = AnalysisOptions::default();
    let by_formula =
        decomposition::count_maximum_matchings(&g, &opts).map_err(|e| e.to_string())?;
    let m = decomposition::certify_and_match(&g, &opts).map_err(|e| e.to_string())?;
    let d = decomposition::null_decomposition(&g, &m).map_err(|e| e.to_string())?;
    let mut factors = Vec::new();
    for h in d.s_components.iter().chain(&d.n_components) {
        let all = oracles::enumerate_maximum_matchings(h, 24).map_err(|e| e.to_string())?;
        factors.push(all.len() as u128);
    }
    let by_oracle: u128 = factors.iter().product();
    check(by_formula == 2880, || format!("formula gives {by_formula}"))?;
    check(by_oracle == 2880, || {
        format!("oracle gives {by_oracle} from {factors:?}")
    })?;
    let factors: Vec<String> = factors.iter().map(u128::to_string).collect();
    Ok(format!("formula 2880, oracle {} = 2880", factors.join("·")))
}

fn worked_example() -> Outcome {
    let h = load(H);
    let order: [Vertex; 7] = [7, 4, 5, 6, 8, 9, 10];
    let printed_h = RationalMatrix::square_from_ints(
        &order,
        &[
            vec![0, 1, 0, 1, 0, 0, 0],
            vec![1, 0, 0, 0, 1, 0, 0],
            vec![0, 0, 0, 0, 1, 1, 0],
            vec![1, 0, 0, 0, 0, 1, 1],
            vec![0, 1, 1, 0, 0, 0, 0],
            vec![0, 0, 1, 1, 0, 0, 0],
            vec![0, 0, 0, 1, 0, 0, 0],
        ],
    )
    .map_err(|e| e.to_string())?;
    let rest: [Vertex; 6] = [4, 5, 6, 8, 9, 10];
    let printed_h_prime = RationalMatrix::square_from_ints(
        &rest,
        &[
            vec![0, 0, 0, 1, 0, 0],
            vec![0, 0, 0, 1, 1, 0],
            vec![0, 0, 0, 0, 1, 1],
            vec![1, 1, 0, 0, 0, 0],
            vec![0, 1, 1, 0, 0, 0],
            vec![0, 0, 1, 0, 0, 0],
        ],
    )
    .map_err(|e| e.to_string())?;
    let a_h = linalg::adjacency_matrix(&h, &order).map_err(|e| e.to_string())?;
    let h_prime = h.without(&set([7]));
    let a_h_prime = linalg::adjacency_matrix(&h_prime, &rest).map_err(|e| e.to_string())?;
    check(a_h == printed_h, || {
        "A(H) differs from the printed matrix".into()
    })?;
    check(a_h_prime == printed_h_prime, || {
        "A(H') differs from the printed matrix".into()
    })?;

    // H sits inside G1 with the matching drawn in the figure.
    let g1 = load(G1);
    let m1 = Matching::in_graph(
        &g1,
        [
            (1, 2),
            (4, 8),
            (5, 9),
            (6, 10),
            (11, 14),
            (12, 15),
            (16, 22),
            (17, 23),
            (18, 25),
            (19, 26),
            (20, 27),
            (29, 30),
            (31, 32),
            (33, 34),
            (35, 36),
            (37, 38),
            (39, 40),
            (41, 42),
            (43, 44),
            (45, 46),
            (47, 48),
            (49, 50),
            (51, 52),
            (53, 54),
            (55, 56),
        ],
    )
    .map_err(|e| e.to_string())?;
    check(matching::is_maximum(&g1, &m1), || {
        "figure matching is not maximum".into()
    })?;
    let reach = null_basis::reach_subgraph(&g1, &m1, 7).map_err(|e| e.to_string())?;
    check(reach == h, || {
        format!("reach subgraph of 7 is {:?}", reach.labels())
    })?;

    let y = null_basis::local_null_vector(&g1, &m1, 7).map_err(|e| e.to_string())?;
    let expected: Vec<_> = [-1, 0, 0, 0, 1, -1, 2].into_iter().map(int).collect();
    let got = y.values_in(&order).map_err(|e| e.to_string())?;
    check(got == expected, || format!("y = {y}"))?;
    check(
        a_h.mul_vec(&y).map_err(|e| e.to_string())?.is_zero(),
        || "A(H) y != 0".into(),
    )?;

    let misprinted = RationalVector::from_ints(order.iter().copied().zip([-1, 0, 0, 0, -1, 1, 2]));
    let residual = a_h.mul_vec(&misprinted).map_err(|e| e.to_string())?;
    check(!residual.is_zero(), || {
        "misprinted vector unexpectedly lies in Null(H)".into()
    })?;
    let bad_rows: Vec<Vertex> = residual.support().into_iter().collect();

    let lifted = null_basis::null_vector_for(&g1, &m1, 7).map_err(|e| e.to_string())?;
    check(
        linalg::adjacency(&g1)
            .mul_vec(&lifted)
            .map_err(|e| e.to_string())?
            .is_zero(),
        || "lifted vector not in Null(G1)".into(),
    )?;
    Ok(format!(
        "A(H), A(H') match; y = (-1,0,0,0,1,-1,2) with A(H)y = 0; printed (-1,0,0,0,-1,1,2) fails at rows {bad_rows:?}"
    ))
}

fn g3_sets() -> Outcome {
    let g = load(G3);
    let verdict = validate::check_c4kfree_bipartite(&g, validate::DEFAULT_CYCLE_CAP);
    let witness = match &verdict {
        Validation::Rejected(
            r @ (Rejection::OddCycle(_) | Rejection::CycleLengthMultipleOfFour(_)),
        ) => r.witness().clone(),
        other => return Err(format!("validator said {other:?}")),
    };
    check(witness.is_valid_in(&g), || {
        format!("bad witness {witness:?}")
    })?;
    let ns = oracles::nullspace_decomposition(&g);
    let ge = oracles::gallai_edmonds_decomposition(&g, 24).map_err(|e| e.to_string())?;
    let zito = oracles::independence_decomposition(&g, 24).map_err(|e| e.to_string())?;
    let items = [
        ("supp", &ns.always, set(2..=8)),
        ("core", &ns.never, set([1, 5, 6, 7, 8])),
        ("npart", &ns.sometimes, set(9..=13)),
        ("D", &ge.always, set([2, 3, 4, 9, 10, 11, 12, 13])),
        ("A", &ge.never, set([1])),
        ("C", &ge.sometimes, set([5, 6, 7, 8])),
        ("every MIS", &zito.always, set([2, 3, 4])),
        ("no MIS", &zito.never, set([1])),
        ("supp ∩ core", &ns.overlap, set([5, 6, 7, 8])),
    ];
    for (name, got, want) in items {
        check(*got == want, || {
            format!("{name} = {got:?}, expected {want:?}")
        })?;
    }
    Ok(format!(
        "rejected (witness length {}); all eight sets and supp ∩ core = {{5,6,7,8}} reproduced",
        witness.length
    ))
}

fn property_spec(i: usize) -> GenSpec {
    let n = 1 + i % 20;
    let extra_edges = [0, 1, 2, 3, 5][(i / 20) % 5];
    GenSpec {
        n,
        extra_edges,
        family: Family::C4kFree,
        seed: (i / 100) as u64,
    }
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let opts = InvariantOptions::default();
    let mut seen = BTreeSet::new();
    let (mut with_cycles, mut with_npart, mut singular) = (0, 0, 0);
    let mut i = 0;
    while seen.len() < 600 {
        let spec = property_spec(i);
        i += 1;
        let g = generate(&spec);
        if !seen.insert(g.to_edge_list()) {
            continue;
        }
        let summary = check_instance(&g, &opts).map_err(|v| format!("{spec}: {v}"))?;
        with_cycles += usize::from(g.size() >= g.order() && g.order() > 0);
        with_npart += usize::from(summary.npart > 0);
        singular += usize::from(summary.nullity > 0);
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(60), || {
        format!("took {}", ms(elapsed))
    })?;
    Ok(format!(
        "{} distinct certified instances (n ≤ 20; {with_cycles} with cycles, {with_npart} with npart, {singular} singular), zero violations",
        seen.len()
    ))
}

fn perfect_matching_characterization() -> Outcome {
    let opts = AnalysisOptions::default();
    let (mut perfect, mut total) = (0, 0);
    for i in 0..200u64 {
        let spec = GenSpec {
            n: 2 + (i as usize % 19),
            extra_edges: (i as usize / 19) % 4,
            family: if i % 3 == 0 {
                Family::Tree
            } else {
                Family::C4kFree
            },
            seed: 1000 + i,
        };
        let g = generate(&spec);
        let g = if i % 2 == 0 { with_pendants(&g) } else { g };
        if !validate::check_c4kfree_bipartite(&g, validate::DEFAULT_CYCLE_CAP).is_certified() {
            return Err(format!("{spec}: instance not certified"));
        }
        let m = decomposition::certify_and_match(&g, &opts).map_err(|e| e.to_string())?;
        let d = decomposition::null_decomposition(&g, &m).map_err(|e| e.to_string())?;
        let has_perfect = 2 * m.len() == g.order();
        let full_rank = linalg::rank(&linalg::adjacency(&g)) == g.order();
        let all_npart = d.npart.len() == g.order();
        check(has_perfect == full_rank && full_rank == all_npart, || {
            format!("{spec}: perfect={has_perfect} full_rank={full_rank} G=C_N {all_npart}")
        })?;
        perfect += usize::from(has_perfect);
        total += 1;
    }
    Ok(format!(
        "{total} instances ({perfect} with a perfect matching), zero disagreements"
    ))
}

/// Hangs a new leaf off every vertex. The result has a perfect matching
/// and no new cycles.
fn with_pendants(g: &Graph) -> Graph {
    let offset = g.vertices().max().unwrap_or(0);
    Graph::new(
        g.vertices(),
        g.edges().chain(g.vertices().map(|v| (v, v + offset))),
    )
    .expect("simple")
}

fn inertia_by_eigenvalues() -> Outcome {
    const TOL: f64 = 1e-8;
    let opts = AnalysisOptions::default();
    let mut nonzero_nullity = 0;
    for i in 0..50u64 {
        let spec = GenSpec {
            n: 2 + (i as usize % 13),
            extra_edges: 1 + (i as usize % 3),
            family: Family::C4kFree,
            seed: 5000 + i,
        };
        let g = generate(&spec);
        let r = decomposition::analysis_report(&g, &opts).map_err(|e| format!("{spec}: {e}"))?;
        let n = g.order();
        let a = DMatrix::from_fn(n, n, |i, j| {
            f64::from(u8::from(g.has_edge(g.label(i), g.label(j))))
        });
        let eig = a.symmetric_eigenvalues();
        let counted = Inertia::new(
            eig.iter().filter(|&&l| l < -TOL).count(),
            eig.iter().filter(|&&l| l.abs() < TOL).count(),
            eig.iter().filter(|&&l| l > TOL).count(),
        );
        let algebraic =
            linalg::inertia_algebraic(&linalg::adjacency(&g)).map_err(|e| e.to_string())?;
        let formula = Inertia::new(r.nu, r.nullity, r.nu);
        check(counted == algebraic && algebraic == formula, || {
            format!("{spec}: eigen {counted:?}, algebraic {algebraic:?}, formula {formula:?}")
        })?;
        nonzero_nullity += usize::from(r.nullity > 0);
    }
    Ok(format!(
        "50 instances (n ≤ 14, {nonzero_nullity} singular), zero mismatches at tolerance 1e-8"
    ))
}

fn c4_control() -> Outcome {
    let c4 = load(C4);
    let verdict = validate::check_c4kfree_bipartite(&c4, validate::DEFAULT_CYCLE_CAP);
    check(
        matches!(
            verdict,
            Validation::Rejected(Rejection::CycleLengthMultipleOfFour(_))
        ),
        || format!("validator said {verdict:?}"),
    )?;
    let ns = oracles::nullspace_decomposition(&c4);
    let v = c4.vertex_set();
    check(ns.always == v && ns.never == v, || {
        format!("supp {:?}, core {:?}", ns.always, ns.never)
    })?;
    Ok("validator rejects; supp = core = V = {1,2,3,4}".into())
}

fn main() -> ExitCode {
    let mut suite = Suite { failed: 0 };
    suite.criterion("AC1", "G1 decomposition and closed forms", g1_analysis);
    suite.criterion("AC2", "m(G1) = 2880", g1_matching_count);
    suite.criterion("AC3", "worked null-vector example", worked_example);
    suite.criterion("AC4", "G3 out-of-class sets", g3_sets);
    suite.criterion("AC5", "property suite", property_suite);
    suite.criterion(
        "AC6",
        "perfect matching characterization",
        perfect_matching_characterization,
    );
    suite.criterion(
        "AC7",
        "inertia against floating-point eigenvalues",
        inertia_by_eigenvalues,
    );
    suite.criterion("AC8", "C4 control", c4_control);
    if suite.failed == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of 8 criteria failed", suite.failed);
        ExitCode::FAILURE
    }
}
