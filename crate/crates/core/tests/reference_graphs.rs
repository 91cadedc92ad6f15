use nulldecomp::decomposition::{self, AnalysisOptions};
use nulldecomp::graph::{Graph, Vertex, VertexSet};
use nulldecomp::linalg::{self, Inertia, Rational, RationalVector};
use nulldecomp::matching::{self, Matching};
use nulldecomp::null_basis;
use nulldecomp::oracles;
use nulldecomp::validate::{self, CycleLengths, Rejection, Validation};

const G1: &str = include_str!("fixtures/g1.el");
const G2: &str = include_str!("fixtures/g2.el");
const G3: &str = include_str!("fixtures/g3.el");
const H: &str = include_str!("fixtures/h.el");

fn load(text: &str) -> Graph {
    Graph::parse(text).unwrap()
}

fn set(items: impl IntoIterator<Item = Vertex>) -> VertexSet {
    items.into_iter().collect()
}

fn g1_supp() -> VertexSet {
    set([
        2, 3, 7, 8, 9, 10, 13, 14, 15, 21, 22, 23, 24, 25, 26, 27, 28,
    ])
}

fn g1_core() -> VertexSet {
    set([1, 4, 5, 6, 11, 12, 16, 17, 18, 19, 20])
}

fn m1(g: &Graph) -> Matching {
    Matching::in_graph(
        g,
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
    .unwrap()
}

/// The drawn null vector of G1.
fn x1(g: &Graph) -> RationalVector {
    let mut x = RationalVector::zeros(g.vertices());
    for (v, value) in [
        (2, 1),
        (8, 1),
        (25, 1),
        (27, 1),
        (3, -1),
        (7, -1),
        (9, -1),
        (26, -1),
        (28, -1),
        (10, 2),
    ] {
        x.set(v, linalg::int(value));
    }
    x
}

fn value(x: &RationalVector, v: Vertex) -> Rational {
    x.get(v).cloned().unwrap()
}

/// Matching edges at even positions, `x` alternating in sign along the
/// even positions.
fn is_alternating_walk(g: &Graph, m: &Matching, x: &RationalVector, walk: &[Vertex]) -> bool {
    let zero = linalg::int(0);
    walk.windows(2).all(|w| g.has_edge(w[0], w[1]))
        && (0..walk.len() / 2).all(|i| m.contains_edge(walk[2 * i], walk[2 * i + 1]))
        && (0..(walk.len() - 1) / 2)
            .all(|i| value(x, walk[2 * i]) * value(x, walk[2 * i + 2]) < zero)
}

#[test]
fn g1_shape_and_matching() {
    let g = load(G1);
    assert_eq!((g.order(), g.size()), (56, 60));
    let bp = g.bipartition().unwrap();
    assert_eq!(matching::maximum_matching(&g, &bp).len(), 25);
    let m = m1(&g);
    assert!(matching::is_maximum(&g, &m));
    assert_eq!(matching::unsaturated(&g, &m), set([3, 7, 13, 21, 24, 28]));
    let reach = matching::alternating_reach(&g, &m, &matching::unsaturated(&g, &m)).unwrap();
    assert_eq!(reach.even, g1_supp());
    assert_eq!(reach.odd, g1_core());
    assert!(validate::check_c4kfree_bipartite(&g, validate::DEFAULT_CYCLE_CAP).is_certified());
    assert_eq!(
        validate::enumerate_cycle_lengths(&g, validate::DEFAULT_CYCLE_CAP),
        CycleLengths::Complete([6, 10].into())
    );
}

#[test]
fn g1_decomposition_for_both_matchings() {
    let g = load(G1);
    let opts = AnalysisOptions::default();
    let canonical = decomposition::certify_and_match(&g, &opts).unwrap();
    for m in [canonical, m1(&g)] {
        let d = decomposition::null_decomposition(&g, &m).unwrap();
        assert_eq!(d.supp, g1_supp());
        assert_eq!(d.core, g1_core());
        assert_eq!(d.npart, set(29..=56));
        let n_parts: Vec<VertexSet> = d.n_components.iter().map(Graph::vertex_set).collect();
        assert_eq!(
            n_parts,
            vec![
                set([29, 30]),
                set(31..=40),
                set([41, 42]),
                set(43..=52),
                set(53..=56)
            ]
        );
        assert_eq!(d.s_components.len(), 4);
    }
}

#[test]
fn g1_report_and_counts() {
    let g = load(G1);
    let r = decomposition::analysis_report(&g, &AnalysisOptions::default()).unwrap();
    assert_eq!((r.nu, r.rank, r.nullity, r.alpha), (25, 50, 6, 31));
    assert_eq!(r.inertia, Inertia::new(25, 6, 25));
    assert_eq!(r.m_count, 2880);
    // a(G1) against enumeration on each C_N component.
    let by_oracle: u128 = r
        .decomposition
        .n_components
        .iter()
        .map(|h| {
            oracles::enumerate_max_independent_sets(h, 24)
                .unwrap()
                .len() as u128
        })
        .product();
    assert_eq!(r.a_count, by_oracle);
    let a = linalg::adjacency(&g);
    assert_eq!(
        linalg::inertia_algebraic(&a).unwrap(),
        Inertia::new(25, 6, 25)
    );
    assert!(r.audit_passed());
}

#[test]
fn g1_stability() {
    let g = load(G1);
    let m = m1(&g);
    let r = decomposition::stability_delete_pair(&g, &m, 29, &AnalysisOptions::default()).unwrap();
    assert_eq!((r.nu, r.nullity, r.rank), (24, 6, 48));
    assert!(decomposition::stability_delete_pair(&g, &m, 3, &AnalysisOptions::default()).is_err());
}

#[test]
fn g1_null_space() {
    let g = load(G1);
    let m = m1(&g);
    let a = linalg::adjacency(&g);
    let x = x1(&g);
    assert!(a.mul_vec(&x).unwrap().is_zero());

    let basis = null_basis::null_basis(&g, &m).unwrap();
    assert_eq!(basis.anchors, vec![3, 7, 13, 21, 24, 28]);
    assert_eq!(basis.support(), g1_supp());
    assert!(linalg::same_span(&basis.vectors, &linalg::nullspace_basis(&a)).unwrap());
    let mut with_x = basis.vectors.clone();
    with_x.push(x.clone());
    assert_eq!(linalg::rank_of_vectors(&with_x).unwrap(), 6);

    let d = decomposition::null_decomposition(&g, &m).unwrap();
    let on_s = null_basis::restrict(&x, &d.c_s).unwrap();
    assert!(linalg::adjacency(&d.c_s).mul_vec(&on_s).unwrap().is_zero());
    assert!(null_basis::restrict(&x, &d.c_n).unwrap().is_zero());
    assert_eq!(null_basis::lift(&on_s, &g).unwrap(), x);
}

#[test]
fn g1_walks() {
    let g = load(G1);
    let m = m1(&g);
    let x = x1(&g);
    assert!(is_alternating_walk(&g, &m, &x, &[9, 5, 8, 4, 7]));
    assert!(!is_alternating_walk(&g, &m, &x, &[10, 6, 31, 32, 33, 34]));
    for walk in [
        &[2, 1, 3][..],
        &[10, 6, 9, 5, 8, 4, 7],
        &[25, 18, 26, 19, 27, 20, 28],
    ] {
        assert!(is_alternating_walk(&g, &m, &x, walk), "{walk:?}");
        assert_eq!(walk.len() % 2, 1);
        assert!(!m.is_saturated(*walk.last().unwrap()));
    }
    for start in x.support() {
        let walk = null_basis::alternating_walk(&g, &m, &x, start);
        assert!(is_alternating_walk(&g, &m, &x, &walk), "{walk:?}");
        assert_eq!(walk.len() % 2, 1, "{walk:?}");
        assert_eq!(set(walk.iter().copied()).len(), walk.len());
    }
    assert_eq!(null_basis::alternating_walk(&g, &m, &x, 10), vec![10, 6, 7]);
}

#[test]
fn h_inside_g1() {
    let g = load(G1);
    let h = g.induced_subgraph(&set(4..=10)).unwrap();
    assert_eq!(h, load(H));
    assert_eq!(h.size(), 7);
    assert_eq!(
        validate::enumerate_cycle_lengths(&h, 100),
        CycleLengths::Complete([6].into())
    );
    let y = null_basis::null_vector_for(&g, &m1(&g), 7).unwrap();
    assert!(linalg::adjacency(&g).mul_vec(&y).unwrap().is_zero());
    assert_eq!(y.support(), set([7, 8, 9, 10]));
}

#[test]
fn g2_agrees_outside_the_class() {
    let g = load(G2);
    assert_eq!((g.order(), g.size()), (11, 13));
    let verdict = validate::check_c4kfree_bipartite(&g, validate::DEFAULT_CYCLE_CAP);
    assert!(matches!(verdict, Validation::Rejected(_)));
    let cmp = oracles::compare_decompositions(&g, 24).unwrap();
    assert!(cmp.all_agree());
    assert_eq!(cmp.null_space.always, set([4, 5, 6, 7]));
    assert_eq!(cmp.null_space.never, set([1, 2, 3]));
}

#[test]
fn g3_is_rejected_and_decompositions_differ() {
    let g = load(G3);
    assert_eq!((g.order(), g.size()), (13, 14));
    let witness = g.bipartition().unwrap_err();
    assert_eq!(set(witness.cycle.iter().copied()), set(9..=13));
    match validate::check_c4kfree_bipartite(&g, validate::DEFAULT_CYCLE_CAP) {
        Validation::Rejected(Rejection::OddCycle(w)) => {
            assert_eq!(w.length, 5);
            assert!(w.is_valid_in(&g));
        }
        other => panic!("{other:?}"),
    }
    let cmp = oracles::compare_decompositions(&g, 24).unwrap();
    assert!(!cmp.all_agree());
    let sets = oracles::enumerate_max_independent_sets(&g, 24).unwrap();
    let always = sets.iter().fold(g.vertex_set(), |acc, s| {
        acc.intersection(s).copied().collect()
    });
    assert_eq!(always, set([2, 3, 4]));
    assert_eq!(sets[0].len(), 7);
    assert_eq!(sets.len(), 10);
    let ns = oracles::nullspace_decomposition(&g);
    let support: VertexSet = linalg::nullspace_basis(&linalg::adjacency(&g))
        .iter()
        .flat_map(|x| x.support())
        .collect();
    assert_eq!(support, set(2..=8));
    assert_eq!(ns.always, support);
}

#[test]
fn small_oracle_examples() {
    let k2 = Graph::from_edges([(1, 2)]).unwrap();
    let p3 = Graph::from_edges([(1, 2), (2, 3)]).unwrap();
    assert_eq!(
        oracles::enumerate_max_independent_sets(&k2, 8).unwrap(),
        vec![set([1]), set([2])]
    );
    assert_eq!(
        oracles::enumerate_max_independent_sets(&p3, 8).unwrap(),
        vec![set([1, 3])]
    );
    let zito = oracles::independence_decomposition(&k2, 8).unwrap();
    assert!(zito.always.is_empty() && zito.never.is_empty());
    assert_eq!(zito.sometimes, set([1, 2]));
    let ge = oracles::gallai_edmonds_decomposition(&k2, 8).unwrap();
    assert_eq!(ge.sometimes, set([1, 2]));
    let ns = oracles::nullspace_decomposition(&k2);
    assert!(ns.always.is_empty() && ns.never.is_empty());
    assert_eq!(ns.sometimes, set([1, 2]));
    assert_eq!(
        oracles::enumerate_maximum_matchings(&p3, 8).unwrap().len(),
        2
    );
}
