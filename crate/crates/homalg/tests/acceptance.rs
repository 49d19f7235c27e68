//! Acceptance suite: one test per criterion, each printing a pass line.
//! Everything here is exact; the few stated wall-clock budgets are asserted
//! with the generous limits they were specified with.
//!
//! Run with `cargo test -p homalg --test acceptance -- --nocapture` to see
//! the per-criterion lines.

mod common;

use homalg::algebra::samples;
use homalg::graded::{BasisConstraint, Generator, GradedSpace};
use homalg::hochschild::{self, HochschildModel, Variant, DEFAULT_SIZE_LIMIT};
use homalg::linalg::{ChainComplex, SquareZero};
use homalg::linfty::{BracketSpec, LInfty};
use homalg::operad;
use homalg::scalar::rat_int;
use homalg::trees::{self, double_factorial_count, Tree};
use homalg::weyl::{self, coefficient_space, ManifoldData, VerifyStatus};
use num::traits::Zero;
use homalg::scalar::Rat;
use std::time::{Duration, Instant};

fn pass(n: usize, label: &str) {
    println!("criterion {} ({}): PASS", n, label);
}

#[test]
fn criterion_1_sign_coherence() {
    let start = Instant::now();
    for s in 2..=6 {
        let lc = operad::tree_complex_unverified(s).unwrap();
        assert!(
            lc.complex().verify_square_zero().is_pass(),
            "differential fails to square to zero at arity {}",
            s
        );
    }
    assert!(start.elapsed() < Duration::from_secs(60), "budget exceeded");
    pass(1, "splitting differential squares to zero, arity 2..=6");
}

fn all_trees_with_degenerate(labels: &[String]) -> Vec<Tree> {
    if labels.len() == 1 {
        return vec![Tree::leaf(&labels[0]).unwrap()];
    }
    let mut out = Vec::new();
    for k in 0..=labels.len() - 2 {
        out.extend(trees::enumerate(labels, k).unwrap());
    }
    out
}

#[test]
fn criterion_2_tree_combinatorics() {
    // binary-tree counts (2s-3)!!
    for (s, expect) in [(3usize, 3u64), (4, 15), (5, 105), (6, 945)] {
        let labels: Vec<String> = (1..=s).map(|i| i.to_string()).collect();
        let ts = trees::enumerate(&labels, s - 2).unwrap();
        assert_eq!(ts.len() as u64, expect);
        assert_eq!(double_factorial_count(s), expect);
    }
    // composition associativity, exhaustive over total leaf count <= 6
    let mut checked = 0usize;
    for n1 in 1..=4usize {
        for n2 in 1..=4usize {
            for n3 in 1..=4usize {
                if n1 + n2 + n3 > 6 {
                    continue;
                }
                let l1: Vec<String> = (1..=n1).map(|i| format!("a{}", i)).collect();
                let l2: Vec<String> = (1..=n2).map(|i| format!("b{}", i)).collect();
                let l3: Vec<String> = (1..=n3).map(|i| format!("c{}", i)).collect();
                for t1 in all_trees_with_degenerate(&l1) {
                    for t2 in all_trees_with_degenerate(&l2) {
                        for t3 in all_trees_with_degenerate(&l3) {
                            for s in t1.leaves().to_vec() {
                                // sequential: insert into the inserted factor
                                for r in t2.leaves().to_vec() {
                                    let left = t1
                                        .compose(&s, &t2)
                                        .unwrap()
                                        .compose(&r, &t3)
                                        .unwrap();
                                    let right = t1
                                        .compose(&s, &t2.compose(&r, &t3).unwrap())
                                        .unwrap();
                                    assert_eq!(left, right);
                                    checked += 1;
                                }
                                // horizontal: two disjoint insertions commute
                                for s2 in t1.leaves().to_vec() {
                                    if s2 == s {
                                        continue;
                                    }
                                    let left = t1
                                        .compose(&s, &t2)
                                        .unwrap()
                                        .compose(&s2, &t3)
                                        .unwrap();
                                    let right = t1
                                        .compose(&s2, &t3)
                                        .unwrap()
                                        .compose(&s, &t2)
                                        .unwrap();
                                    assert_eq!(left, right);
                                    checked += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 500, "exhaustive sweep ran ({} cases)", checked);
    pass(2, "double-factorial counts and exhaustive associativity");
}

#[test]
fn criterion_3_tree_complex_homology() {
    let start = Instant::now();
    let expected_totals = [(2usize, 1usize), (3, 2), (4, 6), (5, 24)];
    for (s, total) in expected_totals {
        let lc = operad::tree_complex(s).unwrap();
        let engine = lc.complex().homology().unwrap();
        let oracle = common::dense_homology(lc.complex());
        for (d, summary) in &engine {
            assert_eq!(
                summary.dim, oracle[d],
                "sparse and dense homology disagree at arity {}, degree {}",
                s, d
            );
        }
        let nonzero: Vec<(i64, usize)> = engine
            .iter()
            .filter(|(_, x)| x.dim > 0)
            .map(|(&d, x)| (d, x.dim))
            .collect();
        assert_eq!(nonzero.len(), 1, "homology concentrated in one degree");
        assert_eq!(nonzero[0], (0, total), "arity {}", s);
    }
    assert!(start.elapsed() < Duration::from_secs(120), "budget exceeded");
    pass(3, "tree-complex homology 1, 2, 6, 24 against the dense oracle");
}

#[test]
fn criterion_4_stratum_dictionary() {
    for n_leaves in 2..=5usize {
        let labels: Vec<String> = (1..=n_leaves).map(|i| i.to_string()).collect();
        let mut by_edges: Vec<Vec<Tree>> = Vec::new();
        for k in 0..=n_leaves - 2 {
            by_edges.push(trees::enumerate(&labels, k).unwrap());
        }
        for (k, ts) in by_edges.iter().enumerate() {
            for t in ts {
                assert_eq!(operad::stratum_codim(t).unwrap(), k);
                // dim + codim telescopes to the open stratum dimension
                for n in 1..=3i64 {
                    assert_eq!(
                        operad::stratum_dim(t, n).unwrap() + k as i64,
                        n * n_leaves as i64 - n - 1
                    );
                }
            }
        }
        // incidence == single edge splitting, both directions, all pairs
        for (k1, ts1) in by_edges.iter().enumerate() {
            for (k2, ts2) in by_edges.iter().enumerate() {
                for t1 in ts1 {
                    let splits: Vec<Tree> =
                        t1.splittings().into_iter().map(|(t, _)| t).collect();
                    for t2 in ts2 {
                        let incident = operad::incidence(t1, t2).unwrap();
                        if k2 == k1 + 1 {
                            assert_eq!(incident, splits.contains(t2));
                        } else {
                            assert!(!incident, "codimension gap must kill incidence");
                        }
                    }
                }
            }
        }
    }
    pass(4, "codimension = internal edges; incidence = single splitting");
}

#[test]
fn criterion_5_chevalley_eilenberg() {
    let start = Instant::now();
    // sl2
    let sl2 = LInfty::from_dgla(
        GradedSpace::new(vec![
            Generator::new("e", 0),
            Generator::new("f", 0),
            Generator::new("h", 0),
        ])
        .unwrap(),
        &[],
        &[
            (vec![0, 1], 2, rat_int(1)),
            (vec![0, 2], 0, rat_int(-2)),
            (vec![1, 2], 1, rat_int(2)),
        ],
    )
    .unwrap();
    let h = sl2.ce_complex(3).unwrap().homology().unwrap();
    assert_eq!(
        (h[&0].dim, h[&-1].dim, h[&-2].dim, h[&-3].dim),
        (1, 0, 0, 1)
    );
    assert!(h.values().all(|s| !s.flagged));

    // two-dimensional nonabelian [x, y] = y
    let nonab = LInfty::from_dgla(
        GradedSpace::new(vec![Generator::new("x", 0), Generator::new("y", 0)]).unwrap(),
        &[],
        &[(vec![0, 1], 1, rat_int(1))],
    )
    .unwrap();
    let h = nonab.ce_complex(2).unwrap().homology().unwrap();
    assert_eq!((h[&0].dim, h[&-1].dim, h[&-2].dim), (1, 1, 0));

    // abelian: homology equals the symmetric-algebra dimensions on the
    // suspended generators
    let abelian = LInfty::from_dgla(
        GradedSpace::new(vec![
            Generator::new("x", 0),
            Generator::new("y", 0),
            Generator::new("z", 0),
        ])
        .unwrap(),
        &[],
        &[],
    )
    .unwrap();
    let ce = abelian.ce_complex(3).unwrap();
    let h = ce.homology().unwrap();
    let sym = abelian
        .suspended_space()
        .symmetric_basis(&BasisConstraint::WordLimit(3))
        .unwrap();
    for (d, s) in &h {
        assert_eq!(s.dim, sym.get(d).map(|v| v.len()).unwrap_or(0));
    }
    assert_eq!(
        (h[&0].dim, h[&-1].dim, h[&-2].dim, h[&-3].dim),
        (1, 3, 3, 1)
    );
    assert!(start.elapsed() < Duration::from_secs(10), "budget exceeded");
    pass(5, "Chevalley-Eilenberg homology of the stock examples");
}

#[test]
fn criterion_6_hochschild_engine() {
    let start = Instant::now();
    let cases: Vec<(homalg::algebra::Algebra, usize, Vec<usize>)> = vec![
        (samples::ground_field(), 4, vec![1, 0, 0, 0]),
        (samples::dual_numbers(), 5, vec![2, 1, 1, 1, 1]),
        (samples::matrix2(), 3, vec![1, 0, 0]),
    ];
    for (alg, m_max, expected) in cases {
        let model =
            HochschildModel::new(alg.clone(), m_max, Variant::Standard, DEFAULT_SIZE_LIMIT)
                .unwrap();
        let engine = model.complex().homology().unwrap();
        let oracle = common::dense_homology(model.complex());
        for (d, s) in &engine {
            assert_eq!(s.dim, oracle[d], "dense oracle disagrees at degree {}", d);
        }
        for (m, want) in expected.iter().enumerate() {
            let s = engine[&-(m as i64)];
            assert_eq!(s.dim, *want, "HH_{} of {:?}", m, alg.names());
            assert!(!s.flagged, "degree {} must be exact", m);
        }
        // the cutoff degree is flagged as truncation-affected
        assert!(engine[&-(m_max as i64)].flagged);
    }
    assert!(start.elapsed() < Duration::from_secs(120), "budget exceeded");
    pass(6, "Hochschild homology of the stock algebras against the dense oracle");
}

const GOLDEN_STANDARD: &str = "trace certificate: algebra e11,e12,e21,e22 (dim 4), variant standard, degrees 2..=3\n\
normalization: T_k = c_k \u{b7} alt_k with c_1 = 1\n\
k=2: proportional with ratio r_2 = 2; c_2 = 1/2\n\
k=3: NOT proportional; witness e12\u{2227}e21\u{2227}e22\n    \
b(alt(e12\u{2227}e21\u{2227}e22)) = 2\u{b7}e11\u{2297}e22 + -e12\u{2297}e21 + -e21\u{2297}e12 + -e22\u{2297}e11 + -e22\u{2297}e22\n    \
alt(d_ce(e12\u{2227}e21\u{2227}e22)) = e11\u{2297}e22 + -e22\u{2297}e11\n\
status: first failure at k=3\n";

const GOLDEN_CYCLIC: &str = "trace certificate: algebra e11,e12,e21,e22 (dim 4), variant cyclic-quotient, degrees 2..=3\n\
normalization: T_k = c_k \u{b7} alt_k with c_1 = 1\n\
k=2: proportional with ratio r_2 = 2; c_2 = 1/2\n\
k=3: proportional with ratio r_3 = 3/2; c_3 = 1/3\n\
status: chain map certified at every checked degree\n";

#[test]
fn criterion_7_trace_certification() {
    let start = Instant::now();
    let alg = samples::matrix2();
    let std1 =
        hochschild::certify_chain_map(&alg, 3, Variant::Standard, DEFAULT_SIZE_LIMIT).unwrap();
    let std2 =
        hochschild::certify_chain_map(&alg, 3, Variant::Standard, DEFAULT_SIZE_LIMIT).unwrap();
    assert_eq!(std1.render(), std2.render(), "deterministic reports");
    assert_eq!(std1.render(), GOLDEN_STANDARD, "golden standard report");
    match &std1.degrees[0].verdict {
        hochschild::Verdict::Proportional { ratio } => assert_eq!(ratio, &rat_int(2)),
        other => panic!("k=2 standard: {:?}", other),
    }
    assert_eq!(std1.first_failure(), Some(3));

    let cyc =
        hochschild::certify_chain_map(&alg, 3, Variant::CyclicQuotient, DEFAULT_SIZE_LIMIT)
            .unwrap();
    assert_eq!(cyc.render(), GOLDEN_CYCLIC, "golden cyclic report");
    match &cyc.degrees[1].verdict {
        hochschild::Verdict::Proportional { ratio } => {
            assert_eq!(ratio, &homalg::scalar::rat(3, 2))
        }
        other => panic!("k=3 cyclic: {:?}", other),
    }
    assert!(start.elapsed() < Duration::from_secs(120), "budget exceeded");
    pass(7, "trace certification ratios and golden reports");
}

fn circle() -> ManifoldData {
    ManifoldData::new(
        1,
        &[(0, 1), (1, 1)],
        vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(0)],
        ],
    )
    .unwrap()
}

#[test]
fn criterion_8_one_dimensional_models() {
    let start = Instant::now();
    // n = 1, coefficient space of dimension 1 and 2 in degree 1, on the circle
    for dim_v in [1usize, 2] {
        let gens = (0..dim_v)
            .map(|i| Generator::new(&format!("v{}", i), 1))
            .collect();
        let space = GradedSpace::new(gens).unwrap();
        let mut q = vec![vec![Rat::zero(); dim_v]; dim_v];
        for (i, row) in q.iter_mut().enumerate() {
            row[i] = rat_int(1);
        }
        let v = coefficient_space(space, q, 1).unwrap();
        let report = weyl::verify_one_dimensional(&v, &circle()).unwrap();
        match &report.status {
            VerifyStatus::Exact { total, location, .. } => {
                assert_eq!(*total, 1);
                assert_eq!(
                    *location,
                    -(dim_v as i64),
                    "homological location equals the coefficient dimension"
                );
            }
            other => panic!("expected exact regime, got {:?}", other),
        }
    }
    // n = 3 on the 3-sphere
    let space = GradedSpace::new(vec![Generator::new("v1", 1), Generator::new("v3", 3)]).unwrap();
    let q = vec![
        vec![rat_int(0), rat_int(1)],
        vec![rat_int(-1), rat_int(0)],
    ];
    let v = coefficient_space(space, q, 3).unwrap();
    let sphere = ManifoldData::new(
        3,
        &[(0, 1), (3, 1)],
        vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(0)],
        ],
    )
    .unwrap();
    let report = weyl::verify_one_dimensional(&v, &sphere).unwrap();
    match &report.status {
        VerifyStatus::Exact { total, .. } => assert_eq!(*total, 1),
        other => panic!("expected exact regime, got {:?}", other),
    }
    assert!(start.elapsed() < Duration::from_secs(30), "budget exceeded");
    pass(8, "curvature-model cohomology is one-dimensional at the stated spot");
}

#[test]
fn criterion_9_negative_controls() {
    // a flipped splitting sign breaks nilpotency with a witness
    let lc = operad::tree_complex_unverified(4).unwrap();
    let c = lc.complex();
    let mut d0 = c.diff(-2);
    let (i, j, v) = d0.iter().next().map(|(i, j, v)| (i, j, v.clone())).unwrap();
    d0.set(i, j, -v);
    let spaces: Vec<Vec<String>> = c.degrees().map(|d| c.basis(d).unwrap().to_vec()).collect();
    let broken =
        ChainComplex::new_deferred(c.min_degree(), spaces, vec![d0, c.diff(-1)]).unwrap();
    match broken.verify_square_zero() {
        SquareZero::Witness { degree, .. } => assert_eq!(degree, -2),
        SquareZero::Pass => panic!("sign flip must produce a witness"),
    }

    // a perturbed Jacobi identity is caught by the nilpotency check
    let perturbed = LInfty::from_brackets(
        GradedSpace::new(vec![
            Generator::new("e", 0),
            Generator::new("f", 0),
            Generator::new("h", 0),
        ])
        .unwrap(),
        &[],
        &[BracketSpec {
            arity: 2,
            entries: vec![
                (vec![0, 1], 2, rat_int(1)),
                (vec![0, 1], 0, rat_int(1)), // [e,f] = h + e
                (vec![0, 2], 0, rat_int(-2)),
                (vec![1, 2], 1, rat_int(2)),
            ],
        }],
    )
    .unwrap();
    match perturbed.check(3).unwrap() {
        SquareZero::Witness { .. } => {}
        SquareZero::Pass => panic!("perturbed bracket must be rejected"),
    }

    // a non-perfect pairing is rejected while building the model
    let space = GradedSpace::new(vec![
        Generator::new("v0", 1),
        Generator::new("v1", 1),
    ])
    .unwrap();
    let singular = vec![
        vec![rat_int(1), rat_int(0)],
        vec![rat_int(0), rat_int(0)],
    ];
    match coefficient_space(space, singular, 1) {
        Err(weyl::WeylError::NotPerfect { .. }) => {}
        other => panic!("singular pairing must be rejected, got {:?}", other.map(|_| ())),
    }
    pass(9, "negative controls produce witnesses and rejections");
}
