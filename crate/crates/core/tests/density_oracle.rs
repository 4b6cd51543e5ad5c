use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ordered_ramsey::density::{
    check_tri_witness, count_hyperedge_triangles, count_triangles, falsify_tri_density, is_bi_dense, pair_density,
    sample_bi_dense, BiDensity, BipartiteGraph, ExactCap, FalsifyStrategy, SampleVerdict, TriVerdict,
};
use ordered_ramsey::hypergraph::complete_hypergraph;
use ordered_ramsey::{parse_rational, Hypergraph, OrderedHypergraph, Rational};

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn random_graph(g: &mut ChaCha8Rng, offset: usize, nl: usize, nr: usize, p: f64) -> BipartiteGraph {
    let left: Vec<usize> = (offset..offset + nl).collect();
    let right: Vec<usize> = (offset + nl..offset + nl + nr).collect();
    let mut edges = Vec::new();
    for &u in &left {
        for &v in &right {
            if g.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    BipartiteGraph::from_edges(left, right, &edges).unwrap()
}

fn subsets_of(v: &[usize]) -> Vec<Vec<usize>> {
    (1u32..1 << v.len())
        .map(|m| v.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &x)| x).collect())
        .collect()
}

/// Every pair (X, Y) of nonempty subsets meeting the size thresholds.
fn naive_dense(g: &BipartiteGraph, e1: &Rational, e2: &Rational, rho: &Rational) -> bool {
    let big = |n: usize| BigRational::from_integer(n.into());
    let (nl, nr) = (big(g.left().len()), big(g.right().len()));
    for x in subsets_of(g.left()) {
        if big(x.len()) < e1 * &nl {
            continue;
        }
        for y in subsets_of(g.right()) {
            if big(y.len()) < e2 * &nr {
                continue;
            }
            let e = x.iter().flat_map(|&u| y.iter().map(move |&v| (u, v))).filter(|&(u, v)| g.has_edge(u, v)).count();
            if big(e) < rho * big(x.len() * y.len()) {
                return false;
            }
        }
    }
    true
}

#[test]
fn bi_density_matches_double_subset_enumeration() {
    let mut g = ChaCha8Rng::seed_from_u64(11);
    let params = [("1/4", "1/3", "1/2"), ("1/2", "1/2", "2/3"), ("1/8", "1/8", "1/3"), ("1/100", "3/4", "1/5")];
    let (mut dense, mut violated) = (0, 0);
    for case in 0..100 {
        let (nl, nr) = (g.gen_range(1..=8), g.gen_range(1..=8));
        let p = [0.3, 0.6, 0.85, 1.0][case % 4];
        let graph = random_graph(&mut g, 0, nl, nr, p);
        let (e1, e2, rho) = params[case % params.len()];
        let (e1, e2, rho) = (q(e1), q(e2), q(rho));
        let verdict = is_bi_dense(&graph, &e1, &e2, &rho, ExactCap::default()).unwrap();
        assert_eq!(verdict.is_dense(), naive_dense(&graph, &e1, &e2, &rho), "case {case}");
        match verdict {
            BiDensity::Dense => dense += 1,
            BiDensity::Violated(w) => {
                violated += 1;
                assert!(w.certifies(&graph, &e1, &e2, &rho));
                assert_eq!(pair_density(&graph, &w.x, &w.y).unwrap(), w.density);
                assert!(w.density < rho);
            }
        }
    }
    assert!(dense > 10 && violated > 10, "dense {dense}, violated {violated}");
}

#[test]
fn float_and_rational_verdicts_agree_on_dyadic_parameters() {
    let mut g = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let (nl, nr) = (g.gen_range(1..=8), g.gen_range(1..=8));
        let graph = random_graph(&mut g, 0, nl, nr, 0.6);
        let exact = is_bi_dense(&graph, &q("1/4"), &q("1/2"), &q("1/2"), ExactCap::default()).unwrap();
        let float = is_bi_dense(&graph, &0.25f64, &0.5, &0.5, ExactCap::default()).unwrap();
        assert_eq!(exact.is_dense(), float.is_dense());
    }
}

#[test]
fn sampled_violations_are_genuine() {
    let mut g = ChaCha8Rng::seed_from_u64(13);
    for seed in 0..30 {
        let graph = random_graph(&mut g, 0, 8, 8, 0.5);
        let rho = q("1/2");
        match sample_bi_dense(&graph, &q("1/4"), &q("1/4"), &rho, 200, seed).unwrap() {
            SampleVerdict::NoViolationFound => {}
            SampleVerdict::Violated { witness, .. } => {
                assert!(witness.certifies(&graph, &q("1/4"), &q("1/4"), &rho));
                assert!(!is_bi_dense(&graph, &q("1/4"), &q("1/4"), &rho, ExactCap::default()).unwrap().is_dense());
            }
        }
        let again = sample_bi_dense(&graph, &q("1/4"), &q("1/4"), &rho, 200, seed).unwrap();
        assert_eq!(again, sample_bi_dense(&graph, &q("1/4"), &q("1/4"), &rho, 200, seed).unwrap());
    }
}

#[test]
fn triangles_match_triple_loop() {
    let mut g = ChaCha8Rng::seed_from_u64(14);
    for case in 0..200 {
        let (a, b, c) = (g.gen_range(1..=8), g.gen_range(1..=8), g.gen_range(1..=8));
        let p = [0.2, 0.5, 0.9][case % 3];
        let v1: Vec<usize> = (0..a).collect();
        let v2: Vec<usize> = (a..a + b).collect();
        let v3: Vec<usize> = (a + b..a + b + c).collect();
        let mut pick = |x: &[usize], y: &[usize]| {
            let e: Vec<(usize, usize)> =
                x.iter().flat_map(|&u| y.iter().map(move |&v| (u, v))).filter(|_| g.gen_bool(p)).collect();
            BipartiteGraph::from_edges(x.to_vec(), y.to_vec(), &e).unwrap()
        };
        let (g12, g13, g23) = (pick(&v1, &v2), pick(&v1, &v3), pick(&v2, &v3));
        let mut naive = 0u64;
        for &x in &v1 {
            for &y in &v2 {
                for &z in &v3 {
                    if g12.has_edge(x, y) && g13.has_edge(x, z) && g23.has_edge(y, z) {
                        naive += 1;
                    }
                }
            }
        }
        assert_eq!(count_triangles(&g12, &g13, &g23).unwrap(), BigUint::from(naive));
        let complete = complete_hypergraph(3, a + b + c).unwrap();
        assert_eq!(count_hyperedge_triangles(&complete, &g12, &g13, &g23).unwrap(), BigUint::from(naive));
    }
}

#[test]
fn falsifier_witnesses_are_violations() {
    let host = OrderedHypergraph::new(3, 9, vec![vec![0, 3, 6], vec![1, 4, 7]]).unwrap();
    let (eps, rho) = (q("1/27"), q("1/2"));
    for strategy in [FalsifyStrategy::ExhaustiveTiny, FalsifyStrategy::Induced, FalsifyStrategy::Random] {
        let out = falsify_tri_density(&host, &eps, &rho, 3, strategy, 50_000, 5).unwrap();
        let w = out.witness.unwrap_or_else(|| panic!("{strategy:?} found nothing"));
        assert_eq!(check_tri_witness(&host, &w, &eps, &rho, 3).unwrap().verdict, TriVerdict::Violation);
    }
    let complete = complete_hypergraph(3, 9).unwrap();
    let out = falsify_tri_density(&complete, &eps, &rho, 3, FalsifyStrategy::ExhaustiveTiny, 1 << 30, 0).unwrap();
    assert!(out.witness.is_none() && out.exhausted);
    assert_eq!(complete.vertex_count(), 9);
}
