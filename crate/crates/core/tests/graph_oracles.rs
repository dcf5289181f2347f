#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigidity_core::respath::{
    compatibility_check, forward_pullback, ord_linear_functionals, path_counts, r_coeffs,
    random_graph, stage_simulation, validate_graph, Functional, GraphParams, ResolutionGraph, Rule,
};

fn sampled(k_max: usize, seed: u64) -> ResolutionGraph {
    random_graph(&GraphParams::sample(k_max, seed), seed).unwrap()
}

/// Every path from the top vertex, walked explicitly: (path count, Σ of weight products).
fn enumerate_paths(g: &ResolutionGraph) -> (Vec<BigInt>, Vec<BigInt>) {
    let k = g.k();
    let mut out = vec![Vec::new(); k + 1];
    for e in &g.edges {
        out[e.from].push((e.to, e.weight));
    }
    let mut p = vec![BigInt::zero(); k + 1];
    let mut r = vec![BigInt::zero(); k + 1];
    let mut stack = vec![(k, BigInt::one())];
    while let Some((v, prod)) = stack.pop() {
        p[v] += 1;
        r[v] += &prod;
        for &(t, w) in &out[v] {
            stack.push((t, &prod * BigInt::from(w)));
        }
    }
    (p, r)
}

#[test]
fn small_graphs_match_path_enumeration() {
    for seed in 0..300 {
        let g = sampled(12, seed);
        let (p, r) = enumerate_paths(&g);
        assert_eq!(path_counts(&g).unwrap()[1..], p[1..], "seed {seed}");
        assert_eq!(r_coeffs(&g).unwrap()[1..], r[1..], "seed {seed}");
    }
}

#[test]
fn large_graphs_match_forward_pullback() {
    for seed in 0..300 {
        let g = sampled(40, 10_000 + seed);
        let r = r_coeffs(&g).unwrap();
        for i in 1..=g.k() {
            assert_eq!(
                forward_pullback(&g, i).unwrap().coeff(g.k()),
                r[i],
                "seed {seed} vertex {i}"
            );
        }
    }
}

#[test]
fn path_count_bounds() {
    for seed in 0..300 {
        let g = sampled(40, 20_000 + seed);
        let (p, r) = (path_counts(&g).unwrap(), r_coeffs(&g).unwrap());
        let ls = g.l_sing();
        for i in 1..=g.k() {
            if i > ls {
                assert_eq!(r[i], p[i]);
            } else {
                assert!(p[i] <= r[i] && r[i] <= BigInt::from(2) * &p[i]);
            }
        }
        let rq: Vec<BigRational> = r.iter().cloned().map(BigRational::from_integer).collect();
        assert!(compatibility_check(&g, &rq).unwrap());
    }
}

#[test]
fn chain_connected_graphs_are_monotone() {
    for seed in 0..200 {
        let mut params = GraphParams::sample(30, 30_000 + seed);
        params.chain = true;
        let g = random_graph(&params, seed).unwrap();
        let r = r_coeffs(&g).unwrap();
        assert!((1..g.k()).all(|i| r[i] >= r[i + 1]), "seed {seed}");
        assert_eq!(r[g.k()], BigInt::one());
    }
}

#[test]
fn stage_simulation_matches_weighted_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for seed in 0..120 {
        let g = sampled(8, 40_000 + seed);
        let r = r_coeffs(&g).unwrap();
        for _ in 0..10 {
            let nu: Vec<BigRational> = (0..g.k())
                .map(|_| {
                    BigRational::new(
                        rng.gen_range(1..50i64).into(),
                        rng.gen_range(1..9i64).into(),
                    )
                })
                .collect();
            let direct = (1..=g.k()).fold(BigRational::zero(), |acc, i| {
                acc + BigRational::from_integer(r[i].clone()) * &nu[i - 1]
            });
            assert_eq!(
                stage_simulation(&g, Functional::Sigma(&nu)).unwrap(),
                direct
            );
            assert_eq!(
                ord_linear_functionals(&g, Functional::Sigma(&nu)).unwrap(),
                direct
            );
        }
        for mode in [Functional::<BigRational>::Fibre, Functional::Canonical] {
            assert_eq!(
                stage_simulation(&g, mode).unwrap(),
                ord_linear_functionals(&g, mode).unwrap()
            );
        }
    }
}

#[test]
fn random_graphs_are_valid_and_deterministic() {
    for seed in 0..100 {
        let params = GraphParams::sample(25, seed);
        let a = random_graph(&params, seed).unwrap();
        assert!(validate_graph(&a).is_empty());
        assert_eq!(a, random_graph(&params, seed).unwrap());
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<ResolutionGraph>(&text).unwrap(), a);
    }
}

#[test]
fn corrupted_graphs_are_rejected() {
    for seed in 0..100 {
        let mut g = sampled(12, 50_000 + seed);
        if g.edges.is_empty() {
            continue;
        }
        g.edges[0].weight = 3;
        let v = validate_graph(&g);
        assert!(v.iter().any(|x| x.rule == Rule::EdgeWeight));
        assert!(r_coeffs(&g).is_err());
    }
}

proptest! {
    #[test]
    fn pullback_of_top_is_itself(seed in 0u64..5_000) {
        let g = sampled(15, seed);
        let top = forward_pullback(&g, g.k()).unwrap();
        prop_assert_eq!(top.coeffs.len(), 1);
        prop_assert_eq!(top.coeff(g.k()), BigInt::one());
    }

    #[test]
    fn r_is_additive_in_nu(seed in 0u64..5_000, shift in 1i64..20, vertex in 0usize..8) {
        let g = sampled(8, seed);
        let i = vertex % g.k();
        let nu: Vec<BigRational> = (0..g.k()).map(|j| BigRational::from_integer(BigInt::from(j + 1))).collect();
        let mut moved = nu.clone();
        moved[i] += BigRational::from_integer(shift.into());
        let r = r_coeffs(&g).unwrap();
        let before = stage_simulation(&g, Functional::Sigma(&nu)).unwrap();
        let after = stage_simulation(&g, Functional::Sigma(&moved)).unwrap();
        prop_assert_eq!(after - before, BigRational::from_integer(&r[i + 1] * BigInt::from(shift)));
    }
}
