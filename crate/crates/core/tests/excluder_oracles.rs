#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigidity_core::excluder::{
    chain_verify, exclude, find_supermaximal, inequality_11_evaluate, qp_minimize, qp_objective,
    random_supermaximal_instance, Certificate, FibreDivisor, MaximalSingularity, MultiPoly,
    NFInstance, PigeonholeInstance, Sym, Verdict, NSYM,
};
use rigidity_core::respath::chain_graph;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Solves `A x = b` by Gauss-Jordan elimination over the rationals.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !a[i][c].is_zero())
            .expect("nonsingular system");
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].recip();
        for j in 0..n {
            a[c][j] = &a[c][j] * &inv;
        }
        b[c] = &b[c] * &inv;
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let v = &a[i][j] - &f * &a[c][j];
                    a[i][j] = v;
                }
                let v = &b[i] - &f * &b[c];
                b[i] = v;
            }
        }
    }
    b
}

/// Stationarity `2 r_i μ_i ν_i - τ r_i = 0` with the constraint `Σ r_i ν_i = c`,
/// unknowns `(ν_1..ν_K, τ)`.
fn lagrange(r: &[BigRational], mu: &[u8], c: &BigRational) -> Vec<BigRational> {
    let k = r.len();
    let mut a = vec![vec![q(0); k + 1]; k + 1];
    let mut b = vec![q(0); k + 1];
    for i in 0..k {
        a[i][i] = q(2) * &r[i] * q(mu[i].into());
        a[i][k] = -r[i].clone();
        a[k][i] = r[i].clone();
    }
    b[k] = c.clone();
    let mut x = solve(a, b);
    x.pop();
    x
}

fn random_qp(rng: &mut ChaCha8Rng) -> (Vec<BigRational>, Vec<u8>, BigRational) {
    let k = rng.gen_range(1..=5);
    let r = (0..k).map(|_| q(rng.gen_range(1..=6))).collect();
    let mu = (0..k).map(|_| rng.gen_range(1..=2)).collect();
    let c = BigRational::new(
        rng.gen_range(1..=40i64).into(),
        rng.gen_range(1..=4i64).into(),
    );
    (r, mu, c)
}

#[test]
fn qp_matches_lagrange_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..500 {
        let (r, mu, c) = random_qp(&mut rng);
        let sol = qp_minimize(&r, &mu, &c).unwrap();
        assert_eq!(sol.nu, lagrange(&r, &mu, &c));
        assert_eq!(qp_objective(&r, &mu, &sol.nu), sol.min_value);
    }
}

type R128 = Ratio<i128>;

fn small(v: &BigRational) -> R128 {
    R128::new(v.numer().to_i128().unwrap(), v.denom().to_i128().unwrap())
}

/// Fractions `p/s` with `s <= 16` within `radius` of `center`.
fn grid_near(center: &R128, radius: R128) -> Vec<R128> {
    let mut out = Vec::new();
    for s in 1..=16i128 {
        let lo = ((center - radius) * s).floor().to_integer();
        let hi = ((center + radius) * s).ceil().to_integer();
        out.extend((lo..=hi).map(|p| R128::new(p, s)));
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn qp_minimum_beats_the_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0u64;
    for _ in 0..500 {
        let (r, mu, c) = random_qp(&mut rng);
        let k = r.len().min(3);
        let (r, mu) = (&r[..k], &mu[..k]);
        let sol = qp_minimize(r, mu, &c).unwrap();
        let min = small(&sol.min_value);
        let rs: Vec<R128> = r.iter().map(small).collect();
        let ms: Vec<R128> = mu.iter().map(|&m| R128::from(i128::from(m))).collect();
        let cs = small(&c);
        let objective = |nu: &[R128]| -> R128 {
            nu.iter()
                .zip(&rs)
                .zip(&ms)
                .map(|((v, r), m)| r * m * v * v)
                .sum()
        };
        // the last coordinate is fixed by the constraint
        let free: Vec<Vec<R128>> = (0..k - 1)
            .map(|i| {
                grid_near(
                    &small(&sol.nu[i]),
                    if k == 3 {
                        R128::new(1, 2)
                    } else {
                        R128::from(3)
                    },
                )
            })
            .collect();
        let mut cursor = vec![0usize; k - 1];
        loop {
            let mut nu: Vec<R128> = cursor
                .iter()
                .enumerate()
                .map(|(i, &j)| free[i][j])
                .collect();
            let used: R128 = nu.iter().zip(&rs).map(|(v, r)| v * r).sum();
            nu.push((cs - used) / rs[k - 1]);
            assert!(objective(&nu) >= min);
            checked += 1;
            let mut pos = 0;
            while pos < k - 1 {
                cursor[pos] += 1;
                if cursor[pos] < free[pos].len() {
                    break;
                }
                cursor[pos] = 0;
                pos += 1;
            }
            if pos == k - 1 {
                break;
            }
        }
    }
    assert!(checked > 50_000);
}

#[test]
fn inequality_rhs_is_the_qp_minimum_at_the_minimiser() {
    let g = chain_graph(4, &[1, 2, 3], &[1, 1, 1], 0);
    let r = vec![q(1), q(1), q(1)];
    let sol = qp_minimize(&r, &[1, 1, 1], &q(9)).unwrap();
    let inst = NFInstance::new(g, 1, sol.nu.clone(), q(0)).unwrap();
    let (_, rhs) = inequality_11_evaluate(&inst, &[q(0), q(0)]).unwrap();
    assert_eq!(rhs, sol.min_value);
}

#[test]
fn random_supermaximal_instances_are_excluded() {
    for seed in 0..1000 {
        let inst = random_supermaximal_instance(40, 12, seed).unwrap();
        assert!(inst.is_supermaximal());
        let rep = exclude(&inst).unwrap();
        assert_eq!(rep.verdict, Verdict::Infeasible, "seed {seed}: {rep:?}");
        assert!(rep.lhs_upper <= rep.qp_lower);
        assert!(rep.qp_lower <= rep.rhs_at_nu);
        assert!(rep.terminal.holds);
    }
}

#[test]
fn chain_certificates_and_boundary() {
    let rep = chain_verify();
    assert!(rep.all_certified);
    assert_eq!(
        rep.steps[3].certificate,
        Certificate::PerfectSquare {
            root: "n*S_u - e".into()
        }
    );
    // n = e = S_u = 1: 2neS_u = 2 = n²S_u² + e², the strict step fails there
    let mut at: [BigRational; NSYM] = std::array::from_fn(|_| q(0));
    for s in [Sym::N, Sym::E, Sym::SigmaU] {
        at[s as usize] = q(1);
    }
    let lhs = MultiPoly::int(2)
        * MultiPoly::var(Sym::N)
        * MultiPoly::var(Sym::E)
        * MultiPoly::var(Sym::SigmaU);
    let rhs = MultiPoly::var(Sym::N).pow(2) * MultiPoly::var(Sym::SigmaU).pow(2)
        + MultiPoly::var(Sym::E).pow(2);
    assert_eq!(lhs.eval(&at), q(2));
    assert_eq!(rhs.eval(&at), q(2));
}

fn pigeonhole(rows: &[(i64, i64, i64, usize)], lambdas: &[i64], n: u64) -> PigeonholeInstance {
    PigeonholeInstance {
        n,
        y_c: q(0),
        singularities: rows
            .iter()
            .enumerate()
            .map(|(i, &(eps, deg, t, group))| MaximalSingularity {
                label: format!("E{}", i + 1),
                group: format!("T{}", group % lambdas.len()),
                eps: q(eps),
                deg: q(deg),
                t: q(t),
            })
            .collect(),
        divisors: lambdas
            .iter()
            .enumerate()
            .map(|(i, &l)| FibreDivisor {
                label: format!("T{i}"),
                lambda: q(l),
            })
            .collect(),
    }
}

proptest! {
    #[test]
    fn epsilon_is_linear_in_nu(seed in 0u64..10_000, vertex in 0usize..40, num in -20i64..20, den in 1i64..9) {
        let inst = random_supermaximal_instance(12, 6, seed).unwrap();
        let i = vertex % inst.graph().k();
        let mut nu = inst.nu().to_vec();
        let step = BigRational::new(num.into(), den.into());
        nu[i] += &step;
        prop_assume!(nu[i] > q(0));
        let moved = inst.with_nu(nu).unwrap();
        let r = BigRational::from_integer(inst.r()[i + 1].clone());
        prop_assert_eq!(moved.epsilon() - inst.epsilon(), r * step);
    }

    #[test]
    fn pigeonhole_never_misses(
        rows in prop::collection::vec((1i64..6, 1i64..6, 1i64..8, 0usize..3), 1..8),
        lambdas in prop::collection::vec(0i64..5, 1..4),
        n in 1u64..4,
    ) {
        let p = pigeonhole(&rows, &lambdas, n);
        let out = find_supermaximal(&p).unwrap();
        if out.aggregate_holds {
            let label = out.found.clone().expect("aggregate holds");
            let term = out.terms.iter().find(|t| t.label == label).unwrap();
            prop_assert!(term.lhs > term.rhs);
        } else {
            prop_assert!(out.found.is_none());
            prop_assert!(out.diagnostic.is_some());
        }
    }

    #[test]
    fn exclusion_holds_for_any_lambda_below_ceiling(seed in 0u64..10_000, frac in 0i64..100) {
        let inst = random_supermaximal_instance(10, 8, seed).unwrap();
        let ceiling = if inst.ord_t().is_zero() {
            q(5)
        } else {
            q(2) * BigRational::from_integer(BigInt::from(inst.n())) * inst.epsilon() / inst.ord_t()
        };
        let lambda = ceiling * BigRational::new(frac.into(), 100.into());
        let inst = NFInstance::new(inst.graph().clone(), inst.n(), inst.nu().to_vec(), lambda).unwrap();
        prop_assert!(inst.is_supermaximal());
        prop_assert_eq!(exclude(&inst).unwrap().verdict, Verdict::Infeasible);
    }
}
