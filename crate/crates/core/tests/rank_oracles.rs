#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigidity_core::polyspace::{
    bareiss_rank, enumerate_monomials, euler_identity_check, exact_rank, family_check, field_rank,
    integer_rows, line_check, points_check, random_generic_points,
    restricted_singularity_conditions, singularity_conditions, ConditionMatrix, LinearSubspace,
    ProjectivePoint, RowTag,
};
use rigidity_core::scalar::Fp;
use rigidity_core::Rational;

const P: i64 = 1_000_000_007;

/// Plain Gaussian elimination mod a 30-bit prime, written without the library's `Field`.
fn rank_mod_p(rows: &[Vec<BigInt>]) -> usize {
    let modp = BigInt::from(P);
    let mut a: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| v.mod_floor(&modp).to_i64().unwrap())
                .collect()
        })
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let inv = pow_mod(a[rank][c], P - 2);
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c] * inv % P;
                for j in c..cols {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(P);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64) -> i64 {
    let mut acc = 1i64;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

fn q(v: i64) -> Rational {
    BigRational::from_integer(v.into())
}

fn random_matrix(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    rank_cap: usize,
) -> Vec<Vec<Rational>> {
    // a product of (rows x rank_cap) and (rank_cap x cols) has rank at most rank_cap
    let left: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..rank_cap).map(|_| rng.gen_range(-4..=4)).collect())
        .collect();
    let right: Vec<Vec<i64>> = (0..rank_cap)
        .map(|_| (0..cols).map(|_| rng.gen_range(-4..=4)).collect())
        .collect();
    // each row scaled by its own fraction so denominators need clearing
    (0..rows)
        .map(|i| {
            let den: i64 = rng.gen_range(1..=5);
            (0..cols)
                .map(|j| {
                    let v: i64 = (0..rank_cap).map(|t| left[i][t] * right[t][j]).sum();
                    BigRational::new(v.into(), den.into())
                })
                .collect()
        })
        .collect()
}

fn to_matrix(rows: Vec<Vec<Rational>>, cols: usize) -> ConditionMatrix<Rational> {
    let mut m = ConditionMatrix::new(cols);
    for r in rows {
        m.push(r, RowTag::Other);
    }
    m
}

#[test]
fn three_rank_routes_agree_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let rows = rng.gen_range(0..9);
        let cols = rng.gen_range(1..9);
        let cap = rng.gen_range(0..=rows.min(cols).max(1));
        let a = random_matrix(&mut rng, rows, cols, cap);
        let ints = integer_rows(&a);
        let bareiss = bareiss_rank(ints.clone());
        assert_eq!(bareiss, field_rank(&a));
        assert_eq!(bareiss, rank_mod_p(&ints));
        let fp: Vec<Vec<Fp>> = ints
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| {
                        let m = v.mod_floor(&BigInt::from(Fp::MODULUS));
                        Fp::new(m.to_u64().unwrap())
                    })
                    .collect()
            })
            .collect();
        assert_eq!(bareiss, field_rank(&fp));
        assert!(bareiss <= cap);
        assert_eq!(exact_rank(&to_matrix(a, cols)), bareiss);
    }
}

#[test]
fn cleared_rows_are_integral_and_proportional() {
    let a = vec![vec![
        BigRational::new(1.into(), 2.into()),
        BigRational::new((-2).into(), 3.into()),
    ]];
    let ints = integer_rows(&a);
    assert_eq!(ints[0], vec![BigInt::from(3), BigInt::from(-4)]);
    assert!(ints[0].iter().any(|v| v.is_positive()));
}

#[test]
fn lemma_grid_against_modular_probe() {
    for n in 3..=4usize {
        for d in 3..=5u32 {
            let space = enumerate_monomials(n, d).unwrap();
            for m in 1..=n + 1 {
                for seed in 0..3u64 {
                    let pts =
                        random_generic_points(&LinearSubspace::<Rational>::whole(n + 1), m, seed)
                            .unwrap();
                    let mat = singularity_conditions(&space, &pts).unwrap();
                    let rank = exact_rank(&mat);
                    assert_eq!(rank, m * (n + 1), "N={n} d={d} m={m} seed={seed}");
                    assert_eq!(rank_mod_p(&integer_rows(mat.rows())), rank);
                }
            }
        }
    }
}

#[test]
fn coordinate_points_also_reach_full_rank() {
    for n in 2..=4usize {
        let space = enumerate_monomials(n, 3).unwrap();
        let pts: Vec<_> = (0..=n)
            .map(|i| ProjectivePoint::<Rational>::basis_point(n + 1, i))
            .collect();
        let rank = exact_rank(&singularity_conditions(&space, &pts).unwrap());
        assert_eq!(rank, (n + 1) * (n + 1));
    }
}

#[test]
fn quadrics_are_the_documented_exception() {
    // quadrics singular at e0 and e1 are forms in x2, x3: 10 - 3 = 7 conditions
    let c = points_check::<Rational>(3, 2, 2, 0).unwrap();
    assert_eq!((c.rank, c.expected), (7, 8));
    let space = enumerate_monomials(3, 2).unwrap();
    let pts: Vec<_> = (0..2)
        .map(|i| ProjectivePoint::<Rational>::basis_point(4, i))
        .collect();
    assert_eq!(
        exact_rank(&singularity_conditions(&space, &pts).unwrap()),
        7
    );
}

#[test]
fn fixed_line_rank() {
    for n in 3..=4 {
        for d in 4..=5 {
            let c = line_check::<Rational>(n, d, 2).unwrap();
            assert_eq!(c.rank, u64::from(d) * n as u64 + 1);
            // (d - 2)N + 3 after adding dim G(1, N) = 2(N - 1)
            assert_eq!(
                c.rank,
                (u64::from(d) - 2) * n as u64 + 3 + 2 * (n as u64 - 1)
            );
        }
    }
}

#[test]
fn family_rank_small_grid() {
    for (n, r, d) in [(2, 1, 4), (3, 1, 4), (3, 2, 4), (3, 1, 5)] {
        for m in 1..=n - r + 1 {
            let c = family_check::<Rational>(n, r, d, m, 9).unwrap();
            assert!(c.matches(), "{c:?}");
        }
    }
}

#[test]
fn rank_does_not_depend_on_parametrization() {
    let space = enumerate_monomials(3, 4).unwrap();
    let forms = vec![vec![q(1), q(-1), q(2), q(0)]];
    let theta = LinearSubspace::<Rational>::from_forms(4, forms).unwrap();
    let pts = random_generic_points(&theta, 3, 4).unwrap();
    let t = vec![
        vec![q(2), q(1), q(0)],
        vec![q(0), q(1), q(-3)],
        vec![q(1), q(0), q(1)],
    ];
    let other = theta.reparametrized(&t).unwrap();
    let a = exact_rank(&restricted_singularity_conditions(&space, &theta, &pts).unwrap());
    let b = exact_rank(&restricted_singularity_conditions(&space, &other, &pts).unwrap());
    assert_eq!(a, b);
    assert_eq!(a, 9);
}

#[test]
fn euler_identity_on_sampled_points() {
    for seed in 0..20u64 {
        let n = 1 + (seed % 4) as usize;
        let d = 1 + (seed % 5) as u32;
        let space = enumerate_monomials(n, d).unwrap();
        let pts =
            random_generic_points(&LinearSubspace::<Rational>::whole(n + 1), 1, seed).unwrap();
        assert!(euler_identity_check(&space, &pts[0]));
    }
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

proptest! {
    #[test]
    fn rank_survives_permutation_and_scaling(
        rows in small_matrix(),
        perm_seed in any::<u64>(),
        num in prop_oneof![-7i64..=-1, 1i64..=7],
        den in 1i64..=7,
    ) {
        let cols = rows[0].len();
        let mat = to_matrix(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect(), cols);
        let base = exact_rank(&mat);
        let mut perm: Vec<usize> = (0..mat.nrows()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let mut moved = mat.permuted(&perm);
        let target = rng.gen_range(0..moved.nrows());
        moved.scale_row(target, &BigRational::new(num.into(), den.into()));
        prop_assert_eq!(exact_rank(&moved), base);
        prop_assert_eq!(rank_mod_p(&integer_rows(mat.rows())), base);
    }

    #[test]
    fn duplicate_rows_add_nothing(rows in small_matrix()) {
        let cols = rows[0].len();
        let mut doubled: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
        let base = field_rank(&doubled);
        doubled.extend(doubled.clone());
        prop_assert_eq!(exact_rank(&to_matrix(doubled, cols)), base);
    }
}

#[test]
fn zero_matrix_rank() {
    let a = vec![vec![Rational::zero(); 4]; 3];
    assert_eq!(field_rank(&a), 0);
    assert_eq!(bareiss_rank(integer_rows(&a)), 0);
}
