//! Rank and nullspace computations.
//!
//! [`exact_rank`] clears denominators row by row and runs fraction-free
//! (Bareiss) elimination over `BigInt`. [`field_rank`] is plain Gaussian
//! elimination over any [`Field`]; it backs the independence checks and,
//! instantiated at [`Fp`](crate::scalar::Fp), serves as a modular rank probe.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ConditionMatrix;
use crate::scalar::{ExactField, Field};

/// Exact rank over the rationals.
pub fn exact_rank<S: ExactField>(matrix: &ConditionMatrix<S>) -> usize {
    bareiss_rank(integer_rows(matrix.rows()))
}

/// Scales each row by the lcm of its denominators.
pub fn integer_rows<S: ExactField>(rows: &[Vec<S>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let qs: Vec<_> = row.iter().map(ExactField::to_big_rational).collect();
            let lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            qs.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect()
}

/// Fraction-free elimination; every intermediate entry is a minor of the
/// input, so the division by the previous pivot is exact.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let Some(cols) = a.first().map(Vec::len) else {
        return 0;
    };
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = &pivot_row[col];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            for j in col + 1..cols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                let (q, r) = v.div_rem(&prev);
                debug_assert!(r.is_zero(), "inexact Bareiss division");
                row[j] = q;
            }
        }
        prev = pivot.clone();
        rank += 1;
    }
    rank
}

/// Reduces `rows` to reduced row echelon form in place and returns the pivot
/// columns.
pub fn rref<S: Field>(rows: &mut [Vec<S>]) -> Vec<usize> {
    let nrows = rows.len();
    let Some(cols) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][col].is_negligible()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = S::one() / rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..nrows {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for j in col..cols {
                let v = rows[i][j].clone() - f.clone() * rows[r][j].clone();
                rows[i][j] = v;
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Rank over an arbitrary field by Gaussian elimination.
pub fn field_rank<S: Field>(rows: &[Vec<S>]) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work).len()
}

/// A basis of `{x : rows · x = 0}` in `ncols` unknowns, one vector per free
/// column, each with a 1 in its free coordinate.
pub fn nullspace<S: Field>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![S::zero(); ncols];
            v[free] = S::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[row][free].clone();
            }
            v
        })
        .collect()
}
