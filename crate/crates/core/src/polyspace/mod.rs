//! Coefficient spaces of homogeneous forms and the linear conditions that
//! singular points impose on them.
//!
//! A form of degree `d` in `N + 1` variables is a coefficient vector indexed by
//! the monomial basis of [`CoeffSpace`]. Every geometric condition handled here
//! ("these points are singular", "this line is singular") is linear in those
//! coefficients and is materialised as a [`ConditionMatrix`]; its exact rank is
//! the codimension of the locus it cuts out.

mod checks;
mod conditions;
mod rank;
mod sampling;
mod subspace;

pub use checks::{family_check, line_check, points_check, RankCheck, RankSuite};
pub use conditions::{
    derivative_row, euler_identity_check, euler_identity_holds, evaluation_row,
    family_singularity_conditions, restricted_singularity_conditions, singularity_conditions,
    subspace_singularity_conditions, ThetaFamily,
};
pub use rank::{bareiss_rank, exact_rank, field_rank, integer_rows, nullspace, rref};
pub use sampling::{
    random_generic_points, random_generic_points_off, MAX_SAMPLING_ATTEMPTS, SAMPLE_RANGE,
};
pub use subspace::LinearSubspace;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("point is the zero vector")]
    ZeroPoint,
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point {index} does not lie on the subspace")]
    PointOffSubspace { index: usize },
    #[error("linear forms are dependent (rank {rank} of {count})")]
    DependentForms { rank: usize, count: usize },
    #[error("invalid parametrization: {0}")]
    BadParametrization(String),
    #[error("could not sample {m} independent points on a subspace of dimension {dim} after {attempts} attempts")]
    SamplingFailed {
        m: usize,
        dim: usize,
        attempts: usize,
    },
    #[error("dimension overflow for N={n}, d={d}")]
    Overflow { n: usize, d: u32 },
}

/// `dim P_{N,d} = C(N + d, d)`.
pub fn space_dim(n: usize, d: u32) -> Result<u64, PolyError> {
    if n < 1 {
        return Err(PolyError::Domain(format!("N must be at least 1, got {n}")));
    }
    let mut acc: u128 = 1;
    for i in 1..=u128::from(d) {
        acc = acc
            .checked_mul(n as u128 + i)
            .ok_or(PolyError::Overflow { n, d })?
            / i;
    }
    u64::try_from(acc).map_err(|_| PolyError::Overflow { n, d })
}

/// A monomial `x0^a0 ... xN^aN`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn eval<S: Field>(&self, point: &[S]) -> S {
        self.exponents
            .iter()
            .zip(point)
            .fold(S::one(), |acc, (&e, x)| acc * pow(x, e))
    }

    /// Value of `∂/∂x_var` of this monomial at `point`.
    pub fn derivative_at<S: Field>(&self, var: usize, point: &[S]) -> S {
        let e = self.exponents[var];
        if e == 0 {
            return S::zero();
        }
        let mut acc = S::from_i64(i64::from(e));
        for (i, (&ei, x)) in self.exponents.iter().zip(point).enumerate() {
            let k = if i == var { ei - 1 } else { ei };
            acc = acc * pow(x, k);
        }
        acc
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            match e {
                1 => write!(f, "x{i}")?,
                _ => write!(f, "x{i}^{e}")?,
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

fn pow<S: Field>(x: &S, e: u32) -> S {
    let mut acc = S::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}

/// The monomial basis of degree-`d` forms in `N + 1` variables, in graded
/// lexicographic order with `x0 > x1 > ... > xN`.
#[derive(Debug, Clone)]
pub struct CoeffSpace {
    n: usize,
    degree: u32,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

/// Builds [`CoeffSpace`] for `N >= 1`, `d >= 1`.
pub fn enumerate_monomials(n: usize, d: u32) -> Result<CoeffSpace, PolyError> {
    if n < 1 || d < 1 {
        return Err(PolyError::Domain(format!(
            "need N >= 1 and d >= 1, got N={n}, d={d}"
        )));
    }
    let mut basis = Vec::new();
    let mut current = vec![0u32; n + 1];
    fill_lex(&mut current, 0, d, &mut basis);
    let index = basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    Ok(CoeffSpace {
        n,
        degree: d,
        basis,
        index,
    })
}

fn fill_lex(current: &mut Vec<u32>, var: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if var + 1 == current.len() {
        current[var] = remaining;
        out.push(Monomial::new(current.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[var] = e;
        fill_lex(current, var + 1, remaining - e, out);
    }
    current[var] = 0;
}

impl CoeffSpace {
    /// `N`, the projective dimension of the ambient space.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_vars(&self) -> usize {
        self.n + 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// A point of projective space, normalised so the first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint<S> {
    coords: Vec<S>,
}

impl<S: Field> ProjectivePoint<S> {
    pub fn new(coords: Vec<S>) -> Result<Self, PolyError> {
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .ok_or(PolyError::ZeroPoint)?;
        let coords = coords.into_iter().map(|c| c / lead.clone()).collect();
        Ok(ProjectivePoint { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self, PolyError> {
        Self::new(coords.iter().map(|&c| S::from_i64(c)).collect())
    }

    /// The standard basis point `e_i` in `n_vars` coordinates.
    pub fn basis_point(n_vars: usize, i: usize) -> Self {
        let mut coords = vec![S::zero(); n_vars];
        coords[i] = S::one();
        ProjectivePoint { coords }
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn n_vars(&self) -> usize {
        self.coords.len()
    }
}

/// Where a condition row came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowTag {
    /// `∂f/∂x_var` vanishes at point `point`.
    Partial {
        point: usize,
        var: usize,
    },
    /// Derivative of `f|_Θ` along parametrization direction `direction` at a
    /// point of subspace `subspace`.
    Restricted {
        subspace: usize,
        point: usize,
        direction: usize,
    },
    /// `∂f/∂x_var` vanishes at lattice sample `sample` of a contained subspace.
    Containment {
        var: usize,
        sample: usize,
    },
    Other,
}

/// Linear functionals on a [`CoeffSpace`], one row per condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionMatrix<S> {
    ncols: usize,
    rows: Vec<Vec<S>>,
    provenance: Vec<RowTag>,
}

impl<S: Field> ConditionMatrix<S> {
    pub fn new(ncols: usize) -> Self {
        ConditionMatrix {
            ncols,
            rows: Vec::new(),
            provenance: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<S>, tag: RowTag) {
        assert_eq!(
            row.len(),
            self.ncols,
            "row length must equal the space dimension"
        );
        self.rows.push(row);
        self.provenance.push(tag);
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn provenance(&self) -> &[RowTag] {
        &self.provenance
    }

    pub fn extend(&mut self, other: ConditionMatrix<S>) {
        assert_eq!(self.ncols, other.ncols);
        self.rows.extend(other.rows);
        self.provenance.extend(other.provenance);
    }

    /// Rows reordered by `perm` (row `i` of the result is row `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        ConditionMatrix {
            ncols: self.ncols,
            rows: perm.iter().map(|&i| self.rows[i].clone()).collect(),
            provenance: perm.iter().map(|&i| self.provenance[i].clone()).collect(),
        }
    }

    pub fn scale_row(&mut self, row: usize, factor: &S) {
        for v in self.rows[row].iter_mut() {
            *v = v.clone() * factor.clone();
        }
    }

    pub fn map<T: Field>(&self, f: impl Fn(&S) -> T) -> ConditionMatrix<T> {
        ConditionMatrix {
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
            provenance: self.provenance.clone(),
        }
    }
}
