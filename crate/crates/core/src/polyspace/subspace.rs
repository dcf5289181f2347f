use super::rank::{field_rank, nullspace};
use super::{PolyError, ProjectivePoint};
use crate::scalar::Field;

/// A linear subspace of `P^N`, kept both as the zero set of independent
/// linear forms and as the span of a parametrization basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSubspace<S> {
    n_vars: usize,
    forms: Vec<Vec<S>>,
    basis: Vec<Vec<S>>,
}

fn dot<S: Field>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

impl<S: Field> LinearSubspace<S> {
    /// The whole space, parametrized by the standard basis.
    pub fn whole(n_vars: usize) -> Self {
        let basis = (0..n_vars)
            .map(|i| {
                let mut v = vec![S::zero(); n_vars];
                v[i] = S::one();
                v
            })
            .collect();
        LinearSubspace {
            n_vars,
            forms: Vec::new(),
            basis,
        }
    }

    /// Cuts out `{forms = 0}`; the parametrization is a nullspace basis.
    pub fn from_forms(n_vars: usize, forms: Vec<Vec<S>>) -> Result<Self, PolyError> {
        Self::check_forms(n_vars, &forms)?;
        let basis = nullspace(&forms, n_vars);
        Ok(LinearSubspace {
            n_vars,
            forms,
            basis,
        })
    }

    /// Uses a caller-supplied parametrization, which must span exactly the
    /// zero set of `forms`.
    pub fn with_parametrization(
        n_vars: usize,
        forms: Vec<Vec<S>>,
        basis: Vec<Vec<S>>,
    ) -> Result<Self, PolyError> {
        Self::check_forms(n_vars, &forms)?;
        if basis.len() + forms.len() != n_vars {
            return Err(PolyError::BadParametrization(format!(
                "{} basis vectors for a subspace of codimension {} in {} variables",
                basis.len(),
                forms.len(),
                n_vars
            )));
        }
        if basis.iter().any(|v| v.len() != n_vars) {
            return Err(PolyError::BadParametrization("wrong vector length".into()));
        }
        if field_rank(&basis) != basis.len() {
            return Err(PolyError::BadParametrization("basis is dependent".into()));
        }
        for (i, v) in basis.iter().enumerate() {
            if forms.iter().any(|f| !dot(f, v).is_negligible()) {
                return Err(PolyError::BadParametrization(format!(
                    "basis vector {i} is not on the subspace"
                )));
            }
        }
        Ok(LinearSubspace {
            n_vars,
            forms,
            basis,
        })
    }

    fn check_forms(n_vars: usize, forms: &[Vec<S>]) -> Result<(), PolyError> {
        if let Some(f) = forms.iter().find(|f| f.len() != n_vars) {
            return Err(PolyError::DimensionMismatch {
                expected: n_vars,
                got: f.len(),
            });
        }
        let rank = field_rank(forms);
        if rank != forms.len() {
            return Err(PolyError::DependentForms {
                rank,
                count: forms.len(),
            });
        }
        if forms.len() >= n_vars {
            return Err(PolyError::Domain("subspace would be empty".into()));
        }
        Ok(())
    }

    /// Same subspace, basis replaced by `transform · basis`.
    pub fn reparametrized(&self, transform: &[Vec<S>]) -> Result<Self, PolyError> {
        let k = self.basis.len();
        if transform.len() != k || transform.iter().any(|r| r.len() != k) {
            return Err(PolyError::BadParametrization(
                "transform has the wrong shape".into(),
            ));
        }
        if field_rank(transform) != k {
            return Err(PolyError::BadParametrization(
                "transform is singular".into(),
            ));
        }
        let basis = transform
            .iter()
            .map(|coeffs| {
                (0..self.n_vars)
                    .map(|j| {
                        coeffs
                            .iter()
                            .zip(&self.basis)
                            .fold(S::zero(), |acc, (c, v)| acc + c.clone() * v[j].clone())
                    })
                    .collect()
            })
            .collect();
        Ok(LinearSubspace {
            n_vars: self.n_vars,
            forms: self.forms.clone(),
            basis,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn codim(&self) -> usize {
        self.forms.len()
    }

    /// Projective dimension.
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn forms(&self) -> &[Vec<S>] {
        &self.forms
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn contains(&self, coords: &[S]) -> bool {
        coords.len() == self.n_vars && self.forms.iter().all(|f| dot(f, coords).is_negligible())
    }

    /// The vector `Σ params[a] · basis[a]`.
    pub fn combine(&self, params: &[S]) -> Vec<S> {
        (0..self.n_vars)
            .map(|j| {
                params
                    .iter()
                    .zip(&self.basis)
                    .fold(S::zero(), |acc, (c, v)| acc + c.clone() * v[j].clone())
            })
            .collect()
    }

    pub fn point(&self, params: &[S]) -> Result<ProjectivePoint<S>, PolyError> {
        ProjectivePoint::new(self.combine(params))
    }
}
