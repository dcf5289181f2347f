use crate::scalar::OrderedField;

use super::ExcluderError;

#[derive(Debug, Clone, PartialEq)]
pub struct QpSolution<S> {
    pub nu: Vec<S>,
    pub theta: S,
    pub min_value: S,
}

/// Minimises `Σ r_i μ_i ν_i²` on the hyperplane `Σ r_i ν_i = c`.
///
/// Stationarity gives `2 r_i μ_i ν_i = τ r_i`, so `ν_i = θ / μ_i` with
/// `θ = c / Σ (r_i / μ_i)`, and the minimum is `c² / Σ (r_i / μ_i)`.
pub fn qp_minimize<S: OrderedField>(
    r: &[S],
    mu: &[u8],
    c: &S,
) -> Result<QpSolution<S>, ExcluderError> {
    if r.is_empty() {
        return Err(ExcluderError::Domain(
            "qp_minimize needs at least one variable".into(),
        ));
    }
    if r.len() != mu.len() {
        return Err(ExcluderError::DimensionMismatch {
            what: "mu",
            expected: r.len(),
            got: mu.len(),
        });
    }
    if let Some(i) = r.iter().position(|x| *x <= S::zero()) {
        return Err(ExcluderError::Domain(format!("r[{i}] must be positive")));
    }
    if let Some(i) = mu.iter().position(|&m| m != 1 && m != 2) {
        return Err(ExcluderError::Domain(format!(
            "mu[{i}] = {} is not 1 or 2",
            mu[i]
        )));
    }
    if *c <= S::zero() {
        return Err(ExcluderError::Domain("c must be positive".into()));
    }
    let mus: Vec<S> = mu.iter().map(|&m| S::from_i64(m.into())).collect();
    let denom = r
        .iter()
        .zip(&mus)
        .fold(S::zero(), |acc, (ri, mi)| acc + ri.clone() / mi.clone());
    let theta = c.clone() / denom.clone();
    let nu = mus.iter().map(|mi| theta.clone() / mi.clone()).collect();
    Ok(QpSolution {
        nu,
        min_value: c.clone() * c.clone() / denom,
        theta,
    })
}

/// `Σ r_i μ_i ν_i²`.
pub fn qp_objective<S: OrderedField>(r: &[S], mu: &[u8], nu: &[S]) -> S {
    r.iter()
        .zip(mu)
        .zip(nu)
        .fold(S::zero(), |acc, ((ri, &m), ni)| {
            acc + ri.clone() * S::from_i64(m.into()) * ni.clone() * ni.clone()
        })
}
