use super::{CoeffSpace, ConditionMatrix, LinearSubspace, PolyError, ProjectivePoint, RowTag};
use crate::codim::SimplexDelta;
use crate::scalar::Field;

fn check_point<S: Field>(space: &CoeffSpace, p: &ProjectivePoint<S>) -> Result<(), PolyError> {
    if p.n_vars() != space.n_vars() {
        return Err(PolyError::DimensionMismatch {
            expected: space.n_vars(),
            got: p.n_vars(),
        });
    }
    Ok(())
}

/// The functional `f ↦ ∂f/∂x_var (point)`.
pub fn derivative_row<S: Field>(space: &CoeffSpace, point: &[S], var: usize) -> Vec<S> {
    space
        .basis()
        .iter()
        .map(|m| m.derivative_at(var, point))
        .collect()
}

/// The functional `f ↦ f(point)`.
pub fn evaluation_row<S: Field>(space: &CoeffSpace, point: &[S]) -> Vec<S> {
    space.basis().iter().map(|m| m.eval(point)).collect()
}

/// One row per (point, partial derivative); the kernel is the space of forms
/// singular at every listed point.
pub fn singularity_conditions<S: Field>(
    space: &CoeffSpace,
    points: &[ProjectivePoint<S>],
) -> Result<ConditionMatrix<S>, PolyError> {
    let mut m = ConditionMatrix::new(space.dim());
    for (pi, p) in points.iter().enumerate() {
        check_point(space, p)?;
        for var in 0..space.n_vars() {
            m.push(
                derivative_row(space, p.coords(), var),
                RowTag::Partial { point: pi, var },
            );
        }
    }
    Ok(m)
}

/// Conditions `points ⊂ Sing(f|_Θ)`, written on the ambient coefficients.
///
/// With `Θ` parametrized by `t ↦ Σ t_a v_a`, the derivative of `f|_Θ` in `t_a`
/// at a point is the directional derivative of `f` along `v_a`. These
/// `dim Θ + 1` functionals span the value functional and the intrinsic
/// derivatives (Euler), so they cut out the same subspace.
pub fn restricted_singularity_conditions<S: Field>(
    space: &CoeffSpace,
    theta: &LinearSubspace<S>,
    points: &[ProjectivePoint<S>],
) -> Result<ConditionMatrix<S>, PolyError> {
    restricted_rows(space, theta, points, 0)
}

fn restricted_rows<S: Field>(
    space: &CoeffSpace,
    theta: &LinearSubspace<S>,
    points: &[ProjectivePoint<S>],
    subspace: usize,
) -> Result<ConditionMatrix<S>, PolyError> {
    if theta.n_vars() != space.n_vars() {
        return Err(PolyError::DimensionMismatch {
            expected: space.n_vars(),
            got: theta.n_vars(),
        });
    }
    let mut m = ConditionMatrix::new(space.dim());
    for (pi, p) in points.iter().enumerate() {
        check_point(space, p)?;
        if !theta.contains(p.coords()) {
            return Err(PolyError::PointOffSubspace { index: pi });
        }
        let partials: Vec<Vec<S>> = (0..space.n_vars())
            .map(|var| derivative_row(space, p.coords(), var))
            .collect();
        for (direction, v) in theta.basis().iter().enumerate() {
            let mut row = vec![S::zero(); space.dim()];
            for (vj, dj) in v.iter().zip(&partials) {
                if vj.is_zero() {
                    continue;
                }
                for (acc, x) in row.iter_mut().zip(dj) {
                    *acc = acc.clone() + vj.clone() * x.clone();
                }
            }
            m.push(
                row,
                RowTag::Restricted {
                    subspace,
                    point: pi,
                    direction,
                },
            );
        }
    }
    Ok(m)
}

/// Stacks [`restricted_singularity_conditions`] over several subspaces.
pub fn family_singularity_conditions<S: Field>(
    space: &CoeffSpace,
    family: &[(LinearSubspace<S>, Vec<ProjectivePoint<S>>)],
) -> Result<ConditionMatrix<S>, PolyError> {
    let mut m = ConditionMatrix::new(space.dim());
    for (i, (theta, points)) in family.iter().enumerate() {
        m.extend(restricted_rows(space, theta, points, i)?);
    }
    Ok(m)
}

/// Conditions `sub ⊂ Sing(f)`: each `∂f/∂x_j` restricted to `sub` is a form
/// of degree `d - 1` in the parameters, and it vanishes identically iff it
/// vanishes on the principal lattice `{Σ α_a v_a : |α| = d - 1}`.
pub fn subspace_singularity_conditions<S: Field>(
    space: &CoeffSpace,
    sub: &LinearSubspace<S>,
) -> Result<ConditionMatrix<S>, PolyError> {
    if sub.n_vars() != space.n_vars() {
        return Err(PolyError::DimensionMismatch {
            expected: space.n_vars(),
            got: sub.n_vars(),
        });
    }
    let k = space.degree() - 1;
    let samples: Vec<Vec<S>> = if k == 0 {
        vec![sub.basis()[0].clone()]
    } else {
        lattice_points(sub.basis().len(), k)
            .into_iter()
            .map(|alpha| {
                let params: Vec<S> = alpha.iter().map(|&a| S::from_i64(i64::from(a))).collect();
                sub.combine(&params)
            })
            .collect()
    };
    let mut m = ConditionMatrix::new(space.dim());
    for var in 0..space.n_vars() {
        for (sample, p) in samples.iter().enumerate() {
            m.push(
                derivative_row(space, p, var),
                RowTag::Containment { var, sample },
            );
        }
    }
    Ok(m)
}

fn lattice_points(parts: usize, total: u32) -> Vec<Vec<u32>> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for a in (0..=left).rev() {
            cur[i] = a;
            go(i + 1, left - a, cur, out);
        }
    }
    let mut out = Vec::new();
    go(0, total, &mut vec![0; parts], &mut out);
    out
}

/// `Σ_j p_j · derivative_rows[j] == d · evaluation_row(p)` as exact vectors.
pub fn euler_identity_holds<S: Field>(
    space: &CoeffSpace,
    point: &ProjectivePoint<S>,
    derivative_rows: &[Vec<S>],
) -> bool {
    if derivative_rows.len() != space.n_vars() {
        return false;
    }
    let eval = evaluation_row(space, point.coords());
    let d = S::from_i64(i64::from(space.degree()));
    (0..space.dim()).all(|c| {
        let lhs = point
            .coords()
            .iter()
            .zip(derivative_rows)
            .fold(S::zero(), |acc, (x, row)| acc + x.clone() * row[c].clone());
        (lhs - d.clone() * eval[c].clone()).is_negligible()
    })
}

/// Euler's identity for the derivative rows this module builds at `point`.
pub fn euler_identity_check<S: Field>(space: &CoeffSpace, point: &ProjectivePoint<S>) -> bool {
    if point.n_vars() != space.n_vars() {
        return false;
    }
    let rows: Vec<Vec<S>> = (0..space.n_vars())
        .map(|var| derivative_row(space, point.coords(), var))
        .collect();
    euler_identity_holds(space, point, &rows)
}

/// The subspaces `Θ(e) = {l_i - λ_{i,e_i} l_0 = 0, i = 1..r}` for `e` in the
/// integral simplex `Δ_{d-3}`, with `λ_{i,j} = j`.
#[derive(Debug, Clone)]
pub struct ThetaFamily<S> {
    degree: u32,
    base_forms: Vec<Vec<S>>,
    members: Vec<(Vec<u32>, LinearSubspace<S>)>,
}

impl<S: Field> ThetaFamily<S> {
    /// `base_forms` are `l_0, l_1, ..., l_r`, linearly independent.
    pub fn new(n_vars: usize, base_forms: Vec<Vec<S>>, degree: u32) -> Result<Self, PolyError> {
        if degree < 3 {
            return Err(PolyError::Domain(format!("need d >= 3, got {degree}")));
        }
        if base_forms.len() < 2 {
            return Err(PolyError::Domain(
                "need forms l_0, ..., l_r with r >= 1".into(),
            ));
        }
        // independence of l_0..l_r; Π = {all l_i = 0} must be nonempty
        LinearSubspace::from_forms(n_vars, base_forms.clone())?;
        let r = base_forms.len() - 1;
        let delta = SimplexDelta::new(r as u32, degree - 3)
            .map_err(|e| PolyError::Domain(e.to_string()))?;
        let l0 = &base_forms[0];
        let members = delta
            .points()
            .into_iter()
            .map(|e| {
                let forms = (1..=r)
                    .map(|i| {
                        let lambda = S::from_i64(i64::from(e[i - 1]));
                        base_forms[i]
                            .iter()
                            .zip(l0)
                            .map(|(li, l0j)| li.clone() - lambda.clone() * l0j.clone())
                            .collect()
                    })
                    .collect();
                LinearSubspace::from_forms(n_vars, forms).map(|s| (e, s))
            })
            .collect::<Result<_, _>>()?;
        Ok(ThetaFamily {
            degree,
            base_forms,
            members,
        })
    }

    /// `l_i = x_i` for `i = 0..=r`.
    pub fn coordinate(n_vars: usize, r: usize, degree: u32) -> Result<Self, PolyError> {
        if r + 1 >= n_vars {
            return Err(PolyError::Domain(format!(
                "codimension {} leaves nothing of P^{}",
                r + 1,
                n_vars - 1
            )));
        }
        let forms = (0..=r)
            .map(|i| {
                let mut f = vec![S::zero(); n_vars];
                f[i] = S::one();
                f
            })
            .collect();
        Self::new(n_vars, forms, degree)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn codim(&self) -> usize {
        self.base_forms.len() - 1
    }

    /// `l_0`; points of `Θ(e) \ Π` are exactly those with `l_0 ≠ 0`.
    pub fn l0(&self) -> &[S] {
        &self.base_forms[0]
    }

    pub fn members(&self) -> &[(Vec<u32>, LinearSubspace<S>)] {
        &self.members
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::{enumerate_monomials, exact_rank};
    use num_rational::BigRational;

    type P = ProjectivePoint<BigRational>;

    #[test]
    fn two_basis_points_on_cubic_surfaces() {
        let space = enumerate_monomials(3, 3).unwrap();
        let pts = [P::basis_point(4, 0), P::basis_point(4, 1)];
        let m = singularity_conditions(&space, &pts).unwrap();
        assert_eq!(m.nrows(), 8);
        assert_eq!(exact_rank(&m), 8);
    }

    #[test]
    fn quadrics_lose_one_condition() {
        // x0*x1 appears in both points' conditions when d = 2
        let space = enumerate_monomials(3, 2).unwrap();
        let pts = [P::basis_point(4, 0), P::basis_point(4, 1)];
        let m = singularity_conditions(&space, &pts).unwrap();
        assert_eq!(exact_rank(&m), 7);
        assert_eq!(space.dim() - exact_rank(&m), 3);
    }

    #[test]
    fn no_points_no_rows() {
        let space = enumerate_monomials(3, 4).unwrap();
        let m = singularity_conditions::<BigRational>(&space, &[]).unwrap();
        assert_eq!(m.nrows(), 0);
        assert_eq!(exact_rank(&m), 0);
    }

    #[test]
    fn wrong_point_dimension() {
        let space = enumerate_monomials(3, 3).unwrap();
        let err = singularity_conditions(&space, &[P::basis_point(3, 0)]).unwrap_err();
        assert_eq!(
            err,
            PolyError::DimensionMismatch {
                expected: 4,
                got: 3
            }
        );
    }

    #[test]
    fn whole_space_restriction_is_plain_singularity() {
        let space = enumerate_monomials(3, 4).unwrap();
        let pts = [
            P::from_i64(&[1, 2, -1, 3]).unwrap(),
            P::from_i64(&[0, 1, 1, 5]).unwrap(),
        ];
        let plain = singularity_conditions(&space, &pts).unwrap();
        let restricted =
            restricted_singularity_conditions(&space, &LinearSubspace::whole(4), &pts).unwrap();
        assert_eq!(plain.rows(), restricted.rows());
    }

    #[test]
    fn restriction_rejects_points_off_theta() {
        let space = enumerate_monomials(3, 3).unwrap();
        let theta = LinearSubspace::from_forms(
            4,
            vec![vec![
                BigRational::from_integer(0.into()),
                BigRational::from_integer(1.into()),
                BigRational::from_integer(0.into()),
                BigRational::from_integer(0.into()),
            ]],
        )
        .unwrap();
        let err = restricted_singularity_conditions(
            &space,
            &theta,
            &[P::from_i64(&[1, 1, 0, 0]).unwrap()],
        )
        .unwrap_err();
        assert_eq!(err, PolyError::PointOffSubspace { index: 0 });
    }

    #[test]
    fn euler_identity_on_plane_quartics() {
        let space = enumerate_monomials(2, 4).unwrap();
        let p = P::from_i64(&[1, 1, 1]).unwrap();
        assert!(euler_identity_check(&space, &p));
    }

    #[test]
    fn corrupted_derivative_row_breaks_euler() {
        let space = enumerate_monomials(2, 4).unwrap();
        let p = P::from_i64(&[1, 2, 3]).unwrap();
        let mut rows: Vec<Vec<BigRational>> = (0..3)
            .map(|v| derivative_row(&space, p.coords(), v))
            .collect();
        assert!(euler_identity_holds(&space, &p, &rows));
        rows[1][4] = rows[1][4].clone() + BigRational::from_integer(1.into());
        assert!(!euler_identity_holds(&space, &p, &rows));
    }

    #[test]
    fn lattice_point_counts() {
        assert_eq!(lattice_points(2, 3).len(), 4);
        assert_eq!(lattice_points(3, 2).len(), 6);
    }

    #[test]
    fn theta_family_sizes() {
        let fam = ThetaFamily::<BigRational>::coordinate(4, 1, 5).unwrap();
        assert_eq!(fam.members().len(), 3);
        let fam = ThetaFamily::<BigRational>::coordinate(5, 2, 6).unwrap();
        assert_eq!(fam.members().len(), 10);
        assert!(ThetaFamily::<BigRational>::coordinate(4, 1, 2).is_err());
        for (e, theta) in fam.members() {
            assert_eq!(theta.codim(), 2);
            // every Θ(e) contains Π = {x0 = x1 = x2 = 0}
            let mut p = vec![BigRational::from_integer(0.into()); 5];
            p[3] = BigRational::from_integer(1.into());
            assert!(theta.contains(&p), "Θ({e:?}) must contain Π");
        }
    }
}
