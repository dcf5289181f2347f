//! Rank against formula for the three codimension claims on `P_{N,d}`, one
//! seeded instance at a time.

use serde::{Deserialize, Serialize};

use super::conditions::{
    family_singularity_conditions, singularity_conditions, subspace_singularity_conditions,
    ThetaFamily,
};
use super::sampling::{random_generic_points, random_generic_points_off};
use super::{enumerate_monomials, exact_rank, LinearSubspace, PolyError};
use crate::codim::binomial;
use crate::scalar::ExactField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankSuite {
    /// `m` independent points: rank `m(N + 1)`.
    Points,
    /// A fixed line in the singular locus: rank `dN + 1`.
    Line,
    /// The family `Θ(e)` with `m` points each: rank `m(N - r + 1)|Δ|`.
    Family,
}

impl RankSuite {
    pub fn as_str(self) -> &'static str {
        match self {
            RankSuite::Points => "points",
            RankSuite::Line => "line",
            RankSuite::Family => "family",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub suite: RankSuite,
    pub n: usize,
    pub d: u32,
    /// Points per subspace; 0 for the line suite.
    pub m: usize,
    /// Codimension of `Θ(e)`; 0 outside the family suite.
    pub r: usize,
    pub seed: u64,
    pub rows: usize,
    pub cols: usize,
    pub expected: u64,
    pub rank: u64,
}

impl RankCheck {
    pub fn matches(&self) -> bool {
        self.expected == self.rank
    }
}

/// Rank of the conditions "`m` seeded points are singular".
pub fn points_check<S: ExactField>(
    n: usize,
    d: u32,
    m: usize,
    seed: u64,
) -> Result<RankCheck, PolyError> {
    let space = enumerate_monomials(n, d)?;
    let pts = random_generic_points(&LinearSubspace::<S>::whole(n + 1), m, seed)?;
    let mat = singularity_conditions(&space, &pts)?;
    Ok(RankCheck {
        suite: RankSuite::Points,
        n,
        d,
        m,
        r: 0,
        seed,
        rows: mat.nrows(),
        cols: mat.ncols(),
        expected: (m * (n + 1)) as u64,
        rank: exact_rank(&mat) as u64,
    })
}

/// Rank of "`L ⊂ Sing f`" for the line spanned by two seeded points.
pub fn line_check<S: ExactField>(n: usize, d: u32, seed: u64) -> Result<RankCheck, PolyError> {
    let space = enumerate_monomials(n, d)?;
    let whole = LinearSubspace::<S>::whole(n + 1);
    let pts = random_generic_points(&whole, 2, seed)?;
    // the line through the two points is cut out by the forms killing both
    let spanning: Vec<Vec<S>> = pts.iter().map(|p| p.coords().to_vec()).collect();
    let forms = super::nullspace(&spanning, n + 1);
    let line = LinearSubspace::with_parametrization(n + 1, forms, spanning)?;
    let mat = subspace_singularity_conditions(&space, &line)?;
    Ok(RankCheck {
        suite: RankSuite::Line,
        n,
        d,
        m: 0,
        r: 0,
        seed,
        rows: mat.nrows(),
        cols: mat.ncols(),
        expected: u64::from(d) * n as u64 + 1,
        rank: exact_rank(&mat) as u64,
    })
}

/// Total rank of the restricted conditions over the coordinate family
/// `Θ(e)`, `e ∈ Δ`, with `m` seeded points off `Π` on each member.
pub fn family_check<S: ExactField>(
    n: usize,
    r: usize,
    d: u32,
    m: usize,
    seed: u64,
) -> Result<RankCheck, PolyError> {
    let space = enumerate_monomials(n, d)?;
    let family = ThetaFamily::<S>::coordinate(n + 1, r, d)?;
    let data = family
        .members()
        .iter()
        .enumerate()
        .map(|(i, (_, theta))| {
            let pts =
                random_generic_points_off(theta, m, seed.wrapping_add(i as u64), family.l0())?;
            Ok((theta.clone(), pts))
        })
        .collect::<Result<Vec<_>, PolyError>>()?;
    let mat = family_singularity_conditions(&space, &data)?;
    let delta: i64 = binomial(i64::from(d) - 3 + r as i64, r as i64);
    Ok(RankCheck {
        suite: RankSuite::Family,
        n,
        d,
        m,
        r,
        seed,
        rows: mat.nrows(),
        cols: mat.ncols(),
        expected: (m * (n - r + 1)) as u64 * delta as u64,
        rank: exact_rank(&mat) as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn cubic_surface_points() {
        let c = points_check::<BigRational>(3, 3, 2, 7).unwrap();
        assert_eq!((c.rows, c.cols, c.rank), (8, 20, 8));
        assert!(c.matches());
    }

    #[test]
    fn quadrics_fall_short() {
        let c = points_check::<BigRational>(3, 2, 2, 1).unwrap();
        assert_eq!(c.rank, 7);
        assert!(!c.matches());
    }

    #[test]
    fn line_in_quartic_threefold() {
        let c = line_check::<BigRational>(4, 4, 3).unwrap();
        assert_eq!(c.expected, 17);
        assert!(c.matches(), "{c:?}");
    }

    #[test]
    fn family_of_planes() {
        let c = family_check::<BigRational>(3, 1, 5, 3, 11).unwrap();
        assert_eq!(c.expected, 27);
        assert!(c.matches(), "{c:?}");
    }
}
