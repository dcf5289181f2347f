//! Closed-form codimension counts for loci of forms with positive-dimensional
//! singular sets, the integral simplex they are built from, and exhaustive
//! sweeps over parameter ranges.
//!
//! All formulas are generic over the integer type (see [`CodimInt`]); the crate
//! root fixes [`Codim`](crate::Codim) to `BigInt`.
//!
//! Parameter names follow the usual setting: `n` is the ambient dimension `N`,
//! `d` the degree, `k` the dimension of the span `P = <C>` of a singular
//! curve, `l` the dimension of the component of `Sing(f|_P)` through it, and
//! `q` the degree of a distinguished component.

mod sweep;

pub use sweep::{
    sweep, Family, MinimumRow, SweepConfig, SweepEntry, SweepReport, Theorem04Row, U32Range,
};

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use thiserror::Error;

/// Integer types the codimension formulas can be evaluated in.
pub trait CodimInt:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
}

impl<T> CodimInt for T where
    T: Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodimError {
    #[error("{op}: {reason}")]
    Domain { op: &'static str, reason: String },
    #[error("invalid sweep config: {0}")]
    Config(String),
}

fn domain(op: &'static str, reason: impl Into<String>) -> CodimError {
    CodimError::Domain {
        op,
        reason: reason.into(),
    }
}

pub(crate) fn int<I: CodimInt>(v: i64) -> I {
    I::from_i64(v).expect("every CodimInt holds i64 values")
}

/// `C(a, b)`, and 0 whenever `a < b` or `b < 0`.
pub fn binomial<I: CodimInt>(a: i64, b: i64) -> I {
    if b < 0 || a < b {
        return I::zero();
    }
    let b = b.min(a - b);
    let mut acc = I::one();
    for i in 1..=b {
        acc = acc * int::<I>(a - b + i) / int::<I>(i);
    }
    acc
}

/// The integral simplex `Δ_a = {e ∈ Z^r_+ : e_1 + ... + e_r <= a}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplexDelta {
    r: u32,
    a: u32,
}

impl SimplexDelta {
    pub fn new(r: u32, a: u32) -> Result<Self, CodimError> {
        if r < 1 {
            return Err(domain("simplex", format!("r must be at least 1, got {r}")));
        }
        Ok(SimplexDelta { r, a })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// `|Δ_a| = C(a + r, r)`.
    pub fn count<I: CodimInt>(&self) -> I {
        binomial(i64::from(self.a) + i64::from(self.r), i64::from(self.r))
    }

    /// The lattice points, graded by `|e|` and lexicographically descending
    /// within a grade.
    pub fn points(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for total in 0..=self.a {
            let mut cur = vec![0; self.r as usize];
            compositions(0, total, &mut cur, &mut out);
        }
        out
    }
}

fn compositions(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    for v in (0..=left).rev() {
        cur[i] = v;
        compositions(i + 1, left - v, cur, out);
    }
}

pub fn simplex_count<I: CodimInt>(r: u32, a: u32) -> Result<I, CodimError> {
    Ok(SimplexDelta::new(r, a)?.count())
}

fn ambient(op: &'static str, n: u32, d: u32) -> Result<(), CodimError> {
    if n < 3 || d < 3 {
        return Err(domain(
            op,
            format!("need N >= 3 and d >= 3, got N={n}, d={d}"),
        ));
    }
    Ok(())
}

/// Codimension of forms singular along some line: `(d-2)N + 3`.
pub fn codim_line<I: CodimInt>(n: u32, d: u32) -> Result<I, CodimError> {
    ambient("codim_line", n, d)?;
    Ok(int::<I>(i64::from(d) - 2) * int(n.into()) + int(3))
}

/// Codimension of forms singular along one fixed line: `dN + 1`.
pub fn codim_line_fixed<I: CodimInt>(n: u32, d: u32) -> Result<I, CodimError> {
    ambient("codim_line_fixed", n, d)?;
    Ok(int::<I>(d.into()) * int(n.into()) + I::one())
}

/// `k = l = 2`: a plane inside `{f = 0}` with a singular plane curve of degree `q`.
///
/// `(d+1)(d+2)/2 + (N-3)(qd - q(q-1)/2)` for `2 <= q <= d-1`, `N >= 3`.
pub fn codim_ex32<I: CodimInt>(n: u32, d: u32, q: u32) -> Result<I, CodimError> {
    if n < 3 || q < 2 || q + 1 > d {
        return Err(domain(
            "codim_ex32",
            format!("need N >= 3 and 2 <= q <= d-1, got N={n}, d={d}, q={q}"),
        ));
    }
    let (n, d, q) = (i64::from(n), i64::from(d), i64::from(q));
    Ok(int::<I>((d + 1) * (d + 2) / 2) + int::<I>(n - 3) * int::<I>(q * d - q * (q - 1) / 2))
}

/// The conditions on `f|_P` in the `k = 2, l = 1` case:
/// `(5q² - (4d+3)q + d² + 3d + 4) / 2` (the numerator is always even).
pub fn ex33_plane_part<I: CodimInt>(d: u32, q: u32) -> I {
    let (d, q) = (i64::from(d), i64::from(q));
    (int::<I>(5 * q * q) - int::<I>((4 * d + 3) * q) + int::<I>(d * d + 3 * d + 4)) / int::<I>(2)
}

/// `k = 2, l = 1`: plane part plus `(N-2)(2d+1)`, for `2 <= q`, `2q <= d`.
pub fn codim_ex33<I: CodimInt>(n: u32, d: u32, q: u32) -> Result<I, CodimError> {
    if n < 2 || q < 2 || 2 * q > d {
        return Err(domain(
            "codim_ex33",
            format!("need N >= 2, q >= 2 and 2q <= d, got N={n}, d={d}, q={q}"),
        ));
    }
    Ok(ex33_plane_part::<I>(d, q) + int::<I>(i64::from(n) - 2) * int(2 * i64::from(d) + 1))
}

/// Where the plane part of the `k = 2, l = 1` count is smallest over
/// `2 <= q <= d/2`, compared with the claim that `q = 2` is the minimiser.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct MinimizerCheck {
    pub d: u32,
    pub values: Vec<(u32, i64)>,
    pub argmin: Vec<u32>,
    pub q2_is_minimizer: bool,
}

pub fn ex33_minimizer(d: u32) -> Result<MinimizerCheck, CodimError> {
    if d < 4 {
        return Err(domain("ex33_minimizer", format!("need d >= 4, got {d}")));
    }
    let values: Vec<(u32, i64)> = (2..=d / 2)
        .map(|q| (q, ex33_plane_part::<i64>(d, q)))
        .collect();
    let min = values
        .iter()
        .map(|&(_, v)| v)
        .min()
        .expect("q = 2 is always admissible");
    let argmin: Vec<u32> = values
        .iter()
        .filter(|&&(_, v)| v == min)
        .map(|&(q, _)| q)
        .collect();
    Ok(MinimizerCheck {
        d,
        q2_is_minimizer: argmin.contains(&2),
        values,
        argmin,
    })
}

/// `l = k`: `C(k+d, d) + (N+1-2k)((d-1)k+1)`, needs `N + 1 >= 2k`.
pub fn codim_ex34<I: CodimInt>(n: u32, d: u32, k: u32) -> Result<I, CodimError> {
    if k < 1 || k > n || n + 1 < 2 * k || d < 1 {
        return Err(domain(
            "codim_ex34",
            format!("need 1 <= k <= N and N+1 >= 2k, got N={n}, d={d}, k={k}"),
        ));
    }
    let (n, d, k) = (i64::from(n), i64::from(d), i64::from(k));
    Ok(binomial::<I>(k + d, d) + int::<I>(n + 1 - 2 * k) * int::<I>((d - 1) * k + 1))
}

/// `l = k - 1`:
/// `C(k+d,k) - C(k+d-2q,k) - C(k+q,k) + (N+2-2k)((d-1)k+1)`,
/// needs `2 <= q`, `2q <= d`, `N + 2 >= 2k`.
pub fn codim_ex35<I: CodimInt>(n: u32, d: u32, k: u32, q: u32) -> Result<I, CodimError> {
    if k < 2 || k > n || n + 2 < 2 * k || q < 2 || 2 * q > d {
        return Err(domain(
            "codim_ex35",
            format!("need 2 <= k <= N, N+2 >= 2k, q >= 2, 2q <= d; got N={n}, d={d}, k={k}, q={q}"),
        ));
    }
    let (n, d, k, q) = (i64::from(n), i64::from(d), i64::from(k), i64::from(q));
    Ok(
        binomial::<I>(k + d, k) - binomial::<I>(k + d - 2 * q, k) - binomial::<I>(k + q, k)
            + int::<I>(n + 2 - 2 * k) * int::<I>((d - 1) * k + 1),
    )
}

/// `(d-2)N + (k+1)(N-k)`: what a fixed-plane count must reach so that the
/// moving-plane locus has codimension at least `(d-2)N`.
pub fn required_codim<I: CodimInt>(n: u32, d: u32, k: u32) -> I {
    let (n, d, k) = (i64::from(n), i64::from(d), i64::from(k));
    int::<I>(d - 2) * int::<I>(n) + int::<I>(k + 1) * int::<I>(n - k)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityEval<I> {
    pub lhs: I,
    pub rhs: I,
    pub verdict: bool,
}

/// Both sides of
/// `(k-l+1)|Δ_{d-3}| + (N+1-k-l)((d-1)k+1) >= (d-2)N + (k+1)(N-k)`
/// with `Δ_{d-3} ⊂ Z^l`, for `1 <= l <= k-2`, `k <= N`, `N+1 >= k+l`, `d >= 3`.
pub fn master_inequality<I: CodimInt>(
    n: u32,
    d: u32,
    k: u32,
    l: u32,
) -> Result<InequalityEval<I>, CodimError> {
    if l < 1 || l + 2 > k || k > n || d < 3 || n + 1 < k + l {
        return Err(domain(
            "master_inequality",
            format!(
                "need 1 <= l <= k-2, k <= N, N+1 >= k+l, d >= 3; got N={n}, d={d}, k={k}, l={l}"
            ),
        ));
    }
    let delta: I = simplex_count(l, d - 3)?;
    let (ni, di, ki, li) = (i64::from(n), i64::from(d), i64::from(k), i64::from(l));
    let lhs =
        int::<I>(ki - li + 1) * delta + int::<I>(ni + 1 - ki - li) * int::<I>((di - 1) * ki + 1);
    let rhs = required_codim::<I>(n, d, k);
    Ok(InequalityEval {
        verdict: lhs >= rhs,
        lhs,
        rhs,
    })
}

/// Passing from a fixed `k`-plane to a moving one costs at most the
/// Grassmannian dimension `(k+1)(N-k)`. Negative results are vacuous bounds.
pub fn prop31_adjust<I: CodimInt>(codim_fixed: I, n: u32, k: u32) -> I {
    codim_fixed - int::<I>(i64::from(k) + 1) * int::<I>(i64::from(n) - i64::from(k))
}

/// `(d-2)N`.
pub fn theorem03_bound<I: CodimInt>(n: u32, d: u32) -> Result<I, CodimError> {
    ambient("theorem03_bound", n, d)?;
    Ok(int::<I>(i64::from(d) - 2) * int(n.into()))
}

/// `min((M-2)(M-1)/2 + 1, 2M(M-1))` for `M >= 4`.
pub fn theorem04_bound<I: CodimInt>(m: u32) -> Result<I, CodimError> {
    let (generic, finite) = theorem04_terms::<I>(m)?;
    Ok(generic.min(finite))
}

/// The two terms of the minimum: the rank-at-most-2 locus count
/// and `(d-2)N` at `d = 2M, N = M`.
pub fn theorem04_terms<I: CodimInt>(m: u32) -> Result<(I, I), CodimError> {
    if m < 4 {
        return Err(domain("theorem04_bound", format!("need M >= 4, got {m}")));
    }
    let mi = i64::from(m);
    let generic = int::<I>((mi - 2) * (mi - 1) / 2 + 1);
    let finite = theorem03_bound::<I>(m, 2 * m)?;
    Ok((generic, finite))
}
