//! Noether-Fano arithmetic for a singularity over a resolution graph, the
//! pigeonhole step that produces a supermaximal singularity, and the chain of
//! estimates that rules supermaximal singularities out.

mod chain;
mod pigeonhole;
mod poly;
mod qp;

pub use chain::{
    chain_verify, lhs_bound, step_b_sides, step_c_sides, theta_numerator, Certificate, ChainReport,
    StepCertificate,
};
pub use pigeonhole::{
    find_supermaximal, FibreDivisor, MaximalSingularity, PigeonholeInstance, PigeonholeLink,
    PigeonholeOutcome,
};
pub use poly::{MultiPoly, Sym, NSYM};
pub use qp::{qp_minimize, qp_objective, QpSolution};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::respath::{
    r_coeffs, random_graph, sigma_partition, GraphError, GraphParams, ResolutionGraph,
    SigmaPartition,
};
use crate::scalar::ExactField;
use crate::serial;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExcluderError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{what} has {got} entries, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("domain error: {0}")]
    Domain(String),
}

/// A divisorial valuation `E` over the resolution graph, with the multiplicities
/// `ν_i` of the mobile system along the centres.
#[derive(Debug, Clone, PartialEq)]
pub struct NFInstance<S> {
    graph: ResolutionGraph,
    n: u64,
    nu: Vec<S>,
    lambda: S,
    r: Vec<BigInt>,
}

impl<S: ExactField> NFInstance<S> {
    pub fn new(
        graph: ResolutionGraph,
        n: u64,
        nu: Vec<S>,
        lambda: S,
    ) -> Result<Self, ExcluderError> {
        let r = r_coeffs(&graph)?;
        if n < 1 {
            return Err(ExcluderError::Domain("n must be at least 1".into()));
        }
        if nu.len() != graph.k() {
            return Err(ExcluderError::DimensionMismatch {
                what: "nu",
                expected: graph.k(),
                got: nu.len(),
            });
        }
        if let Some(i) = nu.iter().position(|x| *x <= S::zero()) {
            return Err(ExcluderError::Domain(format!(
                "nu_{} must be positive",
                i + 1
            )));
        }
        if lambda < S::zero() {
            return Err(ExcluderError::Domain("lambda must be non-negative".into()));
        }
        Ok(NFInstance {
            graph,
            n,
            nu,
            lambda,
            r,
        })
    }

    pub fn graph(&self) -> &ResolutionGraph {
        &self.graph
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    fn n_s(&self) -> S {
        S::from_bigint(&BigInt::from(self.n))
    }

    pub fn nu(&self) -> &[S] {
        &self.nu
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    /// `r_1..r_K` (index 0 unused).
    pub fn r(&self) -> &[BigInt] {
        &self.r
    }

    fn r_s(&self, i: usize) -> S {
        S::from_bigint(&self.r[i])
    }

    pub fn with_nu(&self, nu: Vec<S>) -> Result<Self, ExcluderError> {
        NFInstance::new(self.graph.clone(), self.n, nu, self.lambda.clone())
    }

    /// `ord_E Σ = Σ r_i ν_i`.
    pub fn ord_sigma(&self) -> S {
        (1..=self.graph.k()).fold(S::zero(), |acc, i| {
            acc + self.r_s(i) * self.nu[i - 1].clone()
        })
    }

    /// `a(E) = Σ r_i δ_i`.
    pub fn discrepancy(&self) -> S {
        (1..=self.graph.k()).fold(S::zero(), |acc, i| {
            acc + self.r_s(i) * S::from_i64(self.graph.delta(i))
        })
    }

    /// `ord_E T = Σ_{i <= L_fibre} r_i γ_i`.
    pub fn ord_t(&self) -> S {
        (1..=self.graph.l_fibre).fold(S::zero(), |acc, i| {
            let gamma = self.graph.vertex(i).gamma.expect("validated graph");
            acc + self.r_s(i) * S::from_i64(gamma.into())
        })
    }

    /// `ε(E) = ord_E Σ - n a(E)`.
    pub fn epsilon(&self) -> S {
        self.ord_sigma() - self.n_s() * self.discrepancy()
    }

    /// `2n ε(E) > λ ord_E T`.
    pub fn is_supermaximal(&self) -> bool {
        S::from_i64(2) * self.n_s() * self.epsilon() > self.lambda.clone() * self.ord_t()
    }
}

/// JSON form of an [`NFInstance`]; rationals are integers or `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub graph: ResolutionGraph,
    pub n: u64,
    #[serde(
        serialize_with = "serial::rational_vec",
        deserialize_with = "serial::de_rational_vec"
    )]
    pub nu: Vec<BigRational>,
    #[serde(
        serialize_with = "serial::rational",
        deserialize_with = "serial::de_rational"
    )]
    pub lambda: BigRational,
}

impl TryFrom<InstanceDoc> for NFInstance<BigRational> {
    type Error = ExcluderError;

    fn try_from(doc: InstanceDoc) -> Result<Self, ExcluderError> {
        NFInstance::new(doc.graph, doc.n, doc.nu, doc.lambda)
    }
}

impl<S: ExactField> NFInstance<S> {
    pub fn to_doc(&self) -> InstanceDoc {
        InstanceDoc {
            graph: self.graph.clone(),
            n: self.n,
            nu: self.nu.iter().map(ExactField::to_big_rational).collect(),
            lambda: self.lambda.to_big_rational(),
        }
    }
}

/// The data of the multiplicity-counting system on the lower part `1..=L`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityData<S> {
    /// `m_1..m_L`.
    pub m: Vec<S>,
    /// `cross[i][j] = m_{i+1,j+1}` for `i < j`; an `L x L` matrix, the rest ignored.
    pub cross: Vec<Vec<S>>,
    /// `d_1..d_L`.
    pub d: Vec<S>,
}

impl<S: ExactField> MultiplicityData<S> {
    /// Chooses `d_i` so that every equality of the system holds.
    pub fn solve_degrees(
        inst: &NFInstance<S>,
        m: Vec<S>,
        cross: Vec<Vec<S>>,
    ) -> Result<Self, ExcluderError> {
        let l = inst.graph.lower_end();
        let mut data = MultiplicityData {
            m,
            cross,
            d: vec![S::zero(); l],
        };
        data.check_shape(l)?;
        for i in 0..l {
            data.d[i] = data.row_rhs(i) - mu_nu_sq(inst, i + 1);
        }
        Ok(data)
    }

    fn check_shape(&self, l: usize) -> Result<(), ExcluderError> {
        let mismatch = |what, got| ExcluderError::DimensionMismatch {
            what,
            expected: l,
            got,
        };
        if self.m.len() != l {
            return Err(mismatch("m", self.m.len()));
        }
        if self.d.len() != l {
            return Err(mismatch("d", self.d.len()));
        }
        if self.cross.len() != l {
            return Err(mismatch("cross", self.cross.len()));
        }
        if let Some(row) = self.cross.iter().find(|row| row.len() != l) {
            return Err(mismatch("cross row", row.len()));
        }
        Ok(())
    }

    /// `m_i + m_{1,i} + ... + m_{i-1,i}` for 0-based `i`.
    fn row_rhs(&self, i: usize) -> S {
        (0..i).fold(self.m[i].clone(), |acc, j| acc + self.cross[j][i].clone())
    }
}

fn mu_nu_sq<S: ExactField>(inst: &NFInstance<S>, i: usize) -> S {
    let nu = inst.nu[i - 1].clone();
    S::from_i64(inst.graph.vertex(i).mu.into()) * nu.clone() * nu
}

#[derive(Debug, Clone, PartialEq)]
pub enum SystemViolation<S> {
    /// Row `row` (1-based) of the equality system fails.
    Row { row: usize, lhs: S, rhs: S },
    /// `d_L < Σ_{i > L} ν_i²`.
    Estimate { d_l: S, tail: S },
    /// A multiplicity or degree is negative.
    Negative { field: String },
}

/// Checks `μ_i ν_i² + d_i = m_i + Σ_{j<i} m_{j,i}` for `i <= L` and
/// `d_L >= Σ_{i>L} ν_i²`.
pub fn counting_system_check<S: ExactField>(
    inst: &NFInstance<S>,
    data: &MultiplicityData<S>,
) -> Result<Vec<SystemViolation<S>>, ExcluderError> {
    let l = inst.graph.lower_end();
    data.check_shape(l)?;
    let mut out = Vec::new();
    for i in 0..l {
        for (name, v) in [("m", &data.m[i]), ("d", &data.d[i])] {
            if *v < S::zero() {
                out.push(SystemViolation::Negative {
                    field: format!("{name}_{}", i + 1),
                });
            }
        }
        for j in 0..i {
            if data.cross[j][i] < S::zero() {
                out.push(SystemViolation::Negative {
                    field: format!("m_{},{}", j + 1, i + 1),
                });
            }
        }
    }
    for i in 0..l {
        let lhs = mu_nu_sq(inst, i + 1) + data.d[i].clone();
        let rhs = data.row_rhs(i);
        if lhs != rhs {
            out.push(SystemViolation::Row {
                row: i + 1,
                lhs,
                rhs,
            });
        }
    }
    if l >= 1 {
        let tail = inst.nu[l..]
            .iter()
            .fold(S::zero(), |acc, v| acc + v.clone() * v.clone());
        if data.d[l - 1] < tail {
            out.push(SystemViolation::Estimate {
                d_l: data.d[l - 1].clone(),
                tail,
            });
        }
    }
    Ok(out)
}

/// Both sides of `Σ_{i<=L} r_i m_i >= Σ_{i<=K} r_i μ_i ν_i²`; no verdict.
pub fn inequality_11_evaluate<S: ExactField>(
    inst: &NFInstance<S>,
    m: &[S],
) -> Result<(S, S), ExcluderError> {
    let l = inst.graph.lower_end();
    if m.len() != l {
        return Err(ExcluderError::DimensionMismatch {
            what: "m",
            expected: l,
            got: m.len(),
        });
    }
    let lhs = m
        .iter()
        .enumerate()
        .fold(S::zero(), |acc, (i, mi)| acc + inst.r_s(i + 1) * mi.clone());
    let rhs = (1..=inst.graph.k()).fold(S::zero(), |acc, i| acc + inst.r_s(i) * mu_nu_sq(inst, i));
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Infeasible,
    NotSupermaximal,
    /// The instantiated bounds failed to contradict each other.
    NotExcluded,
}

/// `Σ r_i` over vertices with `μ_i = 1` and `μ_i = 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuPartition {
    #[serde(serialize_with = "serial::int")]
    pub sigma_mu1: BigInt,
    #[serde(serialize_with = "serial::int")]
    pub sigma_mu2: BigInt,
}

/// `2neS_u <= n²S_u² + e²` at the instance values, as `(nS_u - e)² >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TerminalCheck {
    #[serde(serialize_with = "serial::rational")]
    pub two_ne_su: BigRational,
    #[serde(serialize_with = "serial::rational")]
    pub n2_su2_plus_e2: BigRational,
    #[serde(serialize_with = "serial::rational")]
    pub root: BigRational,
    #[serde(serialize_with = "serial::rational")]
    pub square: BigRational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExclusionReport {
    pub verdict: Verdict,
    pub n: u64,
    #[serde(serialize_with = "serial::rational")]
    pub epsilon: BigRational,
    #[serde(serialize_with = "serial::rational")]
    pub lambda: BigRational,
    #[serde(serialize_with = "serial::rational")]
    pub ord_t: BigRational,
    #[serde(serialize_with = "serial::rational")]
    pub discrepancy: BigRational,
    #[serde(serialize_with = "serial::rational")]
    pub ord_sigma: BigRational,
    pub partition: SigmaPartition,
    pub mu_partition: MuPartition,
    /// `4n² S_l + 4ne`, a strict upper bound for the left side.
    #[serde(serialize_with = "serial::rational")]
    pub lhs_upper: BigRational,
    /// `2(2nS_l + nS_u + e)² / (S'_sing + 2S'_ns)` with the `μ`-split sums.
    #[serde(serialize_with = "serial::rational")]
    pub relaxed_lower: BigRational,
    /// `c² / Σ(r_i/μ_i)` with `c = ord_E Σ`: the minimum of the right side.
    #[serde(serialize_with = "serial::rational")]
    pub qp_lower: BigRational,
    /// The right side at the instance's own `ν`.
    #[serde(serialize_with = "serial::rational")]
    pub rhs_at_nu: BigRational,
    pub terminal: TerminalCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Instantiates the exclusion chain at the instance's exact values.
///
/// The verdict is `infeasible` when the strict upper bound on the left side
/// does not exceed the minimum of the right side over the Noether-Fano
/// hyperplane, so the multiplicity inequality cannot hold.
pub fn exclude<S: ExactField>(inst: &NFInstance<S>) -> Result<ExclusionReport, ExcluderError> {
    let g = inst.graph();
    let n = BigRational::from_integer(inst.n.into());
    let e = inst.epsilon().to_big_rational();
    let partition = sigma_partition(g)?;
    let (sl, su) = (rat(&partition.sigma_l), rat(&partition.sigma_u));

    let mut sigma_mu1 = BigInt::zero();
    let mut sigma_mu2 = BigInt::zero();
    for i in 1..=g.k() {
        if g.vertex(i).mu == 2 {
            sigma_mu2 += &inst.r[i];
        } else {
            sigma_mu1 += &inst.r[i];
        }
    }
    let two = BigRational::from_integer(2.into());
    let four = BigRational::from_integer(4.into());
    let ord_sigma = inst.ord_sigma().to_big_rational();
    let r_q: Vec<BigRational> = inst.r[1..].iter().map(rat).collect();
    let mu: Vec<u8> = g.vertices.iter().map(|v| v.mu).collect();

    let lhs_upper = &four * &n * &n * &sl + &four * &n * &e;
    let theta0 = &two * &n * &sl + &n * &su + &e;
    let relaxed_lower = &two * &theta0 * &theta0 / (rat(&sigma_mu2) + &two * rat(&sigma_mu1));
    let qp_lower = if ord_sigma > BigRational::zero() {
        qp_minimize(&r_q, &mu, &ord_sigma)?.min_value
    } else {
        BigRational::zero()
    };
    let nu_q: Vec<BigRational> = inst.nu.iter().map(ExactField::to_big_rational).collect();
    let rhs_at_nu = qp_objective(&r_q, &mu, &nu_q);

    let root = &n * &su - &e;
    let terminal = TerminalCheck {
        two_ne_su: &two * &n * &e * &su,
        n2_su2_plus_e2: &n * &n * &su * &su + &e * &e,
        square: &root * &root,
        holds: &two * &n * &e * &su <= &n * &n * &su * &su + &e * &e,
        root,
    };

    let supermaximal = inst.is_supermaximal();
    let (verdict, diagnostic) = if !supermaximal {
        let reason = if e <= BigRational::zero() {
            "not supermaximal: e <= 0, not even a maximal singularity".to_string()
        } else {
            "not supermaximal: 2n*e <= lambda*ord_T".to_string()
        };
        (Verdict::NotSupermaximal, Some(reason))
    } else if lhs_upper <= qp_lower {
        (Verdict::Infeasible, None)
    } else {
        (
            Verdict::NotExcluded,
            Some("upper bound on the left side exceeds the quadratic minimum".into()),
        )
    };

    Ok(ExclusionReport {
        verdict,
        n: inst.n,
        epsilon: e,
        lambda: inst.lambda.to_big_rational(),
        ord_t: inst.ord_t().to_big_rational(),
        discrepancy: inst.discrepancy().to_big_rational(),
        ord_sigma,
        partition,
        mu_partition: MuPartition {
            sigma_mu1,
            sigma_mu2,
        },
        lhs_upper,
        relaxed_lower,
        qp_lower,
        rhs_at_nu,
        terminal,
        diagnostic,
    })
}

fn small_fraction(rng: &mut impl Rng, lo: i64, hi: i64) -> BigRational {
    BigRational::new(
        rng.gen_range(lo..=hi).into(),
        rng.gen_range(1..=8i64).into(),
    )
}

/// A supermaximal instance on a random graph with `K <= k_max`, deterministic
/// in `seed`. `ν_i` are perturbations of `nδ_i`, shifted on the top vertex so
/// that `e > 0`; `λ` is zero or a random fraction of its supermaximal ceiling.
pub fn random_supermaximal_instance(
    k_max: usize,
    n_max: u64,
    seed: u64,
) -> Result<NFInstance<BigRational>, ExcluderError> {
    let params = GraphParams::sample(k_max, seed);
    let graph = random_graph(&params, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545_f491_4f6c_dd1d) ^ 0xa5a5);
    let n = rng.gen_range(1..=n_max.max(1));
    let nq = BigRational::from_integer(n.into());
    let k = graph.k();
    let mut nu: Vec<BigRational> = (1..=k)
        .map(|i| {
            let base = &nq * BigRational::from_integer(graph.delta(i).into());
            let v = base + small_fraction(&mut rng, -6, 10);
            if v > BigRational::zero() {
                v
            } else {
                small_fraction(&mut rng, 1, 4)
            }
        })
        .collect();
    let probe = NFInstance::new(graph.clone(), n, nu.clone(), BigRational::zero())?;
    let e = probe.epsilon();
    if e <= BigRational::zero() {
        // r_K = 1, so raising ν_K raises e one for one
        nu[k - 1] += -e + small_fraction(&mut rng, 1, 8);
    }
    let probe = probe.with_nu(nu.clone())?;
    let e = probe.epsilon();
    let ord_t = probe.ord_t();
    let lambda = if ord_t.is_zero() || rng.gen_bool(0.15) {
        if ord_t.is_zero() {
            small_fraction(&mut rng, 0, 16)
        } else {
            BigRational::zero()
        }
    } else {
        // λ < 2ne / ord_T
        let frac = BigRational::new(rng.gen_range(0..16i64).into(), 16.into());
        &frac * BigRational::from_integer(2.into()) * &nq * &e / &ord_t
    };
    let inst = NFInstance::new(graph, n, nu, lambda)?;
    debug_assert!(inst.is_supermaximal());
    Ok(inst)
}
