//! The four-step contradiction, as polynomial identities and sign
//! certificates over the symbols of [`Sym`].

use serde::Serialize;

use super::poly::{MultiPoly, Sym};

/// Why a difference polynomial has the sign a step needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The difference is identically zero.
    Identity,
    /// Non-negative coefficients in non-negative symbols.
    NonNegative,
    /// Non-negative coefficients and a positive linear term in the strictly
    /// positive symbol `witness`.
    Positive {
        witness: String,
    },
    /// The difference is the square of `root`.
    PerfectSquare {
        root: String,
    },
    NotCertified {
        reason: String,
    },
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        !matches!(self, Certificate::NotCertified { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepCertificate {
    pub step: char,
    pub claim: String,
    /// Side conditions used, as eliminations or sign assumptions.
    pub side_conditions: Vec<String>,
    /// The expanded polynomial whose sign is certified.
    pub difference: String,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub steps: Vec<StepCertificate>,
    pub all_certified: bool,
}

fn v(s: Sym) -> MultiPoly {
    MultiPoly::var(s)
}

fn c(k: i64) -> MultiPoly {
    MultiPoly::int(k)
}

fn step(
    step: char,
    claim: &str,
    side_conditions: &[&str],
    difference: &MultiPoly,
    certificate: Certificate,
) -> StepCertificate {
    StepCertificate {
        step,
        claim: claim.to_string(),
        side_conditions: side_conditions.iter().map(|s| s.to_string()).collect(),
        difference: difference.canonical(),
        certificate,
    }
}

fn sign_certificate(diff: &MultiPoly, strict_witness: Option<Sym>) -> Certificate {
    if diff.is_zero() {
        return match strict_witness {
            None => Certificate::Identity,
            Some(_) => Certificate::NotCertified {
                reason: "difference vanishes but a strict inequality is claimed".into(),
            },
        };
    }
    if !diff.has_nonnegative_coefficients() {
        return Certificate::NotCertified {
            reason: "difference has negative coefficients".into(),
        };
    }
    match strict_witness {
        Some(w) if diff.has_positive_linear_term(w) => Certificate::Positive {
            witness: w.name().into(),
        },
        Some(w) => Certificate::NotCertified {
            reason: format!("no positive term in {}", w.name()),
        },
        None => Certificate::NonNegative,
    }
}

/// `(2n S_l + n S_u + e)`: `n a(E) + e` with `δ >= 2` below `L` and `δ = 1` above.
pub fn theta_numerator() -> MultiPoly {
    c(2) * v(Sym::N) * v(Sym::SigmaL) + v(Sym::N) * v(Sym::SigmaU) + v(Sym::E)
}

/// Upper bound on the left side: `4n² S_l + 4ne`.
pub fn lhs_bound() -> MultiPoly {
    c(4) * v(Sym::N).pow(2) * v(Sym::SigmaL) + c(4) * v(Sym::N) * v(Sym::E)
}

/// Step (b) in the form `A > B`.
pub fn step_b_sides() -> (MultiPoly, MultiPoly) {
    let (n, e, sl, su, sns) = (
        v(Sym::N),
        v(Sym::E),
        v(Sym::SigmaL),
        v(Sym::SigmaU),
        v(Sym::SigmaNs),
    );
    let a = c(2) * n.pow(2) * &sl * &sns + c(2) * &n * &e * &sns;
    let b = c(2) * n.pow(2) * sl.pow(2)
        + c(2) * n.pow(2) * &sl * &su
        + n.pow(2) * su.pow(2)
        + c(2) * &n * &e * &sl
        + e.pow(2);
    (a, b)
}

/// Step (c) in the form `A > B`: `2neS_u > n²S_u² + e²`.
pub fn step_c_sides() -> (MultiPoly, MultiPoly) {
    let (n, e, su) = (v(Sym::N), v(Sym::E), v(Sym::SigmaU));
    (c(2) * &n * &e * &su, n.pow(2) * su.pow(2) + e.pow(2))
}

pub fn chain_verify() -> ChainReport {
    let mut steps = Vec::new();

    // (a) H + V < 4n²S_l + 4ne from H <= 4n²S_l, V <= 2W, W < 2ne
    let lhs = v(Sym::H) + v(Sym::V);
    let diff_a = (lhs_bound() - lhs)
        .substitute(
            Sym::H,
            &(c(4) * v(Sym::N).pow(2) * v(Sym::SigmaL) - v(Sym::SlackH)),
        )
        .substitute(Sym::V, &(c(2) * v(Sym::W) - v(Sym::SlackV)))
        .substitute(Sym::W, &(c(2) * v(Sym::N) * v(Sym::E) - v(Sym::SlackM)));
    steps.push(step(
        'a',
        "H + V < 4n^2*S_l + 4n*e",
        &[
            "H = 4n^2*S_l - s_h, s_h >= 0 (horizontal bound)",
            "V = 2W - s_v, s_v >= 0 (vertical bound, W = lambda*ord_T)",
            "W = 2n*e - s_m, s_m > 0 (supermaximality)",
        ],
        &diff_a,
        sign_certificate(&diff_a, Some(Sym::SlackM)),
    ));

    // (b) clearing the denominator S_sing + 2S_ns > 0 in
    // 4n²S_l + 4ne > 2 theta² / (S_sing + 2S_ns) gives 2(A - B)
    let cleared = lhs_bound() * (v(Sym::SigmaSing) + c(2) * v(Sym::SigmaNs))
        - c(2) * theta_numerator().pow(2);
    let elim_sing = v(Sym::SigmaL) + v(Sym::SigmaU) - v(Sym::SigmaNs);
    let (a, b) = step_b_sides();
    let diff_b = cleared.substitute(Sym::SigmaSing, &elim_sing) - c(2) * (a.clone() - b.clone());
    steps.push(step(
        'b',
        "(4n^2*S_l + 4n*e)(S_sing + 2S_ns) - 2(2n*S_l + n*S_u + e)^2 = 2(A - B)",
        &["S_sing = S_l + S_u - S_ns"],
        &diff_b,
        sign_certificate(&diff_b, None),
    ));

    // (c) A - B <= C_a - C_b once S_ns <= S_l + S_u, i.e. S_ns = S_l + S_u - S_sing
    let (ca, cb) = step_c_sides();
    let elim_ns = v(Sym::SigmaL) + v(Sym::SigmaU) - v(Sym::SigmaSing);
    let diff_c = (ca.clone() - cb.clone()) - (a - b).substitute(Sym::SigmaNs, &elim_ns);
    steps.push(step(
        'c',
        "A - B <= 2n*e*S_u - n^2*S_u^2 - e^2",
        &["S_ns = S_l + S_u - S_sing, S_sing >= 0"],
        &diff_c,
        sign_certificate(&diff_c, None),
    ));

    // (d) n²S_u² + e² - 2neS_u is a square
    let diff_d = cb - ca;
    let certificate = match diff_d.sqrt() {
        Some(root) if !root.is_zero() => Certificate::PerfectSquare {
            root: root.canonical(),
        },
        _ => Certificate::NotCertified {
            reason: "not a perfect square".into(),
        },
    };
    steps.push(step(
        'd',
        "n^2*S_u^2 + e^2 - 2n*e*S_u >= 0",
        &[],
        &diff_d,
        certificate,
    ));

    let all_certified = steps.iter().all(|s| s.certificate.is_certified());
    ChainReport {
        steps,
        all_certified,
    }
}
