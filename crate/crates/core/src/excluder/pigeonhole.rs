use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ExcluderError;
use crate::serial;

/// A maximal singularity `E` over the curve, lying over the fibre divisor `group`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaximalSingularity {
    pub label: String,
    pub group: String,
    #[serde(
        serialize_with = "serial::rational",
        deserialize_with = "serial::de_rational"
    )]
    pub eps: BigRational,
    #[serde(
        serialize_with = "serial::rational",
        deserialize_with = "serial::de_rational"
    )]
    pub deg: BigRational,
    #[serde(
        serialize_with = "serial::rational",
        deserialize_with = "serial::de_rational"
    )]
    pub t: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibreDivisor {
    pub label: String,
    #[serde(
        serialize_with = "serial::rational",
        deserialize_with = "serial::de_rational"
    )]
    pub lambda: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PigeonholeInstance {
    pub n: u64,
    #[serde(
        serialize_with = "serial::rational",
        deserialize_with = "serial::de_rational"
    )]
    pub y_c: BigRational,
    pub singularities: Vec<MaximalSingularity>,
    pub divisors: Vec<FibreDivisor>,
}

/// `2n ε_E deg_E` against `λ_T t_E deg_E` for one singularity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PigeonholeLink {
    pub label: String,
    #[serde(serialize_with = "serial::rational")]
    pub lhs: BigRational,
    #[serde(serialize_with = "serial::rational")]
    pub rhs: BigRational,
    pub supermaximal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PigeonholeOutcome {
    pub found: Option<String>,
    #[serde(serialize_with = "serial::rational")]
    pub aggregate_lhs: BigRational,
    #[serde(serialize_with = "serial::rational")]
    pub aggregate_rhs: BigRational,
    pub aggregate_holds: bool,
    pub terms: Vec<PigeonholeLink>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl PigeonholeInstance {
    pub fn validate(&self) -> Result<(), ExcluderError> {
        let bad = |msg: String| Err(ExcluderError::Domain(msg));
        if self.n < 1 {
            return bad("n must be at least 1".into());
        }
        if self.y_c < BigRational::zero() {
            return bad("y_c must be non-negative".into());
        }
        let mut lambdas = BTreeMap::new();
        for d in &self.divisors {
            if d.lambda < BigRational::zero() {
                return bad(format!("lambda of {} must be non-negative", d.label));
            }
            if lambdas.insert(d.label.as_str(), &d.lambda).is_some() {
                return bad(format!("divisor {} listed twice", d.label));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for s in &self.singularities {
            if !seen.insert(s.label.as_str()) {
                return bad(format!("singularity {} listed twice", s.label));
            }
            if !lambdas.contains_key(s.group.as_str()) {
                return bad(format!(
                    "singularity {} lies over unknown divisor {}",
                    s.label, s.group
                ));
            }
            if s.eps <= BigRational::zero() {
                return bad(format!("eps of {} must be positive", s.label));
            }
            if s.deg <= BigRational::zero() {
                return bad(format!("deg of {} must be positive", s.label));
            }
            if s.t < BigRational::one() {
                return bad(format!("t of {} must be at least 1", s.label));
            }
        }
        Ok(())
    }

    fn lambda_of(&self, group: &str) -> &BigRational {
        &self
            .divisors
            .iter()
            .find(|d| d.label == group)
            .expect("validated instance")
            .lambda
    }
}

/// Looks for a supermaximal singularity, `2n ε_E > λ_T t_E`.
///
/// When the aggregate `2n Σ ε_E deg_E > Σ_T λ_T Σ_{E over T} t_E deg_E` holds,
/// some term of the left sum beats its term on the right, since every maximal
/// singularity lies over exactly one fibre divisor.
pub fn find_supermaximal(p: &PigeonholeInstance) -> Result<PigeonholeOutcome, ExcluderError> {
    p.validate()?;
    let two_n = BigRational::from_integer((2 * p.n).into());
    let terms: Vec<PigeonholeLink> = p
        .singularities
        .iter()
        .map(|s| {
            let lhs = &two_n * &s.eps * &s.deg;
            let rhs = p.lambda_of(&s.group) * &s.t * &s.deg;
            PigeonholeLink {
                label: s.label.clone(),
                supermaximal: lhs > rhs,
                lhs,
                rhs,
            }
        })
        .collect();
    let aggregate_lhs = terms
        .iter()
        .fold(BigRational::zero(), |acc, t| acc + &t.lhs);
    let aggregate_rhs = terms
        .iter()
        .fold(BigRational::zero(), |acc, t| acc + &t.rhs);
    let aggregate_holds = aggregate_lhs > aggregate_rhs;
    let found = terms
        .iter()
        .find(|t| t.supermaximal)
        .map(|t| t.label.clone());
    let diagnostic = if !aggregate_holds {
        Some(format!(
            "aggregate inequality fails: {aggregate_lhs} <= {aggregate_rhs}; input inconsistent"
        ))
    } else if found.is_none() {
        Some("aggregate holds but no term does".to_string())
    } else {
        None
    };
    Ok(PigeonholeOutcome {
        found: if aggregate_holds { found } else { None },
        aggregate_lhs,
        aggregate_rhs,
        aggregate_holds,
        terms,
        diagnostic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn sing(label: &str, eps: i64, deg: i64, t: i64) -> MaximalSingularity {
        MaximalSingularity {
            label: label.into(),
            group: "T".into(),
            eps: q(eps),
            deg: q(deg),
            t: q(t),
        }
    }

    fn instance(singularities: Vec<MaximalSingularity>) -> PigeonholeInstance {
        PigeonholeInstance {
            n: 1,
            y_c: q(0),
            singularities,
            divisors: vec![FibreDivisor {
                label: "T".into(),
                lambda: q(1),
            }],
        }
    }

    #[test]
    fn picks_the_supermaximal_one() {
        let out =
            find_supermaximal(&instance(vec![sing("E1", 1, 1, 4), sing("E2", 3, 1, 2)])).unwrap();
        assert_eq!(out.aggregate_lhs, q(8));
        assert_eq!(out.aggregate_rhs, q(6));
        assert_eq!(out.found.as_deref(), Some("E2"));
        assert!(out.diagnostic.is_none());
    }

    #[test]
    fn single_singularity() {
        let out = find_supermaximal(&instance(vec![sing("E", 2, 3, 1)])).unwrap();
        assert_eq!(out.found.as_deref(), Some("E"));
    }

    #[test]
    fn aggregate_failure() {
        let out = find_supermaximal(&instance(vec![sing("E", 1, 1, 4)])).unwrap();
        assert!(!out.aggregate_holds);
        assert_eq!(out.found, None);
        assert!(out.diagnostic.unwrap().contains("aggregate"));
    }

    #[test]
    fn rejects_inconsistent_input() {
        let mut p = instance(vec![sing("E", 1, 1, 1)]);
        p.singularities[0].group = "X".into();
        assert!(find_supermaximal(&p).is_err());
        let p = instance(vec![sing("E", 0, 1, 1)]);
        assert!(find_supermaximal(&p).is_err());
        let p = instance(vec![sing("E", 1, 1, 1), sing("E", 1, 1, 1)]);
        assert!(find_supermaximal(&p).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = instance(vec![sing("E1", 1, 1, 4)]);
        let text = serde_json::to_string(&p).unwrap();
        let back: PigeonholeInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}
