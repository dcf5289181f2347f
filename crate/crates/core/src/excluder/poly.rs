//! Sparse polynomials with rational coefficients in a fixed set of named
//! symbols, enough to expand both sides of each step of the exclusion chain
//! and certify their difference.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::scalar::OrderedField;

/// The symbols of the chain. All of them stand for non-negative quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sym {
    N,
    E,
    SigmaL,
    SigmaU,
    SigmaSing,
    SigmaNs,
    /// `λ · ord_E T`.
    W,
    /// Horizontal part of the left side of the multiplicity inequality.
    H,
    /// Vertical part.
    V,
    /// Slack in the horizontal bound.
    SlackH,
    /// Slack in the vertical bound.
    SlackV,
    /// Slack in the supermaximality inequality; strictly positive.
    SlackM,
}

pub const NSYM: usize = 12;

impl Sym {
    pub const ALL: [Sym; NSYM] = [
        Sym::N,
        Sym::E,
        Sym::SigmaL,
        Sym::SigmaU,
        Sym::SigmaSing,
        Sym::SigmaNs,
        Sym::W,
        Sym::H,
        Sym::V,
        Sym::SlackH,
        Sym::SlackV,
        Sym::SlackM,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Sym::N => "n",
            Sym::E => "e",
            Sym::SigmaL => "S_l",
            Sym::SigmaU => "S_u",
            Sym::SigmaSing => "S_sing",
            Sym::SigmaNs => "S_ns",
            Sym::W => "W",
            Sym::H => "H",
            Sym::V => "V",
            Sym::SlackH => "s_h",
            Sym::SlackV => "s_v",
            Sym::SlackM => "s_m",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

type Exps = [u32; NSYM];

fn degree(e: &Exps) -> u32 {
    e.iter().sum()
}

/// Graded order, ties broken lexicographically with `n > e > S_l > ...`.
fn graded_cmp(a: &Exps, b: &Exps) -> std::cmp::Ordering {
    degree(a).cmp(&degree(b)).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Exps, BigRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term([0; NSYM], c);
        p
    }

    pub fn int(c: i64) -> Self {
        MultiPoly::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(s: Sym) -> Self {
        let mut e = [0; NSYM];
        e[s.index()] = 1;
        let mut p = MultiPoly::zero();
        p.add_term(e, BigRational::one());
        p
    }

    fn add_term(&mut self, e: Exps, c: BigRational) {
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = MultiPoly::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(MultiPoly::int(1), |acc, _| &acc * self)
    }

    /// Replaces `s` by `value` everywhere.
    pub fn substitute(&self, s: Sym, value: &MultiPoly) -> Self {
        let mut out = MultiPoly::zero();
        let mut powers = vec![MultiPoly::int(1)];
        for (e, c) in &self.terms {
            let k = e[s.index()] as usize;
            while powers.len() <= k {
                let next = powers.last().expect("nonempty") * value;
                powers.push(next);
            }
            let mut rest = *e;
            rest[s.index()] = 0;
            let mut mono = MultiPoly::zero();
            mono.add_term(rest, c.clone());
            out = out + &mono * &powers[k];
        }
        out
    }

    pub fn eval<S: OrderedField>(&self, values: &[S; NSYM]) -> S {
        self.terms.iter().fold(S::zero(), |acc, (e, c)| {
            let coeff = S::from_bigint(c.numer()) / S::from_bigint(c.denom());
            let mono = e
                .iter()
                .zip(values)
                .fold(coeff, |m, (&k, v)| (0..k).fold(m, |m, _| m * v.clone()));
            acc + mono
        })
    }

    /// Every coefficient is `>= 0`, so the value is `>= 0` wherever the
    /// symbols are.
    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Whether `s` occurs in some term.
    pub fn mentions(&self, s: Sym) -> bool {
        self.terms.keys().any(|e| e[s.index()] > 0)
    }

    /// A positive term consisting of the single symbol `s` to the first power.
    pub fn has_positive_linear_term(&self, s: Sym) -> bool {
        let mut e = [0; NSYM];
        e[s.index()] = 1;
        self.terms.get(&e).is_some_and(|c| c.is_positive())
    }

    fn leading(&self) -> Option<(Exps, BigRational)> {
        self.terms
            .iter()
            .max_by(|a, b| graded_cmp(a.0, b.0))
            .map(|(e, c)| (*e, c.clone()))
    }

    /// `q` with `q² = self` and positive leading coefficient, if one exists
    /// over the rationals.
    pub fn sqrt(&self) -> Option<MultiPoly> {
        if self.is_zero() {
            return Some(MultiPoly::zero());
        }
        let (lead_e, lead_c) = self.leading()?;
        if lead_e.iter().any(|k| k % 2 == 1) {
            return None;
        }
        let root_c = lead_c.sqrt_exact()?;
        let mut root_e = lead_e;
        root_e.iter_mut().for_each(|k| *k /= 2);
        let mut q = MultiPoly::zero();
        q.add_term(root_e, root_c.clone());
        let two_lead = root_c * BigRational::from_integer(BigInt::from(2));
        for _ in 0..=self.n_terms() {
            let r = self - &(&q * &q);
            if r.is_zero() {
                return Some(q);
            }
            let (re, rc) = r.leading()?;
            // the next root term t satisfies lead(r) = 2 * lead(q) * t
            if graded_cmp(&re, &lead_e) == std::cmp::Ordering::Greater {
                return None;
            }
            let mut te = [0; NSYM];
            for i in 0..NSYM {
                te[i] = re[i].checked_sub(root_e[i])?;
            }
            q.add_term(te, rc / &two_lead);
        }
        None
    }

    /// Canonical text: terms in decreasing graded order, e.g.
    /// `n^2*S_u^2 - 2*n*e*S_u + e^2`.
    pub fn canonical(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Exps, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| graded_cmp(b.0, a.0));
        let mut out = String::new();
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mag = c.abs();
            let factors: Vec<String> = Sym::ALL
                .iter()
                .filter(|s| e[s.index()] > 0)
                .map(|s| match e[s.index()] {
                    1 => s.name().to_string(),
                    k => format!("{}^{k}", s.name()),
                })
                .collect();
            let coeff = crate::serial::rational_string(&mag);
            if factors.is_empty() {
                out.push_str(&coeff);
            } else {
                if !mag.is_one() {
                    out.push_str(&coeff);
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.clone() + rhs.clone()
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-BigRational::one())
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        self + (-rhs)
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.clone() - rhs.clone()
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb) {
                    *x += y;
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Mul<&MultiPoly> for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        &self * rhs
    }
}

impl Mul<MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        self * &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: Sym) -> MultiPoly {
        MultiPoly::var(s)
    }

    #[test]
    fn ring_identities() {
        let (a, b) = (v(Sym::N), v(Sym::E));
        let lhs = (&a + &b).pow(2);
        let rhs = a.pow(2) + MultiPoly::int(2) * (&a * &b) + b.pow(2);
        assert_eq!(lhs, rhs);
        assert!((&lhs - &rhs).is_zero());
        assert_eq!((&a - &a).canonical(), "0");
    }

    #[test]
    fn canonical_strings() {
        let p = (v(Sym::N) * v(Sym::SigmaU) - v(Sym::E)).pow(2);
        assert_eq!(p.canonical(), "n^2*S_u^2 - 2*n*e*S_u + e^2");
        let half = MultiPoly::constant(BigRational::new(1.into(), 2.into()));
        assert_eq!((half - v(Sym::W)).canonical(), "-W + 1/2");
    }

    #[test]
    fn square_roots() {
        let root = v(Sym::N) * v(Sym::SigmaU) - v(Sym::E);
        let sq = root.pow(2);
        let r = sq.sqrt().unwrap();
        assert_eq!(r.pow(2), sq);
        assert_eq!(r.canonical(), "n*S_u - e");

        let three = (MultiPoly::int(2) * v(Sym::N) + v(Sym::E) - MultiPoly::int(3)).pow(2);
        assert_eq!(three.sqrt().unwrap().pow(2), three);

        assert!((v(Sym::N).pow(2) + v(Sym::E).pow(2)).sqrt().is_none());
        assert!((MultiPoly::int(2) * v(Sym::N).pow(2)).sqrt().is_none());
        assert!(v(Sym::N).sqrt().is_none());
    }

    #[test]
    fn substitution_and_evaluation() {
        let p = v(Sym::SigmaSing) * v(Sym::N);
        let q = p.substitute(
            Sym::SigmaSing,
            &(v(Sym::SigmaL) + v(Sym::SigmaU) - v(Sym::SigmaNs)),
        );
        assert_eq!(q.canonical(), "n*S_l + n*S_u - n*S_ns");
        let mut vals: [BigRational; NSYM] = std::array::from_fn(|_| BigRational::zero());
        vals[Sym::N as usize] = BigRational::from_integer(2.into());
        vals[Sym::SigmaL as usize] = BigRational::from_integer(3.into());
        vals[Sym::SigmaU as usize] = BigRational::from_integer(1.into());
        vals[Sym::SigmaNs as usize] = BigRational::from_integer(4.into());
        assert_eq!(q.eval(&vals), BigRational::zero());
    }

    #[test]
    fn sign_checks() {
        let p = v(Sym::SlackH) + v(Sym::SlackV) + MultiPoly::int(2) * v(Sym::SlackM);
        assert!(p.has_nonnegative_coefficients());
        assert!(p.has_positive_linear_term(Sym::SlackM));
        assert!(!(-p).has_nonnegative_coefficients());
    }
}
