use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    codim_ex32, codim_ex33, codim_ex34, codim_ex35, ex33_minimizer, master_inequality,
    prop31_adjust, required_codim, theorem03_bound, theorem04_terms, CodimError, CodimInt,
    MinimizerCheck,
};

/// Which mechanism produced a sweep entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `1 <= l <= k-2`, the simplex-count inequality.
    Master,
    /// `k = l = 2`.
    Ex32,
    /// `k = 2, l = 1`.
    Ex33,
    /// `l = k`.
    Ex34,
    /// `l = k - 1`.
    Ex35,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Master,
        Family::Ex32,
        Family::Ex33,
        Family::Ex34,
        Family::Ex35,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Master => "master",
            Family::Ex32 => "ex32",
            Family::Ex33 => "ex33",
            Family::Ex34 => "ex34",
            Family::Ex35 => "ex35",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Inclusive range `[lo, hi]`; empty when `lo > hi`. Serialized as a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct U32Range(pub u32, pub u32);

impl U32Range {
    pub fn lo(self) -> u32 {
        self.0
    }

    pub fn hi(self) -> u32 {
        self.1
    }

    pub fn is_empty(self) -> bool {
        self.0 > self.1
    }

    pub fn contains(self, v: u32) -> bool {
        self.0 <= v && v <= self.1
    }

    pub fn iter(self) -> std::ops::RangeInclusive<u32> {
        self.0..=self.1
    }
}

fn within(filter: Option<U32Range>, v: u32) -> bool {
    filter.is_none_or(|r| r.contains(v))
}

/// Upper limit on any range end; keeps a mistyped config from running for hours.
pub const MAX_SWEEP_BOUND: u32 = 400;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub n: U32Range,
    pub d: U32Range,
    /// Optional filters on `k`, `l`, `q`; absent means everything admissible.
    pub k: Option<U32Range>,
    pub l: Option<U32Range>,
    pub q: Option<U32Range>,
    pub families: Vec<Family>,
    /// Degree 3 is outside the default domain and only evaluated on request.
    pub include_d3: bool,
    pub theorem04_m: U32Range,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n: U32Range(3, 12),
            d: U32Range(4, 12),
            k: None,
            l: None,
            q: None,
            families: Family::ALL.to_vec(),
            include_d3: false,
            theorem04_m: U32Range(4, 10),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CodimError> {
        let named = [
            ("n", Some(self.n)),
            ("d", Some(self.d)),
            ("k", self.k),
            ("l", self.l),
            ("q", self.q),
            ("theorem04_m", Some(self.theorem04_m)),
        ];
        for (name, range) in named {
            if let Some(r) = range {
                if !r.is_empty() && r.hi() > MAX_SWEEP_BOUND {
                    return Err(CodimError::Config(format!(
                        "{name} range ends at {}, above the cap {MAX_SWEEP_BOUND}",
                        r.hi()
                    )));
                }
            }
        }
        if !self.n.is_empty() && self.n.lo() < 1 {
            return Err(CodimError::Config(
                "n range must start at 1 or above".into(),
            ));
        }
        if !self.d.is_empty() && self.d.lo() < 3 {
            return Err(CodimError::Config(
                "d range must start at 3 or above; the formulas need d >= 3".into(),
            ));
        }
        if !self.theorem04_m.is_empty() && self.theorem04_m.lo() < 4 {
            return Err(CodimError::Config(
                "theorem04_m range must start at 4 or above".into(),
            ));
        }
        Ok(())
    }

    fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.d.iter().filter(move |&d| d >= 4 || self.include_d3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SweepEntry<I: CodimInt> {
    pub family: Family,
    pub n: u32,
    pub d: u32,
    pub k: u32,
    pub l: u32,
    pub q: Option<u32>,
    /// Codimension for a fixed `k`-plane (or, for `master`, the left side).
    #[serde(serialize_with = "crate::serial::int")]
    pub lhs: I,
    /// `(d-2)N + (k+1)(N-k)`.
    #[serde(serialize_with = "crate::serial::int")]
    pub rhs: I,
    pub verdict: bool,
    /// `lhs - (k+1)(N-k)`, the bound for a moving plane.
    #[serde(serialize_with = "crate::serial::int")]
    pub adjusted: I,
}

impl<I: CodimInt> SweepEntry<I> {
    fn sort_key(&self) -> (u32, u32, u32, u32, Option<u32>, Family) {
        (self.n, self.d, self.k, self.l, self.q, self.family)
    }
}

/// Smallest moving-plane codimension found at one `(N, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct MinimumRow<I: CodimInt> {
    pub n: u32,
    pub d: u32,
    #[serde(serialize_with = "crate::serial::int")]
    pub min_adjusted: I,
    pub family: Family,
    pub k: u32,
    pub l: u32,
    pub q: Option<u32>,
    /// `(d-2)N`.
    #[serde(serialize_with = "crate::serial::int")]
    pub bound: I,
    /// `(d-2)N + 3`, the conjectured optimum.
    #[serde(serialize_with = "crate::serial::int")]
    pub sharp: I,
    pub meets_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Theorem04Row<I: CodimInt> {
    pub m: u32,
    #[serde(serialize_with = "crate::serial::int")]
    pub bound: I,
    /// `(M-2)(M-1)/2 + 1`.
    #[serde(serialize_with = "crate::serial::int")]
    pub generic_term: I,
    /// `(d-2)N` at `d = 2M, N = M`.
    #[serde(serialize_with = "crate::serial::int")]
    pub theorem03_term: I,
    pub bound_is_generic_term: bool,
    pub theorem03_exceeds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SweepReport<I: CodimInt> {
    pub config: SweepConfig,
    pub entries: Vec<SweepEntry<I>>,
    pub violations: Vec<SweepEntry<I>>,
    pub minima: Vec<MinimumRow<I>>,
    pub theorem04: Vec<Theorem04Row<I>>,
    pub ex33_minimizers: Vec<MinimizerCheck>,
}

fn entry<I: CodimInt>(
    family: Family,
    (n, d, k, l): (u32, u32, u32, u32),
    q: Option<u32>,
    lhs: I,
) -> SweepEntry<I> {
    let rhs = required_codim::<I>(n, d, k);
    let adjusted = prop31_adjust(lhs.clone(), n, k);
    SweepEntry {
        family,
        n,
        d,
        k,
        l,
        q,
        verdict: lhs >= rhs,
        lhs,
        rhs,
        adjusted,
    }
}

fn evaluate_cell<I: CodimInt>(
    cfg: &SweepConfig,
    n: u32,
    d: u32,
) -> Result<Vec<SweepEntry<I>>, CodimError> {
    let mut out = Vec::new();
    let kf = |k: u32| within(cfg.k, k);
    let lf = |l: u32| within(cfg.l, l);
    let qf = |q: u32| within(cfg.q, q);
    for &family in &cfg.families {
        match family {
            Family::Master => {
                for k in (3..=n).filter(|&k| kf(k)) {
                    for l in (1..=k - 2).filter(|&l| lf(l) && n + 1 >= k + l) {
                        let ev = master_inequality::<I>(n, d, k, l)?;
                        out.push(entry(family, (n, d, k, l), None, ev.lhs));
                    }
                }
            }
            Family::Ex32 => {
                if n >= 3 && kf(2) && lf(2) {
                    for q in (2..d).filter(|&q| qf(q)) {
                        out.push(entry(family, (n, d, 2, 2), Some(q), codim_ex32(n, d, q)?));
                    }
                }
            }
            Family::Ex33 => {
                if n >= 2 && kf(2) && lf(1) {
                    for q in (2..=d / 2).filter(|&q| qf(q)) {
                        out.push(entry(family, (n, d, 2, 1), Some(q), codim_ex33(n, d, q)?));
                    }
                }
            }
            Family::Ex34 => {
                for k in (1..=n).filter(|&k| kf(k) && lf(k) && n + 1 >= 2 * k) {
                    out.push(entry(family, (n, d, k, k), None, codim_ex34(n, d, k)?));
                }
            }
            Family::Ex35 => {
                for k in (2..=n).filter(|&k| kf(k) && lf(k - 1) && n + 2 >= 2 * k) {
                    for q in (2..=d / 2).filter(|&q| qf(q)) {
                        out.push(entry(
                            family,
                            (n, d, k, k - 1),
                            Some(q),
                            codim_ex35(n, d, k, q)?,
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn minima<I: CodimInt>(entries: &[SweepEntry<I>]) -> Result<Vec<MinimumRow<I>>, CodimError> {
    let mut rows: Vec<MinimumRow<I>> = Vec::new();
    for group in entries.chunk_by(|a, b| (a.n, a.d) == (b.n, b.d)) {
        let (n, d) = (group[0].n, group[0].d);
        if n < 3 {
            continue;
        }
        // first minimum in canonical order, so ties resolve deterministically
        let best = group
            .iter()
            .reduce(|a, b| {
                if b.adjusted.cmp(&a.adjusted) == Ordering::Less {
                    b
                } else {
                    a
                }
            })
            .expect("chunks are nonempty");
        let bound: I = theorem03_bound(n, d)?;
        rows.push(MinimumRow {
            n,
            d,
            family: best.family,
            k: best.k,
            l: best.l,
            q: best.q,
            meets_bound: best.adjusted >= bound,
            sharp: bound.clone() + I::from_u8(3).expect("small constant"),
            min_adjusted: best.adjusted.clone(),
            bound,
        });
    }
    Ok(rows)
}

/// Evaluates every admissible tuple in the configured ranges. The result is
/// sorted by `(N, d, k, l, q, family)` and does not depend on the rayon pool
/// size.
pub fn sweep<I: CodimInt>(cfg: &SweepConfig) -> Result<SweepReport<I>, CodimError> {
    cfg.validate()?;
    let cells: Vec<(u32, u32)> = cfg
        .n
        .iter()
        .flat_map(|n| cfg.degrees().map(move |d| (n, d)))
        .collect();
    let per_cell: Vec<Vec<SweepEntry<I>>> = cells
        .par_iter()
        .map(|&(n, d)| evaluate_cell(cfg, n, d))
        .collect::<Result<_, _>>()?;
    let mut entries: Vec<SweepEntry<I>> = per_cell.into_iter().flatten().collect();
    entries.sort_by_key(SweepEntry::sort_key);

    let violations = entries.iter().filter(|e| !e.verdict).cloned().collect();
    let minima = minima(&entries)?;

    let theorem04 = cfg
        .theorem04_m
        .iter()
        .map(|m| {
            let (generic_term, theorem03_term) = theorem04_terms::<I>(m)?;
            let bound = generic_term.clone().min(theorem03_term.clone());
            Ok(Theorem04Row {
                m,
                bound_is_generic_term: bound == generic_term,
                theorem03_exceeds: theorem03_term > generic_term,
                bound,
                generic_term,
                theorem03_term,
            })
        })
        .collect::<Result<_, CodimError>>()?;

    let ex33_minimizers = if cfg.families.contains(&Family::Ex33) {
        cfg.degrees()
            .filter(|&d| d >= 4)
            .map(ex33_minimizer)
            .collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };

    Ok(SweepReport {
        config: cfg.clone(),
        entries,
        violations,
        minima,
        theorem04,
        ex33_minimizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn empty_ranges_give_empty_report() {
        let cfg = SweepConfig {
            n: U32Range(5, 4),
            theorem04_m: U32Range(1, 0),
            ..SweepConfig::default()
        };
        let rep = sweep::<i64>(&cfg).unwrap();
        assert!(rep.entries.is_empty());
        assert!(rep.violations.is_empty());
        assert!(rep.minima.is_empty());
        assert!(rep.theorem04.is_empty());
    }

    #[test]
    fn single_master_tuple() {
        let cfg = SweepConfig {
            n: U32Range(6, 6),
            d: U32Range(5, 5),
            k: Some(U32Range(4, 4)),
            l: Some(U32Range(2, 2)),
            families: vec![Family::Master],
            ..SweepConfig::default()
        };
        let rep = sweep::<i64>(&cfg).unwrap();
        assert_eq!(rep.entries.len(), 1);
        let e = &rep.entries[0];
        let direct = master_inequality::<i64>(6, 5, 4, 2).unwrap();
        assert_eq!(
            (e.lhs, e.rhs, e.verdict),
            (direct.lhs, direct.rhs, direct.verdict)
        );
    }

    #[test]
    fn entries_are_sorted_and_verdicts_consistent() {
        let rep = sweep::<BigInt>(&SweepConfig::default()).unwrap();
        assert!(rep
            .entries
            .windows(2)
            .all(|w| w[0].sort_key() < w[1].sort_key()));
        for e in &rep.entries {
            assert_eq!(e.verdict, e.lhs >= e.rhs);
            let bound = BigInt::from((e.d - 2) * e.n);
            assert_eq!(e.verdict, e.adjusted >= bound);
        }
        assert_eq!(
            rep.violations.len(),
            rep.entries.iter().filter(|e| !e.verdict).count()
        );
    }

    #[test]
    fn degree_three_needs_the_flag() {
        let mut cfg = SweepConfig {
            d: U32Range(3, 4),
            ..SweepConfig::default()
        };
        assert!(sweep::<i64>(&cfg).unwrap().entries.iter().all(|e| e.d == 4));
        cfg.include_d3 = true;
        let rep = sweep::<i64>(&cfg).unwrap();
        assert!(rep.entries.iter().any(|e| e.d == 3));
        assert!(rep
            .violations
            .iter()
            .any(|e| e.d == 3 && e.family == Family::Master));
    }

    #[test]
    fn theorem04_rows_reproduce_the_sequence() {
        let rep = sweep::<i64>(&SweepConfig::default()).unwrap();
        let bounds: Vec<i64> = rep.theorem04.iter().map(|r| r.bound).collect();
        assert_eq!(bounds, vec![4, 7, 11, 16, 22, 29, 37]);
        assert!(rep
            .theorem04
            .iter()
            .all(|r| r.theorem03_exceeds && r.bound_is_generic_term));
    }

    #[test]
    fn bad_configs_are_rejected() {
        let cfg = SweepConfig {
            d: U32Range(2, 5),
            ..SweepConfig::default()
        };
        assert!(matches!(sweep::<i64>(&cfg), Err(CodimError::Config(_))));
        let cfg = SweepConfig {
            n: U32Range(3, 100_000),
            ..SweepConfig::default()
        };
        assert!(sweep::<i64>(&cfg).is_err());
    }
}
