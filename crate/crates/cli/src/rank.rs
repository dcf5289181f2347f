//! `rank-check`: exact ranks of condition systems against their formulas.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rigidity_core::codim::{binomial, U32Range};
use rigidity_core::polyspace::{
    family_check, line_check, points_check, space_dim, RankCheck, RankSuite,
};
use rigidity_core::Rational;
use serde::{Deserialize, Serialize};

use crate::manifest::Manifest;
use crate::{
    envelope, load_params, require_seed, task_seed, to_csv, to_json, CliError, CommonArgs, Format,
    Outcome,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RankParams {
    pub n: U32Range,
    pub d: U32Range,
    /// Codimension of `Θ(e)` for the family suite.
    pub r: U32Range,
    /// Restricts the number of points; absent means every admissible `m`.
    pub m: Option<U32Range>,
    pub suites: Vec<RankSuite>,
    /// Seeds per tuple.
    pub seeds: u32,
    /// Refuse tuples whose coefficient space is wider than this.
    pub max_cols: u64,
    /// Refuse tuples whose matrix has more entries than this.
    pub max_entries: u64,
}

impl Default for RankParams {
    fn default() -> Self {
        RankParams {
            n: U32Range(3, 4),
            d: U32Range(3, 6),
            r: U32Range(1, 2),
            m: None,
            suites: vec![RankSuite::Points, RankSuite::Line, RankSuite::Family],
            seeds: 20,
            max_cols: 10_000,
            max_entries: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Task {
    pub suite: RankSuite,
    pub n: u32,
    pub d: u32,
    pub r: u32,
    pub m: u32,
    pub seed_index: u32,
}

impl Task {
    fn shape(&self) -> Result<(u64, u64), CliError> {
        let cols =
            space_dim(self.n as usize, self.d).map_err(|e| CliError::Config(e.to_string()))?;
        let (n, d, r, m) = (
            u64::from(self.n),
            u64::from(self.d),
            self.r as i64,
            u64::from(self.m),
        );
        let rows = match self.suite {
            RankSuite::Points => m * (n + 1),
            RankSuite::Line => (n + 1) * d,
            RankSuite::Family => {
                m * (n - r as u64 + 1) * binomial::<i64>(self.d as i64 - 3 + r, r) as u64
            }
        };
        Ok((rows, cols))
    }
}

pub fn tasks(p: &RankParams) -> Vec<Task> {
    let mut suites = p.suites.clone();
    suites.sort();
    suites.dedup();
    let m_ok = |m: u32| p.m.is_none_or(|r| r.contains(m));
    let mut out = Vec::new();
    for &suite in &suites {
        for n in p.n.iter() {
            for d in p.d.iter() {
                let shapes: Vec<(u32, u32)> = match suite {
                    RankSuite::Points => (1..=n + 1).filter(|&m| m_ok(m)).map(|m| (0, m)).collect(),
                    RankSuite::Line => vec![(0, 0)],
                    // Δ_{d-3} needs d >= 3, and Π needs r + 1 <= N
                    RankSuite::Family if d >= 3 => {
                        p.r.iter()
                            .filter(|&r| r >= 1 && r < n)
                            .flat_map(|r| (1..=n - r + 1).filter(|&m| m_ok(m)).map(move |m| (r, m)))
                            .collect()
                    }
                    RankSuite::Family => Vec::new(),
                };
                for (r, m) in shapes {
                    for seed_index in 0..p.seeds {
                        out.push(Task {
                            suite,
                            n,
                            d,
                            r,
                            m,
                            seed_index,
                        });
                    }
                }
            }
        }
    }
    out
}

fn validate(p: &RankParams) -> Result<(), CliError> {
    if !p.n.is_empty() && p.n.lo() < 1 {
        return Err(CliError::Config("N must be at least 1".into()));
    }
    if !p.d.is_empty() && p.d.lo() < 1 {
        return Err(CliError::Config("d must be at least 1".into()));
    }
    for (name, range) in [("n", p.n), ("d", p.d), ("r", p.r)] {
        if !range.is_empty() && range.hi() > 64 {
            return Err(CliError::Config(format!(
                "{name} range ends at {}, above 64",
                range.hi()
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Match,
    Mismatch,
    ExpectedMismatch,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Match => "match",
            Status::Mismatch => "mismatch",
            Status::ExpectedMismatch => "expected_mismatch",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RankEntry {
    #[serde(flatten)]
    pub check: RankCheck,
    pub seed_index: u32,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RankSummary {
    pub tasks: usize,
    pub matches: usize,
    pub mismatches: usize,
    pub expected_mismatches: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankBody {
    pub summary: RankSummary,
    pub entries: Vec<RankEntry>,
    pub violations: Vec<RankEntry>,
}

fn run_task(task: &Task, base: u64, manifest: &Manifest) -> Result<RankEntry, CliError> {
    let seed = task_seed(
        base,
        &[
            task.suite as u64,
            task.n.into(),
            task.d.into(),
            task.r.into(),
            task.m.into(),
            task.seed_index.into(),
        ],
    );
    let (n, m, r) = (task.n as usize, task.m as usize, task.r as usize);
    let check = match task.suite {
        RankSuite::Points => points_check::<Rational>(n, task.d, m, seed),
        RankSuite::Line => line_check::<Rational>(n, task.d, seed),
        RankSuite::Family => family_check::<Rational>(n, r, task.d, m, seed),
    }
    .map_err(|e| CliError::Config(format!("{:?} N={} d={}: {e}", task.suite, task.n, task.d)))?;
    let (status, note) = if check.matches() {
        (Status::Match, None)
    } else {
        match manifest.rank_reason(task.suite, task.d) {
            Some(reason) => (Status::ExpectedMismatch, Some(reason.to_string())),
            None => (Status::Mismatch, None),
        }
    };
    Ok(RankEntry {
        check,
        seed_index: task.seed_index,
        status,
        note,
    })
}

/// Runs the checks; the entries follow task order whatever the thread count.
pub fn evaluate(p: &RankParams, base: u64) -> Result<RankBody, CliError> {
    validate(p)?;
    let tasks = tasks(p);
    for t in &tasks {
        let (rows, cols) = t.shape()?;
        if cols > p.max_cols || rows.saturating_mul(cols) > p.max_entries {
            return Err(CliError::ResourceCap(format!(
                "{} N={} d={} r={} m={} needs a {rows} x {cols} matrix ({} entries); caps are {} columns and {} entries",
                t.suite.as_str(),
                t.n,
                t.d,
                t.r,
                t.m,
                rows.saturating_mul(cols),
                p.max_cols,
                p.max_entries
            )));
        }
    }
    let manifest = Manifest::bundled();
    let entries: Vec<RankEntry> = tasks
        .par_iter()
        .map(|t| run_task(t, base, &manifest))
        .collect::<Result<_, _>>()?;
    let mut summary = RankSummary {
        tasks: entries.len(),
        ..RankSummary::default()
    };
    for e in &entries {
        match e.status {
            Status::Match => summary.matches += 1,
            Status::Mismatch => summary.mismatches += 1,
            Status::ExpectedMismatch => summary.expected_mismatches += 1,
        }
    }
    let violations = entries
        .iter()
        .filter(|e| e.status == Status::Mismatch)
        .cloned()
        .collect();
    Ok(RankBody {
        summary,
        entries,
        violations,
    })
}

pub fn run(common: &CommonArgs) -> Result<Outcome, CliError> {
    let params: RankParams = load_params(common)?;
    let seed = require_seed(common, "rank-check")?;
    let body = evaluate(&params, seed)?;
    let unexpected = body.summary.mismatches;
    let report = match common.format {
        Format::Json => to_json(&envelope("rank-check", Some(seed), &params, &body)),
        Format::Csv => to_csv(
            &[
                "suite", "N", "d", "r", "m", "seed", "rows", "cols", "expected", "rank", "status",
            ],
            body.entries.iter().map(|e| {
                let c = &e.check;
                vec![
                    c.suite.as_str().to_string(),
                    c.n.to_string(),
                    c.d.to_string(),
                    c.r.to_string(),
                    c.m.to_string(),
                    c.seed.to_string(),
                    c.rows.to_string(),
                    c.cols.to_string(),
                    c.expected.to_string(),
                    c.rank.to_string(),
                    e.status.as_str().to_string(),
                ]
            }),
        ),
        Format::Text => text(&body),
    };
    Ok(Outcome { report, unexpected })
}

#[derive(Default)]
struct Group<'a> {
    expected: u64,
    ranks: Vec<u64>,
    matches: usize,
    note: Option<&'a str>,
}

fn text(body: &RankBody) -> String {
    let mut groups: BTreeMap<(RankSuite, usize, u32, usize, usize), Group> = BTreeMap::new();
    for e in &body.entries {
        let c = &e.check;
        let g = groups.entry((c.suite, c.n, c.d, c.r, c.m)).or_default();
        g.expected = c.expected;
        g.ranks.push(c.rank);
        if e.status == Status::Match {
            g.matches += 1;
        }
        if let Some(note) = &e.note {
            g.note = Some(note);
        }
    }
    let mut out = String::new();
    for ((suite, n, d, r, m), g) in &groups {
        let mut distinct = g.ranks.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let ranks: Vec<String> = distinct.iter().map(u64::to_string).collect();
        out.push_str(&format!(
            "{:<6} N={n} d={d} r={r} m={m}: expected {}, rank {}, {}/{} match{}\n",
            suite.as_str(),
            g.expected,
            ranks.join("|"),
            g.matches,
            g.ranks.len(),
            g.note.map(|s| format!(" [{s}]")).unwrap_or_default()
        ));
    }
    let s = &body.summary;
    out.push_str(&format!(
        "{} tasks: {} match, {} mismatch, {} expected mismatch\n",
        s.tasks, s.matches, s.mismatches, s.expected_mismatches
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RankParams {
        RankParams {
            n: U32Range(3, 3),
            d: U32Range(2, 3),
            seeds: 2,
            ..RankParams::default()
        }
    }

    #[test]
    fn task_enumeration() {
        let t = tasks(&small());
        // points: 4 values of m per degree; line: 1; family at d = 3 only, r in 1..=2
        let points = t.iter().filter(|t| t.suite == RankSuite::Points).count();
        let lines = t.iter().filter(|t| t.suite == RankSuite::Line).count();
        let family = t.iter().filter(|t| t.suite == RankSuite::Family).count();
        assert_eq!((points, lines, family), (2 * 4 * 2, 2 * 2, (3 + 2) * 2));
        let mut sorted = t.clone();
        sorted.sort();
        assert_eq!(sorted, t);
    }

    #[test]
    fn degree_two_mismatches_are_expected() {
        let body = evaluate(&small(), 5).unwrap();
        assert_eq!(body.summary.mismatches, 0);
        assert!(body.summary.expected_mismatches > 0);
        assert!(body.violations.is_empty());
        assert!(body
            .entries
            .iter()
            .filter(|e| e.status == Status::ExpectedMismatch)
            .all(|e| e.check.d == 2 && e.check.suite == RankSuite::Points));
    }

    #[test]
    fn empty_range_gives_empty_report() {
        let p = RankParams {
            n: U32Range(4, 3),
            ..RankParams::default()
        };
        let body = evaluate(&p, 0).unwrap();
        assert!(body.entries.is_empty());
        assert_eq!(body.summary.tasks, 0);
    }

    #[test]
    fn caps_refuse_with_estimate() {
        let p = RankParams {
            n: U32Range(12, 12),
            d: U32Range(12, 12),
            suites: vec![RankSuite::Points],
            ..RankParams::default()
        };
        let err = evaluate(&p, 0).unwrap_err();
        assert!(matches!(err, CliError::ResourceCap(_)));
        assert!(
            err.to_string().contains("2704156 columns") || err.to_string().contains("x 2704156"),
            "{err}"
        );
    }
}
