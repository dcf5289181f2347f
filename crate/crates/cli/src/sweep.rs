//! `codim-sweep`: the closed-form bounds over a parameter grid.

use rigidity_core::codim::{
    sweep, MinimizerCheck, MinimumRow, SweepConfig, SweepEntry, Theorem04Row,
};
use rigidity_core::Codim;
use serde::Serialize;

use crate::manifest::Manifest;
use crate::{envelope, load_params, to_csv, to_json, CliError, CommonArgs, Format, Outcome};

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    #[serde(flatten)]
    pub entry: SweepEntry<Codim>,
    pub expected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepSummary {
    pub entries: usize,
    pub violations: usize,
    pub expected_violations: usize,
    pub unexpected_violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepBody {
    pub summary: SweepSummary,
    pub entries: Vec<SweepEntry<Codim>>,
    pub violations: Vec<Violation>,
    pub minima: Vec<MinimumRow<Codim>>,
    pub theorem04: Vec<Theorem04Row<Codim>>,
    pub ex33_minimizers: Vec<MinimizerCheck>,
}

pub fn evaluate(cfg: &SweepConfig) -> Result<SweepBody, CliError> {
    let report = sweep::<Codim>(cfg).map_err(|e| CliError::Config(e.to_string()))?;
    let manifest = Manifest::bundled();
    let violations: Vec<Violation> = report
        .violations
        .into_iter()
        .map(|entry| {
            let reason = manifest
                .sweep_reason(entry.family, entry.d)
                .map(str::to_string);
            Violation {
                expected: reason.is_some(),
                reason,
                entry,
            }
        })
        .collect();
    let expected = violations.iter().filter(|v| v.expected).count();
    Ok(SweepBody {
        summary: SweepSummary {
            entries: report.entries.len(),
            violations: violations.len(),
            expected_violations: expected,
            unexpected_violations: violations.len() - expected,
        },
        entries: report.entries,
        violations,
        minima: report.minima,
        theorem04: report.theorem04,
        ex33_minimizers: report.ex33_minimizers,
    })
}

pub const CSV_HEADER: [&str; 9] = ["N", "d", "k", "l", "q", "lhs", "rhs", "verdict", "family"];

pub fn run(common: &CommonArgs) -> Result<Outcome, CliError> {
    let cfg: SweepConfig = load_params(common)?;
    let body = evaluate(&cfg)?;
    let unexpected = body.summary.unexpected_violations;
    let report = match common.format {
        Format::Json => to_json(&envelope("codim-sweep", common.seed, &cfg, &body)),
        Format::Csv => to_csv(
            &CSV_HEADER,
            body.entries.iter().map(|e| {
                vec![
                    e.n.to_string(),
                    e.d.to_string(),
                    e.k.to_string(),
                    e.l.to_string(),
                    e.q.map(|q| q.to_string()).unwrap_or_default(),
                    e.lhs.to_string(),
                    e.rhs.to_string(),
                    e.verdict.to_string(),
                    e.family.as_str().to_string(),
                ]
            }),
        ),
        Format::Text => text(&body),
    };
    Ok(Outcome { report, unexpected })
}

fn text(body: &SweepBody) -> String {
    let s = &body.summary;
    let mut out = format!(
        "{} entries, {} violations ({} expected, {} unexpected)\n",
        s.entries, s.violations, s.expected_violations, s.unexpected_violations
    );
    for v in body.violations.iter().filter(|v| !v.expected).take(20) {
        let e = &v.entry;
        out.push_str(&format!(
            "  violation {} N={} d={} k={} l={}{}: {} < {}\n",
            e.family,
            e.n,
            e.d,
            e.k,
            e.l,
            e.q.map(|q| format!(" q={q}")).unwrap_or_default(),
            e.lhs,
            e.rhs
        ));
    }
    if s.unexpected_violations > 20 {
        out.push_str(&format!("  ... {} more\n", s.unexpected_violations - 20));
    }
    let short = body.minima.iter().filter(|m| !m.meets_bound).count();
    out.push_str(&format!(
        "{} (N, d) cells, {} with the best moving-plane bound below (d-2)N\n",
        body.minima.len(),
        short
    ));
    for row in &body.theorem04 {
        out.push_str(&format!(
            "M={}: bound {} (generic {}, (d-2)N {})\n",
            row.m, row.bound, row.generic_term, row.theorem03_term
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rigidity_core::codim::{Family, U32Range};

    #[test]
    fn degree_three_master_failures_are_expected() {
        let cfg = SweepConfig {
            n: U32Range(3, 8),
            d: U32Range(3, 3),
            include_d3: true,
            families: vec![Family::Master],
            ..SweepConfig::default()
        };
        let body = evaluate(&cfg).unwrap();
        assert!(body.summary.violations > 0);
        assert_eq!(body.summary.unexpected_violations, 0);
    }

    #[test]
    fn theorem04_rows() {
        let body = evaluate(&SweepConfig::default()).unwrap();
        let bounds: Vec<String> = body.theorem04.iter().map(|r| r.bound.to_string()).collect();
        assert_eq!(bounds, ["4", "7", "11", "16", "22", "29", "37"]);
    }

    #[test]
    fn bad_config_is_a_config_error() {
        let cfg = SweepConfig {
            d: U32Range(2, 5),
            ..SweepConfig::default()
        };
        assert!(matches!(evaluate(&cfg), Err(CliError::Config(_))));
    }
}
