//! Known boundary behaviour, so that the exit status separates it from regressions.

use rigidity_core::codim::{Family, U32Range};
use rigidity_core::polyspace::RankSuite;
use serde::Deserialize;

const BUNDLED: &str = include_str!("../data/expected_failures.json");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankRule {
    pub suite: RankSuite,
    pub d: U32Range,
    pub reason: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRule {
    pub family: Family,
    pub d: U32Range,
    pub reason: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub rank_check: Vec<RankRule>,
    pub codim_sweep: Vec<SweepRule>,
}

impl Manifest {
    pub fn bundled() -> Manifest {
        serde_json::from_str(BUNDLED).expect("bundled manifest parses")
    }

    pub fn rank_reason(&self, suite: RankSuite, d: u32) -> Option<&str> {
        self.rank_check
            .iter()
            .find(|r| r.suite == suite && r.d.contains(d))
            .map(|r| r.reason.as_str())
    }

    pub fn sweep_reason(&self, family: Family, d: u32) -> Option<&str> {
        self.codim_sweep
            .iter()
            .find(|r| r.family == family && r.d.contains(d))
            .map(|r| r.reason.as_str())
    }
}
