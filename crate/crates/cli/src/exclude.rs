//! `exclude`: exclusion verdicts with the symbolic chain certificate.

use num_rational::BigRational;
use rayon::prelude::*;
use rigidity_core::excluder::{
    chain_verify, exclude, find_supermaximal, random_supermaximal_instance, ChainReport,
    ExclusionReport, InstanceDoc, NFInstance, PigeonholeInstance, PigeonholeOutcome, Verdict,
};
use rigidity_core::Rational;
use serde::{Deserialize, Serialize};

use crate::graph::{run_checks, validated, GraphChecks};
use crate::{
    envelope, parse_json, read_text, require_seed, task_seed, to_csv, to_json, CliError,
    CommonArgs, Format, Outcome,
};

pub const EXAMPLE_INSTANCE: &str = include_str!("../data/example_instance.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RandomInstanceSuite {
    pub count: u32,
    pub k_max: usize,
    pub n_max: u64,
}

impl Default for RandomInstanceSuite {
    fn default() -> Self {
        RandomInstanceSuite {
            count: 1000,
            k_max: 40,
            n_max: 12,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomDoc {
    random: RandomInstanceSuite,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PigeonholeDoc {
    pigeonhole: PigeonholeInstance,
}

pub enum Input {
    Instance(Box<InstanceDoc>),
    Random(RandomInstanceSuite),
    Pigeonhole(PigeonholeInstance),
}

pub fn read_input(common: &CommonArgs) -> Result<(Input, String), CliError> {
    let (text, name) = match &common.params {
        Some(path) => (read_text(path)?, path.display().to_string()),
        None => (EXAMPLE_INSTANCE.to_string(), "bundled example".to_string()),
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Schema {
        source_name: name.clone(),
        detail: e.to_string(),
    })?;
    let input = if value.get("random").is_some() {
        Input::Random(parse_json::<RandomDoc>(&text, &name)?.random)
    } else if value.get("pigeonhole").is_some() {
        Input::Pigeonhole(parse_json::<PigeonholeDoc>(&text, &name)?.pigeonhole)
    } else {
        Input::Instance(Box::new(parse_json(&text, &name)?))
    };
    Ok((input, name))
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceRow {
    pub index: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub k: usize,
    pub graph_checks: GraphChecks,
    pub report: ExclusionReport,
}

impl InstanceRow {
    /// A supermaximal instance that survives, or a graph identity that fails.
    pub fn is_violation(&self) -> bool {
        self.report.verdict == Verdict::NotExcluded || !self.graph_checks.all()
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ExcludeSummary {
    pub instances: usize,
    pub infeasible: usize,
    pub not_supermaximal: usize,
    pub not_excluded: usize,
    pub graph_check_failures: usize,
    pub chain_certified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcludeBody {
    pub summary: ExcludeSummary,
    pub chain: ChainReport,
    pub instances: Vec<InstanceRow>,
}

impl ExcludeBody {
    pub fn unexpected(&self) -> usize {
        self.summary.not_excluded
            + self.summary.graph_check_failures
            + usize::from(!self.summary.chain_certified)
    }
}

fn row(
    index: u32,
    seed: Option<u64>,
    inst: &NFInstance<Rational>,
) -> Result<InstanceRow, CliError> {
    let report = exclude(inst).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(InstanceRow {
        index,
        seed,
        k: inst.graph().k(),
        graph_checks: run_checks(inst.graph())?,
        report,
    })
}

fn body(instances: Vec<InstanceRow>) -> ExcludeBody {
    let chain = chain_verify();
    let count = |v: Verdict| instances.iter().filter(|r| r.report.verdict == v).count();
    let summary = ExcludeSummary {
        instances: instances.len(),
        infeasible: count(Verdict::Infeasible),
        not_supermaximal: count(Verdict::NotSupermaximal),
        not_excluded: count(Verdict::NotExcluded),
        graph_check_failures: instances.iter().filter(|r| !r.graph_checks.all()).count(),
        chain_certified: chain.all_certified,
    };
    ExcludeBody {
        summary,
        chain,
        instances,
    }
}

pub fn single(doc: InstanceDoc, source_name: &str) -> Result<ExcludeBody, CliError> {
    validated(&doc.graph, source_name)?;
    let inst = NFInstance::try_from(doc).map_err(|e| CliError::Schema {
        source_name: source_name.to_string(),
        detail: e.to_string(),
    })?;
    Ok(body(vec![row(0, None, &inst)?]))
}

pub fn random_suite(suite: &RandomInstanceSuite, base: u64) -> Result<ExcludeBody, CliError> {
    if suite.k_max < 1 || suite.n_max < 1 {
        return Err(CliError::Config(
            "k_max and n_max must be at least 1".into(),
        ));
    }
    let rows = (0..suite.count)
        .into_par_iter()
        .map(|index| {
            let seed = task_seed(base, &[u64::from(index)]);
            let inst = random_supermaximal_instance(suite.k_max, suite.n_max, seed)
                .map_err(|e| CliError::Config(e.to_string()))?;
            row(index, Some(seed), &inst)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(body(rows))
}

fn rational_cell(v: &BigRational) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        v.to_string()
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Infeasible => "infeasible",
        Verdict::NotSupermaximal => "not supermaximal",
        Verdict::NotExcluded => "not excluded",
    }
}

fn render(
    common: &CommonArgs,
    seed: Option<u64>,
    config: &impl Serialize,
    body: &ExcludeBody,
) -> String {
    match common.format {
        Format::Json => to_json(&envelope("exclude", seed, config, body)),
        Format::Csv => to_csv(
            &[
                "index",
                "seed",
                "K",
                "n",
                "epsilon",
                "lambda",
                "ord_t",
                "lhs_upper",
                "qp_lower",
                "verdict",
            ],
            body.instances.iter().map(|r| {
                let rep = &r.report;
                vec![
                    r.index.to_string(),
                    r.seed.map(|s| s.to_string()).unwrap_or_default(),
                    r.k.to_string(),
                    rep.n.to_string(),
                    rational_cell(&rep.epsilon),
                    rational_cell(&rep.lambda),
                    rational_cell(&rep.ord_t),
                    rational_cell(&rep.lhs_upper),
                    rational_cell(&rep.qp_lower),
                    verdict_str(rep.verdict).to_string(),
                ]
            }),
        ),
        Format::Text => text(body),
    }
}

fn text(body: &ExcludeBody) -> String {
    let mut out = String::new();
    for step in &body.chain.steps {
        out.push_str(&format!(
            "step ({}): {}\n  difference {}\n  {}\n",
            step.step,
            step.claim,
            step.difference,
            serde_json::to_string(&step.certificate).expect("certificates serialize")
        ));
    }
    if let [only] = body.instances.as_slice() {
        let rep = &only.report;
        out.push_str(&format!(
            "K={} n={} e={} lambda={} ord_T={}\n",
            only.k, rep.n, rep.epsilon, rep.lambda, rep.ord_t
        ));
        out.push_str(&format!(
            "lhs < {}, rhs >= {}; 2neS_u = {} <= n^2S_u^2 + e^2 = {}, difference ({})^2 = {}\n",
            rep.lhs_upper,
            rep.qp_lower,
            rep.terminal.two_ne_su,
            rep.terminal.n2_su2_plus_e2,
            rep.terminal.root,
            rep.terminal.square
        ));
        if let Some(d) = &rep.diagnostic {
            out.push_str(&format!("{d}\n"));
        }
    }
    let s = &body.summary;
    out.push_str(&format!(
        "{} instance(s): {} infeasible, {} not supermaximal, {} not excluded; graph check failures {}; chain {}\n",
        s.instances,
        s.infeasible,
        s.not_supermaximal,
        s.not_excluded,
        s.graph_check_failures,
        if s.chain_certified { "certified" } else { "NOT certified" }
    ));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct PigeonholeBody {
    pub outcome: PigeonholeOutcome,
}

pub fn run(common: &CommonArgs) -> Result<Outcome, CliError> {
    let (input, name) = read_input(common)?;
    match input {
        Input::Instance(doc) => {
            let config = (*doc).clone();
            let body = single(*doc, &name)?;
            Ok(Outcome {
                report: render(common, common.seed, &config, &body),
                unexpected: body.unexpected(),
            })
        }
        Input::Random(suite) => {
            let seed = require_seed(common, "the random instance suite")?;
            let body = random_suite(&suite, seed)?;
            Ok(Outcome {
                report: render(common, Some(seed), &suite, &body),
                unexpected: body.unexpected(),
            })
        }
        Input::Pigeonhole(p) => {
            let outcome = find_supermaximal(&p).map_err(|e| CliError::Schema {
                source_name: name,
                detail: e.to_string(),
            })?;
            let unexpected = usize::from(outcome.aggregate_holds && outcome.found.is_none());
            let report = match common.format {
                Format::Json => to_json(&envelope(
                    "exclude",
                    common.seed,
                    &p,
                    &PigeonholeBody { outcome },
                )),
                Format::Csv => to_csv(
                    &["label", "lhs", "rhs", "supermaximal"],
                    outcome.terms.iter().map(|t| {
                        vec![
                            t.label.clone(),
                            rational_cell(&t.lhs),
                            rational_cell(&t.rhs),
                            t.supermaximal.to_string(),
                        ]
                    }),
                ),
                Format::Text => format!(
                    "aggregate {} vs {} ({}): {}\n",
                    outcome.aggregate_lhs,
                    outcome.aggregate_rhs,
                    if outcome.aggregate_holds {
                        "holds"
                    } else {
                        "fails"
                    },
                    match (&outcome.found, &outcome.diagnostic) {
                        (Some(label), _) => format!("supermaximal singularity {label}"),
                        (None, Some(d)) => format!("none: {d}"),
                        (None, None) => "none".to_string(),
                    }
                ),
            };
            Ok(Outcome { report, unexpected })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rational(n: i64, d: i64) -> Rational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bundled_example_is_infeasible() {
        let doc: InstanceDoc = serde_json::from_str(EXAMPLE_INSTANCE).unwrap();
        let body = single(doc, "example").unwrap();
        let rep = &body.instances[0].report;
        assert_eq!(rep.verdict, Verdict::Infeasible);
        assert_eq!(rep.epsilon, rational(2, 1));
        assert!(rep.terminal.holds);
        assert!(body.chain.all_certified);
        assert_eq!(body.unexpected(), 0);
    }

    #[test]
    fn small_random_suite() {
        let suite = RandomInstanceSuite {
            count: 25,
            k_max: 12,
            n_max: 5,
        };
        let body = random_suite(&suite, 3).unwrap();
        assert_eq!(body.summary.infeasible, 25);
        assert_eq!(body.unexpected(), 0);
    }
}
