//! `graph-check`: one resolution graph, or the seeded random-graph suite.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use rigidity_core::respath::{
    compatibility_check, forward_pullback, ord_linear_functionals, path_counts, r_coeffs,
    random_graph, sigma_partition, stage_simulation, validate_graph, Functional, GraphParams,
    ResolutionGraph, SigmaPartition,
};
use rigidity_core::serial;
use serde::{Deserialize, Serialize};

use crate::{
    envelope, parse_json, read_text, require_seed, task_seed, to_csv, to_json, CliError,
    CommonArgs, Format, Outcome,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RandomGraphSuite {
    pub count: u32,
    pub k_max: usize,
}

impl Default for RandomGraphSuite {
    fn default() -> Self {
        RandomGraphSuite {
            count: 1000,
            k_max: 40,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomDoc<T> {
    random: T,
}

/// Either a literal document or `{"random": {...}}`.
pub enum Input<D, R> {
    Document(D),
    Random(R),
}

/// Reads `--params`; with no file the random suite runs on defaults.
pub fn read_input<D, R>(common: &CommonArgs) -> Result<Input<D, R>, CliError>
where
    D: serde::de::DeserializeOwned,
    R: serde::de::DeserializeOwned + Default,
{
    let Some(path) = &common.params else {
        return Ok(Input::Random(R::default()));
    };
    let name = path.display().to_string();
    let text = read_text(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Schema {
        source_name: name.clone(),
        detail: e.to_string(),
    })?;
    if value.get("random").is_some() {
        let doc: RandomDoc<R> = parse_json(&text, &name)?;
        Ok(Input::Random(doc.random))
    } else {
        Ok(Input::Document(parse_json(&text, &name)?))
    }
}

/// Rejects an invalid graph as a schema error naming each offending vertex or edge.
pub fn validated(g: &ResolutionGraph, source_name: &str) -> Result<(), CliError> {
    let v = validate_graph(g);
    if v.is_empty() {
        return Ok(());
    }
    Err(CliError::Schema {
        source_name: source_name.to_string(),
        detail: v
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; "),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexRow {
    pub index: usize,
    pub level: u32,
    pub mu: u8,
    pub codim: u32,
    pub delta: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<u8>,
    #[serde(serialize_with = "serial::int")]
    pub p: BigInt,
    #[serde(serialize_with = "serial::int")]
    pub r: BigInt,
}

/// The identities every valid graph satisfies, each checked exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphChecks {
    /// `r_i` equals the coefficient of `E_K` in the pullback of `E_i`.
    pub pullback: bool,
    /// `r = p` above `L_sing`, `p <= r <= 2p` at or below.
    pub path_bounds: bool,
    /// `r` restricted to the lower part is compatible.
    pub compatible: bool,
    /// The stage-by-stage transforms give the same `Σ r ν`, `Σ r δ`, `Σ r γ`.
    pub stage_simulation: bool,
}

impl GraphChecks {
    pub fn all(&self) -> bool {
        self.pullback && self.path_bounds && self.compatible && self.stage_simulation
    }
}

pub fn run_checks(g: &ResolutionGraph) -> Result<GraphChecks, CliError> {
    let err = |e: rigidity_core::respath::GraphError| CliError::Config(e.to_string());
    let r = r_coeffs(g).map_err(err)?;
    let p = path_counts(g).map_err(err)?;
    let k = g.k();
    let mut pullback = true;
    #[allow(clippy::needless_range_loop)]
    for i in 1..=k {
        pullback &= forward_pullback(g, i).map_err(err)?.coeff(k) == r[i];
    }
    let ls = g.l_sing();
    let path_bounds = (1..=k).all(|i| {
        if i > ls {
            r[i] == p[i]
        } else {
            p[i] <= r[i] && r[i] <= BigInt::from(2) * &p[i]
        }
    });
    let rq: Vec<BigRational> = r.iter().cloned().map(BigRational::from_integer).collect();
    let compatible = compatibility_check(g, &rq).map_err(err)?;
    let nu: Vec<BigRational> = (1..=k)
        .map(|i| BigRational::new(BigInt::from(2 * i + 1), BigInt::from(i % 3 + 1)))
        .collect();
    let mut stage = true;
    for mode in [
        Functional::Sigma(&nu),
        Functional::Canonical,
        Functional::Fibre,
    ] {
        stage &= stage_simulation(g, mode).map_err(err)?
            == ord_linear_functionals(g, mode).map_err(err)?;
    }
    Ok(GraphChecks {
        pullback,
        path_bounds,
        compatible,
        stage_simulation: stage,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SingleBody {
    pub k: usize,
    pub fibre_dim: u32,
    pub lower_end: usize,
    pub l_sing: usize,
    pub l_fibre: usize,
    pub vertices: Vec<VertexRow>,
    pub partition: SigmaPartition,
    #[serde(serialize_with = "serial::rational")]
    pub discrepancy: BigRational,
    #[serde(serialize_with = "serial::rational")]
    pub ord_t: BigRational,
    pub checks: GraphChecks,
}

pub fn single(g: &ResolutionGraph) -> Result<SingleBody, CliError> {
    let err = |e: rigidity_core::respath::GraphError| CliError::Config(e.to_string());
    let r = r_coeffs(g).map_err(err)?;
    let p = path_counts(g).map_err(err)?;
    let vertices = (1..=g.k())
        .map(|i| {
            let v = g.vertex(i);
            VertexRow {
                index: i,
                level: v.level,
                mu: v.mu,
                codim: v.codim,
                delta: g.delta(i),
                gamma: v.gamma,
                p: p[i].clone(),
                r: r[i].clone(),
            }
        })
        .collect();
    Ok(SingleBody {
        k: g.k(),
        fibre_dim: g.fibre_dim,
        lower_end: g.lower_end(),
        l_sing: g.l_sing(),
        l_fibre: g.l_fibre,
        vertices,
        partition: sigma_partition(g).map_err(err)?,
        discrepancy: ord_linear_functionals::<BigRational>(g, Functional::Canonical)
            .map_err(err)?,
        ord_t: ord_linear_functionals::<BigRational>(g, Functional::Fibre).map_err(err)?,
        checks: run_checks(g)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteRow {
    pub index: u32,
    pub seed: u64,
    pub k: usize,
    pub lower_end: usize,
    pub l_sing: usize,
    pub edges: usize,
    pub checks: GraphChecks,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteSummary {
    pub graphs: usize,
    pub failures: usize,
    pub max_k: usize,
    pub with_weight2: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteBody {
    pub summary: SuiteSummary,
    pub graphs: Vec<SuiteRow>,
}

pub fn random_suite(suite: &RandomGraphSuite, base: u64) -> Result<SuiteBody, CliError> {
    if suite.k_max < 1 {
        return Err(CliError::Config("k_max must be at least 1".into()));
    }
    let rows: Vec<(SuiteRow, bool)> = (0..suite.count)
        .into_par_iter()
        .map(|index| {
            let seed = task_seed(base, &[u64::from(index)]);
            let g = random_graph(&GraphParams::sample(suite.k_max, seed), seed)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let checks = run_checks(&g)?;
            let row = SuiteRow {
                index,
                seed,
                k: g.k(),
                lower_end: g.lower_end(),
                l_sing: g.l_sing(),
                edges: g.edges.len(),
                checks,
            };
            Ok((row, g.edges.iter().any(|e| e.weight == 2)))
        })
        .collect::<Result<_, CliError>>()?;
    let summary = SuiteSummary {
        graphs: rows.len(),
        failures: rows.iter().filter(|(r, _)| !r.checks.all()).count(),
        max_k: rows.iter().map(|(r, _)| r.k).max().unwrap_or(0),
        with_weight2: rows.iter().filter(|(_, w2)| *w2).count(),
    };
    Ok(SuiteBody {
        summary,
        graphs: rows.into_iter().map(|(r, _)| r).collect(),
    })
}

pub fn run(common: &CommonArgs) -> Result<Outcome, CliError> {
    match read_input::<ResolutionGraph, RandomGraphSuite>(common)? {
        Input::Document(g) => {
            let name = common
                .params
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default();
            validated(&g, &name)?;
            let body = single(&g)?;
            let unexpected = usize::from(!body.checks.all());
            let report = match common.format {
                Format::Json => to_json(&envelope("graph-check", common.seed, &g, &body)),
                Format::Csv => to_csv(
                    &["vertex", "level", "mu", "codim", "delta", "gamma", "p", "r"],
                    body.vertices.iter().map(|v| {
                        vec![
                            v.index.to_string(),
                            v.level.to_string(),
                            v.mu.to_string(),
                            v.codim.to_string(),
                            v.delta.to_string(),
                            v.gamma.map(|g| g.to_string()).unwrap_or_default(),
                            v.p.to_string(),
                            v.r.to_string(),
                        ]
                    }),
                ),
                Format::Text => {
                    let mut out = format!(
                        "K={} M={} L={} L_sing={} L_fibre={}\n",
                        body.k, body.fibre_dim, body.lower_end, body.l_sing, body.l_fibre
                    );
                    for v in &body.vertices {
                        out.push_str(&format!(
                            "  {}: level {} mu {} delta {} p {} r {}\n",
                            v.index, v.level, v.mu, v.delta, v.p, v.r
                        ));
                    }
                    out.push_str(&format!(
                        "a(E) = {}, ord_T = {}, checks {}\n",
                        body.discrepancy,
                        body.ord_t,
                        if body.checks.all() { "pass" } else { "FAIL" }
                    ));
                    out
                }
            };
            Ok(Outcome { report, unexpected })
        }
        Input::Random(suite) => {
            let seed = require_seed(common, "the random graph suite")?;
            let body = random_suite(&suite, seed)?;
            let unexpected = body.summary.failures;
            let report = match common.format {
                Format::Json => to_json(&envelope("graph-check", Some(seed), &suite, &body)),
                Format::Csv => to_csv(
                    &[
                        "index",
                        "seed",
                        "K",
                        "L",
                        "L_sing",
                        "edges",
                        "pullback",
                        "path_bounds",
                        "compatible",
                        "stage_simulation",
                    ],
                    body.graphs.iter().map(|r| {
                        vec![
                            r.index.to_string(),
                            r.seed.to_string(),
                            r.k.to_string(),
                            r.lower_end.to_string(),
                            r.l_sing.to_string(),
                            r.edges.to_string(),
                            r.checks.pullback.to_string(),
                            r.checks.path_bounds.to_string(),
                            r.checks.compatible.to_string(),
                            r.checks.stage_simulation.to_string(),
                        ]
                    }),
                ),
                Format::Text => {
                    let s = &body.summary;
                    format!(
                        "{} random graphs (K up to {}, {} with weight-2 edges): {} failing\n",
                        s.graphs, s.max_k, s.with_weight2, s.failures
                    )
                }
            };
            Ok(Outcome { report, unexpected })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rigidity_core::respath::chain_graph;

    #[test]
    fn two_chain_summary() {
        let g = chain_graph(3, &[1, 2], &[1, 1], 2);
        let body = single(&g).unwrap();
        assert!(body.checks.all());
        assert_eq!(body.discrepancy, BigRational::from_integer(3.into()));
        assert_eq!(body.ord_t, BigRational::from_integer(2.into()));
    }

    #[test]
    fn small_random_suite() {
        let suite = RandomGraphSuite {
            count: 30,
            k_max: 10,
        };
        let body = random_suite(&suite, 1).unwrap();
        assert_eq!(body.summary.graphs, 30);
        assert_eq!(body.summary.failures, 0);
    }

    #[test]
    fn bad_weight_names_the_edge() {
        let mut g = chain_graph(3, &[1, 2], &[1, 1], 0);
        g.edges[0].weight = 3;
        let err = validated(&g, "g.json").unwrap_err();
        assert!(err.to_string().contains("edge 2->1"), "{err}");
    }
}
