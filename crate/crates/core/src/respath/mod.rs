//! Resolution graphs of a singularity `E`: the combinatorial data of a chain
//! of blow-ups `V_K -> ... -> V_0`, and the coefficients
//! `r_i = ord_E φ*_{K,i} E_i` that every multiplicity computation is weighted by.
//!
//! Vertices are numbered `1..=K` as in the blow-up sequence; an edge
//! `j -> i` (always `j > i`) records that the `j`-th centre lies on the strict
//! transform of `E_i`, and its weight is the coefficient of `E_j` in the
//! pullback of that strict transform.

mod random;

pub use random::{random_graph, GraphParams};

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vertex {
    /// `k` with `i ∈ I_k`.
    pub level: u32,
    /// Multiplicity of `V_{i-1}` along the centre `B_{i-1}`.
    pub mu: u8,
    /// Codimension of `B_{i-1}` in `V_{i-1}`.
    pub codim: u32,
    /// Coefficient of `E_i` in the pullback of the strict transform of `T`;
    /// present exactly for `i <= l_fibre`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionGraph {
    /// `M`, the fibre dimension; levels run over `0..M`.
    pub fibre_dim: u32,
    #[serde(default)]
    pub l_fibre: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    EmptyGraph,
    FibreDim,
    LevelRange,
    LevelOrder,
    TopVertexUpper,
    MuRange,
    MuUpperLevels,
    CodimLevel,
    DeltaUpper,
    DeltaLower,
    LFibreRange,
    GammaMissing,
    GammaRange,
    GammaBeyondFibre,
    EdgeEndpoint,
    EdgeDirection,
    EdgeWeight,
    DuplicateEdge,
    Weight2Target,
    Weight2Source,
    Unreachable,
}

impl Rule {
    pub fn description(self) -> &'static str {
        match self {
            Rule::EmptyGraph => "graph has no vertices",
            Rule::FibreDim => "fibre dimension must be at least 1",
            Rule::LevelRange => "level outside 0..M-1",
            Rule::LevelOrder => "levels must be non-decreasing along the resolution",
            Rule::TopVertexUpper => "top vertex must lie in the upper part",
            Rule::MuRange => "mu must be 1 or 2",
            Rule::MuUpperLevels => "mu = 2 at level M-2 or M-1",
            Rule::CodimLevel => "codim must equal M + 1 - level",
            Rule::DeltaUpper => "upper-part vertex needs codim 2 and delta 1",
            Rule::DeltaLower => "lower-part vertex needs delta >= 2",
            Rule::LFibreRange => "l_fibre exceeds the number of vertices",
            Rule::GammaMissing => "gamma missing at a vertex inside the fibre range",
            Rule::GammaRange => "gamma must be 1 or 2",
            Rule::GammaBeyondFibre => "gamma given beyond l_fibre",
            Rule::EdgeEndpoint => "edge endpoint out of range",
            Rule::EdgeDirection => "edges must run from a later to an earlier vertex",
            Rule::EdgeWeight => "edge weight must be 1 or 2",
            Rule::DuplicateEdge => "duplicate edge",
            Rule::Weight2Target => "weight-2 edge into non-singular stage",
            Rule::Weight2Source => "weight-2 edge from a singular stage",
            Rule::Unreachable => "vertex not reachable from the top vertex",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.description())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    /// `"vertex 3"`, `"edge 5->2"` or `"graph"`.
    pub location: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.location, self.rule, self.detail)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("invalid graph: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("vertex {index} out of range 1..={k}")]
    VertexOutOfRange { index: usize, k: usize },
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("unsatisfiable graph parameters: {0}")]
    Unsatisfiable(String),
}

impl ResolutionGraph {
    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i - 1]
    }

    /// `L = max I_l` (0 when the lower part is empty).
    pub fn lower_end(&self) -> usize {
        let upper = self.fibre_dim.saturating_sub(1);
        (1..=self.k())
            .rev()
            .find(|&i| self.vertex(i).level < upper)
            .unwrap_or(0)
    }

    /// `L_sing = max{i <= L : μ_i = 2}` (0 when there is none).
    pub fn l_sing(&self) -> usize {
        (1..=self.lower_end())
            .rev()
            .find(|&i| self.vertex(i).mu == 2)
            .unwrap_or(0)
    }

    /// Elementary discrepancy `δ_i = codim_i - μ_i`.
    pub fn delta(&self, i: usize) -> i64 {
        let v = self.vertex(i);
        i64::from(v.codim) - i64::from(v.mu)
    }

    /// For each vertex `i` (index `i`, slot 0 unused) the edges `j -> i` as
    /// `(j, weight)`, sorted by `j`.
    pub fn in_edges(&self) -> Vec<Vec<(usize, u8)>> {
        let mut adj = vec![Vec::new(); self.k() + 1];
        for e in &self.edges {
            if e.to >= 1 && e.to <= self.k() {
                adj[e.to].push((e.from, e.weight));
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    fn check_index(&self, i: usize) -> Result<(), GraphError> {
        if i < 1 || i > self.k() {
            return Err(GraphError::VertexOutOfRange {
                index: i,
                k: self.k(),
            });
        }
        Ok(())
    }

    fn ensure_valid(&self) -> Result<(), GraphError> {
        let v = validate_graph(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(GraphError::Invalid(v))
        }
    }
}

fn violation(rule: Rule, location: String, detail: String) -> Violation {
    Violation {
        rule,
        location,
        detail,
    }
}

/// Every structural rule the graph breaks; empty iff the graph is valid.
pub fn validate_graph(g: &ResolutionGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let k = g.k();
    let m = g.fibre_dim;
    let graph = || "graph".to_string();
    if k == 0 {
        out.push(violation(Rule::EmptyGraph, graph(), "K = 0".into()));
        return out;
    }
    if m < 1 {
        out.push(violation(Rule::FibreDim, graph(), format!("M = {m}")));
        return out;
    }
    if g.l_fibre > k {
        out.push(violation(
            Rule::LFibreRange,
            graph(),
            format!("l_fibre = {} > K = {k}", g.l_fibre),
        ));
    }
    let upper = m - 1;
    for i in 1..=k {
        let v = g.vertex(i);
        let at = || format!("vertex {i}");
        if v.level >= m {
            out.push(violation(
                Rule::LevelRange,
                at(),
                format!("level {} with M = {m}", v.level),
            ));
        }
        if i > 1 && v.level < g.vertex(i - 1).level {
            out.push(violation(
                Rule::LevelOrder,
                at(),
                format!("level {} after level {}", v.level, g.vertex(i - 1).level),
            ));
        }
        if v.mu != 1 && v.mu != 2 {
            out.push(violation(Rule::MuRange, at(), format!("mu = {}", v.mu)));
        }
        if v.mu == 2 && v.level + 2 >= m {
            out.push(violation(
                Rule::MuUpperLevels,
                at(),
                format!("level {}", v.level),
            ));
        }
        if v.level < m && v.codim != m + 1 - v.level {
            out.push(violation(
                Rule::CodimLevel,
                at(),
                format!(
                    "codim {} at level {}, expected {}",
                    v.codim,
                    v.level,
                    m + 1 - v.level
                ),
            ));
        }
        let delta = g.delta(i);
        if v.level == upper {
            if v.codim != 2 || delta != 1 {
                out.push(violation(
                    Rule::DeltaUpper,
                    at(),
                    format!("codim {}, delta {delta}", v.codim),
                ));
            }
        } else if delta < 2 {
            out.push(violation(Rule::DeltaLower, at(), format!("delta {delta}")));
        }
        match (i <= g.l_fibre, v.gamma) {
            (true, None) => out.push(violation(Rule::GammaMissing, at(), "no gamma".into())),
            (true, Some(gm)) if gm != 1 && gm != 2 => {
                out.push(violation(Rule::GammaRange, at(), format!("gamma = {gm}")))
            }
            (false, Some(gm)) => out.push(violation(
                Rule::GammaBeyondFibre,
                at(),
                format!("gamma = {gm} with l_fibre = {}", g.l_fibre),
            )),
            _ => {}
        }
    }
    if g.vertex(k).level != upper {
        out.push(violation(
            Rule::TopVertexUpper,
            format!("vertex {k}"),
            format!("level {}, expected {upper}", g.vertex(k).level),
        ));
    }

    let l_sing = g.l_sing();
    let mut seen = HashSet::new();
    for e in &g.edges {
        let at = || format!("edge {}->{}", e.from, e.to);
        if e.from < 1 || e.from > k || e.to < 1 || e.to > k {
            out.push(violation(Rule::EdgeEndpoint, at(), format!("K = {k}")));
            continue;
        }
        if e.from <= e.to {
            out.push(violation(Rule::EdgeDirection, at(), "from <= to".into()));
        }
        if !seen.insert((e.from, e.to)) {
            out.push(violation(Rule::DuplicateEdge, at(), String::new()));
        }
        match e.weight {
            1 => {}
            2 => {
                if e.to > l_sing {
                    out.push(violation(
                        Rule::Weight2Target,
                        at(),
                        format!("target {} > L_sing = {l_sing}", e.to),
                    ));
                }
                if e.from <= l_sing {
                    out.push(violation(
                        Rule::Weight2Source,
                        at(),
                        format!("source {} <= L_sing = {l_sing}", e.from),
                    ));
                }
            }
            w => out.push(violation(Rule::EdgeWeight, at(), format!("weight {w}"))),
        }
    }

    let adj = g.in_edges();
    let mut reach = vec![false; k + 1];
    reach[k] = true;
    // edges point downwards, so one descending pass settles reachability
    let mut out_edges = vec![Vec::new(); k + 1];
    for (i, list) in adj.iter().enumerate() {
        for &(j, _) in list {
            if j >= 1 && j <= k {
                out_edges[j].push(i);
            }
        }
    }
    for j in (1..=k).rev() {
        if reach[j] {
            for &i in &out_edges[j] {
                if i < j {
                    reach[i] = true;
                }
            }
        }
    }
    for (i, &r) in reach.iter().enumerate().skip(1) {
        if !r {
            out.push(violation(
                Rule::Unreachable,
                format!("vertex {i}"),
                String::new(),
            ));
        }
    }
    out
}

/// `p_{Ki}`, the number of paths from `K` to `i` (index 0 unused).
pub fn path_counts(g: &ResolutionGraph) -> Result<Vec<BigInt>, GraphError> {
    g.ensure_valid()?;
    Ok(backward(g, |_| BigInt::one()))
}

/// `r_K = 1`, `r_i = Σ_{j -> i} w_{ji} r_j` (index 0 unused).
pub fn r_coeffs(g: &ResolutionGraph) -> Result<Vec<BigInt>, GraphError> {
    g.ensure_valid()?;
    Ok(backward(g, BigInt::from))
}

fn backward(g: &ResolutionGraph, weight: impl Fn(u8) -> BigInt) -> Vec<BigInt> {
    let k = g.k();
    let adj = g.in_edges();
    let mut out = vec![BigInt::zero(); k + 1];
    out[k] = BigInt::one();
    for i in (1..k).rev() {
        out[i] = adj[i].iter().map(|&(j, w)| weight(w) * &out[j]).sum();
    }
    out
}

/// Exceptional-basis expansion of the total transform of `E_i` on `V_K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PullbackExpansion {
    #[serde(serialize_with = "crate::serial::int_map")]
    pub coeffs: BTreeMap<usize, BigInt>,
}

impl PullbackExpansion {
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(&j).cloned().unwrap_or_default()
    }
}

/// Pulls `E_i` forward one blow-up at a time: blowing up `B_{j-1}` adds
/// `Σ_t c_t w_{jt}` copies of `E_j`, summing over the divisors `E_t` whose
/// strict transform contains the centre.
pub fn forward_pullback(g: &ResolutionGraph, i: usize) -> Result<PullbackExpansion, GraphError> {
    g.ensure_valid()?;
    g.check_index(i)?;
    let mut coeffs = BTreeMap::new();
    coeffs.insert(i, BigInt::one());
    let mut out_of = vec![Vec::new(); g.k() + 1];
    for e in &g.edges {
        out_of[e.from].push((e.to, e.weight));
    }
    for (j, targets) in out_of.iter().enumerate().skip(i + 1) {
        let c: BigInt = targets
            .iter()
            .filter_map(|&(t, w)| coeffs.get(&t).map(|c| c * BigInt::from(w)))
            .sum();
        coeffs.insert(j, c);
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(PullbackExpansion { coeffs })
}

/// Whether `a(i) >= Σ_{j ∈ I_l, j -> i} a(j)` for every `i ∈ I_l`.
/// `a` is indexed by vertex (slot 0 unused) and must cover `1..=L`.
pub fn compatibility_check<S: Field + PartialOrd>(
    g: &ResolutionGraph,
    a: &[S],
) -> Result<bool, GraphError> {
    let l = g.lower_end();
    if a.len() <= l {
        return Err(GraphError::MissingData(format!(
            "function given on {} vertices, the lower part has {l}",
            a.len().saturating_sub(1)
        )));
    }
    let adj = g.in_edges();
    Ok((1..=l).all(|i| {
        let incoming = adj[i]
            .iter()
            .filter(|&&(j, _)| j <= l)
            .fold(S::zero(), |acc, &(j, _)| acc + a[j].clone());
        a[i] >= incoming
    }))
}

/// Which multiplicity to assemble from the `r`-coefficients.
#[derive(Debug)]
pub enum Functional<'a, S> {
    /// `ord_E Σ = Σ r_i ν_i`; `nu` has length `K`.
    Sigma(&'a [S]),
    /// `ord_E T = Σ_{i <= l_fibre} r_i γ_i`.
    Fibre,
    /// `a(E) = Σ r_i δ_i`.
    Canonical,
}

impl<S> Clone for Functional<'_, S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S> Copy for Functional<'_, S> {}

/// The per-stage values `x_i` the functional weights by `r_i` (index 0 unused).
fn stage_values<S: Field>(
    g: &ResolutionGraph,
    mode: Functional<'_, S>,
) -> Result<Vec<S>, GraphError> {
    let k = g.k();
    let mut vals = vec![S::zero(); k + 1];
    match mode {
        Functional::Sigma(nu) => {
            if nu.len() != k {
                return Err(GraphError::MissingData(format!(
                    "nu has {} entries, K = {k}",
                    nu.len()
                )));
            }
            vals[1..].clone_from_slice(nu);
        }
        Functional::Fibre => {
            for i in 1..=g.l_fibre.min(k) {
                let gamma = g
                    .vertex(i)
                    .gamma
                    .ok_or_else(|| GraphError::MissingData(format!("gamma at vertex {i}")))?;
                vals[i] = S::from_i64(gamma.into());
            }
        }
        Functional::Canonical => {
            for (i, v) in vals.iter_mut().enumerate().skip(1) {
                *v = S::from_i64(g.delta(i));
            }
        }
    }
    Ok(vals)
}

pub fn ord_linear_functionals<S: Field>(
    g: &ResolutionGraph,
    mode: Functional<'_, S>,
) -> Result<S, GraphError> {
    let r = r_coeffs(g)?;
    let vals = stage_values(g, mode)?;
    Ok((1..=g.k()).fold(S::zero(), |acc, i| {
        acc + S::from_bigint(&r[i]) * vals[i].clone()
    }))
}

/// The same multiplicity by following total transforms: with
/// `φ* D^{j-1} = D^j + x_j E_j` and `φ* E_t^{j-1} = E_t^j + w_{jt} E_j`, the
/// coefficient of `E_j` in the pullback of `D` is
/// `c_j = x_j + Σ_t c_t w_{jt}`, and `ord_E D = c_K`.
pub fn stage_simulation<S: Field>(
    g: &ResolutionGraph,
    mode: Functional<'_, S>,
) -> Result<S, GraphError> {
    g.ensure_valid()?;
    let vals = stage_values(g, mode)?;
    let k = g.k();
    let mut out_of = vec![Vec::new(); k + 1];
    for e in &g.edges {
        out_of[e.from].push((e.to, e.weight));
    }
    let mut c = vec![S::zero(); k + 1];
    for j in 1..=k {
        c[j] = out_of[j].iter().fold(vals[j].clone(), |acc, &(t, w)| {
            acc + c[t].clone() * S::from_i64(w.into())
        });
    }
    Ok(c[k].clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaPartition {
    /// `Σ_{i <= L} r_i`
    #[serde(serialize_with = "crate::serial::int")]
    pub sigma_l: BigInt,
    /// `Σ_{i > L} r_i`
    #[serde(serialize_with = "crate::serial::int")]
    pub sigma_u: BigInt,
    /// `Σ_{i <= L_sing} r_i`
    #[serde(serialize_with = "crate::serial::int")]
    pub sigma_sing: BigInt,
    /// `Σ_{i > L_sing} r_i`
    #[serde(serialize_with = "crate::serial::int")]
    pub sigma_nonsing: BigInt,
}

pub fn sigma_partition(g: &ResolutionGraph) -> Result<SigmaPartition, GraphError> {
    let r = r_coeffs(g)?;
    let (l, ls) = (g.lower_end(), g.l_sing());
    let sum = |range: std::ops::Range<usize>| -> BigInt { r[range].iter().sum() };
    let k = g.k();
    let part = SigmaPartition {
        sigma_l: sum(1..l + 1),
        sigma_u: sum(l + 1..k + 1),
        sigma_sing: sum(1..ls + 1),
        sigma_nonsing: sum(ls + 1..k + 1),
    };
    debug_assert_eq!(
        &part.sigma_sing + &part.sigma_nonsing,
        &part.sigma_l + &part.sigma_u
    );
    Ok(part)
}

/// The chain `K -> K-1 -> ... -> 1` with unit weights, codimensions forced by
/// the levels, and `γ = 1` on `1..=l_fibre`.
pub fn chain_graph(fibre_dim: u32, levels: &[u32], mu: &[u8], l_fibre: usize) -> ResolutionGraph {
    let vertices = levels
        .iter()
        .zip(mu)
        .enumerate()
        .map(|(i, (&level, &mu))| Vertex {
            level,
            mu,
            codim: (fibre_dim + 1).saturating_sub(level),
            gamma: (i < l_fibre).then_some(1),
        })
        .collect();
    let edges = (2..=levels.len())
        .map(|j| Edge {
            from: j,
            to: j - 1,
            weight: 1,
        })
        .collect();
    ResolutionGraph {
        fibre_dim,
        l_fibre,
        vertices,
        edges,
    }
}
