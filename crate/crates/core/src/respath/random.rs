use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{validate_graph, Edge, GraphError, ResolutionGraph, Vertex};

/// Shape of a random resolution graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphParams {
    /// Number of blow-ups `K`.
    pub k: usize,
    /// Fibre dimension `M`.
    pub fibre_dim: u32,
    /// `L`, the size of the lower part; must be below `K`.
    pub lower: usize,
    /// `L_sing`; 0 for no singular centres.
    pub l_sing: usize,
    /// Probability of each optional edge `j -> i`.
    pub density: f64,
    /// Probability that an edge allowed to carry weight 2 does.
    pub weight2_prob: f64,
    pub l_fibre: usize,
    /// Always include `i+1 -> i`.
    pub chain: bool,
}

impl GraphParams {
    fn check(&self) -> Result<(), GraphError> {
        let fail = |m: String| Err(GraphError::Unsatisfiable(m));
        if self.k == 0 {
            return fail("K must be at least 1".into());
        }
        if self.fibre_dim == 0 {
            return fail("fibre_dim must be at least 1".into());
        }
        if self.lower >= self.k {
            return fail(format!(
                "lower = {} leaves no room for the top vertex",
                self.lower
            ));
        }
        if self.lower > 0 && self.fibre_dim < 2 {
            return fail("a lower part needs fibre_dim >= 2".into());
        }
        if self.l_sing > self.lower {
            return fail(format!("l_sing = {} > lower = {}", self.l_sing, self.lower));
        }
        if self.l_sing > 0 && self.fibre_dim < 3 {
            return fail("singular centres need fibre_dim >= 3".into());
        }
        if self.l_fibre > self.k {
            return fail(format!("l_fibre = {} > K = {}", self.l_fibre, self.k));
        }
        for (name, p) in [
            ("density", self.density),
            ("weight2_prob", self.weight2_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("{name} = {p} is not a probability"));
            }
        }
        Ok(())
    }
}

impl GraphParams {
    /// Random admissible parameters with `1 <= K <= k_max` and
    /// `2 <= M <= 6`, deterministic in `seed`.
    pub fn sample(k_max: usize, seed: u64) -> GraphParams {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let k = rng.gen_range(1..=k_max.max(1));
        let fibre_dim = rng.gen_range(2..=6);
        let lower = rng.gen_range(0..k);
        let l_sing = if fibre_dim >= 3 && lower > 0 && rng.gen_bool(0.6) {
            rng.gen_range(1..=lower)
        } else {
            0
        };
        GraphParams {
            k,
            fibre_dim,
            lower,
            l_sing,
            density: rng.gen_range(0.0..0.6),
            weight2_prob: rng.gen_range(0.0..1.0),
            l_fibre: rng.gen_range(0..=k),
            chain: rng.gen_bool(0.5),
        }
    }
}

/// A valid graph with the requested shape, deterministic in `seed`.
pub fn random_graph(params: &GraphParams, seed: u64) -> Result<ResolutionGraph, GraphError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = params.fibre_dim;
    let (k, l, ls) = (params.k, params.lower, params.l_sing);

    // singular centres need level <= M-3, the rest of the lower part <= M-2
    let mut levels: Vec<u32> = (0..ls)
        .map(|_| rng.gen_range(0..=m.saturating_sub(3)))
        .collect();
    levels.sort_unstable();
    let floor = levels.last().copied().unwrap_or(0);
    let mut rest: Vec<u32> = (ls..l).map(|_| rng.gen_range(floor..=m - 2)).collect();
    rest.sort_unstable();
    levels.extend(rest);
    levels.resize(k, m - 1);

    let vertices = levels
        .iter()
        .enumerate()
        .map(|(idx, &level)| {
            let i = idx + 1;
            let mu = if i == ls || (i < ls && rng.gen_bool(0.5)) {
                2
            } else {
                1
            };
            let gamma = (i <= params.l_fibre).then(|| rng.gen_range(1..=2));
            Vertex {
                level,
                mu,
                codim: m + 1 - level,
                gamma,
            }
        })
        .collect();

    let mut present = vec![vec![false; k + 1]; k + 1];
    for j in 2..=k {
        for i in 1..j {
            present[j][i] = (params.chain && i + 1 == j) || rng.gen_bool(params.density);
        }
    }
    for i in (1..k).rev() {
        if !(i + 1..=k).any(|j| present[j][i]) {
            let j = rng.gen_range(i + 1..=k);
            present[j][i] = true;
        }
    }
    let mut edges = Vec::new();
    for j in 2..=k {
        for i in 1..j {
            if present[j][i] {
                let doubled = j > ls && i <= ls && rng.gen_bool(params.weight2_prob);
                edges.push(Edge {
                    from: j,
                    to: i,
                    weight: if doubled { 2 } else { 1 },
                });
            }
        }
    }

    let g = ResolutionGraph {
        fibre_dim: m,
        l_fibre: params.l_fibre,
        vertices,
        edges,
    };
    let violations = validate_graph(&g);
    if !violations.is_empty() {
        return Err(GraphError::Invalid(violations));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::respath::{path_counts, r_coeffs};

    fn params(k: usize, lower: usize, l_sing: usize) -> GraphParams {
        GraphParams {
            k,
            fibre_dim: 5,
            lower,
            l_sing,
            density: 0.4,
            weight2_prob: 0.5,
            l_fibre: k / 2,
            chain: false,
        }
    }

    #[test]
    fn single_vertex() {
        let g = random_graph(&params(1, 0, 0), 0).unwrap();
        assert_eq!(g.k(), 1);
        assert!(g.edges.is_empty());
    }

    #[test]
    fn dense_nonsingular_has_r_equal_p() {
        let mut p = params(10, 6, 0);
        p.density = 0.9;
        let g = random_graph(&p, 5).unwrap();
        assert_eq!(r_coeffs(&g).unwrap(), path_counts(&g).unwrap());
    }

    #[test]
    fn singular_stages_respected() {
        for seed in 0..50 {
            let g = random_graph(&params(10, 6, 3), seed).unwrap();
            assert_eq!(g.l_sing(), 3);
            assert_eq!(g.lower_end(), 6);
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            random_graph(&params(12, 5, 2), 99).unwrap(),
            random_graph(&params(12, 5, 2), 99).unwrap()
        );
    }

    #[test]
    fn sampled_params_are_satisfiable() {
        for seed in 0..200 {
            let p = GraphParams::sample(40, seed);
            assert!(random_graph(&p, seed).is_ok(), "{p:?}");
        }
    }

    #[test]
    fn unsatisfiable() {
        assert!(random_graph(&params(3, 3, 0), 0).is_err());
        assert!(random_graph(&params(5, 2, 3), 0).is_err());
        let mut p = params(5, 2, 1);
        p.fibre_dim = 2;
        assert!(random_graph(&p, 0).is_err());
    }
}
