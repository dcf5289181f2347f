use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rank::field_rank;
use super::{LinearSubspace, PolyError, ProjectivePoint};
use crate::scalar::Field;

/// Parameter coordinates are drawn uniformly from `-SAMPLE_RANGE..=SAMPLE_RANGE`.
pub const SAMPLE_RANGE: i64 = 10;

pub const MAX_SAMPLING_ATTEMPTS: usize = 32;

/// `m` linearly independent points on `theta`, deterministic in `seed`.
pub fn random_generic_points<S: Field>(
    theta: &LinearSubspace<S>,
    m: usize,
    seed: u64,
) -> Result<Vec<ProjectivePoint<S>>, PolyError> {
    sample(theta, m, seed, None)
}

/// As [`random_generic_points`], additionally keeping every point off the
/// hyperplane `form = 0`.
pub fn random_generic_points_off<S: Field>(
    theta: &LinearSubspace<S>,
    m: usize,
    seed: u64,
    form: &[S],
) -> Result<Vec<ProjectivePoint<S>>, PolyError> {
    sample(theta, m, seed, Some(form))
}

fn sample<S: Field>(
    theta: &LinearSubspace<S>,
    m: usize,
    seed: u64,
    avoid: Option<&[S]>,
) -> Result<Vec<ProjectivePoint<S>>, PolyError> {
    let k = theta.basis().len();
    if m > k {
        return Err(PolyError::SamplingFailed {
            m,
            dim: theta.dim(),
            attempts: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..MAX_SAMPLING_ATTEMPTS {
        let mut coords = Vec::with_capacity(m);
        for _ in 0..m {
            let params: Vec<S> = (0..k)
                .map(|_| S::from_i64(rng.gen_range(-SAMPLE_RANGE..=SAMPLE_RANGE)))
                .collect();
            let v = theta.combine(&params);
            if v.iter().all(Field::is_negligible) {
                continue 'attempt;
            }
            if let Some(form) = avoid {
                let value = form
                    .iter()
                    .zip(&v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
                if value.is_negligible() {
                    continue 'attempt;
                }
            }
            coords.push(v);
        }
        if field_rank(&coords) == m {
            return coords.into_iter().map(ProjectivePoint::new).collect();
        }
    }
    Err(PolyError::SamplingFailed {
        m,
        dim: theta.dim(),
        attempts: MAX_SAMPLING_ATTEMPTS,
    })
}
