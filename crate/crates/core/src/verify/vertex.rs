use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::coverage::certify_sampling;
use crate::coverings::BallCovering;
use crate::error::{Error, Result};
use crate::spaces::{split_seed, LpSpace};

/// Largest dimension for which the `2^d` centers are materialized.
pub const MAX_VERTEX_DIM: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct LinfVertexReport {
    pub d: usize,
    pub centers: usize,
    pub samples_tested: usize,
    pub worst_margin: f64,
    /// Every sample lies strictly inside some open ball of radius 1.
    pub covered: bool,
    pub centers_probed: usize,
    /// Largest number of cube vertices found inside one open unit ball.
    pub max_vertices_per_ball: usize,
    pub seed: u64,
    pub passed: bool,
}

fn sign_vector(d: usize, mask: u64, scale: f64) -> Vec<f64> {
    (0..d).map(|i| if mask >> i & 1 == 1 { scale } else { -scale }).collect()
}

/// Number of vertices of `{−1, 1}^d` at ℓ∞ distance below 1 from `c`,
/// counted by visiting every vertex.
pub fn vertices_in_open_ball(c: &[f64]) -> Result<usize> {
    let d = c.len();
    if d > MAX_VERTEX_DIM {
        return Err(Error::InvalidParameter(format!("dimension {d} exceeds {MAX_VERTEX_DIM}")));
    }
    Ok((0..1u64 << d)
        .filter(|&mask| (0..d).all(|i| {
            let v = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
            (v - c[i]).abs() < 1.0
        }))
        .count())
}

/// Open unit balls around the `2^d` points `s/2`, `s ∈ {−1, 1}^d`, cover
/// sampled points of `B_∞`, while no open unit ball around any of
/// `centers_probed` random centers contains two cube vertices.
pub fn linf_vertex_check(d: usize, samples: usize, centers_probed: usize, seed: u64) -> Result<LinfVertexReport> {
    if d == 0 || d > MAX_VERTEX_DIM {
        return Err(Error::InvalidParameter(format!("dimension must lie in 1..={MAX_VERTEX_DIM}, got {d}")));
    }
    let space = LpSpace::<f64>::infinity(d);
    let centers = (0..1u64 << d).map(|m| sign_vector(d, m, 0.5)).collect();
    let cov = BallCovering::new(space, centers, 1.0, false, format!("half-vertices(d={d})"))?;
    let report = certify_sampling(&cov, samples, 0, seed)?;

    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, 4));
    let mut max_vertices = 0;
    for _ in 0..centers_probed {
        let c: Vec<f64> = (0..d).map(|_| rng.random_range(-1.5..=1.5)).collect();
        max_vertices = max_vertices.max(vertices_in_open_ball(&c)?);
    }
    Ok(LinfVertexReport {
        d,
        centers: cov.len(),
        samples_tested: report.samples_tested,
        worst_margin: report.worst_margin,
        covered: report.passed,
        centers_probed,
        max_vertices_per_ball: max_vertices,
        seed,
        passed: report.passed && max_vertices <= 1,
    })
}
