use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use super::{Exponent, LpSpace};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Samples per independently seeded chunk.
const CHUNK: usize = 1024;

/// Derives the seed of stream `index` from a base seed (splitmix64 finalizer).
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("sample count must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Draws a direction with density proportional to `exp(-‖x‖_p^p)` (or a
/// uniform cube point for `p = ∞`), unnormalized.
fn raw_direction<R: Rng>(rng: &mut R, d: usize, gamma: Option<&Gamma<f64>>, p: f64) -> Vec<f64> {
    match gamma {
        Some(g) => (0..d)
            .map(|_| {
                let mag = g.sample(rng).powf(p.recip());
                if rng.random::<bool>() {
                    mag
                } else {
                    -mag
                }
            })
            .collect(),
        None => (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect(),
    }
}

fn sample_chunks<T, F>(n: usize, seed: u64, draw: F) -> Vec<Vec<T>>
where
    F: FnMut(&mut ChaCha8Rng) -> Vec<T>,
{
    ChunkedStream::new(seed, draw).take(n).collect()
}

/// Infinite sample stream; chunk `c` is drawn from its own RNG seeded with
/// `split_seed(seed, c)`, so any prefix is independent of how much is consumed.
struct ChunkedStream<F> {
    seed: u64,
    chunk: u64,
    used: usize,
    rng: ChaCha8Rng,
    draw: F,
}

impl<F> ChunkedStream<F> {
    fn new(seed: u64, draw: F) -> Self {
        Self { seed, chunk: 0, used: 0, rng: ChaCha8Rng::seed_from_u64(split_seed(seed, 0)), draw }
    }
}

impl<T, F: FnMut(&mut ChaCha8Rng) -> Vec<T>> Iterator for ChunkedStream<F> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        if self.used == CHUNK {
            self.chunk += 1;
            self.used = 0;
            self.rng = ChaCha8Rng::seed_from_u64(split_seed(self.seed, self.chunk));
        }
        self.used += 1;
        Some((self.draw)(&mut self.rng))
    }
}

/// Endless stream of unit-sphere points with the same distribution and
/// seeding as [`sample_sphere`]; its first `n` items equal `sample_sphere(n)`.
pub fn sphere_stream<T: Scalar>(space: &LpSpace<T>, seed: u64) -> impl Iterator<Item = Vec<T>> {
    let space = *space;
    let (gamma, p) = gamma_for(&space);
    ChunkedStream::new(seed, move |rng: &mut ChaCha8Rng| sphere_point(rng, &space, gamma.as_ref(), p))
}

fn sphere_point<T: Scalar, R: Rng>(
    rng: &mut R,
    space: &LpSpace<T>,
    gamma: Option<&Gamma<f64>>,
    p: f64,
) -> Vec<T> {
    loop {
        let raw = raw_direction(rng, space.dim(), gamma, p);
        let mut x: Vec<T> = raw.into_iter().map(T::lit).collect();
        if space.norm_of(&x) > T::zero() {
            space.normalize(&mut x);
            return x;
        }
    }
}

fn gamma_for<T: Scalar>(space: &LpSpace<T>) -> (Option<Gamma<f64>>, f64) {
    match space.exponent() {
        Exponent::Finite(p) => {
            let p = p.as_f64();
            (Some(Gamma::new(p.recip(), 1.0).expect("valid shape")), p)
        }
        Exponent::Infinity => (None, f64::INFINITY),
    }
}

/// `n` points on the unit sphere of `space`, deterministic in `seed`.
///
/// Finite `p` uses the p-generalized Gaussian (coordinates `±G^{1/p}` with
/// `G ~ Gamma(1/p, 1)`) followed by normalization, which is exactly uniform
/// with respect to the cone measure. For `p = ∞` a uniform cube point is
/// divided by its largest modulus.
pub fn sample_sphere<T: Scalar>(space: &LpSpace<T>, n: usize, seed: u64) -> Result<Vec<Vec<T>>> {
    check_count(n)?;
    Ok(sphere_stream(space, seed).take(n).collect())
}

/// `n` points uniform in the closed unit ball of `space`.
///
/// Finite `p`: sphere point scaled by `U^{1/d}`. `p = ∞`: uniform in the cube.
pub fn sample_ball<T: Scalar>(space: &LpSpace<T>, n: usize, seed: u64) -> Result<Vec<Vec<T>>> {
    check_count(n)?;
    let (gamma, p) = gamma_for(space);
    let d = space.dim();
    Ok(sample_chunks(n, seed, |rng| match gamma.as_ref() {
        Some(g) => {
            let x = sphere_point(rng, space, Some(g), p);
            let scale = T::lit(rng.random::<f64>().powf(1.0 / d as f64));
            x.into_iter().map(|v| v * scale).collect()
        }
        None => (0..d).map(|_| T::lit(rng.random_range(-1.0..=1.0))).collect(),
    }))
}
