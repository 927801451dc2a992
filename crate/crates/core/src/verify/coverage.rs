use std::time::{Duration, Instant};

use serde::Serialize;

use crate::coverings::BallCovering;
use crate::error::{Error, Result};
use crate::scalar::{dot, Scalar};
use crate::spaces::{norming_coords, sample_ball, sample_sphere, split_seed, Exponent, LpSpace, Majorant};

/// Slack allowed below zero when certifying closed balls.
pub const CLOSED_TOLERANCE: f64 = 1e-12;

/// Monotone surrogate of the ℓ_p distance that skips the final root.
#[derive(Clone, Copy)]
pub(crate) enum Metric<T> {
    Max,
    Two,
    Integer(i32, T),
    Real(T),
}

impl<T: Scalar> Metric<T> {
    pub(crate) fn of(space: &LpSpace<T>) -> Self {
        match space.exponent() {
            Exponent::Infinity => Metric::Max,
            Exponent::Finite(p) if p == T::lit(2.0) => Metric::Two,
            Exponent::Finite(p) if p.fract() == T::zero() && p <= T::lit(32.0) => {
                Metric::Integer(p.to_i32().expect("small integer"), p)
            }
            Exponent::Finite(p) => Metric::Real(p),
        }
    }

    pub(crate) fn key(self, x: &[T], c: &[T]) -> T {
        let diffs = x.iter().zip(c).map(|(&a, &b)| (a - b).abs());
        match self {
            Metric::Max => diffs.fold(T::zero(), T::max),
            Metric::Two => diffs.map(|v| v * v).sum(),
            Metric::Integer(k, _) => diffs.map(|v| v.powi(k)).sum(),
            Metric::Real(p) => diffs.map(|v| v.powf(p)).sum(),
        }
    }

    pub(crate) fn distance(self, key: T) -> T {
        match self {
            Metric::Max => key,
            Metric::Two => key.sqrt(),
            Metric::Integer(_, p) | Metric::Real(p) => key.powf(p.recip()),
        }
    }
}

/// Index and distance of the nearest center; ties go to the lowest index.
pub(crate) fn nearest<T: Scalar>(metric: Metric<T>, centers: &[Vec<T>], x: &[T]) -> (usize, T) {
    let mut best = (0, T::infinity());
    for (j, c) in centers.iter().enumerate() {
        let k = metric.key(x, c);
        if k < best.1 {
            best = (j, k);
        }
    }
    (best.0, metric.distance(best.1))
}

/// `radius − min_j ‖x − c_j‖`; positive means strictly inside some ball.
pub fn check_point<T: Scalar>(cov: &BallCovering<T>, x: &[T]) -> Result<T> {
    cov.space().check_dim(x)?;
    let (_, dist) = nearest(Metric::of(cov.space()), cov.centers(), x);
    Ok(cov.radius() - dist)
}

fn passes<T: Scalar>(closed: bool, margin: T) -> bool {
    if closed {
        margin >= -T::lit(CLOSED_TOLERANCE)
    } else {
        margin > T::zero()
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CoverageReport<T> {
    pub samples_tested: usize,
    /// Minimum of `radius − min_j ‖x − c_j‖` over all samples.
    pub worst_margin: T,
    /// First sample outside the covering; present iff `passed` is false.
    pub failure_witness: Option<Vec<T>>,
    pub seed: u64,
    pub closed: bool,
    pub passed: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Checks `n_ball` uniform ball points and `n_sphere` sphere points.
///
/// Closed coverings pass when every margin is at least `−1e−12`; open ones
/// need every margin strictly positive.
pub fn certify_sampling<T: Scalar>(
    cov: &BallCovering<T>,
    n_ball: usize,
    n_sphere: usize,
    seed: u64,
) -> Result<CoverageReport<T>> {
    if n_ball + n_sphere == 0 {
        return Err(Error::InvalidParameter("at least one sample is required".into()));
    }
    let start = Instant::now();
    let metric = Metric::of(cov.space());
    let mut worst = T::infinity();
    let mut witness = None;
    let mut scan = |points: Vec<Vec<T>>| {
        for x in points {
            let margin = cov.radius() - nearest(metric, cov.centers(), &x).1;
            if margin < worst {
                worst = margin;
            }
            if witness.is_none() && !passes(cov.is_closed(), margin) {
                witness = Some(x);
            }
        }
    };
    if n_ball > 0 {
        scan(sample_ball(cov.space(), n_ball, split_seed(seed, 1))?);
    }
    if n_sphere > 0 {
        scan(sample_sphere(cov.space(), n_sphere, split_seed(seed, 2))?);
    }
    Ok(CoverageReport {
        samples_tested: n_ball + n_sphere,
        worst_margin: worst,
        passed: witness.is_none(),
        failure_witness: witness,
        seed,
        closed: cov.is_closed(),
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct AdversarialResult<T> {
    /// Sphere point with the largest nearest-center distance found.
    pub point: Vec<T>,
    pub min_distance: T,
    /// `radius − min_distance`.
    pub margin: T,
    pub restarts: usize,
    pub steps: usize,
    pub seed: u64,
    pub passed: bool,
}

/// Subgradient of `x ↦ ‖x − c‖` at a point with `x ≠ c`.
fn distance_gradient<T: Scalar>(space: &LpSpace<T>, diff: &[T], dist: T) -> Vec<T> {
    match space.exponent() {
        Exponent::Finite(p) => norming_coords(diff, p, dist),
        Exponent::Infinity => {
            let k = (0..diff.len())
                .fold(0, |k, i| if diff[i].abs() > diff[k].abs() { i } else { k });
            let mut g = vec![T::zero(); diff.len()];
            g[k] = diff[k].signum();
            g
        }
    }
}

/// Projected subgradient ascent of `x ↦ min_j ‖x − c_j‖` on the unit sphere
/// from `restarts` random starts, step `0.1/√t`.
pub fn adversarial_search<T: Scalar>(
    cov: &BallCovering<T>,
    restarts: usize,
    steps: usize,
    seed: u64,
) -> Result<AdversarialResult<T>> {
    if restarts == 0 || steps == 0 {
        return Err(Error::InvalidParameter("restarts and steps must be positive".into()));
    }
    let space = cov.space();
    let metric = Metric::of(space);
    let starts = sample_sphere(space, restarts, split_seed(seed, 3))?;
    let mut best_point = starts[0].clone();
    let mut best = T::neg_infinity();
    for mut x in starts {
        for t in 1..=steps + 1 {
            let (j, dist) = nearest(metric, cov.centers(), &x);
            if dist > best {
                best = dist;
                best_point = x.clone();
            }
            if t > steps || dist == T::zero() {
                break;
            }
            let diff: Vec<T> = x.iter().zip(&cov.centers()[j]).map(|(&a, &b)| a - b).collect();
            let g = distance_gradient(space, &diff, dist);
            let eta = T::lit(0.1) / T::from_usize(t).expect("step index").sqrt();
            x.iter_mut().zip(&g).for_each(|(v, &gi)| *v = *v + eta * gi);
            space.normalize(&mut x);
        }
    }
    let margin = cov.radius() - best;
    Ok(AdversarialResult {
        point: best_point,
        min_distance: best,
        margin,
        restarts,
        steps,
        seed,
        passed: passes(cov.is_closed(), margin),
    })
}

/// Pointwise dichotomy behind the `d + 1` open unit balls around
/// `e^j/(2d)`, `−Σe^j/(2d)`: some `y_k > a/2` with `‖y − x^k‖ < 1`, or
/// `‖y − x^{d+1}‖² ≤ 1 − 1/(4d)` (plus `1e−12`).
pub fn simplex_dichotomy<T: Scalar>(d: usize, y: &[T]) -> Result<bool> {
    if y.len() != d || d == 0 {
        return Err(Error::DimensionMismatch { expected: d, found: y.len() });
    }
    let a = (T::lit(2.0) * T::from_usize(d).expect("dimension")).recip();
    let norm_sq = dot(y, y);
    let near_axis = (0..d).any(|k| {
        let shifted = norm_sq - y[k] * y[k] + (y[k] - a) * (y[k] - a);
        y[k] > a / T::lit(2.0) && shifted < T::one()
    });
    if near_axis {
        return Ok(true);
    }
    let last: T = y.iter().map(|&v| (v + a) * (v + a)).sum();
    let bound = T::one() - (T::lit(4.0) * T::from_usize(d).expect("dimension")).recip();
    Ok(last <= bound + T::lit(1e-12))
}

/// Fraction of sampled points `y` for which the smoothness estimate
/// `‖y − c‖ ≤ ‖y‖ − F_y(c) + 2‖y‖ω(‖c‖/‖y‖)` (or the triangle inequality)
/// already places `y` inside some ball.
pub fn smoothness_certified_fraction<T: Scalar, M: Majorant<T>>(
    cov: &BallCovering<T>,
    majorant: &M,
    n: usize,
    seed: u64,
) -> Result<f64> {
    let space = cov.space();
    let p = space.smooth_exponent()?;
    let mut points = sample_ball(space, n, split_seed(seed, 1))?;
    points.extend(sample_sphere(space, n, split_seed(seed, 2))?);
    let center_norms: Vec<T> = cov.centers().iter().map(|c| space.norm_of(c)).collect();
    let inside = |bound: T| if cov.is_closed() { bound <= cov.radius() } else { bound < cov.radius() };
    let two = T::lit(2.0);
    let certified = points
        .iter()
        .filter(|y| {
            let ny = space.norm_of(y);
            let fy = (ny > T::zero()).then(|| norming_coords(y, p, ny));
            cov.centers().iter().zip(&center_norms).any(|(c, &nc)| {
                if inside(ny + nc) {
                    return true;
                }
                fy.as_ref().is_some_and(|fy| inside(ny - dot(fy, c) + two * ny * majorant.eval(nc / ny)))
            })
        })
        .count();
    Ok(certified as f64 / points.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverings::{axis_cover, simplex_cover_shrunk, simplex_cover_unit};
    use approx::assert_relative_eq;

    #[test]
    fn pointwise_margins() {
        let (c, _) = simplex_cover_unit::<f64>(2).unwrap();
        assert_relative_eq!(check_point(&c, &[0.0, 0.0]).unwrap(), 0.75, max_relative = 1e-15);
        for center in c.centers() {
            assert_eq!(check_point(&c, center).unwrap(), c.radius());
        }
        let (a, _) = axis_cover::<f64>(4).unwrap();
        assert_relative_eq!(check_point(&a, &[1.0, 0.0, 0.0, 0.0]).unwrap(), a.radius() - 0.875, max_relative = 1e-14);
        assert!(check_point(&a, &[1.0]).is_err());
    }

    #[test]
    fn metric_matches_space_distance() {
        for p in [1.5, 2.0, 3.0, 4.0] {
            let s = LpSpace::<f64>::new(3, p).unwrap();
            let m = Metric::of(&s);
            let (x, y) = ([0.3, -0.2, 0.9], [-0.1, 0.4, 0.05]);
            assert_relative_eq!(m.distance(m.key(&x, &y)), s.distance(&x, &y).unwrap(), max_relative = 1e-14);
        }
        let s = LpSpace::<f64>::infinity(2);
        let m = Metric::of(&s);
        assert_eq!(m.distance(m.key(&[0.5, 0.1], &[-0.2, 0.0])), 0.7);
    }

    #[test]
    fn sampling_passes_and_fails() {
        let (c, _) = simplex_cover_shrunk::<f64>(4).unwrap();
        let r = certify_sampling(&c, 5000, 5000, 1).unwrap();
        assert!(r.passed && r.failure_witness.is_none() && r.worst_margin >= -1e-12);
        assert_eq!(r.samples_tested, 10_000);

        let broken = c.with_radius(c.radius() / 2.0).unwrap();
        let r = certify_sampling(&broken, 500, 500, 1).unwrap();
        assert!(!r.passed);
        let w = r.failure_witness.unwrap();
        assert!(check_point(&broken, &w).unwrap() < 0.0);
        assert!(certify_sampling(&c, 0, 0, 1).is_err());
    }

    #[test]
    fn open_cover_needs_positive_margin() {
        let space = LpSpace::<f64>::euclidean(2).unwrap();
        let single = BallCovering::new(space, vec![vec![0.0, 0.0]], 1.0, false, "origin").unwrap();
        assert!(!certify_sampling(&single, 0, 10, 1).unwrap().passed);
        let closed = BallCovering::new(space, vec![vec![0.0, 0.0]], 1.0, true, "origin").unwrap();
        assert!(certify_sampling(&closed, 100, 100, 1).unwrap().passed);
    }

    #[test]
    fn adversarial_concentric() {
        let space = LpSpace::<f64>::euclidean(3).unwrap();
        let single = BallCovering::new(space, vec![vec![0.0; 3]], 1.0, true, "origin").unwrap();
        let r = adversarial_search(&single, 3, 10, 4).unwrap();
        assert_relative_eq!(r.min_distance, 1.0, max_relative = 1e-14);
        assert!(adversarial_search(&single, 0, 10, 4).is_err());
    }

    #[test]
    fn adversarial_respects_margins() {
        let (c, m) = simplex_cover_shrunk::<f64>(3).unwrap();
        let r = adversarial_search(&c, 50, 200, 8).unwrap();
        assert!(r.margin >= -1e-9);
        assert!(r.min_distance.powi(2) <= 1.0 - m.value + 1e-9);

        let (a, m) = axis_cover::<f64>(8).unwrap();
        let r = adversarial_search(&a, 50, 200, 8).unwrap();
        assert!(r.min_distance.powi(2) <= 1.0 - m.value + 1e-9);
    }

    #[test]
    fn adversarial_finds_holes() {
        let (c, _) = axis_cover::<f64>(2).unwrap();
        let broken = c.with_radius(0.8).unwrap();
        let r = adversarial_search(&broken, 10, 100, 2).unwrap();
        assert!(!r.passed);
        // farthest sphere points from ±e^j/(4√2) are the diagonals
        let a = 1.0 / (4.0 * 2f64.sqrt());
        let diag = ((0.5f64.sqrt() - a).powi(2) + 0.5).sqrt();
        assert!((r.min_distance - diag).abs() < 1e-3, "{}", r.min_distance);
    }

    #[test]
    fn dichotomy_examples() {
        assert!(simplex_dichotomy(2, &[0.0, 0.0]).unwrap());
        assert!(simplex_dichotomy(2, &[1.0, 0.0]).unwrap());
        assert!(simplex_dichotomy(2, &[-0.6, -0.8]).unwrap());
        assert!(simplex_dichotomy(1, &[-1.0]).unwrap());
        assert!(simplex_dichotomy(2, &[0.0]).is_err());
    }
}
