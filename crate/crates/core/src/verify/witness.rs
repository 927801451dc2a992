use crate::error::{Error, Result};
use crate::scalar::{dot, euclidean, Scalar};
use crate::spaces::{norming_coords, LpSpace};

/// Smallest (0-based) index `k` with `y_k ≥ ‖y‖₂ / (2(N − 1))` for a nonzero
/// zero-sum `y ∈ ℝ^N`.
pub fn heavy_coordinate<T: Scalar>(y: &[T]) -> Result<usize> {
    let n = y.len();
    if n < 2 {
        return Err(Error::InvalidParameter("selector needs at least two coordinates".into()));
    }
    let norm = euclidean(y);
    if norm == T::zero() {
        return Err(Error::ZeroVector);
    }
    let sum: T = y.iter().copied().sum();
    if sum.abs() > T::lit(1e-10) * norm {
        return Err(Error::InvalidParameter(format!("coordinates must sum to zero, got {sum}")));
    }
    let threshold = norm / (T::lit(2.0) * T::from_usize(n - 1).expect("length"));
    y.iter()
        .position(|&v| v >= threshold)
        .ok_or_else(|| Error::Numerical("no coordinate reaches the selector threshold".into()))
}

/// Orthonormal basis (standard inner product) of the span of `vectors`,
/// dropping directions that vanish relative to their own length.
fn orthonormal_basis<T: Scalar>(vectors: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = Vec::new();
    for v in vectors {
        let scale = euclidean(v);
        if scale == T::zero() {
            continue;
        }
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(ri, &bi)| *ri = *ri - c * bi);
            }
        }
        let len = euclidean(&r);
        if len > T::lit(1e-10) * scale {
            r.iter_mut().for_each(|ri| *ri = *ri / len);
            basis.push(r);
        }
    }
    basis
}

/// A nonzero vector orthogonal to every element of the orthonormal `basis`.
fn annihilator<T: Scalar>(d: usize, basis: &[Vec<T>]) -> Vec<T> {
    let mut best = vec![T::zero(); d];
    let mut best_len = T::zero();
    for i in 0..d {
        let mut r = vec![T::zero(); d];
        r[i] = T::one();
        for _ in 0..2 {
            for b in basis {
                let c = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(ri, &bi)| *ri = *ri - c * bi);
            }
        }
        let len = euclidean(&r);
        if len > best_len {
            best_len = len;
            best = r;
        }
    }
    best
}

/// A unit vector at distance at least 1 from each of `d` given centers, so
/// `d` unit balls never cover `B_X`.
///
/// A functional `w` with `‖w‖_q = 1` vanishing on the directions
/// `x^j − x^1` satisfies `‖z − m‖ ≥ |w(z) − w(x^1)|` for every `m` in the
/// affine hull of the centers; `z = ±` the norming vector of `w` makes that
/// at least 1.
pub fn uncovered_witness<T: Scalar>(space: &LpSpace<T>, centers: &[Vec<T>]) -> Result<Vec<T>> {
    space.smooth_exponent()?;
    let d = space.dim();
    if centers.len() != d {
        return Err(Error::InvalidParameter(format!("expected exactly {d} centers, got {}", centers.len())));
    }
    for c in centers {
        space.check_dim(c)?;
    }
    let directions: Vec<Vec<T>> = centers[1..]
        .iter()
        .map(|c| c.iter().zip(&centers[0]).map(|(&a, &b)| a - b).collect())
        .collect();
    let mut w = annihilator(d, &orthonormal_basis(&directions));

    let dual = space.dual_space()?;
    let q = space.dual_exponent();
    let wn = dual.norm_of(&w);
    if wn == T::zero() {
        return Err(Error::Numerical("no annihilating functional found".into()));
    }
    w.iter_mut().for_each(|v| *v = *v / wn);
    let mut z = norming_coords(&w, q, T::one());
    if dot(&w, &centers[0]) > T::zero() {
        z.iter_mut().for_each(|v| *v = -*v);
    }

    let tol = T::lit(1e-9);
    let worst = centers.iter().map(|c| space.distance_of(&z, c)).fold(T::infinity(), T::min);
    if worst < T::one() - tol {
        return Err(Error::Numerical(format!("witness lies at distance {worst} from a center")));
    }
    if space.is_euclidean() {
        let hull = affine_hull_distance(&z, centers)?;
        if hull < T::one() - tol {
            return Err(Error::Numerical(format!("witness lies at distance {hull} from the affine hull")));
        }
    }
    Ok(z)
}

/// Euclidean distance from `z` to the affine hull of `points`.
pub fn affine_hull_distance<T: Scalar>(z: &[T], points: &[Vec<T>]) -> Result<T> {
    let first = points.first().ok_or_else(|| Error::InvalidParameter("no points given".into()))?;
    for p in points {
        if p.len() != z.len() {
            return Err(Error::DimensionMismatch { expected: z.len(), found: p.len() });
        }
    }
    let directions: Vec<Vec<T>> = points[1..]
        .iter()
        .map(|c| c.iter().zip(first).map(|(&a, &b)| a - b).collect())
        .collect();
    let mut r: Vec<T> = z.iter().zip(first).map(|(&a, &b)| a - b).collect();
    let basis = orthonormal_basis(&directions);
    for _ in 0..2 {
        for b in &basis {
            let c = dot(&r, b);
            r.iter_mut().zip(b).for_each(|(ri, &bi)| *ri = *ri - c * bi);
        }
    }
    Ok(euclidean(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::sample_ball;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn selector_examples() {
        assert_eq!(heavy_coordinate(&[1.0, -1.0, 0.0]).unwrap(), 0);
        assert_eq!(heavy_coordinate(&[-2.0, 2.0]).unwrap(), 1);
        assert_eq!(heavy_coordinate(&[0.0, -1.0, 1.0]).unwrap(), 2);
        assert!(heavy_coordinate(&[0.0, 0.0]).is_err());
        assert!(heavy_coordinate(&[1.0, 1.0]).is_err());
        assert!(heavy_coordinate(&[1.0]).is_err());
    }

    proptest! {
        #[test]
        fn selector_threshold_holds(raw in proptest::collection::vec(-10.0f64..10.0, 2..50)) {
            let mean = raw.iter().sum::<f64>() / raw.len() as f64;
            let y: Vec<f64> = raw.iter().map(|v| v - mean).collect();
            prop_assume!(euclidean(&y) > 1e-9);
            let k = heavy_coordinate(&y).unwrap();
            let bound = euclidean(&y) / (2.0 * (y.len() - 1) as f64);
            prop_assert!(y[k] >= bound);
            prop_assert!(y[..k].iter().all(|&v| v < bound));
        }
    }

    #[test]
    fn witness_normal_to_axis() {
        let l2 = LpSpace::<f64>::euclidean(2).unwrap();
        let z = uncovered_witness(&l2, &[vec![0.3, 0.0], vec![-0.3, 0.0]]).unwrap();
        assert!(z[0].abs() < 1e-15);
        assert_relative_eq!(z[1].abs(), 1.0);
        assert_relative_eq!(l2.distance(&z, &[0.3, 0.0]).unwrap(), 1.09f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn witness_near_origin() {
        let l2 = LpSpace::<f64>::euclidean(3).unwrap();
        let centers = vec![vec![1e-9, 0.0, 0.0], vec![0.0, 2e-9, 0.0], vec![0.0, 0.0, -1e-9]];
        let z = uncovered_witness(&l2, &centers).unwrap();
        assert_relative_eq!(l2.norm(&z).unwrap(), 1.0, max_relative = 1e-12);
        for c in &centers {
            assert!(l2.distance(&z, c).unwrap() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn witness_degenerate_hull() {
        let l2 = LpSpace::<f64>::euclidean(3).unwrap();
        let c = vec![0.2, 0.1, -0.3];
        let z = uncovered_witness(&l2, &[c.clone(), c.clone(), c.clone()]).unwrap();
        assert!(l2.distance(&z, &c).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn witness_rejects_bad_input() {
        let l2 = LpSpace::<f64>::euclidean(2).unwrap();
        assert!(uncovered_witness(&l2, &[vec![0.0, 0.0]]).is_err());
        let linf = LpSpace::<f64>::infinity(2);
        assert!(uncovered_witness(&linf, &[vec![0.0, 0.0], vec![0.1, 0.0]]).is_err());
    }

    #[test]
    fn witness_in_l3() {
        let l3 = LpSpace::<f64>::new(2, 3.0).unwrap();
        for seed in 0..50 {
            let centers = sample_ball(&l3, 2, seed).unwrap();
            let z = uncovered_witness(&l3, &centers).unwrap();
            assert_relative_eq!(l3.norm(&z).unwrap(), 1.0, max_relative = 1e-12);
            for c in &centers {
                assert!(l3.distance(&z, c).unwrap() >= 1.0 - 1e-9);
            }
        }
    }

    #[test]
    fn hull_distance_oracle() {
        let pts = vec![vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]];
        assert_relative_eq!(affine_hull_distance(&[5.0, 4.0, 4.0], &pts).unwrap(), 5.0, max_relative = 1e-15);
    }
}
