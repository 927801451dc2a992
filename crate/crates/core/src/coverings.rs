//! Explicit coverings of the unit ball by finitely many balls.
//!
//! Single-stage constructions cover `B_X` with radius in `(0, 1]`;
//! [`iterate_cover`] composes one of them with itself to reach radius `r^m`.

use serde::{Deserialize, Serialize};

use crate::dictionaries::Dictionary;
use crate::error::{Error, Result};
use crate::frames::etf_of_dimension;
use crate::scalar::Scalar;
use crate::spaces::{solve_step_size, LpSpace, Majorant, SmoothnessMajorant};
use crate::verify::{certify_sampling, smoothness_certificate};

/// Upper limit on the number of centers an iteration may produce.
pub const MAX_ITERATED_CENTERS: u128 = 10_000_000;

/// Balls `B(c_j, r)` (or open balls when `closed` is false) in an ℓ_p space.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct BallCovering<T> {
    space: LpSpace<T>,
    centers: Vec<Vec<T>>,
    radius: T,
    closed: bool,
    provenance: String,
}

impl<T: Scalar> BallCovering<T> {
    /// Validates center dimensions, `radius ∈ (0, 1]` and `‖c‖ ≤ 1 + radius`.
    pub fn new(
        space: LpSpace<T>,
        centers: Vec<Vec<T>>,
        radius: T,
        closed: bool,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::InvalidParameter("a covering needs at least one center".into()));
        }
        if !(radius > T::zero() && radius <= T::one()) {
            return Err(Error::InvalidParameter(format!("radius must lie in (0, 1], got {radius}")));
        }
        for c in &centers {
            space.check_dim(c)?;
            if !(space.norm_of(c) <= T::one() + radius) {
                return Err(Error::InvalidParameter(format!(
                    "center at norm {} cannot meet the unit ball",
                    space.norm_of(c)
                )));
            }
        }
        Ok(Self { space, centers, radius, closed, provenance: provenance.into() })
    }

    pub fn space(&self) -> &LpSpace<T> {
        &self.space
    }

    pub fn centers(&self) -> &[Vec<T>] {
        &self.centers
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Same centers with a different radius; used to build deliberately
    /// broken coverings in tests and diagnostics.
    pub fn with_radius(&self, radius: T) -> Result<Self> {
        Self::new(self.space, self.centers.clone(), radius, self.closed, self.provenance.clone())
    }

    /// Drops centers within `tol` of an earlier one.
    pub fn dedup(&self, tol: T) -> Self {
        let mut kept: Vec<Vec<T>> = Vec::new();
        for c in &self.centers {
            if kept.iter().all(|k| self.space.distance_of(k, c) > tol) {
                kept.push(c.clone());
            }
        }
        Self { centers: kept, ..self.clone() }
    }

    /// `true` when `−c` is a center (within `tol`) for every center `c`.
    pub fn is_symmetric(&self, tol: T) -> bool {
        self.centers.iter().all(|c| {
            let neg: Vec<T> = c.iter().map(|&v| -v).collect();
            self.centers.iter().any(|o| self.space.distance_of(o, &neg) <= tol)
        })
    }
}

impl<'de, T: Scalar> Deserialize<'de> for BallCovering<T> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(bound = "T: Scalar")]
        struct Raw<T> {
            space: LpSpace<T>,
            centers: Vec<Vec<T>>,
            radius: T,
            closed: bool,
            #[serde(default)]
            provenance: String,
        }
        let r = Raw::<T>::deserialize(de)?;
        BallCovering::new(r.space, r.centers, r.radius, r.closed, r.provenance)
            .map_err(serde::de::Error::custom)
    }
}

/// How a construction's proof certifies coverage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginKind {
    /// Open balls are needed; no uniform slack exists.
    StrictOpen,
    /// `min_j ‖y − c_j‖² ≤ 1 − value` on the region the proof covers.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CoverMargin<T> {
    pub kind: MarginKind,
    pub value: T,
}

fn lit<T: Scalar>(x: f64) -> T {
    T::lit(x)
}

fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("usize fits in a float")
}

fn require_dim(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::InvalidParameter("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Centers `a e^1, …, a e^d` and `−a Σ e^j`.
pub(crate) fn simplex_centers<T: Scalar>(d: usize, a: T) -> Vec<Vec<T>> {
    let mut centers: Vec<Vec<T>> = (0..d)
        .map(|j| (0..d).map(|i| if i == j { a } else { T::zero() }).collect())
        .collect();
    centers.push(vec![-a; d]);
    centers
}

fn check_small_norm_branch<T: Scalar>(radius: T, step: T, what: &str) -> Result<()> {
    if radius >= lit::<T>(0.5) + step {
        Ok(())
    } else {
        Err(Error::Construction(format!(
            "{what}: radius {radius} < 1/2 + {step}, points of norm below 1/2 would be uncovered"
        )))
    }
}

/// `d + 1` open unit balls around `e^j/(2d)` and `−Σe^j/(2d)` covering `B₂`.
pub fn simplex_cover_unit<T: Scalar>(d: usize) -> Result<(BallCovering<T>, CoverMargin<T>)> {
    require_dim(d)?;
    let a = (lit::<T>(2.0) * from_usize(d)).recip();
    let cov = BallCovering::new(
        LpSpace::euclidean(d)?,
        simplex_centers(d, a),
        T::one(),
        false,
        format!("simplex(d={d}, a=1/{})", 2 * d),
    )?;
    Ok((cov, CoverMargin { kind: MarginKind::StrictOpen, value: T::zero() }))
}

/// Same layout with `a = 2/(5d+1)` and closed balls of radius `√(1 − a²)`.
pub fn simplex_cover_shrunk<T: Scalar>(d: usize) -> Result<(BallCovering<T>, CoverMargin<T>)> {
    require_dim(d)?;
    let a = lit::<T>(2.0) / from_usize(5 * d + 1);
    let radius = (T::one() - a * a).sqrt();
    let cov = BallCovering::new(
        LpSpace::euclidean(d)?,
        simplex_centers(d, a),
        radius,
        true,
        format!("simplex-shrunk(d={d}, a=2/{})", 5 * d + 1),
    )?;
    Ok((cov, CoverMargin { kind: MarginKind::Uniform, value: a * a }))
}

/// Centers `φ^j/(8d)` from the Hadamard ETF, radius `√(1 − 1/(64d²))`.
pub fn etf_cover<T: Scalar>(d: usize) -> Result<(BallCovering<T>, CoverMargin<T>)> {
    require_dim(d)?;
    let frame = etf_of_dimension::<T>(d)?;
    let dd: T = from_usize(d);
    let a = (lit::<T>(8.0) * dd).recip();
    let slack = (lit::<T>(64.0) * dd * dd).recip();
    let radius = (T::one() - slack).sqrt();
    check_small_norm_branch(radius, a, "etf cover")?;
    let centers = frame
        .vectors()
        .iter()
        .map(|phi| phi.iter().map(|&v| v * a).collect())
        .collect();
    let cov = BallCovering::new(
        LpSpace::euclidean(d)?,
        centers,
        radius,
        true,
        format!("etf(d={d}, a=1/{})", 8 * d),
    )?;
    Ok((cov, CoverMargin { kind: MarginKind::Uniform, value: slack }))
}

fn signed_centers<T: Scalar>(vectors: &[Vec<T>], step: T) -> Vec<Vec<T>> {
    let mut centers: Vec<Vec<T>> = vectors.iter().map(|g| g.iter().map(|&v| v * step).collect()).collect();
    centers.extend(vectors.iter().map(|g| g.iter().map(|&v| -v * step).collect::<Vec<T>>()));
    centers
}

/// `2N` closed balls around `±μ g^j` of radius `√(1 − μ²)` in ℓ₂.
///
/// Valid when the dictionary is maximal for `μ`; certify that separately.
pub fn dictionary_cover_l2<T: Scalar>(dict: &Dictionary<T>, mu: T) -> Result<BallCovering<T>> {
    if !dict.space().is_euclidean() {
        return Err(Error::UnsupportedExponent(format!(
            "{} (Euclidean dictionary cover needs p = 2)",
            dict.space().exponent()
        )));
    }
    if !(mu > T::zero() && mu <= lit::<T>(0.5).sqrt()) {
        return Err(Error::InvalidParameter(format!("mu must lie in (0, 1/√2], got {mu}")));
    }
    BallCovering::new(
        *dict.space(),
        signed_centers(dict.vectors(), mu),
        (T::one() - mu * mu).sqrt(),
        true,
        format!("dict-l2(d={}, N={}, mu={mu})", dict.space().dim(), dict.len()),
    )
}

/// `2N` closed balls around `±a(μ) g^j` of radius `1 − μ a(μ)/2`, where
/// `a(μ)` solves `aμ = 4ω(2a)`.
pub fn dictionary_cover_banach<T: Scalar, M: Majorant<T>>(
    dict: &Dictionary<T>,
    mu: T,
    majorant: &M,
) -> Result<BallCovering<T>> {
    dict.space().smooth_exponent()?;
    if !(mu > T::zero() && mu <= T::one()) {
        return Err(Error::InvalidParameter(format!("mu must lie in (0, 1], got {mu}")));
    }
    let a = solve_step_size(majorant, mu)?;
    let radius = T::one() - mu * a / lit(2.0);
    check_small_norm_branch(radius, a, "banach dictionary cover")?;
    BallCovering::new(
        *dict.space(),
        signed_centers(dict.vectors(), a),
        radius,
        true,
        format!(
            "dict-banach(d={}, p={}, N={}, mu={mu}, a={a})",
            dict.space().dim(),
            dict.space().exponent(),
            dict.len()
        ),
    )
}

/// `2d` closed balls around `±e^j/(4√d)` in ℓ₂ with radius
/// `max(1/2 + a, √(1 − 3/(16d)))`.
pub fn axis_cover<T: Scalar>(d: usize) -> Result<(BallCovering<T>, CoverMargin<T>)> {
    require_dim(d)?;
    let dd: T = from_usize(d);
    let a = (lit::<T>(4.0) * dd.sqrt()).recip();
    let slack = lit::<T>(3.0) / (lit::<T>(16.0) * dd);
    let radius = (lit::<T>(0.5) + a).max((T::one() - slack).sqrt());
    let basis = standard_basis::<T>(d);
    let cov = BallCovering::new(
        LpSpace::euclidean(d)?,
        signed_centers(&basis, a),
        radius,
        true,
        format!("axis(d={d}, a=1/(4*sqrt({d})))"),
    )?;
    Ok((cov, CoverMargin { kind: MarginKind::Uniform, value: slack }))
}

pub(crate) fn standard_basis<T: Scalar>(d: usize) -> Vec<Vec<T>> {
    (0..d)
        .map(|j| (0..d).map(|i| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

/// `2d` closed balls around `±a ψ^j` for the standard basis of ℓ_p with
/// basis constant `k` (`|x_j| ≤ k‖x‖`); `μ = 1/(kd)`, `a = a(ω, μ)`,
/// radius `1 − aμ/2`. Coverage follows deterministically by pigeonhole.
pub fn basis_cover<T: Scalar, M: Majorant<T>>(
    space: &LpSpace<T>,
    k: T,
    majorant: &M,
) -> Result<BallCovering<T>> {
    basis_cover_with(space, standard_basis(space.dim()), k, majorant)
}

/// [`basis_cover`] for a caller-supplied unit-norm basis with declared constant `k`.
pub fn basis_cover_with<T: Scalar, M: Majorant<T>>(
    space: &LpSpace<T>,
    basis: Vec<Vec<T>>,
    k: T,
    majorant: &M,
) -> Result<BallCovering<T>> {
    space.smooth_exponent()?;
    if !(k >= T::one()) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("basis constant must be at least 1, got {k}")));
    }
    let d = space.dim();
    if basis.len() != d {
        return Err(Error::InvalidParameter(format!("basis needs {d} vectors, got {}", basis.len())));
    }
    let basis = Dictionary::new(*space, basis)?;
    let mu = (k * from_usize(d)).recip();
    let a = solve_step_size(majorant, mu)?;
    let radius = T::one() - a * mu / lit(2.0);
    check_small_norm_branch(radius, a, "basis cover")?;
    BallCovering::new(
        *space,
        signed_centers(basis.vectors(), a),
        radius,
        true,
        format!("basis(d={d}, p={}, K={k}, mu={mu}, a={a})", space.exponent()),
    )
}

/// `m`-fold self-composition: centers `c_{i1} + r c_{i2} + … + r^{m−1} c_{im}`
/// and radius `r^m`, without deduplication (exactly `N^m` centers).
pub fn iterate_cover<T: Scalar>(cov: &BallCovering<T>, m: u32) -> Result<BallCovering<T>> {
    if m == 0 {
        return Err(Error::InvalidParameter("iteration count must be at least 1".into()));
    }
    let r = cov.radius;
    if m > 1 && !(r < T::one()) {
        return Err(Error::InvalidParameter("iteration needs a base radius below 1".into()));
    }
    let n = cov.centers.len() as u128;
    let count = n.checked_pow(m).filter(|&c| c <= MAX_ITERATED_CENTERS).ok_or(
        Error::CenterOverflow { count: n.saturating_pow(m), limit: MAX_ITERATED_CENTERS },
    )?;

    let d = cov.space.dim();
    let mut centers: Vec<Vec<T>> = vec![vec![T::zero(); d]];
    let mut scale = T::one();
    for _ in 0..m {
        let mut next = Vec::with_capacity(centers.len() * cov.centers.len());
        for prefix in &centers {
            for c in &cov.centers {
                next.push(prefix.iter().zip(c).map(|(&p, &v)| p + scale * v).collect());
            }
        }
        centers = next;
        scale = scale * r;
    }
    debug_assert_eq!(centers.len() as u128, count);
    Ok(BallCovering {
        space: cov.space,
        centers,
        radius: r.powi(m as i32),
        closed: cov.closed,
        provenance: if m == 1 { cov.provenance.clone() } else { format!("iterate(m={m}) of {}", cov.provenance) },
    })
}

/// Outcome of the step-size search for the simplex layout in a smooth ℓ_p.
#[derive(Clone, Debug)]
pub struct SimplexSearch<T> {
    /// Largest grid value that passed, if any.
    pub step: Option<T>,
    pub covering: Option<BallCovering<T>>,
    /// Every grid value tried, largest first, with its verdict.
    pub tried: Vec<(T, bool)>,
    /// Fraction of the certification samples for which the smoothness
    /// estimate alone already proves coverage at the returned step.
    pub smoothness_certified: Option<f64>,
}

/// Searches `a ∈ {1/2, 1/4, …, 2^{−20}}` for the largest step such that the
/// `d + 1` open unit balls around `a e^j`, `−a Σ e^j` strictly cover
/// `certify_samples` ball and `certify_samples` sphere points.
pub fn banach_simplex_search<T: Scalar>(
    space: &LpSpace<T>,
    majorant: &SmoothnessMajorant<T>,
    certify_samples: usize,
    seed: u64,
) -> Result<SimplexSearch<T>> {
    space.smooth_exponent()?;
    if certify_samples == 0 {
        return Err(Error::InvalidParameter("certify_samples must be positive".into()));
    }
    let d = space.dim();
    let mut tried = Vec::new();
    for t in 1..=20 {
        let a = lit::<T>(0.5).powi(t);
        let cov = BallCovering::new(
            *space,
            simplex_centers(d, a),
            T::one(),
            false,
            format!("banach-simplex(d={d}, p={}, a=2^-{t})", space.exponent()),
        )?;
        let report = certify_sampling(&cov, certify_samples, certify_samples, seed)?;
        tried.push((a, report.passed));
        if report.passed {
            let fraction = smoothness_certificate(&cov, majorant, certify_samples, seed)?;
            return Ok(SimplexSearch {
                step: Some(a),
                covering: Some(cov),
                tried,
                smoothness_certified: Some(fraction),
            });
        }
    }
    Ok(SimplexSearch { step: None, covering: None, tried, smoothness_certified: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn simplex_unit_layout() {
        let (c, m) = simplex_cover_unit::<f64>(2).unwrap();
        assert_eq!(c.centers(), &[vec![0.25, 0.0], vec![0.0, 0.25], vec![-0.25, -0.25]]);
        assert!(!c.is_closed());
        assert_eq!(c.radius(), 1.0);
        assert_eq!(m.kind, MarginKind::StrictOpen);

        let (c, _) = simplex_cover_unit::<f64>(1).unwrap();
        assert_eq!(c.centers(), &[vec![0.5], vec![-0.5]]);
        // [−1, 1] ⊂ (−0.5, 1.5) ∪ (−1.5, 0.5)
        assert!(1.0 - 0.5 < 1.0 && -1.0 + 1.5 > 0.0);

        let (c, _) = simplex_cover_unit::<f64>(3).unwrap();
        let dist = c.space().distance(&[0.0, 0.0, 1.0], &c.centers()[2]).unwrap();
        assert_relative_eq!(dist, 5.0 / 6.0, max_relative = 1e-15);
    }

    #[test]
    fn simplex_shrunk_parameters() {
        let (c, m) = simplex_cover_shrunk::<f64>(2).unwrap();
        let a: f64 = 2.0 / 11.0;
        assert_relative_eq!(c.radius(), (1.0 - a * a).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(m.value, a * a, max_relative = 1e-15);
        assert_eq!(c.centers()[2], vec![-a, -a]);
        assert!(c.is_closed());
    }

    #[test]
    fn shrunk_margin_monotone_in_d() {
        let margins: Vec<f64> = (1..=64).map(|d| simplex_cover_shrunk::<f64>(d).unwrap().1.value).collect();
        assert!(margins.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn etf_cover_parameters() {
        let (c, m) = etf_cover::<f64>(3).unwrap();
        assert_eq!(c.len(), 4);
        assert_relative_eq!(c.radius(), (1.0 - 1.0 / 576.0f64).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(m.value, 1.0 / 576.0, max_relative = 1e-15);
        for center in c.centers() {
            assert_relative_eq!(c.space().norm(center).unwrap(), 1.0 / 24.0, max_relative = 1e-14);
        }
        let (c, _) = etf_cover::<f64>(1).unwrap();
        assert_eq!(c.centers(), &[vec![0.125], vec![-0.125]]);
        assert_relative_eq!(c.radius(), (63.0f64 / 64.0).sqrt());
        assert!(matches!(etf_cover::<f64>(4), Err(Error::UnavailableOrder(5))));
    }

    #[test]
    fn dictionary_cover_l2_layout() {
        let space = LpSpace::euclidean(1).unwrap();
        let d = Dictionary::new(space, vec![vec![1.0]]).unwrap();
        let c = dictionary_cover_l2(&d, 0.5).unwrap();
        assert_eq!(c.centers(), &[vec![0.5], vec![-0.5]]);
        assert_relative_eq!(c.radius(), 0.75f64.sqrt());
        // interval oracle: farthest points of [−1, 1] from the nearest center
        for x in [-1.0, 0.0, 1.0] {
            let near = c.centers().iter().map(|cc| (x - cc[0]).abs()).fold(f64::INFINITY, f64::min);
            assert!(near <= c.radius());
        }
        assert!(c.is_symmetric(0.0));
        assert!(dictionary_cover_l2(&d, 0.8).is_err());

        let tiny = dictionary_cover_l2(&d, 1e-8).unwrap();
        assert!((tiny.radius() - 1.0).abs() < 1e-15);

        let l3 = Dictionary::new(LpSpace::new(1, 3.0).unwrap(), vec![vec![1.0]]).unwrap();
        assert!(dictionary_cover_l2(&l3, 0.5).is_err());
    }

    #[test]
    fn dictionary_cover_banach_parameters() {
        let d2 = Dictionary::new(LpSpace::euclidean(2).unwrap(), standard_basis(2)).unwrap();
        let omega = SmoothnessMajorant::power(1.0, 2.0).unwrap();
        let c = dictionary_cover_banach(&d2, 0.5, &omega).unwrap();
        assert_relative_eq!(c.radius(), 1.0 - 1.0 / 128.0, max_relative = 1e-15);
        assert_relative_eq!(c.centers()[0][0], 1.0 / 32.0, max_relative = 1e-15);

        let l4 = LpSpace::new(2, 4.0).unwrap();
        let d4 = Dictionary::new(l4, standard_basis(2)).unwrap();
        let omega = SmoothnessMajorant::for_space(&l4).unwrap();
        let c = dictionary_cover_banach(&d4, 0.5, &omega).unwrap();
        assert_relative_eq!(c.radius(), 1.0 - 1.0 / 256.0, max_relative = 1e-15);
        assert_relative_eq!(c.centers()[0][0], 1.0 / 64.0, max_relative = 1e-15);

        let l15 = LpSpace::new(2, 1.5).unwrap();
        let d15 = Dictionary::new(l15, standard_basis(2)).unwrap();
        let omega = SmoothnessMajorant::for_space(&l15).unwrap();
        let c = dictionary_cover_banach(&d15, 0.25, &omega).unwrap();
        let a = (1.5f64 * 0.25 / 2f64.powf(3.5)).powf(2.0);
        assert_relative_eq!(c.centers()[0][0], a, max_relative = 1e-12);
        assert_relative_eq!(c.radius(), 1.0 - 0.125 * a, max_relative = 1e-15);

        let inf = Dictionary::new(LpSpace::<f64>::infinity(2), standard_basis(2)).unwrap();
        assert!(dictionary_cover_banach(&inf, 0.5, &omega).is_err());
    }

    #[test]
    fn axis_cover_parameters() {
        let (c, m) = axis_cover::<f64>(4).unwrap();
        assert_eq!(c.len(), 8);
        assert_relative_eq!(c.radius(), (61.0f64 / 64.0).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(m.value, 3.0 / 64.0);
        assert!(c.is_symmetric(0.0));

        let (c, _) = axis_cover::<f64>(1).unwrap();
        assert_eq!(c.centers(), &[vec![0.25], vec![-0.25]]);
        assert_relative_eq!(c.radius(), (13.0f64 / 16.0).sqrt(), max_relative = 1e-15);
        assert!(0.75 <= c.radius());
    }

    #[test]
    fn basis_cover_parameters() {
        let l2 = LpSpace::<f64>::euclidean(2).unwrap();
        let c = basis_cover(&l2, 1.0, &SmoothnessMajorant::for_space(&l2).unwrap()).unwrap();
        assert_relative_eq!(c.centers()[0][0], 1.0 / 32.0, max_relative = 1e-15);
        assert_relative_eq!(c.radius(), 1.0 - 1.0 / 128.0, max_relative = 1e-15);

        let l4 = LpSpace::<f64>::new(4, 4.0).unwrap();
        let c = basis_cover(&l4, 1.0, &SmoothnessMajorant::for_space(&l4).unwrap()).unwrap();
        assert_eq!(c.len(), 8);
        assert_relative_eq!(c.centers()[0][0], 1.0 / 128.0, max_relative = 1e-15);
        assert_relative_eq!(c.radius(), 1.0 - 1.0 / 1024.0, max_relative = 1e-15);

        let l3 = LpSpace::<f64>::new(1, 3.0).unwrap();
        let omega = SmoothnessMajorant::for_space(&l3).unwrap();
        let c = basis_cover(&l3, 1.0, &omega).unwrap();
        let a = solve_step_size(&omega, 1.0).unwrap();
        assert_eq!(c.centers(), &[vec![a], vec![-a]]);

        assert!(basis_cover(&l3, 0.5, &omega).is_err());
    }

    #[test]
    fn iteration_counts_and_radius() {
        let (c, _) = axis_cover::<f64>(2).unwrap();
        let same = iterate_cover(&c, 1).unwrap();
        assert_eq!(same.centers(), c.centers());
        assert_eq!(same.radius(), c.radius());

        let it = iterate_cover(&c, 2).unwrap();
        assert_eq!(it.len(), 16);
        assert_eq!(it.radius(), c.radius().powi(2));
        let it3 = iterate_cover(&c, 3).unwrap();
        assert_eq!(it3.len(), 64);
        assert_eq!(it3.radius(), c.radius().powi(3));
        assert!(it3.is_symmetric(1e-15));

        // the composed center for indices (i, j) is c_i + r c_j
        let r = c.radius();
        assert_eq!(it.centers()[1], vec![c.centers()[0][0] + r * c.centers()[1][0], r * c.centers()[1][1]]);

        assert!(iterate_cover(&c, 0).is_err());
        assert!(matches!(iterate_cover(&c, 40), Err(Error::CenterOverflow { .. })));
        let (unit, _) = simplex_cover_unit::<f64>(2).unwrap();
        assert!(iterate_cover(&unit, 2).is_err());
    }

    #[test]
    fn dedup_removes_coincident_centers() {
        let space = LpSpace::<f64>::euclidean(1).unwrap();
        let c = BallCovering::new(space, vec![vec![0.1], vec![0.1], vec![-0.1]], 0.5, true, "t").unwrap();
        assert_eq!(c.dedup(1e-12).len(), 2);
    }

    #[test]
    fn covering_validation() {
        let space = LpSpace::<f64>::euclidean(2).unwrap();
        assert!(BallCovering::new(space, vec![], 0.5, true, "").is_err());
        assert!(BallCovering::new(space, vec![vec![0.0, 0.0]], 0.0, true, "").is_err());
        assert!(BallCovering::new(space, vec![vec![0.0, 0.0]], 1.5, true, "").is_err());
        assert!(BallCovering::new(space, vec![vec![3.0, 0.0]], 0.5, true, "").is_err());
        assert!(BallCovering::new(space, vec![vec![0.0]], 0.5, true, "").is_err());
    }

    #[test]
    fn covering_json_schema() {
        let (c, _) = simplex_cover_shrunk::<f64>(2).unwrap();
        let v: serde_json::Value = serde_json::to_value(&c).unwrap();
        assert_eq!(v["space"]["d"], 2);
        assert_eq!(v["space"]["p"], 2.0);
        assert_eq!(v["closed"], true);
        assert!(v["centers"].as_array().unwrap().len() == 3);
        let back: BallCovering<f64> = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn simplex_search_euclidean_baseline() {
        let l2 = LpSpace::<f64>::euclidean(2).unwrap();
        let omega = SmoothnessMajorant::for_space(&l2).unwrap();
        let s = banach_simplex_search(&l2, &omega, 2000, 3).unwrap();
        assert!(s.step.unwrap() >= 0.25);
    }

    #[test]
    fn simplex_search_l4() {
        let l4 = LpSpace::<f64>::new(2, 4.0).unwrap();
        let omega = SmoothnessMajorant::for_space(&l4).unwrap();
        let s = banach_simplex_search(&l4, &omega, 2000, 5).unwrap();
        assert!(s.step.unwrap() > 0.0);
        let report = certify_sampling(s.covering.as_ref().unwrap(), 2000, 2000, 5).unwrap();
        assert!(report.passed && report.worst_margin > 0.0);
    }
}
