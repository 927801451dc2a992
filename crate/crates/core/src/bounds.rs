//! Covering-number and dictionary-size bounds, evaluated in log space.
//!
//! Absolute constants are inputs. Their defaults of 1 carry no guarantee and
//! every report marks them as uncalibrated.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::coverings::{axis_cover, basis_cover};
use crate::error::{Error, Result};
use crate::spaces::{solve_step_size, Exponent, LpSpace, Majorant, SmoothnessMajorant};

/// Unspecified absolute constants of the dictionary-size and iteration bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    /// Euclidean dictionary size exponent.
    pub c1: f64,
    /// Banach dictionary size exponent and linear branch.
    pub c2: f64,
    /// Exponent of the iterated-covering count `exp(C d δ ln(2d))`.
    pub c_generic: f64,
    pub calibrated: bool,
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self { c1: 1.0, c2: 1.0, c_generic: 1.0, calibrated: false }
    }
}

impl BoundConstants {
    pub fn new(c1: f64, c2: f64, c_generic: f64) -> Result<Self> {
        for (name, c) in [("C1", c1), ("C2", c2), ("C", c_generic)] {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {c}")));
            }
        }
        Ok(Self { c1, c2, c_generic, calibrated: true })
    }
}

fn check_dim(d: usize) -> Result<f64> {
    if d == 0 {
        Err(Error::InvalidParameter("dimension must be at least 1".into()))
    } else {
        Ok(d as f64)
    }
}

/// Largest count printed as a raw number rather than only as a logarithm.
pub const RAW_COUNT_LIMIT: f64 = 1e15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VolumetricBounds {
    pub log_lower: f64,
    pub log_upper: f64,
}

impl VolumetricBounds {
    pub fn lower(&self) -> f64 {
        self.log_lower.exp()
    }

    pub fn upper(&self) -> f64 {
        self.log_upper.exp()
    }

    /// Raw counts, present when both are below [`RAW_COUNT_LIMIT`].
    pub fn counts(&self) -> Option<(f64, f64)> {
        (self.upper() < RAW_COUNT_LIMIT).then(|| (self.lower(), self.upper()))
    }
}

/// `ε^{−d} ≤ N_ε(B_X) ≤ (1 + 2/ε)^d` for every d-dimensional normed space.
pub fn volumetric_bounds(d: usize, eps: f64) -> Result<VolumetricBounds> {
    let dd = check_dim(d)?;
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1], got {eps}")));
    }
    Ok(VolumetricBounds { log_lower: -dd * eps.ln(), log_upper: dd * (2.0 / eps).ln_1p() })
}

/// A log-space bound together with a note when its argument lies below the
/// stated range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogBound {
    pub log_value: f64,
    pub below_stated_range: bool,
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu <= 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("mu must lie in (0, 1/2], got {mu}")))
    }
}

fn exponent_term(d: f64, mu: f64) -> f64 {
    d * mu * mu * (2.0 / mu).ln()
}

/// `ln N(d, μ) ≤ C₁ d μ² ln(2/μ)`, stated for `μ ∈ [(2d)^{−1/2}, 1/2]`.
pub fn ndmu_upper(d: usize, mu: f64, constants: &BoundConstants) -> Result<LogBound> {
    let dd = check_dim(d)?;
    check_mu(mu)?;
    Ok(LogBound {
        log_value: constants.c1 * exponent_term(dd, mu),
        below_stated_range: mu < (2.0 * dd).sqrt().recip(),
    })
}

/// `ln max(C₂ d, exp(C₂ d μ² ln(2/μ)))`.
pub fn ndmux_upper(d: usize, mu: f64, constants: &BoundConstants) -> Result<f64> {
    let dd = check_dim(d)?;
    check_mu(mu)?;
    Ok((constants.c2 * dd).ln().max(constants.c2 * exponent_term(dd, mu)))
}

/// `μ` with `μ a(ω, μ)/2 = δ`, by geometric bisection on `μ ∈ [1e−15, 1]`.
pub fn mu_for_delta<M: Majorant<f64>>(majorant: &M, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    let gap = |mu: f64| solve_step_size(majorant, mu).map(|a| mu * a / 2.0 - delta);
    let (mut lo, mut hi) = (1e-15, 1.0);
    if gap(hi)? < 0.0 {
        return Err(Error::InvalidParameter(format!("delta = {delta} exceeds the largest attainable shrinkage")));
    }
    if gap(lo)? > 0.0 {
        return Err(Error::Numerical(format!("delta = {delta} is below the solvable range")));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Polynomial,
    Exponential,
    /// The matching `μ` exceeds 1/2, outside the dictionary bounds' range.
    OutOfRange,
    /// No smoothness majorant exists (`p = ∞`).
    Nonsmooth,
}

/// One line of [`covering_bound_table`]; `NaN` marks a value that does not apply.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub delta: f64,
    pub mu: f64,
    pub log_lower: f64,
    pub log_volumetric_upper: f64,
    pub log_regime_upper: f64,
    pub log_iterated: f64,
    pub regime_flag: Regime,
}

/// Base covering used for iteration: the axis cover in ℓ₂, the basis cover
/// with `K = 1` in other smooth ℓ_p. Returns `(centers, radius)`.
fn iteration_base(space: &LpSpace<f64>, majorant: &SmoothnessMajorant<f64>) -> Result<(usize, f64)> {
    if space.is_euclidean() {
        let (cov, _) = axis_cover::<f64>(space.dim())?;
        Ok((cov.len(), cov.radius()))
    } else {
        let cov = basis_cover(space, 1.0, majorant)?;
        Ok((cov.len(), cov.radius()))
    }
}

fn polynomial_threshold(d: f64, p: f64) -> f64 {
    if p >= 2.0 {
        (p * d).recip()
    } else {
        let p_conj = p / (p - 1.0);
        d.powf(-p_conj / 2.0)
    }
}

/// Per `δ`: volumetric bounds at `ε = 1 − δ`, the dictionary bound
/// `ln 2 + ln max(C₂d, exp(C₂dμ²ln(2/μ)))` at the `μ` solving
/// `δ = μ a(ω, μ)/2`, and `ln` of the center count `N₀^m` of the
/// smallest iteration of the axis or basis cover reaching radius `1 − δ`.
pub fn covering_bound_table(
    space: &LpSpace<f64>,
    delta_grid: &[f64],
    constants: &BoundConstants,
) -> Result<Vec<BoundRow>> {
    if delta_grid.is_empty() {
        return Err(Error::InvalidParameter("delta grid is empty".into()));
    }
    if let Some(bad) = delta_grid.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {bad}")));
    }
    let d = space.dim();
    let dd = d as f64;
    let smooth = match space.exponent() {
        Exponent::Finite(p) => {
            let majorant = SmoothnessMajorant::for_space(space)?;
            Some((p, majorant, iteration_base(space, &majorant)?))
        }
        Exponent::Infinity => None,
    };
    delta_grid
        .iter()
        .map(|&delta| {
            let vol = volumetric_bounds(d, 1.0 - delta)?;
            let mut row = BoundRow {
                delta,
                mu: f64::NAN,
                log_lower: vol.log_lower,
                log_volumetric_upper: vol.log_upper,
                log_regime_upper: f64::NAN,
                log_iterated: f64::NAN,
                regime_flag: Regime::Nonsmooth,
            };
            let Some((p, majorant, (n0, r0))) = smooth else {
                return Ok(row);
            };
            let m = ((1.0 - delta).ln() / r0.ln()).ceil().max(1.0);
            row.log_iterated = m * (n0 as f64).ln();
            let mu = match mu_for_delta(&majorant, delta) {
                Ok(mu) => mu,
                Err(Error::InvalidParameter(_)) => {
                    row.regime_flag = Regime::OutOfRange;
                    return Ok(row);
                }
                Err(e) => return Err(e),
            };
            row.mu = mu;
            if mu > 0.5 {
                row.regime_flag = Regime::OutOfRange;
                return Ok(row);
            }
            row.log_regime_upper = std::f64::consts::LN_2 + ndmux_upper(d, mu, constants)?;
            row.regime_flag = if delta <= polynomial_threshold(dd, p) {
                Regime::Polynomial
            } else {
                Regime::Exponential
            };
            Ok(row)
        })
        .collect()
}

/// `ln` of iterated counts `exp(C d δ ln(2d))`.
pub fn iterated_count_bound(d: usize, delta: f64, constants: &BoundConstants) -> Result<f64> {
    let dd = check_dim(d)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(constants.c_generic * dd * delta * (2.0 * dd).ln())
}

/// Parses `a:b:n` into `n` evenly spaced values from `a` to `b` inclusive.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("grid must look like a:b:n, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    match n {
        0 => Err(bad()),
        1 => Ok(vec![a]),
        _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
    }
}

pub fn write_csv<W: Write>(rows: &[BoundRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}

/// Fit of `C₁` from observed dictionary sizes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct C1Calibration {
    /// `ln|D| / (d μ² ln(2/μ))` for each observation.
    pub ratios: Vec<f64>,
    /// Largest ratio: the smallest `C₁` consistent with every observation.
    pub c1: f64,
}

/// Calibrates `C₁` from `(d, μ, |D|)` observations. Reported only; never fed
/// back into the bounds.
pub fn calibrate_c1(observations: &[(usize, f64, usize)]) -> Result<C1Calibration> {
    if observations.is_empty() {
        return Err(Error::InvalidParameter("no observations".into()));
    }
    let ratios = observations
        .iter()
        .map(|&(d, mu, size)| {
            let dd = check_dim(d)?;
            if !(mu > 0.0 && mu < 1.0) || size == 0 {
                return Err(Error::InvalidParameter(format!("bad observation ({d}, {mu}, {size})")));
            }
            Ok((size as f64).ln() / exponent_term(dd, mu))
        })
        .collect::<Result<Vec<f64>>>()?;
    let c1 = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(C1Calibration { ratios, c1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn volumetric_examples() {
        let v = volumetric_bounds(1, 1.0).unwrap();
        assert_relative_eq!(v.lower(), 1.0);
        assert_relative_eq!(v.upper(), 3.0, max_relative = 1e-15);
        let v = volumetric_bounds(2, 0.5).unwrap();
        assert_relative_eq!(v.lower(), 4.0, max_relative = 1e-15);
        assert_relative_eq!(v.upper(), 25.0, max_relative = 1e-15);
        assert_eq!(volumetric_bounds(37, 1.0).unwrap().log_lower, 0.0);
        assert!(volumetric_bounds(3, 0.0).is_err());
        assert!(volumetric_bounds(3, 1.5).is_err());
        assert!(volumetric_bounds(0, 0.5).is_err());
        assert!(volumetric_bounds(1000, 1e-3).unwrap().counts().is_none());
    }

    #[test]
    fn volumetric_grid_ordered() {
        for d in 1..=50 {
            for i in 1..=50 {
                let v = volumetric_bounds(d, i as f64 / 50.0).unwrap();
                assert!(v.log_lower <= v.log_upper);
            }
        }
    }

    #[test]
    fn dictionary_bound_examples() {
        let c = BoundConstants::default();
        assert!(!c.calibrated);
        assert_relative_eq!(ndmu_upper(8, 0.5, &c).unwrap().log_value, 2.0 * 4f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(ndmu_upper(100, 0.1, &c).unwrap().log_value, 20f64.ln(), max_relative = 1e-14);
        let tiny = ndmu_upper(10, 1e-8, &c).unwrap();
        assert!(tiny.below_stated_range && tiny.log_value < 1e-12);
        assert!(!ndmu_upper(8, 0.5, &c).unwrap().below_stated_range);
        assert!(ndmu_upper(8, 0.6, &c).is_err());

        // μ = d^{−1/2}: the linear branch wins once d ≥ 4
        for d in [4, 16, 100, 10_000] {
            let mu = (d as f64).sqrt().recip();
            assert_relative_eq!(ndmux_upper(d, mu, &c).unwrap(), (d as f64).ln(), max_relative = 1e-15);
        }
        let big = ndmux_upper(1000, 0.5, &c).unwrap();
        assert_relative_eq!(big, 1000.0 * 0.25 * 4f64.ln(), max_relative = 1e-15);
        let mu = 0.3f64;
        assert_relative_eq!(ndmux_upper(1, mu, &c).unwrap(), 0f64.max(mu * mu * (2.0 / mu).ln()));
    }

    #[test]
    fn mu_delta_round_trip() {
        let l2 = LpSpace::<f64>::euclidean(8).unwrap();
        let omega = SmoothnessMajorant::for_space(&l2).unwrap();
        assert_relative_eq!(mu_for_delta(&omega, 1.0 / 128.0).unwrap(), 0.5, max_relative = 1e-12);
        for p in [2.0, 3.0, 4.0, 8.0] {
            let s = LpSpace::<f64>::new(4, p).unwrap();
            let omega = SmoothnessMajorant::for_space(&s).unwrap();
            for delta in [1e-6, 1e-4, 1e-3] {
                let mu = mu_for_delta(&omega, delta).unwrap();
                assert_relative_eq!(mu, 4.0 * (p * delta).sqrt(), max_relative = 1e-12);
            }
        }
        let s = LpSpace::<f64>::new(4, 1.5).unwrap();
        let omega = SmoothnessMajorant::for_space(&s).unwrap();
        let mu = mu_for_delta(&omega, 1e-4).unwrap();
        let a = (1.5 * mu / 2f64.powf(3.5)).powf(2.0);
        assert_relative_eq!(mu * a / 2.0, 1e-4, max_relative = 1e-12);
    }

    #[test]
    fn table_rows() {
        let c = BoundConstants::default();
        let l2 = LpSpace::<f64>::euclidean(2).unwrap();
        let rows = covering_bound_table(&l2, &[1.0 / 128.0, 0.5], &c).unwrap();
        assert_relative_eq!(rows[0].mu, 0.5, max_relative = 1e-12);
        let expect = std::f64::consts::LN_2 + ndmux_upper(2, rows[0].mu, &c).unwrap();
        assert_relative_eq!(rows[0].log_regime_upper, expect, max_relative = 1e-12);
        assert_eq!(rows[1].regime_flag, Regime::OutOfRange);
        assert!(rows[1].log_regime_upper.is_nan());
        assert_relative_eq!(rows[1].log_lower, 2.0 * 2f64.ln(), max_relative = 1e-15);
        assert!(rows.iter().all(|r| r.log_lower <= r.log_volumetric_upper));

        // δ = 1/(pd) is polynomial; μ = 4√(pδ) stays ≤ 1/2 only for δ ≤ 1/(64p)
        let l4 = LpSpace::<f64>::new(128, 4.0).unwrap();
        let rows = covering_bound_table(&l4, &[1.0 / 512.0, 1.0 / 300.0, 0.01], &c).unwrap();
        assert_eq!(rows[0].regime_flag, Regime::Polynomial);
        assert_relative_eq!(rows[0].mu, 8f64.sqrt().recip(), max_relative = 1e-12);
        assert_eq!(rows[1].regime_flag, Regime::Exponential);
        assert_eq!(rows[2].regime_flag, Regime::OutOfRange);

        let inf = LpSpace::<f64>::infinity(3);
        let rows = covering_bound_table(&inf, &[0.1], &c).unwrap();
        assert_eq!(rows[0].regime_flag, Regime::Nonsmooth);
        assert!(covering_bound_table(&l2, &[], &c).is_err());
        assert!(covering_bound_table(&l2, &[1.0], &c).is_err());
    }

    #[test]
    fn iteration_column() {
        let c = BoundConstants::default();
        let l2 = LpSpace::<f64>::euclidean(4).unwrap();
        let (cov, _) = axis_cover::<f64>(4).unwrap();
        let r = cov.radius();
        let rows = covering_bound_table(&l2, &[1.0 - r, 1.0 - r * r * 0.9999999], &c).unwrap();
        assert_relative_eq!(rows[0].log_iterated, 8f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(rows[1].log_iterated, 3.0 * 8f64.ln(), max_relative = 1e-15);
    }

    #[test]
    fn table_is_reproducible() {
        let c = BoundConstants::default();
        let l3 = LpSpace::<f64>::new(10, 3.0).unwrap();
        let grid = parse_grid("0.001:0.1:25").unwrap();
        let a = covering_bound_table(&l3, &grid, &c).unwrap();
        let b = covering_bound_table(&l3, &grid, &c).unwrap();
        let bits = |rows: &[BoundRow]| -> Vec<u64> {
            rows.iter().flat_map(|r| [r.mu.to_bits(), r.log_regime_upper.to_bits(), r.log_iterated.to_bits()]).collect()
        };
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn grid_parsing_and_csv() {
        assert_eq!(parse_grid("0.1:0.3:3").unwrap().len(), 3);
        assert_eq!(parse_grid("0.2:0.9:1").unwrap(), vec![0.2]);
        assert!(parse_grid("0.1:0.3").is_err());
        assert!(parse_grid("0.1:0.3:0").is_err());
        assert!(parse_grid("x:0.3:2").is_err());

        let l2 = LpSpace::<f64>::euclidean(3).unwrap();
        let rows = covering_bound_table(&l2, &[0.01, 0.02], &BoundConstants::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "delta,mu,log_lower,log_volumetric_upper,log_regime_upper,log_iterated,regime_flag"
        );
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn calibration() {
        let fit = calibrate_c1(&[(8, 0.5, 16), (8, 0.4, 20)]).unwrap();
        assert_relative_eq!(fit.ratios[0], 16f64.ln() / (2.0 * 4f64.ln()), max_relative = 1e-15);
        assert_eq!(fit.c1, fit.ratios.iter().copied().fold(0.0, f64::max));
        assert!(calibrate_c1(&[]).is_err());
        assert!(BoundConstants::new(1.0, -1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn bounds_monotone(d in 1usize..200, mu in 1e-4f64..0.49) {
            let c = BoundConstants::default();
            let step = 1e-3;
            prop_assert!(ndmu_upper(d + 1, mu, &c).unwrap().log_value >= ndmu_upper(d, mu, &c).unwrap().log_value);
            prop_assert!(ndmu_upper(d, mu + step, &c).unwrap().log_value >= ndmu_upper(d, mu, &c).unwrap().log_value);
            prop_assert!(ndmux_upper(d + 1, mu, &c).unwrap() >= ndmux_upper(d, mu, &c).unwrap());
            prop_assert!(ndmux_upper(d, mu + step, &c).unwrap() >= ndmux_upper(d, mu, &c).unwrap());
        }
    }
}
