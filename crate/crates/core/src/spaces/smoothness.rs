use serde::{Deserialize, Serialize};

use super::LpSpace;
use crate::error::{Error, Result};
use crate::scalar::{dot, Scalar};

/// A continuous majorant `ω` of the modulus of smoothness, with `ω(u)/u`
/// decreasing to zero as `u → 0`.
pub trait Majorant<T: Scalar> {
    fn eval(&self, u: T) -> T;

    /// Exact root of `aμ = 4ω(2a)` when one is known, before capping at 1.
    fn closed_form_root(&self, _mu: T) -> Option<T> {
        None
    }
}

/// Power-type majorant `ω(u) = γ u^q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SmoothnessMajorant<T> {
    gamma: T,
    power: T,
}

impl<T: Scalar> SmoothnessMajorant<T> {
    /// `γ > 0`, `q > 1`. Majorants of a modulus of smoothness always have
    /// `q ≤ 2`; larger powers are accepted for the root solver only.
    pub fn power(gamma: T, q: T) -> Result<Self> {
        if !(gamma > T::zero()) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
        }
        if !(q > T::one()) || !q.is_finite() {
            return Err(Error::InvalidParameter(format!("power must exceed 1, got {q}")));
        }
        Ok(Self { gamma, power: q })
    }

    /// Standard ℓ_p majorant: `u^p/p` for `p < 2`, `(p/2) u²` for `p ≥ 2`
    /// (so `u²` in ℓ₂).
    pub fn for_space(space: &LpSpace<T>) -> Result<Self> {
        let p = space.smooth_exponent()?;
        let two = T::lit(2.0);
        if p < two {
            Self::power(p.recip(), p)
        } else {
            Self::power(p / two, two)
        }
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn q(&self) -> T {
        self.power
    }
}

impl<T: Scalar> Majorant<T> for SmoothnessMajorant<T> {
    fn eval(&self, u: T) -> T {
        self.gamma * u.powf(self.power)
    }

    fn closed_form_root(&self, mu: T) -> Option<T> {
        let denom = self.gamma * T::lit(2.0).powf(self.power + T::lit(2.0));
        Some((mu / denom).powf((self.power - T::one()).recip()))
    }
}

/// Upper side of the smoothness sandwich
/// `‖x‖ + u F_x(y) ≤ ‖x + uy‖ ≤ ‖x‖ + u F_x(y) + 2‖x‖ ω(u‖y‖/‖x‖)`.
pub fn smoothness_upper_bound<T: Scalar, M: Majorant<T>>(
    space: &LpSpace<T>,
    majorant: &M,
    x: &[T],
    y: &[T],
    u: T,
) -> Result<T> {
    space.check_dim(y)?;
    let fx = space.norming_functional(x)?;
    let nx = space.norm_of(x);
    let ny = space.norm_of(y);
    let two = T::lit(2.0);
    Ok(nx + u * dot(fx.coords(), y) + two * nx * majorant.eval(u * ny / nx))
}

fn check_mu<T: Scalar>(mu: T) -> Result<()> {
    if mu > T::zero() && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")))
    }
}

/// Root `a(ω, μ)` of `aμ = 4ω(2a)`, capped at 1 when the root exceeds 1.
///
/// Uses the closed form when the majorant provides one and falls back to
/// bisection otherwise.
pub fn solve_step_size<T: Scalar, M: Majorant<T>>(majorant: &M, mu: T) -> Result<T> {
    check_mu(mu)?;
    match majorant.closed_form_root(mu) {
        Some(a) if a.is_finite() && a > T::zero() => Ok(a.min(T::one())),
        _ => solve_step_size_bisection(majorant, mu),
    }
}

/// Bisection on `[1e-15, 1]` for `4ω(2a) − aμ = 0`.
///
/// Midpoints are geometric so the bracket shrinks in relative terms, which
/// keeps tiny roots accurate to full relative precision.
pub fn solve_step_size_bisection<T: Scalar, M: Majorant<T>>(majorant: &M, mu: T) -> Result<T> {
    check_mu(mu)?;
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let f = |a: T| four * majorant.eval(two * a) - a * mu;

    let mut lo = T::lit(1e-15);
    let mut hi = T::one();
    if f(hi) <= T::zero() {
        return Ok(T::one());
    }
    if f(lo) > T::zero() {
        return Err(Error::Numerical(format!(
            "step-size root for mu = {mu} lies below the bracket [1e-15, 1]"
        )));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo * hi).sqrt())
}
