//! ℓ_p geometry on ℝ^d: norms, norming functionals, smoothness majorants and
//! the samplers used by the certification routines.

mod sampling;
mod smoothness;

use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{dot, signum0, Scalar};

pub use sampling::{sample_ball, sample_sphere, sphere_stream, split_seed};
pub use smoothness::{
    smoothness_upper_bound, solve_step_size, solve_step_size_bisection, Majorant,
    SmoothnessMajorant,
};

/// Norm exponent `p ∈ (1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinity,
}

impl<T: Scalar> Exponent<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Exponent::Finite(p) => Some(p),
            Exponent::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }
}

impl<T: Scalar> fmt::Display for Exponent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl<T: Scalar> Serialize for Exponent<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => p.serialize(serializer),
            Exponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Exponent<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(p) => Ok(Exponent::Finite(T::lit(p))),
            Raw::Text(s) if matches!(s.as_str(), "inf" | "infinity" | "Infinity") => {
                Ok(Exponent::Infinity)
            }
            Raw::Text(s) => Err(de::Error::custom(format!("invalid exponent {s:?}"))),
        }
    }
}

/// ℝ^d equipped with the ℓ_p norm, `d ≥ 1`, `p ∈ (1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LpSpace<T> {
    d: usize,
    p: Exponent<T>,
}

impl<T: Scalar> LpSpace<T> {
    pub fn new(d: usize, p: T) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if p.is_infinite() {
            return Ok(Self::infinity(d));
        }
        if !(p > T::one()) {
            return Err(Error::UnsupportedExponent(p.to_string()));
        }
        Ok(Self { d, p: Exponent::Finite(p) })
    }

    /// Euclidean space ℓ₂^d.
    pub fn euclidean(d: usize) -> Result<Self> {
        Self::new(d, T::lit(2.0))
    }

    pub fn infinity(d: usize) -> Self {
        assert!(d >= 1, "dimension must be at least 1");
        Self { d, p: Exponent::Infinity }
    }

    pub fn from_exponent(d: usize, p: Exponent<T>) -> Result<Self> {
        match p {
            Exponent::Finite(p) => Self::new(d, p),
            Exponent::Infinity if d >= 1 => Ok(Self::infinity(d)),
            Exponent::Infinity => Err(Error::InvalidParameter("dimension must be at least 1".into())),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn exponent(&self) -> Exponent<T> {
        self.p
    }

    pub fn is_euclidean(&self) -> bool {
        self.p == Exponent::Finite(T::lit(2.0))
    }

    /// Finite `p`, or an error for ℓ∞ where the smooth machinery does not apply.
    pub fn smooth_exponent(&self) -> Result<T> {
        self.p
            .finite()
            .ok_or_else(|| Error::UnsupportedExponent("inf (ℓ∞ is not smooth)".into()))
    }

    /// Conjugate exponent `q` with `1/p + 1/q = 1`; `q = 1` for `p = ∞`.
    pub fn dual_exponent(&self) -> T {
        match self.p {
            Exponent::Finite(p) => p / (p - T::one()),
            Exponent::Infinity => T::one(),
        }
    }

    /// The dual space ℓ_q^d, defined for finite `p`.
    pub fn dual_space(&self) -> Result<Self> {
        self.smooth_exponent()?;
        Self::new(self.d, self.dual_exponent())
    }

    pub(crate) fn check_dim(&self, x: &[T]) -> Result<()> {
        if x.len() == self.d {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.d, found: x.len() })
        }
    }

    pub fn norm(&self, x: &[T]) -> Result<T> {
        self.check_dim(x)?;
        Ok(self.norm_of(x))
    }

    /// Norm without the dimension check, for hot loops over validated data.
    pub(crate) fn norm_of(&self, x: &[T]) -> T {
        lp_norm(x, self.p)
    }

    pub fn distance(&self, x: &[T], y: &[T]) -> Result<T> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.distance_of(x, y))
    }

    pub(crate) fn distance_of(&self, x: &[T], y: &[T]) -> T {
        match self.p {
            Exponent::Infinity => x
                .iter()
                .zip(y)
                .map(|(&a, &b)| (a - b).abs())
                .fold(T::zero(), T::max),
            Exponent::Finite(p) if p == T::lit(2.0) => x
                .iter()
                .zip(y)
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum::<T>()
                .sqrt(),
            Exponent::Finite(_) => {
                let diff: Vec<T> = x.iter().zip(y).map(|(&a, &b)| a - b).collect();
                self.norm_of(&diff)
            }
        }
    }

    /// The unique norming functional `F_x`: `‖F_x‖_q = 1` and `F_x(x) = ‖x‖_p`.
    pub fn norming_functional(&self, x: &[T]) -> Result<DualVector<T>> {
        self.check_dim(x)?;
        let p = self.smooth_exponent()?;
        let norm = self.norm_of(x);
        if norm == T::zero() {
            return Err(Error::ZeroVector);
        }
        let coords = norming_coords(x, p, norm);
        Ok(DualVector { coords, space: *self })
    }

    pub(crate) fn normalize(&self, x: &mut [T]) {
        let n = self.norm_of(x);
        if n > T::zero() {
            x.iter_mut().for_each(|v| *v = *v / n);
        }
    }
}

/// `sign(x_i) (|x_i| / ‖x‖)^{p-1}`, evaluated as a ratio to stay finite.
pub(crate) fn norming_coords<T: Scalar>(x: &[T], p: T, norm: T) -> Vec<T> {
    let pm1 = p - T::one();
    if pm1 == T::one() {
        return x.iter().map(|&v| v / norm).collect();
    }
    x.iter()
        .map(|&v| signum0(v) * (v.abs() / norm).powf(pm1))
        .collect()
}

pub(crate) fn lp_norm<T: Scalar>(x: &[T], p: Exponent<T>) -> T {
    let max = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    match p {
        Exponent::Infinity => max,
        _ if max == T::zero() => T::zero(),
        Exponent::Finite(p) if p == T::lit(2.0) => {
            x.iter().map(|&v| (v / max) * (v / max)).sum::<T>().sqrt() * max
        }
        Exponent::Finite(p) => {
            x.iter().map(|&v| (v.abs() / max).powf(p)).sum::<T>().powf(p.recip()) * max
        }
    }
}

/// An element of the dual space X* = ℓ_q^d acting by the standard pairing.
#[derive(Clone, Debug, PartialEq)]
pub struct DualVector<T> {
    coords: Vec<T>,
    space: LpSpace<T>,
}

impl<T: Scalar> DualVector<T> {
    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn source_space(&self) -> &LpSpace<T> {
        &self.space
    }

    /// Evaluates `F(y) = ⟨F, y⟩`.
    pub fn apply(&self, y: &[T]) -> Result<T> {
        self.space.check_dim(y)?;
        Ok(dot(&self.coords, y))
    }

    /// Norm in X*, i.e. the ℓ_q norm of the coordinates.
    pub fn dual_norm(&self) -> T {
        let q = match self.space.exponent() {
            Exponent::Finite(_) => Exponent::Finite(self.space.dual_exponent()),
            Exponent::Infinity => Exponent::Finite(T::one()),
        };
        lp_norm(&self.coords, q)
    }
}
