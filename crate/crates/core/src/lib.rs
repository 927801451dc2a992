//! Explicit coverings of the unit ball of finite-dimensional ℓ_p spaces.
//!
//! Constructions live in [`coverings`]; [`verify`] certifies them by
//! sampling and adversarial search against the margins their proofs give.
//! Geometry is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the common choice.

pub mod bounds;
pub mod cli;
pub mod coverings;
pub mod dictionaries;
pub mod error;
pub mod frames;
pub mod hadamard;
mod scalar;
pub mod spaces;
pub mod verify;

pub use coverings::{BallCovering, CoverMargin, MarginKind};
pub use dictionaries::{CoherenceMatrix, Dictionary};
pub use error::{Error, Result};
pub use frames::TightFrame;
pub use hadamard::HadamardMatrix;
pub use scalar::Scalar;
pub use spaces::{DualVector, Exponent, LpSpace, Majorant, SmoothnessMajorant};
pub use verify::{AdversarialResult, CoverageReport};

pub type LpSpace64 = LpSpace<f64>;
pub type LpSpace32 = LpSpace<f32>;
pub type BallCovering64 = BallCovering<f64>;
pub type BallCovering32 = BallCovering<f32>;
pub type Dictionary64 = Dictionary<f64>;
pub type Dictionary32 = Dictionary<f32>;
pub type TightFrame64 = TightFrame<f64>;
pub type TightFrame32 = TightFrame<f32>;
pub type SmoothnessMajorant64 = SmoothnessMajorant<f64>;
