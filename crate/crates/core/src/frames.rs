//! Absolutely equiangular tight frames built from Hadamard matrices.

use crate::dictionaries::Dictionary;
use crate::error::{Error, Result};
use crate::hadamard::HadamardMatrix;
use crate::scalar::{dot, euclidean, Scalar};
use crate::spaces::LpSpace;

/// `d + 1` unit vectors in ℓ₂^d with pairwise inner products `−1/d`.
///
/// Vectors are the columns `φ¹, …, φ^{d+1}` of the frame matrix Φ.
#[derive(Clone, Debug, PartialEq)]
pub struct TightFrame<T> {
    dim: usize,
    vectors: Vec<Vec<T>>,
}

/// Residuals of the reconstruction, vanishing-sum and energy identities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameResiduals<T> {
    /// `‖x − d/(d+1) Σ⟨x,φ^i⟩φ^i‖₂`
    pub reconstruction: T,
    /// `‖Σ φ^i‖₂`
    pub sum: T,
    /// `|‖x‖₂² − d/(d+1) Σ⟨x,φ^i⟩²|`
    pub energy: T,
}

impl<T: Scalar> FrameResiduals<T> {
    pub fn max(&self) -> T {
        self.reconstruction.max(self.sum).max(self.energy)
    }
}

impl<T: Scalar> TightFrame<T> {
    /// Wraps `dim + 1` vectors of length `dim`; the frame identities are not
    /// assumed and can be checked with [`verify_frame_identities`].
    pub fn from_vectors(vectors: Vec<Vec<T>>) -> Result<Self> {
        let dim = vectors.len().saturating_sub(1);
        if dim == 0 {
            return Err(Error::InvalidParameter("a frame needs at least two vectors".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<T>] {
        &self.vectors
    }

    /// Gram matrix `⟨φ^i, φ^j⟩`, row-major.
    pub fn gram(&self) -> Vec<Vec<T>> {
        self.vectors
            .iter()
            .map(|a| self.vectors.iter().map(|b| dot(a, b)).collect())
            .collect()
    }

    /// Largest entrywise deviation from `(1 + 1/d) I − (1/d) J`.
    pub fn gram_deviation(&self) -> T {
        let off = -T::one() / T::from_usize(self.dim).unwrap();
        let mut worst = T::zero();
        for (i, row) in self.gram().iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                let target = if i == j { T::one() } else { off };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    pub fn to_dictionary(&self) -> Result<Dictionary<T>> {
        Dictionary::new(LpSpace::euclidean(self.dim)?, self.vectors.clone())
    }
}

/// Columns of `H` with the first row deleted, divided by `√(m−1)`.
///
/// `H` must have an all-ones first row (see
/// [`normalize_first_row`](crate::hadamard::normalize_first_row)) and order
/// at least 2.
pub fn etf_from_hadamard<T: Scalar>(h: &HadamardMatrix) -> Result<TightFrame<T>> {
    let m = h.order();
    if m < 2 {
        return Err(Error::InvalidParameter("Hadamard order must be at least 2".into()));
    }
    if !h.first_row_is_ones() {
        return Err(Error::InvalidParameter("first row of the Hadamard matrix must be all ones".into()));
    }
    let n = m - 1;
    let scale = T::from_usize(n).unwrap().sqrt().recip();
    let vectors = (0..m)
        .map(|col| (1..m).map(|row| T::from_i8(h.get(row, col)).unwrap() * scale).collect())
        .collect();
    Ok(TightFrame { dim: n, vectors })
}

/// ETF in dimension `d`, available when `d + 1` is a power of two.
pub fn etf_of_dimension<T: Scalar>(d: usize) -> Result<TightFrame<T>> {
    etf_from_hadamard(&HadamardMatrix::of_order(d + 1)?)
}

pub fn verify_frame_identities<T: Scalar>(frame: &TightFrame<T>, x: &[T]) -> Result<FrameResiduals<T>> {
    let d = frame.dim;
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: x.len() });
    }
    let factor = T::from_usize(d).unwrap() / T::from_usize(d + 1).unwrap();
    let coeffs: Vec<T> = frame.vectors.iter().map(|phi| dot(x, phi)).collect();

    let mut recon = vec![T::zero(); d];
    let mut total = vec![T::zero(); d];
    for (phi, &c) in frame.vectors.iter().zip(&coeffs) {
        for i in 0..d {
            recon[i] = recon[i] + factor * c * phi[i];
            total[i] = total[i] + phi[i];
        }
    }
    let diff: Vec<T> = x.iter().zip(&recon).map(|(&a, &b)| a - b).collect();
    let energy = dot(x, x) - factor * coeffs.iter().map(|&c| c * c).sum::<T>();
    Ok(FrameResiduals { reconstruction: euclidean(&diff), sum: euclidean(&total), energy: energy.abs() })
}
