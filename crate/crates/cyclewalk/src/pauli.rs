//! Pauli-basis vectorization of coin-space blocks.
//!
//! A 2x2 complex block B expands uniquely as
//! B = a1*sigma_0 + a2*sigma_x + a3*sigma_y + a4*sigma_z.
//! The coefficient vector (a1, a2, a3, a4) turns channel action on blocks
//! into 4x4 matrix-vector products, which is what makes the momentum-space
//! backend cheap. Coefficients are complex in general and real exactly when
//! the block is Hermitian.

use nalgebra::{Matrix2, Vector4};
use num_complex::Complex64;

/// A 2x2 complex matrix acting on the coin space.
pub type CoinBlock = Matrix2<Complex64>;

/// Coefficients of a coin block over (sigma_0, sigma_x, sigma_y, sigma_z).
pub type BlochVec = Vector4<Complex64>;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The identity sigma_0.
pub fn sigma0() -> CoinBlock {
    CoinBlock::identity()
}

pub fn sigma_x() -> CoinBlock {
    CoinBlock::new(cr(0.0), cr(1.0), cr(1.0), cr(0.0))
}

pub fn sigma_y() -> CoinBlock {
    CoinBlock::new(cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0))
}

pub fn sigma_z() -> CoinBlock {
    CoinBlock::new(cr(1.0), cr(0.0), cr(0.0), cr(-1.0))
}

/// Expands a block over the Pauli basis.
///
/// The coefficients follow from the entrywise relations
/// B11 = a1 + a4, B22 = a1 - a4, B12 = a2 - i*a3, B21 = a2 + i*a3.
pub fn to_pauli(b: &CoinBlock) -> BlochVec {
    let half = cr(0.5);
    let i = Complex64::i();
    BlochVec::new(
        (b[(0, 0)] + b[(1, 1)]) * half,
        (b[(0, 1)] + b[(1, 0)]) * half,
        (b[(0, 1)] - b[(1, 0)]) * half * i,
        (b[(0, 0)] - b[(1, 1)]) * half,
    )
}

/// Reassembles a block from its Pauli coefficients. Inverse of [`to_pauli`].
pub fn from_pauli(v: &BlochVec) -> CoinBlock {
    let i = Complex64::i();
    CoinBlock::new(
        v[0] + v[3],
        v[1] - i * v[2],
        v[1] + i * v[2],
        v[0] - v[3],
    )
}
