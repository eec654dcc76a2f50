//! The rotation coin, its momentum-space dual, and the measurement channel.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{cr, CoinBlock};

/// Rotation coin U_c(beta) = [[cos b, sin b], [sin b, -cos b]].
///
/// Unitary and Hermitian for every angle; beta = pi/4 is the Hadamard coin.
pub fn coin_operator(coin_angle: f64) -> Result<CoinBlock> {
    if !(coin_angle > 0.0 && coin_angle < FRAC_PI_2) {
        return Err(Error::CoinAngleOutOfRange(coin_angle));
    }
    let (s, c) = coin_angle.sin_cos();
    Ok(CoinBlock::new(cr(c), cr(s), cr(s), cr(-c)))
}

/// Momentum-space dual of the coin at wavenumber k:
/// diag(e^{-2 pi i k / N}, e^{+2 pi i k / N}) * U_c(beta).
///
/// The phases carry the conditional shift: coin state 1 moves the walker
/// +1 around the cycle, coin state 2 moves it -1.
pub fn coin_operator_fourier(coin_angle: f64, k: usize, n_sites: usize) -> Result<CoinBlock> {
    if n_sites < 2 {
        return Err(Error::CycleTooShort(n_sites));
    }
    if k >= n_sites {
        return Err(Error::MomentumOutOfRange { index: k, n_sites });
    }
    let uc = coin_operator(coin_angle)?;
    let phase = 2.0 * PI * k as f64 / n_sites as f64;
    let down = Complex64::from_polar(1.0, -phase);
    let up = Complex64::from_polar(1.0, phase);
    Ok(CoinBlock::new(
        down * uc[(0, 0)],
        down * uc[(0, 1)],
        up * uc[(1, 0)],
        up * uc[(1, 1)],
    ))
}

/// Kraus family of the per-step coin measurement:
/// A0 = sqrt(1-p) I, A1 = (sqrt(p)/2)(sigma_0 + sigma_z) = sqrt(p) diag(1, 0),
/// A2 = (sqrt(p)/2)(sigma_0 - sigma_z) = sqrt(p) diag(0, 1).
///
/// With probability p the coin is projectively measured in the sigma_z
/// basis; the family is unital, so the channel is trace preserving.
pub fn kraus_operators(decoherence_rate: f64) -> Result<[CoinBlock; 3]> {
    if !(0.0..=1.0).contains(&decoherence_rate) || decoherence_rate.is_nan() {
        return Err(Error::RateOutOfRange(decoherence_rate));
    }
    let sq = decoherence_rate.sqrt();
    let sk = (1.0 - decoherence_rate).sqrt();
    Ok([
        CoinBlock::new(cr(sk), cr(0.0), cr(0.0), cr(sk)),
        CoinBlock::new(cr(sq), cr(0.0), cr(0.0), cr(0.0)),
        CoinBlock::new(cr(0.0), cr(0.0), cr(0.0), cr(sq)),
    ])
}

/// Result of a unitality check on a Kraus family.
#[derive(Debug, Clone, Copy)]
pub struct UnitalityReport {
    pub holds: bool,
    /// Spectral norm of sum(A_n^dag A_n) - I.
    pub residual: f64,
}

/// Tolerance below which a Kraus family counts as unital.
pub const UNITALITY_TOL: f64 = 1e-12;

/// Checks sum(A_n^dag A_n) = I and reports the residual's spectral norm.
pub fn check_unital(kraus: &[CoinBlock; 3]) -> UnitalityReport {
    let mut sum = CoinBlock::zeros();
    for a in kraus {
        sum += a.adjoint() * a;
    }
    let dev = sum - CoinBlock::identity();
    let residual = dev.svd(false, false).singular_values.max();
    UnitalityReport {
        holds: residual < UNITALITY_TOL,
        residual,
    }
}
