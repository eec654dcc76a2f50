//! Walk parameters shared by every backend.

use nalgebra::Vector2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{cr, CoinBlock};

/// Tolerance on the initial coin state's norm deviation from 1.
pub const COIN_NORM_TOL: f64 = 1e-12;

/// Parameters of a decoherent quantum walk on the N-cycle.
///
/// Holds the cycle length N, the per-step coin measurement probability p,
/// the coin angle beta of the rotation coin, and the initial coin state.
/// Construction validates every field; instances are immutable afterwards,
/// so a `WalkParams` in hand is always internally consistent.
#[derive(Debug, Clone)]
pub struct WalkParams {
    n_sites: usize,
    decoherence_rate: f64,
    coin_angle: f64,
    initial_coin: Vector2<Complex64>,
}

impl WalkParams {
    /// Validates and freezes a parameter set.
    ///
    /// Requirements: `n_sites >= 2`, `decoherence_rate` in [0, 1],
    /// `coin_angle` strictly inside (0, pi/2), and `initial_coin` of unit
    /// norm within [`COIN_NORM_TOL`].
    pub fn new(
        n_sites: usize,
        decoherence_rate: f64,
        coin_angle: f64,
        initial_coin: Vector2<Complex64>,
    ) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::CycleTooShort(n_sites));
        }
        if !(0.0..=1.0).contains(&decoherence_rate) || decoherence_rate.is_nan() {
            return Err(Error::RateOutOfRange(decoherence_rate));
        }
        if !(coin_angle > 0.0 && coin_angle < std::f64::consts::FRAC_PI_2) {
            return Err(Error::CoinAngleOutOfRange(coin_angle));
        }
        let norm = initial_coin.norm();
        if (norm - 1.0).abs() > COIN_NORM_TOL {
            return Err(Error::CoinNotNormalized(norm));
        }
        Ok(Self {
            n_sites,
            decoherence_rate,
            coin_angle,
            initial_coin,
        })
    }

    /// Hadamard walk launched in coin state (1, 0).
    pub fn hadamard(n_sites: usize, decoherence_rate: f64) -> Result<Self> {
        Self::new(
            n_sites,
            decoherence_rate,
            std::f64::consts::FRAC_PI_4,
            default_coin(),
        )
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn decoherence_rate(&self) -> f64 {
        self.decoherence_rate
    }

    pub fn coin_angle(&self) -> f64 {
        self.coin_angle
    }

    pub fn initial_coin(&self) -> &Vector2<Complex64> {
        &self.initial_coin
    }

    /// Projector |psi0><psi0| onto the initial coin state.
    pub fn coin_projector(&self) -> CoinBlock {
        self.initial_coin * self.initial_coin.adjoint()
    }
}

/// The coin state (1, 0): the walker's default launch state.
pub fn default_coin() -> Vector2<Complex64> {
    Vector2::new(cr(1.0), cr(0.0))
}

/// The balanced coin state (1, i)/sqrt(2).
///
/// Unlike (1, 0) this is not an eigenstate of the measurement channel, so
/// decoherence acts from the very first step. Properties that claim strict
/// per-step growth or decay need such a start to hold from t = 0.
pub fn balanced_coin() -> Vector2<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Vector2::new(Complex64::new(s, 0.0), Complex64::new(0.0, s))
}
