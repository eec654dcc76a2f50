//! Discrete-time quantum walks on the N-cycle with probabilistic coin
//! measurement.
//!
//! The model: a walker on the cycle Z_N carries a two-level coin. Each step
//! first measures the coin in its computational basis with probability `p`
//! (leaving the state untouched with probability `1 - p`), then applies the
//! unitary walk step `S (I (x) U_c(beta))`, where the coin rotation is
//!
//! ```text
//! U_c(beta) = [ cos(beta)  sin(beta) ]
//!             [ sin(beta) -cos(beta) ]
//! ```
//!
//! and the shift `S` moves the walker one site clockwise or counterclockwise
//! depending on the coin. `p = 0` is the coherent walk, `p = 1` a classical
//! lazy-free random walk; in between the map is a unital quantum channel that
//! drives every initial state to the maximally mixed state on the reachable
//! sublattice.
//!
//! Two evolution backends are provided and agree to near machine precision:
//!
//! * [`direct`]: dense `2N x 2N` density-matrix evolution in the position
//!   basis. Transparent, and the reference the fast path is tested against.
//! * [`fourier`]: the channel is block-diagonal in the momentum basis, so the
//!   state splits into `N^2` independent `2 x 2` blocks, each evolved by a
//!   fixed `4 x 4` real-linear map on its Pauli components. Steps cost
//!   `O(N^2)` instead of `O(N^3)`.
//!
//! The [`spectral`] module exposes the per-block quartic characteristic
//! polynomial and the real `3 x 3` forms the map takes on the diagonal
//! (`k' = k`) and antipodal (`|k - k'| = N/2`) momentum pairs; those blocks
//! carry the walk's stationary states and its parity obstruction on even
//! cycles. [`entropy`] has base-2 von Neumann entropies, partial traces,
//! mutual information, and trace-norm distances.
//!
//! Basis conventions used throughout: position-major ordering (basis index
//! `2x + j` for site `x` and coin `j` in `{0, 1}`), coin value `0` hops
//! `x -> x + 1`, and momentum states `<x|k> = exp(+2 pi i x k / N) / sqrt(N)`.
//!
//! # Example
//!
//! ```
//! use cyclewalk::{evolve_blocks, position_distribution_fourier, WalkParams};
//!
//! let params = WalkParams::hadamard(7, 0.1).unwrap();
//! let blocks = evolve_blocks(&params, 40).unwrap();
//! let dist = position_distribution_fourier(&blocks);
//! let total: f64 = dist.iter().sum();
//! assert!((total - 1.0).abs() < 1e-12);
//! ```

pub mod coin;
pub mod density;
pub mod direct;
pub mod entropy;
pub mod error;
pub mod fourier;
pub mod params;
pub mod pauli;
pub mod spectral;

pub use coin::{
    check_unital, coin_operator, coin_operator_fourier, kraus_operators, UnitalityReport,
};
pub use density::DensityMatrix;
pub use direct::{evolve, shift_operator, step, DirectEvolution, EvolutionOperator};
pub use entropy::{
    mutual_information, partial_trace_coin, partial_trace_walker, trace_distance, trace_norm,
    von_neumann_entropy, von_neumann_entropy_block, EntropyRecord,
};
pub use error::{Error, Result};
pub use fourier::{
    contraction_check, evolve_blocks, hs_gain, position_distribution_fourier, reconstruct_density,
    superoperator_matrix, BlockEvolution, BlockField, ContractionReport, SuperOp,
};
pub use params::{balanced_coin, default_coin, WalkParams};
pub use pauli::{from_pauli, to_pauli, BlochVec, CoinBlock};
pub use spectral::{
    block_q0, block_q1, characteristic_coeffs, spectrum, stationary_density, QuarticCoeffs,
    SpectrumReport,
};
