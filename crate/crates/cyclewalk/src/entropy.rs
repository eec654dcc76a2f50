//! Von Neumann entropy, partial traces, mutual information, trace norm.
//!
//! All entropies are in bits (base-2 logarithms). With that convention the
//! decoherent walk's limits read exactly: total entropy 1 + log2(N) on odd
//! cycles and log2(N) on even ones, coin entropy 1 bit, and vanishing
//! coin-walker mutual information.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::density::{DensityMatrix, EIGENVALUE_FLOOR};
use crate::error::{Error, Result};
use crate::pauli::{cr, CoinBlock};

/// Hermiticity and trace tolerance on entropy inputs. Looser than the
/// construction-time state tolerances: inputs here are often the product of
/// thousands of evolution steps.
pub const ENTROPY_INPUT_TOL: f64 = 1e-10;

/// Eigenvalues below this are treated as exact zeros (0 log 0 = 0).
pub const EIGENVALUE_ZERO_TOL: f64 = 1e-14;

/// Entropies of a state and its two marginals at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRecord {
    pub time: usize,
    pub s_total: f64,
    pub s_coin: f64,
    pub s_walker: f64,
    pub mutual_info: f64,
}

/// Von Neumann entropy -sum(lambda log2 lambda) of a density operator of
/// any dimension (full states and reduced marginals alike).
///
/// Eigenvalues in [EIGENVALUE_FLOOR, EIGENVALUE_ZERO_TOL) are clipped to
/// zero; anything below the floor is rejected rather than silently turned
/// into a complex logarithm. The sum is clamped at zero so float noise on a
/// pure state cannot produce a negative entropy.
pub fn von_neumann_entropy(rho: &DMatrix<Complex64>) -> Result<f64> {
    let (rows, cols) = rho.shape();
    if rows != cols {
        return Err(Error::DimensionMismatch {
            expected: rows,
            rows,
            cols,
        });
    }
    let mut herm_dev = 0.0_f64;
    for i in 0..rows {
        for j in i..rows {
            herm_dev = herm_dev.max((rho[(i, j)] - rho[(j, i)].conj()).norm());
        }
    }
    if herm_dev > ENTROPY_INPUT_TOL {
        return Err(Error::NotHermitian(herm_dev));
    }
    let trace_dev = (rho.trace() - cr(1.0)).norm();
    if trace_dev > ENTROPY_INPUT_TOL {
        return Err(Error::NotUnitTrace(trace_dev));
    }
    let eigs = nalgebra::SymmetricEigen::new(rho.clone()).eigenvalues;
    let mut s = 0.0;
    for &lambda in eigs.iter() {
        if lambda < EIGENVALUE_FLOOR {
            return Err(Error::NotPositiveSemidefinite(lambda));
        }
        if lambda < EIGENVALUE_ZERO_TOL {
            continue;
        }
        s -= lambda * lambda.log2();
    }
    Ok(s.max(0.0))
}

/// Entropy of a 2x2 coin-space operator.
pub fn von_neumann_entropy_block(block: &CoinBlock) -> Result<f64> {
    von_neumann_entropy(&DMatrix::from_fn(2, 2, |i, j| block[(i, j)]))
}

/// Reduced coin operator: traces out the walker.
/// rho_c[j, l] = sum_x rho[2x + j, 2x + l].
pub fn partial_trace_walker(rho: &DensityMatrix) -> CoinBlock {
    let n = rho.n_sites();
    let m = rho.matrix();
    let mut out = CoinBlock::zeros();
    for x in 0..n {
        for j in 0..2 {
            for l in 0..2 {
                out[(j, l)] += m[(2 * x + j, 2 * x + l)];
            }
        }
    }
    out
}

/// Reduced walker operator: traces out the coin.
/// rho_w[x, y] = sum_j rho[2x + j, 2y + j].
pub fn partial_trace_coin(rho: &DensityMatrix) -> DMatrix<Complex64> {
    let n = rho.n_sites();
    let m = rho.matrix();
    DMatrix::from_fn(n, n, |x, y| m[(2 * x, 2 * y)] + m[(2 * x + 1, 2 * y + 1)])
}

/// All four entropies of a state at the given time:
/// S(total), S(coin), S(walker), and S(coin : walker) =
/// S(coin) + S(walker) - S(total).
pub fn mutual_information(rho: &DensityMatrix, time: usize) -> Result<EntropyRecord> {
    let s_total = von_neumann_entropy(rho.matrix())?;
    let s_coin = von_neumann_entropy_block(&partial_trace_walker(rho))?;
    let s_walker = von_neumann_entropy(&partial_trace_coin(rho))?;
    Ok(EntropyRecord {
        time,
        s_total,
        s_coin,
        s_walker,
        mutual_info: s_coin + s_walker - s_total,
    })
}

/// Schatten 1-norm: the sum of singular values.
pub fn trace_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

/// Trace-norm distance between two operators of equal dimension.
pub fn trace_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    trace_norm(&(a - b))
}
