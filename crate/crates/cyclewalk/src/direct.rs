//! Brute-force backend: evolves the full 2N x 2N density matrix.
//!
//! One step is measure-then-move: the coin measurement channel acts first,
//! then the coined shift U = S (I tensor U_c) conjugates the result. Dense
//! matrices throughout; this backend is the reference implementation the
//! fast path is checked against, not the one to scale.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::coin::{coin_operator, kraus_operators};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::params::WalkParams;
use crate::pauli::{cr, CoinBlock};

/// Conditional shift: coin state 1 moves the walker +1 around the cycle,
/// coin state 2 moves it -1. A permutation matrix in the shared basis.
pub fn shift_operator(n_sites: usize) -> Result<DMatrix<Complex64>> {
    if n_sites < 2 {
        return Err(Error::CycleTooShort(n_sites));
    }
    let dim = 2 * n_sites;
    let mut s = DMatrix::zeros(dim, dim);
    for x in 0..n_sites {
        s[(2 * ((x + 1) % n_sites), 2 * x)] = cr(1.0);
        s[(2 * ((x + n_sites - 1) % n_sites) + 1, 2 * x + 1)] = cr(1.0);
    }
    Ok(s)
}

/// The coined-walk step unitary U = S (I tensor U_c).
#[derive(Debug, Clone)]
pub struct EvolutionOperator {
    mat: DMatrix<Complex64>,
    n_sites: usize,
}

impl EvolutionOperator {
    pub fn new(params: &WalkParams) -> Result<Self> {
        let n = params.n_sites();
        let uc = coin_operator(params.coin_angle())?;
        let s = shift_operator(n)?;
        // S (I tensor U_c) column block y picks up U_c on the coin factor.
        let mut coined = DMatrix::zeros(2 * n, 2 * n);
        for x in 0..n {
            coined.fixed_view_mut::<2, 2>(2 * x, 2 * x).copy_from(&uc);
        }
        Ok(Self {
            mat: s * coined,
            n_sites: n,
        })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        2 * self.n_sites
    }
}

/// Applies the coin-measurement channel blockwise:
/// each 2x2 coin block B of rho maps to sum_n A_n B A_n^dag.
fn measure_coin(rho: &DMatrix<Complex64>, kraus: &[CoinBlock; 3]) -> DMatrix<Complex64> {
    let n = rho.nrows() / 2;
    let mut out = DMatrix::zeros(rho.nrows(), rho.ncols());
    for x in 0..n {
        for y in 0..n {
            let b: Matrix2<Complex64> = rho.fixed_view::<2, 2>(2 * x, 2 * y).into_owned();
            let mut acc = Matrix2::zeros();
            for a in kraus {
                acc += a * b * a.adjoint();
            }
            out.fixed_view_mut::<2, 2>(2 * x, 2 * y).copy_from(&acc);
        }
    }
    out
}

fn step_kernel(
    rho: &DMatrix<Complex64>,
    u: &EvolutionOperator,
    kraus: &[CoinBlock; 3],
) -> DMatrix<Complex64> {
    let measured = measure_coin(rho, kraus);
    u.matrix() * measured * u.matrix().adjoint()
}

/// One decoherent step: rho -> sum_n U (I tensor A_n) rho (I tensor A_n)^dag U^dag.
pub fn step(
    rho: &DensityMatrix,
    u: &EvolutionOperator,
    kraus: &[CoinBlock; 3],
) -> Result<DensityMatrix> {
    if rho.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            rows: rho.dim(),
            cols: rho.dim(),
        });
    }
    Ok(DensityMatrix::new_unchecked(step_kernel(
        rho.matrix(),
        u,
        kraus,
    )))
}

/// Incremental evolution holding the current state; avoids rebuilding
/// operators or restarting from t = 0 when a trajectory is scanned.
#[derive(Debug, Clone)]
pub struct DirectEvolution {
    u: EvolutionOperator,
    kraus: [CoinBlock; 3],
    rho: DensityMatrix,
    time: usize,
}

impl DirectEvolution {
    pub fn new(params: &WalkParams) -> Result<Self> {
        Ok(Self {
            u: EvolutionOperator::new(params)?,
            kraus: kraus_operators(params.decoherence_rate())?,
            rho: DensityMatrix::initial(params),
            time: 0,
        })
    }

    /// Advances one step.
    pub fn advance(&mut self) {
        let next = step_kernel(self.rho.matrix(), &self.u, &self.kraus);
        self.rho = DensityMatrix::new_unchecked(next);
        self.time += 1;
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn into_state(self) -> DensityMatrix {
        self.rho
    }
}

/// rho(t) from a cold start: the initial state iterated t times.
pub fn evolve(params: &WalkParams, t: usize) -> Result<DensityMatrix> {
    let mut ev = DirectEvolution::new(params)?;
    for _ in 0..t {
        ev.advance();
    }
    Ok(ev.into_state())
}
