//! The full position-coin density matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::WalkParams;
use crate::pauli::cr;

/// Max entrywise deviation tolerated between rho and its adjoint.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Tolerated deviation of the trace from 1.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest admissible eigenvalue; more negative means not a state.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Density operator of the walker-coin system on an N-cycle.
///
/// Dimension 2N with the basis state |x> tensor |j> at row/column
/// 2x + (j - 1), x in 0..N, j in {1, 2}. This ordering is shared by both
/// evolution backends and by the partial traces; nothing else in the crate
/// may assume a different layout.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wraps a matrix after verifying the state invariants:
    /// Hermitian within [`HERMITICITY_TOL`], unit trace within [`TRACE_TOL`],
    /// eigenvalues above [`EIGENVALUE_FLOOR`], and even dimension >= 4.
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        let dm = Self { mat };
        dm.validate()?;
        Ok(dm)
    }

    /// Wraps a matrix that is trusted to satisfy the invariants already,
    /// e.g. the output of a trace-preserving channel applied to a valid
    /// state. Use [`DensityMatrix::validate`] to re-check when in doubt.
    pub fn new_unchecked(mat: DMatrix<Complex64>) -> Self {
        Self { mat }
    }

    /// The initial state |0><0| tensor |psi0><psi0|: walker at the origin.
    pub fn initial(params: &WalkParams) -> Self {
        let dim = 2 * params.n_sites();
        let mut mat = DMatrix::zeros(dim, dim);
        mat.fixed_view_mut::<2, 2>(0, 0)
            .copy_from(&params.coin_projector());
        Self { mat }
    }

    /// Re-checks all state invariants.
    pub fn validate(&self) -> Result<()> {
        let (rows, cols) = self.mat.shape();
        if rows != cols || rows < 4 || rows % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: rows.max(4),
                rows,
                cols,
            });
        }
        let mut herm_dev = 0.0_f64;
        for i in 0..rows {
            for j in i..rows {
                let d = (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm();
                herm_dev = herm_dev.max(d);
            }
        }
        if herm_dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian(herm_dev));
        }
        let trace_dev = (self.mat.trace() - cr(1.0)).norm();
        if trace_dev > TRACE_TOL {
            return Err(Error::NotUnitTrace(trace_dev));
        }
        let eigs = nalgebra::SymmetricEigen::new(self.mat.clone()).eigenvalues;
        let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < EIGENVALUE_FLOOR {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_sites(&self) -> usize {
        self.mat.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    /// Probability of finding the walker at each site:
    /// P(x) = rho[2x, 2x] + rho[2x+1, 2x+1].
    pub fn position_distribution(&self) -> Vec<f64> {
        let n = self.n_sites();
        (0..n)
            .map(|x| self.mat[(2 * x, 2 * x)].re + self.mat[(2 * x + 1, 2 * x + 1)].re)
            .collect()
    }

    /// Tr(rho^2), equal to the squared Frobenius norm for Hermitian rho.
    pub fn purity(&self) -> f64 {
        self.mat.norm_squared()
    }
}

/// Replaces m by (m + m^dag)/2, absorbing float-scale asymmetry.
pub(crate) fn hermitize(mat: &mut DMatrix<Complex64>) {
    let adj = mat.adjoint();
    *mat += adj;
    *mat *= cr(0.5);
}
