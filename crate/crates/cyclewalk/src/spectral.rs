//! Spectral analysis of the momentum-pair superoperators.
//!
//! The 4x4 superoperator has a quartic characteristic polynomial with a
//! closed coefficient form; eigenvalues still come from a dense eigensolver
//! (closed quartic formulas are fragile near repeated roots) and the
//! polynomial serves as an independent residual check. For 0 < p < 1 the
//! spectrum stays inside the closed unit disk, touching it only at lambda =
//! +1 on diagonal pairs (k = k') and lambda = -1 on opposite pairs
//! (|k - k'| = N/2), each a simple root. The diagonal and opposite pairs
//! split off 3x3 real blocks Q0 and Q1 whose subunit spectral radii drive
//! convergence to the stationary state.

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::fourier::superoperator_matrix;
use crate::params::WalkParams;
use crate::pauli::cr;

/// Eigenvalues within this distance of +1 or -1 count as unit eigenvalues.
/// Simple-root separation on the supported parameter range is above 1e-3,
/// so the ball is safely wide and safely narrow at once.
pub const UNIT_EIGENVALUE_TOL: f64 = 1e-7;

/// Monic quartic coefficients of det(lambda I - L) for one momentum pair.
#[derive(Debug, Clone, Copy)]
pub struct QuarticCoeffs {
    pub c4: Complex64,
    pub c3: Complex64,
    pub c2: Complex64,
    pub c1: Complex64,
    pub c0: Complex64,
}

impl QuarticCoeffs {
    /// Evaluates the polynomial at lambda (Horner form).
    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        (((self.c4 * lambda + self.c3) * lambda + self.c2) * lambda + self.c1) * lambda + self.c0
    }
}

/// Closed-form characteristic coefficients. With q = 1 - p, cm and cp the
/// cosines of 2 pi (k' -+ k)/N, and c2b = cos(2 beta):
///
/// c3 = (1 + c2b)(q cp - cm)
/// c2 = (1 + q^2) c2b - 2 q cp cm (1 + c2b)
/// c1 = q (1 + c2b)(cp - q cm)
/// c0 = q^2
pub fn characteristic_coeffs(k: usize, k_prime: usize, params: &WalkParams) -> Result<QuarticCoeffs> {
    let n = params.n_sites();
    for index in [k, k_prime] {
        if index >= n {
            return Err(Error::MomentumOutOfRange { index, n_sites: n });
        }
    }
    let q = 1.0 - params.decoherence_rate();
    let cm = (2.0 * std::f64::consts::PI * (k_prime as f64 - k as f64) / n as f64).cos();
    let cp = (2.0 * std::f64::consts::PI * (k_prime as f64 + k as f64) / n as f64).cos();
    let c2b = (2.0 * params.coin_angle()).cos();
    Ok(QuarticCoeffs {
        c4: cr(1.0),
        c3: cr((1.0 + c2b) * (q * cp - cm)),
        c2: cr((1.0 + q * q) * c2b - 2.0 * q * cp * cm * (1.0 + c2b)),
        c1: cr(q * (1.0 + c2b) * (cp - q * cm)),
        c0: cr(q * q),
    })
}

/// Eigenvalue report for one momentum pair.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// Sorted by descending modulus, ties broken by ascending phase.
    pub eigenvalues: [Complex64; 4],
    pub max_modulus: f64,
    /// Unit eigenvalues found within [`UNIT_EIGENVALUE_TOL`] of +1 or -1,
    /// with their multiplicities; +1 listed first when both occur.
    pub unit_eigenvalues: Vec<(Complex64, usize)>,
    /// 1 minus the second-largest modulus.
    pub spectral_gap: f64,
}

/// Solves the 4x4 eigenproblem for momentum pair (k, k').
///
/// Works for every p in [0, 1]; the unit-eigenvalue bookkeeping is
/// meaningful as a classification only for 0 < p < 1, where unit
/// eigenvalues are guaranteed simple and equal to +-1.
pub fn spectrum(k: usize, k_prime: usize, params: &WalkParams) -> Result<SpectrumReport> {
    let s = superoperator_matrix(k, k_prime, params)?;
    let eig = s.matrix.eigenvalues().ok_or(Error::EigenFailure)?;
    let mut eigenvalues = [eig[0], eig[1], eig[2], eig[3]];
    eigenvalues.sort_by(|a, b| {
        b.norm()
            .partial_cmp(&a.norm())
            .expect("finite moduli")
            .then(a.arg().partial_cmp(&b.arg()).expect("finite phases"))
    });

    let mut unit_eigenvalues = Vec::new();
    for target in [1.0_f64, -1.0] {
        let mult = eigenvalues
            .iter()
            .filter(|e| (*e - cr(target)).norm() < UNIT_EIGENVALUE_TOL)
            .count();
        if mult > 0 {
            unit_eigenvalues.push((cr(target), mult));
        }
    }

    Ok(SpectrumReport {
        eigenvalues,
        max_modulus: eigenvalues[0].norm(),
        unit_eigenvalues,
        spectral_gap: 1.0 - eigenvalues[1].norm(),
    })
}

/// The 3x3 real block of the diagonal pair (k, k): with ct = cos(4 pi k/N),
/// st = sin(4 pi k/N), the full superoperator is [[1, 0], [0, Q0]] and
///
/// ```text
/// Q0 = [ -q ct c2b   q st    ct s2b ]
///      [ -q st c2b   -q ct   st s2b ]
///      [ q s2b       0       c2b    ]
/// ```
///
/// Its spectral radius is strictly below 1 for 0 < p < 1, which is what
/// wipes out the coin memory on diagonal pairs.
pub fn block_q0(k: usize, params: &WalkParams) -> Result<Matrix3<f64>> {
    let n = params.n_sites();
    if k >= n {
        return Err(Error::MomentumOutOfRange { index: k, n_sites: n });
    }
    let q = 1.0 - params.decoherence_rate();
    let angle = 4.0 * std::f64::consts::PI * k as f64 / n as f64;
    let (st, ct) = angle.sin_cos();
    let (s2b, c2b) = (2.0 * params.coin_angle()).sin_cos();
    Ok(Matrix3::new(
        -q * ct * c2b, q * st, ct * s2b,
        -q * st * c2b, -q * ct, st * s2b,
        q * s2b, 0.0, c2b,
    ))
}

/// The 3x3 real block of an opposite pair (|k - k'| = N/2): the full
/// superoperator is [[-1, 0], [0, Q1]] with, writing cp and sp for the
/// cosine and sine of 2 pi (k + k')/N,
///
/// ```text
/// Q1 = [ -q cp c2b   q sp    cp s2b  ]
///      [ -q sp c2b   -q cp   sp s2b  ]
///      [ -q s2b      0       -c2b    ]
/// ```
pub fn block_q1(k: usize, k_prime: usize, params: &WalkParams) -> Result<Matrix3<f64>> {
    let n = params.n_sites();
    for index in [k, k_prime] {
        if index >= n {
            return Err(Error::MomentumOutOfRange { index, n_sites: n });
        }
    }
    let halfway = n % 2 == 0 && (k.abs_diff(k_prime) == n / 2);
    if !halfway {
        return Err(Error::BlockPrecondition {
            k,
            k_prime,
            requirement: "|k - k'| must equal N/2",
        });
    }
    let q = 1.0 - params.decoherence_rate();
    let angle = 2.0 * std::f64::consts::PI * (k + k_prime) as f64 / n as f64;
    let (sp, cp) = angle.sin_cos();
    let (s2b, c2b) = (2.0 * params.coin_angle()).sin_cos();
    Ok(Matrix3::new(
        -q * cp * c2b, q * sp, cp * s2b,
        -q * sp * c2b, -q * cp, sp * s2b,
        -q * s2b, 0.0, -c2b,
    ))
}

/// The diagonal operator every decoherent walk converges to.
///
/// Odd N: uniform diagonal 1/(2N). Even N: the walk never leaves the
/// parity class x = t (mod 2), so the limit alternates between two
/// operators carrying 1/N on both coin slots of each supported site;
/// `t_parity` picks the class.
pub fn stationary_density(n_sites: usize, t_parity: usize) -> Result<DensityMatrix> {
    if n_sites < 2 {
        return Err(Error::CycleTooShort(n_sites));
    }
    if t_parity > 1 {
        return Err(Error::InvalidParity(t_parity));
    }
    let dim = 2 * n_sites;
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    if n_sites % 2 == 1 {
        let w = cr(1.0 / dim as f64);
        for i in 0..dim {
            mat[(i, i)] = w;
        }
    } else {
        let w = cr(1.0 / n_sites as f64);
        for x in (0..n_sites).filter(|x| x % 2 == t_parity) {
            mat[(2 * x, 2 * x)] = w;
            mat[(2 * x + 1, 2 * x + 1)] = w;
        }
    }
    Ok(DensityMatrix::new_unchecked(mat))
}
