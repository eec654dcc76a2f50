//! Momentum-space backend.
//!
//! The Fourier transform with kernel <x|k> = e^{+2 pi i x k / N} / sqrt(N)
//! block-diagonalizes the walk: for each momentum pair (k, k') the 2x2
//! block A(t, k, k') evolves independently under a 4x4 superoperator acting
//! on its Pauli coefficients. Cost per step is N^2 small matrix-vector
//! products instead of dense 2N x 2N algebra, and the full density matrix
//! is only reassembled when asked for.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::density::{hermitize, DensityMatrix};
use crate::error::{Error, Result};
use crate::params::WalkParams;
use crate::pauli::{c, cr, from_pauli, to_pauli, BlochVec, CoinBlock};

/// The 4x4 superoperator evolving the Pauli coefficients of A(t, k, k').
///
/// Entries are real except the two i * sin terms coupling the sigma_0 and
/// sigma_z components; those vanish at k = k' and at |k - k'| = N/2.
#[derive(Debug, Clone)]
pub struct SuperOp {
    pub k: usize,
    pub k_prime: usize,
    pub matrix: Matrix4<Complex64>,
}

/// Builds the superoperator for momentum pair (k, k').
///
/// With q = 1 - p, cm/sm the cosine/sine of 2 pi (k' - k)/N and cp/sp of
/// 2 pi (k' + k)/N, the matrix in the (sigma_0, sigma_x, sigma_y, sigma_z)
/// basis reads
///
/// ```text
/// [ cm        i q sm s2b   0       i sm c2b ]
/// [ 0         -q cp c2b    q sp    cp s2b   ]
/// [ 0         -q sp c2b    -q cp   sp s2b   ]
/// [ i sm      q cm s2b     0       cm c2b   ]
/// ```
///
/// where s2b = sin(2 beta), c2b = cos(2 beta). This equals the composite
/// measure-then-rotate channel B -> U_c(k) (sum_n A_n B A_n^dag) U_c(k')^dag
/// expressed in the Pauli basis.
pub fn superoperator_matrix(k: usize, k_prime: usize, params: &WalkParams) -> Result<SuperOp> {
    let n = params.n_sites();
    for index in [k, k_prime] {
        if index >= n {
            return Err(Error::MomentumOutOfRange { index, n_sites: n });
        }
    }
    let q = 1.0 - params.decoherence_rate();
    let diff = 2.0 * std::f64::consts::PI * (k_prime as f64 - k as f64) / n as f64;
    let sum = 2.0 * std::f64::consts::PI * (k_prime as f64 + k as f64) / n as f64;
    let (sm, cm) = diff.sin_cos();
    let (sp, cp) = sum.sin_cos();
    let (s2b, c2b) = (2.0 * params.coin_angle()).sin_cos();

    let matrix = Matrix4::new(
        cr(cm), c(0.0, q * sm * s2b), cr(0.0), c(0.0, sm * c2b),
        cr(0.0), cr(-q * cp * c2b), cr(q * sp), cr(cp * s2b),
        cr(0.0), cr(-q * sp * c2b), cr(-q * cp), cr(sp * s2b),
        c(0.0, sm), cr(q * cm * s2b), cr(0.0), cr(cm * c2b),
    );
    Ok(SuperOp { k, k_prime, matrix })
}

/// All blocks A(t, k, k') at a fixed time, indexed row-major by (k, k').
#[derive(Debug, Clone)]
pub struct BlockField {
    n_sites: usize,
    time: usize,
    blocks: Vec<CoinBlock>,
}

impl BlockField {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn block(&self, k: usize, k_prime: usize) -> &CoinBlock {
        &self.blocks[k * self.n_sites + k_prime]
    }
}

/// Incremental momentum-space evolution.
///
/// Holds one Bloch vector per momentum pair; `advance` applies every
/// superoperator once. Pairs are independent, so the update runs in
/// parallel, and since each slot is written by exactly one task the result
/// does not depend on the schedule.
#[derive(Debug, Clone)]
pub struct BlockEvolution {
    n_sites: usize,
    time: usize,
    ops: Vec<Matrix4<Complex64>>,
    state: Vec<BlochVec>,
}

impl BlockEvolution {
    pub fn new(params: &WalkParams) -> Result<Self> {
        let n = params.n_sites();
        let w0 = to_pauli(&params.coin_projector());
        let mut ops = Vec::with_capacity(n * n);
        for k in 0..n {
            for kp in 0..n {
                ops.push(superoperator_matrix(k, kp, params)?.matrix);
            }
        }
        Ok(Self {
            n_sites: n,
            time: 0,
            ops,
            state: vec![w0; n * n],
        })
    }

    pub fn advance(&mut self) {
        self.state
            .par_iter_mut()
            .zip(self.ops.par_iter())
            .for_each(|(w, op)| *w = op * *w);
        self.time += 1;
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn field(&self) -> BlockField {
        BlockField {
            n_sites: self.n_sites,
            time: self.time,
            blocks: self.state.iter().map(from_pauli).collect(),
        }
    }
}

/// Blocks after t steps: A(t, k, k') = L_{kk'}^t applied to |psi0><psi0|.
pub fn evolve_blocks(params: &WalkParams, t: usize) -> Result<BlockField> {
    let mut ev = BlockEvolution::new(params)?;
    for _ in 0..t {
        ev.advance();
    }
    Ok(ev.field())
}

/// N-th roots of unity w[m] = e^{2 pi i m / N}; phases are drawn from this
/// table by index arithmetic so conjugate entries match bit for bit.
fn root_table(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|m| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * m as f64 / n as f64))
        .collect()
}

/// Assembles the full density matrix:
/// P_{xyjl} = (1/N^2) sum_{k,k'} e^{2 pi i (x k - y k')/N} A_{jl}(t, k, k').
///
/// Summation order is fixed (k outer, k' inner) so identical inputs
/// reproduce identical floats. The result is symmetrized to absorb
/// float-scale asymmetry before any eigensolve downstream.
pub fn reconstruct_density(field: &BlockField) -> DensityMatrix {
    let n = field.n_sites();
    let dim = 2 * n;
    let roots = root_table(n);
    let scale = cr(1.0 / (n * n) as f64);
    let mut mat = DMatrix::zeros(dim, dim);
    for x in 0..n {
        for y in 0..n {
            let mut acc = Matrix2::zeros();
            for k in 0..n {
                let fx = roots[(x * k) % n];
                for kp in 0..n {
                    let phase = fx * roots[(y * kp) % n].conj();
                    acc += field.block(k, kp) * phase;
                }
            }
            mat.fixed_view_mut::<2, 2>(2 * x, 2 * y)
                .copy_from(&(acc * scale));
        }
    }
    hermitize(&mut mat);
    DensityMatrix::new_unchecked(mat)
}

/// Position distribution straight from the blocks:
/// P(x) = (1/N^2) sum_{k,k'} e^{2 pi i x (k - k')/N} [A11 + A22](t, k, k').
pub fn position_distribution_fourier(field: &BlockField) -> Vec<f64> {
    let n = field.n_sites();
    let roots = root_table(n);
    let scale = 1.0 / (n * n) as f64;
    (0..n)
        .map(|x| {
            let mut acc = Complex64::default();
            for k in 0..n {
                let fx = roots[(x * k) % n];
                for kp in 0..n {
                    let block = field.block(k, kp);
                    acc += fx * roots[(x * kp) % n].conj() * (block[(0, 0)] + block[(1, 1)]);
                }
            }
            acc.re * scale
        })
        .collect()
}

/// Outcome of a randomized contraction probe of a superoperator.
#[derive(Debug, Clone, Copy)]
pub struct ContractionReport {
    pub trials: usize,
    /// Largest observed ratio tr((SB)^dag SB) / tr(B^dag B).
    pub max_ratio: f64,
}

/// Hilbert-Schmidt gain of the superoperator on one block; `None` when the
/// input is numerically zero and the ratio is undefined (callers count such
/// trials as ratio 1).
pub fn hs_gain(s: &SuperOp, b: &CoinBlock) -> Option<f64> {
    let before = b.norm_squared();
    if before < 1e-28 {
        return None;
    }
    let after = from_pauli(&(s.matrix * to_pauli(b))).norm_squared();
    Some(after / before)
}

/// Checks the channel never expands Hilbert-Schmidt norm: draws `trials`
/// random blocks and reports the worst ratio (1 means norm preserved,
/// which is the coherent p = 0 case; below 1 means strict contraction).
pub fn contraction_check(s: &SuperOp, trials: usize, seed: u64) -> ContractionReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut max_ratio = f64::NEG_INFINITY;
    let mut counted = 0;
    for _ in 0..trials {
        let b = CoinBlock::from_fn(|_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        match hs_gain(s, &b) {
            Some(r) => {
                max_ratio = max_ratio.max(r);
                counted += 1;
            }
            None => {
                max_ratio = max_ratio.max(1.0);
            }
        }
    }
    if counted == 0 {
        max_ratio = 1.0;
    }
    ContractionReport { trials, max_ratio }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{coin_operator_fourier, kraus_operators};
    use crate::direct;
    use crate::params::{balanced_coin, default_coin, WalkParams};
    use crate::pauli::{sigma0, sigma_x, sigma_y, sigma_z};
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    /// The superoperator derived from its definition instead of the closed
    /// form: column i is the Pauli expansion of the channel applied to the
    /// i-th basis element.
    fn action_matrix(k: usize, kp: usize, params: &WalkParams) -> Matrix4<Complex64> {
        let left = coin_operator_fourier(params.coin_angle(), k, params.n_sites()).unwrap();
        let right = coin_operator_fourier(params.coin_angle(), kp, params.n_sites()).unwrap();
        let kraus = kraus_operators(params.decoherence_rate()).unwrap();
        let mut m = Matrix4::zeros();
        for (i, basis) in [sigma0(), sigma_x(), sigma_y(), sigma_z()].iter().enumerate() {
            let mut measured = CoinBlock::zeros();
            for a in &kraus {
                measured += a * basis * a.adjoint();
            }
            let out = left * measured * right.adjoint();
            m.set_column(i, &to_pauli(&out));
        }
        m
    }

    #[test]
    fn closed_form_matches_channel_action() {
        let grid = [
            (5usize, 0usize, 0usize, FRAC_PI_4, 0.3),
            (5, 1, 3, FRAC_PI_6, 0.5),
            (5, 2, 2, FRAC_PI_3, 0.1),
            (6, 0, 3, FRAC_PI_4, 0.7),
            (6, 5, 1, FRAC_PI_3, 0.0),
            (6, 2, 5, FRAC_PI_6, 1.0),
            (7, 3, 4, 1.2, 0.25),
            (7, 6, 0, 0.4, 0.9),
            (8, 4, 4, FRAC_PI_4, 0.5),
            (8, 7, 3, FRAC_PI_6, 0.15),
            (3, 1, 2, 1.0, 0.6),
            (3, 0, 1, FRAC_PI_3, 0.35),
            (4, 2, 0, 0.2, 0.05),
            (4, 3, 3, 1.4, 0.95),
            (9, 5, 2, FRAC_PI_4, 0.45),
            (9, 8, 8, 0.6, 0.2),
            (10, 9, 4, FRAC_PI_6, 0.55),
            (10, 0, 5, 1.1, 0.8),
            (2, 0, 1, FRAC_PI_4, 0.5),
            (2, 1, 1, FRAC_PI_3, 0.3),
        ];
        for (n, k, kp, beta, p) in grid {
            let params = WalkParams::new(n, p, beta, default_coin()).unwrap();
            let s = superoperator_matrix(k, kp, &params).unwrap();
            let action = action_matrix(k, kp, &params);
            let dev = (s.matrix - action).norm();
            assert!(dev < 1e-13, "N={n} k={k} k'={kp} beta={beta} p={p}: {dev}");
        }
    }

    #[test]
    fn diagonal_pair_has_invariant_identity_component() {
        // At k = k' the matrix takes the block form [[1, 0], [0, Q0]].
        let params = WalkParams::new(7, 0.3, FRAC_PI_4, default_coin()).unwrap();
        for k in 0..7 {
            let m = superoperator_matrix(k, k, &params).unwrap().matrix;
            assert_eq!(m[(0, 0)], cr(1.0));
            for j in 1..4 {
                assert_eq!(m[(0, j)], cr(0.0));
                assert_eq!(m[(j, 0)], cr(0.0));
            }
        }
    }

    #[test]
    fn opposite_pair_has_leading_minus_one() {
        for (n, k) in [(6usize, 0usize), (6, 2), (4, 1), (8, 3)] {
            let params = WalkParams::new(n, 0.4, FRAC_PI_3, default_coin()).unwrap();
            let kp = (k + n / 2) % n;
            let m = superoperator_matrix(k, kp, &params).unwrap().matrix;
            assert!((m[(0, 0)] - cr(-1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn coherent_superoperator_is_norm_preserving() {
        let params = WalkParams::new(5, 0.0, FRAC_PI_4, default_coin()).unwrap();
        for k in 0..5 {
            let m = superoperator_matrix(k, k, &params).unwrap().matrix;
            let eigs = m.eigenvalues().expect("eigenvalues");
            for e in eigs.iter() {
                assert!((e.norm() - 1.0).abs() < 1e-12, "modulus {}", e.norm());
            }
        }
    }

    #[test]
    fn superoperator_rejects_momentum_out_of_range() {
        let params = WalkParams::new(4, 0.2, FRAC_PI_4, default_coin()).unwrap();
        assert!(superoperator_matrix(4, 0, &params).is_err());
        assert!(superoperator_matrix(0, 9, &params).is_err());
    }

    #[test]
    fn blocks_at_time_zero_are_the_coin_projector() {
        let params = WalkParams::new(4, 0.3, FRAC_PI_4, balanced_coin()).unwrap();
        let field = evolve_blocks(&params, 0).unwrap();
        let proj = params.coin_projector();
        for k in 0..4 {
            for kp in 0..4 {
                assert!((field.block(k, kp) - proj).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn diagonal_blocks_forget_the_coin() {
        // k = k' blocks approach (1/2) I as t grows.
        let params = WalkParams::new(5, 0.3, FRAC_PI_4, default_coin()).unwrap();
        let field = evolve_blocks(&params, 2000).unwrap();
        for k in 0..5 {
            let b = field.block(k, k);
            assert!((b[(0, 0)] - cr(0.5)).norm() < 1e-8);
            assert!((b[(1, 1)] - cr(0.5)).norm() < 1e-8);
            assert!(b[(0, 1)].norm() < 1e-8);
            assert!(b[(1, 0)].norm() < 1e-8);
        }
    }

    #[test]
    fn opposite_blocks_alternate_sign() {
        // |k - k'| = N/2 blocks approach (-1)^t (1/2) I.
        let params = WalkParams::new(6, 0.3, FRAC_PI_4, default_coin()).unwrap();
        for (t, sign) in [(2000usize, 1.0), (2001, -1.0)] {
            let field = evolve_blocks(&params, t).unwrap();
            for k in 0..6 {
                let b = field.block(k, (k + 3) % 6);
                assert!((b[(0, 0)] - cr(sign * 0.5)).norm() < 1e-8, "t={t} k={k}");
                assert!((b[(1, 1)] - cr(sign * 0.5)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn block_field_keeps_hermitian_pairing_and_total_probability() {
        let params = WalkParams::new(5, 0.25, 1.0, balanced_coin()).unwrap();
        let mut ev = BlockEvolution::new(&params).unwrap();
        for _ in 0..60 {
            ev.advance();
            let field = ev.field();
            for k in 0..5 {
                for kp in 0..5 {
                    let dev = (field.block(k, kp) - field.block(kp, k).adjoint()).norm();
                    assert!(dev < 1e-12, "pairing broken at ({k},{kp}): {dev}");
                }
            }
            let total: Complex64 = (0..5)
                .map(|k| field.block(k, k)[(0, 0)] + field.block(k, k)[(1, 1)])
                .sum();
            assert!((total.re / 5.0 - 1.0).abs() < 1e-12);
            assert!(total.im.abs() < 1e-12);
        }
    }

    #[test]
    fn reconstruction_at_time_zero_is_exact() {
        let params = WalkParams::new(5, 0.4, FRAC_PI_3, balanced_coin()).unwrap();
        let field = evolve_blocks(&params, 0).unwrap();
        let rho = reconstruct_density(&field);
        let expected = DensityMatrix::initial(&params);
        assert!((rho.matrix() - expected.matrix()).norm() < 1e-12);
    }

    #[test]
    fn backends_agree_on_a_moderate_grid() {
        use crate::entropy::trace_distance;
        for n in [2usize, 3, 5] {
            for p in [0.0, 0.5, 1.0] {
                for beta in [FRAC_PI_6, FRAC_PI_4] {
                    let params = WalkParams::new(n, p, beta, default_coin()).unwrap();
                    let mut d = direct::DirectEvolution::new(&params).unwrap();
                    let mut f = BlockEvolution::new(&params).unwrap();
                    for t in 0..=30 {
                        if t > 0 {
                            d.advance();
                            f.advance();
                        }
                        let rf = reconstruct_density(&f.field());
                        let dist = trace_distance(d.state().matrix(), rf.matrix());
                        assert!(dist < 1e-10, "N={n} p={p} beta={beta} t={t}: {dist}");
                    }
                }
            }
        }
    }

    #[test]
    fn position_distributions_agree_across_backends() {
        let params = WalkParams::new(6, 0.3, FRAC_PI_4, balanced_coin()).unwrap();
        let mut d = direct::DirectEvolution::new(&params).unwrap();
        let mut f = BlockEvolution::new(&params).unwrap();
        for _ in 0..40 {
            d.advance();
            f.advance();
        }
        let pd = d.state().position_distribution();
        let pf = position_distribution_fourier(&f.field());
        let sum: f64 = pf.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        for x in 0..6 {
            assert!((pd[x] - pf[x]).abs() < 1e-10);
        }
    }

    #[test]
    fn reconstructed_states_satisfy_density_invariants() {
        let params = WalkParams::new(4, 0.35, 1.2, balanced_coin()).unwrap();
        for t in [0usize, 7, 40] {
            let rho = reconstruct_density(&evolve_blocks(&params, t).unwrap());
            rho.validate().unwrap();
        }
    }

    #[test]
    fn coherent_channel_preserves_hilbert_schmidt_norm() {
        let params = WalkParams::new(5, 0.0, FRAC_PI_4, default_coin()).unwrap();
        for (k, kp) in [(0usize, 0usize), (1, 3), (2, 4)] {
            let s = superoperator_matrix(k, kp, &params).unwrap();
            let report = contraction_check(&s, 100, 0xabcd_0001);
            assert!((report.max_ratio - 1.0).abs() < 1e-12, "ratio {}", report.max_ratio);
        }
    }

    #[test]
    fn decoherent_channel_never_expands() {
        let params = WalkParams::new(5, 0.5, FRAC_PI_3, default_coin()).unwrap();
        for k in 0..5 {
            for kp in 0..5 {
                let s = superoperator_matrix(k, kp, &params).unwrap();
                let report = contraction_check(&s, 100, 0xabcd_0002);
                assert!(report.max_ratio <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn zero_block_is_skipped() {
        let params = WalkParams::new(3, 0.4, FRAC_PI_4, default_coin()).unwrap();
        let s = superoperator_matrix(0, 1, &params).unwrap();
        assert!(hs_gain(&s, &CoinBlock::zeros()).is_none());
        assert!(hs_gain(&s, &sigma_x()).is_some());
    }

    #[test]
    fn eigenvalue_moduli_bounded_by_one() {
        for n in [3usize, 4, 6] {
            for p in [0.1, 0.5, 0.9] {
                let params = WalkParams::new(n, p, FRAC_PI_4, default_coin()).unwrap();
                for k in 0..n {
                    for kp in 0..n {
                        let m = superoperator_matrix(k, kp, &params).unwrap().matrix;
                        let eigs = m.eigenvalues().expect("eigenvalues");
                        for e in eigs.iter() {
                            assert!(e.norm() <= 1.0 + 1e-9);
                        }
                    }
                }
            }
        }
    }
}
