//! Hermitian eigendecomposition and the spectral matrix functions built on it.

use nalgebra::{DMatrix, SymmetricEigen};

use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

/// Relative asymmetry tolerated by [`herm_eig`] without the symmetrize flag.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues above this (negative) threshold are numerical noise and are clamped to zero.
pub const PSD_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 10_000;

/// Eigenvalues sorted descending with matching unitary eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEig {
    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let v = self.eigenvectors.as_dmatrix();
        let n = v.nrows();
        let mut scaled = v.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let s = f(lam);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        CMatrix::from_dmatrix_unchecked(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|l| l)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Decomposes a Hermitian matrix.
///
/// With `symmetrize` set the input is replaced by its Hermitian part first;
/// otherwise an asymmetry above [`HERMITIAN_TOL`] is rejected.
pub fn herm_eig(m: &CMatrix, symmetrize: bool) -> Result<HermitianEig> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if !symmetrize {
        let asym = m.hermitian_asymmetry();
        if asym > HERMITIAN_TOL {
            return Err(Error::NotHermitian(asym));
        }
    }
    let h = m.hermitian_part().into_dmatrix();
    let n = h.nrows();
    if n == 0 {
        return Ok(HermitianEig { eigenvalues: vec![], eigenvectors: CMatrix::zeros(0, 0) });
    }
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| Error::NumericalFailure("Hermitian eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    if eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::NumericalFailure("non-finite eigenvalue".into()));
    }
    let vectors = DMatrix::<C64>::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEig { eigenvalues, eigenvectors: CMatrix::from_dmatrix_unchecked(vectors) })
}

/// Regularized inverse square root of a PSD matrix.
///
/// Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero and `reg` is added to
/// every eigenvalue before inversion. `reg == 0` is replaced by one ulp.
pub fn inv_sqrt_psd(s: &CMatrix, reg: f64) -> Result<CMatrix> {
    if !reg.is_finite() || reg < 0.0 {
        return Err(Error::InvalidArgument(format!("regularization must be >= 0, got {reg}")));
    }
    let reg = if reg == 0.0 { f64::EPSILON } else { reg };
    let eig = herm_eig(s, true)?;
    let min = eig.min_eigenvalue();
    if min < -PSD_TOL {
        return Err(Error::NotPsd(min));
    }
    Ok(eig.reconstruct_with(|l| (l.max(0.0) + reg).powf(-0.5)).hermitian_part())
}

/// Default regularization `1e-12 · tr(S) / d` used when inverting `S`.
pub fn default_regularization(s: &CMatrix) -> f64 {
    let d = s.nrows().max(1) as f64;
    (1e-12 * s.trace().re / d).max(f64::MIN_POSITIVE)
}

/// Projects a Hermitian matrix onto the PSD cone by zeroing negative eigenvalues.
pub fn clamp_psd(m: &CMatrix) -> Result<CMatrix> {
    let eig = herm_eig(m, true)?;
    Ok(eig.reconstruct_with(|l| l.max(0.0)).hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn hermitian_from(n: usize, vals: &[f64]) -> CMatrix {
        let mut m = DMatrix::<C64>::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            m[(i, i)] = c(vals[k], 0.0);
            k += 1;
            for j in (i + 1)..n {
                m[(i, j)] = c(vals[k], vals[k + 1]);
                m[(j, i)] = m[(i, j)].conj();
                k += 2;
            }
        }
        CMatrix::from_dmatrix(m).unwrap()
    }

    fn is_unitary(v: &CMatrix, tol: f64) -> bool {
        let p = &v.adjoint() * v;
        p.max_abs_diff(&CMatrix::identity(v.nrows())) <= tol
    }

    #[test]
    fn identity_spectrum() {
        let e = herm_eig(&CMatrix::identity(3), false).unwrap();
        for l in &e.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
        assert!(is_unitary(&e.eigenvectors, 1e-12));
    }

    #[test]
    fn diagonal_spectrum_is_sorted_descending() {
        let e = herm_eig(&CMatrix::from_real_diagonal(&[1.0, 4.0]), false).unwrap();
        assert!((e.eigenvalues[0] - 4.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        // eigenvector for 4 is e_1 up to phase
        assert!((e.eigenvectors.get(1, 0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        assert!(matches!(herm_eig(&CMatrix::zeros(2, 3), false), Err(Error::NonSquare { .. })));
        let m = CMatrix::from_row_major(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(herm_eig(&m, false), Err(Error::NotHermitian(_))));
        assert!(herm_eig(&m, true).is_ok());
    }

    #[test]
    fn inv_sqrt_of_identity_and_diagonal() {
        let r = inv_sqrt_psd(&CMatrix::identity(4), 0.0).unwrap();
        assert!(r.max_abs_diff(&CMatrix::identity(4)) < 1e-12);
        let r = inv_sqrt_psd(&CMatrix::from_real_diagonal(&[4.0, 1.0]), 0.0).unwrap();
        assert!(r.max_abs_diff(&CMatrix::from_real_diagonal(&[0.5, 1.0])) < 1e-12);
    }

    #[test]
    fn inv_sqrt_rejects_indefinite() {
        let m = CMatrix::from_real_diagonal(&[1.0, -1e-3]);
        assert!(matches!(inv_sqrt_psd(&m, 1e-12), Err(Error::NotPsd(_))));
        // noise-level negatives are clamped
        let m = CMatrix::from_real_diagonal(&[1.0, -1e-12]);
        assert!(inv_sqrt_psd(&m, 1e-12).is_ok());
        assert!(inv_sqrt_psd(&CMatrix::identity(2), -1.0).is_err());
    }

    #[test]
    fn clamp_removes_negative_part() {
        let m = CMatrix::from_real_diagonal(&[2.0, -0.5]);
        let p = clamp_psd(&m).unwrap();
        assert!(p.max_abs_diff(&CMatrix::from_real_diagonal(&[2.0, 0.0])) < 1e-14);
    }

    proptest! {
        #[test]
        fn reconstruction_and_unitarity(n in 1usize..7, raw in prop::collection::vec(-3.0f64..3.0, 49)) {
            let h = hermitian_from(n, &raw);
            let e = herm_eig(&h, false).unwrap();
            let tol = 1e-10 * h.frobenius_norm().max(1.0);
            prop_assert!(e.reconstruct().max_abs_diff(&h) <= tol);
            prop_assert!(is_unitary(&e.eigenvectors, 1e-10));
            prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn inv_sqrt_defining_property(n in 1usize..7, raw in prop::collection::vec(-1.0f64..1.0, 2 * 49)) {
            // S = A A† + 0.05 I keeps the condition number far below 1e8
            let a = DMatrix::<C64>::from_fn(n, n, |i, j| c(raw[i * 7 + j], raw[49 + i * 7 + j]));
            let s = CMatrix::from_dmatrix(&a * a.adjoint() + DMatrix::identity(n, n) * c(0.05, 0.0)).unwrap();
            let reg = 1e-12 * s.trace().re / n as f64;
            let r = inv_sqrt_psd(&s, reg).unwrap();
            let p = &(&r * &s) * &r;
            prop_assert!(p.max_abs_diff(&CMatrix::identity(n)) <= 1e-8);
            prop_assert!(r.hermitian_asymmetry() <= 1e-14);
        }
    }
}
