use crate::error::{Error, Result};
use crate::numerics::{herm_eig, CMatrix, C64, HERMITIAN_TOL, PSD_TOL};

/// Unit-trace tolerance for density operators.
pub const TRACE_TOL: f64 = 1e-9;

/// Hermitian, positive semi-definite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates `matrix` and stores its Hermitian part.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NonSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        if matrix.nrows() == 0 {
            return Err(Error::InvalidArgument("density operator of dimension 0".into()));
        }
        let asym = matrix.hermitian_asymmetry();
        if asym > HERMITIAN_TOL {
            return Err(Error::NotHermitian(asym));
        }
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let min = herm_eig(&matrix, true)?.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(DensityOperator { matrix })
    }

    /// `|i⟩⟨i|` in dimension `d`.
    pub fn basis(d: usize, i: usize) -> Result<Self> {
        if i >= d {
            return Err(Error::InvalidArgument(format!("basis index {i} out of range for dimension {d}")));
        }
        Ok(DensityOperator { matrix: CMatrix::basis_projector(d, i) })
    }

    /// `|ψ⟩⟨ψ|`, optionally normalizing `ψ` first.
    pub fn pure(amplitudes: &[C64], normalize: bool) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("empty state vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if normalize {
            if norm == 0.0 {
                return Err(Error::InvalidArgument("zero vector cannot be normalized".into()));
            }
            let v: Vec<C64> = amplitudes.iter().map(|z| z / norm).collect();
            Self::new(CMatrix::projector(&v))
        } else {
            Self::new(CMatrix::projector(amplitudes))
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityOperator { matrix: CMatrix::identity(d).scale(1.0 / d as f64) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn accepts_valid_states() {
        assert!(DensityOperator::basis(3, 2).is_ok());
        assert_eq!(DensityOperator::maximally_mixed(4).dim(), 4);
        let s = DensityOperator::pure(&[c(1.0, 0.0), c(0.0, 1.0)], true).unwrap();
        assert!((s.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_states() {
        assert!(matches!(DensityOperator::new(CMatrix::from_real_diagonal(&[0.5, 0.4])), Err(Error::InvalidTrace(_))));
        assert!(matches!(DensityOperator::new(CMatrix::from_real_diagonal(&[1.5, -0.5])), Err(Error::NotPsd(_))));
        let skew = CMatrix::from_row_major(2, 2, &[c(0.5, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(matches!(DensityOperator::new(skew), Err(Error::NotHermitian(_))));
        assert!(DensityOperator::pure(&[c(1.0, 0.0), c(1.0, 0.0)], false).is_err());
        assert!(DensityOperator::pure(&[c(0.0, 0.0)], true).is_err());
        assert!(DensityOperator::basis(2, 2).is_err());
    }
}
