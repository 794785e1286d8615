use super::eig::herm_eig;
use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

/// `tr(a·b)` as `Σ_ij a_ij b_ji`, without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Result<C64> {
    if a.ncols() != b.nrows() || a.nrows() != b.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "tr(a·b) with a {}x{} and b {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(trace_product_unchecked(a, b))
}

#[inline]
pub(crate) fn trace_product_unchecked(a: &CMatrix, b: &CMatrix) -> C64 {
    let (a, b) = (a.as_dmatrix(), b.as_dmatrix());
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// `Re tr(a·b)` for Hermitian `a` and `b`, as a real dot product of the entries.
#[inline]
pub(crate) fn hermitian_trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let (a, b) = (a.as_dmatrix().as_slice(), b.as_dmatrix().as_slice());
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

/// Kronecker product `a ⊗ b`.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix::from_dmatrix_unchecked(a.as_dmatrix().kronecker(b.as_dmatrix()))
}

/// Trace distance `½ Σ |λ_i(a − b)|`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance between {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    for m in [a, b] {
        if !m.is_square() {
            return Err(Error::NonSquare { rows: m.nrows(), cols: m.ncols() });
        }
        let asym = m.hermitian_asymmetry();
        if asym > super::eig::HERMITIAN_TOL {
            return Err(Error::NotHermitian(asym));
        }
    }
    // fixed operand order so that T(a, b) and T(b, a) are bit-identical
    let (a, b) = if lexicographic_le(a, b) { (a, b) } else { (b, a) };
    let eig = herm_eig(&(a - b), true)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}

fn lexicographic_le(a: &CMatrix, b: &CMatrix) -> bool {
    for (x, y) in a.as_dmatrix().iter().zip(b.as_dmatrix().iter()) {
        match x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn plus() -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::projector(&[c(s, 0.0), c(s, 0.0)])
    }

    fn from_raw(n: usize, raw: &[f64]) -> CMatrix {
        CMatrix::from_dmatrix(DMatrix::from_fn(n, n, |i, j| c(raw[2 * (i * n + j)], raw[2 * (i * n + j) + 1]))).unwrap()
    }

    fn random_density(n: usize, raw: &[f64]) -> CMatrix {
        let a = from_raw(n, raw);
        let r = &(&a * &a.adjoint()) + &CMatrix::identity(n).scale(1e-3);
        r.scale(1.0 / r.trace().re)
    }

    #[test]
    fn trace_of_identities() {
        let t = trace_product(&CMatrix::identity(5), &CMatrix::identity(5)).unwrap();
        assert_eq!(t, c(5.0, 0.0));
    }

    #[test]
    fn orthogonal_projectors() {
        let t = trace_product(&CMatrix::basis_projector(2, 0), &CMatrix::basis_projector(2, 1)).unwrap();
        assert_eq!(t, c(0.0, 0.0));
    }

    #[test]
    fn trace_product_shape_check() {
        assert!(trace_product(&CMatrix::zeros(2, 3), &CMatrix::zeros(2, 3)).is_err());
        assert!(trace_product(&CMatrix::zeros(2, 3), &CMatrix::zeros(3, 2)).is_ok());
    }

    #[test]
    fn tensor_identity_and_basis() {
        let i4 = tensor_product(&CMatrix::identity(2), &CMatrix::identity(2));
        assert_eq!(i4, CMatrix::identity(4));
        let p = tensor_product(&CMatrix::basis_projector(2, 0), &CMatrix::basis_projector(2, 1));
        assert_eq!(p, CMatrix::basis_projector(4, 1));
    }

    #[test]
    fn trace_distance_cases() {
        let z = CMatrix::basis_projector(2, 0);
        let o = CMatrix::basis_projector(2, 1);
        assert!(trace_distance(&z, &z).unwrap().abs() < 1e-15);
        assert!((trace_distance(&z, &o).unwrap() - 1.0).abs() < 1e-14);
        // |0⟩⟨0| − |+⟩⟨+| = [[1/2, -1/2], [-1/2, -1/2]] has eigenvalues ±√2/2
        let expected = std::f64::consts::SQRT_2 / 2.0;
        assert!((trace_distance(&z, &plus()).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn trace_distance_errors() {
        assert!(matches!(
            trace_distance(&CMatrix::identity(2), &CMatrix::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
        let skew = CMatrix::from_row_major(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(trace_distance(&skew, &CMatrix::identity(2)), Err(Error::NotHermitian(_))));
    }

    proptest! {
        #[test]
        fn trace_product_matches_dense(n in 1usize..6, raw in prop::collection::vec(-1.0f64..1.0, 100)) {
            let a = from_raw(n, &raw[..50]);
            let b = from_raw(n, &raw[50..]);
            let fast = trace_product(&a, &b).unwrap();
            let dense = (&a * &b).trace();
            prop_assert!((fast - dense).norm() <= 1e-12);
            let swapped = trace_product(&b, &a).unwrap();
            prop_assert!((fast - swapped).norm() <= 1e-12);
            let (ha, hb) = (a.hermitian_part(), b.hermitian_part());
            let x = trace_product(&ha, &hb).unwrap();
            prop_assert!((hermitian_trace_product_re(&ha, &hb) - x.re).abs() <= 1e-12);
            let y = trace_product(&hb, &ha).unwrap();
            prop_assert!((x - y.conj()).norm() <= 1e-12);
        }

        #[test]
        fn mixed_product_identity(raw in prop::collection::vec(-1.0f64..1.0, 32)) {
            let m: Vec<CMatrix> = raw.chunks(8).map(|r| from_raw(2, r)).collect();
            let lhs = &tensor_product(&m[0], &m[1]) * &tensor_product(&m[2], &m[3]);
            let rhs = tensor_product(&(&m[0] * &m[2]), &(&m[1] * &m[3]));
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }

        #[test]
        fn trace_distance_is_a_metric(n in 1usize..5, raw in prop::collection::vec(-1.0f64..1.0, 96)) {
            let a = random_density(n, &raw[..32]);
            let b = random_density(n, &raw[32..64]);
            let c = random_density(n, &raw[64..]);
            let ab = trace_distance(&a, &b).unwrap();
            let ba = trace_distance(&b, &a).unwrap();
            let bc = trace_distance(&b, &c).unwrap();
            let ac = trace_distance(&a, &c).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ac <= ab + bc + 1e-10);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&ab));
        }
    }
}
