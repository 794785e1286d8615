use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::numerics::{herm_eig, inv_sqrt_psd, trace_product_unchecked, CMatrix, C64};

/// Tolerance for POVM positivity, Hermiticity and completeness.
pub const POVM_TOL: f64 = 1e-8;
/// Largest imaginary part tolerated in a Born trace.
pub const IMAG_TOL: f64 = 1e-9;

const DRAW_ATTEMPTS: usize = 3;

/// Positive operator-valued measure: PSD elements summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    dim: usize,
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<CMatrix>) -> Result<Self> {
        let povm = Self::from_elements_unchecked(elements)?;
        povm.validate()?;
        Ok(povm)
    }

    /// Builds a POVM after only a shape check.
    ///
    /// Used by the optimizer for intermediate iterates and by fault-injection
    /// tests; [`Povm::validate`] reports whether the invariants hold.
    #[doc(hidden)]
    pub fn from_elements_unchecked(elements: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidPovm("no elements".into()));
        };
        let dim = first.nrows();
        for (y, f) in elements.iter().enumerate() {
            if f.nrows() != dim || f.ncols() != dim {
                return Err(Error::InvalidPovm(format!(
                    "element {y} is {}x{}, expected {dim}x{dim}",
                    f.nrows(),
                    f.ncols()
                )));
            }
        }
        Ok(Povm { dim, elements })
    }

    pub fn validate(&self) -> Result<()> {
        for (y, f) in self.elements.iter().enumerate() {
            if !f.is_finite() {
                return Err(Error::InvalidPovm(format!("element {y} has non-finite entries")));
            }
            let asym = f.hermitian_asymmetry();
            if asym > POVM_TOL {
                return Err(Error::InvalidPovm(format!("element {y} is not Hermitian ({asym:.3e})")));
            }
            let min = herm_eig(f, true)?.min_eigenvalue();
            if min < -POVM_TOL {
                return Err(Error::InvalidPovm(format!("element {y} has eigenvalue {min:.3e}")));
            }
        }
        let err = self.completeness_error();
        if err > POVM_TOL {
            return Err(Error::InvalidPovm(format!("elements sum to identity only within {err:.3e}")));
        }
        Ok(())
    }

    /// `max |Σ_y F_y − I|` entrywise.
    pub fn completeness_error(&self) -> f64 {
        self.sum().max_abs_diff(&CMatrix::identity(self.dim))
    }

    pub fn sum(&self) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for f in &self.elements {
            acc = &acc + f;
        }
        acc
    }

    /// Projective measurement in the computational basis.
    pub fn computational_basis(d: usize) -> Self {
        Povm { dim: d, elements: (0..d).map(|i| CMatrix::basis_projector(d, i)).collect() }
    }

    /// The single-outcome measurement `{I}`.
    pub fn trivial(d: usize) -> Self {
        Povm { dim: d, elements: vec![CMatrix::identity(d)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<CMatrix> {
        self.elements
    }
}

/// Random rank-one POVM with `m` elements, deterministic in `seed`.
///
/// Draws complex-Gaussian vectors `g_y` and normalizes `g_y g_y†` by
/// `S^{-1/2}` with `S = Σ g_y g_y†`. Needs `m ≥ d` for `S` to be invertible.
pub fn random_povm(d: usize, m: usize, seed: u64) -> Result<Povm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_povm_with_rng(d, m, &mut rng)
}

pub fn random_povm_with_rng<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Result<Povm> {
    let vectors = random_rank_one_vectors(d, m, rng)?;
    let elements = vectors.iter().map(|u| CMatrix::projector(u.as_slice())).collect();
    Ok(Povm { dim: d, elements })
}

/// Vectors `u_y = S^{-1/2} g_y` with `Σ u_y u_y† = I`.
pub(crate) fn random_rank_one_vectors<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Result<Vec<DVector<C64>>> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!("random POVM needs d >= 1 and m >= 1 (d={d}, m={m})")));
    }
    for _ in 0..DRAW_ATTEMPTS {
        let raw: Vec<DVector<C64>> = (0..m).map(|_| DVector::from_fn(d, |_, _| complex_gaussian(rng))).collect();
        let mut s = DMatrix::<C64>::zeros(d, d);
        for g in &raw {
            s.gerc(C64::new(1.0, 0.0), g, g, C64::new(1.0, 0.0));
        }
        let s = CMatrix::from_dmatrix(s)?;
        let eig = herm_eig(&s, true)?;
        if eig.min_eigenvalue() <= 1e-12 * eig.eigenvalues[0] {
            continue;
        }
        let r = inv_sqrt_psd(&s, 0.0)?;
        return Ok(raw.iter().map(|g| r.as_dmatrix() * g).collect());
    }
    Err(Error::DegenerateDraw(DRAW_ATTEMPTS))
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Conditional outcome distribution `P[x][y] = Re tr(ρ^x F_y)`.
///
/// Entries within 1e-9 of `[0, 1]` are clamped into it; anything further
/// out, or a trace with a sizeable imaginary part, is an error.
pub fn born_distribution(e: &Ensemble, f: &Povm) -> Result<Vec<Vec<f64>>> {
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch(format!("ensemble dim {} vs POVM dim {}", e.dim(), f.dim())));
    }
    e.states()
        .iter()
        .map(|rho| {
            f.elements()
                .iter()
                .map(|fy| {
                    let t = trace_product_unchecked(rho.matrix(), fy);
                    if t.im.abs() > IMAG_TOL {
                        return Err(Error::ImaginaryLeak(t.im));
                    }
                    if !(-IMAG_TOL..=1.0 + IMAG_TOL).contains(&t.re) {
                        return Err(Error::ProbabilityOutOfRange(t.re));
                    }
                    Ok(t.re.clamp(0.0, 1.0))
                })
                .collect()
        })
        .collect()
}
