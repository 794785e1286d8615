//! Complex-matrix kernel: Hermitian eigendecomposition, spectral matrix
//! functions, tensor products and trace metrics.

mod eig;
mod matrix;
mod ops;

pub use eig::{clamp_psd, default_regularization, herm_eig, inv_sqrt_psd, HermitianEig, HERMITIAN_TOL, PSD_TOL};
pub use matrix::{CMatrix, C64};
pub use ops::{tensor_product, trace_distance, trace_product};

pub(crate) use ops::{hermitian_trace_product_re, trace_product_unchecked};
