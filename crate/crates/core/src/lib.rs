//! Maximal quantum leakage of classical data encoded in quantum states.
//!
//! An adversary holding one copy of the state `ρ^x` that encodes a secret `x`
//! measures it and tries to guess any function of `x`. The maximal leakage is
//! the worst-case multiplicative gain, in bits, of that guess:
//!
//! ```text
//! Q(X→A) = sup over POVMs {F_y} of log₂ Σ_y max_x tr(ρ^x F_y)
//! ```
//!
//! * [`numerics`]: complex-matrix kernel (Hermitian eigensolver, `S^{-1/2}`,
//!   Kronecker products, trace distance).
//! * [`model`]: validated density operators, ensembles, POVMs, Kraus
//!   channels, encoders and the JSON ensemble format.
//! * [`leakage`]: the objective, multi-start subgradient ascent, closed-form
//!   references, depolarizing-noise formulas and property checks.
//! * [`par`]: rayon-backed parallel map with a sequential fallback.
//!
//! ```
//! use qleak_core::leakage::{compute_leakage, AscentConfig};
//! use qleak_core::model::encode_index;
//!
//! let report = compute_leakage(&encode_index(4).unwrap(), &AscentConfig { restarts: 2, ..Default::default() }).unwrap();
//! assert!((report.leakage_bits - 2.0).abs() < 1e-3);
//! ```

pub mod error;
pub mod leakage;
pub mod model;
pub mod numerics;
pub mod par;

pub use error::{Error, Result};
