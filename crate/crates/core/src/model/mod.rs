//! Density operators, classical-quantum ensembles, POVMs and Kraus channels.
//!
//! Every constructor validates its invariants, so a value of one of these
//! types is always usable by the leakage engine.

mod channel;
mod density;
mod encode;
mod ensemble;
mod povm;
mod schema;

pub use channel::{
    apply_channel, depolarizing_global, depolarizing_local, random_channel, KrausChannel, MAX_LOCAL_QUBITS,
    TRACE_PRESERVATION_TOL,
};
pub use density::{DensityOperator, TRACE_TOL};
pub use encode::{amplitude_vector, encode_amplitude_3bit, encode_index, preset, preset_note, PRESET_NAMES};
pub use ensemble::{Ensemble, PRIOR_SUM_TOL};
pub(crate) use povm::random_rank_one_vectors;
pub use povm::{born_distribution, random_povm, random_povm_with_rng, Povm, IMAG_TOL, POVM_TOL};
pub use schema::{EnsembleSpec, StateSpec, SymbolSpec};
