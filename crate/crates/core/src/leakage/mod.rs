//! Maximal quantum leakage: the objective, the multi-start subgradient
//! ascent that maximizes it, closed-form references and noise formulas.
//!
//! The leakage of an ensemble `{p_X(x), ρ^x}` is
//! `sup_F log₂ Σ_y max_x tr(ρ^x F_y)` over POVMs `F`; the prior never enters.
//! Optimal POVMs need at most `d²` rank-one elements, which sizes the search.
//! Guessing with several attempts leaks exactly as much as with one, so there
//! is no separate multi-guess computation.

mod ascent;
mod noise;
mod objective;
mod oracle;
mod verify;

pub use ascent::{
    ascent_step, compute_leakage, leakage_ceiling, AscentConfig, ConvergenceTrace, LeakageReport, TracePoint, MIN_STEP,
};
pub use noise::{noisy_leakage_global, noisy_leakage_local_bound};
pub use objective::{leakage_objective, mutual_information, ObjectiveValue};
pub use oracle::{brute_force_leakage, brute_force_leakage_with, two_state_leakage, BruteForceConfig};
pub use verify::{
    qubit_count, verify_properties, verify_properties_with, PropertyCheck, PropertyReport, VerifyOptions,
    CEILING_SLACK, DATA_PROCESSING_SLACK, DOMINANCE_SLACK, FLOOR_SLACK, GLOBAL_NOISE_TOL, INDISTINGUISHABLE_TOL,
    LOCAL_BOUND_SLACK, ZERO_LEAKAGE_TOL,
};
