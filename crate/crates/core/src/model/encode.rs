//! Encoders that load classical data into quantum states.

use super::density::DensityOperator;
use super::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::numerics::C64;

/// Index encoding: symbol `x ∈ {1, …, d}` is stored as the basis state
/// `|x−1⟩`, with a uniform prior.
pub fn encode_index(d: usize) -> Result<Ensemble> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("index encoding needs d >= 2, got {d}")));
    }
    let labels = (1..=d).map(|x| x.to_string()).collect();
    let states = (0..d).map(|i| DensityOperator::basis(d, i)).collect::<Result<Vec<_>>>()?;
    Ensemble::uniform(labels, states)
}

/// Amplitude vector for a 3-bit secret in dimension 8:
/// `(x₁|0⟩ + (1−x₁)|1⟩ + x₂|2⟩ + (1−x₂)|3⟩ + x₃|4⟩ + (1−x₃)|5⟩) / √3`.
pub fn amplitude_vector(bits: [bool; 3]) -> [C64; 8] {
    let w = 1.0 / 3f64.sqrt();
    let mut v = [C64::new(0.0, 0.0); 8];
    for (k, &b) in bits.iter().enumerate() {
        v[2 * k + usize::from(!b)] = C64::new(w, 0.0);
    }
    v
}

/// Amplitude-style encoding of `X ∈ {0,1}³` into 8 dimensions, uniform prior.
/// Labels are the bit strings `x₁x₂x₃`.
pub fn encode_amplitude_3bit() -> Ensemble {
    let mut labels = Vec::with_capacity(8);
    let mut states = Vec::with_capacity(8);
    for code in 0..8u8 {
        let bits = [code & 4 != 0, code & 2 != 0, code & 1 != 0];
        labels.push(bits.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>());
        states.push(DensityOperator::pure(&amplitude_vector(bits), false).expect("unit-norm amplitude state"));
    }
    Ensemble::uniform(labels, states).expect("valid amplitude ensemble")
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 4] = ["index2", "index4", "index8", "amplitude3"];

/// Built-in ensembles: `index2`, `index4`, `index8`, `amplitude3`.
pub fn preset(name: &str) -> Option<Ensemble> {
    match name {
        "index2" => encode_index(2).ok(),
        "index4" => encode_index(4).ok(),
        "index8" => encode_index(8).ok(),
        "amplitude3" => Some(encode_amplitude_3bit()),
        _ => None,
    }
}

/// Remark attached to results computed on a preset.
pub fn preset_note(name: &str) -> Option<&'static str> {
    match name {
        "amplitude3" => Some(
            "amplitude states are normalized by 1/sqrt(3) so each rho^x has unit trace; \
             under this reading the optimum is log2(2 + sqrt(3)) = 1.8999686 bits",
        ),
        _ => None,
    }
}
