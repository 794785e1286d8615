//! JSON interchange format for ensembles.
//!
//! ```json
//! { "dimension": 2,
//!   "symbols": [
//!     { "label": "a", "prior": 0.5, "state": { "kind": "basis_index", "index": 0 } },
//!     { "label": "b", "state": { "kind": "pure_vector", "amplitudes": [[1,0],[1,0]], "normalize": true } } ] }
//! ```
//!
//! Priors are either given for every symbol or for none (uniform).

use serde::{Deserialize, Serialize};

use super::density::DensityOperator;
use super::ensemble::{symbol_error, Ensemble};
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub dimension: usize,
    pub symbols: Vec<SymbolSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<f64>,
    pub state: StateSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    BasisIndex {
        index: usize,
    },
    PureVector {
        amplitudes: Vec<[f64; 2]>,
        #[serde(default)]
        normalize: bool,
    },
    DensityMatrix {
        rows: Vec<Vec<[f64; 2]>>,
    },
}

impl StateSpec {
    fn build(&self, dim: usize) -> std::result::Result<DensityOperator, String> {
        match self {
            StateSpec::BasisIndex { index } => DensityOperator::basis(dim, *index).map_err(|e| e.to_string()),
            StateSpec::PureVector { amplitudes, normalize } => {
                if amplitudes.len() != dim {
                    return Err(format!("{} amplitudes for dimension {dim}", amplitudes.len()));
                }
                let v: Vec<C64> = amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                DensityOperator::pure(&v, *normalize).map_err(|e| e.to_string())
            }
            StateSpec::DensityMatrix { rows } => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(format!("density matrix must be {dim}x{dim}"));
                }
                let entries: Vec<C64> = rows.iter().flatten().map(|[re, im]| C64::new(*re, *im)).collect();
                let m = CMatrix::from_row_major(dim, dim, &entries).map_err(|e| e.to_string())?;
                DensityOperator::new(m).map_err(|e| e.to_string())
            }
        }
    }
}

impl EnsembleSpec {
    pub fn build(&self) -> Result<Ensemble> {
        if self.dimension == 0 {
            return Err(Error::InvalidEnsemble("dimension must be positive".into()));
        }
        if self.symbols.is_empty() {
            return Err(Error::InvalidEnsemble("at least one symbol is required".into()));
        }
        let given = self.symbols.iter().filter(|s| s.prior.is_some()).count();
        if given != 0 && given != self.symbols.len() {
            let missing = self.symbols.iter().find(|s| s.prior.is_none()).unwrap();
            return Err(symbol_error(&missing.label, "prior missing while other symbols specify one"));
        }
        let states = self
            .symbols
            .iter()
            .map(|s| s.state.build(self.dimension).map_err(|reason| symbol_error(&s.label, reason)))
            .collect::<Result<Vec<_>>>()?;
        let labels = self.symbols.iter().map(|s| s.label.clone()).collect();
        if given == 0 {
            Ensemble::uniform(labels, states)
        } else {
            Ensemble::new(labels, self.symbols.iter().map(|s| s.prior.unwrap()).collect(), states)
        }
    }

    /// Lossless description of `e`, every state written as a density matrix.
    pub fn from_ensemble(e: &Ensemble) -> Self {
        let symbols = e
            .labels()
            .iter()
            .zip(e.priors())
            .zip(e.states())
            .map(|((label, &prior), state)| SymbolSpec {
                label: label.clone(),
                prior: Some(prior),
                state: StateSpec::DensityMatrix { rows: state.matrix().to_rows() },
            })
            .collect();
        EnsembleSpec { dimension: e.dim(), symbols }
    }
}

impl Ensemble {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: EnsembleSpec =
            serde_json::from_str(s).map_err(|e| Error::InvalidEnsemble(format!("malformed JSON: {e}")))?;
        spec.build()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&EnsembleSpec::from_ensemble(self)).expect("ensemble serializes")
    }
}
