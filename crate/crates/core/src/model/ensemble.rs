use std::collections::HashSet;

use super::channel::KrausChannel;
use super::density::DensityOperator;
use crate::error::{Error, Result};
use crate::numerics::CMatrix;

/// Tolerance on `Σ p_X(x) = 1`.
pub const PRIOR_SUM_TOL: f64 = 1e-12;

/// Classical-quantum ensemble `{p_X(x), ρ^x}`.
///
/// Symbols keep their external labels; everything internal addresses them
/// by position.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    dim: usize,
    labels: Vec<String>,
    priors: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl Ensemble {
    pub fn new(labels: Vec<String>, priors: Vec<f64>, states: Vec<DensityOperator>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidEnsemble("at least one symbol is required".into()));
        }
        if labels.len() != states.len() || priors.len() != states.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} labels, {} priors and {} states",
                labels.len(),
                priors.len(),
                states.len()
            )));
        }
        let dim = states[0].dim();
        let mut seen = HashSet::new();
        for ((label, &p), s) in labels.iter().zip(&priors).zip(&states) {
            if !seen.insert(label.as_str()) {
                return Err(symbol_error(label, "duplicate label"));
            }
            if !(p.is_finite() && p > 0.0) {
                return Err(symbol_error(label, format!("prior must be strictly positive, got {p}")));
            }
            if s.dim() != dim {
                return Err(symbol_error(label, format!("state has dimension {}, expected {dim}", s.dim())));
            }
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::InvalidEnsemble(format!("priors sum to {total}, expected 1")));
        }
        Ok(Ensemble { dim, labels, priors, states })
    }

    /// Ensemble with a uniform prior.
    pub fn uniform(labels: Vec<String>, states: Vec<DensityOperator>) -> Result<Self> {
        let n = states.len().max(1);
        Self::new(labels, vec![1.0 / n as f64; states.len()], states)
    }

    /// Same states, different prior.
    pub fn with_priors(&self, priors: Vec<f64>) -> Result<Self> {
        Self::new(self.labels.clone(), priors, self.states.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Averaged state `ρ_A = Σ p_X(x) ρ^x`.
    pub fn average_state(&self) -> DensityOperator {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for (p, s) in self.priors.iter().zip(&self.states) {
            acc = &acc + &s.matrix().scale(*p);
        }
        DensityOperator::new(acc).unwrap_or_else(|_| DensityOperator::maximally_mixed(self.dim))
    }

    /// Pushes every state through `channel`, keeping labels and priors.
    pub fn map_channel(&self, channel: &KrausChannel) -> Result<Self> {
        let states = self
            .states
            .iter()
            .zip(&self.labels)
            .map(|(s, label)| {
                channel.apply(s).map_err(|e| match e {
                    Error::DimensionMismatch(_) => e,
                    other => symbol_error(label, other.to_string()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble { dim: channel.dim_out(), labels: self.labels.clone(), priors: self.priors.clone(), states })
    }

    /// True when every state equals the first entrywise within `tol`.
    pub fn is_indistinguishable(&self, tol: f64) -> bool {
        let first = self.states[0].matrix();
        self.states.iter().all(|s| s.matrix().max_abs_diff(first) <= tol)
    }
}

pub(crate) fn symbol_error(label: &str, reason: impl Into<String>) -> Error {
    Error::InvalidSymbol { label: label.to_string(), reason: reason.into() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn basis_states(d: usize) -> Vec<DensityOperator> {
        (0..d).map(|i| DensityOperator::basis(d, i).unwrap()).collect()
    }

    #[test]
    fn uniform_prior() {
        let e = Ensemble::uniform(labels(4), basis_states(4)).unwrap();
        assert_eq!(e.priors(), &[0.25; 4]);
        let avg = e.average_state();
        assert!(avg.matrix().max_abs_diff(&CMatrix::identity(4).scale(0.25)) < 1e-15);
    }

    #[test]
    fn rejects_bad_priors_with_label() {
        let e = Ensemble::new(labels(2), vec![1.0, 0.0], basis_states(2));
        assert!(matches!(e, Err(Error::InvalidSymbol { ref label, .. }) if label == "1"));
        let e = Ensemble::new(labels(2), vec![0.5, 0.6], basis_states(2));
        assert!(matches!(e, Err(Error::InvalidEnsemble(_))));
    }

    #[test]
    fn rejects_mixed_dimensions_and_duplicates() {
        let states = vec![DensityOperator::basis(2, 0).unwrap(), DensityOperator::basis(3, 0).unwrap()];
        let e = Ensemble::uniform(vec!["a".into(), "b".into()], states);
        assert!(matches!(e, Err(Error::InvalidSymbol { ref label, .. }) if label == "b"));
        let e = Ensemble::uniform(vec!["a".into(), "a".into()], basis_states(2));
        assert!(matches!(e, Err(Error::InvalidSymbol { .. })));
        assert!(Ensemble::uniform(vec![], vec![]).is_err());
    }

    #[test]
    fn indistinguishability() {
        let e = Ensemble::uniform(labels(3), vec![DensityOperator::maximally_mixed(2); 3]).unwrap();
        assert!(e.is_indistinguishable(1e-12));
        let e = Ensemble::uniform(labels(2), basis_states(2)).unwrap();
        assert!(!e.is_indistinguishable(1e-12));
    }
}
