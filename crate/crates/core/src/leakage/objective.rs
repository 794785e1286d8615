use crate::error::{Error, Result};
use crate::model::{born_distribution, Ensemble, Povm};
use crate::numerics::{hermitian_trace_product_re, CMatrix};

/// Value of the leakage objective at one POVM.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveValue {
    /// `Σ_y max_x Re tr(ρ^x F_y)`.
    pub objective: f64,
    /// `log₂(objective)`.
    pub leakage_bits: f64,
    /// Maximizing symbol index per outcome; ties go to the smallest index.
    pub argmax: Vec<usize>,
}

fn check_dims(e: &Ensemble, f: &Povm) -> Result<()> {
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch(format!("ensemble dim {} vs POVM dim {}", e.dim(), f.dim())));
    }
    Ok(())
}

pub fn leakage_objective(e: &Ensemble, f: &Povm) -> Result<ObjectiveValue> {
    check_dims(e, f)?;
    let states: Vec<&CMatrix> = e.states().iter().map(|s| s.matrix()).collect();
    let (objective, argmax) = evaluate(&states, f.elements());
    Ok(ObjectiveValue { objective, leakage_bits: objective.log2(), argmax })
}

pub(crate) fn evaluate(states: &[&CMatrix], elements: &[CMatrix]) -> (f64, Vec<usize>) {
    let mut total = 0.0;
    let mut argmax = Vec::with_capacity(elements.len());
    for f in elements {
        let mut best = f64::NEG_INFINITY;
        let mut best_x = 0;
        for (x, rho) in states.iter().enumerate() {
            let t = hermitian_trace_product_re(rho, f);
            if t > best {
                best = t;
                best_x = x;
            }
        }
        total += best;
        argmax.push(best_x);
    }
    (total, argmax)
}

/// Classical mutual information `I(X;Y)` in bits for the joint
/// distribution `p_X(x) · P[y|x]` induced by measuring with `f`.
pub fn mutual_information(e: &Ensemble, f: &Povm) -> Result<f64> {
    check_dims(e, f)?;
    let cond = born_distribution(e, f)?;
    let priors = e.priors();
    let m = f.len();
    let mut p_y = vec![0.0; m];
    for (px, row) in priors.iter().zip(&cond) {
        for (acc, p) in p_y.iter_mut().zip(row) {
            *acc += px * p;
        }
    }
    let mut info = 0.0;
    for (px, row) in priors.iter().zip(&cond) {
        for (y, &p) in row.iter().enumerate() {
            let joint = px * p;
            if joint > 0.0 {
                info += joint * (p / p_y[y]).log2();
            }
        }
    }
    Ok(info.max(0.0))
}
