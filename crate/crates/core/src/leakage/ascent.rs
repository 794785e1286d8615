//! Subgradient ascent over POVMs.
//!
//! Each step fixes the maximizing symbol `x*(y)` for every outcome, multiplies
//! every element by `G_y = I + μ(ρ^{x*(y)} − Σ_z ρ^{x*(z)} F_z)` on both sides
//! and renormalizes the result back onto the POVM constraint with
//! `S^{-1/2} · S^{-1/2}`, `S = Σ_y G_y† F_y G_y`.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::objective::evaluate;
use crate::error::{Error, Result};
use crate::model::{random_rank_one_vectors, Ensemble, Povm};
use crate::numerics::{clamp_psd, inv_sqrt_psd, CMatrix, C64};
use crate::par::{try_map_indexed, Execution};

type CVec = DVector<C64>;

/// Smallest step size tried by backtracking.
pub const MIN_STEP: f64 = 1e-6;
/// Elements whose smallest eigenvalue is above `-NEG_EIG_SLACK` are left as is
/// by the positivity repair.
const NEG_EIG_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AscentConfig {
    /// Step size μ.
    pub step_size: f64,
    /// Stop once `|old − new| < epsilon` on the objective.
    pub epsilon: f64,
    pub max_iters: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Number of POVM elements; `None` means `d²`.
    pub povm_size: Option<usize>,
    pub backtracking: bool,
    /// Relative regularization τ; `S` is inverted with `τ · tr(S) / d`.
    pub regularization: f64,
    #[serde(default)]
    pub execution: Execution,
}

impl Default for AscentConfig {
    fn default() -> Self {
        AscentConfig {
            step_size: 0.1,
            epsilon: 1e-9,
            max_iters: 10_000,
            restarts: 10,
            seed: 0,
            povm_size: None,
            backtracking: true,
            regularization: 1e-12,
            execution: Execution::default(),
        }
    }
}

impl AscentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.step_size > 0.0 && self.step_size <= 10.0) {
            return bad(format!("step size must lie in (0, 10], got {}", self.step_size));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.regularization > 0.0 && self.regularization.is_finite()) {
            return bad(format!("regularization must be positive, got {}", self.regularization));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1".into());
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1".into());
        }
        Ok(())
    }

    /// POVM size for dimension `d`, checking the `m ≥ d` floor.
    pub fn povm_size_for(&self, d: usize) -> Result<usize> {
        let m = self.povm_size.unwrap_or(d * d);
        if m < d {
            return Err(Error::InvalidArgument(format!(
                "POVM size {m} is below the dimension {d}; random initialization needs m >= d"
            )));
        }
        Ok(m)
    }

    /// Seed of restart `r`.
    pub fn restart_seed(&self, r: usize) -> u64 {
        self.seed.wrapping_add(r as u64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub objective: f64,
    pub leakage_bits: f64,
    /// Step size of the accepted step; 0 for the initial point.
    pub step_size: f64,
}

/// Objective history of one restart.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub points: Vec<TracePoint>,
    pub converged: bool,
}

impl ConvergenceTrace {
    /// True when no objective value drops more than `slack` below its predecessor.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.points.windows(2).all(|w| w[1].objective >= w[0].objective - slack)
    }

    pub fn final_objective(&self) -> f64 {
        self.points.last().map_or(f64::NAN, |p| p.objective)
    }

    pub fn iterations(&self) -> usize {
        self.points.last().map_or(0, |p| p.iteration)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeakageReport {
    /// Maximal leakage estimate in bits: the best restart's final value.
    pub leakage_bits: f64,
    /// `2^leakage_bits`, i.e. the best final objective.
    pub objective: f64,
    /// `min(log₂|𝕏|, 2 log₂ d)`.
    pub ceiling_bits: f64,
    pub optimal_povm: Povm,
    pub best_restart: usize,
    pub traces: Vec<ConvergenceTrace>,
    pub restart_leakages: Vec<f64>,
}

impl LeakageReport {
    pub fn converged(&self) -> Vec<bool> {
        self.traces.iter().map(|t| t.converged).collect()
    }

    pub fn all_converged(&self) -> bool {
        self.traces.iter().all(|t| t.converged)
    }
}

/// Upper bound `min(log₂ n_symbols, log₂ d²)` on the leakage.
pub fn leakage_ceiling(n_symbols: usize, d: usize) -> f64 {
    (n_symbols as f64).log2().min(2.0 * (d as f64).log2())
}

/// One ascent step with step size `mu` and relative regularization `tau`.
///
/// The returned POVM is validated.
pub fn ascent_step(e: &Ensemble, f: &Povm, mu: f64, tau: f64) -> Result<Povm> {
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch(format!("ensemble dim {} vs POVM dim {}", e.dim(), f.dim())));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {mu}")));
    }
    let states: Vec<&CMatrix> = e.states().iter().map(|s| s.matrix()).collect();
    let (_, argmax) = evaluate(&states, f.elements());
    let next = step_elements(&states, f.elements(), &argmax, mu, tau)?;
    let povm = Povm::from_elements_unchecked(next)?;
    povm.validate().map_err(|e| Error::NumericalFailure(format!("ascent step left the POVM set: {e}")))?;
    Ok(povm)
}

fn step_elements(
    states: &[&CMatrix],
    elements: &[CMatrix],
    argmax: &[usize],
    mu: f64,
    tau: f64,
) -> Result<Vec<CMatrix>> {
    let d = elements[0].nrows();
    let m = elements.len();
    let mu_c = C64::new(mu, 0.0);

    // Σ_z ρ^{x*(z)} F_z
    let mut mixed = DMatrix::<C64>::zeros(d, d);
    for (f, &x) in elements.iter().zip(argmax) {
        mixed.gemm(C64::new(1.0, 0.0), states[x].as_dmatrix(), f.as_dmatrix(), C64::new(1.0, 0.0));
    }
    let base = DMatrix::<C64>::identity(d, d) - &mixed * mu_c;

    // G_y depends on y only through x*(y)
    let mut gains: Vec<Option<DMatrix<C64>>> = vec![None; states.len()];
    for &x in argmax {
        if gains[x].is_none() {
            gains[x] = Some(&base + states[x].as_dmatrix() * mu_c);
        }
    }

    let mut tilde = Vec::with_capacity(m);
    let mut s = DMatrix::<C64>::zeros(d, d);
    let mut scratch = DMatrix::<C64>::zeros(d, d);
    for (f, &x) in elements.iter().zip(argmax) {
        let g = gains[x].as_ref().expect("gain cached for every argmax");
        g.ad_mul_to(f.as_dmatrix(), &mut scratch);
        let ft = &scratch * g;
        s += &ft;
        tilde.push(ft);
    }

    let s = CMatrix::from_dmatrix(s).map_err(|_| Error::NumericalFailure("non-finite S".into()))?;
    let reg = tau * s.trace().re / d as f64;
    let r = inv_sqrt_psd(&s, reg)?;
    let r = r.as_dmatrix();

    let mut next: Vec<DMatrix<C64>> = tilde
        .iter()
        .map(|ft| {
            let x = r * ft * r;
            (&x + x.adjoint()) * C64::new(0.5, 0.0)
        })
        .collect();

    // Spread the completeness residual I − Σ F_y evenly over the elements.
    let mut total = DMatrix::<C64>::zeros(d, d);
    for f in &next {
        total += f;
    }
    let share = (DMatrix::<C64>::identity(d, d) - total) * C64::new(1.0 / m as f64, 0.0);
    for f in &mut next {
        *f += &share;
    }

    next.into_iter()
        .map(|f| {
            let f = CMatrix::from_dmatrix(f).map_err(|_| Error::NumericalFailure("non-finite POVM element".into()))?;
            if nearly_psd(&f) {
                Ok(f)
            } else {
                clamp_psd(&f)
            }
        })
        .collect()
}

/// Cholesky certificate for `F + slack·I ≻ 0`, i.e. `λ_min(F) > −slack`.
fn nearly_psd(f: &CMatrix) -> bool {
    let d = f.nrows();
    let shifted = f.as_dmatrix() + DMatrix::<C64>::identity(d, d) * C64::new(NEG_EIG_SLACK, 0.0);
    Cholesky::new(shifted).is_some()
}

/// `Re⟨u|ρ|u⟩`, the weight a rank-one element `|u⟩⟨u|` gives to `ρ`.
#[inline]
fn weight(rho: &DMatrix<C64>, u: &CVec) -> f64 {
    let d = u.len();
    let (rho, u) = (rho.as_slice(), u.as_slice());
    let mut acc = 0.0;
    for (j, uj) in u.iter().enumerate() {
        let col = &rho[j * d..(j + 1) * d];
        let t: C64 = col.iter().zip(u).map(|(r, ui)| ui.conj() * r).sum();
        acc += (t * uj).re;
    }
    acc
}

fn evaluate_rank_one(states: &[&CMatrix], vectors: &[CVec]) -> (f64, Vec<usize>) {
    let mut total = 0.0;
    let mut argmax = Vec::with_capacity(vectors.len());
    for u in vectors {
        let mut best = f64::NEG_INFINITY;
        let mut best_x = 0;
        for (x, rho) in states.iter().enumerate() {
            let t = weight(rho.as_dmatrix(), u);
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

/// The ascent step on elements `F_y = |u_y⟩⟨u_y|`, which it maps to rank-one
/// elements `|R G_y† u_y⟩⟨R G_y† u_y|`.
fn step_rank_one(states: &[&CMatrix], vectors: &[CVec], argmax: &[usize], mu: f64, tau: f64) -> Result<Vec<CVec>> {
    let d = vectors[0].len();
    let one = C64::new(1.0, 0.0);
    let mu_c = C64::new(mu, 0.0);

    let mut mixed = DMatrix::<C64>::zeros(d, d);
    for (u, &x) in vectors.iter().zip(argmax) {
        let w = states[x].as_dmatrix() * u;
        mixed.gerc(one, &w, u, one);
    }
    let base = DMatrix::<C64>::identity(d, d) - &mixed * mu_c;
    let mut gains: Vec<Option<DMatrix<C64>>> = vec![None; states.len()];
    for &x in argmax {
        if gains[x].is_none() {
            gains[x] = Some(&base + states[x].as_dmatrix() * mu_c);
        }
    }

    let mut s = DMatrix::<C64>::zeros(d, d);
    let tilde: Vec<CVec> = vectors
        .iter()
        .zip(argmax)
        .map(|(u, &x)| {
            let w = gains[x].as_ref().expect("gain cached for every argmax").ad_mul(u);
            s.gerc(one, &w, &w, one);
            w
        })
        .collect();
    let s = CMatrix::from_dmatrix(s).map_err(|_| Error::NumericalFailure("non-finite S".into()))?;
    let reg = tau * s.trace().re / d as f64;
    let r = inv_sqrt_psd(&s, reg)?;
    Ok(tilde.iter().map(|w| r.as_dmatrix() * w).collect())
}

struct RestartOutcome {
    trace: ConvergenceTrace,
    povm: Vec<CMatrix>,
}

fn run_restart(states: &[&CMatrix], d: usize, m: usize, seed: u64, cfg: &AscentConfig) -> Result<RestartOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors = random_rank_one_vectors(d, m, &mut rng)?;
    let (mut cost, mut argmax) = evaluate_rank_one(states, &vectors);
    let mut trace = ConvergenceTrace::default();
    trace.points.push(TracePoint { iteration: 0, objective: cost, leakage_bits: cost.log2(), step_size: 0.0 });

    for iteration in 1..=cfg.max_iters {
        let mut mu = cfg.step_size;
        let (next, next_cost, next_argmax, used) = loop {
            let cand = step_rank_one(states, &vectors, &argmax, mu, cfg.regularization)?;
            let (c, a) = evaluate_rank_one(states, &cand);
            if !cfg.backtracking || c >= cost {
                break (cand, c, a, mu);
            }
            if mu <= MIN_STEP {
                // no ascent even at the smallest step: keep the current point
                break (vectors.clone(), cost, argmax.clone(), 0.0);
            }
            mu = (mu * 0.5).max(MIN_STEP);
        };
        let old = cost;
        vectors = next;
        cost = next_cost;
        argmax = next_argmax;
        trace.points.push(TracePoint { iteration, objective: cost, leakage_bits: cost.log2(), step_size: used });
        if (old - cost).abs() < cfg.epsilon {
            trace.converged = true;
            break;
        }
    }
    let povm = vectors.iter().map(|u| CMatrix::projector(u.as_slice())).collect();
    Ok(RestartOutcome { trace, povm })
}

/// Maximal leakage of `e` by multi-start subgradient ascent.
///
/// Restarts are independent and may run in parallel; the reported value is
/// the largest final leakage, ties going to the lowest restart index.
pub fn compute_leakage(e: &Ensemble, cfg: &AscentConfig) -> Result<LeakageReport> {
    cfg.validate()?;
    let d = e.dim();
    let m = cfg.povm_size_for(d)?;
    let states: Vec<&CMatrix> = e.states().iter().map(|s| s.matrix()).collect();

    let outcomes =
        try_map_indexed(cfg.execution, cfg.restarts, |r| run_restart(&states, d, m, cfg.restart_seed(r), cfg))?;

    let restart_leakages: Vec<f64> = outcomes.iter().map(|o| o.trace.final_objective().log2()).collect();
    let mut best = 0;
    for (r, &l) in restart_leakages.iter().enumerate() {
        if l > restart_leakages[best] {
            best = r;
        }
    }
    let mut outcomes = outcomes;
    let best_povm = std::mem::take(&mut outcomes[best].povm);
    let optimal_povm = Povm::from_elements_unchecked(best_povm)?;
    optimal_povm
        .validate()
        .map_err(|err| Error::NumericalFailure(format!("optimizer returned an invalid POVM: {err}")))?;
    let objective = outcomes[best].trace.final_objective();

    Ok(LeakageReport {
        leakage_bits: restart_leakages[best],
        objective,
        ceiling_bits: leakage_ceiling(e.len(), d),
        optimal_povm,
        best_restart: best,
        traces: outcomes.into_iter().map(|o| o.trace).collect(),
        restart_leakages,
    })
}
