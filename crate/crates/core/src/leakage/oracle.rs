//! Reference values that do not go through the ascent.
//!
//! The qubit search below works entirely in Bloch coordinates: an operator
//! `a₀ I + a·σ` measured on `ρ = (I + r·σ)/2` gives `tr(ρF) = a₀ + r·a`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::model::{DensityOperator, Ensemble};
use crate::numerics::{trace_distance, C64};
use crate::par::{map_indexed, Execution};

/// Closed-form leakage of a two-symbol ensemble: `log₂(1 + T(ρ⁰, ρ¹))`.
///
/// With `Δ = ρ⁰ − ρ¹` the objective is `1 + Σ_y max(tr(ΔF_y), 0)`, which the
/// projector onto the positive part of `Δ` maximizes.
pub fn two_state_leakage(rho0: &DensityOperator, rho1: &DensityOperator) -> Result<f64> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch(format!("state dims {} and {}", rho0.dim(), rho1.dim())));
    }
    Ok((1.0 + trace_distance(rho0.matrix(), rho1.matrix())?).log2())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruteForceConfig {
    /// Polar grid points; the azimuthal grid has twice as many.
    pub grid_resolution: usize,
    /// Random rank-one POVMs drawn for each of the sizes 3 and 4.
    pub samples_per_size: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl BruteForceConfig {
    pub fn new(grid_resolution: usize) -> Self {
        BruteForceConfig { grid_resolution, samples_per_size: 100_000, seed: 0, execution: Execution::default() }
    }
}

/// Best leakage found by exhaustive search over qubit POVMs; a certified
/// lower bound on the maximal leakage.
pub fn brute_force_leakage(e: &Ensemble, grid_resolution: usize) -> Result<f64> {
    brute_force_leakage_with(e, &BruteForceConfig::new(grid_resolution))
}

pub fn brute_force_leakage_with(e: &Ensemble, cfg: &BruteForceConfig) -> Result<f64> {
    if e.dim() != 2 {
        return Err(Error::UnsupportedDimension(e.dim()));
    }
    if cfg.grid_resolution < 16 {
        return Err(Error::InvalidArgument(format!("grid resolution must be >= 16, got {}", cfg.grid_resolution)));
    }
    let bloch: Vec<[f64; 3]> = e
        .states()
        .iter()
        .map(|s| {
            let m = s.matrix();
            let off = m.get(0, 1);
            [2.0 * off.re, -2.0 * off.im, m.get(0, 0).re - m.get(1, 1).re]
        })
        .collect();

    let projective = grid_search(&bloch, cfg.grid_resolution, cfg.execution);
    let sampled = [3usize, 4]
        .iter()
        .map(|&m| sample_search(&bloch, m, cfg.samples_per_size, cfg.seed, cfg.execution))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(projective.max(sampled).log2())
}

fn best_response(bloch: &[[f64; 3]], a0: f64, a: [f64; 3]) -> f64 {
    bloch.iter().map(|r| a0 + r[0] * a[0] + r[1] * a[1] + r[2] * a[2]).fold(f64::NEG_INFINITY, f64::max)
}

/// Two-outcome projective measurements `(I ± n·σ)/2` on a (θ, φ) grid.
fn grid_search(bloch: &[[f64; 3]], n_theta: usize, exec: Execution) -> f64 {
    let n_phi = 2 * n_theta;
    let rows = map_indexed(exec, n_theta, |i| {
        let theta = PI * i as f64 / (n_theta - 1) as f64;
        let (st, ct) = theta.sin_cos();
        (0..n_phi)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / n_phi as f64;
                let (sp, cp) = phi.sin_cos();
                let n = [st * cp, st * sp, ct];
                let half = [0.5 * n[0], 0.5 * n[1], 0.5 * n[2]];
                best_response(bloch, 0.5, half) + best_response(bloch, 0.5, [-half[0], -half[1], -half[2]])
            })
            .fold(f64::NEG_INFINITY, f64::max)
    });
    rows.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

const CHUNKS: usize = 64;

fn sample_search(bloch: &[[f64; 3]], m: usize, samples: usize, seed: u64, exec: Execution) -> f64 {
    let per_chunk = samples.div_ceil(CHUNKS);
    let best = map_indexed(exec, CHUNKS, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((m as u64) << 48) ^ c as u64);
        let mut best = f64::NEG_INFINITY;
        let mut g = vec![[C64::new(0.0, 0.0); 2]; m];
        for _ in 0..per_chunk {
            if let Some(v) = sample_objective(bloch, &mut g, &mut rng) {
                best = best.max(v);
            }
        }
        best
    });
    best.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Draws a random rank-one qubit POVM and evaluates the objective on it.
fn sample_objective(bloch: &[[f64; 3]], g: &mut [[C64; 2]], rng: &mut impl Rng) -> Option<f64> {
    let (mut a, mut b, mut c) = (0.0, C64::new(0.0, 0.0), 0.0);
    for v in g.iter_mut() {
        *v = [gaussian(rng), gaussian(rng)];
        a += v[0].norm_sqr();
        b += v[0] * v[1].conj();
        c += v[1].norm_sqr();
    }
    // S = [[a, b], [b*, c]];  √S = (S + s I) / t,  s = √det S,  t = √(tr S + 2s)
    let det = a * c - b.norm_sqr();
    if det <= 1e-14 * (a + c) * (a + c) {
        return None;
    }
    let s = det.sqrt();
    let t = (a + c + 2.0 * s).sqrt();
    let (ra, rb, rc) = ((a + s) / t, b / t, (c + s) / t);
    // R = (√S)^{-1}
    let rdet = ra * rc - rb.norm_sqr();
    let (ia, ib, ic) = (rc / rdet, -rb / rdet, ra / rdet);

    let mut total = 0.0;
    for v in g.iter() {
        let h0 = v[0] * ia + v[1] * ib;
        let h1 = v[0] * ib.conj() + v[1] * ic;
        let cross = h0 * h1.conj();
        let a0 = 0.5 * (h0.norm_sqr() + h1.norm_sqr());
        let vec = [cross.re, -cross.im, 0.5 * (h0.norm_sqr() - h1.norm_sqr())];
        total += best_response(bloch, a0, vec);
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::encode_index;

    fn plus() -> DensityOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityOperator::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)], false).unwrap()
    }

    fn zero() -> DensityOperator {
        DensityOperator::basis(2, 0).unwrap()
    }

    #[test]
    fn two_state_closed_form() {
        assert!(two_state_leakage(&zero(), &zero()).unwrap().abs() < 1e-15);
        let one = DensityOperator::basis(2, 1).unwrap();
        assert!((two_state_leakage(&zero(), &one).unwrap() - 1.0).abs() < 1e-14);
        let v = two_state_leakage(&zero(), &plus()).unwrap();
        assert!((v - (1.0 + std::f64::consts::SQRT_2 / 2.0).log2()).abs() < 1e-14);
        assert!((v - 0.771553).abs() < 1e-6);
        assert!(two_state_leakage(&zero(), &DensityOperator::basis(3, 0).unwrap()).is_err());
    }

    #[test]
    fn brute_force_on_index2_is_exact() {
        let v = brute_force_leakage(&encode_index(2).unwrap(), 32).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn brute_force_matches_closed_form_for_zero_plus() {
        let e = Ensemble::uniform(vec!["0".into(), "+".into()], vec![zero(), plus()]).unwrap();
        let bf = brute_force_leakage(&e, 256).unwrap();
        let exact = two_state_leakage(&zero(), &plus()).unwrap();
        assert!(bf <= exact + 1e-12);
        assert!((bf - exact).abs() <= 2e-3, "{bf} vs {exact}");
    }

    #[test]
    fn brute_force_on_identical_pair_is_zero() {
        let e = Ensemble::uniform(vec!["a".into(), "b".into()], vec![plus(), plus()]).unwrap();
        assert!(brute_force_leakage(&e, 16).unwrap().abs() < 1e-12);
    }

    #[test]
    fn brute_force_rejects_bad_inputs() {
        assert!(matches!(brute_force_leakage(&encode_index(3).unwrap(), 32), Err(Error::UnsupportedDimension(3))));
        assert!(brute_force_leakage(&encode_index(2).unwrap(), 8).is_err());
    }

    #[test]
    fn sampled_povms_are_complete() {
        // Σ_y a0_y = 1 and Σ_y a_y = 0 for every draw, so measuring a maximally mixed state yields 1.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut g = vec![[C64::new(0.0, 0.0); 2]; 4];
        for _ in 0..200 {
            let v = sample_objective(&[[0.0, 0.0, 0.0]], &mut g, &mut rng).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
        }
    }
}
