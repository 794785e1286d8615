//! Batch check of the structural properties of maximal leakage on one ensemble.

use serde::{Deserialize, Serialize};

use super::ascent::{compute_leakage, AscentConfig, LeakageReport};
use super::noise::{noisy_leakage_global, noisy_leakage_local_bound};
use super::objective::{leakage_objective, mutual_information};
use crate::error::{Error, Result};
use crate::model::{
    depolarizing_global, depolarizing_local, random_channel, random_povm, Ensemble, KrausChannel, Povm,
};
use crate::par::try_map_indexed;

pub const FLOOR_SLACK: f64 = 1e-9;
pub const CEILING_SLACK: f64 = 1e-6;
pub const INDISTINGUISHABLE_TOL: f64 = 1e-9;
pub const ZERO_LEAKAGE_TOL: f64 = 1e-6;
pub const DOMINANCE_SLACK: f64 = 1e-9;
pub const DATA_PROCESSING_SLACK: f64 = 1e-3;
pub const GLOBAL_NOISE_TOL: f64 = 2e-3;
pub const LOCAL_BOUND_SLACK: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Depolarizing strengths for the noise checks.
    pub p_grid: Vec<f64>,
    /// Random POVMs probed by the dominance check, besides the optimizer's.
    pub random_probes: usize,
    /// Lower limit on restarts for both sides of the data-processing check.
    pub data_processing_restarts: usize,
    /// Replace the optimizer's POVM by a corrupted one (tests the failure path).
    #[doc(hidden)]
    pub inject_corrupt_povm: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            p_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            random_probes: 100,
            data_processing_restarts: 20,
            inject_corrupt_povm: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    pub skipped: bool,
    /// Worst observed value of the checked quantity.
    pub measured: f64,
    /// Threshold it was compared against.
    pub bound: f64,
    pub detail: String,
}

impl PropertyCheck {
    fn new(name: &str, passed: bool, measured: f64, bound: f64, detail: impl Into<String>) -> Self {
        PropertyCheck { name: name.into(), passed, skipped: false, measured, bound, detail: detail.into() }
    }

    fn skipped(name: &str, detail: impl Into<String>) -> Self {
        PropertyCheck {
            name: name.into(),
            passed: true,
            skipped: true,
            measured: f64::NAN,
            bound: f64::NAN,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub leakage_bits: f64,
    pub ceiling_bits: f64,
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn verify_properties(e: &Ensemble, cfg: &AscentConfig, channel: Option<&KrausChannel>) -> Result<PropertyReport> {
    verify_properties_with(e, cfg, channel, &VerifyOptions::default())
}

/// Runs the optimizer on `e` and checks nonnegativity, the dimension
/// ceiling, zero leakage iff indistinguishable, per-POVM dominance of mutual
/// information, data processing under `channel` (a seeded random channel when
/// `None`), exactness of the global-noise formula and the local-noise bound.
pub fn verify_properties_with(
    e: &Ensemble,
    cfg: &AscentConfig,
    channel: Option<&KrausChannel>,
    opts: &VerifyOptions,
) -> Result<PropertyReport> {
    cfg.validate()?;
    let d = e.dim();
    if let Some(c) = channel {
        if c.dim_in() != d {
            return Err(Error::DimensionMismatch(format!("channel input dim {} vs ensemble dim {d}", c.dim_in())));
        }
    }
    for &p in &opts.p_grid {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
    }

    let base = compute_leakage(e, cfg)?;
    let q = base.leakage_bits;
    let mut checks = Vec::new();

    let reported_povm = if opts.inject_corrupt_povm { corrupt(&base.optimal_povm)? } else { base.optimal_povm.clone() };
    checks.push(povm_check(e, &base, &reported_povm));

    checks.push(PropertyCheck::new(
        "nonnegativity",
        q >= -FLOOR_SLACK,
        q,
        -FLOOR_SLACK,
        format!("leakage {q:.9} bits"),
    ));
    checks.push(PropertyCheck::new(
        "ceiling",
        q <= base.ceiling_bits + CEILING_SLACK,
        q,
        base.ceiling_bits,
        format!("leakage {q:.9} vs min(log2|X|, 2 log2 d) = {:.9}", base.ceiling_bits),
    ));

    let indist = e.is_indistinguishable(INDISTINGUISHABLE_TOL);
    let zero = q < ZERO_LEAKAGE_TOL;
    checks.push(PropertyCheck::new(
        "independence",
        indist == zero,
        q,
        ZERO_LEAKAGE_TOL,
        format!("indistinguishable={indist}, zero leakage={zero}"),
    ));

    checks.push(dominance_check(e, &reported_povm, cfg, opts)?);
    checks.push(data_processing_check(e, cfg, channel, &base, opts)?);
    checks.push(global_noise_check(e, cfg, q, opts)?);
    checks.push(local_noise_check(e, cfg, q, opts)?);

    Ok(PropertyReport { leakage_bits: q, ceiling_bits: base.ceiling_bits, checks })
}

fn corrupt(f: &Povm) -> Result<Povm> {
    Povm::from_elements_unchecked(f.elements().iter().map(|el| el.scale(2.0)).collect())
}

fn povm_check(e: &Ensemble, base: &LeakageReport, f: &Povm) -> PropertyCheck {
    let name = "optimal_povm";
    if let Err(err) = f.validate() {
        return PropertyCheck::new(name, false, f.completeness_error(), crate::model::POVM_TOL, err.to_string());
    }
    match leakage_objective(e, f) {
        Ok(v) => {
            let gap = (v.objective - base.objective).abs();
            PropertyCheck::new(name, gap <= 1e-9, gap, 1e-9, format!("re-evaluated objective {:.12}", v.objective))
        }
        Err(err) => PropertyCheck::new(name, false, f64::NAN, 1e-9, err.to_string()),
    }
}

fn dominance_check(e: &Ensemble, reported: &Povm, cfg: &AscentConfig, opts: &VerifyOptions) -> Result<PropertyCheck> {
    let name = "mutual_information_dominance";
    let d = e.dim();
    let m = cfg.povm_size_for(d)?;
    let gap = |f: &Povm| -> Result<f64> {
        let info = mutual_information(e, f)?;
        let bound = leakage_objective(e, f)?.leakage_bits;
        Ok(info - bound)
    };
    let mut worst = match gap(reported) {
        Ok(g) => g,
        Err(err) => {
            return Ok(PropertyCheck::new(name, false, f64::NAN, DOMINANCE_SLACK, format!("optimal POVM: {err}")))
        }
    };
    let probes = try_map_indexed(cfg.execution, opts.random_probes, |i| {
        let f = random_povm(d, m, cfg.seed.wrapping_add(0x9e37_79b9).wrapping_add(i as u64))?;
        gap(&f)
    })?;
    worst = probes.into_iter().fold(worst, f64::max);
    Ok(PropertyCheck::new(
        name,
        worst <= DOMINANCE_SLACK,
        worst,
        DOMINANCE_SLACK,
        format!("max I(X;Y) - log2 objective over {} POVMs", opts.random_probes + 1),
    ))
}

fn data_processing_check(
    e: &Ensemble,
    cfg: &AscentConfig,
    channel: Option<&KrausChannel>,
    base: &LeakageReport,
    opts: &VerifyOptions,
) -> Result<PropertyCheck> {
    let d = e.dim();
    let owned;
    let (channel, origin) = match channel {
        Some(c) => (c, "supplied channel"),
        None => {
            owned = random_channel(d, d, 3, cfg.seed ^ 0xc4a2_11e1)?;
            (&owned, "seeded random channel")
        }
    };
    let strong = AscentConfig { restarts: cfg.restarts.max(opts.data_processing_restarts), ..cfg.clone() };
    let before =
        if strong.restarts == cfg.restarts { base.leakage_bits } else { compute_leakage(e, &strong)?.leakage_bits };
    let after = compute_leakage(&e.map_channel(channel)?, &strong)?.leakage_bits;
    let excess = after - before;
    Ok(PropertyCheck::new(
        "data_processing",
        excess <= DATA_PROCESSING_SLACK,
        excess,
        DATA_PROCESSING_SLACK,
        format!("{origin}: {after:.6} bits after vs {before:.6} before"),
    ))
}

fn global_noise_check(e: &Ensemble, cfg: &AscentConfig, q: f64, opts: &VerifyOptions) -> Result<PropertyCheck> {
    let name = "global_noise_exactness";
    let d = e.dim();
    if d < 2 {
        return Ok(PropertyCheck::skipped(name, "dimension 1 has no depolarizing channel"));
    }
    let mut worst: f64 = 0.0;
    for &p in &opts.p_grid {
        let noisy = e.map_channel(&depolarizing_global(p, d)?)?;
        let direct = compute_leakage(&noisy, cfg)?.leakage_bits;
        let formula = noisy_leakage_global(q.max(0.0), p)?;
        worst = worst.max((direct - formula).abs());
    }
    Ok(PropertyCheck::new(
        name,
        worst <= GLOBAL_NOISE_TOL,
        worst,
        GLOBAL_NOISE_TOL,
        format!("max |direct - log2(p + (1-p) 2^Q)| over {} values of p", opts.p_grid.len()),
    ))
}

/// Qubit count `k` when `d = 2^k`.
pub fn qubit_count(d: usize) -> Option<usize> {
    (d >= 2 && d.is_power_of_two()).then(|| d.trailing_zeros() as usize)
}

fn local_noise_check(e: &Ensemble, cfg: &AscentConfig, q: f64, opts: &VerifyOptions) -> Result<PropertyCheck> {
    let name = "local_noise_bound";
    let Some(k) = qubit_count(e.dim()) else {
        return Ok(PropertyCheck::skipped(name, format!("dimension {} is not a power of two", e.dim())));
    };
    if k > crate::model::MAX_LOCAL_QUBITS {
        return Ok(PropertyCheck::skipped(name, format!("{k} qubits exceed the local channel limit")));
    }
    let mut worst = f64::NEG_INFINITY;
    for &p in &opts.p_grid {
        let noisy = e.map_channel(&depolarizing_local(p, k)?)?;
        let direct = compute_leakage(&noisy, cfg)?.leakage_bits;
        let bound = noisy_leakage_local_bound(q.max(0.0), p, k)?;
        worst = worst.max(direct - bound);
    }
    Ok(PropertyCheck::new(
        name,
        worst <= LOCAL_BOUND_SLACK,
        worst,
        LOCAL_BOUND_SLACK,
        format!("max direct - bound over {} values of p, k = {k}", opts.p_grid.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{encode_index, DensityOperator};

    #[test]
    fn qubit_counts() {
        assert_eq!(qubit_count(1), None);
        assert_eq!(qubit_count(2), Some(1));
        assert_eq!(qubit_count(6), None);
        assert_eq!(qubit_count(8), Some(3));
    }

    #[test]
    fn index2_with_identity_channel_passes() {
        let e = encode_index(2).unwrap();
        let r = verify_properties(&e, &AscentConfig::default(), Some(&KrausChannel::identity(2))).unwrap();
        assert!(r.all_passed(), "{:#?}", r.failures().collect::<Vec<_>>());
        let dp = r.checks.iter().find(|c| c.name == "data_processing").unwrap();
        assert!(dp.measured.abs() < 1e-3);
    }

    #[test]
    fn indistinguishable_pair_passes_independence() {
        let e = Ensemble::uniform(vec!["a".into(), "b".into()], vec![DensityOperator::maximally_mixed(2); 2]).unwrap();
        let opts = VerifyOptions { p_grid: vec![0.5], random_probes: 5, ..Default::default() };
        let r = verify_properties_with(&e, &AscentConfig { restarts: 2, ..Default::default() }, None, &opts).unwrap();
        assert!(r.all_passed(), "{:#?}", r.failures().collect::<Vec<_>>());
        assert!(r.leakage_bits.abs() < 1e-6);
    }

    #[test]
    fn corrupted_povm_fails() {
        let e = encode_index(2).unwrap();
        let opts =
            VerifyOptions { p_grid: vec![0.5], random_probes: 2, inject_corrupt_povm: true, ..Default::default() };
        let r = verify_properties_with(&e, &AscentConfig { restarts: 2, ..Default::default() }, None, &opts).unwrap();
        assert!(!r.all_passed());
        assert!(r.failures().any(|c| c.name == "optimal_povm"));
    }

    #[test]
    fn channel_dimension_is_checked() {
        let e = encode_index(2).unwrap();
        let c = KrausChannel::identity(3);
        assert!(matches!(verify_properties(&e, &AscentConfig::default(), Some(&c)), Err(Error::DimensionMismatch(_))));
    }
}
