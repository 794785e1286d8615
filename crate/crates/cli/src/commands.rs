use std::fs;
use std::path::Path;

use qleak_core::leakage::{
    compute_leakage, noisy_leakage_global, noisy_leakage_local_bound, qubit_count, verify_properties_with,
    AscentConfig, LeakageReport, PropertyReport, TracePoint, VerifyOptions,
};
use qleak_core::model::{depolarizing_global, depolarizing_local, KrausChannel};
use qleak_core::par::Execution;
use serde::{Deserialize, Serialize};

use crate::args::{ChannelKind, ComputeArgs, ExportArgs, SweepArgs, VerifyArgs};
use crate::error::{io_error, CliError, CliResult};
use crate::input::{load_channel, load_ensemble, sha256_hex};
use crate::manifest::{Clock, InputRecord, RunManifest};

type Matrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComputeOutput {
    pub leakage_bits: f64,
    pub objective: f64,
    pub ceiling_bits: f64,
    pub best_restart: usize,
    pub restart_leakages: Vec<f64>,
    pub converged: Vec<bool>,
    pub iterations: Vec<usize>,
    pub optimal_povm: Vec<Matrix>,
    pub manifest: RunManifest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub direct_leakage_bits: f64,
    pub formula_bits: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub channel: String,
    pub noiseless_leakage_bits: f64,
    pub rows: Vec<SweepRow>,
    pub manifest: RunManifest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    #[serde(flatten)]
    pub report: PropertyReport,
    pub manifest: RunManifest,
}

/// Leakage below this is treated as zero when forming noisy/noiseless ratios.
const RATIO_FLOOR: f64 = 1e-12;

fn validated(cfg: AscentConfig) -> CliResult<AscentConfig> {
    cfg.validate().map_err(CliError::input)?;
    Ok(cfg)
}

fn create_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| io_error(&format!("cannot create {}", dir.display()), e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    fs::write(path, text).map_err(|e| io_error(&format!("cannot write {}", path.display()), e))
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let fail = |e: csv::Error| io_error(&format!("cannot write {}", path.display()), e);
    let mut w = csv::Writer::from_path(path).map_err(fail)?;
    for row in rows {
        w.serialize(row).map_err(fail)?;
    }
    w.flush().map_err(|e| io_error(&format!("cannot write {}", path.display()), e))
}

fn compute_output(report: &LeakageReport, manifest: RunManifest) -> ComputeOutput {
    ComputeOutput {
        leakage_bits: report.leakage_bits,
        objective: report.objective,
        ceiling_bits: report.ceiling_bits,
        best_restart: report.best_restart,
        restart_leakages: report.restart_leakages.clone(),
        converged: report.converged(),
        iterations: report.traces.iter().map(|t| t.iterations()).collect(),
        optimal_povm: report.optimal_povm.elements().iter().map(|f| f.to_rows()).collect(),
        manifest,
    }
}

pub fn compute(args: &ComputeArgs, exec: Execution) -> CliResult<ComputeOutput> {
    let clock = Clock::start();
    let input = load_ensemble(&args.ensemble)?;
    let cfg = validated(args.ascent.config(exec))?;
    let report = compute_leakage(&input.ensemble, &cfg).map_err(CliError::compute)?;

    create_dir(&args.out)?;
    for (r, trace) in report.traces.iter().enumerate() {
        let path = args.out.join(format!("trace_restart_{r:02}.csv"));
        write_csv::<TracePoint>(&path, &trace.points)?;
    }
    let mut manifest = RunManifest::new("compute", &cfg, &input, &clock);
    manifest.timings = clock.timings();
    let out = compute_output(&report, manifest);
    write_json(&args.out.join("result.json"), &out)?;
    Ok(out)
}

fn p_grid(start: f64, end: f64, steps: usize) -> CliResult<Vec<f64>> {
    let in_unit = |p: f64| (0.0..=1.0).contains(&p);
    if !in_unit(start) || !in_unit(end) || start > end {
        return Err(CliError::Input(format!("need 0 <= p-start <= p-end <= 1, got [{start}, {end}]")));
    }
    if steps < 2 {
        return Err(CliError::Input(format!("p-steps must be at least 2, got {steps}")));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|i| if i + 1 == steps { end } else { start + (end - start) * i as f64 / last }).collect())
}

pub fn noise_sweep(args: &SweepArgs, exec: Execution) -> CliResult<SweepOutput> {
    let clock = Clock::start();
    let input = load_ensemble(&args.ensemble)?;
    let grid = p_grid(args.p_start, args.p_end, args.p_steps)?;
    let cfg = validated(args.ascent.config(exec))?;
    let d = input.ensemble.dim();
    let qubits = match args.channel {
        ChannelKind::Global => None,
        ChannelKind::Local => Some(
            qubit_count(d)
                .ok_or_else(|| CliError::Unsupported(format!("local noise needs a power-of-two dimension, got {d}")))?,
        ),
    };

    let q0 = compute_leakage(&input.ensemble, &cfg).map_err(CliError::compute)?.leakage_bits;
    let mut rows = Vec::with_capacity(grid.len());
    for &p in &grid {
        let (channel, formula) = match qubits {
            None => (depolarizing_global(p, d), noisy_leakage_global(q0, p)),
            Some(k) => (depolarizing_local(p, k), noisy_leakage_local_bound(q0, p, k)),
        };
        let channel: KrausChannel = channel.map_err(CliError::compute)?;
        let noisy = input.ensemble.map_channel(&channel).map_err(CliError::compute)?;
        let direct = compute_leakage(&noisy, &cfg).map_err(CliError::compute)?.leakage_bits;
        let ratio = if q0 <= RATIO_FLOOR { 1.0 } else { direct / q0 };
        rows.push(SweepRow {
            p,
            direct_leakage_bits: direct,
            formula_bits: formula.map_err(CliError::compute)?,
            ratio,
        });
    }

    create_dir(&args.out)?;
    write_csv(&args.out.join("noise_sweep.csv"), &rows)?;
    let mut manifest = RunManifest::new("noise-sweep", &cfg, &input, &clock);
    manifest.timings = clock.timings();
    let channel = match args.channel {
        ChannelKind::Global => "global",
        ChannelKind::Local => "local",
    };
    let out = SweepOutput { channel: channel.to_string(), noiseless_leakage_bits: q0, rows, manifest };
    write_json(&args.out.join("noise_sweep.json"), &out)?;
    Ok(out)
}

pub fn verify(args: &VerifyArgs, exec: Execution) -> CliResult<VerifyOutput> {
    let clock = Clock::start();
    let input = load_ensemble(&args.ensemble)?;
    let cfg = validated(args.ascent.config(exec))?;
    let (channel, channel_record) = match &args.channel_file {
        Some(path) => {
            let channel = load_channel(path, input.ensemble.dim())?;
            let bytes = fs::read(path).map_err(|e| io_error(&format!("cannot read {}", path.display()), e))?;
            let record = InputRecord { path: path.display().to_string(), sha256: sha256_hex(&bytes) };
            (Some(channel), Some(record))
        }
        None => (None, None),
    };
    let opts = VerifyOptions { inject_corrupt_povm: args.inject_corrupt_povm, ..VerifyOptions::default() };
    let report = verify_properties_with(&input.ensemble, &cfg, channel.as_ref(), &opts).map_err(CliError::compute)?;

    print_table(&report);
    create_dir(&args.out)?;
    let mut manifest = RunManifest::new("verify", &cfg, &input, &clock);
    manifest.channel = channel_record;
    manifest.timings = clock.timings();
    let out = VerifyOutput { report, manifest };
    write_json(&args.out.join("verify_report.json"), &out)?;
    Ok(out)
}

fn print_table(report: &PropertyReport) {
    println!("leakage {:.9} bits (ceiling {:.9})", report.leakage_bits, report.ceiling_bits);
    println!("{:<30} {:<6} {:>14} {:>14}  detail", "check", "result", "measured", "bound");
    for c in &report.checks {
        let status = if c.skipped {
            "SKIP"
        } else if c.passed {
            "PASS"
        } else {
            "FAIL"
        };
        println!("{:<30} {:<6} {:>14.6e} {:>14.6e}  {}", c.name, status, c.measured, c.bound, c.detail);
    }
}

pub fn export(args: &ExportArgs) -> CliResult<String> {
    Ok(load_ensemble(&args.ensemble)?.ensemble.to_json_string())
}
