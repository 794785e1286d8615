//! Ensemble and channel loading.

use std::fs;
use std::path::Path;

use qleak_core::leakage::qubit_count;
use qleak_core::model::{
    depolarizing_global, depolarizing_local, preset, preset_note, Ensemble, KrausChannel, PRESET_NAMES,
};
use qleak_core::numerics::{CMatrix, C64};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{io_error, CliError, CliResult};

/// A resolved `--ensemble` argument.
pub struct LoadedEnsemble {
    pub ensemble: Ensemble,
    pub source: String,
    pub sha256: String,
    pub notes: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Loads `builtin:NAME` or a JSON file.
pub fn load_ensemble(arg: &str) -> CliResult<LoadedEnsemble> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        let ensemble = preset(name).ok_or_else(|| {
            CliError::Input(format!("unknown builtin '{name}' (expected one of {})", PRESET_NAMES.join(", ")))
        })?;
        let sha256 = sha256_hex(ensemble.to_json_string().as_bytes());
        let notes = preset_note(name).map(|n| vec![n.to_string()]).unwrap_or_default();
        return Ok(LoadedEnsemble { ensemble, source: arg.to_string(), sha256, notes });
    }
    let bytes = fs::read(arg).map_err(|e| io_error(&format!("cannot read {arg}"), e))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| io_error(arg, e))?;
    let ensemble = Ensemble::from_json_str(text).map_err(CliError::input)?;
    Ok(LoadedEnsemble { ensemble, source: arg.to_string(), sha256: sha256_hex(&bytes), notes: vec![] })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelFileKind {
    Global,
    Local,
    Kraus,
}

/// `{"kind": "global"|"local"|"kraus", "p": number, "kraus_ops": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub kind: ChannelFileKind,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub kraus_ops: Option<Vec<Vec<Vec<[f64; 2]>>>>,
}

impl ChannelFile {
    pub fn build(&self, dim: usize) -> CliResult<KrausChannel> {
        let p = || self.p.ok_or_else(|| CliError::Input(format!("channel kind {:?} needs \"p\"", self.kind)));
        match self.kind {
            ChannelFileKind::Global => depolarizing_global(p()?, dim).map_err(CliError::input),
            ChannelFileKind::Local => {
                let k = qubit_count(dim).ok_or_else(|| {
                    CliError::Unsupported(format!("local noise needs a power-of-two dimension, got {dim}"))
                })?;
                depolarizing_local(p()?, k).map_err(CliError::input)
            }
            ChannelFileKind::Kraus => {
                let ops = self
                    .kraus_ops
                    .as_ref()
                    .ok_or_else(|| CliError::Input("channel kind kraus needs \"kraus_ops\"".into()))?;
                let mats = ops
                    .iter()
                    .enumerate()
                    .map(|(j, rows)| {
                        let r = rows.len();
                        let c = rows.first().map_or(0, |row| row.len());
                        if rows.iter().any(|row| row.len() != c) {
                            return Err(CliError::Input(format!("Kraus operator {j} has ragged rows")));
                        }
                        let entries: Vec<C64> = rows.iter().flatten().map(|[re, im]| C64::new(*re, *im)).collect();
                        CMatrix::from_row_major(r, c, &entries).map_err(CliError::input)
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                let channel = KrausChannel::new(mats).map_err(CliError::input)?;
                if channel.dim_in() != dim {
                    return Err(CliError::Input(format!(
                        "channel input dimension {} does not match ensemble dimension {dim}",
                        channel.dim_in()
                    )));
                }
                Ok(channel)
            }
        }
    }
}

pub fn load_channel(path: &Path, dim: usize) -> CliResult<KrausChannel> {
    let text = fs::read_to_string(path).map_err(|e| io_error(&format!("cannot read {}", path.display()), e))?;
    let file: ChannelFile =
        serde_json::from_str(&text).map_err(|e| io_error(&format!("malformed channel file {}", path.display()), e))?;
    file.build(dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_presets_load() {
        let l = load_ensemble("builtin:amplitude3").unwrap();
        assert_eq!(l.ensemble.dim(), 8);
        assert_eq!(l.notes.len(), 1);
        assert_eq!(l.sha256.len(), 64);
        assert!(matches!(load_ensemble("builtin:nope"), Err(CliError::Input(_))));
        assert!(matches!(load_ensemble("/definitely/not/here.json"), Err(CliError::Input(_))));
    }

    #[test]
    fn channel_files() {
        let global: ChannelFile = serde_json::from_str(r#"{"kind":"global","p":0.3}"#).unwrap();
        assert_eq!(global.build(4).unwrap().dim_in(), 4);
        let local: ChannelFile = serde_json::from_str(r#"{"kind":"local","p":0.3}"#).unwrap();
        assert_eq!(local.build(4).unwrap().kraus_ops().len(), 16);
        assert!(matches!(local.build(3), Err(CliError::Unsupported(_))));
        let missing: ChannelFile = serde_json::from_str(r#"{"kind":"global"}"#).unwrap();
        assert!(matches!(missing.build(2), Err(CliError::Input(_))));
        let kraus: ChannelFile =
            serde_json::from_str(r#"{"kind":"kraus","kraus_ops":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#).unwrap();
        assert_eq!(kraus.build(2).unwrap(), KrausChannel::identity(2));
        assert!(kraus.build(3).is_err());
        let lossy: ChannelFile =
            serde_json::from_str(r#"{"kind":"kraus","kraus_ops":[[[[0.5,0],[0,0]],[[0,0],[1,0]]]]}"#).unwrap();
        assert!(matches!(lossy.build(2), Err(CliError::Input(_))));
    }
}
