//! Parameter checkpoints: a HYCO container with one (weights, biases)
//! section per layer, plus a JSON sidecar at `<path>.json` describing the
//! architecture.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read};
use std::path::{Path, PathBuf};

use hyco_core::fieldio::{
    read_f64_vec, read_header, read_u32, write_f64_slice, write_header, write_u32,
};
use hyco_core::CoreError;

use crate::error::NnError;
use crate::mlp::{MLPConfig, MLPParams};

/// Container version for parameter checkpoints (field files use version 1).
pub const CHECKPOINT_FORMAT_VERSION: u32 = 2;

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes `<path>` (binary sections) and `<path>.json` (config sidecar).
pub fn save_checkpoint(params: &MLPParams, path: &Path) -> Result<(), NnError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_header(&mut w, CHECKPOINT_FORMAT_VERSION)?;
    write_u32(&mut w, params.layers().len() as u32)?;
    for layer in params.layers() {
        write_u32(&mut w, layer.out_dim as u32)?;
        write_u32(&mut w, layer.in_dim as u32)?;
        write_f64_slice(&mut w, &layer.w)?;
        write_f64_slice(&mut w, &layer.b)?;
    }
    drop(w);
    let sidecar = serde_json::to_string_pretty(params.config())?;
    std::fs::write(sidecar_path(path), sidecar)?;
    Ok(())
}

/// Loads a checkpoint and its sidecar, validating shapes against the config.
pub fn load_checkpoint(path: &Path) -> Result<MLPParams, NnError> {
    let sidecar = std::fs::read_to_string(sidecar_path(path))?;
    let config: MLPConfig = serde_json::from_str(&sidecar)?;

    let mut r = BufReader::new(File::open(path)?);
    let version = read_header(&mut r)?;
    if version != CHECKPOINT_FORMAT_VERSION {
        return Err(NnError::Core(CoreError::UnsupportedVersion(version)));
    }
    let n_layers = read_u32(&mut r)? as usize;
    let mut layers = Vec::with_capacity(n_layers);
    for _ in 0..n_layers {
        let out_dim = read_u32(&mut r)? as usize;
        let in_dim = read_u32(&mut r)? as usize;
        let w = read_f64_vec(&mut r, out_dim * in_dim)?;
        let b = read_f64_vec(&mut r, out_dim)?;
        layers.push(crate::mlp::DenseLayer {
            in_dim,
            out_dim,
            w,
            b,
        });
    }
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(NnError::Core(CoreError::Truncated));
    }
    MLPParams::from_layers(config, layers)
}
