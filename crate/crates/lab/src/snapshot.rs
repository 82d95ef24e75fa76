//! Flat little-endian binary export with a JSON sidecar.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Sidecar {
    pub kind: String,
    /// Row-major shape of the stored array.
    pub shape: Vec<usize>,
    pub n_per_axis: usize,
    pub bound: f64,
    /// `(ρ, u₁, u₂, u₃, θ)` of the reference state.
    pub state: [f64; 5],
    pub extra: std::collections::BTreeMap<String, f64>,
}

/// Writes `<stem>.bin` and `<stem>.json`; returns both paths.
pub fn write_binary(dir: &Path, stem: &str, values: &[f64], sidecar: &Sidecar) -> LabResult<(PathBuf, PathBuf)> {
    if sidecar.shape.iter().product::<usize>() != values.len() {
        return Err(LabError::Usage(format!("{stem}: shape does not match data length")));
    }
    let bin = dir.join(format!("{stem}.bin"));
    let json = dir.join(format!("{stem}.json"));
    let bytes: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
    std::fs::write(&bin, bytes)?;
    std::fs::write(&json, serde_json::to_string_pretty(sidecar)? + "\n")?;
    Ok((bin, json))
}

pub fn read_binary(dir: &Path, stem: &str) -> LabResult<(Vec<f64>, Sidecar)> {
    let sidecar: Sidecar = serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{stem}.json")))?)?;
    let bytes = std::fs::read(dir.join(format!("{stem}.bin")))?;
    if bytes.len() != 8 * sidecar.shape.iter().product::<usize>() {
        return Err(LabError::Usage(format!("{stem}.bin has the wrong length")));
    }
    let values = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8"))).collect();
    Ok((values, sidecar))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let side = Sidecar {
            kind: "test".into(),
            shape: vec![2, 3],
            n_per_axis: 4,
            bound: 2.0,
            state: [1.0, 0.0, 0.0, 0.0, 1.5],
            extra: Default::default(),
        };
        let data = [1.0, -2.0, 3.5, 1e-300, f64::MAX, 0.1];
        write_binary(dir.path(), "op", &data, &side).unwrap();
        let (back, s) = read_binary(dir.path(), "op").unwrap();
        assert_eq!(back, data);
        assert_eq!(s, side);
        assert!(write_binary(dir.path(), "bad", &data[..5], &side).is_err());
    }
}
