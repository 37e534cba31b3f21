//! Field files: a JSON header `<base>.json` next to raw little-endian
//! interleaved `(re, im)` f64 samples in `<base>.bin`.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GridSpec, ScalarField, Space, DIM};
use crate::error::{Error, Result};

pub const DTYPE: &str = "c128";
pub const LAYOUT: &str = "row-major z-fastest";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub n: usize,
    #[serde(rename = "N")]
    pub points: usize,
    #[serde(rename = "L")]
    pub half_width: f64,
    pub space: Space,
    pub dtype: String,
    pub layout: String,
}

/// Strips a trailing `.json` or `.bin` so either file of a pair names it.
pub fn base_path(path: &Path) -> PathBuf {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") | Some("bin") => path.with_extension(""),
        _ => path.to_path_buf(),
    }
}

fn with_ext(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn header_path(path: &Path) -> PathBuf {
    with_ext(&base_path(path), "json")
}

pub fn data_path(path: &Path) -> PathBuf {
    with_ext(&base_path(path), "bin")
}

pub fn write_field(path: &Path, field: &ScalarField) -> Result<()> {
    let header = FieldHeader {
        n: DIM,
        points: field.spec().n(),
        half_width: field.spec().half_width(),
        space: field.space(),
        dtype: DTYPE.into(),
        layout: LAYOUT.into(),
    };
    fs::write(header_path(path), serde_json::to_string_pretty(&header)?)?;
    let mut bytes = Vec::with_capacity(field.values().len() * 16);
    for v in field.values() {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    fs::write(data_path(path), bytes)?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<ScalarField> {
    let header: FieldHeader = serde_json::from_str(&fs::read_to_string(header_path(path))?)?;
    if header.n != DIM {
        return Err(Error::Parse(format!("only n=3 fields are supported, got n={}", header.n)));
    }
    if header.dtype != DTYPE {
        return Err(Error::Parse(format!("unsupported dtype {:?}", header.dtype)));
    }
    if header.layout != LAYOUT {
        return Err(Error::Parse(format!("unsupported layout {:?}", header.layout)));
    }
    let spec = GridSpec::new(header.points, header.half_width)?;
    let bytes = fs::read(data_path(path))?;
    if bytes.len() != spec.len() * 16 {
        return Err(Error::Parse(format!(
            "expected {} bytes of samples, found {}",
            spec.len() * 16,
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    ScalarField::from_values(spec, header.space, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{sample_gaussian, GaussianParams};

    #[test]
    fn round_trips_bit_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GridSpec::new(16, 4.0).unwrap();
        let p = GaussianParams { modulation: [1.0, 0.0, -0.5], ..GaussianParams::centered(1.0) };
        let f = sample_gaussian(spec, &p);
        let base = dir.path().join("f");
        write_field(&base, &f).unwrap();
        let back = read_field(&dir.path().join("f.json")).unwrap();
        assert_eq!(back, f);
        let header: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("f.json")).unwrap()).unwrap();
        assert_eq!(header["N"], 16);
        assert_eq!(header["space"], "position");
        assert_eq!(header["layout"], "row-major z-fastest");
    }

    #[test]
    fn truncated_data_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GridSpec::new(16, 4.0).unwrap();
        let base = dir.path().join("g");
        write_field(&base, &ScalarField::zeros(spec, Space::Position)).unwrap();
        fs::write(data_path(&base), [0u8; 32]).unwrap();
        assert!(matches!(read_field(&base), Err(Error::Parse(_))));
    }
}
