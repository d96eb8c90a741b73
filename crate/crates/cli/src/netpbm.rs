//! Binary PGM (P5) and PPM (P6) with 8-bit samples.

use std::fs;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// An 8-bit raster with 1 (gray) or 3 (RGB) interleaved channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub bytes: Vec<u8>,
}

/// Maps `values` linearly onto `0..=255`; a constant array maps to all zeros.
pub fn quantize(values: &[f64]) -> Vec<u8> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    values
        .iter()
        .map(|&v| {
            if span > 0.0 && span.is_finite() {
                ((v - lo) / span * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                0
            }
        })
        .collect()
}

impl Raster {
    /// Quantizes interleaved `values` of shape `height × width × channels`.
    pub fn from_values(
        height: usize,
        width: usize,
        channels: usize,
        values: &[f64],
    ) -> CliResult<Self> {
        if channels != 1 && channels != 3 {
            return Err(CliError::Data(format!(
                "netpbm supports 1 or 3 channels, got {channels}"
            )));
        }
        if values.len() != height * width * channels || values.is_empty() {
            return Err(CliError::Data(format!(
                "{} values do not fill {height}x{width}x{channels}",
                values.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            bytes: quantize(values),
        })
    }

    pub fn encode(&self) -> Vec<u8> {
        let magic = if self.channels == 3 { "P6" } else { "P5" };
        let mut out = format!("{magic} {} {} 255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.bytes);
        out
    }

    pub fn decode(data: &[u8]) -> CliResult<Self> {
        let bad = |msg: &str| CliError::Data(format!("netpbm: {msg}"));
        let mut pos = 0;
        let mut fields = Vec::with_capacity(4);
        while fields.len() < 4 {
            while pos < data.len() && (data[pos].is_ascii_whitespace() || data[pos] == b'#') {
                if data[pos] == b'#' {
                    while pos < data.len() && data[pos] != b'\n' {
                        pos += 1;
                    }
                } else {
                    pos += 1;
                }
            }
            let start = pos;
            while pos < data.len() && !data[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(bad("truncated header"));
            }
            fields
                .push(std::str::from_utf8(&data[start..pos]).map_err(|_| bad("non-ASCII header"))?);
        }
        // exactly one whitespace byte separates the header from the raster
        pos += 1;
        let channels = match fields[0] {
            "P5" => 1,
            "P6" => 3,
            other => return Err(bad(&format!("unsupported magic `{other}`"))),
        };
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| bad(&format!("bad header number `{s}`")))
        };
        let (width, height, maxval) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
        if maxval != 255 {
            return Err(bad(&format!("maxval {maxval} is not 255")));
        }
        let need = width * height * channels;
        let raster = data.get(pos..).unwrap_or(&[]);
        if raster.len() != need {
            return Err(bad(&format!(
                "expected {need} raster bytes, found {}",
                raster.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            bytes: raster.to_vec(),
        })
    }

    /// Samples as `f64` in `0..=255`, interleaved.
    pub fn values(&self) -> Vec<f64> {
        self.bytes.iter().map(|&b| f64::from(b)).collect()
    }
}

pub fn write_netpbm(path: &Path, raster: &Raster) -> CliResult<()> {
    fs::write(path, raster.encode()).map_err(|e| CliError::io(path, e))
}

pub fn read_netpbm(path: &Path) -> CliResult<Raster> {
    let data = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Raster::decode(&data).map_err(|e| match e {
        CliError::Data(msg) => CliError::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Renders a 1D array as a `height`-row bar strip: column `i` is lit from the
/// zero line up (or down) to `values[i]`.
pub fn bar_strip(values: &[f64], height: usize) -> CliResult<Raster> {
    let lo = values.iter().copied().fold(0.0f64, f64::min);
    let hi = values.iter().copied().fold(0.0f64, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let row_of = |v: f64| ((hi - v) / span * (height - 1) as f64).round() as usize;
    let zero = row_of(0.0);
    let w = values.len();
    let mut px = vec![0.0; height * w];
    for (i, &v) in values.iter().enumerate() {
        let r = row_of(v);
        for row in r.min(zero)..=r.max(zero) {
            px[row * w + i] = 1.0;
        }
    }
    Raster::from_values(height, w, 1, &px)
}
