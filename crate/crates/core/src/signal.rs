//! Real-valued sample containers.

use crate::error::{invalid, Error, Result};

/// A finite, non-empty 1D sample array.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
}

impl Signal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(invalid("signal must contain at least one sample"));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("sample {i} is not finite")));
        }
        Ok(Self { samples })
    }

    /// Unit impulse of length `n` at index 0.
    pub fn impulse(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// The `j`-th standard basis signal of length `n`.
    pub fn basis(n: usize, j: usize) -> Result<Self> {
        if j >= n {
            return Err(invalid(format!(
                "basis index {j} out of range for length {n}"
            )));
        }
        let mut samples = vec![0.0; n];
        samples[j] = 1.0;
        Self::new(samples)
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &Signal, b: f64) -> Result<Signal> {
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("length {}", self.len()),
                actual: format!("length {}", other.len()),
            });
        }
        Signal::new(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }
}

impl TryFrom<Vec<f64>> for Signal {
    type Error = Error;

    fn try_from(samples: Vec<f64>) -> Result<Self> {
        Signal::new(samples)
    }
}

/// An `H×W×C` real image stored row-major with interleaved channels.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(invalid(format!(
                "image dimensions must be positive, got {height}x{width}x{channels}"
            )));
        }
        if data.len() != height * width * channels {
            return Err(Error::ShapeMismatch {
                expected: format!("{} samples", height * width * channels),
                actual: format!("{} samples", data.len()),
            });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("image sample {i} is not finite")));
        }
        Ok(Self {
            height,
            width,
            channels,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize, channels: usize) -> Result<Self> {
        Self::new(
            height,
            width,
            channels,
            vec![0.0; height * width * channels],
        )
    }

    /// Builds an image from per-channel row-major planes.
    pub fn from_planes(height: usize, width: usize, planes: &[Vec<f64>]) -> Result<Self> {
        let channels = planes.len();
        if channels == 0 {
            return Err(invalid("at least one channel plane is required"));
        }
        for p in planes {
            if p.len() != height * width {
                return Err(Error::ShapeMismatch {
                    expected: format!("{} samples per plane", height * width),
                    actual: format!("{} samples", p.len()),
                });
            }
        }
        let mut data = Vec::with_capacity(height * width * channels);
        for i in 0..height * width {
            data.extend(planes.iter().map(|p| p[i]));
        }
        Self::new(height, width, channels, data)
    }

    /// Single-channel image whose pixel `(h, w)` is `col[h]·row[w]`.
    pub fn outer(col: &Signal, row: &Signal) -> Result<Self> {
        let data = col
            .samples()
            .iter()
            .flat_map(|a| row.samples().iter().map(move |b| a * b))
            .collect();
        Self::new(col.len(), row.len(), 1, data)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.height, self.width, self.channels)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, h: usize, w: usize, c: usize) -> f64 {
        self.data[(h * self.width + w) * self.channels + c]
    }

    /// Row-major copy of one channel.
    pub fn plane(&self, c: usize) -> Vec<f64> {
        assert!(c < self.channels, "channel {c} out of range");
        self.data
            .iter()
            .skip(c)
            .step_by(self.channels)
            .copied()
            .collect()
    }

    pub fn planes(&self) -> Vec<Vec<f64>> {
        (0..self.channels).map(|c| self.plane(c)).collect()
    }

    pub(crate) fn check_same_shape(&self, other: &Image) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: format!("{:?}", self.shape()),
                actual: format!("{:?}", other.shape()),
            });
        }
        Ok(())
    }

    /// Elementwise `self − other`.
    pub fn sub(&self, other: &Image) -> Result<Image> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Image::new(self.height, self.width, self.channels, data)
    }

    /// Adds `value` to every sample.
    pub fn offset(&self, value: f64) -> Result<Image> {
        Image::new(
            self.height,
            self.width,
            self.channels,
            self.data.iter().map(|v| v + value).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(Signal::new(vec![]).is_err());
        assert!(Signal::new(vec![1.0, f64::NAN]).is_err());
        assert!(Signal::new(vec![f64::INFINITY]).is_err());
        assert!(Image::new(1, 1, 1, vec![f64::NAN]).is_err());
        assert!(Image::new(0, 1, 1, vec![]).is_err());
        assert!(Image::new(2, 2, 1, vec![0.0; 3]).is_err());
    }

    #[test]
    fn planes_round_trip() {
        let img = Image::new(2, 2, 2, (0..8).map(f64::from).collect()).unwrap();
        assert_eq!(img.plane(0), vec![0.0, 2.0, 4.0, 6.0]);
        assert_eq!(img.plane(1), vec![1.0, 3.0, 5.0, 7.0]);
        let back = Image::from_planes(2, 2, &img.planes()).unwrap();
        assert_eq!(back, img);
        assert_eq!(img.get(1, 0, 1), 5.0);
    }
}
