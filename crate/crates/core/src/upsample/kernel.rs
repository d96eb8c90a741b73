use crate::error::{invalid, Result};

fn check_weights(weights: &[f64], what: &str) -> Result<()> {
    if weights.is_empty() {
        return Err(invalid(format!("{what} must have at least one tap")));
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(invalid(format!("{what} contains a non-finite weight")));
    }
    Ok(())
}

/// 1D transposed-convolution kernel.
///
/// Tap `j` sits at offset `j − ⌊K/2⌋` from the zero-inserted sample it spreads,
/// so supports nest as `K` grows. The optional parallel branch is a second,
/// smaller kernel with the same stride whose output is added to the main one.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    weights: Vec<f64>,
    stride: usize,
    parallel_small: Option<Vec<f64>>,
}

impl KernelSpec {
    pub fn new(weights: Vec<f64>, stride: usize) -> Result<Self> {
        check_weights(&weights, "kernel")?;
        if stride < 1 {
            return Err(invalid("stride must be at least 1"));
        }
        Ok(Self {
            weights,
            stride,
            parallel_small: None,
        })
    }

    /// Adds a parallel branch; its size may not exceed the main kernel's.
    pub fn with_parallel_small(mut self, weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights, "parallel kernel")?;
        if weights.len() > self.weights.len() {
            return Err(invalid(format!(
                "parallel kernel size {} exceeds main kernel size {}",
                weights.len(),
                self.weights.len()
            )));
        }
        self.parallel_small = Some(weights);
        Ok(self)
    }

    /// Kernel with a single unit tap at the anchor.
    pub fn delta(size: usize, stride: usize) -> Result<Self> {
        let mut w = vec![0.0; size];
        if size > 0 {
            w[size / 2] = 1.0;
        }
        Self::new(w, stride)
    }

    pub fn ones(size: usize, stride: usize) -> Result<Self> {
        Self::new(vec![1.0; size], stride)
    }

    /// Triangular kernel `1 − |m|/s` for `|m| < s`: linear interpolation at stride `s`.
    pub fn triangle(stride: usize) -> Result<Self> {
        if stride < 1 {
            return Err(invalid("stride must be at least 1"));
        }
        let s = stride as f64;
        let w = (1..2 * stride)
            .map(|j| 1.0 - (j as f64 - s).abs() / s)
            .collect();
        Self::new(w, stride)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn anchor(&self) -> usize {
        self.weights.len() / 2
    }

    pub fn parallel_small(&self) -> Option<&[f64]> {
        self.parallel_small.as_deref()
    }

    /// Main branch followed by the parallel branch, as `(weights, anchor)` pairs.
    pub(crate) fn branches(&self) -> impl Iterator<Item = (&[f64], usize)> {
        std::iter::once((self.weights.as_slice(), self.anchor()))
            .chain(self.parallel_small.as_deref().map(|w| (w, w.len() / 2)))
    }
}

/// Square 2D transposed-convolution kernel, row-major `K×K`, anchored at `(⌊K/2⌋, ⌊K/2⌋)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec2 {
    size: usize,
    weights: Vec<f64>,
    stride: usize,
    parallel_small: Option<(usize, Vec<f64>)>,
}

impl KernelSpec2 {
    pub fn new(size: usize, weights: Vec<f64>, stride: usize) -> Result<Self> {
        check_weights(&weights, "kernel")?;
        if weights.len() != size * size {
            return Err(invalid(format!(
                "2D kernel of size {size} needs {} weights, got {}",
                size * size,
                weights.len()
            )));
        }
        if stride < 1 {
            return Err(invalid("stride must be at least 1"));
        }
        Ok(Self {
            size,
            weights,
            stride,
            parallel_small: None,
        })
    }

    pub fn with_parallel_small(mut self, size: usize, weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights, "parallel kernel")?;
        if weights.len() != size * size {
            return Err(invalid(format!(
                "parallel 2D kernel of size {size} needs {} weights",
                size * size
            )));
        }
        if size > self.size {
            return Err(invalid(format!(
                "parallel kernel size {size} exceeds main kernel size {}",
                self.size
            )));
        }
        self.parallel_small = Some((size, weights));
        Ok(self)
    }

    /// Outer product `col ⊗ row` of two 1D kernels of equal size and stride.
    pub fn outer(col: &KernelSpec, row: &KernelSpec) -> Result<Self> {
        if col.size() != row.size() || col.stride() != row.stride() {
            return Err(invalid(
                "outer product needs kernels of equal size and stride",
            ));
        }
        let w = col
            .weights()
            .iter()
            .flat_map(|a| row.weights().iter().map(move |b| a * b))
            .collect();
        Self::new(col.size(), w, col.stride())
    }

    pub fn delta(size: usize, stride: usize) -> Result<Self> {
        let mut w = vec![0.0; size * size];
        if size > 0 {
            let c = size / 2;
            w[c * size + c] = 1.0;
        }
        Self::new(size, w, stride)
    }

    pub fn ones(size: usize, stride: usize) -> Result<Self> {
        Self::new(size, vec![1.0; size * size], stride)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn anchor(&self) -> usize {
        self.size / 2
    }

    pub fn parallel_small(&self) -> Option<(usize, &[f64])> {
        self.parallel_small
            .as_ref()
            .map(|(k, w)| (*k, w.as_slice()))
    }

    pub(crate) fn branches(&self) -> impl Iterator<Item = (usize, &[f64])> {
        std::iter::once((self.size, self.weights.as_slice())).chain(
            self.parallel_small
                .as_ref()
                .map(|(k, w)| (*k, w.as_slice())),
        )
    }
}
