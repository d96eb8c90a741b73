//! Test-only oracles, independent of the library's transform code.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;
use upspec::{Image, Signal};

/// SplitMix64, used to draw reproducible test signals.
pub struct SplitMix(u64);

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (2.0 / (1u64 << 53) as f64) - 1.0
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn signal(&mut self, n: usize) -> Signal {
        Signal::new((0..n).map(|_| self.uniform()).collect()).unwrap()
    }

    pub fn image(&mut self, h: usize, w: usize, c: usize) -> Image {
        Image::new(h, w, c, (0..h * w * c).map(|_| self.uniform()).collect()).unwrap()
    }
}

/// O(N²) DFT straight from the sum.
pub fn brute_dft(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(j, &v)| Complex64::from_polar(v, -2.0 * PI * (j * k % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

/// O((HW)²) 2D DFT of a row-major plane.
pub fn brute_dft2(h: usize, w: usize, plane: &[f64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); h * w];
    for ky in 0..h {
        for kx in 0..w {
            let mut acc = Complex64::new(0.0, 0.0);
            for y in 0..h {
                for x in 0..w {
                    let phase = (ky * y % h) as f64 / h as f64 + (kx * x % w) as f64 / w as f64;
                    acc += Complex64::from_polar(plane[y * w + x], -2.0 * PI * phase);
                }
            }
            out[ky * w + kx] = acc;
        }
    }
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_complex_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Samples of the ideal periodic interpolation kernel for an `n`-point
/// signal upsampled by `r`: `(1/N)·Σ_{|k|<N/2} e^{2πikp/M}` plus the split
/// Nyquist pair for even `n`, summed directly.
pub fn ideal_kernel(n: usize, r: usize) -> Vec<f64> {
    let m = n * r;
    (0..m)
        .map(|p| {
            let mut acc = 0.0;
            let half = n as i64 / 2;
            for k in -half..=half {
                let weight = if n.is_multiple_of(2) && k.abs() == half {
                    0.5
                } else {
                    1.0
                };
                if n % 2 == 1 && k.abs() > (n as i64 - 1) / 2 {
                    continue;
                }
                acc += weight * (2.0 * PI * (k * p as i64) as f64 / m as f64).cos();
            }
            acc / n as f64
        })
        .collect()
}
