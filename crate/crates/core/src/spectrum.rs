//! Discrete Fourier analysis.
//!
//! The forward transform is unnormalized with kernel `e^{-2πi·jk/N}`; the
//! inverse carries the `1/N`. Any length is accepted. Transforms are computed
//! with a mixed-radix FFT, but the contract is the plain DFT sum.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid, Error, Result};
use crate::signal::{Image, Signal};

/// Largest imaginary part `idft` silently discards.
pub const IMAG_RESIDUE_THRESHOLD: f64 = 1e-9;

/// Default floor added before taking `log10` of a magnitude.
pub const DEFAULT_LOG_FLOOR: f64 = 1e-12;

/// Frequency index layout of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Position `k` holds frequency `k`, `k = 0..len`.
    Unshifted,
    /// Position `i` holds frequency `i − ⌊len/2⌋`.
    Centered,
}

/// 1D complex spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    coefficients: Vec<Complex64>,
    convention: Convention,
}

impl Spectrum {
    pub fn new(coefficients: Vec<Complex64>, convention: Convention) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(invalid("spectrum must contain at least one coefficient"));
        }
        Ok(Self {
            coefficients,
            convention,
        })
    }

    /// Unshifted spectrum from real coefficients.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            Convention::Unshifted,
        )
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm()).collect()
    }

    /// Signed frequency held at `position`, honouring the convention.
    /// For unshifted spectra indices above `len/2` are reported as negative.
    pub fn frequency(&self, position: usize) -> i64 {
        let n = self.len() as i64;
        let p = position as i64;
        match self.convention {
            Convention::Centered => p - n / 2,
            Convention::Unshifted => {
                if p < n - n / 2 {
                    p
                } else {
                    p - n
                }
            }
        }
    }
}

/// 2D complex spectrum of one channel, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2 {
    rows: usize,
    cols: usize,
    coefficients: Vec<Complex64>,
    convention: Convention,
}

impl Spectrum2 {
    pub fn new(
        rows: usize,
        cols: usize,
        coefficients: Vec<Complex64>,
        convention: Convention,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid("2D spectrum dimensions must be positive"));
        }
        if coefficients.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} coefficients", rows * cols),
                actual: format!("{}", coefficients.len()),
            });
        }
        Ok(Self {
            rows,
            cols,
            coefficients,
            convention,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.coefficients[row * self.cols + col]
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm()).collect()
    }
}

fn transform_in_place(buf: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    fft.process(buf);
}

/// Unnormalized forward transform of complex data.
pub fn dft_complex(data: &[Complex64]) -> Vec<Complex64> {
    let mut buf = data.to_vec();
    if !buf.is_empty() {
        transform_in_place(&mut buf, false);
    }
    buf
}

/// Inverse transform of complex data, including the `1/N`.
pub fn idft_complex(data: &[Complex64]) -> Vec<Complex64> {
    let mut buf = data.to_vec();
    if !buf.is_empty() {
        transform_in_place(&mut buf, true);
        let scale = 1.0 / buf.len() as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
    }
    buf
}

/// `F_k = Σ_j e^{-2πi·jk/N}·x_j`, unshifted.
pub fn dft(signal: &Signal) -> Spectrum {
    let data: Vec<Complex64> = signal
        .samples()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    Spectrum {
        coefficients: dft_complex(&data),
        convention: Convention::Unshifted,
    }
}

/// Rejects imaginary parts above [`IMAG_RESIDUE_THRESHOLD`], otherwise drops them.
pub(crate) fn real_part(values: &[Complex64]) -> Result<Vec<f64>> {
    let residue = values.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    if residue > IMAG_RESIDUE_THRESHOLD {
        return Err(Error::NonReal {
            residue,
            threshold: IMAG_RESIDUE_THRESHOLD,
        });
    }
    Ok(values.iter().map(|c| c.re).collect())
}

/// Inverse of [`dft`]. The spectrum must be unshifted and (nearly) conjugate symmetric.
pub fn idft(spectrum: &Spectrum) -> Result<Signal> {
    let unshifted = uncenter_shift(spectrum);
    Signal::new(real_part(&idft_complex(&unshifted.coefficients))?)
}

fn transform_2d(rows: usize, cols: usize, data: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let (row_fft, col_fft) = if inverse {
        (
            planner.plan_fft_inverse(cols),
            planner.plan_fft_inverse(rows),
        )
    } else {
        (
            planner.plan_fft_forward(cols),
            planner.plan_fft_forward(rows),
        )
    };
    for row in data.chunks_exact_mut(cols) {
        row_fft.process(row);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = data[r * cols + c];
        }
        col_fft.process(&mut column);
        for r in 0..rows {
            data[r * cols + c] = column[r];
        }
    }
    if inverse {
        let scale = 1.0 / (rows * cols) as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }
}

/// 2D transform of a single row-major real plane.
pub fn dft2_plane(rows: usize, cols: usize, plane: &[f64]) -> Result<Spectrum2> {
    if plane.len() != rows * cols {
        return Err(Error::ShapeMismatch {
            expected: format!("{} samples", rows * cols),
            actual: format!("{}", plane.len()),
        });
    }
    let mut data: Vec<Complex64> = plane.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    if !data.is_empty() {
        transform_2d(rows, cols, &mut data, false);
    }
    Spectrum2::new(rows, cols, data, Convention::Unshifted)
}

/// Separable 2D transform of every channel: rows first, then columns.
pub fn dft2(image: &Image) -> Vec<Spectrum2> {
    let (h, w, _) = image.shape();
    image
        .planes()
        .iter()
        .map(|p| dft2_plane(h, w, p).expect("plane shape matches image"))
        .collect()
}

/// Inverse 2D transform back to a real plane.
pub fn idft2_plane(spectrum: &Spectrum2) -> Result<Vec<f64>> {
    let s = uncenter_shift2(spectrum);
    let mut data = s.coefficients;
    transform_2d(s.rows, s.cols, &mut data, true);
    real_part(&data)
}

fn rotate_right<T: Clone>(data: &[T], by: usize) -> Vec<T> {
    let mut out = data.to_vec();
    out.rotate_right(by);
    out
}

/// Moves frequency `−⌊len/2⌋` to position 0. Centered input is returned unchanged.
pub fn center_shift(spectrum: &Spectrum) -> Spectrum {
    match spectrum.convention {
        Convention::Centered => spectrum.clone(),
        Convention::Unshifted => Spectrum {
            coefficients: rotate_right(&spectrum.coefficients, spectrum.len() / 2),
            convention: Convention::Centered,
        },
    }
}

/// Inverse of [`center_shift`].
pub fn uncenter_shift(spectrum: &Spectrum) -> Spectrum {
    match spectrum.convention {
        Convention::Unshifted => spectrum.clone(),
        Convention::Centered => {
            let mut coefficients = spectrum.coefficients.clone();
            coefficients.rotate_left(spectrum.len() / 2);
            Spectrum {
                coefficients,
                convention: Convention::Unshifted,
            }
        }
    }
}

fn shift2(s: &Spectrum2, to: Convention) -> Spectrum2 {
    if s.convention == to {
        return s.clone();
    }
    let (dr, dc) = (s.rows / 2, s.cols / 2);
    let mut out = vec![Complex64::new(0.0, 0.0); s.coefficients.len()];
    for r in 0..s.rows {
        for c in 0..s.cols {
            let (tr, tc) = match to {
                Convention::Centered => ((r + dr) % s.rows, (c + dc) % s.cols),
                Convention::Unshifted => ((r + s.rows - dr) % s.rows, (c + s.cols - dc) % s.cols),
            };
            out[tr * s.cols + tc] = s.coefficients[r * s.cols + c];
        }
    }
    Spectrum2 {
        rows: s.rows,
        cols: s.cols,
        coefficients: out,
        convention: to,
    }
}

/// 2D analogue of [`center_shift`], applied along both axes.
pub fn center_shift2(spectrum: &Spectrum2) -> Spectrum2 {
    shift2(spectrum, Convention::Centered)
}

pub fn uncenter_shift2(spectrum: &Spectrum2) -> Spectrum2 {
    shift2(spectrum, Convention::Unshifted)
}

fn check_floor(floor: f64) -> Result<()> {
    if !(floor > 0.0 && floor.is_finite()) {
        return Err(invalid(format!("log floor must be positive, got {floor}")));
    }
    Ok(())
}

/// `log10(|F_k| + floor)` for every coefficient.
pub fn log_magnitude(spectrum: &Spectrum, floor: f64) -> Result<Signal> {
    check_floor(floor)?;
    Signal::new(
        spectrum
            .coefficients
            .iter()
            .map(|c| (c.norm() + floor).log10())
            .collect(),
    )
}

/// Row-major `log10(|F| + floor)` of a 2D spectrum.
pub fn log_magnitude2(spectrum: &Spectrum2, floor: f64) -> Result<Vec<f64>> {
    check_floor(floor)?;
    Ok(spectrum
        .coefficients
        .iter()
        .map(|c| (c.norm() + floor).log10())
        .collect())
}

/// One annulus of a radial spectrum average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBin {
    /// Bin centre radius, in integer-index units.
    pub radius: f64,
    /// Mean `|F|` over the bin, 0 when empty.
    pub mean_magnitude: f64,
    pub count: usize,
    pub empty: bool,
}

/// Mean magnitude in `n_bins` uniform radius bins over `[0, r_max]`.
///
/// Radii are measured from the zero frequency in integer index units; the
/// largest radius lands in the last bin.
pub fn radial_average(spectrum: &Spectrum2, n_bins: usize) -> Result<Vec<RadialBin>> {
    if n_bins == 0 {
        return Err(invalid("radial_average needs at least one bin"));
    }
    let s = center_shift2(spectrum);
    let (cr, cc) = ((s.rows / 2) as f64, (s.cols / 2) as f64);
    let radius = |r: usize, c: usize| ((r as f64 - cr).powi(2) + (c as f64 - cc).powi(2)).sqrt();
    let mut r_max: f64 = 0.0;
    for r in 0..s.rows {
        for c in 0..s.cols {
            r_max = r_max.max(radius(r, c));
        }
    }
    let width = if r_max > 0.0 {
        r_max / n_bins as f64
    } else {
        1.0
    };
    let mut sums = vec![0.0; n_bins];
    let mut counts = vec![0usize; n_bins];
    for r in 0..s.rows {
        for c in 0..s.cols {
            let bin = ((radius(r, c) / width) as usize).min(n_bins - 1);
            sums[bin] += s.get(r, c).norm();
            counts[bin] += 1;
        }
    }
    Ok((0..n_bins)
        .map(|b| RadialBin {
            radius: (b as f64 + 0.5) * width,
            mean_magnitude: if counts[b] > 0 {
                sums[b] / counts[b] as f64
            } else {
                0.0
            },
            count: counts[b],
            empty: counts[b] == 0,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sig(v: &[f64]) -> Signal {
        Signal::new(v.to_vec()).unwrap()
    }

    fn assert_close(a: &[Complex64], b: &[Complex64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() <= tol, "{x} vs {y}");
        }
    }

    #[test]
    fn dft_examples() {
        assert_close(
            dft(&sig(&[1.0, 0.0, 0.0, 0.0])).coefficients(),
            &[c(1.0); 4],
            1e-12,
        );
        assert_close(
            dft(&sig(&[1.0; 4])).coefficients(),
            &[c(4.0), c(0.0), c(0.0), c(0.0)],
            1e-12,
        );
        assert_close(
            dft(&sig(&[1.0, 0.0, 2.0, 0.0])).coefficients(),
            &[c(3.0), c(-1.0), c(3.0), c(-1.0)],
            1e-12,
        );
    }

    #[test]
    fn idft_examples() {
        let s = Spectrum::from_real(&[4.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(idft(&s).unwrap().samples(), &[1.0; 4]);
        let s = Spectrum::from_real(&[0.0, 2.0, 0.0, 2.0]).unwrap();
        let x = idft(&s).unwrap();
        for (a, b) in x.samples().iter().zip([1.0, 0.0, -1.0, 0.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let x = sig(&[0.3, -1.2, 5.0, 2.0]);
        let back = idft(&dft(&x)).unwrap();
        for (a, b) in back.samples().iter().zip(x.samples()) {
            assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));
        }
    }

    #[test]
    fn idft_rejects_asymmetric_spectrum() {
        let s = Spectrum::new(
            vec![c(0.0), Complex64::new(0.0, 1.0), c(0.0), c(0.0)],
            Convention::Unshifted,
        )
        .unwrap();
        assert!(matches!(idft(&s), Err(Error::NonReal { .. })));
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(Spectrum::new(vec![], Convention::Unshifted).is_err());
        assert!(Signal::new(vec![]).is_err());
    }

    #[test]
    fn dft2_examples() {
        let img = Image::new(1, 1, 1, vec![2.5]).unwrap();
        assert_close(dft2(&img)[0].coefficients(), &[c(2.5)], 1e-12);
        let img = Image::new(2, 2, 1, vec![1.0; 4]).unwrap();
        assert_close(
            dft2(&img)[0].coefficients(),
            &[c(4.0), c(0.0), c(0.0), c(0.0)],
            1e-12,
        );
        let img = Image::new(2, 2, 1, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_close(dft2(&img)[0].coefficients(), &[c(1.0); 4], 1e-12);
    }

    #[test]
    fn center_shift_examples() {
        let s = Spectrum::from_real(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        let shifted = center_shift(&s);
        assert_eq!(shifted.convention(), Convention::Centered);
        assert_eq!(shifted.coefficients(), &[c(2.0), c(3.0), c(0.0), c(1.0)]);
        assert_eq!(uncenter_shift(&shifted), s);

        let one = Spectrum::from_real(&[7.0]).unwrap();
        assert_eq!(center_shift(&one).coefficients(), &[c(7.0)]);

        let six = Spectrum::from_real(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(
            center_shift(&six).coefficients(),
            &[c(3.0), c(4.0), c(5.0), c(0.0), c(1.0), c(2.0)]
        );

        let five = Spectrum::from_real(&[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        let centered = center_shift(&five);
        assert_eq!(centered.frequency(0), -2);
        assert_eq!(centered.coefficients()[0], c(3.0));
        assert_eq!(uncenter_shift(&centered), five);
    }

    #[test]
    fn frequency_labels() {
        let s = Spectrum::from_real(&[0.0; 4]).unwrap();
        let f: Vec<i64> = (0..4).map(|p| s.frequency(p)).collect();
        assert_eq!(f, vec![0, 1, -2, -1]);
        let f: Vec<i64> = (0..4).map(|p| center_shift(&s).frequency(p)).collect();
        assert_eq!(f, vec![-2, -1, 0, 1]);
    }

    #[test]
    fn log_magnitude_examples() {
        let s = Spectrum::from_real(&[0.0, 1.0, 10.0]).unwrap();
        let l = log_magnitude(&s, DEFAULT_LOG_FLOOR).unwrap();
        assert!((l.samples()[0] + 12.0).abs() < 1e-9);
        assert!(l.samples()[1].abs() < 1e-10);
        assert!((l.samples()[2] - 1.0).abs() < 1e-10);
        assert!(log_magnitude(&s, 0.0).is_err());
    }

    #[test]
    fn radial_average_examples() {
        let flat = Spectrum2::new(3, 5, vec![c(2.0); 15], Convention::Unshifted).unwrap();
        for bin in radial_average(&flat, 4).unwrap() {
            if !bin.empty {
                assert!((bin.mean_magnitude - 2.0).abs() < 1e-12);
            }
        }
        let single = Spectrum2::new(1, 1, vec![c(-3.0)], Convention::Unshifted).unwrap();
        let bins = radial_average(&single, 1).unwrap();
        assert_eq!(bins.len(), 1);
        assert!((bins[0].mean_magnitude - 3.0).abs() < 1e-12);

        let mut delta = vec![0.0; 16];
        delta[0] = 1.0;
        let spec = dft2_plane(4, 4, &delta).unwrap();
        let bins = radial_average(&center_shift2(&spec), 2).unwrap();
        assert!(bins
            .iter()
            .all(|b| !b.empty && (b.mean_magnitude - 1.0).abs() < 1e-12));

        assert!(radial_average(&single, 0).is_err());
    }

    #[test]
    fn radial_average_flags_empty_bins() {
        let s = Spectrum2::new(1, 2, vec![c(1.0), c(1.0)], Convention::Unshifted).unwrap();
        // radii are 0 and 1; with 4 bins the middle ones stay empty
        let bins = radial_average(&s, 4).unwrap();
        assert!(!bins[0].empty && bins[1].empty && bins[2].empty && !bins[3].empty);
        assert_eq!(bins[1].mean_magnitude, 0.0);
    }

    #[test]
    fn center_shift2_round_trip() {
        let data: Vec<Complex64> = (0..15).map(|v| c(v as f64)).collect();
        let s = Spectrum2::new(3, 5, data, Convention::Unshifted).unwrap();
        let centered = center_shift2(&s);
        // DC moves to (⌊3/2⌋, ⌊5/2⌋)
        assert_eq!(centered.get(1, 2), c(0.0));
        assert_eq!(uncenter_shift2(&centered), s);
    }
}
