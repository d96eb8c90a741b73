use num_complex::Complex64;

use super::UpsampleFactor;
use crate::error::{Error, Result};
use crate::signal::{Image, Signal};
use crate::spectrum::{dft_complex, idft_complex, real_part};

/// Places an `N`-point unshifted spectrum into the centre of an `r·N`-point one.
///
/// Frequencies `|k| < N/2` keep their value. For even `N` the Nyquist
/// coefficient is split evenly between bins `+N/2` and `−N/2`.
fn pad_spectrum(f: &[Complex64], r: usize) -> Vec<Complex64> {
    let n = f.len();
    let m = n * r;
    let mut g = vec![Complex64::new(0.0, 0.0); m];
    let half = n / 2;
    g[0] = f[0];
    for k in 1..n.div_ceil(2) {
        g[k] = f[k];
        g[m - k] = f[n - k];
    }
    if n.is_multiple_of(2) && n > 0 && half > 0 {
        let split = f[half] * 0.5;
        g[half] = split;
        g[m - half] = split;
    }
    g
}

fn pad_samples(x: &[f64], r: usize) -> Result<Vec<f64>> {
    let data: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let padded = pad_spectrum(&dft_complex(&data), r);
    let out = idft_complex(&padded);
    let scaled: Vec<Complex64> = out.into_iter().map(|c| c * r as f64).collect();
    real_part(&scaled).map_err(|e| match e {
        Error::NonReal { residue, .. } => Error::Numerical(format!(
            "Fourier padding produced an imaginary residue of {residue:e}"
        )),
        other => other,
    })
}

/// Ideal band-limited upsampling by zero-padding the spectrum.
///
/// The output is scaled by `r` so that `out[r·j] = x[j]`.
pub fn fourier_pad_upsample(x: &Signal, r: UpsampleFactor) -> Result<Signal> {
    if x.len() == 1 {
        return Signal::constant(r.get(), x.samples()[0]);
    }
    Signal::new(pad_samples(x.samples(), r.get())?)
}

/// Separable 2D Fourier padding: rows first, then columns, per channel.
pub fn fourier_pad_upsample2(image: &Image, r: UpsampleFactor) -> Result<Image> {
    let f = r.get();
    let (h, w, _) = image.shape();
    let (oh, ow) = (h * f, w * f);
    let pad = |v: &[f64]| -> Result<Vec<f64>> {
        if v.len() == 1 {
            Ok(vec![v[0]; f])
        } else {
            pad_samples(v, f)
        }
    };
    let planes = image
        .planes()
        .iter()
        .map(|p| {
            let mut rows = Vec::with_capacity(h * ow);
            for row in p.chunks_exact(w) {
                rows.extend(pad(row)?);
            }
            let mut out = vec![0.0; oh * ow];
            let mut column = vec![0.0; h];
            for x in 0..ow {
                for y in 0..h {
                    column[y] = rows[y * ow + x];
                }
                for (y, v) in pad(&column)?.into_iter().enumerate() {
                    out[y * ow + x] = v;
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Image::from_planes(oh, ow, &planes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::dft;
    use std::f64::consts::PI;

    fn r(v: usize) -> UpsampleFactor {
        UpsampleFactor::new(v).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn cosine_is_reconstructed_at_higher_rate() {
        let x = Signal::new(vec![1.0, 0.0, -1.0, 0.0]).unwrap();
        let up = fourier_pad_upsample(&x, r(2)).unwrap();
        let h = 2f64.sqrt() / 2.0;
        assert_close(up.samples(), &[1.0, h, 0.0, -h, -1.0, -h, 0.0, h], 1e-12);
    }

    #[test]
    fn constant_passes_through() {
        for n in [1, 2, 5, 8] {
            let x = Signal::constant(n, 2.5).unwrap();
            for f in [2, 3] {
                let up = fourier_pad_upsample(&x, r(f)).unwrap();
                assert_close(up.samples(), &vec![2.5; n * f], 1e-12);
            }
        }
    }

    #[test]
    fn nyquist_is_split() {
        let x = Signal::new(vec![1.0, -1.0, 1.0, -1.0]).unwrap();
        let up = fourier_pad_upsample(&x, r(2)).unwrap();
        // half-split Nyquist bins give cos(πn/2)
        let want: Vec<f64> = (0..8).map(|n| (PI * n as f64 / 2.0).cos()).collect();
        assert_close(up.samples(), &want, 1e-12);
    }

    #[test]
    fn padded_spectrum_is_conjugate_symmetric() {
        for n in 2..10 {
            let x: Vec<f64> = (0..n).map(|j| ((j * 7 + 3) % 5) as f64 - 1.7).collect();
            let f = dft(&Signal::new(x).unwrap());
            for fac in [2, 3] {
                let g = pad_spectrum(f.coefficients(), fac);
                let m = g.len();
                for k in 0..m {
                    assert!((g[k] - g[(m - k) % m].conj()).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn separable_2d_matches_outer_product() {
        let a = Signal::new(vec![1.0, 0.5, -2.0, 0.0]).unwrap();
        let b = Signal::new(vec![0.0, 3.0, 1.0]).unwrap();
        let img = Image::outer(&a, &b).unwrap();
        let got = fourier_pad_upsample2(&img, r(2)).unwrap();
        let want = Image::outer(
            &fourier_pad_upsample(&a, r(2)).unwrap(),
            &fourier_pad_upsample(&b, r(2)).unwrap(),
        )
        .unwrap();
        assert_close(got.data(), want.data(), 1e-12);
    }
}
