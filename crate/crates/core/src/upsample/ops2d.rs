//! 2D operators. Channels are processed independently.

use super::{sample_at, BoundaryMode, KernelSpec2, UpsampleFactor};
use crate::error::{invalid, Error, Result};
use crate::signal::Image;

fn map_planes<F>(image: &Image, out_h: usize, out_w: usize, f: F) -> Image
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let planes: Vec<Vec<f64>> = image.planes().iter().map(|p| f(p)).collect();
    Image::from_planes(out_h, out_w, &planes).expect("operator preserves plane shape")
}

/// 2D zero insertion: `out[r·h, r·w] = x[h, w]`.
pub fn bed_of_nails2(image: &Image, r: UpsampleFactor) -> Image {
    let r = r.get();
    let (h, w, _) = image.shape();
    map_planes(image, h * r, w * r, |p| {
        let mut out = vec![0.0; h * w * r * r];
        for y in 0..h {
            for x in 0..w {
                out[(r * y) * (w * r) + r * x] = p[y * w + x];
            }
        }
        out
    })
}

/// 2D sample repeat over `r×r` blocks.
pub fn nearest2(image: &Image, r: UpsampleFactor) -> Image {
    let r = r.get();
    let (h, w, _) = image.shape();
    let ow = w * r;
    map_planes(image, h * r, ow, |p| {
        (0..h * r)
            .flat_map(|y| (0..ow).map(move |x| p[(y / r) * w + x / r]))
            .collect()
    })
}

/// Bilinear interpolation: the 1D linear rule applied along rows, then columns.
pub fn bilinear(image: &Image, r: UpsampleFactor, boundary: BoundaryMode) -> Image {
    let f = r.get();
    let (h, w, _) = image.shape();
    let (oh, ow) = (h * f, w * f);
    map_planes(image, oh, ow, |p| {
        let mut rows = vec![0.0; h * ow];
        for y in 0..h {
            let row = &p[y * w..(y + 1) * w];
            for x in 0..w {
                let next = sample_at(row, x as isize + 1, boundary);
                for m in 0..f {
                    let t = m as f64 / f as f64;
                    rows[y * ow + f * x + m] = (1.0 - t) * row[x] + t * next;
                }
            }
        }
        let mut out = vec![0.0; oh * ow];
        let mut column = vec![0.0; h];
        for x in 0..ow {
            for y in 0..h {
                column[y] = rows[y * ow + x];
            }
            for y in 0..h {
                let next = sample_at(&column, y as isize + 1, boundary);
                for m in 0..f {
                    let t = m as f64 / f as f64;
                    out[(f * y + m) * ow + x] = (1.0 - t) * column[y] + t * next;
                }
            }
        }
        out
    })
}

/// `out[r·h + a, r·w + b] = channels[a·r + b][h, w]`.
pub fn pixel_shuffle2(channels: &[Image], r: UpsampleFactor) -> Result<Image> {
    let r = r.get();
    if channels.len() != r * r {
        return Err(invalid(format!(
            "2D pixel shuffle by {r} needs {} inputs, got {}",
            r * r,
            channels.len()
        )));
    }
    let shape = channels[0].shape();
    if let Some(bad) = channels.iter().find(|c| c.shape() != shape) {
        return Err(Error::ShapeMismatch {
            expected: format!("{shape:?}"),
            actual: format!("{:?}", bad.shape()),
        });
    }
    let (h, w, c) = shape;
    let ow = w * r;
    let mut out = vec![0.0; h * w * r * r * c];
    for (idx, img) in channels.iter().enumerate() {
        let (a, b) = (idx / r, idx % r);
        for y in 0..h {
            for x in 0..w {
                for ch in 0..c {
                    out[((r * y + a) * ow + r * x + b) * c + ch] = img.get(y, x, ch);
                }
            }
        }
    }
    Image::new(h * r, ow, c, out)
}

/// Exact inverse of [`pixel_shuffle2`].
pub fn pixel_unshuffle2(image: &Image, r: UpsampleFactor) -> Result<Vec<Image>> {
    let r = r.get();
    let (oh, ow, c) = image.shape();
    if oh % r != 0 || ow % r != 0 {
        return Err(invalid(format!("{oh}x{ow} image is not divisible by {r}")));
    }
    let (h, w) = (oh / r, ow / r);
    (0..r * r)
        .map(|idx| {
            let (a, b) = (idx / r, idx % r);
            let mut data = Vec::with_capacity(h * w * c);
            for y in 0..h {
                for x in 0..w {
                    for ch in 0..c {
                        data.push(image.get(r * y + a, r * x + b, ch));
                    }
                }
            }
            Image::new(h, w, c, data)
        })
        .collect()
}

fn spread2(
    out: &mut [f64],
    plane: &[f64],
    (h, w): (usize, usize),
    (size, weights): (usize, &[f64]),
    stride: usize,
    boundary: BoundaryMode,
) {
    let (oh, ow) = ((h * stride) as isize, (w * stride) as isize);
    let anchor = (size / 2) as isize;
    for y in 0..h {
        for x in 0..w {
            let v = plane[y * w + x];
            if v == 0.0 {
                continue;
            }
            let (by, bx) = (
                (stride * y) as isize - anchor,
                (stride * x) as isize - anchor,
            );
            for a in 0..size {
                for b in 0..size {
                    let (p, q) = (by + a as isize, bx + b as isize);
                    let (p, q) = match boundary {
                        BoundaryMode::Periodic => (p.rem_euclid(oh), q.rem_euclid(ow)),
                        BoundaryMode::ZeroPad => {
                            if !(0..oh).contains(&p) || !(0..ow).contains(&q) {
                                continue;
                            }
                            (p, q)
                        }
                    };
                    out[p as usize * ow as usize + q as usize] += weights[a * size + b] * v;
                }
            }
        }
    }
}

/// Full 2D transposed convolution per channel, with the parallel branch summed.
pub fn transposed_conv2(image: &Image, kernel: &KernelSpec2, boundary: BoundaryMode) -> Image {
    let s = kernel.stride();
    let (h, w, _) = image.shape();
    map_planes(image, h * s, w * s, |p| {
        let mut out = vec![0.0; h * w * s * s];
        for branch in kernel.branches() {
            spread2(&mut out, p, (h, w), branch, s, boundary);
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Signal;
    use crate::upsample::{bed_of_nails, linear, nearest, transposed_conv, KernelSpec};

    fn r2() -> UpsampleFactor {
        UpsampleFactor::new(2).unwrap()
    }

    fn sig(v: &[f64]) -> Signal {
        Signal::new(v.to_vec()).unwrap()
    }

    fn assert_images_close(a: &Image, b: &Image, tol: f64) {
        assert_eq!(a.shape(), b.shape());
        for (x, y) in a.data().iter().zip(b.data()) {
            assert!((x - y).abs() <= tol, "{x} vs {y}");
        }
    }

    #[test]
    fn delta_kernel_is_bed_of_nails() {
        let img = Image::new(2, 3, 2, (0..12).map(|v| v as f64 - 4.0).collect()).unwrap();
        let k = KernelSpec2::delta(3, 2).unwrap();
        assert_eq!(
            transposed_conv2(&img, &k, BoundaryMode::Periodic),
            bed_of_nails2(&img, r2())
        );
    }

    #[test]
    fn outer_product_kernel_separates() {
        let (x, y) = (sig(&[1.0, -2.0, 0.5, 3.0]), sig(&[0.25, 1.0, -1.0, 2.0]));
        let w = KernelSpec::new(vec![0.3, -0.7, 1.0, 0.2, 0.9], 2).unwrap();
        let img = Image::outer(&x, &y).unwrap();
        let k2 = KernelSpec2::outer(&w, &w).unwrap();
        let got = transposed_conv2(&img, &k2, BoundaryMode::Periodic);
        let want = Image::outer(
            &transposed_conv(&x, &w, BoundaryMode::Periodic),
            &transposed_conv(&y, &w, BoundaryMode::Periodic),
        )
        .unwrap();
        assert_images_close(&got, &want, 1e-12);
    }

    #[test]
    fn ones_kernel_on_ones_image() {
        let img = Image::new(2, 2, 1, vec![1.0; 4]).unwrap();
        let got = transposed_conv2(
            &img,
            &KernelSpec2::ones(3, 2).unwrap(),
            BoundaryMode::Periodic,
        );
        // 1D: [1,1] through [1,1,1] at stride 2 gives [1,2,1,2]
        let row = [1.0, 2.0, 1.0, 2.0];
        let want: Vec<f64> = row
            .iter()
            .flat_map(|a| row.iter().map(move |b| a * b))
            .collect();
        assert_eq!(got.data(), want.as_slice());
    }

    #[test]
    fn separable_ops_match_1d() {
        let (x, y) = (sig(&[1.0, 4.0, -2.0]), sig(&[0.5, 2.0, 3.0, -1.0]));
        let img = Image::outer(&x, &y).unwrap();
        for mode in [BoundaryMode::Periodic, BoundaryMode::ZeroPad] {
            let want = Image::outer(&linear(&x, r2(), mode), &linear(&y, r2(), mode)).unwrap();
            assert_images_close(&bilinear(&img, r2(), mode), &want, 1e-12);
        }
        let want = Image::outer(&nearest(&x, r2()), &nearest(&y, r2())).unwrap();
        assert_images_close(&nearest2(&img, r2()), &want, 0.0);
        let want = Image::outer(&bed_of_nails(&x, r2()), &bed_of_nails(&y, r2())).unwrap();
        assert_images_close(&bed_of_nails2(&img, r2()), &want, 0.0);
    }

    #[test]
    fn pixel_shuffle2_ordering_and_inverse() {
        let chans: Vec<Image> = (0..4)
            .map(|i| Image::new(1, 1, 1, vec![i as f64]).unwrap())
            .collect();
        let out = pixel_shuffle2(&chans, r2()).unwrap();
        assert_eq!(out.data(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(pixel_unshuffle2(&out, r2()).unwrap(), chans);
        assert!(pixel_shuffle2(&chans[..3], r2()).is_err());
        assert!(pixel_unshuffle2(&Image::zeros(3, 4, 1).unwrap(), r2()).is_err());
    }
}
