mod common;

use common::{brute_dft, max_abs_diff, SplitMix};
use proptest::prelude::*;
use upspec::spectrum::dft;
use upspec::upsample::{
    bed_of_nails, bilinear, fourier_pad_upsample, linear, nearest, nearest2, pixel_shuffle,
    pixel_shuffle2, pixel_unshuffle, pixel_unshuffle2, transposed_conv, transposed_conv2,
    BoundaryMode, KernelSpec, KernelSpec2, UpsampleFactor, Upsampler,
};
use upspec::{Image, Signal};

fn factor(r: usize) -> UpsampleFactor {
    UpsampleFactor::new(r).unwrap()
}

fn signal(max_len: usize) -> impl Strategy<Value = Signal> {
    prop::collection::vec(-4.0f64..4.0, 1..=max_len).prop_map(|v| Signal::new(v).unwrap())
}

#[test]
fn zero_insertion_replicates_the_spectrum() {
    let mut rng = SplitMix::new(21);
    for _ in 0..60 {
        let n = rng.range(1, 512);
        let x = rng.signal(n);
        for r in [2, 3] {
            let up = dft(&bed_of_nails(&x, factor(r)));
            let base = brute_dft(x.samples());
            let dev = up
                .coefficients()
                .iter()
                .enumerate()
                .map(|(k, c)| (c - base[k % n]).norm())
                .fold(0.0, f64::max);
            assert!(dev <= 1e-10, "n={n} r={r}: {dev}");
        }
    }
}

#[test]
fn fourier_pad_keeps_grid_and_band() {
    let mut rng = SplitMix::new(5);
    for _ in 0..40 {
        let n = rng.range(2, 200);
        let x = rng.signal(n);
        for r in [2, 3, 4] {
            let y = fourier_pad_upsample(&x, factor(r)).unwrap();
            let on_grid: Vec<f64> = y.samples().iter().step_by(r).copied().collect();
            assert!(max_abs_diff(&on_grid, x.samples()) <= 1e-9);
            let m = y.len();
            for (k, c) in dft(&y).coefficients().iter().enumerate() {
                let kc = if k < m - m / 2 {
                    k as i64
                } else {
                    k as i64 - m as i64
                };
                if 2 * kc.unsigned_abs() as usize > n {
                    assert!(
                        c.norm_sqr() <= 1e-18,
                        "n={n} r={r} k={kc}: {}",
                        c.norm_sqr()
                    );
                }
            }
        }
    }
}

#[test]
fn band_limited_cosine_is_resampled_exactly() {
    use std::f64::consts::PI;
    for n in [5usize, 8, 16, 31] {
        for k in 0..n.div_ceil(2) {
            let x = Signal::new(
                (0..n)
                    .map(|j| (2.0 * PI * (k * j) as f64 / n as f64 + 0.3).cos())
                    .collect(),
            )
            .unwrap();
            for r in [2, 3] {
                let y = fourier_pad_upsample(&x, factor(r)).unwrap();
                let want: Vec<f64> = (0..n * r)
                    .map(|p| (2.0 * PI * (k * p) as f64 / (n * r) as f64 + 0.3).cos())
                    .collect();
                assert!(
                    max_abs_diff(y.samples(), &want) <= 1e-9,
                    "n={n} k={k} r={r}"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn triangle_kernel_is_linear_interpolation(x in signal(128)) {
        let tri = KernelSpec::triangle(2).unwrap();
        let a = transposed_conv(&x, &tri, BoundaryMode::Periodic);
        let b = linear(&x, factor(2), BoundaryMode::Periodic);
        prop_assert!(max_abs_diff(a.samples(), b.samples()) <= 1e-12);
    }

    #[test]
    fn wider_triangles_match_linear_interpolation(x in signal(64), r in 2usize..6) {
        let tri = KernelSpec::triangle(r).unwrap();
        let a = transposed_conv(&x, &tri, BoundaryMode::Periodic);
        let b = linear(&x, factor(r), BoundaryMode::Periodic);
        prop_assert!(max_abs_diff(a.samples(), b.samples()) <= 1e-12);
    }

    #[test]
    fn every_operator_is_linear(
        pair in (1usize..48).prop_flat_map(|n| (
            prop::collection::vec(-4.0f64..4.0, n),
            prop::collection::vec(-4.0f64..4.0, n),
        )),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        r in 2usize..4,
    ) {
        let x = Signal::new(pair.0).unwrap();
        let y = Signal::new(pair.1).unwrap();
        let kernel = KernelSpec::new(vec![0.2, -0.5, 1.0, 0.7, 0.1], r).unwrap()
            .with_parallel_small(vec![0.3, 0.3, -0.1]).unwrap();
        let ops = [
            Upsampler::BedOfNails(factor(r)),
            Upsampler::Nearest(factor(r)),
            Upsampler::Linear(factor(r), BoundaryMode::Periodic),
            Upsampler::Linear(factor(r), BoundaryMode::ZeroPad),
            Upsampler::FourierPad(factor(r)),
            Upsampler::TransposedConv(kernel.clone(), BoundaryMode::Periodic),
            Upsampler::TransposedConv(kernel, BoundaryMode::ZeroPad),
        ];
        let mix = x.axpby(a, &y, b).unwrap();
        for op in &ops {
            let lhs = op.apply(&mix).unwrap();
            let rhs = op.apply(&x).unwrap().axpby(a, &op.apply(&y).unwrap(), b).unwrap();
            prop_assert!(max_abs_diff(lhs.samples(), rhs.samples()) <= 1e-10, "{}", op.name());
        }
    }

    #[test]
    fn unshuffle_inverts_shuffle(
        chans in (1usize..20, 2usize..5).prop_flat_map(|(n, r)| (
            prop::collection::vec(prop::collection::vec(-3.0f64..3.0, n), r),
            Just(r),
        )),
    ) {
        let (raw, r) = chans;
        let channels: Vec<Signal> = raw.into_iter().map(|v| Signal::new(v).unwrap()).collect();
        let out = pixel_shuffle(&channels, factor(r)).unwrap();
        prop_assert_eq!(pixel_unshuffle(&out, factor(r)).unwrap(), channels);
    }

    #[test]
    fn unshuffle2_inverts_shuffle2(seed in any::<u64>(), h in 1usize..5, w in 1usize..5, c in 1usize..3) {
        let mut rng = SplitMix::new(seed);
        let chans: Vec<Image> = (0..4).map(|_| rng.image(h, w, c)).collect();
        let out = pixel_shuffle2(&chans, factor(2)).unwrap();
        prop_assert_eq!(pixel_unshuffle2(&out, factor(2)).unwrap(), chans);
    }

    #[test]
    fn separable_2d_agrees_with_1d(col in signal(8), row in signal(8)) {
        let img = Image::outer(&col, &row).unwrap();
        let w = KernelSpec::new(vec![0.25, 0.75, 1.0, 0.75, 0.25, -0.1], 2).unwrap();
        let got = transposed_conv2(&img, &KernelSpec2::outer(&w, &w).unwrap(), BoundaryMode::Periodic);
        let want = Image::outer(
            &transposed_conv(&col, &w, BoundaryMode::Periodic),
            &transposed_conv(&row, &w, BoundaryMode::Periodic),
        ).unwrap();
        prop_assert!(max_abs_diff(got.data(), want.data()) <= 1e-10);
        let got = bilinear(&img, factor(2), BoundaryMode::Periodic);
        let want = Image::outer(
            &linear(&col, factor(2), BoundaryMode::Periodic),
            &linear(&row, factor(2), BoundaryMode::Periodic),
        ).unwrap();
        prop_assert!(max_abs_diff(got.data(), want.data()) <= 1e-10);
        let want = Image::outer(&nearest(&col, factor(2)), &nearest(&row, factor(2))).unwrap();
        prop_assert!(max_abs_diff(nearest2(&img, factor(2)).data(), want.data()) <= 1e-10);
    }
}

#[test]
fn pixel_shuffle_random_4_channel_3x3() {
    let mut rng = SplitMix::new(99);
    let chans: Vec<Image> = (0..4).map(|_| rng.image(3, 3, 1)).collect();
    let out = pixel_shuffle2(&chans, factor(2)).unwrap();
    assert_eq!(out.shape(), (6, 6, 1));
    assert_eq!(pixel_unshuffle2(&out, factor(2)).unwrap(), chans);
    // channel a·r+b fills sub-pixel (a, b)
    assert_eq!(out.get(1, 0, 0), chans[2].get(0, 0, 0));
    assert_eq!(out.get(0, 1, 0), chans[1].get(0, 0, 0));
}
