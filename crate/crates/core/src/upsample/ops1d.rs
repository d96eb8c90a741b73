use super::{sample_at, BoundaryMode, KernelSpec, UpsampleFactor};
use crate::error::{invalid, Error, Result};
use crate::signal::Signal;

/// Zero insertion: `out[r·j] = x[j]`, every other sample 0.
pub fn bed_of_nails(x: &Signal, r: UpsampleFactor) -> Signal {
    let r = r.get();
    let mut out = vec![0.0; x.len() * r];
    for (j, &v) in x.samples().iter().enumerate() {
        out[r * j] = v;
    }
    Signal::new(out).expect("finite input stays finite")
}

/// Sample repeat: `out[r·j + m] = x[j]`.
pub fn nearest(x: &Signal, r: UpsampleFactor) -> Signal {
    let r = r.get();
    let out = x
        .samples()
        .iter()
        .flat_map(|&v| std::iter::repeat_n(v, r))
        .collect();
    Signal::new(out).expect("finite input stays finite")
}

/// Linear interpolation between `x[j]` and `x[j+1]`; `x[N]` comes from `boundary`.
pub fn linear(x: &Signal, r: UpsampleFactor, boundary: BoundaryMode) -> Signal {
    let r = r.get();
    let xs = x.samples();
    let mut out = Vec::with_capacity(xs.len() * r);
    for (j, &here) in xs.iter().enumerate() {
        let next = sample_at(xs, j as isize + 1, boundary);
        for m in 0..r {
            let t = m as f64 / r as f64;
            out.push((1.0 - t) * here + t * next);
        }
    }
    Signal::new(out).expect("finite input stays finite")
}

/// Interleaves `r` equal-length channels: `out[r·j + m] = channels[m][j]`.
pub fn pixel_shuffle(channels: &[Signal], r: UpsampleFactor) -> Result<Signal> {
    let r = r.get();
    if channels.len() != r {
        return Err(invalid(format!(
            "pixel shuffle by {r} needs {r} channels, got {}",
            channels.len()
        )));
    }
    let n = channels[0].len();
    if let Some(bad) = channels.iter().find(|c| c.len() != n) {
        return Err(Error::ShapeMismatch {
            expected: format!("channel length {n}"),
            actual: format!("channel length {}", bad.len()),
        });
    }
    let mut out = vec![0.0; n * r];
    for (m, ch) in channels.iter().enumerate() {
        for (j, &v) in ch.samples().iter().enumerate() {
            out[r * j + m] = v;
        }
    }
    Signal::new(out)
}

/// Exact inverse of [`pixel_shuffle`].
pub fn pixel_unshuffle(x: &Signal, r: UpsampleFactor) -> Result<Vec<Signal>> {
    let r = r.get();
    if !x.len().is_multiple_of(r) {
        return Err(invalid(format!(
            "length {} is not divisible by {r}",
            x.len()
        )));
    }
    (0..r)
        .map(|m| Signal::new(x.samples().iter().skip(m).step_by(r).copied().collect()))
        .collect()
}

/// Adds one branch of a transposed convolution into `out`.
fn spread(
    out: &mut [f64],
    x: &[f64],
    weights: &[f64],
    anchor: usize,
    stride: usize,
    boundary: BoundaryMode,
) {
    let len = out.len() as isize;
    for (i, &v) in x.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let base = (stride * i) as isize - anchor as isize;
        for (j, &w) in weights.iter().enumerate() {
            let p = base + j as isize;
            match boundary {
                BoundaryMode::Periodic => out[p.rem_euclid(len) as usize] += w * v,
                BoundaryMode::ZeroPad => {
                    if (0..len).contains(&p) {
                        out[p as usize] += w * v;
                    }
                }
            }
        }
    }
}

/// Transposed convolution: zero insertion by the stride, then convolution with
/// the kernel anchored at `⌊K/2⌋`. A parallel branch is summed into the output.
///
/// Output length is `stride·N` in both boundary modes.
pub fn transposed_conv(x: &Signal, kernel: &KernelSpec, boundary: BoundaryMode) -> Signal {
    let s = kernel.stride();
    let mut out = vec![0.0; x.len() * s];
    for (weights, anchor) in kernel.branches() {
        spread(&mut out, x.samples(), weights, anchor, s, boundary);
    }
    Signal::new(out).expect("finite inputs stay finite")
}
