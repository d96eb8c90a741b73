use crate::error::{invalid, Result};
use crate::upsample::KernelSpec;

/// How kernel mass is spread between the centre and the borders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeProfile {
    /// Mean `|w|` over the central third of the taps.
    pub center_mass: f64,
    /// Mean `|w|` over the outer sixth on each side.
    pub edge_mass: f64,
    pub decays_toward_edge: bool,
}

/// Compares the central third of the kernel with its outer sixths.
///
/// Tap `i` is central when `|i − (K−1)/2| ≤ K/6` and on the edge when it lies
/// within `K/6` of either end.
pub fn kernel_edge_profile(kernel: &KernelSpec) -> Result<EdgeProfile> {
    let w = kernel.weights();
    let k = w.len();
    if k < 3 {
        return Err(invalid(format!(
            "edge profile needs at least 3 taps, got {k}"
        )));
    }
    let sixth = k as f64 / 6.0;
    let mid = (k - 1) as f64 / 2.0;
    let mean = |pick: &dyn Fn(usize) -> bool| {
        let vals: Vec<f64> = (0..k).filter(|&i| pick(i)).map(|i| w[i].abs()).collect();
        vals.iter().sum::<f64>() / vals.len() as f64
    };
    let center_mass = mean(&|i| (i as f64 - mid).abs() <= sixth);
    let edge_mass = mean(&|i| (i.min(k - 1 - i) as f64) < sixth);
    Ok(EdgeProfile {
        center_mass,
        edge_mass,
        decays_toward_edge: edge_mass < center_mass,
    })
}

/// Sign changes walking outward from the anchor on either side, ignoring taps
/// below `1e-9·max|w|`.
pub fn off_center_sign_changes(kernel: &KernelSpec) -> usize {
    let w = kernel.weights();
    let c = kernel.anchor();
    let floor = 1e-9 * w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let count = |taps: &mut dyn Iterator<Item = f64>| {
        let signs: Vec<bool> = taps.filter(|v| v.abs() > floor).map(|v| v > 0.0).collect();
        signs.windows(2).filter(|p| p[0] != p[1]).count()
    };
    count(&mut w[c..].iter().copied()) + count(&mut w[..=c].iter().rev().copied())
}
