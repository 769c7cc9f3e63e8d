//! Plane-wave checks of Fourier multipliers.

use std::f64::consts::PI;

use sobolev_hf::{Field, Grid, KernelSpec};

/// `cos(k·x + phase)` for the lattice mode `m`, with its `|k|²`.
pub fn plane_wave(grid: &Grid, m: [i32; 3], phase: f64) -> (Field, f64) {
    let k = 2.0 * PI / grid.box_length();
    let kv = m.map(|c| c as f64 * k);
    let f = Field::sample(grid, |x, y, z| {
        (kv[0] * x + kv[1] * y + kv[2] * z + phase).cos()
    })
    .unwrap();
    (f, kv.iter().map(|c| c * c).sum())
}

/// Largest `|K f − σ(k) f|` over the modes, relative to the largest symbol
/// magnitude among them. The truncated Coulomb symbol vanishes when `|m|`
/// is an even integer, so a per-mode relative error is not defined there.
pub fn eigen_error(grid: &Grid, kernel: KernelSpec, modes: &[[i32; 3]]) -> f64 {
    let scale = modes
        .iter()
        .map(|&m| kernel.symbol(grid, plane_wave(grid, m, 0.0).1).abs())
        .fold(0.0, f64::max);
    modes
        .iter()
        .map(|&m| {
            let (f, k2) = plane_wave(grid, m, 0.4);
            let out = f.apply_kernel(kernel).unwrap();
            let s = kernel.symbol(grid, k2);
            out.values()
                .iter()
                .zip(f.values())
                .map(|(a, b)| (a - s * b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
        / scale
}
