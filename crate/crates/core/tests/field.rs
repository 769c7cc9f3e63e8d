mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use sobolev_hf::{Field, Grid, KernelSpec, Space};

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

#[test]
fn plane_waves_are_kernel_eigenfunctions() {
    let grid = Grid::new(11.0, 16).unwrap();
    let kernels = [
        KernelSpec::Resolvent(1.0),
        KernelSpec::Resolvent(0.3),
        KernelSpec::Coulomb,
        KernelSpec::ScfShift(-0.4),
        KernelSpec::TinvComponent(-1.3),
    ];
    let modes = [[0, 0, 0], [1, 0, 0], [0, 2, 0], [1, 1, -1], [3, -2, 1]];
    for kernel in kernels {
        let err = common::spectral::eigen_error(&grid, kernel, &modes);
        assert!(err <= 1e-13, "{kernel:?}: {err:e}");
    }
}

#[test]
fn coulomb_symbol_at_zero_mode() {
    let grid = Grid::new(10.0, 8).unwrap();
    let one = Field::constant(&grid, 1.0);
    let out = one.apply_kernel(KernelSpec::Coulomb).unwrap();
    // ∫_{|x|<5} 1/|x| = 2π · 25
    assert!(out.values().iter().all(|v| (v - 50.0 * PI).abs() < 1e-10));
}

#[test]
fn gaussian_coulomb_potential_matches_erf() {
    let grid = Grid::new(16.0, 32).unwrap();
    let alpha = 1.0f64;
    let norm = (alpha / PI).powf(1.5);
    let rho = Field::sample(&grid, |x, y, z| {
        norm * (-alpha * (x * x + y * y + z * z)).exp()
    })
    .unwrap();
    let v = rho.apply_kernel(KernelSpec::Coulomb).unwrap();
    let n = 32;
    for step in 2..=6 {
        let index = n / 2 + step + n * (n / 2 + n * (n / 2));
        let r = grid.position(index)[0];
        let exact = libm::erf(alpha.sqrt() * r) / r;
        assert!(common::rel(v.values()[index], exact) < 1e-4, "r = {r}");
    }
}

#[test]
fn h1_inner_product_of_gaussian() {
    // ‖e^{-r²}‖²_{L²} = (π/2)^{3/2}, ‖∇e^{-r²}‖² = 3 (π/2)^{3/2}
    let grid = Grid::new(12.0, 32).unwrap();
    let f = Field::sample(&grid, |x, y, z| (-(x * x + y * y + z * z)).exp()).unwrap();
    let l2 = (PI / 2.0).powf(1.5);
    assert!(common::rel(f.inner_product(&f, Space::L2).unwrap(), l2) < 1e-10);
    assert!(common::rel(f.inner_product(&f, Space::H1).unwrap(), 4.0 * l2) < 1e-10);
}

#[test]
fn resolvent_inverts_shifted_laplacian() {
    let n = 16;
    let grid = Grid::new(9.0, n).unwrap();
    let f = common::random_field(&grid, &mut common::rng(1));
    let mu = 0.8;
    let u = f.apply_kernel(KernelSpec::Resolvent(mu)).unwrap();
    // ⟨u, f⟩_{H¹} − ⟨u, f⟩ = ⟨∇u, ∇f⟩, and (−Δ + μ)u = f gives ⟨∇u, ∇g⟩ + μ⟨u, g⟩ = ⟨f, g⟩
    let g = common::random_field(&grid, &mut common::rng(2));
    let grad = u.inner_product(&g, Space::H1).unwrap() - u.inner_product(&g, Space::L2).unwrap();
    let lhs = grad + mu * u.inner_product(&g, Space::L2).unwrap();
    let rhs = f.inner_product(&g, Space::L2).unwrap();
    assert!((lhs - rhs).abs() < 1e-11 * rhs.abs().max(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inner_products_are_symmetric_and_bilinear(seed in 0u64..1000, a in -3.0f64..3.0) {
        let grid = Grid::new(7.0, 8).unwrap();
        let mut rng = common::rng(seed);
        let f = common::random_field(&grid, &mut rng);
        let g = common::random_field(&grid, &mut rng);
        let h = common::random_field(&grid, &mut rng);
        for space in [Space::L2, Space::H1] {
            let fg = f.inner_product(&g, space).unwrap();
            let gf = g.inner_product(&f, space).unwrap();
            prop_assert!((fg - gf).abs() <= 1e-12 * fg.abs().max(1.0));
            let left = f.add_scaled(a, &h).unwrap().inner_product(&g, space).unwrap();
            let right = fg + a * h.inner_product(&g, space).unwrap();
            prop_assert!((left - right).abs() <= 1e-11 * left.abs().max(1.0));
            prop_assert!(f.inner_product(&f, space).unwrap() > 0.0);
        }
        let h1 = f.inner_product(&f, Space::H1).unwrap();
        let l2 = f.inner_product(&f, Space::L2).unwrap();
        prop_assert!(h1 >= l2);
    }

    #[test]
    fn kernels_are_linear(seed in 0u64..1000, a in -2.0f64..2.0, mu in 0.1f64..4.0) {
        let grid = Grid::new(7.0, 8).unwrap();
        let mut rng = common::rng(seed);
        let f = common::random_field(&grid, &mut rng);
        let g = common::random_field(&grid, &mut rng);
        for kernel in [KernelSpec::Resolvent(mu), KernelSpec::Coulomb, KernelSpec::ScfShift(-mu), KernelSpec::TinvComponent(-mu)] {
            let combined = f.add_scaled(a, &g).unwrap().apply_kernel(kernel).unwrap();
            let separate = f.apply_kernel(kernel).unwrap().add_scaled(a, &g.apply_kernel(kernel).unwrap()).unwrap();
            let scale = max_abs(combined.values()).max(1.0);
            let err = combined.values().iter().zip(separate.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-12 * scale);
        }
    }

    #[test]
    fn resolvent_is_self_adjoint(seed in 0u64..1000) {
        let grid = Grid::new(7.0, 8).unwrap();
        let mut rng = common::rng(seed);
        let f = common::random_field(&grid, &mut rng);
        let g = common::random_field(&grid, &mut rng);
        let rf = f.apply_kernel(KernelSpec::Resolvent(1.0)).unwrap();
        let rg = g.apply_kernel(KernelSpec::Resolvent(1.0)).unwrap();
        let a = rf.inner_product(&g, Space::L2).unwrap();
        let b = f.inner_product(&rg, Space::L2).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        // R is the Riesz map of H¹: ⟨Rf, g⟩_{H¹} = ⟨f, g⟩_{L²}
        let c = rf.inner_product(&g, Space::H1).unwrap();
        let d = f.inner_product(&g, Space::L2).unwrap();
        prop_assert!((c - d).abs() <= 1e-11 * d.abs().max(1.0));
    }
}
