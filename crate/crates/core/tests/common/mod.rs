#![allow(dead_code)]

pub mod geometry;
pub mod runs;
pub mod spectral;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sobolev_hf::molecule::initial_guess;
use sobolev_hf::{Field, Grid, GuessSpec, HfProblem, Molecule, OrbitalVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A smooth random field: a few Gaussians with random centers, widths and
/// signs, plus a low plane wave.
pub fn random_field(grid: &Grid, rng: &mut ChaCha8Rng) -> Field {
    let half = 0.25 * grid.box_length();
    let bumps: Vec<([f64; 3], f64, f64)> = (0..4)
        .map(|_| {
            (
                [0, 1, 2].map(|_| rng.random_range(-half..half)),
                rng.random_range(0.5..1.5),
                rng.random_range(-1.0..1.0),
            )
        })
        .collect();
    let k = 2.0 * std::f64::consts::PI / grid.box_length();
    let wave = rng.random_range(-0.1..0.1);
    Field::sample(grid, |x, y, z| {
        let mut v = wave * (k * x + 2.0 * k * y).cos();
        for (c, a, w) in &bumps {
            let r2 = (x - c[0]).powi(2) + (y - c[1]).powi(2) + (z - c[2]).powi(2);
            v += w * (-a * r2).exp();
        }
        v
    })
    .unwrap()
}

pub fn random_vector(grid: &Grid, n: usize, rng: &mut ChaCha8Rng) -> OrbitalVector {
    OrbitalVector::new((0..n).map(|_| random_field(grid, rng)).collect()).unwrap()
}

/// H₂Be on a small grid, with `n` random orthonormal orbitals.
pub fn h2be_point(
    points: usize,
    box_length: f64,
    n: usize,
    seed: u64,
) -> (HfProblem, OrbitalVector) {
    let grid = Grid::new(box_length, points).unwrap();
    let mol = Molecule::h2be();
    let problem = HfProblem::new(mol.clone(), &grid, grid.spacing()).unwrap();
    let phi = initial_guess(&GuessSpec::random(seed), &mol, &grid, n).unwrap();
    (problem, phi)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Best relative error of central differences of `E(φ + t v)` against
/// `slope` over a sweep of step sizes.
pub fn fd_best_error(
    problem: &HfProblem,
    phi: &OrbitalVector,
    v: &OrbitalVector,
    slope: f64,
) -> f64 {
    let energy = |t: f64| {
        sobolev_hf::hartree_fock::energy(&phi.lincomb(1.0, t, v).unwrap(), problem).unwrap()
    };
    [1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5]
        .iter()
        .map(|&t| rel((energy(t) - energy(-t)) / (2.0 * t), slope))
        .fold(f64::INFINITY, f64::min)
}
