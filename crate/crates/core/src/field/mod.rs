//! Scalar fields on a periodic cubic lattice.
//!
//! Every convolution operator used by the solvers is a Fourier multiplier on
//! this lattice, so kernels act exactly on the discrete space. Inner products
//! are normalized to approximate continuum integrals: the constant field `c`
//! has squared L² norm `c² L³`.

mod dump;
mod fft;

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use fft::Fft3;

pub use dump::{read_orbital_dump, write_orbital_dump, DumpHeader};

/// Samples per reduction chunk. Partial sums are combined in a fixed order so
/// reductions are reproducible regardless of thread count.
const CHUNK: usize = 4096;

/// Periodic cubic sampling lattice `[-L/2, L/2)³` with `n` points per axis.
///
/// Cloning is cheap; clones share FFT plans and cached kernel symbols. Two
/// grids compare equal when their box length and point count agree.
#[derive(Clone)]
pub struct Grid(Arc<GridInner>);

struct GridInner {
    box_length: f64,
    n: usize,
    fft: Fft3,
    k2: Vec<f64>,
    coulomb: OnceLock<Vec<f64>>,
}

impl Grid {
    /// Build a grid of side `box_length` bohr with `points_per_axis` samples
    /// per axis. The point count must be even and at least 8.
    pub fn new(box_length: f64, points_per_axis: usize) -> Result<Self> {
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidParameter {
                name: "box_length",
                reason: format!("must be positive and finite, got {box_length}"),
            });
        }
        if points_per_axis < 8 || points_per_axis % 2 != 0 {
            return Err(Error::InvalidParameter {
                name: "points_per_axis",
                reason: format!("must be even and at least 8, got {points_per_axis}"),
            });
        }
        let n = points_per_axis;
        let k: Vec<f64> = (0..n).map(|i| wave_number(i, n, box_length)).collect();
        let mut k2 = Vec::with_capacity(n * n * n);
        for kz in &k {
            for ky in &k {
                for kx in &k {
                    k2.push(kx * kx + ky * ky + kz * kz);
                }
            }
        }
        Ok(Self(Arc::new(GridInner {
            box_length,
            n,
            fft: Fft3::new(n),
            k2,
            coulomb: OnceLock::new(),
        })))
    }

    pub fn box_length(&self) -> f64 {
        self.0.box_length
    }

    pub fn points_per_axis(&self) -> usize {
        self.0.n
    }

    /// Lattice spacing `h = L / n`.
    pub fn spacing(&self) -> f64 {
        self.0.box_length / self.0.n as f64
    }

    /// Total number of samples, `n³`.
    pub fn len(&self) -> usize {
        self.0.k2.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume element `h³` of the quadrature rule.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// Coordinate of lattice index `i` along one axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 * self.0.box_length + i as f64 * self.spacing()
    }

    /// Position of the sample with linear index `index` (x fastest).
    pub fn position(&self, index: usize) -> [f64; 3] {
        let n = self.0.n;
        [
            self.coordinate(index % n),
            self.coordinate((index / n) % n),
            self.coordinate(index / (n * n)),
        ]
    }

    /// Wave-vector component for lattice index `i`, `2π m / L` with
    /// `m ∈ {-n/2, …, n/2 - 1}`.
    pub fn wave_number(&self, i: usize) -> f64 {
        wave_number(i, self.0.n, self.0.box_length)
    }

    /// Largest wave-vector component magnitude, `π n / L`.
    pub fn max_wave_number(&self) -> f64 {
        PI * self.0.n as f64 / self.0.box_length
    }

    /// `|k|²` for every Fourier mode, in the same order as the samples.
    pub fn k_squared(&self) -> &[f64] {
        &self.0.k2
    }

    /// Radius of the spherically truncated Coulomb kernel, `L / 2`.
    pub fn coulomb_cutoff(&self) -> f64 {
        0.5 * self.0.box_length
    }

    fn coulomb_symbol(&self) -> &[f64] {
        self.0.coulomb.get_or_init(|| {
            let rc = self.coulomb_cutoff();
            self.0
                .k2
                .iter()
                .map(|&k2| truncated_coulomb(k2, rc))
                .collect()
        })
    }

    pub(crate) fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.0.fft.forward(&mut data);
        data
    }

    /// Inverse transform including the `1/n³` normalization; keeps the real part.
    pub(crate) fn inverse_real(&self, mut spectrum: Vec<Complex64>) -> Vec<f64> {
        self.0.fft.inverse(&mut spectrum);
        let scale = 1.0 / self.len() as f64;
        spectrum.into_iter().map(|c| c.re * scale).collect()
    }

    /// Weight turning a sum over Fourier modes into an L² integral:
    /// `h³ Σ_x f g = (h³ / n³) Σ_k F̄ G`.
    pub(crate) fn spectral_weight(&self) -> f64 {
        self.cell_volume() / self.len() as f64
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.n == other.0.n
                && self.0.box_length.to_bits() == other.0.box_length.to_bits())
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("box_length", &self.0.box_length)
            .field("points_per_axis", &self.0.n)
            .field("spacing", &self.spacing())
            .finish()
    }
}

fn wave_number(i: usize, n: usize, box_length: f64) -> f64 {
    let m = if i < n / 2 {
        i as f64
    } else {
        i as f64 - n as f64
    };
    2.0 * PI * m / box_length
}

fn truncated_coulomb(k2: f64, cutoff: f64) -> f64 {
    if k2 == 0.0 {
        2.0 * PI * cutoff * cutoff
    } else {
        4.0 * PI * (1.0 - (k2.sqrt() * cutoff).cos()) / k2
    }
}

/// Which inner product to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    L2,
    /// `⟨∇f, ∇g⟩ + ⟨f, g⟩`, evaluated spectrally.
    H1,
}

/// A Fourier-multiplier convolution operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelSpec {
    /// `(-Δ + μ)⁻¹`, the Yukawa resolvent; requires `μ > 0`.
    Resolvent(f64),
    /// Convolution with `1/|x|`, spherically truncated at `L/2`.
    Coulomb,
    /// `(-Δ/2 - ε)⁻¹`, the shifted kinetic inverse of the SCF map; requires `ε < 0`.
    ScfShift(f64),
    /// One diagonal factor of the kinetic-inverse preconditioner, symbol
    /// `(|k|² + 1) / (2|k|² - μ)`; requires `μ < 0`.
    TinvComponent(f64),
}

impl KernelSpec {
    pub fn resolvent(mu: f64) -> Result<Self> {
        let k = Self::Resolvent(mu);
        k.validate()?;
        Ok(k)
    }

    pub fn scf_shift(eps: f64) -> Result<Self> {
        let k = Self::ScfShift(eps);
        k.validate()?;
        Ok(k)
    }

    pub fn tinv_component(mu: f64) -> Result<Self> {
        let k = Self::TinvComponent(mu);
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| {
            Err(Error::InvalidParameter {
                name: "kernel",
                reason,
            })
        };
        match *self {
            Self::Resolvent(mu) if !(mu > 0.0 && mu.is_finite()) => {
                bad(format!("resolvent shift must be positive, got {mu}"))
            }
            Self::ScfShift(eps) if !(eps < 0.0 && eps.is_finite()) => {
                bad(format!("SCF shift must be negative, got {eps}"))
            }
            Self::TinvComponent(mu) if !(mu < 0.0 && mu.is_finite()) => bad(format!(
                "preconditioner eigenvalue must be negative, got {mu}"
            )),
            _ => Ok(()),
        }
    }

    /// Fourier symbol at squared wave number `k2` on `grid`.
    pub fn symbol(&self, grid: &Grid, k2: f64) -> f64 {
        match *self {
            Self::Resolvent(mu) => 1.0 / (k2 + mu),
            Self::Coulomb => truncated_coulomb(k2, grid.coulomb_cutoff()),
            Self::ScfShift(eps) => 1.0 / (0.5 * k2 - eps),
            Self::TinvComponent(mu) => (k2 + 1.0) / (2.0 * k2 - mu),
        }
    }
}

/// Real scalar function sampled on a [`Grid`]. Immutable once built.
#[derive(Clone)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("grid", &self.grid)
            .field("l2_norm", &self.l2_norm())
            .finish()
    }
}

impl Field {
    /// Wrap raw samples (x-fastest order). Rejects wrong lengths and
    /// non-finite values.
    pub fn from_values(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self::from_raw(grid, values))
    }

    pub(crate) fn from_raw(grid: &Grid, values: Vec<f64>) -> Self {
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_raw(grid, vec![0.0; grid.len()])
    }

    pub fn constant(grid: &Grid, value: f64) -> Self {
        Self::from_raw(grid, vec![value; grid.len()])
    }

    /// Evaluate `f(x, y, z)` at every lattice point; the lattice origin is
    /// the box center.
    pub fn sample<F>(grid: &Grid, f: F) -> Result<Self>
    where
        F: Fn(f64, f64, f64) -> f64 + Sync,
    {
        let values: Vec<f64> = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let [x, y, z] = grid.position(i);
                f(x, y, z)
            })
            .collect();
        Self::from_values(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    fn check_grid(&self, other: &Field) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Pointwise `Σ cᵢ fᵢ`.
    pub fn combine(coeffs: &[f64], fields: &[&Field]) -> Result<Field> {
        if coeffs.is_empty() || fields.is_empty() {
            return Err(Error::Empty("linear combination"));
        }
        if coeffs.len() != fields.len() {
            return Err(Error::DimensionMismatch {
                expected: coeffs.len(),
                found: fields.len(),
            });
        }
        let first = fields[0];
        for f in &fields[1..] {
            first.check_grid(f)?;
        }
        Ok(Self::combine_unchecked(coeffs, fields))
    }

    pub(crate) fn combine_unchecked(coeffs: &[f64], fields: &[&Field]) -> Field {
        let grid = fields[0].grid();
        let mut out = vec![0.0; grid.len()];
        out.par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| {
                let start = c * CHUNK;
                for (&a, f) in coeffs.iter().zip(fields) {
                    if a == 0.0 {
                        continue;
                    }
                    let src = &f.values[start..start + chunk.len()];
                    for (o, &v) in chunk.iter_mut().zip(src) {
                        *o += a * v;
                    }
                }
            });
        Field::from_raw(grid, out)
    }

    pub fn scaled(&self, a: f64) -> Field {
        Field::from_raw(&self.grid, self.values.par_iter().map(|v| a * v).collect())
    }

    /// `self + a · other`.
    pub fn add_scaled(&self, a: f64, other: &Field) -> Result<Field> {
        self.check_grid(other)?;
        Ok(Self::combine_unchecked(&[1.0, a], &[self, other]))
    }

    /// Pointwise product.
    pub fn multiply(&self, other: &Field) -> Result<Field> {
        self.check_grid(other)?;
        Ok(self.multiply_unchecked(other))
    }

    pub(crate) fn multiply_unchecked(&self, other: &Field) -> Field {
        let values = self
            .values
            .par_iter()
            .zip(other.values.par_iter())
            .map(|(a, b)| a * b)
            .collect();
        Field::from_raw(&self.grid, values)
    }

    /// L² or H¹ inner product, symmetric in its arguments.
    pub fn inner_product(&self, other: &Field, space: Space) -> Result<f64> {
        self.check_grid(other)?;
        Ok(match space {
            Space::L2 => self.l2_unchecked(other),
            Space::H1 => {
                let a = self.grid.forward(&self.values);
                let b = self.grid.forward(&other.values);
                spectral_h1(&self.grid, &a, &b)
            }
        })
    }

    pub(crate) fn l2_unchecked(&self, other: &Field) -> f64 {
        let partial: Vec<f64> = self
            .values
            .par_chunks(CHUNK)
            .zip(other.values.par_chunks(CHUNK))
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
            .collect();
        self.grid.cell_volume() * partial.iter().sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_unchecked(self).sqrt()
    }

    pub fn h1_norm(&self) -> f64 {
        let a = self.grid.forward(&self.values);
        spectral_h1(&self.grid, &a, &a).sqrt()
    }

    /// Apply a Fourier-multiplier kernel.
    pub fn apply_kernel(&self, kernel: KernelSpec) -> Result<Field> {
        kernel.validate()?;
        Ok(match kernel {
            KernelSpec::Coulomb => {
                let symbol = self.grid.coulomb_symbol();
                self.apply_symbol(|i, _| symbol[i])
            }
            k => {
                let grid = &self.grid;
                self.apply_symbol(|_, k2| k.symbol(grid, k2))
            }
        })
    }

    /// Multiply the spectrum by `symbol(mode index, |k|²)` and transform back.
    pub(crate) fn apply_symbol<S>(&self, symbol: S) -> Field
    where
        S: Fn(usize, f64) -> f64 + Sync,
    {
        let mut spectrum = self.grid.forward(&self.values);
        let k2 = self.grid.k_squared();
        spectrum
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, c)| *c *= symbol(i, k2[i]));
        Field::from_raw(&self.grid, self.grid.inverse_real(spectrum))
    }

    pub(crate) fn spectrum(&self) -> Vec<Complex64> {
        self.grid.forward(&self.values)
    }
}

/// `Σ_k (1 + |k|²) Re(ā b)`, scaled to an integral.
pub(crate) fn spectral_h1(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> f64 {
    let k2 = grid.k_squared();
    let partial: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .zip(k2.par_chunks(CHUNK))
        .map(|((a, b), k2)| {
            a.iter()
                .zip(b)
                .zip(k2)
                .map(|((x, y), k2)| (1.0 + k2) * (x.re * y.re + x.im * y.im))
                .sum::<f64>()
        })
        .collect();
    grid.spectral_weight() * partial.iter().sum::<f64>()
}
