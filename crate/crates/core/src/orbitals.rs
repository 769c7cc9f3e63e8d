//! Ordered tuples of orbitals sharing one grid.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{spectral_h1, Field, Grid, KernelSpec, Space};
use crate::linalg::{inverse_sqrt, SmallMatrix};

/// `N ≥ 1` fields on a shared grid. The orbital list is reference counted,
/// so clones are cheap.
///
/// Matrices act on the orbital index: `(Mφ)_i = Σ_j M_ij φ_j`.
#[derive(Clone, Debug)]
pub struct OrbitalVector {
    orbitals: Arc<Vec<Field>>,
}

impl OrbitalVector {
    pub fn new(orbitals: Vec<Field>) -> Result<Self> {
        let first = orbitals.first().ok_or(Error::Empty("orbital vector"))?;
        if orbitals.iter().any(|f| f.grid() != first.grid()) {
            return Err(Error::GridMismatch);
        }
        Ok(Self::from_fields(orbitals))
    }

    pub(crate) fn from_fields(orbitals: Vec<Field>) -> Self {
        Self {
            orbitals: Arc::new(orbitals),
        }
    }

    pub fn len(&self) -> usize {
        self.orbitals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbitals.is_empty()
    }

    pub fn grid(&self) -> &Grid {
        self.orbitals[0].grid()
    }

    pub fn orbitals(&self) -> &[Field] {
        &self.orbitals
    }

    pub fn get(&self, i: usize) -> &Field {
        &self.orbitals[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Field> {
        self.orbitals.iter()
    }

    /// Errors unless `other` has the same length and grid.
    pub fn check_compatible(&self, other: &OrbitalVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        if self.grid() != other.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    fn check_grid(&self, other: &OrbitalVector) -> Result<()> {
        if self.grid() != other.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// `C_ij = ⟨self_i, other_j⟩_{L²}`.
    pub fn l2_cross(&self, other: &OrbitalVector) -> Result<SmallMatrix> {
        self.check_grid(other)?;
        Ok(SmallMatrix::from_fn(self.len(), other.len(), |i, j| {
            self.orbitals[i].l2_unchecked(&other.orbitals[j])
        }))
    }

    /// L² overlap (Gram) matrix.
    pub fn l2_gram(&self) -> SmallMatrix {
        let n = self.len();
        let mut s = SmallMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.orbitals[i].l2_unchecked(&self.orbitals[j]);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        s
    }

    /// `Ψ_ij = ⟨self_i, other_j⟩_{H¹}`.
    pub fn h1_cross(&self, other: &OrbitalVector) -> Result<SmallMatrix> {
        self.check_grid(other)?;
        let a: Vec<_> = self.orbitals.iter().map(Field::spectrum).collect();
        let b: Vec<_> = other.orbitals.iter().map(Field::spectrum).collect();
        let grid = self.grid();
        Ok(SmallMatrix::from_fn(self.len(), other.len(), |i, j| {
            spectral_h1(grid, &a[i], &b[j])
        }))
    }

    /// `Σ_i ⟨self_i, other_i⟩` in the given space.
    pub fn inner(&self, other: &OrbitalVector, space: Space) -> Result<f64> {
        self.check_compatible(other)?;
        match space {
            Space::L2 => Ok(self
                .orbitals
                .iter()
                .zip(other.orbitals.iter())
                .map(|(a, b)| a.l2_unchecked(b))
                .sum()),
            Space::H1 => {
                let grid = self.grid();
                Ok(self
                    .orbitals
                    .iter()
                    .zip(other.orbitals.iter())
                    .map(|(a, b)| spectral_h1(grid, &a.spectrum(), &b.spectrum()))
                    .sum())
            }
        }
    }

    pub fn h1_norm(&self) -> f64 {
        self.orbitals
            .iter()
            .map(|f| f.h1_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.orbitals
            .iter()
            .map(|f| f.l2_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest per-orbital L² distance `max_i ‖self_i - other_i‖`.
    pub fn max_l2_distance(&self, other: &OrbitalVector) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .orbitals
            .iter()
            .zip(other.orbitals.iter())
            .map(|(a, b)| Field::combine_unchecked(&[1.0, -1.0], &[a, b]).l2_norm())
            .fold(0.0, f64::max))
    }

    /// `‖S - I‖_F` for the L² overlap matrix.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.len();
        (self.l2_gram() - SmallMatrix::identity(n, n)).norm()
    }

    /// `M φ` for an `M × N` matrix.
    pub fn rotate(&self, m: &SmallMatrix) -> Result<OrbitalVector> {
        if m.ncols() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: m.ncols(),
            });
        }
        Ok(self.rotate_unchecked(m))
    }

    pub(crate) fn rotate_unchecked(&self, m: &SmallMatrix) -> OrbitalVector {
        let refs: Vec<&Field> = self.orbitals.iter().collect();
        let out = (0..m.nrows())
            .map(|i| {
                let coeffs: Vec<f64> = (0..m.ncols()).map(|j| m[(i, j)]).collect();
                Field::combine_unchecked(&coeffs, &refs)
            })
            .collect();
        OrbitalVector::from_fields(out)
    }

    /// `a · self + b · other`, orbital by orbital.
    pub fn lincomb(&self, a: f64, b: f64, other: &OrbitalVector) -> Result<OrbitalVector> {
        self.check_compatible(other)?;
        Ok(self.lincomb_unchecked(a, b, other))
    }

    pub(crate) fn lincomb_unchecked(&self, a: f64, b: f64, other: &OrbitalVector) -> OrbitalVector {
        OrbitalVector::from_fields(
            self.orbitals
                .iter()
                .zip(other.orbitals.iter())
                .map(|(x, y)| Field::combine_unchecked(&[a, b], &[x, y]))
                .collect(),
        )
    }

    /// `self - M · other` for an `N × N` matrix.
    pub(crate) fn minus_rotated(&self, m: &SmallMatrix, other: &OrbitalVector) -> OrbitalVector {
        let n = self.len();
        let mut refs: Vec<&Field> = vec![];
        refs.extend(other.orbitals.iter());
        OrbitalVector::from_fields(
            (0..n)
                .map(|i| {
                    let mut coeffs: Vec<f64> = (0..other.len()).map(|j| -m[(i, j)]).collect();
                    let mut fields = refs.clone();
                    coeffs.push(1.0);
                    fields.push(&self.orbitals[i]);
                    Field::combine_unchecked(&coeffs, &fields)
                })
                .collect(),
        )
    }

    pub fn scaled(&self, a: f64) -> OrbitalVector {
        OrbitalVector::from_fields(self.orbitals.iter().map(|f| f.scaled(a)).collect())
    }

    /// Apply the same kernel to every orbital.
    pub fn apply_kernel(&self, kernel: KernelSpec) -> Result<OrbitalVector> {
        kernel.validate()?;
        let out: Result<Vec<Field>> = self
            .orbitals
            .par_iter()
            .map(|f| f.apply_kernel(kernel))
            .collect();
        Ok(OrbitalVector::from_fields(out?))
    }

    /// Spectral `(1 - Δ) φ_i`, the L² representer of the H¹ inner product:
    /// `⟨u, φ⟩_{H¹} = ⟨u, (1 - Δ)φ⟩_{L²}`.
    pub(crate) fn h1_dual(&self) -> OrbitalVector {
        OrbitalVector::from_fields(
            self.orbitals
                .par_iter()
                .map(|f| f.apply_symbol(|_, k2| 1.0 + k2))
                .collect(),
        )
    }

    /// Löwdin orthonormalization `S^{-1/2} ψ`, the L²-closest orthonormal tuple.
    pub fn lowdin_orthonormalize(&self) -> Result<OrbitalVector> {
        let s = inverse_sqrt(&self.l2_gram())?;
        Ok(self.rotate_unchecked(&s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussians(grid: &Grid, centers: &[[f64; 3]]) -> OrbitalVector {
        OrbitalVector::new(
            centers
                .iter()
                .map(|c| {
                    Field::sample(grid, |x, y, z| {
                        (-((x - c[0]).powi(2) + (y - c[1]).powi(2) + (z - c[2]).powi(2))).exp()
                    })
                    .unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_empty_and_mixed_grids() {
        assert!(OrbitalVector::new(vec![]).is_err());
        let a = Field::constant(&Grid::new(8.0, 8).unwrap(), 1.0);
        let b = Field::constant(&Grid::new(8.0, 10).unwrap(), 1.0);
        assert!(matches!(
            OrbitalVector::new(vec![a, b]),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn lowdin_gives_orthonormal_set() {
        let grid = Grid::new(12.0, 16).unwrap();
        let phi = gaussians(&grid, &[[0.0, 0.0, 0.0], [0.8, 0.0, 0.0], [0.0, 0.5, 0.3]]);
        let q = phi.lowdin_orthonormalize().unwrap();
        assert!(q.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn rotation_and_minus_rotated_agree() {
        let grid = Grid::new(12.0, 16).unwrap();
        let phi = gaussians(&grid, &[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]);
        let m = SmallMatrix::from_row_slice(2, 2, &[0.3, -1.0, 2.0, 0.5]);
        let direct = phi.lincomb(1.0, -1.0, &phi.rotate(&m).unwrap()).unwrap();
        let fused = phi.minus_rotated(&m, &phi);
        assert!(direct.max_l2_distance(&fused).unwrap() < 1e-14);
    }

    #[test]
    fn h1_cross_matches_dual_route() {
        let grid = Grid::new(12.0, 16).unwrap();
        let u = gaussians(&grid, &[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]);
        let v = gaussians(&grid, &[[0.0, 0.4, 0.0], [1.0, 0.0, -0.7]]);
        let a = u.h1_cross(&v).unwrap();
        let b = u.l2_cross(&v.h1_dual()).unwrap();
        assert!((a - b).norm() < 1e-12);
    }
}
