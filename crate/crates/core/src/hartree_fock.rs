//! Restricted closed-shell Hartree-Fock energy and its derivatives.
//!
//! Orbitals are doubly occupied, so with `J` the Coulomb convolution
//!
//! ```text
//! E(φ) = 2 Σ_i (i|h|i) + Σ_ij [2 (ii|jj) − (ij|ij)].
//! ```
//!
//! Kinetic terms use `⟨∇f, ∇g⟩ = ⟨f, g⟩_{H¹} − ⟨f, g⟩_{L²}`, so nothing is
//! differentiated explicitly.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, Grid, KernelSpec};
use crate::linalg::{symmetric_part, SmallMatrix};
use crate::molecule::{nuclear_potential, Molecule};
use crate::orbitals::OrbitalVector;

/// The resolvent `(1 − Δ)⁻¹` that maps L² duals to H¹ representers.
pub const RIESZ: KernelSpec = KernelSpec::Resolvent(1.0);

/// Nuclear geometry together with its sampled nuclear potential.
#[derive(Clone, Debug)]
pub struct HfProblem {
    molecule: Molecule,
    potential: Field,
    softening: f64,
}

impl HfProblem {
    pub fn new(molecule: Molecule, grid: &Grid, softening: f64) -> Result<Self> {
        let potential = nuclear_potential(&molecule, grid, softening)?;
        Ok(Self {
            molecule,
            potential,
            softening,
        })
    }

    /// Use an already sampled external potential, for tests and model problems.
    pub fn from_parts(molecule: Molecule, potential: Field, softening: f64) -> Self {
        Self {
            molecule,
            potential,
            softening,
        }
    }

    pub fn molecule(&self) -> &Molecule {
        &self.molecule
    }

    pub fn potential(&self) -> &Field {
        &self.potential
    }

    pub fn grid(&self) -> &Grid {
        self.potential.grid()
    }

    pub fn softening(&self) -> f64 {
        self.softening
    }

    fn check(&self, phi: &OrbitalVector) -> Result<()> {
        if phi.grid() != self.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

/// One-body integral `(i|h|j) = ½⟨∇i, ∇j⟩ + ⟨V i, j⟩`.
pub fn one_body(i: &Field, j: &Field, potential: &Field) -> Result<f64> {
    let h1 = i.inner_product(j, crate::Space::H1)?;
    let l2 = i.inner_product(j, crate::Space::L2)?;
    let vi = i.multiply(potential)?;
    Ok(0.5 * (h1 - l2) + vi.inner_product(j, crate::Space::L2)?)
}

/// Two-body integral `(ij|kl) = ⟨J(i j), k l⟩`.
pub fn two_body(i: &Field, j: &Field, k: &Field, l: &Field) -> Result<f64> {
    let left = i.multiply(j)?;
    let right = k.multiply(l)?;
    let coulomb = left.apply_kernel(KernelSpec::Coulomb)?;
    coulomb.inner_product(&right, crate::Space::L2)
}

/// Mean-field quantities of one orbital tuple, built from the `N(N+1)/2`
/// pair potentials `J(φ_i φ_j)`.
///
/// Energy, potential action, gradient and Fock matrix all come from the
/// same pair potentials, so one build serves an energy evaluation and the
/// derivative at the same point.
#[derive(Clone, Debug)]
pub struct MeanField {
    phi: OrbitalVector,
    /// `⟨∇φ_i, ∇φ_j⟩`.
    kinetic: SmallMatrix,
    /// `⟨V φ_i, φ_j⟩`.
    nuclear: SmallMatrix,
    pair_potentials: Vec<Field>,
    energy: f64,
}

fn pair_index(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    b * (b + 1) / 2 + a
}

impl MeanField {
    pub fn build(phi: &OrbitalVector, problem: &HfProblem) -> Result<Self> {
        problem.check(phi)?;
        let n = phi.len();
        let kinetic = phi.h1_cross(phi)? - phi.l2_gram();
        let v_phi: Vec<Field> = phi
            .iter()
            .map(|f| f.multiply_unchecked(problem.potential()))
            .collect();
        let nuclear = SmallMatrix::from_fn(n, n, |i, j| v_phi[i].l2_unchecked(phi.get(j)));

        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|b| (0..=b).map(move |a| (a, b))).collect();
        let densities: Vec<Field> = pairs
            .par_iter()
            .map(|&(a, b)| phi.get(a).multiply_unchecked(phi.get(b)))
            .collect();
        let pair_potentials: Vec<Field> = densities
            .par_iter()
            .map(|rho| {
                rho.apply_kernel(KernelSpec::Coulomb)
                    .expect("Coulomb kernel is always valid")
            })
            .collect();

        let mut two_electron = 0.0;
        for i in 0..n {
            let jii = &pair_potentials[pair_index(i, i)];
            for j in 0..n {
                let coulomb = jii.l2_unchecked(&densities[pair_index(j, j)]);
                let p = pair_index(i, j);
                let exchange = pair_potentials[p].l2_unchecked(&densities[p]);
                two_electron += 2.0 * coulomb - exchange;
            }
        }
        let one_electron: f64 = (0..n)
            .map(|i| kinetic[(i, i)] + 2.0 * nuclear[(i, i)])
            .sum();
        Ok(Self {
            phi: phi.clone(),
            kinetic,
            nuclear,
            pair_potentials,
            energy: one_electron + two_electron,
        })
    }

    /// Electronic energy (nuclear repulsion excluded).
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn orbitals(&self) -> &OrbitalVector {
        &self.phi
    }

    /// `⟨∇φ_i, ∇φ_j⟩`.
    pub fn kinetic_matrix(&self) -> &SmallMatrix {
        &self.kinetic
    }

    /// `J(φ_i φ_j)`.
    pub fn pair_potential(&self, i: usize, j: usize) -> &Field {
        &self.pair_potentials[pair_index(i, j)]
    }

    /// `(V(φ)φ)_i = V φ_i + Σ_j [2 J(φ_j²) φ_i − J(φ_i φ_j) φ_j]`.
    pub fn potential_action(&self, potential: &Field) -> OrbitalVector {
        let n = self.phi.len();
        let refs: Vec<&Field> = (0..n).map(|j| self.pair_potential(j, j)).collect();
        let hartree = Field::combine_unchecked(&vec![2.0; n], &refs);
        let local = Field::combine_unchecked(&[1.0, 1.0], &[potential, &hartree]);
        let out = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = local.multiply_unchecked(self.phi.get(i));
                for j in 0..n {
                    let x = self
                        .pair_potential(i, j)
                        .multiply_unchecked(self.phi.get(j));
                    acc = Field::combine_unchecked(&[1.0, -1.0], &[&acc, &x]);
                }
                acc
            })
            .collect();
        OrbitalVector::from_fields(out)
    }

    /// Fock matrix before symmetrization, `½⟨∇φ_i, ∇φ_j⟩ + ⟨(V(φ)φ)_i, φ_j⟩`.
    pub fn raw_fock(&self, action: &OrbitalVector) -> SmallMatrix {
        let cross = action.l2_cross(&self.phi).expect("same grid");
        &self.kinetic * 0.5 + cross
    }

    /// `⟨V φ_i, φ_j⟩`.
    pub fn nuclear_matrix(&self) -> &SmallMatrix {
        &self.nuclear
    }
}

/// Electronic energy `E(φ)`.
pub fn energy(phi: &OrbitalVector, problem: &HfProblem) -> Result<f64> {
    Ok(MeanField::build(phi, problem)?.energy())
}

/// Two-electron closed form for a single orbital,
/// `‖∇φ‖² + 2⟨Vφ, φ⟩ + ⟨J(φ²), φ²⟩`.
pub fn single_orbital_energy(phi: &Field, problem: &HfProblem) -> Result<f64> {
    if phi.grid() != problem.grid() {
        return Err(Error::GridMismatch);
    }
    let kinetic = phi.h1_norm().powi(2) - phi.l2_norm().powi(2);
    let v = phi
        .multiply_unchecked(problem.potential())
        .l2_unchecked(phi);
    let rho = phi.multiply_unchecked(phi);
    let hartree = rho.apply_kernel(KernelSpec::Coulomb)?.l2_unchecked(&rho);
    Ok(kinetic + 2.0 * v + hartree)
}

/// Mean-field potential applied to each orbital, exchange included.
pub fn potential_action(phi: &OrbitalVector, problem: &HfProblem) -> Result<OrbitalVector> {
    Ok(MeanField::build(phi, problem)?.potential_action(problem.potential()))
}

/// H¹ representer of `dE(φ)`: `2φ + 4R(V(φ)φ − φ/2)`.
pub fn euclidean_gradient(phi: &OrbitalVector, problem: &HfProblem) -> Result<OrbitalVector> {
    let mf = MeanField::build(phi, problem)?;
    let action = mf.potential_action(problem.potential());
    Ok(gradient_from_action(phi, &action))
}

pub(crate) fn gradient_from_action(phi: &OrbitalVector, action: &OrbitalVector) -> OrbitalVector {
    let shifted = action.lincomb_unchecked(1.0, -0.5, phi);
    let resolved = shifted.apply_kernel(RIESZ).expect("valid resolvent");
    phi.lincomb_unchecked(2.0, 4.0, &resolved)
}

/// Symmetrized Fock matrix `ε_ij = ⟨(F(φ)φ)_i, φ_j⟩`.
pub fn fock_matrix(phi: &OrbitalVector, problem: &HfProblem) -> Result<SmallMatrix> {
    let mf = MeanField::build(phi, problem)?;
    let action = mf.potential_action(problem.potential());
    Ok(symmetric_part(&mf.raw_fock(&action)))
}
