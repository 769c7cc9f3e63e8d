//! The Stiefel manifold of L²-orthonormal orbital tuples, with the metric
//! inherited from H¹.
//!
//! The normal space at `φ` is spanned by `A·Rφ` for symmetric `A`, where
//! `R = (1 − Δ)⁻¹`, so projecting onto the tangent space reduces to one small
//! Sylvester equation.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::KernelSpec;
use crate::hartree_fock::{gradient_from_action, HfProblem, MeanField, RIESZ};
use crate::linalg::{eigh, require_symmetric, sylvester_spd, symmetric_part, SmallMatrix};
use crate::orbitals::OrbitalVector;
use crate::Space;

/// Preconditioner eigenvalues are capped at `−MU_FLOOR`: the kinetic
/// inverse only exists while the spectrum of `A` is negative.
pub const MU_FLOOR: f64 = 0.1;

/// A direction attached to a base point.
#[derive(Clone, Debug)]
pub struct TangentVector {
    pub base: OrbitalVector,
    pub direction: OrbitalVector,
}

impl TangentVector {
    pub fn h1_norm(&self) -> f64 {
        self.direction.h1_norm()
    }

    /// `⟨self, other⟩_{H¹}`; both must share a base.
    pub fn h1_inner(&self, other: &TangentVector) -> Result<f64> {
        self.direction.inner(&other.direction, Space::H1)
    }
}

/// A point on St(N) with the quantities every projection needs: `Rφ`, the
/// SPD matrix `B_ij = ⟨Rφ_i, φ_j⟩`, and (lazily) the H¹ data used by the
/// horizontal splitting.
#[derive(Clone, Debug)]
pub struct Frame {
    phi: OrbitalVector,
    riesz: OrbitalVector,
    b: SmallMatrix,
    h1: OnceLock<(OrbitalVector, SmallMatrix)>,
}

impl Frame {
    pub fn new(phi: &OrbitalVector) -> Result<Self> {
        let riesz = phi.apply_kernel(RIESZ)?;
        let b = symmetric_part(&riesz.l2_cross(phi)?);
        Ok(Self {
            phi: phi.clone(),
            riesz,
            b,
            h1: OnceLock::new(),
        })
    }

    pub fn orbitals(&self) -> &OrbitalVector {
        &self.phi
    }

    /// `Rφ` componentwise.
    pub fn riesz(&self) -> &OrbitalVector {
        &self.riesz
    }

    /// `B_ij = ⟨Rφ_i, φ_j⟩_{L²}`.
    pub fn b_matrix(&self) -> &SmallMatrix {
        &self.b
    }

    /// `(1 − Δ)φ` and the SPD H¹ Gram matrix `Φ_ij = ⟨φ_i, φ_j⟩_{H¹}`.
    pub(crate) fn h1_data(&self) -> &(OrbitalVector, SmallMatrix) {
        self.h1.get_or_init(|| {
            let dual = self.phi.h1_dual();
            let gram = symmetric_part(&self.phi.l2_cross(&dual).expect("same grid"));
            (dual, gram)
        })
    }

    /// `‖S − I‖_F` of the base point.
    pub fn orthonormality_defect(&self) -> f64 {
        self.phi.orthonormality_defect()
    }
}

/// Symmetric `A` with `AB + BA = M`, for SPD `B` and symmetric `M`.
pub fn solve_sym_sylvester(b: &SmallMatrix, m: &SmallMatrix) -> Result<SmallMatrix> {
    require_symmetric(m)?;
    Ok(symmetric_part(&sylvester_spd(b, m)?))
}

/// `max_ij |⟨d_i, φ_j⟩ + ⟨φ_i, d_j⟩|`, zero for tangent `d`.
pub fn tangency_defect(phi: &OrbitalVector, d: &OrbitalVector) -> Result<f64> {
    let c = d.l2_cross(phi)?;
    Ok((&c + c.transpose()).amax())
}

/// H¹-orthogonal projection onto the tangent space at the frame's base,
/// `u − A·Rφ` with `AB + BA = C + Cᵀ`, `C_ij = ⟨u_i, φ_j⟩`. Returns `A`.
pub fn project_tangent(frame: &Frame, u: &OrbitalVector) -> Result<(TangentVector, SmallMatrix)> {
    frame.phi.check_compatible(u)?;
    let c = u.l2_cross(&frame.phi)?;
    let a = solve_sym_sylvester(&frame.b, &(&c + c.transpose()))?;
    let direction = u.minus_rotated(&a, &frame.riesz);
    Ok((
        TangentVector {
            base: frame.phi.clone(),
            direction,
        },
        a,
    ))
}

/// Riemannian gradient with the Lagrange matrix `A = A(∇E, φ)`.
#[derive(Clone, Debug)]
pub struct Gradient {
    pub tangent: TangentVector,
    pub lagrange: SmallMatrix,
    pub euclidean: OrbitalVector,
    /// `V(φ)φ`.
    pub action: OrbitalVector,
}

/// Gradient from an already built mean field at the frame's base.
pub fn gradient_at(frame: &Frame, mean_field: &MeanField, problem: &HfProblem) -> Result<Gradient> {
    let action = mean_field.potential_action(problem.potential());
    let euclidean = gradient_from_action(&frame.phi, &action);
    let (tangent, lagrange) = project_tangent(frame, &euclidean)?;
    Ok(Gradient {
        tangent,
        lagrange,
        euclidean,
        action,
    })
}

/// `Proj_φ ∇E(φ)` and `A(∇E(φ), φ)`.
pub fn riemannian_gradient(
    phi: &OrbitalVector,
    problem: &HfProblem,
) -> Result<(TangentVector, SmallMatrix)> {
    let frame = Frame::new(phi)?;
    let mf = MeanField::build(phi, problem)?;
    let g = gradient_at(&frame, &mf, problem)?;
    Ok((g.tangent, g.lagrange))
}

/// The same gradient written as `(2 − (2 + A)R)φ + 4R(V(φ)φ)`.
pub fn assemble_gradient(
    frame: &Frame,
    lagrange: &SmallMatrix,
    action: &OrbitalVector,
) -> Result<OrbitalVector> {
    let resolved = action.apply_kernel(RIESZ)?;
    let kinetic = frame.phi.lincomb(2.0, -2.0, &frame.riesz)?;
    let kinetic = kinetic.minus_rotated(lagrange, &frame.riesz);
    kinetic.lincomb(1.0, 4.0, &resolved)
}

/// Löwdin retraction `S^{−1/2}(φ + δ)`.
pub fn lowdin_retract(phi: &OrbitalVector, delta: &OrbitalVector) -> Result<OrbitalVector> {
    phi.lincomb(1.0, 1.0, delta)?.lowdin_orthonormalize()
}

/// Move a vector into the tangent space at `to` by projection.
pub fn transport(to: &Frame, v: &OrbitalVector) -> Result<TangentVector> {
    Ok(project_tangent(to, v)?.0)
}

/// Floored spectrum and eigenvectors of `A`, as used by the preconditioner.
pub fn floored_spectrum(lagrange: &SmallMatrix) -> Result<(Vec<f64>, SmallMatrix)> {
    require_symmetric(lagrange).or_else(|e| match e {
        // roundoff skew is absorbed by the symmetrization in `eigh`
        Error::WrongSymmetry { defect, .. } if defect < 1e-8 => Ok(()),
        e => Err(e),
    })?;
    let (lambda, u) = eigh(lagrange);
    Ok((lambda.iter().map(|&l| l.min(-MU_FLOOR)).collect(), u))
}

/// `Proj_φ T⁻¹ g` with `T⁻¹ = U diag(T_μ⁻¹) Uᵀ`; the eigenvalues `μ` of `A`
/// are floored at `−MU_FLOOR`.
pub fn precondition(
    frame: &Frame,
    g: &OrbitalVector,
    lagrange: &SmallMatrix,
) -> Result<TangentVector> {
    frame.phi.check_compatible(g)?;
    let (mu, u) = floored_spectrum(lagrange)?;
    let rotated = g.rotate(&u.transpose())?;
    let scaled: Result<Vec<_>> = rotated
        .iter()
        .zip(&mu)
        .map(|(f, &m)| f.apply_kernel(KernelSpec::TinvComponent(m)))
        .collect();
    let back = OrbitalVector::new(scaled?)?.rotate(&u)?;
    transport(frame, &back)
}
