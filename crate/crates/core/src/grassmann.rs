//! The Grassmann manifold St(N)/O(N), handled through horizontal lifts on
//! Stiefel representatives.
//!
//! The vertical space at `φ` holds the gauge directions `ωφ` with `ω` skew.
//! A tangent vector `u` is horizontal when `Ψ_ij = ⟨u_i, φ_j⟩_{H¹}` is
//! symmetric; the vertical part is removed by solving
//! `ωΦ + Φω = Ψ − Ψᵀ`, `Φ_ij = ⟨φ_i, φ_j⟩_{H¹}`.

use crate::error::Result;
use crate::hartree_fock::{HfProblem, MeanField};
use crate::linalg::{asymmetry, require_skew, skew_part, sylvester_spd, SmallMatrix};
use crate::orbitals::OrbitalVector;
use crate::stiefel::{self, Frame, Gradient, TangentVector};

/// Skew `ω` with `ωΦ + Φω = K`, for SPD `Φ` and skew `K`.
pub fn solve_skew_sylvester(phi_gram: &SmallMatrix, k: &SmallMatrix) -> Result<SmallMatrix> {
    require_skew(k)?;
    Ok(skew_part(&sylvester_spd(phi_gram, k)?))
}

/// `Ψ_ij = ⟨u_i, φ_j⟩_{H¹}` at the frame's base.
pub fn h1_overlap(frame: &Frame, u: &OrbitalVector) -> Result<SmallMatrix> {
    u.l2_cross(&frame.h1_data().0)
}

/// Relative skew part of `Ψ`, zero for horizontal vectors.
pub fn horizontality_defect(frame: &Frame, u: &OrbitalVector) -> Result<f64> {
    Ok(asymmetry(&h1_overlap(frame, u)?))
}

/// Remove the vertical component: `u − ωφ`. Returns `ω`.
pub fn horizontal_project_with(
    frame: &Frame,
    u: &OrbitalVector,
) -> Result<(TangentVector, SmallMatrix)> {
    frame.orbitals().check_compatible(u)?;
    let psi = h1_overlap(frame, u)?;
    let (_, gram) = frame.h1_data();
    let omega = solve_skew_sylvester(gram, &(&psi - psi.transpose()))?;
    let direction = u.minus_rotated(&omega, frame.orbitals());
    Ok((
        TangentVector {
            base: frame.orbitals().clone(),
            direction,
        },
        omega,
    ))
}

pub fn horizontal_project(frame: &Frame, u: &OrbitalVector) -> Result<TangentVector> {
    Ok(horizontal_project_with(frame, u)?.0)
}

/// Horizontal lift of the Grassmann gradient, together with the size of
/// the vertical part that was removed, `‖ωφ‖_{H¹}`.
pub fn grassmann_gradient_at(
    frame: &Frame,
    mean_field: &MeanField,
    problem: &HfProblem,
) -> Result<(Gradient, f64)> {
    let mut g = stiefel::gradient_at(frame, mean_field, problem)?;
    let before = g.tangent.direction.clone();
    g.tangent = horizontal_project(frame, &before)?;
    let removed = before.lincomb(1.0, -1.0, &g.tangent.direction)?.h1_norm();
    Ok((g, removed))
}

pub fn grassmann_gradient(
    phi: &OrbitalVector,
    problem: &HfProblem,
) -> Result<(TangentVector, SmallMatrix)> {
    let frame = Frame::new(phi)?;
    let mf = MeanField::build(phi, problem)?;
    let (g, _) = grassmann_gradient_at(&frame, &mf, problem)?;
    Ok((g.tangent, g.lagrange))
}

/// Stiefel preconditioner followed by the horizontal projection.
pub fn grassmann_precondition(
    frame: &Frame,
    g: &OrbitalVector,
    lagrange: &SmallMatrix,
) -> Result<TangentVector> {
    let p = stiefel::precondition(frame, g, lagrange)?;
    horizontal_project(frame, &p.direction)
}

/// Stiefel transport followed by the horizontal projection at `to`.
pub fn grassmann_transport(to: &Frame, v: &OrbitalVector) -> Result<TangentVector> {
    let t = stiefel::transport(to, v)?;
    horizontal_project(to, &t.direction)
}
