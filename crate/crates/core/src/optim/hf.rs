use super::{Manifold, Objective};
use crate::error::Result;
use crate::grassmann;
use crate::hartree_fock::{HfProblem, MeanField};
use crate::linalg::{symmetric_part, SmallMatrix};
use crate::orbitals::OrbitalVector;
use crate::stiefel::{self, Frame};
use crate::Space;

/// An iterate: orbitals with their projection frame and mean field.
#[derive(Clone, Debug)]
pub struct HfPoint {
    frame: Frame,
    mean_field: MeanField,
}

impl HfPoint {
    pub fn new(phi: &OrbitalVector, problem: &HfProblem) -> Result<Self> {
        Ok(Self {
            frame: Frame::new(phi)?,
            mean_field: MeanField::build(phi, problem)?,
        })
    }

    pub fn orbitals(&self) -> &OrbitalVector {
        self.frame.orbitals()
    }

    pub fn energy(&self) -> f64 {
        self.mean_field.energy()
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mean_field(&self) -> &MeanField {
        &self.mean_field
    }

    /// Symmetrized Fock matrix at this point.
    pub fn fock_matrix(&self, problem: &HfProblem) -> SmallMatrix {
        let action = self.mean_field.potential_action(problem.potential());
        symmetric_part(&self.mean_field.raw_fock(&action))
    }
}

/// Gradient-side data: the Lagrange matrix `A(∇E, φ)` feeds the
/// preconditioner.
#[derive(Clone, Debug)]
pub struct GradientInfo {
    pub lagrange: SmallMatrix,
    /// `‖ωφ‖_{H¹}` removed by the horizontal projection (zero on Stiefel).
    pub vertical_part: f64,
}

/// Hartree-Fock energy on St(N) or Gr(N) with the H¹ metric.
pub struct HfObjective<'a> {
    pub problem: &'a HfProblem,
    pub manifold: Manifold,
}

impl<'a> HfObjective<'a> {
    pub fn new(problem: &'a HfProblem, manifold: Manifold) -> Self {
        Self { problem, manifold }
    }

    pub fn point(&self, phi: &OrbitalVector) -> Result<HfPoint> {
        HfPoint::new(phi, self.problem)
    }
}

impl Objective for HfObjective<'_> {
    type Point = HfPoint;
    type Vector = OrbitalVector;
    type Aux = GradientInfo;

    fn energy(&self, x: &HfPoint) -> f64 {
        x.energy()
    }

    fn retract(&self, x: &HfPoint, v: &OrbitalVector, alpha: f64) -> Result<HfPoint> {
        let phi = stiefel::lowdin_retract(x.orbitals(), &v.scaled(alpha))?;
        HfPoint::new(&phi, self.problem)
    }

    fn gradient(&self, x: &HfPoint) -> Result<(OrbitalVector, GradientInfo)> {
        let (g, vertical_part) = match self.manifold {
            Manifold::Stiefel => (
                stiefel::gradient_at(&x.frame, &x.mean_field, self.problem)?,
                0.0,
            ),
            Manifold::Grassmann => {
                grassmann::grassmann_gradient_at(&x.frame, &x.mean_field, self.problem)?
            }
        };
        Ok((
            g.tangent.direction,
            GradientInfo {
                lagrange: g.lagrange,
                vertical_part,
            },
        ))
    }

    fn precondition(
        &self,
        x: &HfPoint,
        g: &OrbitalVector,
        aux: &GradientInfo,
    ) -> Result<OrbitalVector> {
        Ok(match self.manifold {
            Manifold::Stiefel => stiefel::precondition(&x.frame, g, &aux.lagrange)?,
            Manifold::Grassmann => grassmann::grassmann_precondition(&x.frame, g, &aux.lagrange)?,
        }
        .direction)
    }

    fn transport(&self, to: &HfPoint, v: &OrbitalVector) -> Result<OrbitalVector> {
        Ok(match self.manifold {
            Manifold::Stiefel => stiefel::transport(&to.frame, v)?,
            Manifold::Grassmann => grassmann::grassmann_transport(&to.frame, v)?,
        }
        .direction)
    }

    fn inner(&self, a: &OrbitalVector, b: &OrbitalVector) -> f64 {
        a.inner(b, Space::H1).expect("vectors share a grid")
    }

    fn lincomb(&self, a: f64, u: &OrbitalVector, b: f64, v: &OrbitalVector) -> OrbitalVector {
        v.lincomb_unchecked(b, a, u)
    }

    fn update_norm(&self, from: &HfPoint, to: &HfPoint) -> f64 {
        from.orbitals()
            .max_l2_distance(to.orbitals())
            .expect("iterates share a grid")
    }
}

/// `‖A − 4ε‖_F / ‖ε‖_F` at `x`, with `A = A(∇E, φ)` from the Stiefel
/// projection. Zero at an exact stationary point.
pub fn stationarity_residual(x: &HfPoint, problem: &HfProblem) -> Result<f64> {
    let g = stiefel::gradient_at(&x.frame, &x.mean_field, problem)?;
    let eps = symmetric_part(&x.mean_field.raw_fock(&g.action));
    Ok((&g.lagrange - &eps * 4.0).norm() / eps.norm())
}
