//! Solvers: Riemannian steepest descent and preconditioned conjugate
//! gradients with Armijo backtracking, and the SCF fixed-point iteration.
//!
//! The descent solvers are generic over [`Objective`], which bundles a
//! manifold with an energy. [`HfObjective`] is the Hartree-Fock instance.

mod cg;
mod hf;
mod linesearch;
mod params;
mod scf;
mod steepest;
pub mod testing;
mod trace;

pub use cg::conjugate_gradient;
pub use hf::{stationarity_residual, GradientInfo, HfObjective, HfPoint};
pub use linesearch::{armijo_linesearch, LineSearchResult, MAX_REDUCTIONS};
pub use params::{CgParams, LineSearchParams, Manifold, StopCriteria};
pub use scf::{scf_fixed_point, SCF_EIGENVALUE_CAP, SCF_MAX_RISES};
pub use steepest::steepest_descent;
pub use trace::{LineSearchRecord, OptimizerTrace, TraceRow};

use crate::error::{Error, Result};

/// A smooth energy on a Riemannian manifold, seen through retractions,
/// vector transport and a preconditioner.
///
/// Points carry their energy, so [`Objective::energy`] is a cheap lookup and
/// every call to [`Objective::retract`] counts as one energy evaluation.
pub trait Objective {
    type Point: Clone;
    type Vector: Clone;
    /// Data produced with the gradient and needed by the preconditioner.
    type Aux: Clone;

    fn energy(&self, x: &Self::Point) -> f64;

    /// `R_x(α v)`, with its energy evaluated.
    fn retract(&self, x: &Self::Point, v: &Self::Vector, alpha: f64) -> Result<Self::Point>;

    fn gradient(&self, x: &Self::Point) -> Result<(Self::Vector, Self::Aux)>;

    fn precondition(
        &self,
        x: &Self::Point,
        g: &Self::Vector,
        aux: &Self::Aux,
    ) -> Result<Self::Vector>;

    /// Carry a vector from its base point into the tangent space at `to`.
    fn transport(&self, to: &Self::Point, v: &Self::Vector) -> Result<Self::Vector>;

    /// Riemannian metric.
    fn inner(&self, a: &Self::Vector, b: &Self::Vector) -> f64;

    /// `a u + b v`.
    fn lincomb(&self, a: f64, u: &Self::Vector, b: f64, v: &Self::Vector) -> Self::Vector;

    /// Size of the step between consecutive iterates, compared against
    /// [`StopCriteria::update_tol`].
    fn update_norm(&self, from: &Self::Point, to: &Self::Point) -> f64;
}

/// Result of a solver run that did not fail. Hitting the iteration cap is
/// reported through `converged = false`.
#[derive(Clone, Debug)]
pub struct Solution<P, A> {
    pub point: P,
    /// Gradient-side data at the final point.
    pub aux: A,
    pub converged: bool,
    pub iterations: usize,
    pub trace: OptimizerTrace,
}

/// A solver error together with the trace recorded up to the failure.
#[derive(Debug, thiserror::Error)]
#[error("{error} (after {} iterations)", trace.iterations())]
pub struct SolveError {
    #[source]
    pub error: Error,
    pub trace: OptimizerTrace,
}

impl SolveError {
    pub fn new(error: Error, trace: OptimizerTrace) -> Self {
        Self { error, trace }
    }
}

pub type SolveResult<P, A> = std::result::Result<Solution<P, A>, SolveError>;
