use std::time::Instant;

use super::{HfPoint, OptimizerTrace, Solution, SolveError, SolveResult, StopCriteria, TraceRow};
use crate::error::{Error, Result};
use crate::field::KernelSpec;
use crate::hartree_fock::HfProblem;
use crate::linalg::eigh;
use crate::orbitals::OrbitalVector;
use crate::stiefel;

/// Orbital energies above `−SCF_EIGENVALUE_CAP` are capped there so the
/// shifted kinetic inverse exists.
pub const SCF_EIGENVALUE_CAP: f64 = 0.1;

/// Consecutive energy increases tolerated before the iteration is abandoned.
pub const SCF_MAX_RISES: usize = 5;

/// Fixed-point iteration `φ ← −(−Δ/2 − ε(φ))⁻¹ V(φ)φ`.
///
/// Each step diagonalizes `ε = W Λ Wᵀ`, applies the scalar shifted inverses
/// to the rotated mean-field action `Wᵀ V(φ)φ`, rotates back by `W` and
/// Löwdin-orthonormalizes. The returned point's aux is the Lagrange matrix.
pub fn scf_fixed_point(
    problem: &HfProblem,
    phi0: &OrbitalVector,
    stop: &StopCriteria,
) -> SolveResult<HfPoint, crate::SmallMatrix> {
    let mut trace = OptimizerTrace::default();
    match run(problem, phi0, stop, &mut trace) {
        Ok((point, aux, converged)) => {
            let iterations = trace.iterations();
            Ok(Solution {
                point,
                aux,
                converged,
                iterations,
                trace,
            })
        }
        Err(e) => Err(SolveError::new(e, trace)),
    }
}

fn scf_step(x: &HfPoint, problem: &HfProblem, action: &OrbitalVector) -> Result<OrbitalVector> {
    let eps = x.fock_matrix(problem);
    let (lambda, w) = eigh(&eps);
    let rotated = action.rotate(&w.transpose())?;
    let updated: Result<Vec<_>> = rotated
        .iter()
        .zip(lambda.iter())
        .map(|(v, &l)| {
            Ok(
                v.apply_kernel(KernelSpec::ScfShift(l.min(-SCF_EIGENVALUE_CAP)))?
                    .scaled(-1.0),
            )
        })
        .collect();
    OrbitalVector::new(updated?)?
        .rotate(&w)?
        .lowdin_orthonormalize()
}

fn run(
    problem: &HfProblem,
    phi0: &OrbitalVector,
    stop: &StopCriteria,
    trace: &mut OptimizerTrace,
) -> Result<(HfPoint, crate::SmallMatrix, bool)> {
    stop.validate()?;
    let clock = Instant::now();
    let mut x = HfPoint::new(phi0, problem)?;
    let mut g = stiefel::gradient_at(x.frame(), x.mean_field(), problem)?;
    trace.rows.push(TraceRow {
        iter: 0,
        energy: x.energy(),
        grad_h1: g.tangent.h1_norm(),
        update_l2: 0.0,
        alpha: 0.0,
        beta: 0.0,
        restart: false,
        energy_evals: 1,
        wall_ms: clock.elapsed().as_secs_f64() * 1e3,
    });
    let mut rises = 0;
    for iter in 1..=stop.max_iterations {
        let phi = scf_step(&x, problem, &g.action)?;
        let next = HfPoint::new(&phi, problem)?;
        let update = x.orbitals().max_l2_distance(next.orbitals())?;
        rises = if next.energy() > x.energy() {
            rises + 1
        } else {
            0
        };
        x = next;
        g = stiefel::gradient_at(x.frame(), x.mean_field(), problem)?;
        trace.rows.push(TraceRow {
            iter,
            energy: x.energy(),
            grad_h1: g.tangent.h1_norm(),
            update_l2: update,
            alpha: 0.0,
            beta: 0.0,
            restart: false,
            energy_evals: 1,
            wall_ms: clock.elapsed().as_secs_f64() * 1e3,
        });
        if rises >= SCF_MAX_RISES {
            return Err(Error::ScfDiverged(rises));
        }
        if update < stop.update_tol {
            return Ok((x, g.lagrange, true));
        }
    }
    Ok((x, g.lagrange, false))
}
