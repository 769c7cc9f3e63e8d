use std::time::Instant;

use super::{
    armijo_linesearch, CgParams, LineSearchParams, LineSearchRecord, Objective, OptimizerTrace,
    Solution, SolveError, SolveResult, StopCriteria, TraceRow,
};
use crate::error::Result;

/// Preconditioned nonlinear conjugate gradients with a clamped
/// Polak-Ribière coefficient and restarts.
///
/// With `P` the preconditioner and `T` the transport to the new iterate,
///
/// ```text
/// β = ⟨P g₊ − T P g, g₊⟩ / ⟨P g, g⟩,   clamped to [0, β_max]
/// p₊ = −P g₊ + β T p
/// ```
///
/// The direction restarts as `−P g₊` when it fails to descend, when more
/// than `restart_cooldown` iterations have passed since the last restart
/// and `⟨T P g, g₊⟩ / ⟨P g, g⟩ ≥ η`, or (optionally) when the line search
/// rejected a trial step.
pub fn conjugate_gradient<O: Objective>(
    obj: &O,
    x0: O::Point,
    ls: &LineSearchParams,
    cg: &CgParams,
    stop: &StopCriteria,
) -> SolveResult<O::Point, O::Aux> {
    let mut trace = OptimizerTrace::default();
    match run(obj, x0, ls, cg, stop, &mut trace) {
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

fn run<O: Objective>(
    obj: &O,
    x0: O::Point,
    ls: &LineSearchParams,
    cg: &CgParams,
    stop: &StopCriteria,
    trace: &mut OptimizerTrace,
) -> Result<(O::Point, O::Aux, bool)> {
    ls.validate()?;
    cg.validate()?;
    stop.validate()?;
    let clock = Instant::now();
    let mut x = x0;
    let (mut g, mut aux) = obj.gradient(&x)?;
    let mut pg = obj.precondition(&x, &g, &aux)?;
    let mut p = obj.lincomb(-1.0, &pg, 0.0, &pg);
    trace.rows.push(TraceRow {
        iter: 0,
        energy: obj.energy(&x),
        grad_h1: obj.inner(&g, &g).sqrt(),
        update_l2: 0.0,
        alpha: 0.0,
        beta: 0.0,
        restart: false,
        energy_evals: 1,
        wall_ms: clock.elapsed().as_secs_f64() * 1e3,
    });

    let mut alpha_trial = ls.alpha0;
    let mut last_restart = 0usize;
    for n in 0..stop.max_iterations {
        let step = armijo_linesearch(obj, &x, &p, &g, alpha_trial, ls)?;
        let iter = n + 1;
        trace.line_searches.push(LineSearchRecord {
            iter,
            g0: obj.energy(&x),
            g_alpha: obj.energy(&step.point),
            alpha: step.alpha,
            slope: step.slope,
            rejections: step.rejections,
        });
        alpha_trial = step.next_trial;
        let update = obj.update_norm(&x, &step.point);
        let x_new = step.point;

        let (g_new, aux_new) = obj.gradient(&x_new)?;
        let pg_new = obj.precondition(&x_new, &g_new, &aux_new)?;
        let pg_moved = obj.transport(&x_new, &pg)?;
        let p_moved = obj.transport(&x_new, &p)?;

        let denom = obj.inner(&pg, &g);
        let numer = obj.inner(&pg_new, &g_new) - obj.inner(&pg_moved, &g_new);
        let mut beta = (numer / denom).clamp(0.0, cg.beta_max);
        if !beta.is_finite() {
            beta = 0.0;
        }
        let mut p_new = obj.lincomb(-1.0, &pg_new, beta, &p_moved);

        let non_descent = obj.inner(&p_new, &g_new) >= 0.0;
        let powell = n - last_restart > cg.restart_cooldown
            && obj.inner(&pg_moved, &g_new) / denom >= cg.eta_powell;
        let rejected = cg.restart_on_reject && step.rejections > 0;
        let restart = non_descent || powell || rejected;
        if restart {
            last_restart = n;
            beta = 0.0;
            p_new = obj.lincomb(-1.0, &pg_new, 0.0, &pg_new);
        }

        x = x_new;
        g = g_new;
        aux = aux_new;
        pg = pg_new;
        p = p_new;
        trace.rows.push(TraceRow {
            iter,
            energy: obj.energy(&x),
            grad_h1: obj.inner(&g, &g).sqrt(),
            update_l2: update,
            alpha: step.alpha,
            beta,
            restart,
            energy_evals: step.evals,
            wall_ms: clock.elapsed().as_secs_f64() * 1e3,
        });
        if update < stop.update_tol {
            return Ok((x, aux, true));
        }
    }
    Ok((x, aux, false))
}
