use std::time::Instant;

use super::{
    armijo_linesearch, LineSearchParams, LineSearchRecord, Objective, OptimizerTrace, Solution,
    SolveError, SolveResult, StopCriteria, TraceRow,
};

/// Riemannian steepest descent `x ← R_x(−α grad E(x))` with Armijo
/// backtracking.
pub fn steepest_descent<O: Objective>(
    obj: &O,
    x0: O::Point,
    ls: &LineSearchParams,
    stop: &StopCriteria,
) -> SolveResult<O::Point, O::Aux> {
    let mut trace = OptimizerTrace::default();
    if let Err(e) = ls.validate().and_then(|_| stop.validate()) {
        return Err(SolveError::new(e, trace));
    }
    let clock = Instant::now();
    let mut x = x0;
    let (mut g, mut aux) = match obj.gradient(&x) {
        Ok(v) => v,
        Err(e) => return Err(SolveError::new(e, trace)),
    };
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
    let mut converged = false;
    for iter in 1..=stop.max_iterations {
        let p = obj.lincomb(-1.0, &g, 0.0, &g);
        let step = match armijo_linesearch(obj, &x, &p, &g, alpha_trial, ls) {
            Ok(s) => s,
            Err(e) => return Err(SolveError::new(e, trace)),
        };
        alpha_trial = step.next_trial;
        let update = obj.update_norm(&x, &step.point);
        trace.line_searches.push(LineSearchRecord {
            iter,
            g0: obj.energy(&x),
            g_alpha: obj.energy(&step.point),
            alpha: step.alpha,
            slope: step.slope,
            rejections: step.rejections,
        });
        x = step.point;
        (g, aux) = match obj.gradient(&x) {
            Ok(v) => v,
            Err(e) => return Err(SolveError::new(e, trace)),
        };
        trace.rows.push(TraceRow {
            iter,
            energy: obj.energy(&x),
            grad_h1: obj.inner(&g, &g).sqrt(),
            update_l2: update,
            alpha: step.alpha,
            beta: 0.0,
            restart: false,
            energy_evals: step.evals,
            wall_ms: clock.elapsed().as_secs_f64() * 1e3,
        });
        if update < stop.update_tol {
            converged = true;
            break;
        }
    }
    let iterations = trace.iterations();
    Ok(Solution {
        point: x,
        aux,
        converged,
        iterations,
        trace,
    })
}
