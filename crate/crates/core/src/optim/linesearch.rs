use super::{LineSearchParams, Objective};
use crate::error::{Error, Result};

/// Backtracking reductions before giving up. Failing this often means the
/// energy differences have reached the discretization noise floor.
pub const MAX_REDUCTIONS: usize = 60;

#[derive(Clone, Debug)]
pub struct LineSearchResult<P> {
    pub alpha: f64,
    pub point: P,
    /// Trial step for the next line search.
    pub next_trial: f64,
    /// Energy evaluations spent, accepted trial included.
    pub evals: usize,
    pub rejections: usize,
    pub slope: f64,
}

/// Armijo backtracking along `p` from `x`.
///
/// Accepts the first `α = α_trial τ^m` with
/// `g(α) ≤ g(0) + r α ⟨p, grad⟩`, where `g(α) = E(R_x(α p))`. The next trial
/// grows to `min(γα, α_max)` if the stronger decrease with `r̄` holds and
/// stays at `α` otherwise. A retraction that fails because the step is too
/// large counts as a rejection.
pub fn armijo_linesearch<O: Objective>(
    obj: &O,
    x: &O::Point,
    p: &O::Vector,
    grad: &O::Vector,
    alpha_trial: f64,
    params: &LineSearchParams,
) -> Result<LineSearchResult<O::Point>> {
    let slope = obj.inner(p, grad);
    if !(slope < 0.0) {
        return Err(Error::NotDescent { slope });
    }
    let g0 = obj.energy(x);
    let mut alpha = alpha_trial;
    for reductions in 0..=MAX_REDUCTIONS {
        let evals = reductions + 1;
        match obj.retract(x, p, alpha) {
            Ok(point) => {
                let g = obj.energy(&point);
                if g <= g0 + params.r * alpha * slope {
                    let next_trial = if g <= g0 + params.r_bar * alpha * slope {
                        (params.gamma * alpha).min(params.alpha_max)
                    } else {
                        alpha
                    };
                    return Ok(LineSearchResult {
                        alpha,
                        point,
                        next_trial,
                        evals,
                        rejections: reductions,
                        slope,
                    });
                }
            }
            Err(Error::SingularOverlap { .. }) => {}
            Err(e) => return Err(e),
        }
        alpha *= params.tau;
    }
    Err(Error::LineSearchFailed {
        reductions: MAX_REDUCTIONS,
    })
}
