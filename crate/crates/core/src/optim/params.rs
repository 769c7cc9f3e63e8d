use crate::error::{Error, Result};

fn invalid(name: &'static str, reason: String) -> Error {
    Error::InvalidParameter { name, reason }
}

/// Armijo backtracking constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSearchParams {
    /// Sufficient-decrease constant.
    pub r: f64,
    /// Stronger decrease that lets the next trial step grow.
    pub r_bar: f64,
    /// Backtracking factor.
    pub tau: f64,
    /// Growth factor of the trial step.
    pub gamma: f64,
    pub alpha_max: f64,
    /// First trial step.
    pub alpha0: f64,
}

impl Default for LineSearchParams {
    /// Steepest-descent defaults; see [`LineSearchParams::for_cg`].
    fn default() -> Self {
        Self {
            r: 1e-4,
            r_bar: 0.7,
            tau: 0.5,
            gamma: 1.4,
            alpha_max: 10.0,
            alpha0: 0.5,
        }
    }
}

impl LineSearchParams {
    /// Defaults with a unit first trial step.
    pub fn for_cg() -> Self {
        Self {
            alpha0: 1.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r < self.r_bar && self.r_bar < 1.0) {
            return Err(invalid(
                "r",
                format!(
                    "need 0 < r < r_bar < 1, got r = {}, r_bar = {}",
                    self.r, self.r_bar
                ),
            ));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(invalid(
                "tau",
                format!("must lie in (0, 1), got {}", self.tau),
            ));
        }
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return Err(invalid(
                "gamma",
                format!("must exceed 1, got {}", self.gamma),
            ));
        }
        if !(self.alpha_max > 0.0 && self.alpha_max.is_finite()) {
            return Err(invalid(
                "alpha_max",
                format!("must be positive, got {}", self.alpha_max),
            ));
        }
        if !(self.alpha0 > 0.0 && self.alpha0 <= self.alpha_max) {
            return Err(invalid(
                "alpha0",
                format!(
                    "must lie in (0, alpha_max = {}], got {}",
                    self.alpha_max, self.alpha0
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Manifold {
    #[default]
    Stiefel,
    Grassmann,
}

/// Conjugacy and restart constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CgParams {
    pub beta_max: f64,
    /// Powell threshold on the overlap of consecutive gradients.
    pub eta_powell: f64,
    /// Iterations after a restart before the Powell test applies.
    pub restart_cooldown: usize,
    /// Restart whenever the line search had to reject a trial step.
    pub restart_on_reject: bool,
}

impl Default for CgParams {
    fn default() -> Self {
        Self {
            beta_max: 5.0,
            eta_powell: 0.3,
            restart_cooldown: 4,
            restart_on_reject: false,
        }
    }
}

impl CgParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta_max > 0.0 && self.beta_max.is_finite()) {
            return Err(invalid(
                "beta_max",
                format!("must be positive, got {}", self.beta_max),
            ));
        }
        if !(self.eta_powell > 0.0 && self.eta_powell.is_finite()) {
            return Err(invalid(
                "eta_powell",
                format!("must be positive, got {}", self.eta_powell),
            ));
        }
        if self.restart_cooldown < 1 {
            return Err(invalid("restart_cooldown", "must be at least 1".into()));
        }
        Ok(())
    }
}

/// Termination: the largest per-orbital L² update falls below
/// `update_tol`, or `max_iterations` steps have been taken.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StopCriteria {
    pub update_tol: f64,
    pub max_iterations: usize,
}

impl Default for StopCriteria {
    fn default() -> Self {
        Self {
            update_tol: 1e-4,
            max_iterations: 200,
        }
    }
}

impl StopCriteria {
    pub fn validate(&self) -> Result<()> {
        if !(self.update_tol > 0.0) {
            return Err(invalid(
                "update_tol",
                format!("must be positive, got {}", self.update_tol),
            ));
        }
        if self.max_iterations < 1 {
            return Err(invalid("max_iterations", "must be at least 1".into()));
        }
        Ok(())
    }
}
