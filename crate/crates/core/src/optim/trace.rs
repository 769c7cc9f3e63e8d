/// State after one iteration. Row 0 describes the starting point.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub energy: f64,
    /// H¹ norm of the Riemannian gradient at this iterate.
    pub grad_h1: f64,
    /// Largest per-orbital L² change from the previous iterate.
    pub update_l2: f64,
    /// Accepted step length (0 for row 0 and for SCF).
    pub alpha: f64,
    /// Conjugacy coefficient used for the next direction (CG only).
    pub beta: f64,
    pub restart: bool,
    /// Energy evaluations spent in this iteration.
    pub energy_evals: usize,
    /// Milliseconds since the solver started.
    pub wall_ms: f64,
}

/// One accepted Armijo step, kept for post-hoc checks of the decrease
/// condition.
#[derive(Clone, Debug, PartialEq)]
pub struct LineSearchRecord {
    pub iter: usize,
    /// `g(0)`, the energy at the base point.
    pub g0: f64,
    /// `g(α)` at the accepted step.
    pub g_alpha: f64,
    pub alpha: f64,
    /// `⟨p, grad⟩`.
    pub slope: f64,
    pub rejections: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OptimizerTrace {
    pub rows: Vec<TraceRow>,
    pub line_searches: Vec<LineSearchRecord>,
}

impl OptimizerTrace {
    /// Steps taken, not counting the starting row.
    pub fn iterations(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn energy_evaluations(&self) -> usize {
        self.rows.iter().map(|r| r.energy_evals).sum()
    }

    pub fn restarts(&self) -> usize {
        self.rows.iter().filter(|r| r.restart).count()
    }

    /// Rejected trial steps over all trial steps.
    pub fn rejection_rate(&self) -> f64 {
        let rejected: usize = self.line_searches.iter().map(|l| l.rejections).sum();
        let total = rejected + self.line_searches.len();
        if total == 0 {
            0.0
        } else {
            rejected as f64 / total as f64
        }
    }

    pub fn final_energy(&self) -> Option<f64> {
        self.rows.last().map(|r| r.energy)
    }
}
