//! Benchmark problems and an instrumented objective shared by the solver
//! tests and the acceptance harness.

use std::cell::RefCell;

use sobolev_hf::molecule::initial_guess;
use sobolev_hf::optim::{
    GradientInfo, HfObjective, HfPoint, Manifold, Objective, OptimizerTrace, TraceRow,
};
use sobolev_hf::{Error, Grid, GuessSpec, HfProblem, Molecule, OrbitalVector};

/// Problem and seeded random start for `mol` on `points³` over `[-L/2, L/2)³`.
pub fn benchmark(
    mol: Molecule,
    points: usize,
    box_length: f64,
    softening: Option<f64>,
    seed: u64,
) -> (HfProblem, OrbitalVector) {
    let grid = Grid::new(box_length, points).unwrap();
    let s = softening.unwrap_or(grid.spacing());
    let n = mol.closed_shell_orbitals();
    let problem = HfProblem::new(mol.clone(), &grid, s).unwrap();
    let phi = initial_guess(&GuessSpec::random(seed), &mol, &grid, n).unwrap();
    (problem, phi)
}

/// The H₂ robustness setting: 32³, L = 16, s = 0.2.
pub fn h2(seed: u64) -> (HfProblem, OrbitalVector) {
    benchmark(Molecule::h2(1.4), 32, 16.0, Some(0.2), seed)
}

/// Delegates to [`HfObjective`] and records the Gram defect of every point
/// the solver retracts to, trial steps included.
pub struct Recording<'a> {
    pub inner: HfObjective<'a>,
    pub gram_defects: RefCell<Vec<f64>>,
}

impl<'a> Recording<'a> {
    pub fn new(problem: &'a HfProblem, manifold: Manifold) -> Self {
        Self {
            inner: HfObjective::new(problem, manifold),
            gram_defects: RefCell::new(vec![]),
        }
    }

    pub fn worst_defect(&self) -> f64 {
        self.gram_defects
            .borrow()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }
}

impl Objective for Recording<'_> {
    type Point = HfPoint;
    type Vector = OrbitalVector;
    type Aux = GradientInfo;

    fn energy(&self, x: &HfPoint) -> f64 {
        self.inner.energy(x)
    }

    fn retract(&self, x: &HfPoint, v: &Self::Vector, alpha: f64) -> Result<HfPoint, Error> {
        let y = self.inner.retract(x, v, alpha)?;
        self.gram_defects
            .borrow_mut()
            .push(y.orbitals().orthonormality_defect());
        Ok(y)
    }

    fn gradient(&self, x: &HfPoint) -> Result<(Self::Vector, Self::Aux), Error> {
        self.inner.gradient(x)
    }

    fn precondition(
        &self,
        x: &HfPoint,
        g: &Self::Vector,
        aux: &Self::Aux,
    ) -> Result<Self::Vector, Error> {
        self.inner.precondition(x, g, aux)
    }

    fn transport(&self, to: &HfPoint, v: &Self::Vector) -> Result<Self::Vector, Error> {
        self.inner.transport(to, v)
    }

    fn inner(&self, a: &Self::Vector, b: &Self::Vector) -> f64 {
        self.inner.inner(a, b)
    }

    fn lincomb(&self, a: f64, u: &Self::Vector, b: f64, v: &Self::Vector) -> Self::Vector {
        self.inner.lincomb(a, u, b, v)
    }

    fn update_norm(&self, from: &HfPoint, to: &HfPoint) -> f64 {
        self.inner.update_norm(from, to)
    }
}

/// Trace rows with the wall clock zeroed.
pub fn timeless(trace: &OptimizerTrace) -> Vec<TraceRow> {
    trace
        .rows
        .iter()
        .map(|r| TraceRow {
            wall_ms: 0.0,
            ..r.clone()
        })
        .collect()
}

/// Largest energy increase between consecutive rows (≤ 0 when monotone).
pub fn worst_rise(trace: &OptimizerTrace) -> f64 {
    trace
        .rows
        .windows(2)
        .map(|w| w[1].energy - w[0].energy)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Largest violation of `g(α) ≤ g(0) + r α ⟨p, grad⟩` over all accepted steps.
pub fn worst_armijo_violation(trace: &OptimizerTrace, r: f64) -> f64 {
    trace
        .line_searches
        .iter()
        .map(|l| l.g_alpha - (l.g0 + r * l.alpha * l.slope))
        .fold(f64::NEG_INFINITY, f64::max)
}
