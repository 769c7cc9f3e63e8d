//! Toy objectives on ℝᵈ for exercising solver logic without a grid.

use std::cell::Cell;

use super::Objective;
use crate::error::Result;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpby(a: f64, u: &[f64], b: f64, v: &[f64]) -> Vec<f64> {
    u.iter().zip(v).map(|(x, y)| a * x + b * y).collect()
}

/// `E(x) = ½ Σ c_i x_i²` with the Euclidean metric.
pub struct Quadratic {
    curvature: Vec<f64>,
}

impl Quadratic {
    pub fn new(curvature: Vec<f64>) -> Self {
        Self { curvature }
    }
}

impl Objective for Quadratic {
    type Point = Vec<f64>;
    type Vector = Vec<f64>;
    type Aux = ();

    fn energy(&self, x: &Vec<f64>) -> f64 {
        0.5 * x
            .iter()
            .zip(&self.curvature)
            .map(|(v, c)| c * v * v)
            .sum::<f64>()
    }

    fn retract(&self, x: &Vec<f64>, v: &Vec<f64>, alpha: f64) -> Result<Vec<f64>> {
        Ok(axpby(1.0, x, alpha, v))
    }

    fn gradient(&self, x: &Vec<f64>) -> Result<(Vec<f64>, ())> {
        Ok((
            x.iter().zip(&self.curvature).map(|(v, c)| c * v).collect(),
            (),
        ))
    }

    fn precondition(&self, _: &Vec<f64>, g: &Vec<f64>, _: &()) -> Result<Vec<f64>> {
        Ok(g.clone())
    }

    fn transport(&self, _: &Vec<f64>, v: &Vec<f64>) -> Result<Vec<f64>> {
        Ok(v.clone())
    }

    fn inner(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        dot(a, b)
    }

    fn lincomb(&self, a: f64, u: &Vec<f64>, b: f64, v: &Vec<f64>) -> Vec<f64> {
        axpby(a, u, b, v)
    }

    fn update_norm(&self, from: &Vec<f64>, to: &Vec<f64>) -> f64 {
        axpby(1.0, to, -1.0, from)
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Clone, Debug)]
pub struct ScriptPoint {
    step: usize,
    energy: f64,
}

/// Every step lowers the energy by 1000, so trial steps are accepted, and
/// the gradient at step `k` is the basis vector `e_k`. Consecutive
/// gradients are orthogonal, so no restart fires unless one is injected:
///
/// * `tilt = (k, j, c)` adds `c e_j` to the gradient at step `k`;
/// * `reject_from = k` makes the first trial from step `k` raise the energy.
#[derive(Default)]
pub struct Scripted {
    tilt: Option<(usize, usize, f64)>,
    reject_from: Option<usize>,
    rejected: Cell<bool>,
}

const DIM: usize = 64;

impl Scripted {
    pub fn clean() -> Self {
        Self::default()
    }

    pub fn tilted(step: usize, component: usize, weight: f64) -> Self {
        Self {
            tilt: Some((step, component, weight)),
            ..Self::default()
        }
    }

    pub fn rejecting(step: usize) -> Self {
        Self {
            reject_from: Some(step),
            ..Self::default()
        }
    }

    pub fn start(&self) -> ScriptPoint {
        ScriptPoint {
            step: 0,
            energy: 0.0,
        }
    }
}

impl Objective for Scripted {
    type Point = ScriptPoint;
    type Vector = Vec<f64>;
    type Aux = ();

    fn energy(&self, x: &ScriptPoint) -> f64 {
        x.energy
    }

    fn retract(&self, x: &ScriptPoint, _: &Vec<f64>, _: f64) -> Result<ScriptPoint> {
        if self.reject_from == Some(x.step) && !self.rejected.get() {
            self.rejected.set(true);
            return Ok(ScriptPoint {
                step: x.step + 1,
                energy: 1e9,
            });
        }
        Ok(ScriptPoint {
            step: x.step + 1,
            energy: -1000.0 * (x.step + 1) as f64,
        })
    }

    fn gradient(&self, x: &ScriptPoint) -> Result<(Vec<f64>, ())> {
        let mut g = vec![0.0; DIM];
        g[x.step] = 1.0;
        if let Some((k, j, c)) = self.tilt {
            if k == x.step {
                g[j] += c;
            }
        }
        Ok((g, ()))
    }

    fn precondition(&self, _: &ScriptPoint, g: &Vec<f64>, _: &()) -> Result<Vec<f64>> {
        Ok(g.clone())
    }

    fn transport(&self, _: &ScriptPoint, v: &Vec<f64>) -> Result<Vec<f64>> {
        Ok(v.clone())
    }

    fn inner(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        dot(a, b)
    }

    fn lincomb(&self, a: f64, u: &Vec<f64>, b: f64, v: &Vec<f64>) -> Vec<f64> {
        axpby(a, u, b, v)
    }

    fn update_norm(&self, _: &ScriptPoint, _: &ScriptPoint) -> f64 {
        1.0
    }
}
