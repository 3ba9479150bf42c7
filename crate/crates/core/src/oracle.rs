//! Closed-form solutions of the oscillator and error against them.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{Forcing, OscillatorProblem};
use crate::solver::Trajectory;

/// Relative distance `|Ω − ω| / ω` below which the resonant formula is used.
pub const RESONANCE_RTOL: f64 = 1e-12;

/// Exact displacement at time `s` for zero or sinusoidal forcing.
pub fn exact_solution(problem: &OscillatorProblem, s: f64) -> Result<f64> {
    let m = problem.mass();
    let w = problem.natural_frequency();
    let u0 = problem.initial_displacement();
    let v0 = problem.initial_velocity();
    let (cos_ws, sin_ws) = (libm::cos(w * s), libm::sin(w * s));
    match *problem.forcing() {
        Forcing::Zero => Ok(u0 * cos_ws + (v0 / w) * sin_ws),
        Forcing::Sinusoid {
            amplitude: f0,
            frequency: om,
        } => {
            if ((om - w) / w).abs() <= RESONANCE_RTOL {
                Ok(u0 * cos_ws + (v0 / w + f0 / (2.0 * m * w * w)) * sin_ws
                    - (f0 / (2.0 * m * w)) * s * cos_ws)
            } else {
                let c = f0 / (m * (w * w - om * om));
                Ok(u0 * cos_ws + ((v0 - c * om) / w) * sin_ws + c * libm::sin(om * s))
            }
        }
        Forcing::Pointwise(_) => Err(Error::NoClosedForm),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// Signed error `approximation − exact` at each node.
    pub per_node_error: Vec<f64>,
    pub max_abs_error: f64,
    pub at_times: Vec<f64>,
}

pub fn error_metrics(traj: &Trajectory, problem: &OscillatorProblem) -> Result<ErrorReport> {
    let per_node_error = traj
        .times
        .iter()
        .zip(&traj.displacements)
        .map(|(&t, &u)| exact_solution(problem, t).map(|e| u - e))
        .collect::<Result<Vec<f64>>>()?;
    let max_abs_error = per_node_error.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    Ok(ErrorReport {
        per_node_error,
        max_abs_error,
        at_times: traj.times.clone(),
    })
}
