//! One-step recurrence taken from the element equations, and its stability.
//!
//! For element `e` the two local equations read
//!
//! ```text
//! 𝒦11 U_e + 𝒦12 U_{e+1} = F1 − m V_{e+1}
//! 𝒦21 U_e + 𝒦22 U_{e+1} = F2 + m V_e
//! ```
//!
//! so the second gives `U_{e+1}` from `(U_e, V_e)` and the first then gives
//! `V_{e+1}`. With a fixed step this is `A W^{I+1} = B W^I + F^I`,
//! `W = (U, V)`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::convolution::QuadratureSpec;
use crate::element::{local_force, local_matrices, Mat2};
use crate::error::{Error, Result};
use crate::model::{uniform_mesh, Mesh, OscillatorProblem};
use crate::solver::{Scheme, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub displacement: f64,
    pub velocity: f64,
}

/// `A` and `B` of the fixed-step recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMatrices {
    pub a: Mat2,
    pub b: Mat2,
    pub tau: f64,
}

impl StepMatrices {
    /// `C = A⁻¹ B`, the free-vibration propagator.
    pub fn propagator(&self) -> Mat2 {
        let a = &self.a;
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let inv = [
            [a[1][1] / det, -a[0][1] / det],
            [-a[1][0] / det, a[0][0] / det],
        ];
        let b = &self.b;
        let mut c = [[0.0; 2]; 2];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = inv[i][0] * b[0][j] + inv[i][1] * b[1][j];
            }
        }
        c
    }
}

pub fn step_matrices(m: f64, k: f64, tau: f64) -> StepMatrices {
    let a = m / tau;
    let kk = k * tau;
    StepMatrices {
        a: [[-a + kk / 3.0, m], [a + kk / 6.0, 0.0]],
        b: [[-a - kk / 6.0, 0.0], [a - kk / 3.0, m]],
        tau,
    }
}

/// Critical step `sqrt(12 m / k)`; the scheme is neutrally stable below it.
pub fn stability_limit(m: f64, k: f64) -> f64 {
    libm::sqrt(12.0 * m / k)
}

/// Roots of `λ² − 2λ (M − K)/(M + K/2) + 1 = 0` with `M = m/τ`, `K = kτ/3`.
///
/// Complex pairs are returned with the positive imaginary part first; real
/// pairs with the larger magnitude first.
pub fn amplification_eigenvalues(m: f64, k: f64, tau: f64) -> (Complex64, Complex64) {
    let big_m = m / tau;
    let big_k = k * tau / 3.0;
    let c = (big_m - big_k) / (big_m + 0.5 * big_k);
    let disc = c * c - 1.0;
    if disc < 0.0 {
        let im = libm::sqrt(-disc);
        (Complex64::new(c, im), Complex64::new(c, -im))
    } else {
        let r = libm::sqrt(disc);
        // Larger root first; the product of the roots is 1.
        let big = if c >= 0.0 { c + r } else { c - r };
        (Complex64::new(big, 0.0), Complex64::new(1.0 / big, 0.0))
    }
}

/// Fixed-step march over `steps` elements of length `tau`. The problem's
/// horizon is ignored.
pub fn march(problem: &OscillatorProblem, tau: f64, steps: usize) -> Result<Trajectory> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument("time step must be positive"));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("at least one step is required"));
    }
    let mesh = uniform_mesh(tau * steps as f64, steps)?;
    march_mesh(problem, &mesh)
}

/// Runs the recurrence element by element over `mesh`.
///
/// Steps at or beyond the stability limit are logged, not rejected: the
/// trajectory then grows without bound.
pub fn march_mesh(problem: &OscillatorProblem, mesh: &Mesh) -> Result<Trajectory> {
    march_mesh_with(problem, mesh, &QuadratureSpec::default())
}

pub fn march_mesh_with(
    problem: &OscillatorProblem,
    mesh: &Mesh,
    quad: &QuadratureSpec,
) -> Result<Trajectory> {
    let (m, k) = (problem.mass(), problem.stiffness());
    let limit = stability_limit(m, k);
    let longest = mesh.lengths().iter().copied().fold(0.0, f64::max);
    if longest >= limit {
        log::warn!("time step {longest} is not below the stability limit {limit}; expect growth");
    }
    let n = mesh.element_count();
    let mut u = Vec::with_capacity(n + 1);
    let mut v = Vec::with_capacity(n + 1);
    let mut state = StateVector {
        displacement: problem.initial_displacement(),
        velocity: problem.initial_velocity(),
    };
    u.push(state.displacement);
    v.push(state.velocity);
    for elem in mesh.elements() {
        let kc = local_matrices(&elem, m, k).kcal;
        let f = local_force(&elem, problem.forcing(), quad);
        state = step(&kc, f, m, state);
        u.push(state.displacement);
        v.push(state.velocity);
    }
    Ok(Trajectory {
        times: mesh.nodes().to_vec(),
        displacements: u,
        velocities: Some(v),
        scheme: Scheme::OneStep,
    })
}

fn step(kc: &Mat2, f: [f64; 2], m: f64, w: StateVector) -> StateVector {
    let next_u = (f[1] + m * w.velocity - kc[1][0] * w.displacement) / kc[1][1];
    let next_v = (f[0] - kc[0][0] * w.displacement - kc[0][1] * next_u) / m;
    StateVector {
        displacement: next_u,
        velocity: next_v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn free() -> OscillatorProblem {
        OscillatorProblem::free(1.0, 9.0, 0.0, 2.0, 10.0).unwrap()
    }

    #[test]
    fn step_matrices_reference() {
        let s = step_matrices(1.0, 9.0, 0.1);
        let a = [[-9.7, 1.0], [10.15, 0.0]];
        let b = [[-10.15, 0.0], [9.7, 1.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(s.a[i][j], a[i][j], epsilon = 1e-12);
                assert_abs_diff_eq!(s.b[i][j], b[i][j], epsilon = 1e-12);
            }
        }
        let s = step_matrices(1.0, 1e-12, 1.0);
        assert_abs_diff_eq!(s.a[0][0], -1.0, epsilon = 1e-11);
        assert_abs_diff_eq!(s.a[1][0], 1.0, epsilon = 1e-11);
        assert_abs_diff_eq!(s.b[0][0], -1.0, epsilon = 1e-11);
        assert_abs_diff_eq!(s.b[1][0], 1.0, epsilon = 1e-11);
    }

    #[test]
    fn step_matrices_mirror_the_element_matrix() {
        let elem = crate::element::Element::new(0, 0.0, 0.1).unwrap();
        let kc = local_matrices(&elem, 1.0, 9.0).kcal;
        let s = step_matrices(1.0, 9.0, 0.1);
        assert_abs_diff_eq!(s.a[0][0], kc[0][1], epsilon = 1e-14);
        assert_abs_diff_eq!(s.a[1][0], kc[1][1], epsilon = 1e-14);
        assert_abs_diff_eq!(s.b[0][0], -kc[0][0], epsilon = 1e-14);
        assert_abs_diff_eq!(s.b[1][0], -kc[1][0], epsilon = 1e-14);
    }

    #[test]
    fn critical_step_has_zero_discriminant() {
        let tau = stability_limit(1.0, 9.0);
        let (l1, l2) = amplification_eigenvalues(1.0, 9.0, tau);
        assert_abs_diff_eq!(l1.im, 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(l1.re, -1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(l2.re, -1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(l1.norm(), 1.0, epsilon = 1e-7);
    }

    #[test]
    fn stability_limit_values() {
        assert_abs_diff_eq!(stability_limit(1.0, 9.0), 1.1547005, epsilon = 1e-7);
        assert_abs_diff_eq!(stability_limit(1.0, 12.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(stability_limit(3.0, 1.0), 6.0, epsilon = 1e-15);
        // In periods: sqrt(12) / 2π.
        let period = 2.0 * core::f64::consts::PI / 3.0;
        assert_abs_diff_eq!(stability_limit(1.0, 9.0) / period, 0.5513, epsilon = 5e-5);
    }

    #[test]
    fn eigenvalues_below_limit_lie_on_unit_circle() {
        let (l1, l2) = amplification_eigenvalues(1.0, 9.0, 0.1);
        let c = 9.7 / 10.15;
        assert_abs_diff_eq!(l1.re, c, epsilon = 1e-15);
        assert_abs_diff_eq!(l1.im, (1.0 - c * c).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(l1.im, 0.294456, epsilon = 5e-7);
        assert_eq!(l2, l1.conj());
        assert_abs_diff_eq!(l1.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!((l1 * l2).re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn eigenvalues_above_limit_are_real_and_growing() {
        let (l1, l2) = amplification_eigenvalues(1.0, 9.0, 1.2);
        assert_eq!(l1.im, 0.0);
        assert!(l1.norm() > 1.0);
        assert_abs_diff_eq!((l1 * l2).re, 1.0, epsilon = 1e-12);
        let traj = march(&free(), 1.2, 200).unwrap();
        let peak = traj
            .displacements
            .iter()
            .fold(0.0f64, |m, u| m.max(u.abs()));
        assert!(peak > 1e6, "peak {peak}");
    }

    #[test]
    fn eigenvalues_agree_with_propagator() {
        for &tau in &[0.05, 0.3, 0.9, 1.1] {
            let c = step_matrices(1.0, 9.0, tau).propagator();
            let tr = c[0][0] + c[1][1];
            let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
            let (l1, l2) = amplification_eigenvalues(1.0, 9.0, tau);
            assert_abs_diff_eq!((l1 + l2).re, tr, epsilon = 1e-12);
            assert_abs_diff_eq!((l1 * l2).re, det, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_step_reference() {
        let traj = march(&free(), 0.1, 1).unwrap();
        let v = traj.velocities.as_ref().unwrap();
        assert_abs_diff_eq!(traj.displacements[1], 0.1970443, epsilon = 5e-8);
        assert_abs_diff_eq!(v[1], 1.9113300, epsilon = 5e-8);
        assert_abs_diff_eq!(
            traj.displacements[1],
            (2.0 / 3.0) * 0.3f64.sin(),
            epsilon = 1e-4
        );
        assert_abs_diff_eq!(v[1], 2.0 * 0.3f64.cos(), epsilon = 1e-3);
    }

    #[test]
    fn free_march_is_a_matrix_power() {
        let p = OscillatorProblem::free(1.0, 9.0, 0.4, -1.1, 1.0).unwrap();
        let tau = 0.13;
        let traj = march(&p, tau, 20).unwrap();
        let v = traj.velocities.unwrap();
        let c = step_matrices(1.0, 9.0, tau).propagator();
        let mut w = [0.4, -1.1];
        for i in 1..=20 {
            w = [
                c[0][0] * w[0] + c[0][1] * w[1],
                c[1][0] * w[0] + c[1][1] * w[1],
            ];
            assert_abs_diff_eq!(traj.displacements[i], w[0], epsilon = 1e-10);
            assert_abs_diff_eq!(v[i], w[1], epsilon = 1e-10);
        }
    }

    #[test]
    fn phase_per_step_tracks_omega_tau() {
        let (l1, _) = amplification_eigenvalues(1.0, 9.0, 0.01);
        assert_abs_diff_eq!(l1.arg(), 0.03, epsilon = 1e-5);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(march(&free(), 0.0, 10).is_err());
        assert!(march(&free(), 0.1, 0).is_err());
    }
}
