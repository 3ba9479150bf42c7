//! Solution of the reduced global system.

use alloc::vec::Vec;

use crate::assembly::{assemble_global, impose_initial_conditions, GlobalSystem, ReducedSystem};
use crate::banded::{dense_solve, BandMatrix};
use crate::error::{Error, Result};
use crate::model::{Mesh, OscillatorProblem};

/// Largest system handed to the dense fallback when banded elimination
/// meets a tiny pivot.
pub const DENSE_FALLBACK_MAX: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Fem,
    OneStep,
}

/// Nodal values of an approximate solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub displacements: Vec<f64>,
    /// Nodal velocities; only the marching scheme produces them.
    pub velocities: Option<Vec<f64>>,
    pub scheme: Scheme,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the node at time `t`, if one lies within `1e-9` of the
    /// horizon.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let horizon = *self.times.last()?;
        let slack = 1e-9 * horizon.max(1.0);
        let pos = self.times.partition_point(|&s| s < t - slack);
        (pos < self.times.len() && (self.times[pos] - t).abs() <= slack).then_some(pos)
    }

    /// Displacement at the node located at time `t`.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        self.index_of(t).map(|i| self.displacements[i])
    }
}

/// Solves the reduced system for `U_2 .. U_{n+1}`.
///
/// Reversing the row order turns the anti-band into an ordinary band
/// (two sub-diagonals, no super-diagonal) that is eliminated in `O(n)`.
pub fn solve_reduced(rs: &ReducedSystem) -> Result<Vec<f64>> {
    let size = rs.matrix.size();
    if rs.load.len() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            found: rs.load.len(),
        });
    }
    if size == 0 {
        return Ok(Vec::new());
    }
    // Row i of the anti-band becomes row size-1-i; its diagonals end up at
    // offsets base + d - size + 1 relative to the main diagonal.
    let offsets = [0isize, 1, 2].map(|d| rs.matrix.base() + d - size as isize + 1);
    let lower = offsets.iter().map(|&o| (-o).max(0)).max().unwrap_or(0) as usize;
    let upper = offsets.iter().map(|&o| o.max(0)).max().unwrap_or(0) as usize;
    let mut band = BandMatrix::zeros(size, lower.min(size - 1), upper.min(size - 1));
    for i in 0..size {
        for j in rs.matrix.row_columns(i) {
            band.set(size - 1 - i, j, rs.matrix.get(i, j));
        }
    }
    let rhs: Vec<f64> = rs.load.iter().rev().copied().collect();
    match band.solve(&rhs) {
        Err(Error::SingularSystem { row }) if size <= DENSE_FALLBACK_MAX => {
            log::warn!("small pivot in banded elimination at row {row}; using dense LU");
            dense_solve(band.to_dense(), &rhs)
        }
        other => other,
    }
}

/// Assembles, reduces and solves; the returned trajectory starts at `u0`.
pub fn fem_trajectory(problem: &OscillatorProblem, mesh: &Mesh) -> Result<Trajectory> {
    let gs = assemble_global(mesh, problem)?;
    let u0 = problem.initial_displacement();
    let rs = impose_initial_conditions(&gs, u0);
    let tail = solve_reduced(&rs)?;
    let mut displacements = Vec::with_capacity(tail.len() + 1);
    displacements.push(u0);
    displacements.extend(tail);
    Ok(Trajectory {
        times: mesh.nodes().to_vec(),
        displacements,
        velocities: None,
        scheme: Scheme::Fem,
    })
}

/// Velocity at the final time, recovered from the equation dropped during
/// reduction.
pub fn recover_final_velocity(gs: &GlobalSystem, u: &[f64]) -> Result<f64> {
    let size = gs.element_count + 1;
    if u.len() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            found: u.len(),
        });
    }
    let row: f64 = gs.matrix.row_columns(0).map(|j| gs.get(0, j) * u[j]).sum();
    Ok((gs.load[0] - row) / gs.mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::AntiBandMatrix;
    use crate::model::uniform_mesh;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_element_solution_satisfies_both_equations() {
        let mesh = uniform_mesh(1.0, 2).unwrap();
        let p = OscillatorProblem::free(1.0, 9.0, 0.0, 2.0, 1.0).unwrap();
        let gs = assemble_global(&mesh, &p).unwrap();
        let rs = impose_initial_conditions(&gs, 0.0);
        let x = solve_reduced(&rs).unwrap();
        // Cramer's rule on the 2×2 system.
        let a = rs.matrix.to_dense();
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let x0 = (rs.load[0] * a[1][1] - a[0][1] * rs.load[1]) / det;
        let x1 = (a[0][0] * rs.load[1] - a[1][0] * rs.load[0]) / det;
        assert_abs_diff_eq!(x[0], x0, epsilon = 1e-14);
        assert_abs_diff_eq!(x[1], x1, epsilon = 1e-14);
        for i in 0..2 {
            let lhs = a[i][0] * x[0] + a[i][1] * x[1];
            assert_abs_diff_eq!(lhs, rs.load[i], epsilon = 1e-13);
        }
    }

    #[test]
    fn single_element() {
        let tau = 0.2;
        let mesh = uniform_mesh(tau, 1).unwrap();
        let p = OscillatorProblem::free(1.0, 9.0, 0.0, 2.0, tau).unwrap();
        let traj = fem_trajectory(&p, &mesh).unwrap();
        let k22 = 1.0 / tau + 9.0 * tau / 6.0;
        assert_eq!(traj.displacements.len(), 2);
        assert_abs_diff_eq!(traj.displacements[1], 2.0 / k22, epsilon = 1e-15);
    }

    #[test]
    fn zero_pivot_uses_dense_fallback() {
        // Reversed rows give [[0, 1], [1, 0]]: a zero first pivot in a
        // regular matrix.
        let mut m = AntiBandMatrix::zeros(2, 0);
        m.add(0, 0, 1.0);
        m.add(1, 1, 1.0);
        let rs = ReducedSystem {
            matrix: m,
            load: vec![3.0, 4.0],
            u0: 0.0,
        };
        assert_eq!(solve_reduced(&rs).unwrap(), vec![3.0, 4.0]);
    }

    #[test]
    fn singular_system_is_reported() {
        let zero = ReducedSystem {
            matrix: AntiBandMatrix::zeros(2, 0),
            load: vec![1.0, 1.0],
            u0: 0.0,
        };
        assert!(matches!(
            solve_reduced(&zero),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn trivial_problem_stays_at_rest() {
        let mesh = uniform_mesh(1.0, 10).unwrap();
        let p = OscillatorProblem::free(1.0, 9.0, 0.0, 0.0, 1.0).unwrap();
        let traj = fem_trajectory(&p, &mesh).unwrap();
        assert!(traj.displacements.iter().all(|&u| u == 0.0));
        let gs = assemble_global(&mesh, &p).unwrap();
        assert_eq!(
            recover_final_velocity(&gs, &traj.displacements).unwrap(),
            0.0
        );
    }

    #[test]
    fn final_velocity_approaches_exact() {
        let mesh = uniform_mesh(10.0, 1000).unwrap();
        let p = OscillatorProblem::free(1.0, 9.0, 0.0, 2.0, 10.0).unwrap();
        let traj = fem_trajectory(&p, &mesh).unwrap();
        let gs = assemble_global(&mesh, &p).unwrap();
        let v = recover_final_velocity(&gs, &traj.displacements).unwrap();
        assert_abs_diff_eq!(v, 2.0 * 30f64.cos(), epsilon = 1e-2);
    }

    #[test]
    fn lookup_by_time() {
        let mesh = uniform_mesh(10.0, 100).unwrap();
        let p = OscillatorProblem::free(1.0, 9.0, 0.0, 2.0, 10.0).unwrap();
        let traj = fem_trajectory(&p, &mesh).unwrap();
        assert_eq!(traj.index_of(1.0), Some(10));
        assert_eq!(traj.index_of(10.0), Some(100));
        assert_eq!(traj.index_of(0.05), None);
        assert_abs_diff_eq!(traj.value_at(1.0).unwrap(), 0.1018, epsilon = 5e-5);
    }
}
