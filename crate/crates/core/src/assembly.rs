//! Global system: assembly from element systems, imposition of the initial
//! displacement, and an independent construction straight from the global
//! hat functions.
//!
//! The assembled equations are stored in reversed order (the equation that
//! holds the initial momentum ends up last). With that ordering every
//! non-zero of the global matrix lies on one of three anti-diagonals, and the
//! matrix is symmetric about the second diagonal:
//! `K[i][j] == K[n - j][n - i]` (0-based, `n` elements).
//!
//! All indices in this module are 0-based.

use alloc::vec;
use alloc::vec::Vec;

use crate::convolution::QuadratureSpec;
use crate::element::{local_force, local_matrices};
use crate::error::{Error, Result};
use crate::model::{Mesh, OscillatorProblem};

/// Square matrix whose non-zeros satisfy `i + j ∈ {base, base + 1, base + 2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiBandMatrix {
    size: usize,
    base: isize,
    // diags[d][i] holds the entry at (i, base + d - i).
    diags: [Vec<f64>; 3],
}

impl AntiBandMatrix {
    pub fn zeros(size: usize, base: isize) -> Self {
        AntiBandMatrix {
            size,
            base,
            diags: [vec![0.0; size], vec![0.0; size], vec![0.0; size]],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Smallest index sum carrying a non-zero.
    pub fn base(&self) -> isize {
        self.base
    }

    fn band_slot(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.size || j >= self.size {
            return None;
        }
        let d = (i + j) as isize - self.base;
        (0..3).contains(&d).then_some(d as usize)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self.band_slot(i, j) {
            Some(d) => self.diags[d][i],
            None => 0.0,
        }
    }

    /// Panics when `(i, j)` is outside the anti-band.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let d = self.band_slot(i, j).expect("entry outside the anti-band");
        self.diags[d][i] += value;
    }

    /// Column indices of row `i` that lie inside the band.
    pub fn row_columns(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..3isize).filter_map(move |d| {
            let j = self.base + d - i as isize;
            (j >= 0 && (j as usize) < self.size).then_some(j as usize)
        })
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.size)
            .map(|i| self.row_columns(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Copy without the first row and column.
    fn drop_first(&self) -> AntiBandMatrix {
        let mut out = AntiBandMatrix::zeros(self.size - 1, self.base - 2);
        for i in 1..self.size {
            for j in self.row_columns(i).filter(|&j| j >= 1) {
                out.add(i - 1, j - 1, self.get(i, j));
            }
        }
        out
    }
}

/// Global matrix and load in reversed equation order.
///
/// `load[0]` holds only the known part `F^n_1` of the first equation; that
/// equation also contains the unknown final momentum `-m u'(t)`, flagged by
/// `unknown_final_momentum`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalSystem {
    pub matrix: AntiBandMatrix,
    pub load: Vec<f64>,
    pub element_count: usize,
    pub mass: f64,
    pub unknown_final_momentum: bool,
}

impl GlobalSystem {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }
}

/// The `n × n` system left for `U_2 .. U_{n+1}` once `U_1 = u0` is fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSystem {
    pub matrix: AntiBandMatrix,
    pub load: Vec<f64>,
    pub u0: f64,
}

/// Assembles with the default quadrature for pointwise loads.
pub fn assemble_global(mesh: &Mesh, problem: &OscillatorProblem) -> Result<GlobalSystem> {
    assemble_global_with(mesh, problem, &QuadratureSpec::default())
}

pub fn assemble_global_with(
    mesh: &Mesh,
    problem: &OscillatorProblem,
    quad: &QuadratureSpec,
) -> Result<GlobalSystem> {
    let n = mesh.element_count();
    let (m, k) = (problem.mass(), problem.stiffness());
    let mut matrix = AntiBandMatrix::zeros(n + 1, n as isize - 1);
    let mut load = vec![0.0; n + 1];
    // Element e couples nodes e and e + 1. Its first equation belongs to
    // node e + 1 and its second to node e; node p sits in row n - p.
    for elem in mesh.elements() {
        let e = elem.index;
        let ls = local_matrices(&elem, m, k);
        let f = local_force(&elem, problem.forcing(), quad);
        let (first, second) = (n - e - 1, n - e);
        matrix.add(first, e, ls.kcal[0][0]);
        matrix.add(first, e + 1, ls.kcal[0][1]);
        load[first] += f[0];
        matrix.add(second, e, ls.kcal[1][0]);
        matrix.add(second, e + 1, ls.kcal[1][1]);
        load[second] += f[1];
    }
    load[n] += m * problem.initial_velocity();
    Ok(GlobalSystem {
        matrix,
        load,
        element_count: n,
        mass: m,
        unknown_final_momentum: true,
    })
}

/// Drops the first equation (the one holding the unknown final momentum)
/// and the column of `U_1`, moving `K[i][0] * u0` to the right-hand side.
pub fn impose_initial_conditions(gs: &GlobalSystem, u0: f64) -> ReducedSystem {
    let full = &gs.matrix;
    let matrix = full.drop_first();
    let load = (1..full.size())
        .map(|i| gs.load[i] - full.get(i, 0) * u0)
        .collect();
    ReducedSystem { matrix, load, u0 }
}

/// `(N_p, N_q)` over `[0, t]` for global hats, from element lengths.
fn hat_inner(lengths: &[f64], p: usize, q: usize) -> f64 {
    let n = lengths.len();
    let left = |p: usize| if p >= 1 { lengths[p - 1] } else { 0.0 };
    let right = |p: usize| if p < n { lengths[p] } else { 0.0 };
    if p == q {
        (left(p) + right(p)) / 3.0
    } else if q == p + 1 {
        right(p) / 6.0
    } else if p == q + 1 {
        left(p) / 6.0
    } else {
        0.0
    }
}

/// `(N_p', N_q')` over `[0, t]`.
fn hat_derivative_inner(lengths: &[f64], p: usize, q: usize) -> f64 {
    let n = lengths.len();
    let left = |p: usize| if p >= 1 { 1.0 / lengths[p - 1] } else { 0.0 };
    let right = |p: usize| if p < n { 1.0 / lengths[p] } else { 0.0 };
    if p == q {
        left(p) + right(p)
    } else if q == p + 1 {
        -right(p)
    } else if p == q + 1 {
        -left(p)
    } else {
        0.0
    }
}

/// `[N_i, N_j] = ∫_0^t N_i(s) N_j(t - s) ds` in closed form.
///
/// On a symmetric mesh `N_j(t - s) = N_{n-j}(s)`, which turns the
/// convolution into an ordinary inner product with the mirrored hat.
pub fn hat_convolution(mesh: &Mesh, i: usize, j: usize) -> f64 {
    let n = mesh.element_count();
    hat_inner(mesh.lengths(), i, n - j)
}

/// `[N_i', N_j'] = ∫_0^t N_i'(s) N_j'(t - s) ds` in closed form.
///
/// Reflection flips the sign of a derivative, so this is minus the inner
/// product of derivatives with the mirrored hat.
pub fn hat_derivative_convolution(mesh: &Mesh, i: usize, j: usize) -> f64 {
    let n = mesh.element_count();
    -hat_derivative_inner(mesh.lengths(), i, n - j)
}

/// Builds the global system directly from `K_ij = m[N_i', N_j'] + k[N_i, N_j]`
/// and `F_i = [f, N_i] + [m v0 δ, N_i]`, without going through element
/// equations.
///
/// The whole matrix is populated. Row 0 of the load holds `[f, N_0]`;
/// `unknown_final_momentum` is false since this route never introduces the
/// end momenta.
pub fn global_system_direct(mesh: &Mesh, problem: &OscillatorProblem) -> Result<GlobalSystem> {
    global_system_direct_with(mesh, problem, &QuadratureSpec::default())
}

pub fn global_system_direct_with(
    mesh: &Mesh,
    problem: &OscillatorProblem,
    quad: &QuadratureSpec,
) -> Result<GlobalSystem> {
    let n = mesh.element_count();
    let t = mesh.horizon();
    let slack = 1e-9 * t;
    for (p, &s) in mesh.nodes().iter().enumerate() {
        if (s + mesh.nodes()[n - p] - t).abs() > slack {
            return Err(Error::InvalidArgument(
                "direct construction needs a symmetric mesh",
            ));
        }
    }
    let (m, k) = (problem.mass(), problem.stiffness());
    let mut matrix = AntiBandMatrix::zeros(n + 1, n as isize - 1);
    for i in 0..=n {
        let cols: Vec<usize> = matrix.row_columns(i).collect();
        for j in cols {
            let v = m * hat_derivative_convolution(mesh, i, j) + k * hat_convolution(mesh, i, j);
            matrix.add(i, j, v);
        }
    }
    // [f, N_i] = (f, N_p) with p = n - i; the two halves of the hat are the
    // element forces of the neighbouring elements.
    let forces: Vec<[f64; 2]> = mesh
        .elements()
        .map(|e| local_force(&e, problem.forcing(), quad))
        .collect();
    let mut load = vec![0.0; n + 1];
    for (i, slot) in load.iter_mut().enumerate() {
        let p = n - i;
        if p >= 1 {
            *slot += forces[p - 1][0];
        }
        if p < n {
            *slot += forces[p][1];
        }
    }
    load[n] += m * problem.initial_velocity();
    Ok(GlobalSystem {
        matrix,
        load,
        element_count: n,
        mass: m,
        unknown_final_momentum: false,
    })
}

/// `B(x, y) = Σ x_i y_{n-i}`, the bilinear form under which the global
/// matrix is symmetric.
pub fn bilinear_b(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(x.iter().zip(y.iter().rev()).map(|(a, b)| a * b).sum())
}

/// Discrete functional `½ Uᵀ𝒦U − Σ_{i≥1} ℱ_i U_i` using the directly built
/// matrices. `u` holds all `n + 1` nodal values; `u[0]` must equal the
/// initial displacement.
pub fn evaluate_global_functional(
    mesh: &Mesh,
    problem: &OscillatorProblem,
    u: &[f64],
) -> Result<f64> {
    let gs = global_system_direct(mesh, problem)?;
    functional_value(&gs, problem.initial_displacement(), u)
}

pub(crate) fn functional_value(gs: &GlobalSystem, u0: f64, u: &[f64]) -> Result<f64> {
    let size = gs.element_count + 1;
    if u.len() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            found: u.len(),
        });
    }
    if u[0] != u0 {
        return Err(Error::InvalidArgument(
            "first nodal value must equal the initial displacement",
        ));
    }
    let ku = gs.matrix.mul_vec(u);
    let quad: f64 = u.iter().zip(&ku).map(|(a, b)| a * b).sum();
    let lin: f64 = u.iter().zip(&gs.load).skip(1).map(|(a, b)| a * b).sum();
    Ok(0.5 * quad - lin)
}
