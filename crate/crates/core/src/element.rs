//! Single time element: linear shape functions, the 2×2 local system, and
//! the local functional.
//!
//! Local matrices are built from the shifted convolution of shape functions
//! (or their derivatives), not from the `L2` inner product:
//!
//! ```text
//! M^e = m/τ [[ 1, -1], [-1,  1]]
//! K^e = kτ/3 [[1/2, 1], [1, 1/2]]
//! ```
//!
//! The stiffness part therefore carries its large entry off the diagonal.

use crate::convolution::QuadratureSpec;
use crate::error::{Error, Result};
use crate::model::Forcing;

pub type Mat2 = [[f64; 2]; 2];
pub type Vec2 = [f64; 2];

/// Time element `[left, right]` of a mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub index: usize,
    pub left: f64,
    pub right: f64,
    pub length: f64,
}

impl Element {
    pub fn new(index: usize, left: f64, right: f64) -> Result<Self> {
        if !(right > left) {
            return Err(Error::InvalidArgument("element needs right > left"));
        }
        Ok(Element {
            index,
            left,
            right,
            length: right - left,
        })
    }

    /// Element whose length is given explicitly (meshes store lengths
    /// separately so mirrored elements match bit for bit).
    pub(crate) fn with_length(index: usize, left: f64, right: f64, length: f64) -> Self {
        Element {
            index,
            left,
            right,
            length,
        }
    }
}

/// `(N1(s), N2(s))` at a point of the element.
pub fn shape_values(elem: &Element, s: f64) -> Result<(f64, f64)> {
    let slack = 1e-12 * elem.length;
    if !(s >= elem.left - slack && s <= elem.right + slack) {
        return Err(Error::InvalidArgument("point lies outside the element"));
    }
    let n2 = ((s - elem.left) / elem.length).clamp(0.0, 1.0);
    Ok((1.0 - n2, n2))
}

/// Derivatives `(N1', N2')`, constant over the element.
pub fn shape_derivatives(elem: &Element) -> (f64, f64) {
    (-1.0 / elem.length, 1.0 / elem.length)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalSystem {
    /// `mass + stiffness`.
    pub kcal: Mat2,
    pub mass: Mat2,
    pub stiffness: Mat2,
    pub force: Vec2,
}

impl LocalSystem {
    pub fn with_force(mut self, force: Vec2) -> Self {
        self.force = force;
        self
    }
}

/// Element matrices, force left at zero. `m` and `k` are not validated so
/// degenerate pure-mass or pure-stiffness elements can be built.
pub fn local_matrices(elem: &Element, m: f64, k: f64) -> LocalSystem {
    let tau = elem.length;
    let a = m / tau;
    let b = k * tau / 3.0;
    let mass = [[a, -a], [-a, a]];
    let stiffness = [[0.5 * b, b], [b, 0.5 * b]];
    let kcal = [
        [mass[0][0] + stiffness[0][0], mass[0][1] + stiffness[0][1]],
        [mass[1][0] + stiffness[1][0], mass[1][1] + stiffness[1][1]],
    ];
    LocalSystem {
        kcal,
        mass,
        stiffness,
        force: [0.0; 2],
    }
}

/// Nodal forces `F_i = ∫_0^τ f(s_e + s) N_i(s_{e+1} - s) ds`.
///
/// Sinusoidal loads use the closed form; pointwise loads are integrated
/// with `quad`.
pub fn local_force(elem: &Element, forcing: &Forcing, quad: &QuadratureSpec) -> Vec2 {
    match forcing {
        Forcing::Zero => [0.0, 0.0],
        Forcing::Sinusoid {
            amplitude,
            frequency,
        } => sinusoid_closed(elem, *amplitude, *frequency),
        Forcing::Pointwise(f) => local_force_quadrature(elem, |s| f(s), quad),
    }
}

/// Nodal forces for an arbitrary load by quadrature of the defining
/// integral.
pub fn local_force_quadrature<F: Fn(f64) -> f64>(
    elem: &Element,
    f: F,
    quad: &QuadratureSpec,
) -> Vec2 {
    let reflected = |s: f64| {
        let x = (elem.right - s).clamp(elem.left, elem.right);
        shape_values(elem, x).unwrap_or((0.0, 0.0))
    };
    let f1 = quad.integrate(|s| f(elem.left + s) * reflected(s).0, 0.0, elem.length);
    let f2 = quad.integrate(|s| f(elem.left + s) * reflected(s).1, 0.0, elem.length);
    [f1, f2]
}

/// Closed-form nodal forces for `f(s) = f0 sin(Ω s)`.
pub fn local_force_sinusoid_closed(elem: &Element, f0: f64, omega: f64) -> Result<Vec2> {
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument("forcing frequency must be positive"));
    }
    Ok(sinusoid_closed(elem, f0, omega))
}

fn sinusoid_closed(elem: &Element, f0: f64, omega: f64) -> Vec2 {
    let (sl, sr) = (elem.left, elem.right);
    let jump =
        (f0 / (elem.length * omega * omega)) * (libm::sin(omega * sr) - libm::sin(omega * sl));
    let f1 = -(f0 / omega) * libm::cos(omega * sr) + jump;
    let f2 = (f0 / omega) * libm::cos(omega * sl) - jump;
    [f1, f2]
}

/// Local functional `½ uᵀ𝒦u − Fᵀu − f2·u1 + f1·u2`.
///
/// `end_momenta = [f1, f2]` are the momenta `m u'` at the left and right end
/// of the element; their Dirac terms are evaluated symbolically.
pub fn evaluate_local_functional(
    elem: &Element,
    u: Vec2,
    m: f64,
    k: f64,
    forcing: &Forcing,
    end_momenta: Vec2,
    quad: &QuadratureSpec,
) -> f64 {
    let ls = local_matrices(elem, m, k);
    let force = local_force(elem, forcing, quad);
    let ku = mat_vec(&ls.kcal, u);
    let [f1, f2] = end_momenta;
    0.5 * (u[0] * ku[0] + u[1] * ku[1]) - (force[0] * u[0] + force[1] * u[1]) - f2 * u[0]
        + f1 * u[1]
}

pub(crate) fn mat_vec(a: &Mat2, x: Vec2) -> Vec2 {
    [
        a[0][0] * x[0] + a[0][1] * x[1],
        a[1][0] * x[0] + a[1][1] * x[1],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::convolve_shifted;
    use approx::assert_abs_diff_eq;

    fn elem(left: f64, right: f64) -> Element {
        Element::new(0, left, right).unwrap()
    }

    #[test]
    fn shape_values_at_nodes_and_midpoint() {
        let e = elem(0.0, 0.1);
        assert_eq!(shape_values(&e, 0.0).unwrap(), (1.0, 0.0));
        assert_eq!(shape_values(&e, 0.1).unwrap(), (0.0, 1.0));
        let (a, b) = shape_values(&e, 0.05).unwrap();
        assert_abs_diff_eq!(a, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 0.5, epsilon = 1e-15);
        assert!(shape_values(&e, 0.2).is_err());
        assert!(shape_values(&e, -0.01).is_err());
    }

    #[test]
    fn local_matrices_reference_element() {
        let ls = local_matrices(&elem(0.0, 0.1), 1.0, 9.0);
        let expect_m = [[10.0, -10.0], [-10.0, 10.0]];
        let expect_k = [[0.15, 0.3], [0.3, 0.15]];
        let expect = [[10.15, -9.7], [-9.7, 10.15]];
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(ls.mass[i][j], expect_m[i][j], epsilon = 1e-12);
                assert_abs_diff_eq!(ls.stiffness[i][j], expect_k[i][j], epsilon = 1e-12);
                assert_abs_diff_eq!(ls.kcal[i][j], expect[i][j], epsilon = 1e-12);
            }
        }
        assert_eq!(ls.force, [0.0, 0.0]);
    }

    #[test]
    fn degenerate_pure_mass_and_pure_stiffness() {
        let ls = local_matrices(&elem(0.0, 1.0), 1.0, 0.0);
        assert_eq!(ls.kcal, [[1.0, -1.0], [-1.0, 1.0]]);
        let ls = local_matrices(&elem(0.0, 1.0), 0.0, 3.0);
        assert_eq!(ls.kcal, [[0.5, 1.0], [1.0, 0.5]]);
    }

    #[test]
    fn matrices_match_shape_function_convolutions() {
        let q = QuadratureSpec::default();
        let e = elem(0.37, 0.52);
        let (m, k) = (1.7, 4.2);
        let ls = local_matrices(&e, m, k);
        let n = |i: usize| {
            move |s: f64| {
                let v = shape_values(&e, s.clamp(e.left, e.right)).unwrap();
                if i == 0 {
                    v.0
                } else {
                    v.1
                }
            }
        };
        let (d1, d2) = shape_derivatives(&e);
        let d = [d1, d2];
        for i in 0..2 {
            for j in 0..2 {
                let kij = k * convolve_shifted(n(i), n(j), e.left, e.right, &q).unwrap();
                let mij = m * convolve_shifted(|_| d[i], |_| d[j], e.left, e.right, &q).unwrap();
                assert_abs_diff_eq!(ls.stiffness[i][j], kij, epsilon = 1e-12);
                assert_abs_diff_eq!(ls.mass[i][j], mij, epsilon = 1e-12);
            }
        }
        // N1 against N2 over the element gives τ/3.
        let v = convolve_shifted(n(0), n(1), e.left, e.right, &q).unwrap();
        assert_abs_diff_eq!(v, e.length / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn constant_load_splits_evenly() {
        let q = QuadratureSpec::default();
        let e = elem(1.0, 1.4);
        let f = local_force(&e, &Forcing::pointwise(|_| 2.5), &q);
        assert_abs_diff_eq!(f[0], 2.5 * 0.4 / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f[1], 2.5 * 0.4 / 2.0, epsilon = 1e-14);
        assert_eq!(local_force(&e, &Forcing::Zero, &q), [0.0, 0.0]);
    }

    #[test]
    fn sinusoid_reference_element() {
        let e = elem(0.0, 0.1);
        let f = local_force_sinusoid_closed(&e, 5.0, 3.6).unwrap();
        // Midpoint rule with 2e5 panels gives 0.0592259906, 0.0298061988.
        assert_abs_diff_eq!(f[0], 0.0592259906, epsilon = 1e-9);
        assert_abs_diff_eq!(f[1], 0.0298061988, epsilon = 1e-9);
        let total = (5.0 / 3.6) * (1.0 - (0.36f64).cos());
        assert_abs_diff_eq!(f[0] + f[1], total, epsilon = 1e-15);
        assert_abs_diff_eq!(total, 0.0890321893, epsilon = 1e-9);

        let q = QuadratureSpec::default();
        let fq = local_force_quadrature(&e, |s| 5.0 * (3.6 * s).sin(), &q);
        assert_abs_diff_eq!(f[0], fq[0], epsilon = 1e-12);
        assert_abs_diff_eq!(f[1], fq[1], epsilon = 1e-12);

        assert_eq!(
            local_force_sinusoid_closed(&e, 0.0, 2.0).unwrap(),
            [0.0, 0.0]
        );
        assert!(local_force_sinusoid_closed(&e, 1.0, 0.0).is_err());
    }

    // Nodal forces for f0·cos(Ω s), kept only to check the cosine variant
    // of the closed form against quadrature.
    fn cosine_closed(e: &Element, f0: f64, om: f64) -> Vec2 {
        let jump = (f0 / (e.length * om * om)) * ((om * e.right).cos() - (om * e.left).cos());
        [
            (f0 / om) * (om * e.right).sin() + jump,
            -(f0 / om) * (om * e.left).sin() - jump,
        ]
    }

    #[test]
    fn cosine_variant_matches_quadrature() {
        let q = QuadratureSpec::default();
        let e = elem(2.3, 2.45);
        let closed = cosine_closed(&e, 3.0, 7.5);
        let quad = local_force_quadrature(&e, |s| 3.0 * (7.5 * s).cos(), &q);
        assert_abs_diff_eq!(closed[0], quad[0], epsilon = 1e-12);
        assert_abs_diff_eq!(closed[1], quad[1], epsilon = 1e-12);
    }

    #[test]
    fn local_functional_values() {
        let q = QuadratureSpec::default();
        let e = elem(0.0, 1.0);
        let zero =
            evaluate_local_functional(&e, [0.0, 0.0], 1.0, 3.0, &Forcing::Zero, [0.7, -0.2], &q);
        assert_eq!(zero, 0.0);
        let v = evaluate_local_functional(&e, [1.0, 1.0], 1.0, 3.0, &Forcing::Zero, [0.0, 0.0], &q);
        assert_abs_diff_eq!(v, 1.5, epsilon = 1e-15);
    }

    #[test]
    fn local_functional_is_stationary_at_local_solution() {
        let q = QuadratureSpec::default();
        let e = elem(0.4, 0.55);
        let forcing = Forcing::sinusoid(5.0, 3.6).unwrap();
        let (m, k) = (1.0, 9.0);
        let ends = [1.3, -0.4];
        let ls = local_matrices(&e, m, k);
        let f = local_force(&e, &forcing, &q);
        // 𝒦 u = F + [f2, -f1]
        let rhs = [f[0] + ends[1], f[1] - ends[0]];
        let a = ls.kcal;
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let u = [
            (rhs[0] * a[1][1] - a[0][1] * rhs[1]) / det,
            (a[0][0] * rhs[1] - a[1][0] * rhs[0]) / det,
        ];
        let h = 1e-6;
        for i in 0..2 {
            let mut up = u;
            let mut dn = u;
            up[i] += h;
            dn[i] -= h;
            let g = (evaluate_local_functional(&e, up, m, k, &forcing, ends, &q)
                - evaluate_local_functional(&e, dn, m, k, &forcing, ends, &q))
                / (2.0 * h);
            assert!(g.abs() < 1e-6, "gradient component {i} = {g}");
        }
    }
}
