//! Numerical convolution over `[0, t]` and over a shifted interval
//! `[t1, t2]`.
//!
//! Everything here is plain composite quadrature. The closed-form element
//! matrices and nodal forces elsewhere in the crate are checked against
//! these routines, so nothing in this module depends on them.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

pub const MAX_GAUSS_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    /// Gauss–Legendre with the given number of points per panel (2..=16).
    GaussLegendre(usize),
    /// Three-point Simpson rule on each panel.
    Simpson,
}

/// Composite rule: the integration interval is split into `panels` equal
/// panels and the base rule is applied on each.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    rule: QuadratureRule,
    panels: usize,
    // Reference nodes on [-1, 1] and weights.
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Default for QuadratureSpec {
    /// Five Gauss points on each of eight panels.
    fn default() -> Self {
        Self::gauss_legendre(5, 8).expect("default rule is valid")
    }
}

impl QuadratureSpec {
    pub fn gauss_legendre(points: usize, panels: usize) -> Result<Self> {
        if !(2..=MAX_GAUSS_POINTS).contains(&points) {
            return Err(Error::InvalidArgument(
                "Gauss points per panel must be in 2..=16",
            ));
        }
        if panels == 0 {
            return Err(Error::InvalidArgument("panel count must be at least 1"));
        }
        let (nodes, weights) = gauss_legendre_rule(points);
        Ok(QuadratureSpec {
            rule: QuadratureRule::GaussLegendre(points),
            panels,
            nodes,
            weights,
        })
    }

    pub fn simpson(panels: usize) -> Result<Self> {
        if panels == 0 {
            return Err(Error::InvalidArgument("panel count must be at least 1"));
        }
        Ok(QuadratureSpec {
            rule: QuadratureRule::Simpson,
            panels,
            nodes: alloc::vec![-1.0, 0.0, 1.0],
            weights: alloc::vec![1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0],
        })
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// Same rule with a different panel count.
    pub fn with_panels(&self, panels: usize) -> Result<Self> {
        if panels == 0 {
            return Err(Error::InvalidArgument("panel count must be at least 1"));
        }
        Ok(QuadratureSpec {
            panels,
            ..self.clone()
        })
    }

    /// `∫_a^b f(s) ds`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let width = (b - a) / self.panels as f64;
        let half = 0.5 * width;
        let mut total = 0.0;
        for p in 0..self.panels {
            let mid = a + (p as f64 + 0.5) * width;
            let mut panel = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                panel += w * f(mid + half * x);
            }
            total += panel * half;
        }
        total
    }

    /// Integrates piece by piece between consecutive `breaks`, which must be
    /// ascending. Use this when the integrand has kinks.
    pub fn integrate_piecewise<F: Fn(f64) -> f64>(&self, f: F, breaks: &[f64]) -> f64 {
        breaks
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| self.integrate(&f, w[0], w[1]))
            .sum()
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// from Newton iteration on the Legendre polynomial.
fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `[g, h](t) = ∫_0^t g(s) h(t - s) ds`.
pub fn convolve<G, H>(g: G, h: H, t: f64, quad: &QuadratureSpec) -> Result<f64>
where
    G: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(
            "convolution length must be positive",
        ));
    }
    Ok(quad.integrate(|s| g(s) * h(t - s), 0.0, t))
}

/// `[g, h](t)` split at `breaks` (points of `[0, t]` where the integrand
/// has kinks, in the integration variable `s`).
pub fn convolve_piecewise<G, H>(
    g: G,
    h: H,
    t: f64,
    breaks: &[f64],
    quad: &QuadratureSpec,
) -> Result<f64>
where
    G: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(
            "convolution length must be positive",
        ));
    }
    let mut pts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    pts.push(0.0);
    pts.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < t));
    pts.push(t);
    pts.sort_by(|a, b| a.total_cmp(b));
    Ok(quad.integrate_piecewise(|s| g(s) * h(t - s), &pts))
}

/// `[g, h]_{t1}^{t2} = ∫_0^τ g(t1 + s) h(t2 - s) ds` with `τ = t2 - t1`.
pub fn convolve_shifted<G, H>(g: G, h: H, t1: f64, t2: f64, quad: &QuadratureSpec) -> Result<f64>
where
    G: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    if !(t2 > t1) {
        return Err(Error::InvalidArgument("shifted convolution needs t2 > t1"));
    }
    if t1 < 0.0 {
        return Err(Error::InvalidArgument("shifted convolution needs t1 >= 0"));
    }
    Ok(quad.integrate(|s| g(t1 + s) * h(t2 - s), 0.0, t2 - t1))
}
