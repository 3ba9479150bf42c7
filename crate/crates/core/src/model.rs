//! Problem data: oscillator parameters, forcing, and the time partition.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::element::Element;
use crate::error::{Error, MeshError, Result};

/// Relative tolerance (against the longest element) used when checking that
/// element lengths read the same forwards and backwards.
pub const PALINDROME_RTOL: f64 = 1e-9;

/// External load `f(s)` driving the oscillator.
#[derive(Clone)]
pub enum Forcing {
    Zero,
    /// `f(s) = amplitude * sin(frequency * s)`.
    Sinusoid {
        amplitude: f64,
        frequency: f64,
    },
    /// Arbitrary load, integrated numerically.
    Pointwise(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Forcing {
    pub fn sinusoid(amplitude: f64, frequency: f64) -> Result<Self> {
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::InvalidArgument("forcing frequency must be positive"));
        }
        if !amplitude.is_finite() {
            return Err(Error::InvalidArgument("forcing amplitude must be finite"));
        }
        Ok(Forcing::Sinusoid {
            amplitude,
            frequency,
        })
    }

    pub fn pointwise<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Forcing::Pointwise(Arc::new(f))
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Forcing::Zero => 0.0,
            Forcing::Sinusoid {
                amplitude,
                frequency,
            } => amplitude * libm::sin(frequency * s),
            Forcing::Pointwise(f) => f(s),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Forcing::Zero)
    }
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forcing::Zero => f.write_str("Zero"),
            Forcing::Sinusoid {
                amplitude,
                frequency,
            } => f
                .debug_struct("Sinusoid")
                .field("amplitude", amplitude)
                .field("frequency", frequency)
                .finish(),
            Forcing::Pointwise(_) => f.write_str("Pointwise(..)"),
        }
    }
}

/// `m u'' + k u = f` on `(0, horizon)` with `u(0) = u0`, `u'(0) = v0`.
#[derive(Debug, Clone)]
pub struct OscillatorProblem {
    mass: f64,
    stiffness: f64,
    initial_displacement: f64,
    initial_velocity: f64,
    horizon: f64,
    forcing: Forcing,
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

impl OscillatorProblem {
    pub fn new(
        mass: f64,
        stiffness: f64,
        initial_displacement: f64,
        initial_velocity: f64,
        horizon: f64,
        forcing: Forcing,
    ) -> Result<Self> {
        if !positive(mass) {
            return Err(Error::InvalidArgument("mass must be positive"));
        }
        if !positive(stiffness) {
            return Err(Error::InvalidArgument("stiffness must be positive"));
        }
        if !positive(horizon) {
            return Err(Error::InvalidArgument("horizon must be positive"));
        }
        if !(initial_displacement.is_finite() && initial_velocity.is_finite()) {
            return Err(Error::InvalidArgument("initial data must be finite"));
        }
        let omega = libm::sqrt(stiffness / mass);
        if !positive(omega) {
            return Err(Error::InvalidArgument(
                "natural frequency is not finite and positive",
            ));
        }
        Ok(OscillatorProblem {
            mass,
            stiffness,
            initial_displacement,
            initial_velocity,
            horizon,
            forcing,
        })
    }

    /// Unforced problem.
    pub fn free(mass: f64, stiffness: f64, u0: f64, v0: f64, horizon: f64) -> Result<Self> {
        Self::new(mass, stiffness, u0, v0, horizon, Forcing::Zero)
    }

    pub fn with_forcing(mut self, forcing: Forcing) -> Self {
        self.forcing = forcing;
        self
    }

    pub fn with_horizon(mut self, horizon: f64) -> Result<Self> {
        if !positive(horizon) {
            return Err(Error::InvalidArgument("horizon must be positive"));
        }
        self.horizon = horizon;
        Ok(self)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn stiffness(&self) -> f64 {
        self.stiffness
    }

    pub fn initial_displacement(&self) -> f64 {
        self.initial_displacement
    }

    pub fn initial_velocity(&self) -> f64 {
        self.initial_velocity
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn forcing(&self) -> &Forcing {
        &self.forcing
    }

    pub fn natural_frequency(&self) -> f64 {
        libm::sqrt(self.stiffness / self.mass)
    }
}

/// `sqrt(k / m)`.
pub fn natural_frequency(problem: &OscillatorProblem) -> f64 {
    problem.natural_frequency()
}

/// Partition `0 = s_1 < ... < s_{n+1} = t` whose element lengths form a
/// palindrome.
///
/// Lengths are stored separately from the nodes and mirrored exactly, so
/// element `e` and element `n + 1 - e` produce bitwise identical local
/// matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    lengths: Vec<f64>,
}

impl Mesh {
    /// Validates `nodes` and builds the mesh.
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        validate_mesh(&nodes)?;
        let n = nodes.len() - 1;
        let mut lengths: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        for e in n.div_ceil(2)..n {
            lengths[e] = lengths[n - 1 - e];
        }
        Ok(Mesh { nodes, lengths })
    }

    /// Builds a palindromic mesh of horizon `sum(2 * half) (+ middle)` from
    /// the lengths of the first half. With `middle = Some(len)` the element
    /// count is odd.
    pub fn from_half_lengths(half: &[f64], middle: Option<f64>) -> Result<Self> {
        let mut lengths: Vec<f64> = half.to_vec();
        if let Some(mid) = middle {
            lengths.push(mid);
        }
        lengths.extend(half.iter().rev());
        if lengths.is_empty() {
            return Err(Error::InvalidArgument("mesh needs at least one element"));
        }
        if lengths.iter().any(|&l| !positive(l)) {
            return Err(Error::InvalidArgument("element lengths must be positive"));
        }
        let mut nodes = Vec::with_capacity(lengths.len() + 1);
        let mut s = 0.0;
        nodes.push(s);
        for &l in &lengths {
            s += l;
            nodes.push(s);
        }
        validate_mesh(&nodes)?;
        Ok(Mesh { nodes, lengths })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn element_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn horizon(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Element `e`, 0-based.
    pub fn element(&self, e: usize) -> Element {
        Element::with_length(e, self.nodes[e], self.nodes[e + 1], self.lengths[e])
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = Element> + '_ {
        (0..self.element_count()).map(move |e| self.element(e))
    }

    /// True when every element has the same stored length.
    pub fn is_uniform(&self) -> bool {
        self.lengths.iter().all(|&l| l == self.lengths[0])
    }
}

/// `n` equal elements on `[0, horizon]`.
pub fn uniform_mesh(horizon: f64, n: usize) -> Result<Mesh> {
    if !positive(horizon) {
        return Err(Error::InvalidArgument("horizon must be positive"));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("element count must be at least 1"));
    }
    let nf = n as f64;
    let nodes: Vec<f64> = (0..=n)
        .map(|i| {
            if i == n {
                horizon
            } else {
                i as f64 * horizon / nf
            }
        })
        .collect();
    if n % 2 == 1 {
        log::warn!("uniform mesh with odd element count n = {n}; element symmetry still holds");
    }
    Ok(Mesh {
        nodes,
        lengths: alloc::vec![horizon / nf; n],
    })
}

/// Checks strict monotonicity, a zero start, and palindromic element
/// lengths. An odd element count is accepted with a warning.
pub fn validate_mesh(nodes: &[f64]) -> core::result::Result<(), MeshError> {
    if nodes.len() < 2 {
        return Err(MeshError::TooFewNodes);
    }
    if nodes[0] != 0.0 {
        return Err(MeshError::NonZeroStart(nodes[0]));
    }
    for (i, w) in nodes.windows(2).enumerate() {
        if !(w[1] > w[0]) || !w[1].is_finite() {
            return Err(MeshError::NotIncreasing { index: i + 1 });
        }
    }
    let n = nodes.len() - 1;
    let length = |e: usize| nodes[e + 1] - nodes[e];
    let longest = (0..n).map(length).fold(0.0, f64::max);
    for e in 0..n / 2 {
        let (a, b) = (length(e), length(n - 1 - e));
        if (a - b).abs() > PALINDROME_RTOL * longest {
            return Err(MeshError::NotPalindromic {
                element: e,
                length: a,
                mirror: b,
            });
        }
    }
    if n % 2 == 1 {
        log::warn!("mesh has an odd element count n = {n}; no node sits at the midpoint");
    }
    Ok(())
}
