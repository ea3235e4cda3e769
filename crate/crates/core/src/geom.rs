//! Parametrized boundary curves, composite panelization, per-panel
//! geometric data, and the complex preimage of a target point.
//!
//! The plane is identified with the complex numbers. Curves are
//! parametrized counter-clockwise around the region they enclose; the unit
//! normal is `-i γ'/|γ'|`, which then points out of the enclosed disk. For
//! an annulus the outer circle runs counter-clockwise and the inner circle
//! clockwise, so normals point out of the fluid domain on both.

use num_complex::Complex64;
use thiserror::Error;

use crate::gauss::QuadratureRule;

pub type Point = Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("need at least {min} panels, got {got}")]
    TooFewPanels { min: usize, got: usize },
    #[error("preimage Newton iteration failed to converge after {0} iterations")]
    PreimageFailed(usize),
}

/// A regular parametrized plane curve with two derivatives.
pub trait Curve: Sync + Send {
    fn point(&self, t: f64) -> Point;
    fn derivative(&self, t: f64) -> Point;
    fn second_derivative(&self, t: f64) -> Point;
    /// Parameter interval covered by the curve.
    fn param_range(&self) -> (f64, f64);
    fn is_closed(&self) -> bool;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

/// Circle of given center and radius, traversed in the given direction
/// over the parameter range [0, 2π).
#[derive(Debug, Clone)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
    pub orientation: Orientation,
}

impl Circle {
    pub fn new(center: Point, radius: f64, orientation: Orientation) -> Self {
        Self {
            center,
            radius,
            orientation,
        }
    }

    fn sign(&self) -> f64 {
        match self.orientation {
            Orientation::CounterClockwise => 1.0,
            Orientation::Clockwise => -1.0,
        }
    }
}

impl Curve for Circle {
    fn point(&self, t: f64) -> Point {
        self.center + self.radius * (Complex64::new(0.0, self.sign() * t)).exp()
    }

    fn derivative(&self, t: f64) -> Point {
        let s = self.sign();
        Complex64::new(0.0, s * self.radius) * (Complex64::new(0.0, s * t)).exp()
    }

    fn second_derivative(&self, t: f64) -> Point {
        let s = self.sign();
        -self.radius * (Complex64::new(0.0, s * t)).exp()
    }

    fn param_range(&self) -> (f64, f64) {
        (0.0, 2.0 * std::f64::consts::PI)
    }

    fn is_closed(&self) -> bool {
        true
    }
}

/// Straight segment from `start` to `end` over the parameter range [0, 1].
#[derive(Debug, Clone)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
}

impl Segment {
    pub fn new(start: Point, end: Point) -> Self {
        Self { start, end }
    }
}

impl Curve for Segment {
    fn point(&self, t: f64) -> Point {
        self.start + (self.end - self.start) * t
    }

    fn derivative(&self, _t: f64) -> Point {
        self.end - self.start
    }

    fn second_derivative(&self, _t: f64) -> Point {
        Complex64::new(0.0, 0.0)
    }

    fn param_range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn is_closed(&self) -> bool {
        false
    }
}

/// Curve defined by user-supplied closures for γ, γ' and γ''.
pub struct GenericCurve {
    pub gamma: Box<dyn Fn(f64) -> Point + Sync + Send>,
    pub dgamma: Box<dyn Fn(f64) -> Point + Sync + Send>,
    pub ddgamma: Box<dyn Fn(f64) -> Point + Sync + Send>,
    pub range: (f64, f64),
    pub closed: bool,
}

impl Curve for GenericCurve {
    fn point(&self, t: f64) -> Point {
        (self.gamma)(t)
    }

    fn derivative(&self, t: f64) -> Point {
        (self.dgamma)(t)
    }

    fn second_derivative(&self, t: f64) -> Point {
        (self.ddgamma)(t)
    }

    fn param_range(&self) -> (f64, f64) {
        self.range
    }

    fn is_closed(&self) -> bool {
        self.closed
    }
}

/// One curve segment with its quadrature-node data, pulled back to the
/// standard interval [-1, 1].
///
/// `dgamma` and `speeds` are derivatives with respect to the standard
/// variable, i.e. they include the `(b-a)/2` factor of the affine map from
/// [-1, 1] to the parameter subinterval [a, b].
#[derive(Debug, Clone)]
pub struct Panel {
    pub t_start: f64,
    pub t_end: f64,
    /// Arc length h of the panel.
    pub arc_length: f64,
    pub positions: Vec<Point>,
    pub dgamma: Vec<Point>,
    pub normals: Vec<Point>,
    pub speeds: Vec<f64>,
    pub curvatures: Vec<f64>,
    /// Gauss-Legendre nodes on [-1, 1].
    pub nodes: Vec<f64>,
    /// Gauss-Legendre weights.
    pub weights: Vec<f64>,
    /// γ((a+b)/2), used by the far/near prefilter.
    pub midpoint: Point,
    /// Legendre coefficients of the degree-(n-1) interpolant of γ at the
    /// panel nodes; cached for preimage Newton iterations.
    legendre_coeffs: Vec<Complex64>,
}

impl Panel {
    pub fn from_curve(curve: &dyn Curve, t_start: f64, t_end: f64, rule: &QuadratureRule) -> Self {
        let n = rule.len();
        let half = 0.5 * (t_end - t_start);
        let mid = 0.5 * (t_start + t_end);
        let mut positions = Vec::with_capacity(n);
        let mut dgamma = Vec::with_capacity(n);
        let mut normals = Vec::with_capacity(n);
        let mut speeds = Vec::with_capacity(n);
        let mut curvatures = Vec::with_capacity(n);
        for &tau in rule.nodes() {
            let t = mid + half * tau;
            let y = curve.point(t);
            let d1 = curve.derivative(t);
            let d2 = curve.second_derivative(t);
            let dg = d1 * half;
            let s = dg.norm();
            positions.push(y);
            dgamma.push(dg);
            normals.push(Complex64::new(0.0, -1.0) * dg / s);
            speeds.push(s);
            // κ = Im(conj(γ') γ'') / |γ'|^3, invariant under affine reparametrization.
            curvatures.push((d1.conj() * d2).im / d1.norm().powi(3));
        }
        // Arc length via a finer rule than the panel's own, so the discrete
        // arc-length consistency check is not circular.
        let fine = QuadratureRule::gauss_legendre(2 * n.min(32)).unwrap();
        let arc_length = fine.integrate(|tau| curve.derivative(mid + half * tau).norm() * half);
        let legendre_coeffs = legendre_fit(rule, &positions);
        Self {
            t_start,
            t_end,
            arc_length,
            positions,
            dgamma,
            normals,
            speeds,
            curvatures,
            nodes: rule.nodes().to_vec(),
            weights: rule.weights().to_vec(),
            midpoint: curve.point(mid),
            legendre_coeffs,
        }
    }

    /// Builds a panel directly from node data on the standard interval.
    /// Used for subpanels whose geometry comes from interpolation.
    pub fn from_node_data(
        positions: Vec<Point>,
        dgamma: Vec<Point>,
        curvatures: Vec<f64>,
        nodes: Vec<f64>,
        weights: Vec<f64>,
        arc_length: f64,
    ) -> Self {
        let normals: Vec<Point> = dgamma
            .iter()
            .map(|&dg| Complex64::new(0.0, -1.0) * dg / dg.norm())
            .collect();
        let speeds: Vec<f64> = dgamma.iter().map(|dg| dg.norm()).collect();
        let midpoint = positions[positions.len() / 2];
        let legendre_coeffs = legendre_fit_raw(&nodes, &weights, &positions);
        Self {
            t_start: -1.0,
            t_end: 1.0,
            arc_length,
            positions,
            dgamma,
            normals,
            speeds,
            curvatures,
            nodes,
            weights,
            midpoint,
            legendre_coeffs,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.positions.len()
    }

    /// Evaluates the cached polynomial interpolant of γ and its derivative
    /// (with respect to the standard variable) at a complex parameter.
    pub fn interpolant(&self, z: Complex64) -> (Complex64, Complex64) {
        legendre_eval(&self.legendre_coeffs, z)
    }

    /// Newton iteration for the preimage z with γ̃(z) = x, where γ̃ is the
    /// polynomial interpolant of the panel geometry. Initial guess is the
    /// parameter of the nearest node.
    pub fn compute_preimage(&self, x: Point) -> Result<Complex64, GeomError> {
        const MAX_ITER: usize = 30;
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (j, y) in self.positions.iter().enumerate() {
            let d = (y - x).norm();
            if d < best_dist {
                best_dist = d;
                best = j;
            }
        }
        let mut z = Complex64::new(self.nodes[best], 0.0);
        let tol = 1e-13 * self.arc_length;
        for _ in 0..MAX_ITER {
            let (g, dg) = legendre_eval(&self.legendre_coeffs, z);
            let r = g - x;
            if r.norm() <= tol {
                return Ok(z);
            }
            z -= r / dg;
            if z.norm() > 4.0 {
                return Err(GeomError::PreimageFailed(MAX_ITER));
            }
        }
        let (g, _) = legendre_eval(&self.legendre_coeffs, z);
        if (g - x).norm() <= 1e-12 * self.arc_length {
            Ok(z)
        } else {
            Err(GeomError::PreimageFailed(MAX_ITER))
        }
    }
}

/// Legendre coefficients of the interpolant of `samples` at the rule nodes,
/// by discrete projection (exact for the degree-(n-1) interpolant).
fn legendre_fit(rule: &QuadratureRule, samples: &[Complex64]) -> Vec<Complex64> {
    legendre_fit_raw(rule.nodes(), rule.weights(), samples)
}

fn legendre_fit_raw(nodes: &[f64], weights: &[f64], samples: &[Complex64]) -> Vec<Complex64> {
    let n = nodes.len();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    // P_k at all nodes by the three-term recurrence.
    let mut p_prev: Vec<f64> = vec![1.0; n];
    let mut p: Vec<f64> = nodes.to_vec();
    for j in 0..n {
        coeffs[0] += samples[j] * (0.5 * weights[j] * p_prev[j]);
        if n > 1 {
            coeffs[1] += samples[j] * (1.5 * weights[j] * p[j]);
        }
    }
    for k in 2..n {
        let kf = k as f64;
        for j in 0..n {
            let p_next = ((2.0 * kf - 1.0) * nodes[j] * p[j] - (kf - 1.0) * p_prev[j]) / kf;
            p_prev[j] = p[j];
            p[j] = p_next;
            coeffs[k] += samples[j] * ((kf + 0.5) * weights[j] * p_next);
        }
    }
    coeffs
}

/// Evaluates a Legendre series and its derivative at a complex point, using
/// the derivative recurrence P'_k = P'_{k-2} + (2k-1) P_{k-1} (stable at ±1).
fn legendre_eval(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let n = coeffs.len();
    let mut p_prev = Complex64::new(1.0, 0.0);
    let mut p = z;
    let mut dp_prev = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(1.0, 0.0);
    let mut val = coeffs[0] * p_prev;
    let mut dval = Complex64::new(0.0, 0.0);
    if n > 1 {
        val += coeffs[1] * p;
        dval += coeffs[1] * dp;
    }
    for k in 2..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * z * p - (kf - 1.0) * p_prev) / kf;
        let dp_next = dp_prev + (2.0 * kf - 1.0) * p;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        val += coeffs[k] * p;
        dval += coeffs[k] * dp;
    }
    (val, dval)
}

/// Ordered collection of panels with neighbor topology.
#[derive(Debug)]
pub struct Boundary {
    pub panels: Vec<Panel>,
    neighbors: Vec<Vec<usize>>,
    /// Connected-component id per panel (one id per concatenated curve).
    component: Vec<usize>,
    nodes_per_panel: usize,
}

impl Boundary {
    /// Equiparametric subdivision of the curve into `num_panels` panels.
    pub fn panelize(
        curve: &dyn Curve,
        num_panels: usize,
        rule: &QuadratureRule,
    ) -> Result<Self, GeomError> {
        let min = if curve.is_closed() { 3 } else { 1 };
        if num_panels < min {
            return Err(GeomError::TooFewPanels {
                min,
                got: num_panels,
            });
        }
        let (a, b) = curve.param_range();
        let dt = (b - a) / num_panels as f64;
        let panels: Vec<Panel> = (0..num_panels)
            .map(|i| {
                Panel::from_curve(curve, a + dt * i as f64, a + dt * (i + 1) as f64, rule)
            })
            .collect();
        let closed = curve.is_closed();
        let mut neighbors = vec![Vec::new(); num_panels];
        for i in 0..num_panels {
            if i > 0 {
                neighbors[i].push(i - 1);
            } else if closed && num_panels > 2 {
                neighbors[i].push(num_panels - 1);
            }
            if i + 1 < num_panels {
                neighbors[i].push(i + 1);
            } else if closed && num_panels > 2 {
                neighbors[i].push(0);
            }
        }
        Ok(Self {
            panels,
            neighbors,
            component: vec![0; num_panels],
            nodes_per_panel: rule.len(),
        })
    }

    /// Merges several boundaries (e.g. the two circles of an annulus) into
    /// one. No neighbor links are created across components.
    pub fn concat(parts: Vec<Boundary>) -> Self {
        assert!(!parts.is_empty());
        let nodes_per_panel = parts[0].nodes_per_panel;
        let mut panels = Vec::new();
        let mut neighbors = Vec::new();
        let mut component = Vec::new();
        for (c, part) in parts.into_iter().enumerate() {
            assert_eq!(part.nodes_per_panel, nodes_per_panel);
            let offset = panels.len();
            panels.extend(part.panels);
            neighbors.extend(
                part.neighbors
                    .into_iter()
                    .map(|list| list.into_iter().map(|j| j + offset).collect::<Vec<_>>()),
            );
            component.extend(part.component.into_iter().map(|_| c));
        }
        Self {
            panels,
            neighbors,
            component,
            nodes_per_panel,
        }
    }

    pub fn num_panels(&self) -> usize {
        self.panels.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.panels.len() * self.nodes_per_panel
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.nodes_per_panel
    }

    pub fn neighbors_of(&self, panel: usize) -> &[usize] {
        &self.neighbors[panel]
    }

    pub fn are_neighbors(&self, p: usize, q: usize) -> bool {
        self.neighbors[p].contains(&q)
    }

    /// Whether two panels come from the same connected curve.
    pub fn same_component(&self, p: usize, q: usize) -> bool {
        self.component[p] == self.component[q]
    }

    /// Position of a boundary node, panel-major ordering.
    pub fn node_position(&self, global_index: usize) -> Point {
        let p = global_index / self.nodes_per_panel;
        let j = global_index % self.nodes_per_panel;
        self.panels[p].positions[j]
    }
}
