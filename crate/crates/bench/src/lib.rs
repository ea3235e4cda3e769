//! Shared fixtures for the benchmark suite.

use num_complex::Complex64;
use splitquad::gauss::QuadratureRule;
use splitquad::geom::{Circle, Orientation};
use splitquad::Boundary;

/// The two-circle annulus boundary used by the solver experiments.
pub fn annulus_boundary() -> Boundary {
    let rule = QuadratureRule::gauss_legendre(16).unwrap();
    let origin = Complex64::new(0.0, 0.0);
    let inner = Circle::new(origin, 0.3, Orientation::Clockwise);
    let outer = Circle::new(origin, 0.6, Orientation::CounterClockwise);
    Boundary::concat(vec![
        Boundary::panelize(&inner, 15, &rule).unwrap(),
        Boundary::panelize(&outer, 30, &rule).unwrap(),
    ])
}
