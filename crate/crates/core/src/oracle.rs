//! Adaptive reference quadrature, independent of the product-integration
//! and correction code paths.
//!
//! Recursive interval halving with a 16-vs-32 point Gauss-Legendre error
//! estimate per leaf; the 32-point value is kept. Integrands with a known
//! singular (or near-singular) parameter location should be split there so
//! the trouble sits at a leaf endpoint, where halving converges.

use num_complex::Complex64;
use thiserror::Error;

use crate::gauss::QuadratureRule;
use crate::geom::{Curve, Point};
use crate::kernels::Kernel;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("adaptive quadrature failed to converge: unresolved error {unresolved:.3e} > tol {tol:.3e}")]
    NoConvergence { unresolved: f64, tol: f64 },
}

const MAX_DEPTH: usize = 48;

struct Adaptive<'a> {
    f: &'a dyn Fn(f64) -> f64,
    g16: QuadratureRule,
    g32: QuadratureRule,
    worst_unresolved: f64,
}

impl Adaptive<'_> {
    /// Quadrature value together with the L1 mass Σ|w f|, which bounds the
    /// roundoff attainable on this leaf.
    fn apply(&self, rule: &QuadratureRule, a: f64, b: f64) -> (f64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        let mut l1 = 0.0;
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            let term = w * half * (self.f)(mid + half * t);
            sum += term;
            l1 += term.abs();
        }
        (sum, l1)
    }

    fn recurse(&mut self, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
        let (coarse, _) = self.apply(&self.g16, a, b);
        let (fine, l1) = self.apply(&self.g32, a, b);
        let diff = (coarse - fine).abs();
        // Once the difference is within a small multiple of eps times the
        // local L1 mass it is dominated by roundoff in the integrand (e.g.
        // cancellation in |y - x| near a singularity); asking for more only
        // causes runaway refinement.
        if diff <= tol.max(64.0 * f64::EPSILON * l1) {
            return fine;
        }
        if depth >= MAX_DEPTH {
            self.worst_unresolved = self.worst_unresolved.max(diff);
            return fine;
        }
        // Children keep the parent tolerance. Halving it per level is the
        // textbook-rigorous choice, but near a singularity it drives leaf
        // tolerances below the integrand's roundoff and the refinement never
        // terminates; the accumulated error over the (few hundred) leaves
        // stays well under the slack built into `tol` by the callers.
        let mid = 0.5 * (a + b);
        self.recurse(a, mid, tol, depth + 1) + self.recurse(mid, b, tol, depth + 1)
    }
}

/// Integrates `f` over [a, b] to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, OracleError> {
    integrate_with_split(f, a, b, None, tol)
}

/// Integrates `f` over [a, b], pre-splitting at `split_at` when it lies
/// strictly inside the interval.
pub fn integrate_with_split(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    split_at: Option<f64>,
    tol: f64,
) -> Result<f64, OracleError> {
    let mut ad = Adaptive {
        f: &f,
        g16: QuadratureRule::gauss_legendre(16).unwrap(),
        g32: QuadratureRule::gauss_legendre(32).unwrap(),
        worst_unresolved: 0.0,
    };
    let value = match split_at {
        Some(c) if c > a && c < b => {
            ad.recurse(a, c, 0.5 * tol, 0) + ad.recurse(c, b, 0.5 * tol, 0)
        }
        _ => ad.recurse(a, b, tol, 0),
    };
    if ad.worst_unresolved > tol {
        return Err(OracleError::NoConvergence {
            unresolved: ad.worst_unresolved,
            tol,
        });
    }
    Ok(value)
}

/// Reference value of a layer potential from one curve piece:
/// `∫_{t0}^{t1} G(x, γ(t)) σ(t) |γ'(t)| dt`, with `density` given in the
/// curve's own parameter. `split_at` (curve parameter) marks the
/// singularity location for on-surface or nearly singular targets.
pub fn panel_potential(
    kernel: &dyn Kernel,
    curve: &dyn Curve,
    t0: f64,
    t1: f64,
    density: &dyn Fn(f64) -> f64,
    x: Point,
    split_at: Option<f64>,
    tol: f64,
) -> Result<f64, OracleError> {
    let f = |t: f64| {
        let y = curve.point(t);
        let dg = curve.derivative(t);
        let s = dg.norm();
        let normal = Complex64::new(0.0, -1.0) * dg / s;
        if y == x {
            // Touching node of an on-surface target: the DLP integrand is
            // continuous there; the SLP is log-singular but integrable, and
            // the split keeps this point at a leaf endpoint.
            return 0.0;
        }
        kernel.eval(x, y, normal) * density(t) * s
    };
    integrate_with_split(f, t0, t1, split_at, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Segment;
    use crate::kernels::SingleLayer;

    #[test]
    fn smooth_integrand_exact() {
        let v = integrate(|t: f64| t.sin(), 0.0, 2.0, 1e-13).unwrap();
        assert!((v - (1.0 - 2.0_f64.cos())).abs() < 1e-14);
    }

    #[test]
    fn endpoint_log_singularity() {
        let v = integrate(|t: f64| t.max(1e-310).ln(), 0.0, 1.0, 1e-13).unwrap();
        assert!((v + 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn interior_log_singularity_with_split() {
        let z = 0.3;
        let f = move |t: f64| (t - z).abs().max(1e-310).ln();
        let v = integrate_with_split(f, -1.0, 1.0, Some(z), 1e-13).unwrap();
        let expect = (1.0 - z) * (1.0 - z).ln() + (1.0 + z) * (1.0 + z).ln() - 2.0;
        assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
    }

    #[test]
    fn flat_panel_slp_far_target_matches_plain_gl() {
        // Far target: one 16-point panel already converges; the oracle must
        // agree with it.
        let seg = Segment::new(Complex64::new(-0.5, 0.0), Complex64::new(0.5, 0.0));
        let slp = SingleLayer::new(2.0);
        let x = Complex64::new(0.1, 3.0);
        let v = panel_potential(&slp, &seg, 0.0, 1.0, &|_| 1.0, x, None, 1e-14).unwrap();
        let rule = QuadratureRule::gauss_legendre(16).unwrap();
        let plain: f64 = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&t, &w)| {
                let tt = 0.5 + 0.5 * t;
                let y = seg.point(tt);
                let s = seg.derivative(tt).norm();
                0.5 * w * slp.eval(x, y, Complex64::new(0.0, 1.0)) * s
            })
            .sum();
        assert!((v - plain).abs() < 1e-13);
    }

    #[test]
    fn reports_nonconvergence_on_unsplit_discontinuity() {
        // A 1/sqrt singularity placed at an irrational interior point with
        // no split: leaves never isolate it cleanly at machine precision.
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let f = move |t: f64| (t - c).abs().powf(-0.9);
        let r = integrate(f, 0.0, 1.0, 1e-13);
        assert!(r.is_err());
    }
}
