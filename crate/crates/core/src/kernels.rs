//! Modified Helmholtz layer-potential kernels and their split
//! decompositions.
//!
//! Writing r = |y - x| and d = (y - x)·n̂(y), every kernel here decomposes
//! as
//!
//! ```text
//! G(x, y) = G0(x, y) + GL(x, y) ln r + GC · d / r²
//! ```
//!
//! where `G0` and `GL` are smooth and `GC` is a constant (0 for the single
//! layer, 1/π for the double layer). The Cauchy factor `d/r²` extends
//! smoothly to on-surface targets with diagonal limit `κ(y)/2`.
//!
//! The double-layer sign is chosen so that, with boundary normals pointing
//! out of the solution domain, the interior Dirichlet problem discretizes
//! to the second-kind system `(I + D)σ = f`.
//!
//! The split components absorb the decay parameter's `ln α` so that the
//! extracted singularity is exactly `ln r`:
//!
//! ```text
//! K0(αr)           = [k0s(αr) - I0(αr) ln α] - I0(αr) ln r
//! (α/π) K1(αr) d/r = (α/π)[k1s(αr) + I1(αr) ln α] d/r
//!                    + (α/π) I1(αr) (d/r) ln r + (1/π) d/r²
//! ```
//!
//! with `k0s(z) = K0(z) + I0(z) ln z` and `k1s(z) = K1(z) - I1(z) ln z - 1/z`.

use num_complex::Complex64;

use crate::bessel::raw;
use crate::geom::Point;

/// A kernel value together with its split components at one (x, y) pair.
///
/// Reconstruction: `g = g0 + gl * ln r + gc * d / r²`.
#[derive(Debug, Clone, Copy)]
pub struct SplitEval {
    /// Full kernel value G(x, y).
    pub g: f64,
    /// Smooth component G0.
    pub g0: f64,
    /// Coefficient of ln|x−y|.
    pub gl: f64,
    /// Constant coefficient of the Cauchy factor (y−x)·n̂(y)/|x−y|².
    pub gc: f64,
}

/// Diagonal (x = y on the boundary) limits of the split components.
#[derive(Debug, Clone, Copy)]
pub struct DiagSplit {
    pub g0: f64,
    pub gl: f64,
    /// Limit of gc·d/r², i.e. gc·κ/2.
    pub cauchy: f64,
}

/// The Cauchy factor d/r² with d = (y−x)·n̂(y). Smooth along the boundary;
/// singular for off-surface targets approaching y.
pub fn cauchy_factor(x: Point, y: Point, normal_y: Point) -> f64 {
    let r2 = (y - x).norm_sqr();
    ((y - x) * normal_y.conj()).re / r2
}

/// A layer-potential kernel with a known split decomposition.
///
/// `x` is the target, `y` a source point on the boundary with unit normal
/// `normal_y`. All methods require x ≠ y; the diagonal is handled through
/// [`Kernel::diag`].
pub trait Kernel: Sync {
    fn alpha(&self) -> f64;
    /// Full kernel value.
    fn eval(&self, x: Point, y: Point, normal_y: Point) -> f64;
    /// Kernel value plus split components.
    fn split(&self, x: Point, y: Point, normal_y: Point) -> SplitEval;
    /// Split-component limits as x → y along the boundary, for a source
    /// point with signed curvature `curvature`.
    fn diag(&self, curvature: f64) -> DiagSplit;
    /// The constant G_C of this kernel.
    fn gc(&self) -> f64;
}

/// Single-layer kernel `G(x, y) = K0(α|x−y|)`.
#[derive(Debug, Clone, Copy)]
pub struct SingleLayer {
    pub alpha: f64,
}

impl SingleLayer {
    pub fn new(alpha: f64) -> Self {
        assert!(alpha > 0.0, "alpha must be positive");
        Self { alpha }
    }
}

impl Kernel for SingleLayer {
    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn eval(&self, x: Point, y: Point, _normal_y: Point) -> f64 {
        let r = (y - x).norm();
        assert!(r > 0.0, "kernel evaluated on the diagonal");
        raw::k0(self.alpha * r)
    }

    fn split(&self, x: Point, y: Point, _normal_y: Point) -> SplitEval {
        let r = (y - x).norm();
        assert!(r > 0.0, "kernel split evaluated on the diagonal");
        let z = self.alpha * r;
        let i0 = raw::i0(z);
        let g0 = raw::k0_smooth(z) - i0 * self.alpha.ln();
        let gl = -i0;
        SplitEval {
            g: g0 + gl * r.ln(),
            g0,
            gl,
            gc: 0.0,
        }
    }

    fn diag(&self, _curvature: f64) -> DiagSplit {
        DiagSplit {
            g0: std::f64::consts::LN_2 - crate::bessel::EULER_GAMMA - self.alpha.ln(),
            gl: -1.0,
            cauchy: 0.0,
        }
    }

    fn gc(&self) -> f64 {
        0.0
    }
}

/// Double-layer kernel `G(x, y) = (α/π) K1(α|y−x|) ((y−x)·n̂(y))/|y−x|`
/// `= -(1/π) ∂/∂n̂(y) K0(α|y−x|)`, the sign that makes the interior
/// Dirichlet operator `I + D` when normals point out of the domain.
#[derive(Debug, Clone, Copy)]
pub struct DoubleLayer {
    pub alpha: f64,
}

impl DoubleLayer {
    pub fn new(alpha: f64) -> Self {
        assert!(alpha > 0.0, "alpha must be positive");
        Self { alpha }
    }
}

const FRAC_1_PI: f64 = std::f64::consts::FRAC_1_PI;

impl Kernel for DoubleLayer {
    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn eval(&self, x: Point, y: Point, normal_y: Point) -> f64 {
        let dx = y - x;
        let r = dx.norm();
        assert!(r > 0.0, "kernel evaluated on the diagonal");
        let d = (dx * normal_y.conj()).re;
        self.alpha * FRAC_1_PI * raw::k1(self.alpha * r) * d / r
    }

    fn split(&self, x: Point, y: Point, normal_y: Point) -> SplitEval {
        let dx = y - x;
        let r = dx.norm();
        assert!(r > 0.0, "kernel split evaluated on the diagonal");
        let d = (dx * normal_y.conj()).re;
        let z = self.alpha * r;
        let pre = self.alpha * FRAC_1_PI * d / r;
        let g0 = pre * (raw::k1_smooth(z) + raw::i1(z) * self.alpha.ln());
        let gl = pre * raw::i1(z);
        let gc = FRAC_1_PI;
        SplitEval {
            g: g0 + gl * r.ln() + gc * d / (r * r),
            g0,
            gl,
            gc,
        }
    }

    fn diag(&self, curvature: f64) -> DiagSplit {
        // d/r → 0 and k1s(0) = I1(0) = 0, so only the Cauchy part survives;
        // d/r² → κ/2 along the boundary.
        DiagSplit {
            g0: 0.0,
            gl: 0.0,
            cauchy: FRAC_1_PI * 0.5 * curvature,
        }
    }

    fn gc(&self) -> f64 {
        FRAC_1_PI
    }
}

/// Convenience: unit complex from an angle.
#[cfg(test)]
pub(crate) fn unit(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel;
    use rand::{Rng, SeedableRng};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn slp_value_is_k0() {
        // α|x−y| = 1.
        let slp = SingleLayer::new(2.0);
        let x = Complex64::new(0.0, 0.0);
        let y = Complex64::new(0.5, 0.0);
        let g = slp.eval(x, y, Complex64::new(0.0, 1.0));
        assert!(rel(g, 0.42102443824070834) < 1e-14);
    }

    #[test]
    fn slp_depends_only_on_distance() {
        let slp = SingleLayer::new(3.7);
        let x = Complex64::new(0.2, -0.1);
        let mut prev = None;
        for k in 0..8 {
            let y = x + 0.31 * unit(0.25 + k as f64);
            let g = slp.eval(x, y, unit(1.0 + k as f64));
            if let Some(p) = prev {
                assert!(rel(g, p) < 1e-15);
            }
            prev = Some(g);
        }
    }

    #[test]
    fn slp_reconstruction_identity() {
        let slp = SingleLayer::new(10.0);
        let x = Complex64::new(0.0, 0.0);
        let y = Complex64::new(0.05, 0.0);
        let s = slp.split(x, y, Complex64::new(0.0, 1.0));
        assert_eq!(s.gc, 0.0);
        let recon = s.g0 + s.gl * 0.05_f64.ln();
        assert!(rel(s.g, recon) < 1e-13);
        assert!(rel(s.g, slp.eval(x, y, Complex64::new(0.0, 1.0))) < 1e-12);
    }

    #[test]
    fn slp_diag_limit_by_extrapolation() {
        let alpha = 7.0;
        let slp = SingleLayer::new(alpha);
        let d = slp.diag(0.0);
        assert!(rel(d.g0, std::f64::consts::LN_2 - bessel::EULER_GAMMA - alpha.ln()) < 1e-15);
        // Off-diagonal g0, gl approach the diagonal values as r → 0.
        let x = Complex64::new(0.0, 0.0);
        for &r in &[1e-4, 1e-6] {
            let s = slp.split(x, Complex64::new(r, 0.0), Complex64::new(0.0, 1.0));
            assert!((s.g0 - d.g0).abs() < 10.0 * (alpha * r).powi(2));
            assert!((s.gl - d.gl).abs() < 10.0 * (alpha * r).powi(2));
        }
    }

    #[test]
    fn dlp_gc_constant() {
        let dlp = DoubleLayer::new(50.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let y = x + 0.02 * unit(rng.gen_range(0.0..6.28));
            let nh = unit(rng.gen_range(0.0..6.28));
            let s = dlp.split(x, y, nh);
            assert_eq!(s.gc, 0.3183098861837907);
        }
    }

    #[test]
    fn dlp_reconstruction_identity() {
        let dlp = DoubleLayer::new(50.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let r = 0.02;
            let y = x + r * unit(rng.gen_range(0.0..6.28));
            let nh = unit(rng.gen_range(0.0..6.28));
            let s = dlp.split(x, y, nh);
            let recon = s.g0 + s.gl * r.ln() + s.gc * cauchy_factor(x, y, nh);
            assert!(rel(s.g, recon) < 1e-12, "g={} recon={recon}", s.g);
            assert!(rel(s.g, dlp.eval(x, y, nh)) < 1e-12);
        }
    }

    #[test]
    fn split_reconstruction_moderate_alpha_r() {
        // Reconstruction holds through αr up to 30.
        let slp = SingleLayer::new(300.0);
        let dlp = DoubleLayer::new(300.0);
        let x = Complex64::new(0.0, 0.0);
        for &r in &[0.01, 0.05, 0.1] {
            let y = Complex64::new(r, 0.0);
            let nh = unit(0.7);
            let s = slp.split(x, y, nh);
            assert!(rel(s.g, s.g0 + s.gl * r.ln()) < 1e-12, "slp r={r}");
            let t = dlp.split(x, y, nh);
            let recon = t.g0 + t.gl * r.ln() + t.gc * cauchy_factor(x, y, nh);
            assert!(rel(t.g, recon) < 1e-12, "dlp r={r}");
        }
    }

    #[test]
    fn cauchy_factor_diagonal_limit_is_half_curvature() {
        // On a counter-clockwise circle of radius R (κ = 1/R), let the
        // source approach a fixed on-surface target: d/r² → κ/2.
        let radius = 0.4;
        let x = Complex64::new(radius, 0.0);
        for &theta in &[1e-3, 1e-4, 1e-5] {
            let y = radius * unit(theta);
            let nh = unit(theta); // outward normal of the CCW circle
            let c = cauchy_factor(x, y, nh);
            let expect = 0.5 / radius;
            assert!((c - expect).abs() < radius.recip() * theta, "θ={theta}");
        }
    }

    #[test]
    fn dlp_diag_matches_near_diagonal_kernel() {
        // Full DLP kernel between two nearby on-surface circle points tends
        // to the diag() Cauchy limit.
        let alpha = 5.0;
        let radius = 0.4;
        let dlp = DoubleLayer::new(alpha);
        let kappa = 1.0 / radius;
        let d = dlp.diag(kappa);
        assert_eq!(d.g0, 0.0);
        assert_eq!(d.gl, 0.0);
        let x = Complex64::new(radius, 0.0);
        let mut prev_err = f64::INFINITY;
        for &theta in &[1e-2, 1e-3, 1e-4] {
            let y = radius * unit(theta);
            let g = dlp.eval(x, y, unit(theta));
            // The log-part contribution vanishes like r² ln r; the limit of
            // g is g0 + gc·κ/2 = diag cauchy value.
            let err = (g - d.cauchy).abs();
            assert!(err < prev_err);
            prev_err = err;
        }
        assert!(prev_err < 1e-4, "kernel does not approach diag limit");
        assert!((d.cauchy - kappa / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn exponential_growth_of_log_coefficient() {
        // |gl| at fixed r grows like I0(αr): I0(20)/I0(10) ≈ 1.54e4.
        let r = 0.1;
        let x = Complex64::new(0.0, 0.0);
        let y = Complex64::new(r, 0.0);
        let nh = Complex64::new(0.0, 1.0);
        let g100 = SingleLayer::new(100.0).split(x, y, nh).gl.abs();
        let g200 = SingleLayer::new(200.0).split(x, y, nh).gl.abs();
        assert!(g200 / g100 > 1000.0);
    }
}
