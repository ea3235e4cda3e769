//! Target-specific product-integration weights for the log and Cauchy
//! singularities on the standard interval.
//!
//! For a target with (possibly complex) preimage z, the weights `wl`
//! satisfy
//!
//! ```text
//! sum_j wl_j t_j^k = ∫_{-1}^{1} t^k ln|t - z| dt,   k = 0..n-1
//! ```
//!
//! and the complex weights `wc` do the same for the Cauchy moments
//! `∫ t^k / (t - z) dt`. Both are obtained from closed-form moment
//! recursions anchored at the complex logarithm, followed by a transposed
//! Vandermonde solve (Björck-Pereyra). For real z the Cauchy moments are
//! taken in the principal-value sense and `valid_wc` is false: on-surface
//! targets normally never need them, and the PV weights are retained only
//! for the rare distant-on-surface case.

use num_complex::Complex64;
use thiserror::Error;

use crate::gauss::QuadratureRule;

#[derive(Debug, Error, PartialEq)]
pub enum ProdintError {
    #[error("target preimage |z| = {0} too far from the interval (limit 10); use direct quadrature")]
    TargetTooFar(f64),
    #[error("node count {0} outside supported range 2..=32")]
    BadNodeCount(usize),
}

/// Product-integration weights for one (panel, target) pair.
#[derive(Debug, Clone)]
pub struct TargetWeights {
    pub z: Complex64,
    /// Log-kernel weights, one per node.
    pub wl: Vec<f64>,
    /// Complex Cauchy-kernel weights, one per node. Principal-value (real)
    /// when z is real.
    pub wc: Vec<Complex64>,
    /// False when z is real: the Cauchy family is only defined in the
    /// principal-value sense there.
    pub valid_wc: bool,
}

impl TargetWeights {
    pub fn compute(rule: &QuadratureRule, z: Complex64) -> Result<Self, ProdintError> {
        Self::compute_for_nodes(rule.nodes(), z)
    }

    /// As [`TargetWeights::compute`], but from a bare ascending node set.
    pub fn compute_for_nodes(nodes: &[f64], z: Complex64) -> Result<Self, ProdintError> {
        let n = nodes.len();
        if !(2..=32).contains(&n) {
            return Err(ProdintError::BadNodeCount(n));
        }
        if z.norm() > 10.0 {
            return Err(ProdintError::TargetTooFar(z.norm()));
        }
        // One extra Cauchy moment: p_k needs q_k for k up to n.
        let q = cauchy_moments(n + 1, z);
        let p = log_moments(&q, z);

        let mut wl_c: Vec<Complex64> = p.iter().map(|&p| Complex64::new(p, 0.0)).collect();
        pvand(nodes, &mut wl_c);
        let wl: Vec<f64> = wl_c.iter().map(|w| w.re).collect();

        let on_surface = z.im == 0.0;
        let mut wc: Vec<Complex64> = if on_surface {
            q[..n].iter().map(|m| Complex64::new(m.re, 0.0)).collect()
        } else {
            q[..n].to_vec()
        };
        pvand(nodes, &mut wc);

        Ok(Self {
            z,
            wl,
            wc,
            valid_wc: !on_surface,
        })
    }
}

/// Cauchy moments `q_k = ∫_{-1}^{1} t^k / (t - z) dt`, k = 0..n-1.
///
/// The principal-branch logs in the anchor are valid because Im(t - z) has
/// constant sign along the interval. The forward recursion
/// `q_k = z q_{k-1} + (1 - (-1)^k)/k` is stable for |z| ≲ 1; beyond that
/// each moment is summed directly from the geometric expansion of the
/// Cauchy kernel.
pub fn cauchy_moments(n: usize, z: Complex64) -> Vec<Complex64> {
    let mut q = Vec::with_capacity(n);
    if z.norm() <= 1.1 {
        let mut cur = ((1.0 - z).ln()) - ((-1.0 - z).ln());
        q.push(cur);
        for k in 1..n {
            // ∫ t^{k-1} dt over [-1,1]: 2/k for odd k, 0 for even.
            let anti = if k % 2 == 1 { 2.0 / k as f64 } else { 0.0 };
            cur = z * cur + anti;
            q.push(cur);
        }
    } else {
        // q_k = -sum_{m>=0} I_{k+m} z^{-(m+1)}, I_j = 2/(j+1) for even j.
        let inv = 1.0 / z;
        let terms = moment_series_len(z.norm());
        for k in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in (0..terms).rev() {
                let j = k + m;
                let monomial = if j % 2 == 0 { 2.0 / (j + 1) as f64 } else { 0.0 };
                acc = (acc + monomial) * inv;
            }
            q.push(-acc);
        }
    }
    q
}

fn moment_series_len(r: f64) -> usize {
    // (1/r)^m < 1e-18 · (r-1)  — crude but safe for r > 1.1.
    let m = (-18.0 * std::f64::consts::LN_10 / (1.0 / r).ln()).ceil();
    (m as usize + 8).min(2000)
}

/// Log moments `p_k = ∫_{-1}^{1} t^{k-1} ln|t - z| dt`, k = 1..n, from the
/// Cauchy moments by integration by parts:
/// `k p_k = Re[ L(1) - (-1)^k L(-1) - q_k ]` with `L(t) = ln(t - z)`.
/// `q` must hold the moments 0..n, i.e. one more than the n values produced.
fn log_moments(q: &[Complex64], z: Complex64) -> Vec<f64> {
    let n = q.len() - 1;
    let la = (1.0 - z).ln();
    let lb = (-1.0 - z).ln();
    let mut p = Vec::with_capacity(n);
    let mut sign = -1.0; // (-1)^k for k = 1
    for k in 1..=n {
        let pk = (la - sign * lb - q[k]) / k as f64;
        p.push(pk.re);
        sign = -sign;
    }
    p
}

/// Solves the transposed Vandermonde system `sum_j w_j t_j^k = b_k`,
/// k = 0..n-1, in place (Björck-Pereyra, O(n²)).
pub fn pvand(nodes: &[f64], b: &mut [Complex64]) {
    let n = nodes.len();
    assert_eq!(b.len(), n);
    for k in 0..n {
        for j in (k + 1..n).rev() {
            let t = b[j - 1] * nodes[k];
            b[j] -= t;
        }
    }
    for k in (0..n.saturating_sub(1)).rev() {
        for j in k + 1..n {
            b[j] /= nodes[j] - nodes[j - k - 1];
        }
        for j in k..n - 1 {
            let t = b[j + 1];
            b[j] -= t;
        }
    }
}
