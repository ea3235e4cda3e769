//! Gauss-Legendre quadrature rules and barycentric Lagrange interpolation.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GaussError {
    #[error("node count {0} outside supported range 2..=64")]
    NodeCountOutOfRange(usize),
    #[error("duplicate source nodes at indices {0} and {1}")]
    DuplicateNodes(usize, usize),
    #[error("Newton iteration for Legendre root {0} did not converge")]
    NoConvergence(usize),
}

/// An n-point Gauss-Legendre rule on the standard interval [-1, 1].
///
/// Nodes are strictly ascending and symmetric about zero; weights are
/// positive and sum to 2. The rule integrates polynomials of degree up to
/// `2n - 1` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the n-point Gauss-Legendre rule by Newton iteration on the
    /// Legendre polynomial, starting from Chebyshev-point guesses.
    pub fn gauss_legendre(n: usize) -> Result<Self, GaussError> {
        if !(2..=64).contains(&n) {
            return Err(GaussError::NodeCountOutOfRange(n));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        // Roots come in ± pairs; compute the non-negative half and mirror.
        let half = (n + 1) / 2;
        for k in 0..half {
            // Chebyshev initial guess for the (n-k)-th root in descending order.
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut converged = false;
            for _ in 0..20 {
                let (p, dp) = legendre_and_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-15 {
                    converged = true;
                    // One polishing step after the tolerance trips.
                    let (p, dp) = legendre_and_derivative(n, x);
                    x -= p / dp;
                    break;
                }
            }
            if !converged {
                return Err(GaussError::NoConvergence(k));
            }
            let (_, dp) = legendre_and_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[n - 1 - k] = x;
            nodes[k] = -x;
            weights[n - 1 - k] = w;
            weights[k] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
            let (_, dp) = legendre_and_derivative(n, 0.0);
            weights[n / 2] = 2.0 / (dp * dp);
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over [-1, 1] with this rule.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// Evaluates (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Barycentric weights for a set of pairwise distinct nodes.
///
/// The plain product formula is fine for the node counts used here (≤ 64).
pub fn barycentric_weights(nodes: &[f64]) -> Result<Vec<f64>, GaussError> {
    let m = nodes.len();
    let mut w = vec![1.0; m];
    for j in 0..m {
        for k in 0..m {
            if k != j {
                let d = nodes[j] - nodes[k];
                if d == 0.0 {
                    return Err(GaussError::DuplicateNodes(j.min(k), j.max(k)));
                }
                w[j] /= d;
            }
        }
    }
    Ok(w)
}

/// Dense interpolation operator from samples at `src_nodes` to values at
/// `dst_nodes`, built with barycentric Lagrange interpolation.
///
/// Points of `dst_nodes` that coincide with a source node get an exact unit
/// row, so node values are reproduced without roundoff.
#[derive(Debug, Clone)]
pub struct InterpolationMatrix {
    src_nodes: Vec<f64>,
    dst_nodes: Vec<f64>,
    /// Row-major, `dst.len() x src.len()`.
    entries: Vec<f64>,
}

impl InterpolationMatrix {
    pub fn new(src_nodes: &[f64], dst_nodes: &[f64]) -> Result<Self, GaussError> {
        let bw = barycentric_weights(src_nodes)?;
        let m = src_nodes.len();
        let p = dst_nodes.len();
        let mut entries = vec![0.0; p * m];
        for (i, &x) in dst_nodes.iter().enumerate() {
            let row = &mut entries[i * m..(i + 1) * m];
            if let Some(j) = src_nodes.iter().position(|&t| t == x) {
                row[j] = 1.0;
                continue;
            }
            let mut denom = 0.0;
            for j in 0..m {
                row[j] = bw[j] / (x - src_nodes[j]);
                denom += row[j];
            }
            for v in row.iter_mut() {
                *v /= denom;
            }
        }
        Ok(Self {
            src_nodes: src_nodes.to_vec(),
            dst_nodes: dst_nodes.to_vec(),
            entries,
        })
    }

    pub fn src_nodes(&self) -> &[f64] {
        &self.src_nodes
    }

    pub fn dst_nodes(&self) -> &[f64] {
        &self.dst_nodes
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.src_nodes.len() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let m = self.src_nodes.len();
        &self.entries[row * m..(row + 1) * m]
    }

    pub fn apply(&self, samples: &[f64]) -> Vec<f64> {
        assert_eq!(samples.len(), self.src_nodes.len());
        self.dst_nodes
            .iter()
            .enumerate()
            .map(|(i, _)| {
                self.row(i)
                    .iter()
                    .zip(samples)
                    .map(|(&a, &s)| a * s)
                    .sum()
            })
            .collect()
    }

    pub fn apply_complex(&self, samples: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(samples.len(), self.src_nodes.len());
        self.dst_nodes
            .iter()
            .enumerate()
            .map(|(i, _)| {
                self.row(i)
                    .iter()
                    .zip(samples)
                    .map(|(&a, &s)| s * a)
                    .sum()
            })
            .collect()
    }

    /// Accumulates `coeffs^T * M` into `out`: transfers a linear functional
    /// on destination-node samples back to source-node samples.
    pub fn accumulate_transposed(&self, coeffs: &[f64], out: &mut [f64]) {
        let m = self.src_nodes.len();
        assert_eq!(coeffs.len(), self.dst_nodes.len());
        assert_eq!(out.len(), m);
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for (j, &a) in self.row(i).iter().enumerate() {
                out[j] += c * a;
            }
        }
    }
}

/// Barycentric evaluation of the interpolant of `samples` (given at `nodes`
/// with barycentric weights `bw`) at a complex point.
pub fn barycentric_eval_complex(
    nodes: &[f64],
    bw: &[f64],
    samples: &[Complex64],
    z: Complex64,
) -> Complex64 {
    // Exact hit on a node returns the sample itself.
    if z.im == 0.0 {
        if let Some(j) = nodes.iter().position(|&t| t == z.re) {
            return samples[j];
        }
    }
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = Complex64::new(0.0, 0.0);
    for j in 0..nodes.len() {
        let c = bw[j] / (z - nodes[j]);
        num += c * samples[j];
        den += c;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_rule_closed_form() {
        let rule = QuadratureRule::gauss_legendre(2).unwrap();
        let s = 1.0 / 3.0_f64.sqrt();
        assert!((rule.nodes()[0] + s).abs() < 1e-15);
        assert!((rule.nodes()[1] - s).abs() < 1e-15);
        assert!((rule.weights()[0] - 1.0).abs() < 1e-15);
        assert!((rule.weights()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rule_invariants_hold() {
        for n in [2, 3, 8, 16, 32, 64] {
            let rule = QuadratureRule::gauss_legendre(n).unwrap();
            let sum: f64 = rule.weights().iter().sum();
            assert!((sum - 2.0).abs() < 1e-14, "n={n} weight sum {sum}");
            for j in 0..n {
                assert!(rule.weights()[j] > 0.0);
                if j > 0 {
                    assert!(rule.nodes()[j] > rule.nodes()[j - 1]);
                }
                let mirror = -rule.nodes()[n - 1 - j];
                assert!((rule.nodes()[j] - mirror).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn exactness_up_to_degree_2n_minus_1() {
        let rule = QuadratureRule::gauss_legendre(16).unwrap();
        // t^30 with n=16: degree 30 <= 31.
        let got = rule.integrate(|t| t.powi(30));
        assert!((got - 2.0 / 31.0).abs() < 1e-13);
        // Odd monomials vanish.
        assert!(rule.integrate(|t| t.powi(29)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_node_counts() {
        assert!(QuadratureRule::gauss_legendre(1).is_err());
        assert!(QuadratureRule::gauss_legendre(65).is_err());
    }

    #[test]
    fn interp_identity_on_same_nodes() {
        let rule = QuadratureRule::gauss_legendre(16).unwrap();
        let m = InterpolationMatrix::new(rule.nodes(), rule.nodes()).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((m.entry(i, j) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn interp_reproduces_cubic_on_subinterval() {
        let rule = QuadratureRule::gauss_legendre(16).unwrap();
        // 16 GL nodes of [0, 0.5]
        let dst: Vec<f64> = rule.nodes().iter().map(|t| 0.25 + 0.25 * t).collect();
        let m = InterpolationMatrix::new(rule.nodes(), &dst).unwrap();
        let samples: Vec<f64> = rule.nodes().iter().map(|t| t.powi(3)).collect();
        let vals = m.apply(&samples);
        for (v, &x) in vals.iter().zip(&dst) {
            assert!((v - x.powi(3)).abs() < 1e-13);
        }
    }

    #[test]
    fn upsampling_sin_matches_analytic() {
        let r16 = QuadratureRule::gauss_legendre(16).unwrap();
        let r32 = QuadratureRule::gauss_legendre(32).unwrap();
        let m = InterpolationMatrix::new(r16.nodes(), r32.nodes()).unwrap();
        let samples: Vec<f64> = r16.nodes().iter().map(|t| t.sin()).collect();
        let vals = m.apply(&samples);
        let mut max_err: f64 = 0.0;
        for (v, &x) in vals.iter().zip(r32.nodes()) {
            max_err = max_err.max((v - x.sin()).abs());
        }
        assert!(max_err <= 1e-12, "max err {max_err}");
    }

    #[test]
    fn rows_sum_to_one() {
        let r16 = QuadratureRule::gauss_legendre(16).unwrap();
        let r32 = QuadratureRule::gauss_legendre(32).unwrap();
        let m = InterpolationMatrix::new(r16.nodes(), r32.nodes()).unwrap();
        for i in 0..32 {
            let s: f64 = m.row(i).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn composition_round_trip_16_32_16() {
        let r16 = QuadratureRule::gauss_legendre(16).unwrap();
        let r32 = QuadratureRule::gauss_legendre(32).unwrap();
        let up = InterpolationMatrix::new(r16.nodes(), r32.nodes()).unwrap();
        let down = InterpolationMatrix::new(r32.nodes(), r16.nodes()).unwrap();
        let samples: Vec<f64> = r16.nodes().iter().map(|t| t.powi(7) - 0.3 * t).collect();
        let back = down.apply(&up.apply(&samples));
        for (a, b) in back.iter().zip(&samples) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_duplicate_source_nodes() {
        let src = [0.0, 0.5, 0.5, 1.0];
        assert!(InterpolationMatrix::new(&src, &[0.25]).is_err());
    }

    #[test]
    fn barycentric_hits_node_exactly() {
        let rule = QuadratureRule::gauss_legendre(8).unwrap();
        let bw = barycentric_weights(rule.nodes()).unwrap();
        let samples: Vec<Complex64> = rule
            .nodes()
            .iter()
            .map(|&t| Complex64::new(t.cos(), t.sin()))
            .collect();
        let z = Complex64::new(rule.nodes()[3], 0.0);
        let v = barycentric_eval_complex(rule.nodes(), &bw, &samples, z);
        assert_eq!(v, samples[3]);
    }
}
