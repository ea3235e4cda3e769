//! Dense linear algebra for the Nyström system, plus right-hand-side
//! construction and solution evaluation for the annulus test problem.
//!
//! The discretized second-kind equation is `(I + D) σ = f` with `D` the
//! double-layer Nyström matrix and `f` the Dirichlet data sampled at the
//! boundary nodes. System sizes are a few hundred, so an in-place
//! partial-pivot LU is entirely adequate.

use thiserror::Error;

use crate::bessel;
use crate::eval::{self, EvalError, EvalOptions};
use crate::geom::{Boundary, Point};
use crate::kernels::Kernel;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("matrix is singular to working precision (condition estimate {0:.3e})")]
    Singular(f64),
    #[error("system has not been solved yet")]
    NotSolved,
    #[error("target {0} lies on the boundary")]
    TargetOnBoundary(Point),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Row-major dense real matrix.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(&a, &v)| a * v).sum())
            .collect()
    }

    /// In-place LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<LuFactors, SolveError> {
        assert_eq!(self.rows, self.cols, "LU requires a square matrix");
        let n = self.rows;
        let mut lu = self.data.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut max_pivot: f64 = 0.0;
        let mut min_pivot = f64::INFINITY;
        for col in 0..n {
            let (p, pval) = (col..n)
                .map(|r| (r, lu[r * n + col].abs()))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            max_pivot = max_pivot.max(pval);
            min_pivot = min_pivot.min(pval);
            // Only an exactly zero pivot is fatal; merely ill-conditioned
            // systems still get a solution (and a large `pivot_ratio`), the
            // way standard dense LAPACK solvers behave.
            if pval == 0.0 {
                return Err(SolveError::Singular(max_pivot / f64::MIN_POSITIVE));
            }
            if p != col {
                for j in 0..n {
                    lu.swap(col * n + j, p * n + j);
                }
                piv.swap(col, p);
            }
            let d = lu[col * n + col];
            for r in col + 1..n {
                let m = lu[r * n + col] / d;
                lu[r * n + col] = m;
                for j in col + 1..n {
                    lu[r * n + j] -= m * lu[col * n + j];
                }
            }
        }
        Ok(LuFactors {
            n,
            lu,
            piv,
            pivot_ratio: max_pivot / min_pivot,
        })
    }
}

/// Packed LU factors with the pivot permutation.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    piv: Vec<usize>,
    /// Ratio of largest to smallest pivot — a cheap conditioning indicator.
    pub pivot_ratio: f64,
}

impl LuFactors {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.piv.iter().map(|&p| b[p]).collect();
        for r in 1..n {
            let mut s = x[r];
            for j in 0..r {
                s -= self.lu[r * n + j] * x[j];
            }
            x[r] = s;
        }
        for r in (0..n).rev() {
            let mut s = x[r];
            for j in r + 1..n {
                s -= self.lu[r * n + j] * x[j];
            }
            x[r] = s / self.lu[r * n + r];
        }
        x
    }
}

/// The assembled Nyström system `(I + D) σ = f` with its solution state.
#[derive(Debug)]
pub struct NystromSystem {
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
    pub sigma: Option<Vec<f64>>,
    pub residual: f64,
}

impl NystromSystem {
    pub fn new(matrix: DenseMatrix, rhs: Vec<f64>) -> Self {
        assert_eq!(matrix.rows(), rhs.len());
        Self {
            matrix,
            rhs,
            sigma: None,
            residual: f64::NAN,
        }
    }

    /// Solves for the density and records the relative residual
    /// `‖Aσ − f‖∞ / ‖f‖∞` (0 when f ≡ 0).
    pub fn solve_density(&mut self) -> Result<&[f64], SolveError> {
        let lu = self.matrix.lu()?;
        let sigma = lu.solve(&self.rhs);
        let ax = self.matrix.matvec(&sigma);
        let num = ax
            .iter()
            .zip(&self.rhs)
            .map(|(a, f)| (a - f).abs())
            .fold(0.0_f64, f64::max);
        let den = self.rhs.iter().map(|f| f.abs()).fold(0.0_f64, f64::max);
        self.residual = if den > 0.0 { num / den } else { num };
        self.sigma = Some(sigma);
        Ok(self.sigma.as_deref().unwrap())
    }

    pub fn sigma(&self) -> Result<&[f64], SolveError> {
        self.sigma.as_deref().ok_or(SolveError::NotSolved)
    }
}

/// Dirichlet data `f_r = K0(α |y_r − x0|)` at every boundary node, for the
/// fundamental-solution test problem with source x0 outside the domain.
pub fn build_rhs(boundary: &Boundary, alpha: f64, x0: Point) -> Vec<f64> {
    (0..boundary.num_nodes())
        .map(|r| {
            let d = (boundary.node_position(r) - x0).norm();
            bessel::k0(alpha * d).unwrap_or(0.0)
        })
        .collect()
}

/// Evaluates the solved layer potential at interior targets.
pub fn eval_solution(
    boundary: &Boundary,
    kernel: &dyn Kernel,
    sigma: &[f64],
    targets: &[Point],
    options: &EvalOptions,
) -> Result<Vec<f64>, SolveError> {
    targets
        .iter()
        .map(|&x| {
            eval::potential_at(boundary, kernel, sigma, x, options).map_err(|e| match e {
                EvalError::TargetOnBoundary(p) => SolveError::TargetOnBoundary(p),
                other => SolveError::Eval(other),
            })
        })
        .collect()
}
