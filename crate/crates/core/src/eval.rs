//! Layer-potential evaluation: target classification, kernel-split
//! correction rows, the per-target adaptive subdivision path, and Nyström
//! matrix assembly.
//!
//! Everything is organized around *rows*: for a target x and a source
//! panel with nodes y_j, a row is the vector r_j such that the panel's
//! contribution to the potential is Σ_j r_j σ_j. Rows serve both potential
//! evaluation (dot with the density samples) and matrix assembly (scatter
//! into the system matrix), and the adaptive path maps subpanel rows back
//! to parent nodes through the transposed interpolation operator, so the
//! assembled matrix always acts on the original node densities.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use thiserror::Error;

use crate::gauss::InterpolationMatrix;
use crate::geom::{Boundary, GeomError, Panel, Point};
use crate::kernels::Kernel;
use crate::prodint::{ProdintError, TargetWeights};
use crate::solve::DenseMatrix;
use crate::subdiv::{bernstein_radius, create_subdivision, local_preimage, SubdivParams};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("preimage computation failed for target {target}: {source}")]
    Preimage {
        target: Point,
        #[source]
        source: GeomError,
    },
    #[error(transparent)]
    Weights(#[from] ProdintError),
    #[error("target {0} lies on the boundary")]
    TargetOnBoundary(Point),
}

/// Knobs controlling classification and the adaptive path.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    /// Kernel-split accuracy constant C_ε.
    pub c_eps: f64,
    /// Bernstein cutoff radius R_ε.
    pub r_eps: f64,
    /// Enable the per-target recursive subdivision.
    pub use_subdivision: bool,
    /// Coarse far filter: skip the preimage entirely when the target is
    /// farther than this multiple of the panel arc length from the panel
    /// midpoint.
    pub far_prefilter: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            c_eps: 4.0,
            r_eps: 3.0,
            use_subdivision: true,
            far_prefilter: 1.5,
        }
    }
}

/// How a (target, panel) pair is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    /// Plain Gauss-Legendre suffices.
    Far,
    /// The target is node `i` of this very panel.
    SelfNode(usize),
    /// The target lies on this panel's curve but not on the panel itself
    /// (neighbor node, or distant along the same curve); real preimage,
    /// log correction only.
    OnSurface { z: f64 },
    /// Off-curve target with ρ(z) < R_ε; log and Cauchy corrections.
    /// A real z here is the on-curve principal-value case.
    Near { z: Complex64 },
}

/// Instrumentation from one matrix assembly.
#[derive(Debug, Clone, Default)]
pub struct EvalReport {
    /// Wall time spent on self- and neighbor-block rows.
    pub neighbor_time: Duration,
    /// Number of (target, panel) blocks that received corrections.
    pub corrected_blocks: usize,
    /// Subintervals summed over all corrected blocks (1 per block when the
    /// subdivision path is off or idle).
    pub total_subintervals: usize,
}

impl EvalReport {
    pub fn mean_subintervals(&self) -> f64 {
        if self.corrected_blocks == 0 {
            0.0
        } else {
            self.total_subintervals as f64 / self.corrected_blocks as f64
        }
    }
}

/// Classifies an off-curve target against one panel.
pub fn classify_off_surface(
    panel: &Panel,
    x: Point,
    options: &EvalOptions,
) -> Result<Classification, EvalError> {
    if (x - panel.midpoint).norm() > options.far_prefilter * panel.arc_length {
        return Ok(Classification::Far);
    }
    let z = match panel.compute_preimage(x) {
        Ok(z) => z,
        // Divergence means the target is far from this panel's arc.
        Err(GeomError::PreimageFailed(_)) => return Ok(Classification::Far),
        Err(e) => {
            return Err(EvalError::Preimage {
                target: x,
                source: e,
            })
        }
    };
    if bernstein_radius(z) >= options.r_eps {
        Ok(Classification::Far)
    } else {
        Ok(Classification::Near { z })
    }
}

/// Classifies source panel `p` for the on-surface target that is node `i`
/// of panel `q`.
pub fn classify_on_surface(
    boundary: &Boundary,
    q: usize,
    i: usize,
    p: usize,
    options: &EvalOptions,
) -> Result<Classification, EvalError> {
    if p == q {
        return Ok(Classification::SelfNode(i));
    }
    let x = boundary.panels[q].positions[i];
    let panel = &boundary.panels[p];
    if boundary.are_neighbors(p, q) {
        let z = panel.compute_preimage(x).map_err(|e| EvalError::Preimage {
            target: x,
            source: e,
        })?;
        return Ok(Classification::OnSurface { z: z.re });
    }
    match classify_off_surface(panel, x, options)? {
        Classification::Near { z } if boundary.same_component(p, q) => {
            // On the same curve the true preimage is real; discard the
            // Newton iteration's roundoff-level imaginary part.
            Ok(Classification::Near {
                z: Complex64::new(z.re, 0.0),
            })
        }
        other => Ok(other),
    }
}

/// Plain Gauss-Legendre row: r_j = G(x, y_j) s_j λ_j.
pub fn direct_row(panel: &Panel, kernel: &dyn Kernel, x: Point, out: &mut [f64]) {
    for j in 0..panel.num_nodes() {
        out[j] = kernel.eval(x, panel.positions[j], panel.normals[j])
            * panel.speeds[j]
            * panel.weights[j];
    }
}

/// Kernel-split corrected row for a target with preimage z.
///
/// The direct sum is augmented with the log-kernel product-integration
/// correction, and — when `cauchy` is set — with the Cauchy-kernel
/// correction built from the complex weights (principal-value weights when
/// z is real).
pub fn split_row(
    panel: &Panel,
    kernel: &dyn Kernel,
    x: Point,
    z: Complex64,
    cauchy: bool,
    out: &mut [f64],
) -> Result<(), EvalError> {
    let w = TargetWeights::compute_for_nodes(&panel.nodes, z)?;
    let include_cauchy = cauchy && kernel.gc() != 0.0;
    for j in 0..panel.num_nodes() {
        let y = panel.positions[j];
        let se = kernel.split(x, y, panel.normals[j]);
        let t = Complex64::new(panel.nodes[j], 0.0);
        let lam = panel.weights[j];
        let s = panel.speeds[j];
        let mut v = se.g * s * lam + se.gl * s * (w.wl[j] - lam * (t - z).norm().ln());
        if include_cauchy {
            let q = panel.dgamma[j] / (y - x);
            v += se.gc * (q * ((t - z) * w.wc[j] - lam)).im;
        }
        out[j] = v;
    }
    Ok(())
}

/// Corrected row for the target that is node `i` of the panel itself.
///
/// Off-diagonal entries follow the on-surface (log-only) correction; the
/// diagonal uses the split limits, with `ln s_i` as the limit of
/// `ln(|γ(t) − x| / |t − t_i|)` and the smooth on-surface Cauchy value
/// `κ_i/2`.
pub fn self_row(panel: &Panel, kernel: &dyn Kernel, i: usize, out: &mut [f64]) -> Result<(), EvalError> {
    let z = Complex64::new(panel.nodes[i], 0.0);
    let w = TargetWeights::compute_for_nodes(&panel.nodes, z)?;
    let x = panel.positions[i];
    for j in 0..panel.num_nodes() {
        if j == i {
            continue;
        }
        let se = kernel.split(x, panel.positions[j], panel.normals[j]);
        let lam = panel.weights[j];
        let s = panel.speeds[j];
        let lnfac = (panel.nodes[j] - panel.nodes[i]).abs().ln();
        out[j] = se.g * s * lam + se.gl * s * (w.wl[j] - lam * lnfac);
    }
    let d = kernel.diag(panel.curvatures[i]);
    let s = panel.speeds[i];
    let lam = panel.weights[i];
    out[i] = d.g0 * s * lam + d.gl * s * (w.wl[i] + lam * s.ln()) + d.cauchy * s * lam;
    Ok(())
}

/// Whether the adaptive path is needed at all for this (kernel, panel):
/// it activates exactly when one kernel-split panel would be too long,
/// i.e. Δt_max < 2 ⇔ αh > C_ε. Below that the plain corrected rows are
/// used, and enabling subdivision changes nothing.
pub fn needs_subdivision(kernel: &dyn Kernel, panel: &Panel, options: &EvalOptions) -> bool {
    options.use_subdivision && kernel.alpha() * panel.arc_length > options.c_eps
}

/// Corrected row via the per-target subdivision: builds subpanels by
/// interpolation, evaluates each with the appropriate row type, and maps
/// the result back to the parent nodes. Returns the number of
/// subintervals used.
pub fn adaptive_row(
    panel: &Panel,
    kernel: &dyn Kernel,
    x: Point,
    z: Complex64,
    cauchy: bool,
    options: &EvalOptions,
    out: &mut [f64],
) -> Result<usize, EvalError> {
    let params = SubdivParams::new(
        options.c_eps,
        options.r_eps,
        kernel.alpha(),
        panel.arc_length,
    );
    let sub = create_subdivision(z, &params);
    let n = panel.num_nodes();
    let mut sub_row = vec![0.0; n];
    for (a, b) in sub.intervals() {
        let dt = b - a;
        let zi = local_preimage(z, a, dt);
        if a == -1.0 && b == 1.0 {
            // Trivial subdivision: evaluate on the parent panel directly so
            // the result is bit-identical to the non-adaptive path.
            if bernstein_radius(z) >= options.r_eps {
                direct_row(panel, kernel, x, &mut sub_row);
            } else {
                split_row(panel, kernel, x, z, cauchy, &mut sub_row)?;
            }
            for (o, s) in out.iter_mut().zip(&sub_row) {
                *o += s;
            }
            continue;
        }
        let dst: Vec<f64> = panel.nodes.iter().map(|&t| a + 0.5 * dt * (t + 1.0)).collect();
        let interp = InterpolationMatrix::new(&panel.nodes, &dst).expect("distinct nodes");
        let positions = interp.apply_complex(&panel.positions);
        let mut dgamma = interp.apply_complex(&panel.dgamma);
        for d in &mut dgamma {
            *d *= 0.5 * dt;
        }
        let curvatures = interp.apply(&panel.curvatures);
        let subpanel = Panel::from_node_data(
            positions,
            dgamma,
            curvatures,
            panel.nodes.clone(),
            panel.weights.clone(),
            panel.arc_length * 0.5 * dt,
        );
        if bernstein_radius(zi) >= options.r_eps {
            direct_row(&subpanel, kernel, x, &mut sub_row);
        } else {
            split_row(&subpanel, kernel, x, zi, cauchy, &mut sub_row)?;
        }
        interp.accumulate_transposed(&sub_row, out);
    }
    Ok(sub.num_intervals())
}

/// Builds the full row for one (target, panel) pair according to its
/// classification, routing through the adaptive path when required.
/// Returns the number of subintervals (0 for far blocks).
pub fn panel_row(
    panel: &Panel,
    kernel: &dyn Kernel,
    x: Point,
    class: Classification,
    options: &EvalOptions,
    out: &mut [f64],
) -> Result<usize, EvalError> {
    match class {
        Classification::Far => {
            direct_row(panel, kernel, x, out);
            Ok(0)
        }
        Classification::SelfNode(i) => {
            if needs_subdivision(kernel, panel, options) {
                let z = Complex64::new(panel.nodes[i], 0.0);
                adaptive_row(panel, kernel, x, z, false, options, out)
            } else {
                self_row(panel, kernel, i, out)?;
                Ok(1)
            }
        }
        Classification::OnSurface { z } => {
            let zc = Complex64::new(z, 0.0);
            if needs_subdivision(kernel, panel, options) {
                adaptive_row(panel, kernel, x, zc, false, options, out)
            } else {
                split_row(panel, kernel, x, zc, false, out)?;
                Ok(1)
            }
        }
        Classification::Near { z } => {
            if needs_subdivision(kernel, panel, options) {
                adaptive_row(panel, kernel, x, z, true, options, out)
            } else {
                split_row(panel, kernel, x, z, true, out)?;
                Ok(1)
            }
        }
    }
}

/// Assembles the Nyström matrix `A = I + D` for a closed boundary, with
/// corrected self/neighbor/near blocks and timing instrumentation.
pub fn assemble_nystrom(
    boundary: &Boundary,
    kernel: &dyn Kernel,
    options: &EvalOptions,
) -> Result<(DenseMatrix, EvalReport), EvalError> {
    let npp = boundary.nodes_per_panel();
    let nn = boundary.num_nodes();
    let mut a = DenseMatrix::zeros(nn, nn);
    let mut report = EvalReport::default();
    for q in 0..boundary.num_panels() {
        for i in 0..npp {
            let r = q * npp + i;
            let x = boundary.panels[q].positions[i];
            let row = a.row_mut(r);
            for p in 0..boundary.num_panels() {
                let class = classify_on_surface(boundary, q, i, p, options)?;
                let block = &mut row[p * npp..(p + 1) * npp];
                if class == Classification::Far {
                    direct_row(&boundary.panels[p], kernel, x, block);
                } else {
                    let t0 = Instant::now();
                    let subintervals =
                        panel_row(&boundary.panels[p], kernel, x, class, options, block)?;
                    report.neighbor_time += t0.elapsed();
                    report.corrected_blocks += 1;
                    report.total_subintervals += subintervals;
                }
            }
            row[r] += 1.0;
        }
    }
    Ok((a, report))
}

/// Evaluates the layer potential at an off-boundary target point from
/// density samples at the boundary nodes.
pub fn potential_at(
    boundary: &Boundary,
    kernel: &dyn Kernel,
    sigma: &[f64],
    x: Point,
    options: &EvalOptions,
) -> Result<f64, EvalError> {
    let npp = boundary.nodes_per_panel();
    assert_eq!(sigma.len(), boundary.num_nodes());
    let mut row = vec![0.0; npp];
    let mut total = 0.0;
    for (p, panel) in boundary.panels.iter().enumerate() {
        let class = classify_off_surface(panel, x, options)?;
        if let Classification::Near { z } = class {
            if z.im.abs() < 1e-12 && z.re.abs() <= 1.0 {
                return Err(EvalError::TargetOnBoundary(x));
            }
        }
        row.iter_mut().for_each(|v| *v = 0.0);
        panel_row(panel, kernel, x, class, options, &mut row)?;
        total += row
            .iter()
            .zip(&sigma[p * npp..(p + 1) * npp])
            .map(|(&r, &s)| r * s)
            .sum::<f64>();
    }
    Ok(total)
}
