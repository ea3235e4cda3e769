//! Flat-panel accuracy map: kernel-split single-layer evaluation over a
//! flat panel of length h, with decay parameter α, measured against an
//! adaptive reference quadrature at random near targets.

use crate::config::{FlatpanelConfig, SubdivisionMode};
use crate::CliError;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use splitquad::eval::{classify_off_surface, panel_row};
use splitquad::gauss::QuadratureRule;
use splitquad::geom::{Panel, Segment};
use splitquad::kernels::SingleLayer;
use splitquad::{oracle, EvalOptions};

/// One (α, h) grid cell. Errors are the max over the random targets of
/// the relative deviation from the reference value; NaN marks a cell that
/// was skipped or whose reference failed.
#[derive(Debug, Clone)]
pub struct FlatRow {
    pub alpha: f64,
    pub h: f64,
    pub err_plain: f64,
    pub err_subdiv: f64,
}

#[derive(Debug)]
pub struct FlatOutcome {
    pub rows: Vec<FlatRow>,
    /// Cells whose reference quadrature failed to converge.
    pub oracle_failures: usize,
}

/// Density in the segment's curve parameter t ∈ [0, 1]; smooth and
/// non-polynomial so interpolation onto subpanels is exercised.
fn density(t: f64) -> f64 {
    1.5 + (3.0 * t).sin()
}

pub fn run(cfg: &FlatpanelConfig) -> Result<FlatOutcome, CliError> {
    cfg.validate()?;
    let alphas = cfg.alpha.values()?;
    let hs = cfg.h.values()?;
    let rule = QuadratureRule::gauss_legendre(cfg.n)
        .map_err(|e| CliError::Config(e.to_string()))?;

    let cells: Vec<(usize, f64, f64)> = alphas
        .iter()
        .flat_map(|&a| hs.iter().map(move |&h| (a, h)))
        .enumerate()
        .map(|(i, (a, h))| (i, a, h))
        .collect();

    let mut results: Vec<(usize, FlatRow, usize)> = cells
        .par_iter()
        .map(|&(idx, alpha, h)| {
            let (row, failures) = run_cell(alpha, h, idx as u64, cfg, &rule)?;
            Ok((idx, row, failures))
        })
        .collect::<Result<_, CliError>>()?;
    results.sort_by_key(|r| r.0);

    Ok(FlatOutcome {
        oracle_failures: results.iter().map(|r| r.2).sum(),
        rows: results.into_iter().map(|r| r.1).collect(),
    })
}

fn run_cell(
    alpha: f64,
    h: f64,
    cell_index: u64,
    cfg: &FlatpanelConfig,
    rule: &QuadratureRule,
) -> Result<(FlatRow, usize), CliError> {
    let seg = Segment::new(Complex64::new(-0.5 * h, 0.0), Complex64::new(0.5 * h, 0.0));
    let panel = Panel::from_curve(&seg, 0.0, 1.0, rule);
    let kernel = SingleLayer::new(alpha);
    let sigma: Vec<f64> = panel
        .nodes
        .iter()
        .map(|&s| density(0.5 + 0.5 * s))
        .collect();

    let base = EvalOptions {
        c_eps: cfg.c_eps,
        r_eps: cfg.r_eps,
        ..EvalOptions::default()
    };
    let opts_plain = EvalOptions {
        use_subdivision: false,
        ..base.clone()
    };
    let opts_subdiv = EvalOptions {
        use_subdivision: true,
        ..base
    };
    let want_plain = cfg.subdivision != SubdivisionMode::On;
    let want_subdiv = cfg.subdivision != SubdivisionMode::Off;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(1 + cell_index);

    let mut err_plain: f64 = 0.0;
    let mut err_subdiv: f64 = 0.0;
    let mut used = 0usize;
    let mut row = vec![0.0; cfg.n];
    for _ in 0..cfg.targets_per_cell {
        let x = Complex64::new(
            rng.gen_range(-0.5 * h..=0.5 * h),
            rng.gen_range(0.0..=0.5 * h),
        );
        let split_at = panel
            .compute_preimage(x)
            .ok()
            .map(|z| (0.5 + 0.5 * z.re).clamp(0.0, 1.0));
        // Two passes: the reference tolerance is absolute, but the error
        // metric is relative, so exponentially small potentials need the
        // tolerance rescaled by a first-pass magnitude estimate.
        let reference = |tol: f64| {
            oracle::panel_potential(&kernel, &seg, 0.0, 1.0, &density, x, split_at, tol)
        };
        let u = match reference(cfg.oracle_tol).and_then(|u1| {
            if u1 != 0.0 && u1.abs() < 0.1 {
                reference((cfg.oracle_tol * u1.abs()).max(1e-295))
            } else {
                Ok(u1)
            }
        }) {
            Ok(u) => u,
            Err(e) => {
                eprintln!("flatpanel cell alpha={alpha} h={h}: reference failed: {e}");
                return Ok((
                    FlatRow {
                        alpha,
                        h,
                        err_plain: f64::NAN,
                        err_subdiv: f64::NAN,
                    },
                    1,
                ));
            }
        };
        // A fully underflowed reference carries no relative-error signal.
        if u.abs() < 1e-280 {
            continue;
        }
        used += 1;
        let mut approx = |opts: &EvalOptions| -> Result<f64, CliError> {
            let class = classify_off_surface(&panel, x, opts)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            row.iter_mut().for_each(|v| *v = 0.0);
            panel_row(&panel, &kernel, x, class, opts, &mut row)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            Ok(row.iter().zip(&sigma).map(|(&w, &s)| w * s).sum())
        };
        if want_plain {
            let v = approx(&opts_plain)?;
            err_plain = err_plain.max(((u - v) / u).abs());
        }
        if want_subdiv {
            let v = approx(&opts_subdiv)?;
            err_subdiv = err_subdiv.max(((u - v) / u).abs());
        }
    }

    Ok((
        FlatRow {
            alpha,
            h,
            err_plain: if want_plain && used > 0 {
                err_plain
            } else {
                f64::NAN
            },
            err_subdiv: if want_subdiv && used > 0 {
                err_subdiv
            } else {
                f64::NAN
            },
        },
        0,
    ))
}

/// Renders rows as the documented CSV schema.
pub fn to_csv(rows: &[FlatRow]) -> String {
    use crate::csvfmt::{fmt_float, table};
    table(
        "alpha,h,alpha_h,err_plain,err_subdiv",
        rows.iter().map(|r| {
            vec![
                fmt_float(r.alpha),
                fmt_float(r.h),
                fmt_float(r.alpha * r.h),
                fmt_float(r.err_plain),
                fmt_float(r.err_subdiv),
            ]
        }),
    )
}
