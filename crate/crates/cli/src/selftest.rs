//! Quick end-to-end consistency checks, printable from the command line.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splitquad::gauss::QuadratureRule;
use splitquad::subdiv::{create_subdivision, SubdivParams};
use splitquad::{bessel, TargetWeights};

fn wronskian_holds() -> bool {
    (0..400).all(|k| {
        let z = 1e-3 * (600.0_f64 / 1e-3).powf(k as f64 / 399.0);
        let w = z * (bessel::i0(z).unwrap() * bessel::k1(z).unwrap()
            + bessel::i1(z).unwrap() * bessel::k0(z).unwrap());
        (w - 1.0).abs() < 1e-13
    })
}

fn smooth_limit_holds() -> bool {
    let expect = std::f64::consts::LN_2 - 0.5772156649015329;
    (bessel::k0_smooth(0.0).unwrap() - expect).abs() < 1e-13
}

fn log_weight_sums_hold() -> bool {
    let rule = QuadratureRule::gauss_legendre(16).unwrap();
    let sum = |z: Complex64| -> f64 {
        TargetWeights::compute(&rule, z).unwrap().wl.iter().sum()
    };
    let at0 = sum(Complex64::new(0.0, 0.0));
    let at3 = sum(Complex64::new(3.0, 0.0));
    (at0 + 2.0).abs() < 1e-12 && (at3 - (6.0 * std::f64::consts::LN_2 - 2.0)).abs() < 1e-12
}

fn subdivision_postcondition_holds() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    (0..200).all(|_| {
        let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
        let alpha = 10f64.powf(rng.gen_range(0.5..4.0));
        let params = SubdivParams::new(4.0, 3.0, alpha, rng.gen_range(0.01..1.0));
        let sub = create_subdivision(z, &params);
        sub.satisfies_postcondition(z, &params)
            && sub.edges.first() == Some(&-1.0)
            && sub.edges.last() == Some(&1.0)
    })
}

fn annulus_reproduces_point_source() -> bool {
    use crate::config::{AnnulusConfig, GridSpec, SubdivisionMode};
    let cfg = AnnulusConfig {
        alpha: GridSpec::List(vec![10.0]),
        subdivision: SubdivisionMode::On,
        timing_reps: 1,
        ..AnnulusConfig::default()
    };
    matches!(crate::annulus::run(&cfg), Ok(rows) if rows.len() == 1 && rows[0].err < 1e-10)
}

/// Runs all checks, printing one line each; returns overall success.
pub fn run() -> bool {
    let checks: [(&str, fn() -> bool); 5] = [
        ("bessel wronskian", wronskian_holds),
        ("smooth kernel limit", smooth_limit_holds),
        ("log weight closed forms", log_weight_sums_hold),
        ("subdivision postcondition", subdivision_postcondition_holds),
        ("annulus point-source reproduction", annulus_reproduces_point_source),
    ];
    let mut ok = true;
    for (name, f) in checks {
        let pass = f();
        println!("selftest {name}: {}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    }
    ok
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_passes() {
        assert!(super::run());
    }
}
