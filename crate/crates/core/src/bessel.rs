//! Modified Bessel functions `I0, I1, K0, K1` for real nonnegative
//! arguments, plus the smooth remainders used by the kernel split.
//!
//! Two-regime scheme: ascending power series for small arguments,
//! Chebyshev-fitted expansions (`I0`, `I1`, coefficients as in Cephes) or a
//! Steed continued fraction (`K0`, `K1`) beyond. Relative accuracy is at the
//! 1e-15 level across the working range.
//!
//! `K0`, `K1` underflow gracefully to exactly 0 for arguments beyond ~708;
//! `I0`, `I1` overflow to `+inf` beyond ~713. Callers in this crate never
//! reach the overflow range because the subdivision algorithm keeps
//! kernel-split arguments at `O(C_eps * R_eps)`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BesselError {
    #[error("argument {0} outside domain (must be nonnegative)")]
    NegativeArgument(f64),
    #[error("K0/K1 undefined at zero argument")]
    ZeroArgument,
}

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const LN_2: f64 = std::f64::consts::LN_2;

/// Chebyshev coefficients for `exp(-z) I0(z) sqrt(z)` on `8 <= z < inf`,
/// in terms of `x = 32/z - 2`.
#[rustfmt::skip]
const I0_COEFFS_LARGE: [f64; 25] = [
    -7.233_180_487_874_754E-18, -4.830_504_485_944_182E-18,
    4.465_621_420_296_76E-17, 3.461_222_867_697_461E-17,
    -2.827_623_980_516_583_6E-16, -3.425_485_619_677_219E-16,
    1.772_560_133_056_526_3E-15, 3.811_680_669_352_622_4E-15,
    -9.554_846_698_828_307E-15, -4.150_569_347_287_222E-14,
    1.540_086_217_521_41E-14, 3.852_778_382_742_142_6E-13,
    7.180_124_451_383_666E-13, -1.794_178_531_506_806_2E-12,
    -1.321_581_184_044_771_3E-11, -3.149_916_527_963_241_6E-11,
    1.188_914_710_784_643_9E-11, 4.940_602_388_224_97E-10,
    3.396_232_025_708_386_5E-9, 2.266_668_990_498_178E-8,
    2.048_918_589_469_063_8E-7, 2.891_370_520_834_756_7E-6,
    6.889_758_346_916_825E-5, 3.369_116_478_255_694_3E-3,
    8.044_904_110_141_088E-1,
];

/// Chebyshev coefficients for `exp(-z) I1(z) sqrt(z)` on `8 <= z < inf`.
#[rustfmt::skip]
const I1_COEFFS_LARGE: [f64; 25] = [
    7.517_296_310_842_104_8E-18, 4.414_348_323_071_707_9E-18,
    -4.650_305_368_489_358_3E-17, -3.209_525_921_993_424E-17,
    2.962_628_997_645_950_1E-16, 3.308_202_310_920_928_3E-16,
    -1.880_354_775_510_782_4E-15, -3.814_403_072_437_007_8E-15,
    1.042_027_698_412_880_3E-14, 4.272_440_016_711_951_4E-14,
    -2.101_541_842_772_664_3E-14, -4.083_551_111_092_197_3E-13,
    -7.198_551_776_245_908_5E-13, 2.035_628_544_147_089_5E-12,
    1.412_580_743_661_378_1E-11, 3.252_603_583_015_488_2E-11,
    -1.897_495_812_350_541_2E-11, -5.589_743_462_196_584E-10,
    -3.835_380_385_964_237E-9, -2.631_468_846_889_519_5E-8,
    -2.512_236_237_870_209E-7, -3.882_564_808_877_690_4E-6,
    -1.105_889_387_626_237_2E-4, -9.761_097_491_361_469E-3,
    7.785_762_350_182_801_2E-1,
];

fn chbevl(x: f64, coeffs: &[f64]) -> f64 {
    let mut b0 = coeffs[0];
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in &coeffs[1..] {
        b2 = b1;
        b1 = b0;
        b0 = x * b1 - b2 + c;
    }
    0.5 * (b0 - b2)
}

/// Ascending series `sum_k (z^2/4)^k / (k!)^2`, valid for all z (used below 8).
fn i0_series(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-18 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

fn i1_series(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-18 * sum {
        term *= q / (k * (k + 1.0));
        sum += term;
        k += 1.0;
    }
    0.5 * z * sum
}

pub(crate) fn i0_raw(z: f64) -> f64 {
    if z <= 8.0 {
        i0_series(z)
    } else {
        z.exp() * chbevl(32.0 / z - 2.0, &I0_COEFFS_LARGE) / z.sqrt()
    }
}

pub(crate) fn i1_raw(z: f64) -> f64 {
    if z <= 8.0 {
        i1_series(z)
    } else {
        z.exp() * chbevl(32.0 / z - 2.0, &I1_COEFFS_LARGE) / z.sqrt()
    }
}

/// Steed continued fraction for (K0(z), K1(z)), valid for z > 1.
/// See Thompson & Barnett, J. Comput. Phys. 64 (1986).
fn k0_k1_steed(z: f64) -> (f64, f64) {
    let mut a = -0.25;
    let mut b = 2.0 * (z + 1.0);
    let mut d = 1.0 / b;
    let mut delta = d;
    let mut f = d;
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut q = 0.25;
    let mut c = 0.25;
    let mut s = 1.0 + q * delta;
    for k in 2..500 {
        let kf = k as f64;
        a -= 2.0 * (kf - 1.0);
        b += 2.0;
        d = 1.0 / (a * d + b);
        delta *= b * d - 1.0;
        f += delta;
        let t = (prev - (b - 2.0) * cur) / a;
        prev = cur;
        cur = t;
        c *= -a / kf;
        q += c * t;
        s += q * delta;
        if (q * delta).abs() < s.abs() * 0.5 * f64::EPSILON {
            break;
        }
    }
    let k0 = (std::f64::consts::FRAC_PI_2 / z).sqrt() * (-z).exp() / s;
    let k1 = k0 * (0.5 + z - 0.25 * f) / z;
    (k0, k1)
}

/// Series for the smooth remainder `K0(z) + I0(z) ln z`. All terms are
/// positive; used for z < 1 where direct subtraction would cancel.
fn k0_smooth_series(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut h = 0.0;
    let mut sum = 0.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        h += 1.0 / k;
        let add = term * h;
        sum += add;
        if add <= 1e-18 * (sum + 1.0) {
            break;
        }
        k += 1.0;
    }
    (LN_2 - EULER_GAMMA) * i0_series(z) + sum
}

/// Series for the smooth remainder `K1(z) - I1(z) ln z - 1/z`.
fn k1_smooth_series(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut hk = 0.0; // h_0
    let mut hk1 = 1.0; // h_1
    let mut sum = hk + hk1 - 2.0 * EULER_GAMMA;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + 1.0));
        hk += 1.0 / k;
        hk1 += 1.0 / (k + 1.0);
        let add = term * (hk + hk1 - 2.0 * EULER_GAMMA);
        sum += add;
        if add.abs() <= 1e-18 * (sum.abs() + 1.0) {
            break;
        }
        k += 1.0;
    }
    -LN_2 * i1_series(z) - 0.25 * z * sum
}

pub(crate) fn k0_raw(z: f64) -> f64 {
    if z <= 1.0 {
        k0_smooth_series(z) - i0_series(z) * z.ln()
    } else {
        k0_k1_steed(z).0
    }
}

pub(crate) fn k1_raw(z: f64) -> f64 {
    if z <= 1.0 {
        k1_smooth_series(z) + i1_series(z) * z.ln() + 1.0 / z
    } else {
        k0_k1_steed(z).1
    }
}

pub(crate) fn k0_smooth_raw(z: f64) -> f64 {
    if z < 1.0 {
        k0_smooth_series(z)
    } else {
        k0_raw(z) + i0_raw(z) * z.ln()
    }
}

pub(crate) fn k1_smooth_raw(z: f64) -> f64 {
    if z < 1.0 {
        k1_smooth_series(z)
    } else {
        k1_raw(z) - i1_raw(z) * z.ln() - 1.0 / z
    }
}

/// Modified Bessel function of the first kind, order 0.
pub fn i0(z: f64) -> Result<f64, BesselError> {
    if z < 0.0 {
        return Err(BesselError::NegativeArgument(z));
    }
    Ok(i0_raw(z))
}

/// Modified Bessel function of the first kind, order 1.
pub fn i1(z: f64) -> Result<f64, BesselError> {
    if z < 0.0 {
        return Err(BesselError::NegativeArgument(z));
    }
    Ok(i1_raw(z))
}

/// Modified Bessel function of the second kind, order 0.
pub fn k0(z: f64) -> Result<f64, BesselError> {
    if z < 0.0 {
        return Err(BesselError::NegativeArgument(z));
    }
    if z == 0.0 {
        return Err(BesselError::ZeroArgument);
    }
    Ok(k0_raw(z))
}

/// Modified Bessel function of the second kind, order 1.
pub fn k1(z: f64) -> Result<f64, BesselError> {
    if z < 0.0 {
        return Err(BesselError::NegativeArgument(z));
    }
    if z == 0.0 {
        return Err(BesselError::ZeroArgument);
    }
    Ok(k1_raw(z))
}

/// Smooth remainder of the K0 log split: `K0(z) + I0(z) ln z`, finite at
/// z = 0 with value `ln 2 - gamma`.
pub fn k0_smooth(z: f64) -> Result<f64, BesselError> {
    if z < 0.0 {
        return Err(BesselError::NegativeArgument(z));
    }
    Ok(k0_smooth_raw(z))
}

/// Smooth remainder of the K1 split: `K1(z) - I1(z) ln z - 1/z`, finite at
/// z = 0 with value 0. The extracted `1/z` term is what becomes the Cauchy
/// part of the double-layer kernel split.
pub fn k1_smooth(z: f64) -> Result<f64, BesselError> {
    if z < 0.0 {
        return Err(BesselError::NegativeArgument(z));
    }
    Ok(k1_smooth_raw(z))
}

/// Unchecked variants for hot paths where the caller has validated z.
pub(crate) mod raw {
    pub(crate) use super::{i0_raw as i0, i1_raw as i1, k0_raw as k0, k1_raw as k1};
    pub(crate) use super::{k0_smooth_raw as k0_smooth, k1_smooth_raw as k1_smooth};
}
