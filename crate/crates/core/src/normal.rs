//! Standard normal distribution function and friends.
//!
//! The error function follows W. J. Cody's rational Chebyshev approximations
//! ("Rational Chebyshev approximations for the error function", Math. Comp.
//! 23, 1969), the same three-interval scheme as the classic `CALERF` routine:
//!
//! * `|x| <= 0.46875`: `erf(x) = x R_1(x^2)`, degree (4, 4);
//! * `0.46875 < |x| <= 4`: `erfc(x) = exp(-x^2) R_2(x)`, degree (8, 8);
//! * `|x| > 4`: `erfc(x) = exp(-x^2)/x (1/sqrt(pi) + x^-2 R_3(x^-2))`, degree (5, 5).
//!
//! Cody reports maximal relative errors below `6e-19` for each rational form;
//! in double precision the composite `Phi` stays within a few ulps, well inside
//! the `1e-12` absolute budget on `[-8, 8]`. The factor `exp(-x^2)` is split as
//! `exp(-t^2) exp(-(x - t)(x + t))` with `t = floor(16 x)/16` to avoid the
//! cancellation in `x^2` for large arguments.

#![allow(clippy::excessive_precision)]

use std::f64::consts::FRAC_1_SQRT_2;

const A: [f64; 5] = [
    3.161_123_743_870_565_6,
    113.864_154_151_050_16,
    377.485_237_685_302_02,
    3_209.377_589_138_469_5,
    0.185_777_706_184_603_15,
];
const B: [f64; 4] = [
    23.601_290_952_344_122,
    244.024_637_934_444_17,
    1_282.616_526_077_372_3,
    2_844.236_833_439_170_6,
];
const C: [f64; 9] = [
    0.564_188_496_988_670_09,
    8.883_149_794_388_376,
    66.119_190_637_141_63,
    298.635_138_197_400_13,
    881.952_221_241_769_1,
    1_712.047_612_634_070_6,
    2_051.078_377_826_071_5,
    1_230.339_354_797_997_2,
    2.153_115_354_744_038_5e-8,
];
const D: [f64; 8] = [
    15.744_926_110_709_835,
    117.693_950_891_312_5,
    537.181_101_862_009_9,
    1_621.389_574_566_690_2,
    3_290.799_235_733_459_6,
    4_362.619_090_143_247,
    3_439.367_674_143_721_6,
    1_230.339_354_803_749_4,
];
const P: [f64; 6] = [
    0.305_326_634_961_232_34,
    0.360_344_899_949_804_44,
    0.125_781_726_111_229_25,
    0.016_083_785_148_742_277,
    6.587_491_615_298_378e-4,
    0.016_315_387_137_302_098,
];
const Q: [f64; 5] = [
    2.568_520_192_289_822_4,
    1.872_952_849_923_460_5,
    0.527_905_102_951_428_4,
    0.060_518_341_312_441_32,
    0.002_335_204_976_268_691_8,
];

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
pub(crate) const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
const THRESHOLD: f64 = 0.468_75;
const XBIG: f64 = 26.543;

fn small_ratio(z: f64) -> f64 {
    ((((A[4] * z + A[0]) * z + A[1]) * z + A[2]) * z + A[3])
        / ((((z + B[0]) * z + B[1]) * z + B[2]) * z + B[3])
}

fn mid_ratio(y: f64) -> f64 {
    let mut num = C[8] * y;
    let mut den = y;
    for i in 0..7 {
        num = (num + C[i]) * y;
        den = (den + D[i]) * y;
    }
    (num + C[7]) / (den + D[7])
}

fn tail_scaled(y: f64) -> f64 {
    let z = 1.0 / (y * y);
    let mut num = P[5] * z;
    let mut den = z;
    for i in 0..4 {
        num = (num + P[i]) * z;
        den = (den + Q[i]) * z;
    }
    let r = z * (num + P[4]) / (den + Q[4]);
    (FRAC_1_SQRT_PI - r) / y
}

/// `exp(-y^2)` without the rounding error of forming `y^2` directly.
fn exp_neg_square(y: f64) -> f64 {
    let t = (y * 16.0).trunc() / 16.0;
    (-t * t).exp() * (-(y - t) * (y + t)).exp()
}

/// `exp(x^2) erfc(x)` for `x > THRESHOLD`.
fn erfcx_above_threshold(y: f64) -> f64 {
    if y <= 4.0 {
        mid_ratio(y)
    } else {
        tail_scaled(y)
    }
}

pub fn erf(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return x * small_ratio(y * y);
    }
    let c = erfc_abs(y);
    if x < 0.0 {
        c - 1.0
    } else {
        1.0 - c
    }
}

fn erfc_abs(y: f64) -> f64 {
    if y >= XBIG {
        0.0
    } else {
        erfcx_above_threshold(y) * exp_neg_square(y)
    }
}

pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return 1.0 - x * small_ratio(y * y);
    }
    let c = erfc_abs(y);
    if x < 0.0 {
        2.0 - c
    } else {
        c
    }
}

/// Scaled complementary error function `exp(x^2) erfc(x)`.
///
/// Finite for all `x >= -26.6`; returns `f64::INFINITY` below.
pub fn erfcx(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return (y * y).exp() * (1.0 - x * small_ratio(y * y));
    }
    if x >= 0.0 {
        return erfcx_above_threshold(y);
    }
    if x < -26.628_735_713_751_4 {
        return f64::INFINITY;
    }
    let t = (y * 16.0).trunc() / 16.0;
    let e = (t * t).exp() * ((y - t) * (y + t)).exp();
    2.0 * e - erfcx_above_threshold(y)
}

/// Standard normal distribution function `Phi(z)`.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// Upper tail `1 - Phi(z)` without cancellation.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * erfc(z * FRAC_1_SQRT_2)
}

pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / SQRT_2PI
}

/// Antiderivative of `Phi`: `z Phi(z) + phi(z)`.
pub fn normal_cdf_integral(z: f64) -> f64 {
    z * normal_cdf(z) + normal_pdf(z)
}

/// `int_z^inf (1 - Phi(t)) dt = phi(z) - z (1 - Phi(z))`.
pub fn normal_sf_integral(z: f64) -> f64 {
    normal_pdf(z) - z * normal_sf(z)
}

/// Standard normal quantile: Acklam's rational start refined by two Halley
/// steps against [`normal_cdf`].
pub fn normal_quantile(u: f64) -> f64 {
    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if u >= 1.0 {
        return f64::INFINITY;
    }
    const AQ: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const BQ: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const CQ: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const DQ: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const PLOW: f64 = 0.024_25;
    let tail = |r: f64| {
        let s = (-2.0 * r.ln()).sqrt();
        (((((CQ[0] * s + CQ[1]) * s + CQ[2]) * s + CQ[3]) * s + CQ[4]) * s + CQ[5])
            / ((((DQ[0] * s + DQ[1]) * s + DQ[2]) * s + DQ[3]) * s + 1.0)
    };
    let mut x = if u < PLOW {
        tail(u)
    } else if u > 1.0 - PLOW {
        -tail(1.0 - u)
    } else {
        let s = u - 0.5;
        let r = s * s;
        (((((AQ[0] * r + AQ[1]) * r + AQ[2]) * r + AQ[3]) * r + AQ[4]) * r + AQ[5]) * s
            / (((((BQ[0] * r + BQ[1]) * r + BQ[2]) * r + BQ[3]) * r + BQ[4]) * r + 1.0)
    };
    for _ in 0..2 {
        let e = if x > 0.0 {
            (1.0 - u) - normal_sf(x)
        } else {
            normal_cdf(x) - u
        };
        let g = e * SQRT_2PI * (0.5 * x * x).exp();
        x -= g / (1.0 + 0.5 * x * g);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Taylor series of erf, summed in f64 with compensated terms; accurate to
    // ~1e-16 for |x| <= 3.
    fn erf_series(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = x;
        let mut n = 0.0;
        loop {
            let add = term / (2.0 * n + 1.0);
            sum += add;
            if add.abs() < 1e-20 {
                break;
            }
            n += 1.0;
            term *= -x * x / n;
        }
        2.0 / PI.sqrt() * sum
    }

    #[test]
    fn phi_at_zero_and_symmetry() {
        assert_eq!(normal_cdf(0.0), 0.5);
        for i in -800..=800 {
            let z = i as f64 / 100.0;
            assert!((normal_cdf(z) + normal_cdf(-z) - 1.0).abs() < 1e-15, "z = {z}");
        }
    }

    #[test]
    fn phi_pin() {
        // 0.5 (1 + erf(1.959964 / sqrt 2)) from a 50-digit evaluation.
        let reference = 0.975_000_000_903_557_6;
        assert!((normal_cdf(1.959964) - reference).abs() < 1e-13);
        assert!((normal_cdf(1.959964) - 0.975).abs() < 1e-6);
    }

    #[test]
    fn erf_matches_series() {
        // the alternating series loses digits to cancellation beyond |x| = 2
        for i in -200..=200 {
            let x = i as f64 / 100.0;
            let s = erf_series(x);
            assert!((erf(x) - s).abs() < 1e-14, "x = {x}: {} vs {s}", erf(x));
        }
        assert!((erf(3.0) - 0.999_977_909_503_001_4).abs() < 1e-16);
    }

    #[test]
    fn phi_tail_values() {
        // Reference values from mpmath with 30 digits.
        let cases = [
            (-8.0, 6.220_960_574_271_784e-16),
            (-5.0, 2.866_515_718_791_939e-7),
            (-3.0, 1.349_898_031_630_094_6e-3),
            (-1.0, 0.158_655_253_931_457_05),
            (2.5, 0.993_790_334_674_223_6),
        ];
        for (z, v) in cases {
            assert!((normal_cdf(z) - v).abs() < 1e-15, "z = {z}");
            assert!(((normal_cdf(z) - v) / v).abs() < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn erfcx_is_consistent() {
        for i in -50..=200 {
            let x = i as f64 / 10.0;
            if x.abs() < 5.0 {
                let direct = (x * x).exp() * erfc(x);
                assert!(((erfcx(x) - direct) / direct).abs() < 1e-13, "x = {x}");
            }
            assert!(erfcx(x).is_finite());
        }
        // Asymptotic 1/(x sqrt(pi)) (1 - 1/(2x^2) + 3/(4x^4))
        let x = 30.0f64;
        let asym = FRAC_1_SQRT_PI / x * (1.0 - 0.5 / (x * x) + 0.75 / x.powi(4));
        assert!(((erfcx(x) - asym) / asym).abs() < 1e-8);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for i in 1..1000 {
            let u = i as f64 / 1000.0;
            let z = normal_quantile(u);
            assert!((normal_cdf(z) - u).abs() < 1e-14, "u = {u}");
        }
        assert!((normal_quantile(1e-10) + 6.361_340_902_404_056).abs() < 1e-9);
    }
}
