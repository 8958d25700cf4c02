//! Standard normal CDF, quantile and sampler.
#![allow(clippy::excessive_precision)]

use super::gamma::gamma_q;
use super::rng::RngStream;
use crate::error::{Error, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal CDF Φ(x), accurate to about 1e-15 absolute and
/// relative in the lower tail.
pub fn normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let tail = 0.5 * gamma_q(0.5, 0.5 * x * x);
    if x < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

pub fn normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

fn poly(coef: &[f64; 8], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

const A: [f64; 8] = [
    3.387_132_872_796_366_608,
    1.331_416_678_917_843_774_5e2,
    1.971_590_950_306_551_442_7e3,
    1.373_169_376_550_946_112_5e4,
    4.592_195_393_154_987_145_7e4,
    6.726_577_092_700_870_085_3e4,
    3.343_057_558_358_812_810_5e4,
    2.509_080_928_730_122_672_7e3,
];
const B: [f64; 8] = [
    1.0,
    4.231_333_070_160_091_125_2e1,
    6.871_870_074_920_579_083e2,
    5.394_196_021_424_751_107_7e3,
    2.121_379_430_158_659_586_7e4,
    3.930_789_580_009_271_061e4,
    2.872_908_573_572_194_267_4e4,
    5.226_495_278_852_854_561e3,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_577_34,
    4.630_337_846_156_545_295_9,
    5.769_497_221_460_691_405_5,
    3.647_848_324_763_204_605_04,
    1.270_458_252_452_368_382_58,
    2.417_807_251_774_506_117_7e-1,
    2.272_384_498_926_918_458_33e-2,
    7.745_450_142_783_414_076_4e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_821_87,
    1.676_384_830_183_803_849_4,
    6.897_673_349_851_000_045_5e-1,
    1.481_039_764_274_800_745_9e-1,
    1.519_866_656_361_645_719_66e-2,
    5.475_938_084_995_344_946e-4,
    1.050_750_071_644_416_843_24e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_103_777_2,
    5.463_784_911_164_114_369_9,
    1.784_826_539_917_291_335_8,
    2.965_605_718_285_048_912_3e-1,
    2.653_218_952_657_612_309_3e-2,
    1.242_660_947_388_078_438_6e-3,
    2.711_555_568_743_487_578_15e-5,
    2.010_334_399_292_288_132_65e-7,
];
const F: [f64; 8] = [
    1.0,
    5.998_322_065_558_879_376_9e-1,
    1.369_298_809_227_358_053_1e-1,
    1.487_536_129_085_061_485_25e-2,
    7.868_691_311_456_132_591e-4,
    1.846_318_317_510_054_681_8e-5,
    1.421_511_758_316_445_888_7e-7,
    2.044_263_103_389_939_785_64e-15,
];

/// Wichura's AS 241 rational approximation of Φ⁻¹ (about 1e-16 relative).
/// `p` must lie in (0, 1); no range check.
#[inline]
pub(crate) fn quantile_rational(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180_625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let r = (-r.ln()).sqrt();
    let x = if r <= 5.0 {
        let r = r - 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        let r = r - 5.0;
        poly(&E, r) / poly(&F, r)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

/// Standard normal quantile Φ⁻¹(p) for p in (0, 1).
///
/// The rational approximation is polished with one Newton step on
/// [`normal_cdf`].
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("quantile probability {p} not in (0, 1)")));
    }
    let x = quantile_rational(p);
    let density = normal_pdf(x);
    if density == 0.0 {
        return Ok(x);
    }
    // Work in the lower tail to keep the residual relative.
    let resid = if p < 0.5 { normal_cdf(x) - p } else { (1.0 - p) - 0.5 * gamma_q(0.5, 0.5 * x * x) };
    Ok(x - resid / density)
}

/// One standard normal draw by inverse transform of a single uniform.
#[inline]
pub fn sample_standard_normal(rng: &mut RngStream) -> f64 {
    quantile_rational(rng.next_open01())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// erf by Taylor series; only used well inside |x| < 4.
    fn erf_series(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = x;
        let mut n = 0.0;
        loop {
            let add = term / (2.0 * n + 1.0);
            sum += add;
            if add.abs() < 1e-18 {
                break;
            }
            n += 1.0;
            term *= -x * x / n;
        }
        2.0 / std::f64::consts::PI.sqrt() * sum
    }

    fn cdf_oracle(x: f64) -> f64 {
        0.5 * (1.0 + erf_series(x / std::f64::consts::SQRT_2))
    }

    fn bisect_quantile(p: f64) -> f64 {
        let (mut lo, mut hi) = (-6.0, 6.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if cdf_oracle(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn cdf_matches_series() {
        let mut x = -3.5;
        while x <= 3.5 {
            assert!((normal_cdf(x) - cdf_oracle(x)).abs() < 1e-13, "x={x}");
            x += 0.01;
        }
    }

    #[test]
    fn quantile_reference_values() {
        assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
        let q975 = bisect_quantile(0.975);
        let q80 = bisect_quantile(0.8);
        assert!((q975 - 1.959_964).abs() < 1e-5);
        assert!((q80 - 0.841_621).abs() < 1e-5);
        assert!((normal_quantile(0.975).unwrap() - q975).abs() < 1e-10);
        assert!((normal_quantile(0.8).unwrap() - q80).abs() < 1e-10);
    }

    #[test]
    fn quantile_residual_within_1e12() {
        for i in 1..2000 {
            let p = i as f64 / 2000.0;
            let x = normal_quantile(p).unwrap();
            assert!((normal_cdf(x) - p).abs() <= 1e-12, "p={p}");
        }
    }

    #[test]
    fn cdf_and_quantile_inverse_over_wide_range() {
        let mut lp = -8.0f64;
        while lp <= -0.31 {
            for p in [10f64.powf(lp), 1.0 - 10f64.powf(lp)] {
                let x = normal_quantile(p).unwrap();
                assert!((normal_cdf(x) - p).abs() <= 1e-10 * p.min(1.0 - p).max(1e-8), "p={p}");
            }
            lp += 0.05;
        }
    }

    #[test]
    fn rational_alone_is_accurate() {
        for i in 1..1000 {
            let p = i as f64 / 1000.0;
            let a = quantile_rational(p);
            let b = normal_quantile(p).unwrap();
            assert!((a - b).abs() < 1e-13, "p={p}");
        }
    }

    #[test]
    fn quantile_rejects_out_of_range() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(normal_quantile(p).is_err());
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let mut a = RngStream::new(1, 0);
        let mut b = RngStream::new(1, 0);
        let (a1, a2) = (sample_standard_normal(&mut a), sample_standard_normal(&mut a));
        let (b1, b2) = (sample_standard_normal(&mut b), sample_standard_normal(&mut b));
        assert_eq!((a1, a2), (b1, b2));
    }

    #[test]
    fn sampler_moments_over_a_million_draws() {
        let mut rng = RngStream::new(2024, 0);
        let n = 1_000_000;
        let (mut sum, mut sumsq, mut below) = (0.0, 0.0, 0usize);
        for _ in 0..n {
            let z = sample_standard_normal(&mut rng);
            sum += z;
            sumsq += z * z;
            if z <= 1.959_964 {
                below += 1;
            }
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        let frac = below as f64 / n as f64;
        assert!(mean.abs() <= 0.005, "mean {mean}");
        assert!((var - 1.0).abs() <= 0.01, "var {var}");
        assert!((0.9737..=0.9763).contains(&frac), "frac {frac}");
    }
}
