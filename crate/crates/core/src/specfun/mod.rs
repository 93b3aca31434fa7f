//! Real-order Bessel functions, Airy functions, and the large-order uniform
//! (Airy-type) asymptotics used to describe Bessel envelopes.

mod airy;
mod bessel;
mod scaled;
mod uniform;


pub use airy::{airy, airy_scaled, AiryEval, AiryScaled};
pub use bessel::{
    bessel_jy, bessel_jy_scaled, hankel1, hankel1_scaled, hankel_outgoing, BesselEval, BesselScaled,
    PrecisionWarning,
};
pub use scaled::Scaled;
pub use uniform::{
    envelope_ratios, turning_map, uniform_jy, uniform_jy_parts, EnvelopeRatios, TurningPointMap,
    UniformParts,
};


/// Taylor coefficients of `1/Gamma(z) = sum_k c_k z^k`, `k = 0..=28`.
pub(crate) const RGAMMA_TAYLOR: [f64; 29] = [
    0.0,
    1.0,
    0.577_215_664_901_532_860_61,
    -0.655_878_071_520_253_881_08,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_748,
    -0.009_621_971_527_876_973_562_1,
    0.007_218_943_246_663_099_542_4,
    -0.001_165_167_591_859_065_112_1,
    -0.000_215_241_674_114_950_972_82,
    0.000_128_050_282_388_116_186_15,
    -0.000_020_134_854_780_788_238_656,
    -1.250_493_482_142_670_657_3e-6,
    1.133_027_231_981_695_882_4e-6,
    -2.056_338_416_977_607_103_5e-7,
    6.116_095_104_481_415_817_9e-9,
    5.002_007_644_469_222_930_1e-9,
    -1.181_274_570_487_020_144_6e-9,
    1.043_426_711_691_100_510_5e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708_2e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783_2e-14,
    -5.348_122_539_423_017_982_4e-15,
    1.226_778_628_238_260_790_2e-15,
    -1.181_259_301_697_458_769_5e-16,
    1.186_692_254_751_600_332_6e-18,
    1.412_380_655_318_031_781_6e-18,
];

/// `1/Gamma(1 + x)` for `|x| <= 1`, from the Taylor series of `1/Gamma`.
pub(crate) fn rgamma1p(x: f64) -> f64 {
    // 1/Gamma(1+x) = sum_{k>=1} c_k x^{k-1}
    let mut acc = 0.0;
    for k in (1..RGAMMA_TAYLOR.len()).rev() {
        acc = acc * x + RGAMMA_TAYLOR[k];
    }
    acc
}

/// Natural log of `Gamma(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}
