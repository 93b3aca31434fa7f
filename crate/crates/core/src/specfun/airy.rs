//! Airy functions `Ai`, `Bi` and derivatives for real argument.
//!
//! Taylor stepping of `y'' = x y` from the origin (or, for `Ai` at positive
//! argument, downward from the asymptotic region so the stepping always
//! follows the dominant solution), and Poincaré expansions for `|x| >= 10`.

use std::f64::consts::{FRAC_PI_4, PI};

const AI0: f64 = 0.355_028_053_887_817_239_260;
const AIP0: f64 = -0.258_819_403_792_806_798_405;
const BI0: f64 = 0.614_926_627_446_000_735_150;
const BIP0: f64 = 0.448_288_357_353_826_357_914;
const ASYM: f64 = 10.0;
const STEP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryEval {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
    /// `Bi` or `Bi'` exceeded the `f64` range; use [`airy_scaled`].
    pub bi_overflow: bool,
}

/// Exponentially scaled values: for `x > 0`, `Ai, Ai'` are multiplied by
/// `exp(zeta)` and `Bi, Bi'` by `exp(-zeta)` with `zeta = 2/3 x^(3/2)`.
/// For `x <= 0` the values are unscaled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryScaled {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
    pub zeta: f64,
}

pub fn airy(x: f64) -> AiryEval {
    let s = airy_scaled(x);
    let (ea, eb) = if x > 0.0 {
        ((-s.zeta).exp(), s.zeta.exp())
    } else {
        (1.0, 1.0)
    };
    let bi = s.bi * eb;
    let bi_prime = s.bi_prime * eb;
    AiryEval {
        ai: s.ai * ea,
        ai_prime: s.ai_prime * ea,
        bi,
        bi_prime,
        bi_overflow: !bi.is_finite() || !bi_prime.is_finite(),
    }
}

pub fn airy_scaled(x: f64) -> AiryScaled {
    if x.is_nan() {
        return AiryScaled {
            ai: f64::NAN,
            ai_prime: f64::NAN,
            bi: f64::NAN,
            bi_prime: f64::NAN,
            zeta: f64::NAN,
        };
    }
    if x >= ASYM {
        let (ai, aip, bi, bip, zeta) = asymptotic_positive(x);
        return AiryScaled {
            ai,
            ai_prime: aip,
            bi,
            bi_prime: bip,
            zeta,
        };
    }
    if x <= -ASYM {
        let (ai, aip, bi, bip) = asymptotic_negative(-x);
        return AiryScaled {
            ai,
            ai_prime: aip,
            bi,
            bi_prime: bip,
            zeta: 0.0,
        };
    }
    let zeta = if x > 0.0 { 2.0 / 3.0 * x * x.sqrt() } else { 0.0 };
    let (ai, aip) = if x > 1.0 {
        let (a, ap, _, _, z0) = asymptotic_positive(ASYM);
        // carry exp(-z0) separately so nothing underflows
        let (a, ap) = taylor_walk(ASYM, x, a, ap);
        let f = (zeta - z0).exp();
        (a * f, ap * f)
    } else {
        let (a, ap) = taylor_walk(0.0, x, AI0, AIP0);
        let f = zeta.exp();
        (a * f, ap * f)
    };
    let (bi, bip) = taylor_walk(0.0, x, BI0, BIP0);
    let g = (-zeta).exp();
    AiryScaled {
        ai,
        ai_prime: aip,
        bi: bi * g,
        bi_prime: bip * g,
        zeta,
    }
}

/// Integrates `y'' = x y` from `x0` to `x1` with local Taylor series.
fn taylor_walk(x0: f64, x1: f64, mut y: f64, mut yp: f64) -> (f64, f64) {
    if x1 == x0 {
        return (y, yp);
    }
    let n = ((x1 - x0).abs() / STEP).ceil().max(1.0) as usize;
    let h = (x1 - x0) / n as f64;
    let mut x = x0;
    for _ in 0..n {
        (y, yp) = taylor_step(x, h, y, yp);
        x += h;
    }
    (y, yp)
}

fn taylor_step(x0: f64, h: f64, y: f64, yp: f64) -> (f64, f64) {
    // a_{k+2} (k+2)(k+1) = x0 a_k + a_{k-1}; b_k = a_k h^k
    let mut bm1 = 0.0;
    let mut b0 = y;
    let mut b1 = yp * h;
    let mut val = b0 + b1;
    let mut der = b1;
    let h2 = h * h;
    let scale = y.abs() + (yp * h).abs();
    for k in 0..80 {
        let kf = k as f64;
        let b2 = (x0 * h2 * b0 + h2 * h * bm1) / ((kf + 2.0) * (kf + 1.0));
        val += b2;
        der += (kf + 2.0) * b2;
        if k > 3 && b2.abs() + b1.abs() + b0.abs() < 1e-18 * scale {
            break;
        }
        bm1 = b0;
        b0 = b1;
        b1 = b2;
    }
    (val, der / h)
}

/// Coefficients `u_k`, `v_k` of the Airy asymptotic expansions.
fn uv(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..n {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * next);
    }
    (u, v)
}

/// Sums `sum_k s^k c_k / zeta^k` until the terms stop decreasing or are
/// negligible.
fn asum(c: &[f64], zeta: f64, alternate: bool, stride: usize, offset: usize) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut j = 0;
    let mut k = offset;
    while k < c.len() {
        let sign = if alternate && j % 2 == 1 { -1.0 } else { 1.0 };
        let t = c[k] / zeta.powi(k as i32);
        if t.abs() > last {
            break;
        }
        sum += sign * t;
        if t.abs() < 1e-17 * sum.abs() {
            break;
        }
        last = t.abs();
        j += 1;
        k += stride;
    }
    sum
}

/// Scaled `(Ai e^z, Ai' e^z, Bi e^-z, Bi' e^-z, z)` for large positive `x`.
fn asymptotic_positive(x: f64) -> (f64, f64, f64, f64, f64) {
    let (u, v) = uv(40);
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let x4 = x.powf(0.25);
    let sp = PI.sqrt();
    let ai = asum(&u, zeta, true, 1, 0) / (2.0 * sp * x4);
    let aip = -x4 * asum(&v, zeta, true, 1, 0) / (2.0 * sp);
    let bi = asum(&u, zeta, false, 1, 0) / (sp * x4);
    let bip = x4 * asum(&v, zeta, false, 1, 0) / sp;
    (ai, aip, bi, bip, zeta)
}

/// `(Ai, Ai', Bi, Bi')` at `-y` for large positive `y`.
fn asymptotic_negative(y: f64) -> (f64, f64, f64, f64) {
    let (u, v) = uv(40);
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    let y4 = y.powf(0.25);
    let sp = PI.sqrt();
    let ue = asum(&u, zeta, true, 2, 0);
    let uo = asum(&u, zeta, true, 2, 1);
    let ve = asum(&v, zeta, true, 2, 0);
    let vo = asum(&v, zeta, true, 2, 1);
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let ai = (c * ue + s * uo) / (sp * y4);
    let aip = y4 * (s * ve - c * vo) / sp;
    let bi = (-s * ue + c * uo) / (sp * y4);
    let bip = y4 * (c * ve + s * vo) / sp;
    (ai, aip, bi, bip)
}
