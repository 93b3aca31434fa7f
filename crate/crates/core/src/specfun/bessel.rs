//! Bessel functions of the first and second kind for real order `nu >= 0`
//! and complex argument in the closed upper half plane.
//!
//! The outgoing Hankel function is obtained at an order `mu` with
//! `|mu| <= 1/2` from `K_mu` (Temme series for small argument, Steed's
//! continued fraction otherwise) and raised to order `nu` by forward
//! recurrence, which is stable for `H^(1)`. `J` comes from the ratio
//! `J'/J` (continued fraction plus backward recurrence) and the Wronskian
//! with `H^(1)`; `Y = -i (H^(1) - J)`. Everything is carried in log-scaled
//! form so large orders neither overflow nor underflow.

use super::{rgamma1p, Scaled, RGAMMA_TAYLOR};
use crate::{Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::{LN_10, PI};

const EPS: f64 = 1e-16;
// complex division in num_complex squares the modulus, so keep
// intermediate magnitudes well inside 1e+-154
const FPMIN: f64 = 1e-150;
const CF_EPS: f64 = 4e-16;
const BIG: f64 = 1e100;
/// Largest supported `|z|` for the full J/Y evaluation.
pub const MAX_ARG: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub enum PrecisionWarning {
    /// A continued fraction needed an unusually large number of terms.
    SlowContinuedFraction { iterations: usize },
    /// Two independent routes to the same quantity disagree.
    Cancellation { rel_mismatch: f64 },
}

/// Log-scaled Bessel values and derivatives at one `(nu, z)`.
#[derive(Debug, Clone, Copy)]
pub struct BesselScaled {
    pub j: Scaled,
    pub y: Scaled,
    pub j_prime: Scaled,
    pub y_prime: Scaled,
    pub h: Scaled,
    pub h_prime: Scaled,
}

impl BesselScaled {
    /// `W = J Y' - Y J'`, computed in log space.
    pub fn wronskian(&self) -> Scaled {
        (self.j * self.y_prime).sub(&(self.y * self.j_prime))
    }

    /// Relative deviation of the Wronskian from `2/(pi z)`.
    pub fn wronskian_relerr(&self, z: C) -> f64 {
        let exact = Scaled::new(2.0 / (PI * z));
        self.wronskian().rel_diff(&exact)
    }
}

#[derive(Debug, Clone)]
pub struct BesselEval {
    pub nu: f64,
    pub z: C,
    /// Plain values; these can underflow to 0 or overflow to inf at large order.
    pub j: C,
    pub y: C,
    pub j_prime: Option<C>,
    pub y_prime: Option<C>,
    pub scaled: BesselScaled,
    pub warning: Option<PrecisionWarning>,
}

/// `J_nu(z)`, `Y_nu(z)` and optionally their derivatives.
pub fn bessel_jy(nu: f64, z: C, need_derivatives: bool) -> Result<BesselEval> {
    let (s, warning) = bessel_jy_scaled(nu, z)?;
    Ok(BesselEval {
        nu,
        z,
        j: s.j.value(),
        y: s.y.value(),
        j_prime: need_derivatives.then(|| s.j_prime.value()),
        y_prime: need_derivatives.then(|| s.y_prime.value()),
        scaled: s,
        warning,
    })
}

fn check_args(nu: f64, z: C) -> Result<()> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::Domain(format!("order must be finite and >= 0, got {nu}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("argument must be finite, got {z}")));
    }
    if z.im < 0.0 {
        return Err(Error::Domain(format!(
            "argument must satisfy Im z >= 0, got {z}"
        )));
    }
    if z.norm() == 0.0 {
        return Err(Error::Domain("argument must be nonzero".into()));
    }
    Ok(())
}

/// `1/Gamma(1-mu)`, `1/Gamma(1+mu)` and the Temme combinations
/// `gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)`,
/// `gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    for k in (1..RGAMMA_TAYLOR.len()).rev() {
        if k % 2 == 0 {
            gam1 = gam1 * mu * mu - RGAMMA_TAYLOR[k];
        } else {
            gam2 = gam2 * mu * mu + RGAMMA_TAYLOR[k];
        }
    }
    (gam1, gam2, rgamma1p(mu), rgamma1p(-mu))
}

/// `K_mu(w)`, `K_{mu+1}(w)` for `|w| < 2` by Temme's series.
fn k_temme(mu: f64, w: C) -> Result<(C, C)> {
    let x2 = w * 0.5;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = d * mu;
    let fact2 = if e.norm() < EPS { C::new(1.0, 0.0) } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
    let mut ff = (e.cosh() * gam1 + fact2 * d * gam2) * fact;
    let mut sum = ff;
    let ee = e.exp();
    let mut p = ee * (0.5 / gampl);
    let mut q = (ee * gammi).inv() * 0.5;
    let mut c = C::new(1.0, 0.0);
    let dd = x2 * x2;
    let mut sum1 = p;
    for i in 1..500 {
        let fi = i as f64;
        ff = (ff * fi + p + q) / (fi * fi - mu * mu);
        c = c * dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - ff * fi);
        if del.norm() < sum.norm() * EPS {
            return Ok((sum, sum1 * 2.0 / w));
        }
    }
    Err(Error::NonConvergence("Temme series for K".into()))
}

/// `K_mu(w)`, `K_{mu+1}(w)` for `|w| >= 2` by Steed's continued fraction.
/// Returns mantissas and the common log scale `-Re w`.
fn k_steed(mu: f64, w: C, max_iter: usize) -> Result<(C, C, f64, usize)> {
    let one = C::new(1.0, 0.0);
    let mut b = (one + w) * 2.0;
    let mut d = b.inv();
    let mut delh = d;
    let mut h = d;
    let mut q1 = C::new(0.0, 0.0);
    let mut q2 = one;
    let a1 = 0.25 - mu * mu;
    let mut q = C::new(a1, 0.0);
    let mut c = a1;
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 2..max_iter {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += qnew * c;
        b += 2.0;
        d = (b + d * a).inv();
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).norm() < CF_EPS {
            let h = h * a1;
            let kmu = (PI / (2.0 * w)).sqrt() * C::from_polar(1.0, -w.im) / s;
            let kmu1 = kmu * (w + mu + 0.5 - h) / w;
            return Ok((kmu, kmu1, -w.re, i));
        }
    }
    Err(Error::NonConvergence(format!(
        "Steed continued fraction for K at w = {w}"
    )))
}

/// `H^(1)_mu(z)`, `H^(1)_{mu+1}(z)` for `|mu| <= 1/2`, as mantissas with a
/// common log scale.
fn hankel_low(mu: f64, z: C) -> Result<(C, C, f64, usize)> {
    let w = C::new(z.im, -z.re);
    let (kmu, kmu1, ln, it) = if w.norm() < 2.0 {
        let (a, b) = k_temme(mu, w)?;
        (a, b, 0.0, 0)
    } else {
        k_steed(mu, w, 100_000)?
    };
    let c0 = C::from_polar(2.0 / PI, -PI * (mu + 1.0) / 2.0);
    let c1 = C::from_polar(2.0 / PI, -PI * (mu + 2.0) / 2.0);
    Ok((c0 * kmu, c1 * kmu1, ln, it))
}

/// Splits `nu = nl + mu` with integer `nl >= 0` and `mu` in `[-1/2, 1/2)`.
fn split_order(nu: f64) -> (usize, f64) {
    let nl = (nu + 0.5).floor();
    (nl as usize, nu - nl)
}

/// Forward recurrence of `H^(1)` from order `mu` to `nu = mu + nl`.
/// Returns `(H_nu, H_{nu+1})` mantissas and the log scale.
fn raise_hankel(mu: f64, nl: usize, z: C, h0: C, h1: C, ln0: f64) -> (C, C, f64) {
    let mut hk = h0;
    let mut hk1 = h1;
    let mut ln = ln0;
    let zi = z.inv();
    for i in 1..=nl {
        let l = mu + i as f64;
        let next = hk1 * (2.0 * l) * zi - hk;
        hk = hk1;
        hk1 = next;
        if hk1.norm() > BIG {
            hk /= BIG;
            hk1 /= BIG;
            ln += BIG.ln();
        }
    }
    (hk, hk1, ln)
}

/// `J'_nu / J_nu` by the modified Lentz method. Returns the ratio and the
/// number of iterations used.
fn cf1_ratio(nu: f64, z: C) -> Result<(C, usize)> {
    let max_iter = (20.0 * z.norm()) as usize + 10_000;
    let xi = z.inv();
    let xi2 = xi * 2.0;
    let fpmin = C::new(FPMIN, 0.0);
    let mut h = xi * nu;
    if h.norm() < FPMIN {
        h = fpmin;
    }
    let mut b = xi2 * nu;
    let mut d = C::new(0.0, 0.0);
    let mut c = h;
    for i in 1..=max_iter {
        b += xi2;
        d = b - d;
        if d.norm() < FPMIN {
            d = fpmin;
        }
        c = b - c.inv();
        if c.norm() < FPMIN {
            c = fpmin;
        }
        d = d.inv();
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < CF_EPS {
            return Ok((h, i));
        }
    }
    Err(Error::NonConvergence(format!(
        "continued fraction for J'/J at nu = {nu}, z = {z}"
    )))
}

/// Log-scaled `J, Y, H^(1)` and derivatives. See the module docs.
pub fn bessel_jy_scaled(nu: f64, z: C) -> Result<(BesselScaled, Option<PrecisionWarning>)> {
    check_args(nu, z)?;
    if z.norm() > MAX_ARG {
        // the J'/J fraction needs O(|z|) terms
        return Err(Error::Domain(format!("|z| = {} exceeds {MAX_ARG:e}", z.norm())));
    }
    let (nl, mu) = split_order(nu);
    let (hmu, hmu1, lnh0, steed_it) = hankel_low(mu, z)?;
    let (hn, hn1, lnh) = raise_hankel(mu, nl, z, hmu, hmu1, lnh0);
    let zi = z.inv();

    let (f, cf_it) = cf1_ratio(nu, z)?;
    // Backward recurrence of (J, J') from nu down to mu, unnormalised.
    let norm0 = (1.0 + f.norm_sqr()).sqrt();
    let (jl0, jpl0) = if f.norm().is_finite() {
        (C::new(1.0 / norm0, 0.0), f / norm0)
    } else {
        (C::new(0.0, 0.0), C::new(1.0, 0.0))
    };
    let mut jl = jl0;
    let mut jpl = jpl0;
    let mut ln_down = 0.0;
    for l in (1..=nl).rev() {
        let o = mu + l as f64;
        let jm = jl * o * zi + jpl;
        jpl = jm * (o - 1.0) * zi - jl;
        jl = jm;
        let a = jl.norm().max(jpl.norm());
        if a > BIG {
            jl /= BIG;
            jpl /= BIG;
            ln_down += BIG.ln();
        }
    }
    let f_mu = jpl / jl;
    let hpmu = hmu * mu * zi - hmu1;
    // J_mu = 2i / (pi z (H'_mu - f_mu H_mu))
    let denom = z * (hpmu - f_mu * hmu) * PI;
    let j_mu = Scaled::new(C::new(0.0, 2.0)) / Scaled::from_parts(denom, lnh0);
    let j = j_mu * Scaled::from_parts(jl0 / jl, -ln_down);
    let jp = j_mu * Scaled::from_parts(jpl0 / jl, -ln_down);

    let h = Scaled::from_parts(hn, lnh);
    let hp = Scaled::from_parts(hn * nu * zi - hn1, lnh);
    let minus_i = Scaled::new(C::new(0.0, -1.0));

    let mut warning = None;
    let worst_it = cf_it.max(steed_it);
    if worst_it > 50_000 {
        warning = Some(PrecisionWarning::SlowContinuedFraction {
            iterations: worst_it,
        });
    }

    let out = if z.im == 0.0 && z.re > 0.0 {
        let realify = |s: Scaled| Scaled {
            log_mag: s.log_mag,
            phase: C::new(s.phase.re.signum(), 0.0),
        };
        let j = realify(j);
        let jp = realify(jp);
        let y = Scaled::from_parts(C::new(hn.im, 0.0), lnh);
        let yp = Scaled::from_parts(C::new((hn * nu * zi - hn1).im, 0.0), lnh);
        let h_re = Scaled::from_parts(C::new(hn.re, 0.0), lnh);
        if !j.is_zero() && j.log_mag > h.log_mag - 3.0 * LN_10 {
            let mismatch = (h_re.rel_diff(&j) * j.abs_ratio(&h)).abs();
            if mismatch > 1e-9 && warning.is_none() {
                warning = Some(PrecisionWarning::Cancellation {
                    rel_mismatch: mismatch,
                });
            }
        }
        // Where J is not small against |H|, Re H is the better-conditioned
        // route (the J'/J fraction accumulates rounding at large x).
        let hp_m = hn * nu * zi - hn1;
        let j = if j.abs_ratio(&h) > 0.1 { h_re } else { j };
        let jp = if jp.abs_ratio(&hp) > 0.1 {
            Scaled::from_parts(C::new(hp_m.re, 0.0), lnh)
        } else {
            jp
        };
        BesselScaled {
            j,
            y,
            j_prime: jp,
            y_prime: yp,
            h,
            h_prime: hp,
        }
    } else {
        BesselScaled {
            j,
            y: minus_i * h.sub(&j),
            j_prime: jp,
            y_prime: minus_i * hp.sub(&jp),
            h,
            h_prime: hp,
        }
    };
    Ok((out, warning))
}

impl Scaled {
    /// `|self| / |other|`.
    pub(crate) fn abs_ratio(&self, other: &Scaled) -> f64 {
        (self.log_mag - other.log_mag).exp()
    }
}

/// `H^(1)_nu(z)` and its derivative, log-scaled. Skips the `J` computation.
pub fn hankel1_scaled(nu: f64, z: C) -> Result<(Scaled, Scaled)> {
    check_args(nu, z)?;
    let (nl, mu) = split_order(nu);
    let (hmu, hmu1, ln0, _) = hankel_low(mu, z)?;
    let (hn, hn1, ln) = raise_hankel(mu, nl, z, hmu, hmu1, ln0);
    Ok((
        Scaled::from_parts(hn, ln),
        Scaled::from_parts(hn * nu / z - hn1, ln),
    ))
}

/// Hankel's large-argument expansion of `H^(1)_nu(z)`; `None` if the
/// terms stop decreasing before reaching double precision.
fn hankel_asymptotic(nu: f64, z: C) -> Option<Scaled> {
    let four_nu2 = 4.0 * nu * nu;
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    let iz8 = (z * 8.0).inv() * C::new(0.0, 1.0);
    let mut last = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term = term * (four_nu2 - odd * odd) * iz8 / k as f64;
        let t = term.norm();
        if t < 1e-17 * sum.norm() {
            let pref = (2.0 / (PI * z)).sqrt();
            let phase = z - nu * PI / 2.0 - PI / 4.0;
            return Some(Scaled::new(pref * sum) * Scaled::exp(C::new(0.0, 1.0) * phase));
        }
        if t > last && k > (nu as usize) + 2 {
            return None;
        }
        last = t;
        sum += term;
    }
    None
}

/// `H^(1)_nu(z)` and its derivative. Uses Hankel's expansion when `|z|` is
/// large against `nu^2`, and the recurrence route otherwise.
pub fn hankel1(nu: f64, z: C) -> Result<(Scaled, Scaled)> {
    check_args(nu, z)?;
    if z.norm() > 40.0_f64.max(2.0 * nu * nu) {
        if let (Some(h0), Some(h1)) = (hankel_asymptotic(nu, z), hankel_asymptotic(nu + 1.0, z)) {
            let hp = h0.scale(C::new(nu, 0.0) / z).sub(&h1);
            return Ok((h0, hp));
        }
    }
    hankel1_scaled(nu, z)
}

/// Outgoing radial solution `r^(1/2) H^(1)_nu(lambda r)` and its
/// `r`-derivative, log-scaled.
pub fn hankel_outgoing(nu: f64, lambda: C, r: f64) -> Result<(Scaled, Scaled)> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("radius must be > 0, got {r}")));
    }
    let (h, hp) = hankel1(nu, lambda * r)?;
    let sr = Scaled::from_real(r.sqrt());
    let u = sr * h;
    let du = u.scale(C::new(0.5 / r, 0.0)).add(&(sr * hp).scale(lambda));
    Ok((u, du))
}
