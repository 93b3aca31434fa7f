//! Large-order uniform asymptotics of `J_nu(nu z)`, `Y_nu(nu z)` in terms of
//! Airy functions of `nu^(2/3) zeta(z)`, and the envelope quantities built
//! from the exponent `xi(z)`.

use super::{airy_scaled, bessel_jy_scaled, BesselEval, BesselScaled, Scaled};
use crate::{Error, Result};
use num_complex::Complex64 as C;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPointMap {
    pub z: f64,
    /// Olver's variable; positive for `z < 1`, negative for `z > 1`.
    pub zeta: f64,
    /// `int_z^1 sqrt(1 - t^2) / t dt`, only for `z <= 1`.
    pub xi: Option<f64>,
}

impl TurningPointMap {
    /// `xi` for `z <= 1`, zero beyond the turning point.
    pub fn xi_plus(&self) -> f64 {
        self.xi.unwrap_or(0.0).max(0.0)
    }
}

/// `atanh(s) - s` without cancellation for small `s`.
fn atanh_minus(s: f64) -> f64 {
    if s < 0.1 {
        let s2 = s * s;
        let mut p = s * s2;
        let mut sum = 0.0;
        for k in 1..12 {
            sum += p / (2 * k + 1) as f64;
            p *= s2;
        }
        sum
    } else {
        s.atanh() - s
    }
}

/// `t - atan(t)` without cancellation for small `t`.
fn t_minus_atan(t: f64) -> f64 {
    if t < 0.1 {
        let t2 = t * t;
        let mut p = t * t2;
        let mut sum = 0.0;
        for k in 1..12 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sum += sign * p / (2 * k + 1) as f64;
            p *= t2;
        }
        sum
    } else {
        t - t.atan()
    }
}

/// Maps `z = x / nu` to `(zeta, xi)`.
pub fn turning_map(z: f64) -> TurningPointMap {
    if z <= 1.0 {
        let s = ((1.0 - z) * (1.0 + z)).sqrt();
        let xi = if s < 0.1 {
            atanh_minus(s)
        } else {
            // ln((1 + s)/z) - s, split so tiny z does not overflow
            (1.0 + s).ln() - z.ln() - s
        };
        TurningPointMap {
            z,
            zeta: (1.5 * xi).powf(2.0 / 3.0),
            xi: Some(xi),
        }
    } else {
        let t = ((z - 1.0) * (z + 1.0)).sqrt();
        let eta = t_minus_atan(t);
        TurningPointMap {
            z,
            zeta: -(1.5 * eta).powf(2.0 / 3.0),
            xi: None,
        }
    }
}

/// `(B0, C0)` coefficient functions of the uniform expansion at `z`.
fn b0_c0(z: f64) -> (f64, f64) {
    const GAP: f64 = 1e-3;
    if (z - 1.0).abs() < GAP {
        // both are analytic through z = 1, but the closed forms cancel there
        let (bl, cl) = b0_c0_closed(1.0 - GAP);
        let (br, cr) = b0_c0_closed(1.0 + GAP);
        let w = (z - (1.0 - GAP)) / (2.0 * GAP);
        return (bl + w * (br - bl), cl + w * (cr - cl));
    }
    b0_c0_closed(z)
}

fn b0_c0_closed(z: f64) -> (f64, f64) {
    let zeta = turning_map(z).zeta;
    let q = 1.0 - z * z;
    let phi = zeta / q;
    let sp = phi.sqrt();
    let b0 = -5.0 / (48.0 * zeta * zeta) + sp / zeta * (5.0 / (24.0 * q) - 0.125);
    let c0 = 7.0 / (48.0 * zeta) + sp * (-7.0 / (24.0 * q) + 0.375);
    (b0, c0)
}

/// Intermediate pieces of the uniform form, exposed for diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct UniformParts {
    pub map: TurningPointMap,
    pub b0: f64,
    pub c0: f64,
    /// Airy argument `nu^(2/3) zeta`.
    pub airy_arg: f64,
}

pub fn uniform_jy_parts(nu: f64, z: f64) -> UniformParts {
    let map = turning_map(z);
    let (b0, c0) = b0_c0(z);
    UniformParts {
        map,
        b0,
        c0,
        airy_arg: nu.powf(2.0 / 3.0) * map.zeta,
    }
}

/// `J_nu(nu z)`, `Y_nu(nu z)` and their derivatives (with respect to the
/// Bessel argument) from the uniform Airy-type expansion, keeping the first
/// correction terms `B0`, `C0`.
pub fn uniform_jy(nu: f64, z: f64) -> Result<BesselEval> {
    if !(nu >= 20.0 && nu.is_finite()) {
        return Err(Error::Precondition(format!("uniform_jy needs nu >= 20, got {nu}")));
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Domain(format!("uniform_jy needs z > 0, got {z}")));
    }
    let p = uniform_jy_parts(nu, z);
    let a = airy_scaled(p.airy_arg);
    // airy_scaled removes exp(-+ (2/3) x^(3/2)) = exp(-+ nu xi) for x > 0
    let ln_e = if p.airy_arg > 0.0 { a.zeta } else { 0.0 };
    let q = 1.0 - z * z;
    let phi = if (z - 1.0).abs() < 1e-12 {
        2f64.powf(-2.0 / 3.0)
    } else {
        p.map.zeta / q
    };
    let pre = (4.0 * phi).powf(0.25);
    let pre_d = 2.0 / z / pre;
    let n13 = nu.powf(-1.0 / 3.0);
    let n23 = n13 * n13;
    let n43 = n23 * n23;
    let n53 = n43 * n13;
    let j = pre * (a.ai * n13 + a.ai_prime * n53 * p.b0);
    let y = -pre * (a.bi * n13 + a.bi_prime * n53 * p.b0);
    let jp = -pre_d * (a.ai * n43 * p.c0 + a.ai_prime * n23);
    let yp = pre_d * (a.bi * n43 * p.c0 + a.bi_prime * n23);
    let sj = |v: f64| Scaled::from_parts(C::new(v, 0.0), -ln_e);
    let sy = |v: f64| Scaled::from_parts(C::new(v, 0.0), ln_e);
    let h = sj(j).add(&sy(y).scale(C::new(0.0, 1.0)));
    let h_prime = sj(jp).add(&sy(yp).scale(C::new(0.0, 1.0)));
    let scaled = BesselScaled {
        j: sj(j),
        y: sy(y),
        j_prime: sj(jp),
        y_prime: sy(yp),
        h,
        h_prime,
    };
    Ok(BesselEval {
        nu,
        z: C::new(nu * z, 0.0),
        j: scaled.j.value(),
        y: scaled.y.value(),
        j_prime: Some(scaled.j_prime.value()),
        y_prime: Some(scaled.y_prime.value()),
        scaled,
        warning: None,
    })
}

/// Normalised envelope quantities at `(nu, z)`:
/// `J_nu(nu z) nu^(1/2) e^(nu xi+)`, `-Y_nu(nu z) nu^(1/2) e^(-nu xi+)` and
/// `|J_nu(nu z)| nu^(1/2) <z>^(1/2) e^(nu xi+)`, where `xi+` is `xi` below
/// the turning point and zero above it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeRatios {
    pub ratio_j: f64,
    pub ratio_y: f64,
    pub uniform_bound: f64,
    pub xi_plus: f64,
}

pub fn envelope_ratios(nu: f64, z: f64) -> Result<EnvelopeRatios> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Domain(format!("z must be > 0, got {z}")));
    }
    let (s, _) = bessel_jy_scaled(nu, C::new(nu * z, 0.0))?;
    Ok(envelope_from(nu, z, &s))
}

pub(crate) fn envelope_from(nu: f64, z: f64, s: &BesselScaled) -> EnvelopeRatios {
    let xp = turning_map(z).xi_plus();
    let lh = 0.5 * nu.ln();
    let sign = |x: &Scaled| x.phase.re.signum();
    let rj = sign(&s.j) * (s.j.log_mag + lh + nu * xp).exp();
    let ry = -sign(&s.y) * (s.y.log_mag + lh - nu * xp).exp();
    let ub = (s.j.log_mag + lh + 0.25 * (1.0 + z * z).ln() + nu * xp).exp();
    EnvelopeRatios {
        ratio_j: rj,
        ratio_y: ry,
        uniform_bound: ub,
        xi_plus: xp,
    }
}
