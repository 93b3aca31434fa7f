//! Taylor-series propagation of `-h^2 u'' + (v + m/r^2 - E - i eps) u = 0`
//! across a piecewise-constant potential.
//!
//! On a piece the equation reads `r^2 u'' = (a + c r^2) u` with
//! `a = m/h^2` and `c = (v - E - i eps)/h^2`; expanding around `r0` gives a
//! four-term recurrence for the Taylor coefficients, so each substep is
//! accurate to rounding. Substeps stay well inside the radius of
//! convergence `r0` and keep the power-law and exponential factors modest.

use crate::potential::RadialPotential;
use num_complex::Complex64 as C;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Ode {
    /// `m / h^2`
    pub a: f64,
    pub h2: f64,
    /// `E + i eps`
    pub energy: C,
    /// `nu = sqrt(a + 1/4)`, controls the power-law substep bound.
    pub nu: f64,
}

/// Solution mantissas `(u, u')` with common scale `exp(ln)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct State {
    pub u: C,
    pub du: C,
    pub ln: f64,
}

impl State {
    fn renormalise(&mut self) {
        let s = self.u.norm().max(self.du.norm());
        if s > 1e50 || (s < 1e-50 && s > 0.0) {
            self.u /= s;
            self.du /= s;
            self.ln += s.ln();
        }
    }
}

impl Ode {
    fn c(&self, v: f64) -> C {
        (C::new(v, 0.0) - self.energy) / self.h2
    }

    /// Largest admissible substep from `r0` in a piece with coefficient `c`.
    fn max_step(&self, r0: f64, c: C) -> f64 {
        let by_radius = 0.25 * r0;
        let by_power = 1.5 * r0 / (self.nu + 1.0);
        let by_exp = 1.5 / c.norm().sqrt().max(1e-300);
        by_radius.min(by_power).min(by_exp)
    }

    /// One Taylor step of length `hs` (either sign) from `r0`.
    fn step(&self, r0: f64, hs: f64, c: C, u: C, du: C) -> (C, C) {
        let rho = hs / r0;
        let rho2 = rho * rho;
        let hh = hs * hs;
        let mut bm2 = C::new(0.0, 0.0);
        let mut bm1 = C::new(0.0, 0.0);
        let mut b0 = u;
        let mut b1 = du * hs;
        let mut val = b0 + b1;
        let mut der = b1;
        let scale = u.norm() + b1.norm();
        let mut small = 0;
        for k in 0..400 {
            let kf = k as f64;
            let num = b0 * ((self.a - kf * (kf - 1.0)) * rho2)
                + c * (b0 * hh + bm1 * (2.0 * hh * rho) + bm2 * (hh * rho2))
                - b1 * (2.0 * kf * (kf + 1.0) * rho);
            let b2 = num / ((kf + 1.0) * (kf + 2.0));
            val += b2;
            der += b2 * (kf + 2.0);
            if b2.norm() <= 1e-17 * scale {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            bm2 = bm1;
            bm1 = b0;
            b0 = b1;
            b1 = b2;
        }
        (val, der / hs)
    }

    /// Propagates `state` from `r0` to `r1`, splitting at breakpoints.
    pub fn propagate(&self, v: &RadialPotential, r0: f64, r1: f64, st: &mut State) {
        let mut r = r0;
        while r != r1 {
            // end of the current piece in the direction of travel
            let target = if r1 > r {
                let next_bp = v
                    .breakpoints()
                    .iter()
                    .copied()
                    .find(|&b| b > r)
                    .unwrap_or(f64::INFINITY);
                next_bp.min(r1)
            } else {
                let prev_bp = v
                    .breakpoints()
                    .iter()
                    .rev()
                    .copied()
                    .find(|&b| b < r)
                    .unwrap_or(0.0);
                prev_bp.max(r1)
            };
            let vpiece = if r1 > r {
                v.value_right_of(r)
            } else {
                v.value_at(r)
            };
            let c = self.c(vpiece);
            while r != target {
                let hmax = self.max_step(r, c);
                let d = target - r;
                let hs = if d.abs() <= hmax {
                    d
                } else if d.abs() <= 2.0 * hmax {
                    0.5 * d
                } else {
                    hmax.copysign(d)
                };
                let (u, du) = self.step(r, hs, c, st.u, st.du);
                st.u = u;
                st.du = du;
                st.renormalise();
                r = if hs == d { target } else { r + hs };
            }
        }
    }
}
