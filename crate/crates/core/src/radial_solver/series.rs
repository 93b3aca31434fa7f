//! Volterra-series construction of `u0 = sum_n phi_n` with
//! `phi_0 = r^(1/2) J_nu(lambda r)` and
//! `phi_{n+1}(r) = pi/(2h^2) int_0^r (phi_Y(r) phi_J(r') - phi_J(r) phi_Y(r')) V(r') phi_n(r') dr'`.
//!
//! Used as an independent oracle for the ODE constructor at moderate `1/h`.

use super::{Channel, Grid, GridFunction};
use crate::potential::RadialPotential;
use crate::specfun::{bessel_jy_scaled, Scaled};
use crate::{Error, Result};
use std::f64::consts::PI;
use std::sync::Arc;

const N_MAX: usize = 200;
const DELTA: f64 = 0.5;

/// Sums the series on the panels of `grid` that end at or before `r_stop`.
///
/// Stops once the a-priori tail bound `C_J C_1 ... C_{N+1} r^(nu + (N+1)(2-delta) + 1/2) / (1 - q)`
/// is below `tol` times the largest partial sum, where the `C_n` follow the
/// ratio recursion of the convergence proof with `C_0^2` sharpened to
/// `C_J C_Y` (every kernel term pairs one `phi_J` with one `phi_Y`).
/// Only the value sups enter: the certificate is for `u0` itself, and the
/// derivative series is summed alongside with the same number of terms.
pub fn build_u0_series(
    ch: &Channel,
    v: &RadialPotential,
    grid: &Arc<Grid>,
    r_stop: f64,
    tol: f64,
) -> Result<GridFunction> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("tol must be > 0".into()));
    }
    let g = Arc::new(grid.truncated(r_stop));
    if g.is_empty() {
        return Err(Error::Precondition(format!("no grid panels below r_stop = {r_stop}")));
    }
    let r_end = g.r_max();
    let nu = ch.nu;
    let lam = ch.lambda;
    let n = g.len();
    let mut pj = Vec::with_capacity(n);
    let mut py = Vec::with_capacity(n);
    let mut dpj = Vec::with_capacity(n);
    let mut dpy = Vec::with_capacity(n);
    let (mut cj, mut cy) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &r in &g.nodes {
        let (s, _) = bessel_jy_scaled(nu, lam * r)?;
        let sr = Scaled::from_real(r.sqrt());
        let half = Scaled::from_real(0.5 / r.sqrt());
        let lam_s = Scaled::new(lam) * sr;
        pj.push(sr * s.j);
        py.push(sr * s.y);
        dpj.push((half * s.j).add(&(lam_s * s.j_prime)));
        dpy.push((half * s.y).add(&(lam_s * s.y_prime)));
        let lr = r.ln();
        let k = pj.len() - 1;
        cj = cj.max(pj[k].log_mag - (nu + 0.5) * lr);
        cy = cy.max(py[k].log_mag + (nu + DELTA - 0.5) * lr);
    }
    // safety margin on the sampled constants
    let (cj, cy) = (cj + 0.1, cy + 0.1);
    let sup_v = v.sup_norm();
    let vv: Vec<Scaled> = g.nodes.iter().map(|&r| Scaled::from_real(v.value_at(r))).collect();
    let pref = Scaled::from_real(PI / (2.0 * ch.h * ch.h));

    let mut phi = pj.clone();
    let mut dphi = dpj.clone();
    let mut sum = pj.clone();
    let mut dsum = dpj.clone();
    let two_d = 2.0 - DELTA;
    let ln_c = |k: usize| -> f64 {
        let kf = k as f64;
        if sup_v == 0.0 {
            return f64::NEG_INFINITY;
        }
        cj + cy
            + (PI * sup_v).ln()
            + (2.0 * nu + (2.0 * kf - 1.0) * two_d + 2.0).ln()
            - (2.0 * ch.h * ch.h * two_d * kf * (2.0 * nu + (kf - 1.0) * two_d + 2.0)).ln()
    };
    let lr = r_end.ln();
    let mut ln_prod = cj;
    for nterm in 0..N_MAX {
        // a-priori tail after `nterm` corrections
        let ln_next = ln_prod + ln_c(nterm + 1);
        let ln_bound_next = ln_next + (nu + (nterm as f64 + 1.0) * two_d + 0.5) * lr;
        let ln_q = ln_c(nterm + 2) + two_d * lr;
        let max_sum = sum.iter().fold(f64::NEG_INFINITY, |a, s| a.max(s.log_mag));
        if ln_q < (0.5f64).ln() && ln_bound_next - (-(ln_q.exp())).ln_1p() < tol.ln() + max_sum {
            return Ok(GridFunction {
                grid: g,
                val: sum,
                der: dsum,
            });
        }
        ln_prod = ln_next;
        if sup_v == 0.0 {
            continue;
        }
        let fa: Vec<Scaled> = (0..n).map(|i| pj[i] * vv[i] * phi[i]).collect();
        let fb: Vec<Scaled> = (0..n).map(|i| py[i] * vv[i] * phi[i]).collect();
        let a = g.cumulative(&fa);
        let b = g.cumulative(&fb);
        for i in 0..n {
            phi[i] = pref * (py[i] * a[i]).sub(&(pj[i] * b[i]));
            dphi[i] = pref * (dpy[i] * a[i]).sub(&(dpj[i] * b[i]));
            sum[i] = sum[i].add(&phi[i]);
            dsum[i] = dsum[i].add(&dphi[i]);
        }
    }
    Err(Error::NonConvergence(format!(
        "Volterra series did not certify convergence within {N_MAX} terms (h = {})",
        ch.h
    )))
}
