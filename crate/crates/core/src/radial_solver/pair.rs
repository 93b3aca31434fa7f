use super::taylor::{Ode, State};
use super::{Channel, Grid, GridFunction, GridSpec};
use crate::potential::RadialPotential;
use crate::specfun::{hankel_outgoing, ln_gamma, Scaled};
use crate::{Error, Result};
use num_complex::Complex64 as C;
use std::sync::Arc;

fn ode_for(ch: &Channel) -> Ode {
    Ode {
        a: ch.m / (ch.h * ch.h),
        h2: ch.h * ch.h,
        energy: C::new(ch.e, ch.eps),
        nu: ch.nu,
    }
}

/// `ln` of the leading coefficient `(lambda/2)^nu / Gamma(nu+1)` of
/// `r^(1/2) J_nu(lambda r)`, as a log-scaled number.
fn phi_j_leading(ch: &Channel) -> Scaled {
    let l = (ch.lambda * 0.5).ln() * ch.nu;
    Scaled::exp(l - ln_gamma(ch.nu + 1.0))
}

/// Frobenius data at `r` for the solution regular at 0 in a piece with
/// constant coefficient `c = (v - E - i eps)/h^2`, normalised like
/// `r^(1/2) J_nu(lambda r)`.
fn frobenius_start(ch: &Channel, c: C, r: f64) -> State {
    let nu = ch.nu;
    let t = c * (r * r / 4.0);
    let mut term = C::new(1.0, 0.0);
    let mut s = term;
    let mut ds = C::new(0.0, 0.0); // r dS/dr
    for k in 1..60 {
        let kf = k as f64;
        term = term * t / (kf * (nu + kf));
        s += term;
        ds += term * (2.0 * kf);
        if term.norm() < 1e-18 * s.norm() {
            break;
        }
    }
    let lead = phi_j_leading(ch);
    let ph = lead.phase;
    State {
        u: s * ph,
        du: (s * (nu + 0.5) + ds) / r * ph,
        ln: lead.log_mag + (nu + 0.5) * r.ln(),
    }
}

fn record(st: &State) -> (Scaled, Scaled) {
    (Scaled::from_parts(st.u, st.ln), Scaled::from_parts(st.du, st.ln))
}

/// The solution regular at the origin, `u0 ~ r^(1/2) J_nu(lambda r)` as
/// `r -> 0`, integrated outward over the whole grid.
pub fn build_u0_ode(ch: &Channel, v: &RadialPotential, grid: &Arc<Grid>) -> Result<GridFunction> {
    let r_min = grid.r_min();
    if let Some(&b) = v.breakpoints().first() {
        if b <= r_min {
            return Err(Error::Precondition("grid must start inside the first potential piece".into()));
        }
    }
    let ode = ode_for(ch);
    let c = (C::new(v.value_at(r_min), 0.0) - C::new(ch.e, ch.eps)) / (ch.h * ch.h);
    let mut st = frobenius_start(ch, c, r_min);
    let mut r = r_min;
    let mut val = Vec::with_capacity(grid.len());
    let mut der = Vec::with_capacity(grid.len());
    for &x in &grid.nodes {
        ode.propagate(v, r, x, &mut st);
        r = x;
        let (a, b) = record(&st);
        val.push(a);
        der.push(b);
    }
    let f = GridFunction {
        grid: grid.clone(),
        val,
        der,
    };
    if !f.is_finite() {
        return Err(Error::Quality("u0 integration produced non-finite values; refine the grid".into()));
    }
    Ok(f)
}

/// The outgoing solution: `r^(1/2) H^(1)_nu(lambda r)` beyond the support
/// of `V`, continued inward by the ODE.
pub fn build_u1(ch: &Channel, v: &RadialPotential, grid: &Arc<Grid>) -> Result<GridFunction> {
    let r0 = v.support_radius();
    if r0 >= grid.r_max() {
        return Err(Error::Precondition(format!(
            "grid must extend past the support radius {r0}"
        )));
    }
    let n = grid.len();
    let mut val = vec![Scaled::ZERO; n];
    let mut der = vec![Scaled::ZERO; n];
    let split = grid.nodes.partition_point(|&x| x < r0);
    for i in split..n {
        let (u, du) = hankel_outgoing(ch.nu, ch.lambda, grid.nodes[i])?;
        val[i] = u;
        der[i] = du;
    }
    if split > 0 {
        let ode = ode_for(ch);
        let (u, du) = hankel_outgoing(ch.nu, ch.lambda, r0)?;
        let mut st = State {
            u: u.phase,
            du: du.value_scaled(u.log_mag),
            ln: u.log_mag,
        };
        let mut r = r0;
        for i in (0..split).rev() {
            let x = grid.nodes[i];
            ode.propagate(v, r, x, &mut st);
            r = x;
            let (a, b) = record(&st);
            val[i] = a;
            der[i] = b;
        }
    }
    let f = GridFunction {
        grid: grid.clone(),
        val,
        der,
    };
    if !f.is_finite() {
        return Err(Error::Quality("u1 construction produced non-finite values".into()));
    }
    Ok(f)
}

#[derive(Debug, Clone, Copy)]
pub struct WronskianReport {
    /// Median over the grid (by magnitude).
    pub value: Scaled,
    /// `max_i |W_i - W| / |W|`.
    pub drift: f64,
    /// `|W|` is below `1e-12` of the size of its two products.
    pub near_dependent: bool,
}

/// `W = u0 u1' - u0' u1` at every node, summarised.
pub fn wronskian(u0: &GridFunction, u1: &GridFunction) -> Result<WronskianReport> {
    if u0.len() != u1.len() || u0.is_empty() {
        return Err(Error::Precondition("u0 and u1 must share a nonempty grid".into()));
    }
    let w: Vec<Scaled> = (0..u0.len())
        .map(|i| (u0.val[i] * u1.der[i]).sub(&(u0.der[i] * u1.val[i])))
        .collect();
    let mut idx: Vec<usize> = (0..w.len()).collect();
    idx.sort_by(|&a, &b| w[a].log_mag.total_cmp(&w[b].log_mag));
    let mid = idx[idx.len() / 2];
    let value = w[mid];
    if value.is_zero() || !value.is_finite() {
        return Err(Error::Quality("Wronskian vanishes: u0 and u1 are dependent".into()));
    }
    let drift = w.iter().map(|x| x.rel_diff(&value)).fold(0.0, f64::max);
    let products = (u0.val[mid] * u1.der[mid]).log_mag.max((u0.der[mid] * u1.val[mid]).log_mag);
    Ok(WronskianReport {
        value,
        drift,
        near_dependent: value.log_mag < products + (1e-12f64).ln(),
    })
}

/// `(u0, u1, W)` for one channel on one grid.
#[derive(Debug, Clone)]
pub struct SolutionPair {
    pub channel: Channel,
    pub potential: RadialPotential,
    pub u0: GridFunction,
    pub u1: GridFunction,
    pub wronskian: Scaled,
    pub wronskian_drift: f64,
    pub near_dependent: bool,
}

impl SolutionPair {
    pub fn build(ch: &Channel, v: &RadialPotential, grid: &Arc<Grid>) -> Result<SolutionPair> {
        let u0 = build_u0_ode(ch, v, grid)?;
        let u1 = build_u1(ch, v, grid)?;
        Self::from_parts(*ch, v, u0, u1)
    }

    /// Builds the grid from `spec` first.
    pub fn build_on(ch: &Channel, v: &RadialPotential, spec: &GridSpec) -> Result<SolutionPair> {
        let grid = Arc::new(Grid::build(spec, ch, v)?);
        Self::build(ch, v, &grid)
    }

    pub fn from_parts(
        ch: Channel,
        v: &RadialPotential,
        u0: GridFunction,
        u1: GridFunction,
    ) -> Result<SolutionPair> {
        let w = wronskian(&u0, &u1)?;
        Ok(SolutionPair {
            channel: ch,
            potential: v.clone(),
            u0,
            u1,
            wronskian: w.value,
            wronskian_drift: w.drift,
            near_dependent: w.near_dependent,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.u0.grid
    }

    /// Fails with a quality error if the Wronskian drift exceeds `tol`.
    pub fn check_drift(&self, tol: f64) -> Result<()> {
        if self.wronskian_drift > tol {
            return Err(Error::Quality(format!(
                "Wronskian drift {:.3e} exceeds {tol:.1e}",
                self.wronskian_drift
            )));
        }
        Ok(())
    }

    /// `-1 / (h^2 W)`.
    pub fn kernel_prefactor(&self) -> Scaled {
        let h2 = self.channel.h * self.channel.h;
        -(self.wronskian.scale(C::new(h2, 0.0))).inv()
    }

    /// `K(r_i, r_j)` at grid nodes.
    pub fn kernel_at(&self, i: usize, j: usize) -> Scaled {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.u0.val[a] * self.u1.val[b] * self.kernel_prefactor()
    }

    /// `K(r, r')` at arbitrary radii inside the grid, log-scaled.
    pub fn kernel_eval_scaled(&self, r: f64, rp: f64) -> Result<Scaled> {
        let (a, b) = if r <= rp { (r, rp) } else { (rp, r) };
        Ok(self.u0.interpolate(a)? * self.u1.interpolate(b)? * self.kernel_prefactor())
    }

    /// `K(r, r') = -u0(min) u1(max) / (h^2 W)`.
    pub fn kernel_eval(&self, r: f64, rp: f64) -> Result<C> {
        Ok(self.kernel_eval_scaled(r, rp)?.value())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MonotoneReport {
    /// Radii in `(0, R0]` where `u0 < -tol`.
    pub u0_violations: Vec<f64>,
    /// Radii in `(0, R0]` where `u0' < -tol`.
    pub du0_violations: Vec<f64>,
}

impl MonotoneReport {
    pub fn is_empty(&self) -> bool {
        self.u0_violations.is_empty() && self.du0_violations.is_empty()
    }
}

/// Lists grid points in `(0, r0]` where `u0` or `u0'` is negative beyond
/// `1e-10` of the local scale `|u0| + r |u0'|`.
pub fn check_u0_monotone(pair: &SolutionPair, r0: f64) -> Result<MonotoneReport> {
    if pair.channel.eps != 0.0 {
        return Err(Error::Precondition("monotonicity check needs eps = 0".into()));
    }
    let mut rep = MonotoneReport::default();
    let g = pair.grid();
    for (i, &r) in g.nodes.iter().enumerate() {
        if r > r0 {
            break;
        }
        let (u, du) = (pair.u0.val[i], pair.u0.der[i]);
        let scale = log_abs_sum(&u, &du, r.ln());
        let ur = u.value_scaled(scale).re;
        let dur = du.value_scaled(scale).re * r;
        if ur < -1e-10 {
            rep.u0_violations.push(r);
        }
        if dur < -1e-10 {
            rep.du0_violations.push(r);
        }
    }
    Ok(rep)
}

/// `ln(|a| + e^shift |b|)`.
fn log_abs_sum(a: &Scaled, b: &Scaled, shift: f64) -> f64 {
    let (x, y) = (a.log_mag, b.log_mag + shift);
    let m = x.max(y);
    if m == f64::NEG_INFINITY {
        return 0.0;
    }
    m + ((x - m).exp() + (y - m).exp()).ln()
}

/// Max over nodes of `|-h^2 u'' + (V + m/r^2 - E - i eps) u|` relative to
/// the local scale `h^2 |u''| + |(V + m/r^2 - E - i eps) u|`, with `u''`
/// from spectral differentiation of the stored `u'` panel by panel.
pub fn residual(f: &GridFunction, ch: &Channel, v: &RadialPotential) -> f64 {
    let g = &f.grid;
    let d2 = g.differentiate(&f.der);
    let h2 = ch.h * ch.h;
    let mut worst: f64 = 0.0;
    for (p, e) in g.edges.windows(2).enumerate() {
        // the potential value of this panel, not of a shared edge
        let vp = v.value_at(0.5 * (e[0] + e[1]));
        for i in g.panel_range(p) {
            let r = g.nodes[i];
            let coef = C::new(vp + ch.m / (r * r) - ch.e, -ch.eps);
            let a = d2[i].scale(C::new(-h2, 0.0));
            let b = f.val[i].scale(coef);
            let res = a.add(&b);
            let scale = log_abs_sum(&a, &b, 0.0);
            if !res.is_zero() {
                worst = worst.max((res.log_mag - scale).exp());
            }
        }
    }
    worst
}
