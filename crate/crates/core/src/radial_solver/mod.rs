//! Fundamental solutions `u0` (regular at the origin) and `u1` (outgoing at
//! infinity) of the radial channel operator, their Wronskian, and the
//! resolvent kernel `K(r, r') = -u0(r<) u1(r>) / (h^2 W)`.

mod grid;
mod pair;
mod series;
mod taylor;

pub use grid::{Grid, GridSpec};
pub use pair::{
    build_u0_ode, build_u1, check_u0_monotone, residual, wronskian, MonotoneReport, SolutionPair,
    WronskianReport,
};
pub use series::build_u0_series;

use crate::specfun::Scaled;
use crate::{Error, Result};
use num_complex::Complex64 as C;
use std::sync::Arc;

/// One angular channel `-h^2 d^2/dr^2 + V + m/r^2` at energy `E + i eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub n: usize,
    pub h: f64,
    pub e: f64,
    pub eps: f64,
    pub m: f64,
    /// `h^-1 (m + h^2/4)^(1/2)`
    pub nu: f64,
    /// `sqrt(E + i eps) / h`, principal root.
    pub lambda: C,
}

impl Channel {
    pub fn new(n: usize, h: f64, e: f64, eps: f64, m: f64) -> Result<Channel> {
        if n < 2 {
            return Err(Error::Precondition(format!("dimension must be >= 2, got {n}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Precondition(format!("h must be > 0, got {h}")));
        }
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::Precondition(format!("E must be > 0, got {e}")));
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::Precondition(format!("eps must be >= 0, got {eps}")));
        }
        let floor = -0.25 * h * h;
        if !(m.is_finite() && m >= floor * (1.0 + 1e-12)) {
            return Err(Error::Precondition(format!("m must be >= -h^2/4 = {floor}, got {m}")));
        }
        let nu = (m + 0.25 * h * h).max(0.0).sqrt() / h;
        let lambda = C::new(e, eps).sqrt() / h;
        Ok(Channel {
            n,
            h,
            e,
            eps,
            m,
            nu,
            lambda,
        })
    }

    /// Channel of spherical-harmonic degree `k` in dimension `n`.
    pub fn for_degree(n: usize, h: f64, e: f64, eps: f64, k: usize) -> Result<Channel> {
        let nf = n as f64;
        let kf = k as f64;
        let sigma = kf * kf + (nf - 2.0) * kf;
        let m = h * h * (sigma + (nf - 1.0) * (nf - 3.0) / 4.0);
        Self::new(n, h, e, eps, m)
    }

    pub fn with_eps(&self, eps: f64) -> Result<Channel> {
        Self::new(self.n, self.h, self.e, eps, self.m)
    }
}

/// Values and `r`-derivatives of a function on a [`Grid`], log-scaled.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub grid: Arc<Grid>,
    pub val: Vec<Scaled>,
    pub der: Vec<Scaled>,
}

impl GridFunction {
    pub fn len(&self) -> usize {
        self.val.len()
    }

    pub fn is_empty(&self) -> bool {
        self.val.is_empty()
    }

    pub fn values(&self) -> Vec<C> {
        self.val.iter().map(|s| s.value()).collect()
    }

    /// Multiplies by a constant.
    pub fn scaled_by(&self, c: C) -> GridFunction {
        let s = Scaled::new(c);
        GridFunction {
            grid: self.grid.clone(),
            val: self.val.iter().map(|v| *v * s).collect(),
            der: self.der.iter().map(|v| *v * s).collect(),
        }
    }

    /// All entries finite (no NaN, no infinite log-magnitude).
    pub fn is_finite(&self) -> bool {
        self.val.iter().chain(&self.der).all(|s| s.is_zero() || s.is_finite())
    }

    /// Interpolates between nodes, linearly in log-magnitude and in the
    /// unwrapped phase.
    pub fn interpolate(&self, r: f64) -> Result<Scaled> {
        let nodes = &self.grid.nodes;
        let (first, last) = (nodes[0], *nodes.last().unwrap());
        if !(r >= first && r <= last) {
            return Err(Error::Precondition(format!(
                "r = {r} outside the interpolation range [{first}, {last}]"
            )));
        }
        let i = nodes.partition_point(|&x| x < r);
        if nodes[i] == r {
            return Ok(self.val[i]);
        }
        let (a, b) = (self.val[i - 1], self.val[i]);
        if a.is_zero() || b.is_zero() {
            return Ok(Scaled::ZERO);
        }
        let t = (r - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
        let pa = a.phase.arg();
        let mut dp = b.phase.arg() - pa;
        while dp > std::f64::consts::PI {
            dp -= 2.0 * std::f64::consts::PI;
        }
        while dp < -std::f64::consts::PI {
            dp += 2.0 * std::f64::consts::PI;
        }
        Ok(Scaled {
            log_mag: a.log_mag + t * (b.log_mag - a.log_mag),
            phase: C::from_polar(1.0, pa + t * dp),
        })
    }
}
