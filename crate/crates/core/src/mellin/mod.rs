//! Mellin transform `M(u)(sigma) = int_0^inf r^(i sigma) u(r) dr/r` on a
//! uniform grid in `x = log r`, where it is a Fourier transform of
//! `e^(-t x) u(e^x)` along the line `Im sigma = t`.

mod decompose;

pub use decompose::{
    decompose, lambda_bound, multiplier_sup, t0_rule, t_pm, Decomposition, MultiplierSpec, PiPart,
};

use crate::{Error, Result};
use num_complex::Complex64 as C;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Relative size of the endpoint samples above which a transform is
/// flagged as leaking through the periodic ends of the grid.
pub const LEAK_TOL: f64 = 1e-12;

/// Samples `u(e^(x_j))`, `x_j = x_min + j dx`, `j < count`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGrid {
    pub x_min: f64,
    pub dx: f64,
    pub samples: Vec<C>,
}

impl LogGrid {
    /// `count` points on `[x_min, x_max)`; `count` must be a power of two
    /// and at least 64.
    pub fn new(x_min: f64, x_max: f64, count: usize) -> Result<LogGrid> {
        if count < 64 || !count.is_power_of_two() {
            return Err(Error::Precondition(format!(
                "log grid size must be a power of two >= 64, got {count}"
            )));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::Precondition(format!("bad log grid range [{x_min}, {x_max})")));
        }
        Ok(LogGrid {
            x_min,
            dx: (x_max - x_min) / count as f64,
            samples: vec![C::new(0.0, 0.0); count],
        })
    }

    /// Fills the grid with `f(r)`.
    pub fn sample(x_min: f64, x_max: f64, count: usize, f: impl Fn(f64) -> C) -> Result<LogGrid> {
        let mut g = Self::new(x_min, x_max, count)?;
        for j in 0..count {
            g.samples[j] = f(g.x(j).exp());
        }
        Ok(g)
    }

    /// Same grid, samples `f(x_j, u_j)`.
    pub fn map(&self, f: impl Fn(f64, C) -> C) -> LogGrid {
        LogGrid {
            x_min: self.x_min,
            dx: self.dx,
            samples: (0..self.len()).map(|j| f(self.x(j), self.samples[j])).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    pub fn r(&self, j: usize) -> f64 {
        self.x(j).exp()
    }

    /// `||r^(-t-1/2) u||_{L^2(dr)}` by the trapezoid rule in `x`.
    pub fn weighted_norm(&self, t: f64) -> f64 {
        let s: f64 = (0..self.len())
            .map(|j| (-2.0 * t * self.x(j)).exp() * self.samples[j].norm_sqr())
            .sum();
        (s * self.dx).sqrt()
    }

    /// `M(u)(sigma)` at one point, by direct quadrature.
    pub fn mellin_at(&self, sigma: C) -> C {
        let i = C::new(0.0, 1.0);
        (0..self.len())
            .map(|j| (i * sigma * self.x(j)).exp() * self.samples[j])
            .sum::<C>()
            * self.dx
    }
}

/// `M(u)(tau + i t)` at the FFT frequencies, ascending in `tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinLine {
    pub t: f64,
    pub tau: Vec<f64>,
    pub values: Vec<C>,
    x_min: f64,
    dx: f64,
    /// Largest endpoint sample of `e^(-t x) u` relative to its maximum,
    /// when above [`LEAK_TOL`].
    pub leakage: Option<f64>,
}

impl MellinLine {
    pub fn dtau(&self) -> f64 {
        2.0 * PI / (self.values.len() as f64 * self.dx)
    }

    /// `||v||_{L^2_tau}`.
    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dtau()).sqrt()
    }

    /// Multiplies pointwise by `f(sigma)`, `sigma = tau + i t`.
    pub fn multiply(&self, f: impl Fn(C) -> C) -> MellinLine {
        let mut out = self.clone();
        for (v, &tau) in out.values.iter_mut().zip(&self.tau) {
            *v *= f(C::new(tau, self.t));
        }
        out
    }
}

fn shifted(k: usize, n: usize) -> i64 {
    let k = k as i64;
    if k < (n / 2) as i64 {
        k
    } else {
        k - n as i64
    }
}

/// Forward transform along `Im sigma = t`.
pub fn mellin_forward(u: &LogGrid, t: f64) -> MellinLine {
    let n = u.len();
    let mut buf: Vec<C> = (0..n).map(|j| (-t * u.x(j)).exp() * u.samples[j]).collect();
    let peak = buf.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let edge = buf[0].norm().max(buf[n - 1].norm());
    let leakage = if peak > 0.0 && edge > LEAK_TOL * peak {
        Some(edge / peak)
    } else {
        None
    };
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let dtau = 2.0 * PI / (n as f64 * u.dx);
    let mut tau = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for s in 0..n {
        let k = (s + n / 2) % n;
        let tk = shifted(k, n) as f64 * dtau;
        tau.push(tk);
        values.push(C::from_polar(u.dx, tk * u.x_min) * buf[k]);
    }
    MellinLine {
        t,
        tau,
        values,
        x_min: u.x_min,
        dx: u.dx,
        leakage,
    }
}

/// `M_t^(-1)(v)(r) = (2 pi)^(-1) int r^(-i sigma) v(sigma) d tau` on the
/// originating grid.
pub fn mellin_inverse(line: &MellinLine) -> LogGrid {
    let n = line.values.len();
    let mut buf = vec![C::new(0.0, 0.0); n];
    for s in 0..n {
        let k = (s + n / 2) % n;
        buf[k] = C::from_polar(1.0, -line.tau[s] * line.x_min) * line.values[s];
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let norm = 1.0 / (n as f64 * line.dx);
    let samples = (0..n)
        .map(|j| {
            let x = line.x_min + j as f64 * line.dx;
            buf[j] * norm * (line.t * x).exp()
        })
        .collect();
    LogGrid {
        x_min: line.x_min,
        dx: line.dx,
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bump(x: f64, x0: f64, s: f64) -> f64 {
        (-(x - x0).powi(2) / (2.0 * s * s)).exp()
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = LogGrid::new(-20.0, 20.0, 256).unwrap();
        let line = mellin_forward(&g, 0.3);
        assert!(line.values.iter().all(|v| v.norm() == 0.0));
        assert!(line.leakage.is_none());
    }

    #[test]
    fn grid_size_checked() {
        assert!(LogGrid::new(0.0, 1.0, 48).is_err());
        assert!(LogGrid::new(0.0, 1.0, 32).is_err());
        assert!(LogGrid::new(1.0, 1.0, 64).is_err());
    }

    #[test]
    fn gaussian_transform_closed_form() {
        // u(e^x) = exp(-x^2/2)  =>  M(u)(sigma) = sqrt(2 pi) exp(-sigma^2/2)
        let g = LogGrid::sample(-40.0, 40.0, 4096, |r| C::new(bump(r.ln(), 0.0, 1.0), 0.0)).unwrap();
        for &t in &[-1.0, 0.0, 0.5] {
            let line = mellin_forward(&g, t);
            for (tau, v) in line.tau.iter().zip(&line.values) {
                let s = C::new(*tau, t);
                let exact = (2.0 * PI).sqrt() * (-s * s / 2.0).exp();
                assert!((v - exact).norm() < 1e-12, "t={t} tau={tau}");
            }
            let s = C::new(0.7, t);
            assert!((g.mellin_at(s) - (2.0 * PI).sqrt() * (-s * s / 2.0).exp()).norm() < 1e-12);
        }
    }

    #[test]
    fn leakage_is_flagged() {
        let g = LogGrid::sample(-10.0, 10.0, 256, |r| C::new(1.0 / (1.0 + r), 0.0)).unwrap();
        assert!(mellin_forward(&g, 0.0).leakage.is_some());
    }

    proptest! {
        #[test]
        fn parseval_and_round_trip(a in -1.5f64..1.5, x0 in -3.0f64..3.0, s in 0.3f64..2.0, t in -1.0f64..1.0) {
            let g = LogGrid::sample(-40.0, 40.0, 4096, |r| {
                let x = r.ln();
                C::new(r.powf(a) * bump(x, x0, s), 0.2 * bump(x, x0 + 0.5, s))
            })
            .unwrap();
            let line = mellin_forward(&g, t);
            prop_assert!(line.leakage.is_none());
            // quadrature of int r^(-2t-1) |u|^2 dr
            let direct = g.weighted_norm(t);
            let rel = (line.norm() - (2.0 * PI).sqrt() * direct).abs() / line.norm();
            prop_assert!(rel < 1e-8, "parseval {}", rel);
            let back = mellin_inverse(&line);
            // compare e^(-t x) u, the function the transform actually sees
            let w = |j: usize| (-t * g.x(j)).exp();
            let peak = (0..g.len()).fold(0.0f64, |m, j| m.max(w(j) * g.samples[j].norm()));
            for j in 0..g.len() {
                prop_assert!((back.samples[j] - g.samples[j]).norm() * w(j) <= 1e-10 * peak);
            }
        }
    }
}
