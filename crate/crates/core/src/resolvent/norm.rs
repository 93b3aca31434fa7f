use super::apply::ChannelOperator;
use crate::potential::RadialPotential;
use crate::quadrature::adaptive_simpson;
use crate::radial_solver::{Channel, GridSpec, SolutionPair};
use crate::specfun::Scaled;
use crate::{Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::FRAC_PI_2;

pub const MAX_POWER_STEPS: usize = 10_000;
/// Relative change of the singular-value estimate between steps at which
/// power iteration stops.
pub const POWER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    PowerIteration,
    HilbertSchmidt,
}

/// `|| <r>^-s 1_{r >= R} (P_m - E - i eps)^-1 1_{r >= R} <r>^-s ||`
/// on `L^2(0, r_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNormRequest {
    pub s: f64,
    pub exterior_r: Option<f64>,
    pub grid: GridSpec,
}

impl WeightedNormRequest {
    pub fn new(s: f64, exterior_r: Option<f64>, grid: GridSpec) -> Result<Self> {
        if !(s > 0.5 && s <= 1.0) {
            return Err(Error::Precondition(format!("s must lie in (1/2, 1], got {s}")));
        }
        if let Some(r) = exterior_r {
            if !(r > 0.0 && r < grid.r_max) {
                return Err(Error::Precondition(format!(
                    "exterior radius {r} must lie in (0, r_max = {})",
                    grid.r_max
                )));
            }
        }
        Ok(WeightedNormRequest { s, exterior_r, grid })
    }

    /// Checks the exterior radius against `R1(V, E)`.
    pub fn validate_for(&self, v: &RadialPotential, e: f64) -> Result<()> {
        if let Some(r) = self.exterior_r {
            let r1 = v.r_one(e);
            if !(r > r1) {
                return Err(Error::Precondition(format!(
                    "exterior radius {r} must exceed R1 = {r1}"
                )));
            }
        }
        Ok(())
    }

    /// The grid spec with the exterior radius as a panel edge.
    pub fn grid_spec(&self) -> GridSpec {
        match self.exterior_r {
            Some(r) => self.grid.clone().with_edge(r),
            None => self.grid.clone(),
        }
    }

    /// `<r>^-s 1_{r >= R}`.
    pub fn weight(&self, r: f64) -> f64 {
        if self.exterior_r.is_some_and(|big_r| r < big_r) {
            return 0.0;
        }
        (1.0 + r * r).powf(-0.5 * self.s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    /// `ln value`, finite even when `value` overflows.
    pub ln_value: f64,
    pub method: NormMethod,
    pub r_max: f64,
    pub points: usize,
    pub tail_bound: f64,
    pub channel: Option<Channel>,
    pub iterations: usize,
    /// False if power iteration hit [`MAX_POWER_STEPS`]; `value` is then a
    /// lower bound.
    pub converged: bool,
}

/// `int_R^inf (1 + r^2)^-s dr`.
pub fn weight_tail_integral(s: f64, big_r: f64) -> f64 {
    if s == 1.0 {
        return FRAC_PI_2 - big_r.atan();
    }
    // r = cot(phi): int_0^Phi sin(phi)^a dphi, a = 2s - 2 in (-1, 0];
    // phi = t^(1/(a+1)) removes the endpoint singularity
    let a = 2.0 * s - 2.0;
    let phi_max = FRAC_PI_2 - big_r.atan();
    let b = a + 1.0;
    let f = |t: f64| {
        if t == 0.0 {
            return 1.0;
        }
        let phi = t.powf(1.0 / b);
        (phi.sin() / phi).powf(a)
    };
    adaptive_simpson(f, 0.0, phi_max.powf(b), 1e-12) / b
}

/// `ln (sum_i q_i |x_i|^2)^(1/2)`.
fn ln_norm(x: &[Scaled], q: &[f64]) -> f64 {
    let top = x.iter().fold(f64::NEG_INFINITY, |a, v| a.max(v.log_mag));
    if top == f64::NEG_INFINITY {
        return top;
    }
    let s: f64 = x
        .iter()
        .zip(q)
        .map(|(v, &w)| w * (2.0 * (v.log_mag - top)).exp())
        .sum();
    top + 0.5 * s.ln()
}

fn rescale(x: &mut [Scaled], ln: f64) {
    for v in x.iter_mut() {
        v.log_mag -= ln;
    }
}

fn estimate(pair: &SolutionPair, req: &WeightedNormRequest, ln_value: f64, method: NormMethod) -> NormEstimate {
    let g = pair.grid();
    NormEstimate {
        value: ln_value.exp(),
        ln_value,
        method,
        r_max: g.r_max(),
        points: g.len(),
        tail_bound: tail_bound(pair, req),
        channel: Some(pair.channel),
        iterations: 0,
        converged: true,
    }
}

/// `sup |K|` over the last decade of the grid times the weight tail beyond
/// `r_max`.
fn tail_bound(pair: &SolutionPair, req: &WeightedNormRequest) -> f64 {
    let g = pair.grid();
    let r_max = g.r_max();
    let (mut a, mut b) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (i, &r) in g.nodes.iter().enumerate() {
        if r >= 0.1 * r_max {
            a = a.max(pair.u0.val[i].log_mag);
            b = b.max(pair.u1.val[i].log_mag);
        }
    }
    let sup_k = (a + b + pair.kernel_prefactor().log_mag).exp();
    sup_k * weight_tail_integral(req.s, r_max)
}

fn check_request(pair: &SolutionPair, req: &WeightedNormRequest) -> Result<Vec<f64>> {
    let g = pair.grid();
    let ch = &pair.channel;
    if let Some(r) = req.exterior_r {
        if !g.edges.iter().any(|&e| (e - r).abs() <= 1e-12 * r) {
            return Err(Error::Precondition(format!(
                "exterior radius {r} must be a panel edge of the grid"
            )));
        }
    }
    // >= 10 points per local wavelength 2 pi h / |E - V|^(1/2), which is
    // the free one wherever V = 0
    let v_at = |r: f64| pair.potential.value_at(r);
    for (p, w) in g.edges.windows(2).enumerate() {
        let mid = 0.5 * (w[0] + w[1]);
        let k = (ch.e - v_at(mid)).abs().sqrt() / ch.h;
        let per_wave = g.order as f64 * 2.0 * std::f64::consts::PI / (k * (w[1] - w[0]));
        if per_wave < 10.0 {
            return Err(Error::Precondition(format!(
                "grid too coarse on panel {p} ({} nodes per wavelength)",
                per_wave
            )));
        }
    }
    Ok(g.nodes.iter().map(|&r| req.weight(r)).collect())
}

/// Largest singular value of `w R w` on `L^2(0, r_max)` by power iteration
/// on `(w R w)^* (w R w)`.
pub fn weighted_norm_1d(pair: &SolutionPair, req: &WeightedNormRequest) -> Result<NormEstimate> {
    let weight = check_request(pair, req)?;
    let g = pair.grid();
    let q = &g.weights;
    let op = ChannelOperator::new(pair, weight)?;
    // a smooth start with some oscillation so it is not orthogonal to the
    // top singular vector
    let mut x: Vec<Scaled> = g
        .nodes
        .iter()
        .zip(&op.weight)
        .map(|(&r, &w)| Scaled::new(C::new(w * (1.0 + 0.5 * (3.7 * r).cos()), 0.3 * w * (1.3 * r).sin())))
        .collect();
    let ln0 = ln_norm(&x, q);
    if ln0 == f64::NEG_INFINITY {
        return Err(Error::Precondition("weight vanishes on the whole grid".into()));
    }
    rescale(&mut x, ln0);
    let mut prev = f64::NEG_INFINITY;
    let mut sigma_ln = f64::NEG_INFINITY;
    for it in 1..=MAX_POWER_STEPS {
        let y = op.apply(&x);
        sigma_ln = ln_norm(&y, q);
        if sigma_ln == f64::NEG_INFINITY {
            let mut est = estimate(pair, req, sigma_ln, NormMethod::PowerIteration);
            est.iterations = it;
            return Ok(est);
        }
        let mut z = op.apply_adjoint(&y);
        let lz = ln_norm(&z, q);
        rescale(&mut z, lz);
        x = z;
        if (sigma_ln - prev).abs() < POWER_TOL {
            let mut est = estimate(pair, req, sigma_ln, NormMethod::PowerIteration);
            est.iterations = it;
            return Ok(est);
        }
        prev = sigma_ln;
    }
    let mut est = estimate(pair, req, sigma_ln, NormMethod::PowerIteration);
    est.iterations = MAX_POWER_STEPS;
    est.converged = false;
    Ok(est)
}

/// Hilbert-Schmidt norm of `w R w`, an upper bound for the operator norm:
/// `2 |h^2 W|^-2 int w^2 |u1|^2(r) int_0^r w^2 |u0|^2`.
pub fn hilbert_schmidt_1d(pair: &SolutionPair, req: &WeightedNormRequest) -> Result<NormEstimate> {
    let weight = check_request(pair, req)?;
    let g = pair.grid();
    let sq = |s: &Scaled, w: f64| Scaled {
        log_mag: 2.0 * s.log_mag,
        phase: C::new(1.0, 0.0),
    }
    .scale(C::new(w * w, 0.0));
    let f0: Vec<Scaled> = (0..g.len()).map(|i| sq(&pair.u0.val[i], weight[i])).collect();
    let inner = g.cumulative(&f0);
    let outer: Vec<Scaled> = (0..g.len()).map(|i| sq(&pair.u1.val[i], weight[i]) * inner[i]).collect();
    let total = *g.cumulative(&outer).last().unwrap();
    let ln = 0.5 * (2.0f64.ln() + total.log_mag) + pair.kernel_prefactor().log_mag;
    Ok(estimate(pair, req, ln, NormMethod::HilbertSchmidt))
}
