//! Composite Gauss-Legendre radial grids.
//!
//! Panels are sized so the local wavenumber (oscillatory or exponential)
//! times the panel length stays below a fixed phase budget, and panel edges
//! are aligned with potential breakpoints and any requested radii.

use super::Channel;
use crate::potential::RadialPotential;
use crate::quadrature::{gauss_legendre, spectral_matrices};
use crate::specfun::Scaled;
use num_complex::Complex64 as C;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Left end; defaults to `1e-3 h`.
    pub r_min: Option<f64>,
    pub r_max: f64,
    /// Gauss nodes per panel.
    pub order: usize,
    /// Bound on `k_loc * panel_length`.
    pub phase_per_panel: f64,
    /// Bound on `panel_length / r_left`.
    pub max_ratio: f64,
    pub max_panel: f64,
    /// Radii that must be panel edges (exterior cutoffs and the like).
    pub extra_edges: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            r_min: None,
            r_max: 30.0,
            order: 16,
            phase_per_panel: 2.5,
            max_ratio: 0.5,
            max_panel: 0.5,
            extra_edges: vec![],
        }
    }
}

impl GridSpec {
    pub fn with_r_max(mut self, r_max: f64) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn with_edge(mut self, r: f64) -> Self {
        self.extra_edges.push(r);
        self
    }

    /// Halves every panel-size bound (doubles the node density).
    pub fn refined(mut self) -> Self {
        self.phase_per_panel /= 2.0;
        self.max_ratio /= 2.0;
        self.max_panel /= 2.0;
        self
    }
}

/// Gauss nodes of consecutive panels, with quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Panel edges, `edges.len() == panels + 1`.
    pub edges: Vec<f64>,
    pub order: usize,
    /// Reference nodes on `[-1, 1]`.
    pub ref_nodes: Vec<f64>,
    /// Reference weights on `[-1, 1]`.
    pub ref_weights: Vec<f64>,
    /// Spectral integration matrix on the reference panel.
    pub int_matrix: Vec<f64>,
    /// Spectral differentiation matrix on the reference panel.
    pub diff_matrix: Vec<f64>,
}

impl Grid {
    pub fn build(spec: &GridSpec, ch: &Channel, v: &RadialPotential) -> Result<Grid> {
        let r_min = spec.r_min.unwrap_or(1e-3 * ch.h);
        let r_max = spec.r_max;
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(Error::Precondition(format!(
                "grid needs 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if spec.order < 2 || !(spec.phase_per_panel > 0.0 && spec.max_ratio > 0.0 && spec.max_panel > 0.0) {
            return Err(Error::Precondition("invalid grid spec".into()));
        }
        let mut fixed: Vec<f64> = v
            .breakpoints()
            .iter()
            .chain(spec.extra_edges.iter())
            .copied()
            .filter(|&r| r > r_min && r < r_max)
            .collect();
        fixed.push(r_max);
        fixed.sort_by(f64::total_cmp);
        fixed.dedup();
        if let Some(&b) = v.breakpoints().first() {
            if b <= r_min {
                return Err(Error::Precondition(format!(
                    "r_min = {r_min} must lie inside the first potential piece (0, {b}]"
                )));
            }
        }
        let k_loc = |r: f64| {
            let q = (ch.e - v.value_at(r) - ch.m / (r * r)).abs();
            q.sqrt() / ch.h
        };
        let mut edges = vec![r_min];
        let mut a = r_min;
        for &stop in &fixed {
            while a < stop {
                let mut len = (spec.max_ratio * a).min(spec.max_panel);
                // shrink until the phase budget holds at both ends and the middle
                for _ in 0..60 {
                    let b = (a + len).min(stop);
                    let k = k_loc(a).max(k_loc(b)).max(k_loc(0.5 * (a + b)));
                    if k * (b - a) <= spec.phase_per_panel {
                        break;
                    }
                    len *= 0.7;
                }
                let mut b = a + len;
                // avoid a sliver panel in front of a fixed edge
                if b >= stop || stop - b < 0.2 * len {
                    b = stop;
                }
                edges.push(b);
                a = b;
            }
        }
        let (x, w) = gauss_legendre(spec.order);
        let mut nodes = Vec::with_capacity((edges.len() - 1) * spec.order);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for p in edges.windows(2) {
            let (c, hw) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
            for j in 0..spec.order {
                nodes.push(c + hw * x[j]);
                weights.push(hw * w[j]);
            }
        }
        let (int_matrix, diff_matrix) = spectral_matrices(spec.order);
        Ok(Grid {
            nodes,
            weights,
            edges,
            order: spec.order,
            ref_nodes: x,
            ref_weights: w,
            int_matrix,
            diff_matrix,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn panels(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn r_min(&self) -> f64 {
        self.edges[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.edges.last().unwrap()
    }

    /// Panel index containing node `i`.
    pub fn panel_of(&self, i: usize) -> usize {
        i / self.order
    }

    /// The grid restricted to the panels whose right edge is `<= r_stop`.
    pub fn truncated(&self, r_stop: f64) -> Grid {
        let panels = self.edges.partition_point(|&e| e <= r_stop * (1.0 + 1e-14)).saturating_sub(1);
        let n = panels * self.order;
        Grid {
            nodes: self.nodes[..n].to_vec(),
            weights: self.weights[..n].to_vec(),
            edges: self.edges[..=panels].to_vec(),
            order: self.order,
            ref_nodes: self.ref_nodes.clone(),
            ref_weights: self.ref_weights.clone(),
            int_matrix: self.int_matrix.clone(),
            diff_matrix: self.diff_matrix.clone(),
        }
    }

    /// `int_{r_min}^{r_i} g` at every node, for log-scaled samples `g`.
    ///
    /// Each panel is integrated spectrally in its own scale, so integrands
    /// spanning hundreds of orders of magnitude are handled. The piece
    /// `(0, r_min)` is added from a power-law fit through the first two
    /// nodes when that power is integrable.
    pub fn cumulative(&self, g: &[Scaled]) -> Vec<Scaled> {
        let p = self.order;
        let mut out = vec![Scaled::ZERO; g.len()];
        let mut running = self.origin_piece(g);
        for panel in 0..self.panels() {
            let rg = self.panel_range(panel);
            let hw = 0.5 * (self.edges[panel + 1] - self.edges[panel]);
            let (m, l) = mantissas(&g[rg.clone()]);
            for i in 0..p {
                let mut acc = C::new(0.0, 0.0);
                for j in 0..p {
                    acc += m[j] * self.int_matrix[i * p + j];
                }
                out[rg.start + i] = running.add(&Scaled::from_parts(acc * hw, l));
            }
            let tot: C = (0..p).map(|j| m[j] * self.ref_weights[j]).sum();
            running = running.add(&Scaled::from_parts(tot * hw, l));
        }
        out
    }

    /// `int_{r_i}^{r_max} g` at every node.
    pub fn cumulative_from_right(&self, g: &[Scaled]) -> Vec<Scaled> {
        let p = self.order;
        let mut out = vec![Scaled::ZERO; g.len()];
        let mut running = Scaled::ZERO;
        for panel in (0..self.panels()).rev() {
            let rg = self.panel_range(panel);
            let hw = 0.5 * (self.edges[panel + 1] - self.edges[panel]);
            let (m, l) = mantissas(&g[rg.clone()]);
            for i in 0..p {
                let mut acc = C::new(0.0, 0.0);
                for j in 0..p {
                    acc += m[j] * (self.ref_weights[j] - self.int_matrix[i * p + j]);
                }
                out[rg.start + i] = running.add(&Scaled::from_parts(acc * hw, l));
            }
            let tot: C = (0..p).map(|j| m[j] * self.ref_weights[j]).sum();
            running = running.add(&Scaled::from_parts(tot * hw, l));
        }
        out
    }

    fn origin_piece(&self, g: &[Scaled]) -> Scaled {
        if g.len() < 2 || g[0].is_zero() || g[1].is_zero() {
            return Scaled::ZERO;
        }
        let (x0, x1) = (self.nodes[0], self.nodes[1]);
        let pw = (g[1].log_mag - g[0].log_mag) / (x1 / x0).ln();
        if !(pw > -0.9) {
            return Scaled::ZERO;
        }
        let r0 = self.edges[0];
        // g ~ g0 (r/x0)^pw  =>  int_0^r0 g = g0 r0 (r0/x0)^pw / (pw + 1)
        let ln = pw * (r0 / x0).ln() + (r0 / (pw + 1.0)).ln();
        Scaled {
            log_mag: g[0].log_mag + ln,
            phase: g[0].phase,
        }
    }

    /// Derivative of nodal values by spectral differentiation within each
    /// panel.
    pub fn differentiate(&self, f: &[Scaled]) -> Vec<Scaled> {
        let p = self.order;
        let mut out = vec![Scaled::ZERO; f.len()];
        for panel in 0..self.panels() {
            let rg = self.panel_range(panel);
            let hw = 0.5 * (self.edges[panel + 1] - self.edges[panel]);
            let (m, l) = mantissas(&f[rg.clone()]);
            for i in 0..p {
                let mut acc = C::new(0.0, 0.0);
                for j in 0..p {
                    acc += m[j] * self.diff_matrix[i * p + j];
                }
                out[rg.start + i] = Scaled::from_parts(acc / hw, l);
            }
        }
        out
    }

    /// Node index range of panel `p`.
    pub fn panel_range(&self, p: usize) -> std::ops::Range<usize> {
        p * self.order..(p + 1) * self.order
    }
}

/// Mantissas of a slice relative to its largest log-magnitude.
pub(crate) fn mantissas(g: &[Scaled]) -> (Vec<C>, f64) {
    let l = g
        .iter()
        .filter(|s| !s.is_zero())
        .fold(f64::NEG_INFINITY, |a, s| a.max(s.log_mag));
    if l == f64::NEG_INFINITY {
        return (vec![C::new(0.0, 0.0); g.len()], 0.0);
    }
    (g.iter().map(|s| s.value_scaled(l)).collect(), l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_include_breakpoints_and_resolve_wavelength() {
        let ch = Channel::new(3, 0.05, 1.0, 0.0, 0.0).unwrap();
        let v = RadialPotential::barrier(1.0, 1.0).unwrap();
        let spec = GridSpec::default().with_r_max(10.0).with_edge(2.0);
        let g = Grid::build(&spec, &ch, &v).unwrap();
        assert!(g.edges.contains(&1.0) && g.edges.contains(&2.0));
        assert_eq!(g.r_max(), 10.0);
        assert!(g.r_min() <= 1e-3 * ch.h);
        let lambda = 1.0 / ch.h;
        for p in g.edges.windows(2) {
            if p[0] > 2.0 {
                assert!((p[1] - p[0]) * lambda <= 2.5 + 1e-12);
            }
        }
        let total: f64 = g.weights.iter().sum();
        assert!((total - (10.0 - g.r_min())).abs() < 1e-12);
        assert!(g.nodes.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn cumulative_integrals() {
        let ch = Channel::new(3, 0.1, 1.0, 0.0, 0.02).unwrap();
        let g = Grid::build(&GridSpec::default().with_r_max(5.0), &ch, &RadialPotential::zero()).unwrap();
        let f: Vec<Scaled> = g.nodes.iter().map(|&r| Scaled::from_real(r * r.cos())).collect();
        let left = g.cumulative(&f);
        let right = g.cumulative_from_right(&f);
        let anti = |r: f64| r * r.sin() + r.cos();
        for (i, &r) in g.nodes.iter().enumerate() {
            assert!((left[i].value().re - (anti(r) - anti(0.0))).abs() < 1e-12);
            assert!((right[i].value().re - (anti(5.0) - anti(r))).abs() < 1e-12);
        }
        // r^40 integrates through the origin piece and the geometric panels
        let f: Vec<Scaled> = g.nodes.iter().map(|&r| Scaled::from_parts(C::new(1.0, 0.0), 40.0 * r.ln())).collect();
        let left = g.cumulative(&f);
        let i = g.len() - 1;
        let exact = 41.0f64.recip() * g.nodes[i].powi(41);
        assert!((left[i].value().re - exact).abs() < 1e-10 * exact);
        let d = g.differentiate(&g.nodes.iter().map(|&r| Scaled::from_real(r.sin())).collect::<Vec<_>>());
        for (i, &r) in g.nodes.iter().enumerate() {
            assert!((d[i].value().re - r.cos()).abs() < 1e-9);
        }
    }
}
