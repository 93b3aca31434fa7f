use super::norm::{weighted_norm_1d, NormEstimate, WeightedNormRequest};
use super::{channel_m, multiplicity};
use crate::potential::RadialPotential;
use crate::radial_solver::{Channel, SolutionPair};
use crate::Result;
use rayon::prelude::*;

/// Consecutive small channels required before stopping.
pub const STOP_RUN: usize = 5;
/// "Small" relative to the running maximum.
pub const STOP_RATIO: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelNorm {
    pub k: usize,
    pub m: f64,
    pub multiplicity: u128,
    pub norm: NormEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Five consecutive channels below `1e-3` of the running maximum, all
    /// with `m_k >= M+`.
    Decay,
    /// Reached the caller's `k_max` first.
    Cap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullNorm {
    /// The maximum channel norm (the block-diagonal operator's norm).
    pub estimate: NormEstimate,
    pub argmax_k: usize,
    pub channels: Vec<ChannelNorm>,
    pub stop: StopReason,
    /// `M+` used by the stopping rule.
    pub m_plus: f64,
}

fn channel_norm(
    v: &RadialPotential,
    e: f64,
    h: f64,
    req: &WeightedNormRequest,
    n: usize,
    k: usize,
) -> Result<ChannelNorm> {
    let ch = Channel::for_degree(n, h, e, 0.0, k)?;
    let pair = SolutionPair::build_on(&ch, v, &req.grid_spec())?;
    let norm = weighted_norm_1d(&pair, req)?;
    Ok(ChannelNorm {
        k,
        m: channel_m(n, h, k),
        multiplicity: multiplicity(n, k),
        norm,
    })
}

/// `|| <x>^-s (-h^2 Delta + V(|x|) - E - i0)^-1 <x>^-s ||` in `R^n` as the
/// maximum over angular channels `k = 0, 1, ...`.
///
/// Channels are evaluated in parallel batches and scanned in order of `k`;
/// the scan stops after [`STOP_RUN`] consecutive channels below
/// [`STOP_RATIO`] times the running maximum once `m_k >= M+`, or at `k_max`.
pub fn full_norm_nd(
    v: &RadialPotential,
    e: f64,
    h: f64,
    req: &WeightedNormRequest,
    n: usize,
    k_max: usize,
) -> Result<FullNorm> {
    req.validate_for(v, e)?;
    let big_r = req.exterior_r.unwrap_or_else(|| v.r_one(e));
    let m_plus = v.m_plus(e, big_r)?;
    let batch = (2 * rayon::current_num_threads()).max(2);
    let mut channels: Vec<ChannelNorm> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut run = 0;
    let mut k0 = 0;
    let mut stop = StopReason::Cap;
    'outer: while k0 <= k_max {
        let k1 = (k0 + batch).min(k_max + 1);
        let results: Vec<Result<ChannelNorm>> =
            (k0..k1).into_par_iter().map(|k| channel_norm(v, e, h, req, n, k)).collect();
        for r in results {
            let c = r?;
            best = best.max(c.norm.ln_value);
            if c.norm.ln_value < best + STOP_RATIO.ln() && c.m >= m_plus {
                run += 1;
            } else {
                run = 0;
            }
            channels.push(c);
            if run >= STOP_RUN {
                stop = StopReason::Decay;
                break 'outer;
            }
        }
        k0 = k1;
    }
    let arg = channels
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm.ln_value.total_cmp(&b.1.norm.ln_value))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(FullNorm {
        estimate: channels[arg].norm.clone(),
        argmax_k: channels[arg].k,
        channels,
        stop,
        m_plus,
    })
}
