//! Weighted resolvent norms: the 1-D channel resolvent built from the
//! kernel `K(r, r')`, its weighted operator norm, and the n-dimensional norm
//! as the maximum over angular channels.

mod apply;
mod full;
mod norm;

pub use apply::{apply_resolvent_1d, ChannelOperator};
pub use full::{full_norm_nd, ChannelNorm, FullNorm, StopReason};
pub use norm::{hilbert_schmidt_1d, weight_tail_integral, weighted_norm_1d, NormEstimate, NormMethod, WeightedNormRequest};

use crate::{Error, Result};

/// Degree-`k` spherical harmonics on `S^(n-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularChannel {
    pub k: usize,
    /// `k^2 + (n-2) k`
    pub sigma: u64,
    pub multiplicity: u128,
    /// `h^2 (sigma + (n-1)(n-3)/4)`
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngularDecomposition {
    pub n: usize,
    pub h: f64,
    pub channels: Vec<AngularChannel>,
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Dimension of the degree-`k` harmonics in `n` variables:
/// `C(k+n-1, n-1) - C(k+n-3, n-1)`.
pub fn multiplicity(n: usize, k: usize) -> u128 {
    let (n, k) = (n as u64, k as u64);
    let lower = if k >= 2 { binomial(k + n - 3, n - 1) } else { 0 };
    binomial(k + n - 1, n - 1) - lower
}

/// `m_k = h^2 (k^2 + (n-2) k + (n-1)(n-3)/4)`.
pub fn channel_m(n: usize, h: f64, k: usize) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    h * h * (kf * kf + (nf - 2.0) * kf + (nf - 1.0) * (nf - 3.0) / 4.0)
}

pub fn angular_channels(n: usize, h: f64, k_max: usize) -> Result<AngularDecomposition> {
    if n < 2 {
        return Err(Error::Precondition(format!("dimension must be >= 2, got {n}")));
    }
    if !(h > 0.0) {
        return Err(Error::Precondition(format!("h must be > 0, got {h}")));
    }
    let channels = (0..=k_max)
        .map(|k| AngularChannel {
            k,
            sigma: (k * k + (n - 2) * k) as u64,
            multiplicity: multiplicity(n, k),
            m: channel_m(n, h, k),
        })
        .collect();
    Ok(AngularDecomposition { n, h, channels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let d = angular_channels(3, 0.1, 3).unwrap();
        assert_eq!((d.channels[1].sigma, d.channels[1].multiplicity), (2, 3));
        let d = angular_channels(2, 0.1, 2).unwrap();
        assert!((d.channels[0].m + 0.25 * 0.01).abs() < 1e-17);
        assert_eq!(d.channels[0].multiplicity, 1);
        assert_eq!(d.channels[2].multiplicity, 2);
        let d = angular_channels(4, 0.1, 2).unwrap();
        assert_eq!(d.channels[2].sigma, 8);
        assert!((d.channels[2].m - 0.01 * 8.75).abs() < 1e-15);
        assert_eq!(d.channels[2].multiplicity, 9);
        assert!(angular_channels(1, 0.1, 2).is_err());
    }

    /// Monomials of degree k in n variables minus those of degree k-2
    /// (the Laplacian maps the first onto the second).
    fn dimension_count(n: usize, k: usize) -> u128 {
        fn monomials(n: usize, k: usize) -> u128 {
            if n == 1 {
                return 1;
            }
            (0..=k).map(|j| monomials(n - 1, k - j)).sum()
        }
        monomials(n, k) - if k >= 2 { monomials(n, k - 2) } else { 0 }
    }

    proptest! {
        #[test]
        fn channel_invariants(n in 2usize..7, k_max in 0usize..12, h in 0.01f64..1.0) {
            let d = angular_channels(n, h, k_max).unwrap();
            prop_assert_eq!(d.channels[0].sigma, 0);
            for w in d.channels.windows(2) {
                prop_assert!(w[1].sigma >= w[0].sigma);
            }
            for c in &d.channels {
                prop_assert!(c.m >= -h * h / 4.0 * (1.0 + 1e-12));
                prop_assert_eq!(c.multiplicity, dimension_count(n, c.k));
                let at_floor = (c.m + h * h / 4.0).abs() < 1e-15;
                prop_assert_eq!(at_floor, n == 2 && c.k == 0);
            }
        }
    }
}
