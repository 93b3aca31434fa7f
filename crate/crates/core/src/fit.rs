//! Least-squares scaling fits over `h`-sweeps.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// `log y = -p log h + b`
    PowerLaw,
    /// `log y = C / h + b`
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    /// `p` for a power law, `C` for an exponential rate.
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

fn line_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Precondition("fit needs at least two distinct h values".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum();
    // a constant series is fitted exactly by a flat line
    let r2 = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    Ok((slope, icpt, r2))
}

fn check(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 4 {
        return Err(Error::Precondition(format!("fit needs >= 4 points, got {}", points.len())));
    }
    if points.iter().any(|&(h, y)| !(h > 0.0 && y > 0.0 && h.is_finite() && y.is_finite())) {
        return Err(Error::Precondition("fit needs positive finite (h, value) pairs".into()));
    }
    Ok(())
}

/// `value ~ h^(-p)` on `(log h, log value)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<FitResult> {
    check(points)?;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, r_squared) = line_fit(&xs, &ys)?;
    Ok(FitResult {
        model: FitModel::PowerLaw,
        rate: -slope,
        intercept,
        r_squared,
    })
}

/// `value ~ e^(C/h)` on `(1/h, log value)`.
pub fn fit_exponential_rate(points: &[(f64, f64)]) -> Result<FitResult> {
    check(points)?;
    let xs: Vec<f64> = points.iter().map(|p| 1.0 / p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (rate, intercept, r_squared) = line_fit(&xs, &ys)?;
    Ok(FitResult {
        model: FitModel::Exponential,
        rate,
        intercept,
        r_squared,
    })
}

/// Points whose value is at least every value at larger `h`: the running
/// maximum as `h` decreases.
pub fn upper_envelope(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = f64::NEG_INFINITY;
    sorted
        .into_iter()
        .filter(|&(_, y)| {
            let keep = y >= best;
            best = best.max(y);
            keep
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sweep(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..8).map(|i| 0.1 * 0.1f64.powf(i as f64 / 7.0)).map(|h| (h, f(h))).collect()
    }

    #[test]
    fn synthetic_examples() {
        let p = fit_power_law(&sweep(|h| 3.0 / h)).unwrap();
        assert!((p.rate - 1.0).abs() < 1e-12 && (p.r_squared - 1.0).abs() < 1e-12);
        let p = fit_power_law(&sweep(|_| 7.0)).unwrap();
        assert!(p.rate.abs() < 1e-12);
        let e = fit_exponential_rate(&sweep(|h| (2.0 / h).exp())).unwrap();
        assert!((e.rate - 2.0).abs() < 1e-10 && (e.r_squared - 1.0).abs() < 1e-12);
        // a pure power law is fitted better by the power-law model
        let pts = sweep(|h| 3.0 / h);
        assert!(fit_power_law(&pts).unwrap().r_squared > fit_exponential_rate(&pts).unwrap().r_squared);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_power_law(&[(0.1, 1.0), (0.2, 2.0), (0.3, 3.0)]).is_err());
        assert!(fit_power_law(&[(0.1, 1.0), (0.2, -2.0), (0.3, 3.0), (0.4, 1.0)]).is_err());
        assert!(fit_power_law(&[(0.1, 1.0), (0.1, 2.0), (0.1, 3.0), (0.1, 1.0)]).is_err());
    }

    #[test]
    fn envelope_is_running_max() {
        let pts = [(0.1, 5.0), (0.05, 3.0), (0.02, 9.0), (0.01, 8.0), (0.005, 9.5)];
        assert_eq!(upper_envelope(&pts), vec![(0.1, 5.0), (0.02, 9.0), (0.005, 9.5)]);
    }

    proptest! {
        #[test]
        fn recovers_power(p in -3.0f64..3.0, c in 0.1f64..10.0) {
            let f = fit_power_law(&sweep(|h| c * h.powf(-p))).unwrap();
            prop_assert!((f.rate - p).abs() < 1e-9);
            prop_assert!((f.intercept - c.ln()).abs() < 1e-9);
            prop_assert!(f.r_squared >= 0.0 && f.r_squared <= 1.0);
        }
    }
}
