//! `u = Pi_t0(r^2 Q_m u) + E_t0(r^2 Q_m u)` for `Q_m = -d^2/dr^2 + m h^-2 r^-2`.
//!
//! `E_t0 v` is the inverse transform along `Im sigma = t0` of
//! `M(v) / (sigma^2 - i sigma + m h^-2)`, and `Pi_t0 v` collects the residues
//! at the roots `sigma = i t_pm` lying below that line.

use super::{mellin_forward, mellin_inverse, LogGrid};
use crate::{Error, Result};
use num_complex::Complex64 as C;

/// Separation of `t0` from a root below which a conditioning warning is
/// attached.
pub const NEAR_POLE: f64 = 1e-3;

/// `t_pm = (1 pm sqrt(1 + 4 m h^-2)) / 2`.
pub fn t_pm(m: f64, h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0) {
        return Err(Error::Precondition(format!("h must be > 0, got {h}")));
    }
    let d = 1.0 + 4.0 * m / (h * h);
    if !(d >= -1e-12) {
        return Err(Error::Precondition(format!("m must be >= -h^2/4, got m = {m}, h = {h}")));
    }
    let s = d.max(0.0).sqrt();
    Ok((0.5 * (1.0 - s), 0.5 * (1.0 + s)))
}

/// `Lambda(t, m) = |t^2 - t - m h^-2|^-1`.
pub fn lambda_bound(t: f64, m: f64, h: f64) -> Result<f64> {
    t_pm(m, h)?;
    let q = (t * t - t - m / (h * h)).abs();
    if q == 0.0 {
        return Err(Error::Domain(format!("t = {t} is a root t_pm(m)")));
    }
    Ok(1.0 / q)
}

/// The line used for channel `m`: `-1/2` up to `m = h^2/4`, then `1`.
pub fn t0_rule(m: f64, h: f64) -> f64 {
    if m <= 0.25 * h * h {
        -0.5
    } else {
        1.0
    }
}

/// `sup_tau |(tau + i t0)^2 - i (tau + i t0) + m h^-2|^-1`, from the closed
/// minimisation of `(a + tau^2)^2 + tau^2 (2 t0 - 1)^2`, `a = t0 - t0^2 + m h^-2`.
pub fn multiplier_sup(t0: f64, m: f64, h: f64) -> Result<f64> {
    lambda_bound(t0, m, h)?;
    let a = t0 - t0 * t0 + m / (h * h);
    let b = (2.0 * t0 - 1.0).powi(2);
    let s = (-a - 0.5 * b).max(0.0);
    let min = (a + s).powi(2) + s * b;
    Ok(1.0 / min.sqrt())
}

/// The data `t_pm`, `Lambda` for one `(m, h, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierSpec {
    pub m: f64,
    pub h: f64,
    pub t: f64,
    pub t_minus: f64,
    pub t_plus: f64,
    pub lambda_bound: f64,
}

impl MultiplierSpec {
    pub fn new(m: f64, h: f64, t: f64) -> Result<MultiplierSpec> {
        let (t_minus, t_plus) = t_pm(m, h)?;
        Ok(MultiplierSpec {
            m,
            h,
            t,
            t_minus,
            t_plus,
            lambda_bound: lambda_bound(t, m, h)?,
        })
    }

    /// `|sigma^2 - i sigma + m h^-2|^-1` at `sigma = tau + i t`.
    pub fn multiplier(&self, tau: f64) -> f64 {
        let s = C::new(tau, self.t);
        1.0 / (s * s - C::new(0.0, 1.0) * s + self.m / (self.h * self.h)).norm()
    }
}

/// The residue part of the decomposition, as a closed-form function of `r`.
#[derive(Debug, Clone, PartialEq)]
pub enum PiPart {
    Zero,
    /// `sum c_k r^(p_k)`.
    Powers(Vec<(f64, C)>),
    /// `r^(1/2) (a log r - b)` at the double root `m = -h^2/4`.
    LogPair { a: C, b: C },
}

impl PiPart {
    pub fn eval(&self, r: f64) -> C {
        match self {
            PiPart::Zero => C::new(0.0, 0.0),
            PiPart::Powers(terms) => terms.iter().map(|&(p, c)| c * r.powf(p)).sum(),
            PiPart::LogPair { a, b } => (a * r.ln() - b) * r.sqrt(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub t0: f64,
    pub t_minus: f64,
    pub t_plus: f64,
    pub pi_part: PiPart,
    pub e_part: LogGrid,
    /// Conditioning and leakage notes; never fatal.
    pub warnings: Vec<String>,
}

impl Decomposition {
    /// `Pi + E` on the grid of `e_part`.
    pub fn reconstruct(&self) -> LogGrid {
        self.e_part.map(|x, e| e + self.pi_part.eval(x.exp()))
    }
}

/// Splits `u` given `v = r^2 Q_m u` along `Im sigma = t0`.
pub fn decompose(v: &LogGrid, t0: f64, m: f64, h: f64) -> Result<Decomposition> {
    let (tm, tp) = t_pm(m, h)?;
    lambda_bound(t0, m, h)?;
    let mu = m / (h * h);
    let mut warnings = Vec::new();
    let gap = (t0 - tm).abs().min((t0 - tp).abs());
    if gap < NEAR_POLE {
        warnings.push(format!("t0 = {t0} within {gap:.1e} of a root; E is ill-conditioned"));
    }
    if tp - tm < NEAR_POLE && tp > tm {
        warnings.push(format!(
            "roots t_pm = {tm}, {tp} nearly coincide; residue terms are ill-conditioned"
        ));
    }
    let line = mellin_forward(v, t0);
    if let Some(l) = line.leakage {
        warnings.push(format!("e^(-t0 x) v reaches {l:.1e} of its peak at the grid ends"));
    }
    let i = C::new(0.0, 1.0);
    let e_part = mellin_inverse(&line.multiply(|s| 1.0 / (s * s - i * s + mu)));
    let mv = |t: f64| v.mellin_at(C::new(0.0, t));
    let pi_part = if t0 < tm {
        PiPart::Zero
    } else if tp == tm {
        let logv = v.map(|x, z| z * x);
        PiPart::LogPair {
            a: mv(0.5),
            b: logv.mellin_at(C::new(0.0, 0.5)),
        }
    } else if t0 < tp {
        PiPart::Powers(vec![(tm, mv(tm) / (tm - tp))])
    } else {
        PiPart::Powers(vec![(tm, mv(tm) / (tm - tp)), (tp, mv(tp) / (tp - tm))])
    };
    Ok(Decomposition {
        t0,
        t_minus: tm,
        t_plus: tp,
        pi_part,
        e_part,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_jy_scaled;

    const N: usize = 4096;

    /// Logistic cutoff in `x`: 1 for `x << xc`, 0 for `x >> xc`, with
    /// its first two `x`-derivatives.
    fn cutoff(x: f64, xc: f64, w: f64) -> (f64, f64, f64) {
        let c = 1.0 / (1.0 + ((x - xc) / w).exp());
        let c1 = -c * (1.0 - c) / w;
        let c2 = -c1 * (1.0 - 2.0 * c) / w;
        (c, c1, c2)
    }

    /// `u = f chi` and `v = r^2 Q_m u = chi L f + chi' (f - 2 f') - chi'' f`
    /// on the log grid, where `f` returns `(f, f_x, L f)` with
    /// `L = -d_x^2 + d_x + mu` applied in closed form (no cancellation).
    fn manufacture(f: impl Fn(f64) -> (f64, f64, f64)) -> (LogGrid, LogGrid) {
        let u = LogGrid::sample(-40.0, 40.0, N, |r| {
            let x = r.ln();
            C::new(f(x).0 * cutoff(x, 0.0, 0.2).0, 0.0)
        })
        .unwrap();
        let v = u.map(|x, _| {
            let (f0, f1, lf) = f(x);
            let (c0, c1, c2) = cutoff(x, 0.0, 0.2);
            C::new(c0 * lf + c1 * (f0 - 2.0 * f1) - c2 * f0, 0.0)
        });
        (u, v)
    }

    /// `e^(p x)` with `L` applied; `p` a root gives `L f = 0`.
    fn power(mu: f64, p: f64) -> impl Fn(f64) -> (f64, f64, f64) {
        move |x| {
            let e = (p * x).exp();
            (e, p * e, (-p * p + p + mu) * e)
        }
    }

    fn window_error(d: &Decomposition, u: &LogGrid) -> f64 {
        let rec = d.reconstruct();
        let (mut err, mut peak) = (0.0f64, 0.0f64);
        for j in 0..u.len() {
            let x = u.x(j);
            if (-5.0..=2.0).contains(&x) {
                err = err.max((rec.samples[j] - u.samples[j]).norm());
                peak = peak.max(u.samples[j].norm());
            }
        }
        err / peak
    }

    #[test]
    fn t_pm_and_lambda_examples() {
        let h = 0.05;
        assert_eq!(t_pm(0.0, h).unwrap(), (0.0, 1.0));
        assert_eq!(t_pm(-0.25 * h * h, h).unwrap(), (0.5, 0.5));
        let (a, b) = t_pm(2.0 * h * h, h).unwrap();
        assert!((a + 1.0).abs() < 1e-14 && (b - 2.0).abs() < 1e-14);
        assert!(t_pm(-0.3 * h * h, h).is_err());
        assert!((lambda_bound(-0.5, -0.25 * h * h, h).unwrap() - 1.0).abs() < 1e-14);
        assert!((lambda_bound(1.0, 4.0 * h * h, h).unwrap() - 0.25).abs() < 1e-14);
        assert!(lambda_bound(2.0, 2.0 * h * h, h).is_err());
        for k in 0..200 {
            let m = h * h * (0.25 + k as f64 * 0.5);
            let mu = m / (h * h);
            let l = lambda_bound(1.0, m, h).unwrap();
            assert!(l * (1.0 + mu * mu).sqrt() <= 17f64.sqrt() + 1e-12);
        }
    }

    #[test]
    fn roots_sum_and_product() {
        for &mu in &[-0.25, -0.1, 0.0, 0.3, 7.0, 1e4] {
            let (a, b) = t_pm(mu, 1.0).unwrap();
            assert!((a + b - 1.0).abs() < 1e-12);
            assert!((a * b + mu).abs() < 1e-9 * (1.0 + mu.abs()));
        }
    }

    #[test]
    fn multiplier_sup_matches_sampling() {
        let h = 0.05;
        for &(m, t0) in &[(0.0, -0.5), (h * h, 1.0), (2.0 * h * h, 0.0), (-0.2 * h * h, 1.5), (0.5, 0.3)] {
            let spec = MultiplierSpec::new(m, h, t0).unwrap();
            let sampled = (0..200001).map(|k| spec.multiplier(-100.0 + k as f64 * 1e-3)).fold(0.0, f64::max);
            let sup = multiplier_sup(t0, m, h).unwrap();
            assert!(sampled <= sup * (1.0 + 1e-12) && sampled >= sup * (1.0 - 1e-6), "m={m} t0={t0}");
        }
    }

    #[test]
    fn bump_below_both_roots_has_no_residues() {
        let mu = 2.0;
        let (u, v) = manufacture(|x| {
            let g = (-(x + 1.0).powi(2) / 0.5).exp();
            let (g1, g2) = (-4.0 * (x + 1.0) * g, (16.0 * (x + 1.0).powi(2) - 4.0) * g);
            (g, g1, -g2 + g1 + mu * g)
        });
        let d = decompose(&v, -2.0, mu, 1.0).unwrap();
        assert_eq!(d.pi_part, PiPart::Zero);
        let err = window_error(&d, &u);
        assert!(err < 1e-6, "{err:e} {:?}", d.pi_part);
        assert!(d.warnings.is_empty());
    }

    #[test]
    fn one_residue_between_roots() {
        let (mu, h) = (2.0, 1.0);
        let (tm, _) = t_pm(mu, h).unwrap();
        let (u, v) = manufacture(power(mu, tm));
        let d = decompose(&v, 0.5, mu, h).unwrap();
        match &d.pi_part {
            PiPart::Powers(t) => {
                assert_eq!(t.len(), 1);
                // u = r^(t_-) near 0, so the coefficient is 1
                assert!((t[0].1 - 1.0).norm() < 1e-8);
            }
            p => panic!("{p:?}"),
        }
        let err = window_error(&d, &u);
        assert!(err < 1e-6, "{err:e} {:?}", d.pi_part);
    }

    #[test]
    fn two_residues_above_both_roots() {
        let mu = 2.0;
        let (u, v) = manufacture(|x| {
            let (a, b) = (power(mu, -1.0)(x), power(mu, 2.0)(x));
            (a.0 + b.0, a.1 + b.1, a.2 + b.2)
        });
        let d = decompose(&v, 3.5, mu, 1.0).unwrap();
        assert!(matches!(&d.pi_part, PiPart::Powers(t) if t.len() == 2));
        let err = window_error(&d, &u);
        assert!(err < 1e-6, "{err:e} {:?}", d.pi_part);
    }

    #[test]
    fn double_root_log_pair() {
        let h = 0.1;
        let m = -0.25 * h * h;
        let (u, v) = manufacture(|x| {
            // r^(1/2) (1 + log r); L annihilates both r^(1/2) and r^(1/2) log r
            let e = (0.5 * x).exp();
            (e * (1.0 + x), e * (1.5 + 0.5 * x), 0.0)
        });
        let d = decompose(&v, 1.5, m, h).unwrap();
        assert!(matches!(d.pi_part, PiPart::LogPair { .. }));
        let err = window_error(&d, &u);
        assert!(err < 1e-6, "{err:e} {:?}", d.pi_part);
        let d = decompose(&v, 0.0, -0.2499999 * h * h, h).unwrap();
        assert!(!d.warnings.is_empty());
    }

    #[test]
    fn e_part_bounded_by_lambda() {
        let h = 0.05;
        let (_, v) = manufacture(|x| {
            let g = (-(x + 1.0).powi(2)).exp();
            let (g1, g2) = (-2.0 * (x + 1.0) * g, (4.0 * (x + 1.0).powi(2) - 2.0) * g);
            (g, g1, -g2 + g1)
        });
        for &m in &[-0.25 * h * h + 1e-6, 0.0, h * h, 10.0 * h * h, 100.0 * h * h] {
            let t0 = t0_rule(m, h);
            // v for this m: only the weighted norm ratio matters, any v works
            let d = decompose(&v, t0, m, h).unwrap();
            let ratio = d.e_part.weighted_norm(t0) / v.weighted_norm(t0);
            assert!(ratio <= lambda_bound(t0, m, h).unwrap() * (1.0 + 1e-9), "m = {m}");
        }
    }

    #[test]
    fn residue_vanishes_for_regular_solutions() {
        // u = r^(1/2) J_nu(lambda r) solves r^2 Q_m u = lambda^2 r^2 u
        let h = 0.05;
        for &mh in &[1.0f64, 10.0, 100.0] {
            let m = mh * h * h;
            let mu = mh;
            let nu = (mu + 0.25).sqrt();
            let lam = 1.0 / h;
            let delta = 0.1 * h * (1.0 + mu * mu).sqrt().sqrt();
            let xc = (1.5 * delta).ln();
            // the weight r^(-t_-) grows like r^(nu - 1/2), so the cutoff must
            // decay faster than that beyond xc
            let v = LogGrid::sample(-40.0, 8.0, N, |r| {
                let x = r.ln();
                if x > xc + 4.0 {
                    return C::new(0.0, 0.0);
                }
                let (s, _) = bessel_jy_scaled(nu, C::new(lam * r, 0.0)).unwrap();
                let u = s.j.value().re * r.sqrt();
                let ux = (s.j.value().re * 0.5 + lam * r * s.j_prime.value().re) * r.sqrt();
                let (c0, c1, c2) = cutoff(x, xc, 0.04);
                C::new(c0 * lam * lam * r * r * u - c2 * u - 2.0 * c1 * ux + c1 * u, 0.0)
            })
            .unwrap();
            let (tm, _) = t_pm(m, h).unwrap();
            let scale = v.map(|_, z| C::new(z.norm(), 0.0)).mellin_at(C::new(0.0, tm)).norm();
            let res = v.mellin_at(C::new(0.0, tm)).norm();
            assert!(res < 1e-8 * scale, "m = {mh} h^2: {res:e} vs {scale:e}");
        }
    }
}
