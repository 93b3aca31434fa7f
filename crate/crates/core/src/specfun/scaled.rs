use num_complex::Complex64;
use std::ops::{Div, Mul, Neg};

/// A complex number stored as `phase * exp(log_mag)` with `|phase| = 1`.
///
/// Used wherever Bessel values or ODE solutions leave the `f64` range.
/// Zero is represented by `log_mag = -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub log_mag: f64,
    pub phase: Complex64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        log_mag: f64::NEG_INFINITY,
        phase: Complex64::new(1.0, 0.0),
    };
    pub const ONE: Scaled = Scaled {
        log_mag: 0.0,
        phase: Complex64::new(1.0, 0.0),
    };

    pub fn new(z: Complex64) -> Self {
        Self::from_parts(z, 0.0)
    }

    /// `mantissa * exp(ln_scale)`.
    pub fn from_parts(mantissa: Complex64, ln_scale: f64) -> Self {
        let a = mantissa.norm();
        if a.is_nan() {
            return Scaled {
                log_mag: f64::NAN,
                phase: Complex64::new(f64::NAN, f64::NAN),
            };
        }
        if a == 0.0 {
            return Self::ZERO;
        }
        if a.is_infinite() {
            let m = mantissa.re.abs().max(mantissa.im.abs());
            if m.is_finite() {
                // |re|^2 + |im|^2 overflowed; the components are still finite
                return Self::from_parts(mantissa / m, ln_scale + m.ln());
            }
            return Scaled {
                log_mag: f64::INFINITY,
                phase: Complex64::new(1.0, 0.0),
            };
        }
        Scaled {
            log_mag: a.ln() + ln_scale,
            phase: mantissa / a,
        }
    }

    pub fn from_real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0))
    }

    /// `exp(w)` for complex `w`.
    pub fn exp(w: Complex64) -> Self {
        Scaled {
            log_mag: w.re,
            phase: Complex64::from_polar(1.0, w.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn is_finite(&self) -> bool {
        !self.log_mag.is_nan() && self.log_mag != f64::INFINITY && self.phase.re.is_finite()
    }

    /// Plain value; may underflow to zero or overflow to infinity.
    pub fn value(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        self.phase * self.log_mag.exp()
    }

    /// `self * exp(-ln_scale)` as a plain value.
    pub fn value_scaled(&self, ln_scale: f64) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        self.phase * (self.log_mag - ln_scale).exp()
    }

    pub fn abs(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.log_mag.exp()
        }
    }

    pub fn log10_abs(&self) -> f64 {
        self.log_mag / std::f64::consts::LN_10
    }

    pub fn conj(&self) -> Self {
        Scaled {
            log_mag: self.log_mag,
            phase: self.phase.conj(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        *self * Scaled::new(c)
    }

    pub fn add(&self, other: &Scaled) -> Scaled {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let l = self.log_mag.max(other.log_mag);
        let s = self.phase * (self.log_mag - l).exp() + other.phase * (other.log_mag - l).exp();
        Scaled::from_parts(s, l)
    }

    pub fn sub(&self, other: &Scaled) -> Scaled {
        self.add(&(-*other))
    }

    /// `|a - b| / |b|` computed without leaving log space.
    pub fn rel_diff(&self, b: &Scaled) -> f64 {
        if b.is_zero() {
            return if self.is_zero() { 0.0 } else { f64::INFINITY };
        }
        let d = self.sub(b);
        if d.is_zero() {
            0.0
        } else {
            (d.log_mag - b.log_mag).exp()
        }
    }

    pub fn inv(&self) -> Scaled {
        Scaled {
            log_mag: -self.log_mag,
            phase: self.phase.conj(),
        }
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        if self.is_zero() || rhs.is_zero() {
            return Scaled::ZERO;
        }
        let p = self.phase * rhs.phase;
        Scaled {
            log_mag: self.log_mag + rhs.log_mag,
            phase: p / p.norm(),
        }
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        self * rhs.inv()
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled {
            log_mag: self.log_mag,
            phase: -self.phase,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_arithmetic() {
        let a = Scaled::new(Complex64::new(3.0, -4.0));
        assert!((a.log_mag - 5f64.ln()).abs() < 1e-15);
        assert!((a.value() - Complex64::new(3.0, -4.0)).norm() < 1e-14);
        let b = Scaled::from_parts(Complex64::new(1.0, 0.0), 1000.0);
        let c = (a * b) / b;
        assert!((c.value() - a.value()).norm() < 1e-12);
        let s = a.add(&a.scale(Complex64::new(-1.0, 0.0)));
        assert!(s.abs() < 1e-14);
    }

    #[test]
    fn huge_values_stay_finite() {
        let big = Scaled::from_parts(Complex64::new(2.0, 0.0), 5000.0);
        let sum = big.add(&big);
        assert!((sum.log_mag - (4f64.ln() + 5000.0)).abs() < 1e-12);
        assert!((big.value_scaled(5000.0) - 2.0).norm() < 1e-11);
    }
}
