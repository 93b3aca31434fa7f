//! Compactly supported, piecewise-constant radial potentials and the
//! geometric functionals `R0`, `M0`, `R1`, `M+` built from them.

use crate::{Error, Result};

/// `V(r) = values[i]` on `(breakpoints[i-1], breakpoints[i]]` (with an
/// implicit left end `0` for the first piece) and `V = 0` beyond the last
/// breakpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPotential {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl RadialPotential {
    /// Builds a potential from `(r_left, r_right, value)` pieces. Pieces must
    /// be sorted and non-overlapping; gaps are filled with zero.
    pub fn from_pieces(pieces: &[(f64, f64, f64)]) -> Result<Self> {
        let mut breakpoints = Vec::new();
        let mut values = Vec::new();
        let mut edge = 0.0;
        for &(l, r, v) in pieces {
            if !(l.is_finite() && r.is_finite() && v.is_finite()) {
                return Err(Error::Precondition(format!("non-finite piece ({l}, {r}, {v})")));
            }
            if l < 0.0 || r <= l {
                return Err(Error::Precondition(format!("invalid piece ({l}, {r}]")));
            }
            if l < edge {
                return Err(Error::Precondition(format!(
                    "pieces must be sorted and non-overlapping; ({l}, {r}] starts before {edge}"
                )));
            }
            if l > edge {
                breakpoints.push(l);
                values.push(0.0);
            }
            breakpoints.push(r);
            values.push(v);
            edge = r;
        }
        Ok(Self::normalised(breakpoints, values))
    }

    /// Drops trailing zero pieces and merges equal neighbours.
    fn normalised(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        let mut b: Vec<f64> = Vec::new();
        let mut v: Vec<f64> = Vec::new();
        for (r, x) in breakpoints.into_iter().zip(values) {
            if let (Some(last_v), Some(last_b)) = (v.last(), b.last_mut()) {
                if *last_v == x {
                    *last_b = r;
                    continue;
                }
            }
            b.push(r);
            v.push(x);
        }
        while v.last() == Some(&0.0) {
            v.pop();
            b.pop();
        }
        RadialPotential {
            breakpoints: b,
            values: v,
        }
    }

    pub fn zero() -> Self {
        RadialPotential {
            breakpoints: vec![],
            values: vec![],
        }
    }

    /// `V = -depth` on `(0, radius]`.
    pub fn well(depth: f64, radius: f64) -> Result<Self> {
        Self::from_pieces(&[(0.0, radius, -depth)])
    }

    /// `V = height` on `(0, radius]`.
    pub fn barrier(height: f64, radius: f64) -> Result<Self> {
        Self::from_pieces(&[(0.0, radius, height)])
    }

    /// Parses `zero`, `well:<depth>:<radius>` or `barrier:<height>:<radius>`.
    pub fn preset(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.trim().split(':').collect();
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{s}' in potential preset '{spec}'")))
        };
        match parts.as_slice() {
            ["zero"] => Ok(Self::zero()),
            ["well", d, r] => Self::well(num(d)?, num(r)?),
            ["barrier", h, r] => Self::barrier(num(h)?, num(r)?),
            _ => Err(Error::Parse(format!("unknown potential preset '{spec}'"))),
        }
    }

    /// Parses the text format: one `r_left r_right value` piece per line;
    /// blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pieces = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            if f.len() != 3 {
                return Err(Error::Parse(format!(
                    "line {}: expected 'r_left r_right value', got {} fields",
                    lineno + 1,
                    f.len()
                )));
            }
            pieces.push((f[0], f[1], f[2]));
        }
        Self::from_pieces(&pieces)
    }

    /// Serialises to the text format accepted by [`RadialPotential::parse`].
    pub fn to_text(&self) -> String {
        self.pieces()
            .map(|(l, r, v)| format!("{l:e} {r:e} {v:e}\n"))
            .collect()
    }

    /// `(r_left, r_right, value)` for every piece up to the support radius.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints.iter().enumerate().map(move |(i, &r)| {
            let l = if i == 0 { 0.0 } else { self.breakpoints[i - 1] };
            (l, r, self.values[i])
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `V(r)`, with pieces closed on the right.
    pub fn value_at(&self, r: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b < r);
        self.values.get(i).copied().unwrap_or(0.0)
    }

    /// `V` just to the right of `r` (the piece `(r, r + 0]` belongs to).
    pub fn value_right_of(&self, r: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b <= r);
        self.values.get(i).copied().unwrap_or(0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Radius of the essential support, `R0`.
    pub fn support_radius(&self) -> f64 {
        self.breakpoints.last().copied().unwrap_or(0.0)
    }

    /// Smallest `m` with `V + m r^-2 - E >= 0` on a neighbourhood of
    /// `(0, R0]`, i.e. `max(E R0^2, max_i r_i^2 (E - v_i)_+)`.
    pub fn m_zero(&self, e: f64) -> f64 {
        let r0 = self.support_radius();
        self.pieces()
            .map(|(_, r, v)| r * r * (e - v).max(0.0))
            .fold(e * r0 * r0, f64::max)
    }

    /// `R1 = sqrt(M0 / E)`.
    pub fn r_one(&self, e: f64) -> f64 {
        (self.m_zero(e) / e).sqrt()
    }

    /// `M+ = M0 + E (R^2 - R1^2) / 2` for an exterior radius `R >= R1`.
    pub fn m_plus(&self, e: f64, r: f64) -> Result<f64> {
        let r1 = self.r_one(e);
        if !(r >= r1) {
            return Err(Error::Precondition(format!(
                "exterior radius {r} must exceed R1 = {r1}"
            )));
        }
        Ok(self.m_zero(e) + e * (r * r - r1 * r1) / 2.0)
    }
}

/// A compact energy interval `[e_min, e_max]` inside `(0, inf)` with samples.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyWindow {
    pub e_min: f64,
    pub e_max: f64,
    pub samples: Vec<f64>,
}

impl EnergyWindow {
    pub fn new(e_min: f64, e_max: f64, count: usize) -> Result<Self> {
        if !(e_min > 0.0 && e_min <= e_max && e_max.is_finite()) {
            return Err(Error::Precondition(format!(
                "energy window needs 0 < e_min <= e_max, got [{e_min}, {e_max}]"
            )));
        }
        let samples = match count {
            0 => vec![],
            1 => vec![e_min],
            n => (0..n)
                .map(|i| e_min + (e_max - e_min) * i as f64 / (n - 1) as f64)
                .collect(),
        };
        Ok(EnergyWindow {
            e_min,
            e_max,
            samples,
        })
    }
}
