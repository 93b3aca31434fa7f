//! Experiment configuration: a `key = value` text file that can stand in
//! for command-line flags. Flags given on the command line win.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::Args;
use radres_core::{Error, Result};

use crate::grids::ValueGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Solve,
    Norm,
    SweepH,
    SweepM,
    MellinCheck,
    BesselCheck,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Solve,
        Command::Norm,
        Command::SweepH,
        Command::SweepM,
        Command::MellinCheck,
        Command::BesselCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Norm => "norm",
            Command::SweepH => "sweep-h",
            Command::SweepM => "sweep-m",
            Command::MellinCheck => "mellin-check",
            Command::BesselCheck => "bessel-check",
        }
    }

    pub fn from_name(s: &str) -> Result<Command> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown command '{s}'")))
    }
}

/// Every parameter any command reads. Unset fields fall back to the
/// command's defaults.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Params {
    /// Potential file, or a preset: `zero`, `well:<depth>:<radius>`, `barrier:<height>:<radius>`.
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long = "E")]
    pub e: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    /// Space dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Weight exponent in (1/2, 1].
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long = "exterior-R")]
    pub exterior_r: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Highest angular degree; by default the first k with m_k >= 2 M+.
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub h_grid: Option<ValueGrid>,
    #[arg(long)]
    pub m_grid: Option<ValueGrid>,
    #[arg(long)]
    pub nu_grid: Option<ValueGrid>,
    #[arg(long)]
    pub z_grid: Option<ValueGrid>,
    /// Wronskian drift tolerance (exit code 3 beyond it).
    #[arg(long)]
    pub drift_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub params: Params,
}

const KEYS: [&str; 17] = [
    "potential", "h", "E", "eps", "m", "n", "s", "exterior_R", "r_max", "k_max", "t0", "h_grid", "m_grid",
    "nu_grid", "z_grid", "drift_tol", "out",
];

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse::<T>().map_err(|_| Error::Parse(format!("bad value '{v}' for '{key}'")))
}

impl Params {
    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "potential" => self.potential = Some(v.to_string()),
            "h" => self.h = Some(parse_num(key, v)?),
            "E" => self.e = Some(parse_num(key, v)?),
            "eps" => self.eps = Some(parse_num(key, v)?),
            "m" => self.m = Some(parse_num(key, v)?),
            "n" => self.n = Some(parse_num(key, v)?),
            "s" => self.s = Some(parse_num(key, v)?),
            "exterior_R" => self.exterior_r = Some(parse_num(key, v)?),
            "r_max" => self.r_max = Some(parse_num(key, v)?),
            "k_max" => self.k_max = Some(parse_num(key, v)?),
            "t0" => self.t0 = Some(parse_num(key, v)?),
            "h_grid" => self.h_grid = Some(ValueGrid::parse(v)?),
            "m_grid" => self.m_grid = Some(ValueGrid::parse(v)?),
            "nu_grid" => self.nu_grid = Some(ValueGrid::parse(v)?),
            "z_grid" => self.z_grid = Some(ValueGrid::parse(v)?),
            "drift_tol" => self.drift_tol = Some(parse_num(key, v)?),
            "out" => self.out = Some(v.to_string()),
            _ => return Err(Error::Parse(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    /// Set entries as `(key, value)` in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        fn s<T: ToString>(x: &Option<T>) -> Option<String> {
            x.as_ref().map(|v| v.to_string())
        }
        let vals = [
            s(&self.potential),
            s(&self.h),
            s(&self.e),
            s(&self.eps),
            s(&self.m),
            s(&self.n),
            s(&self.s),
            s(&self.exterior_r),
            s(&self.r_max),
            s(&self.k_max),
            s(&self.t0),
            s(&self.h_grid),
            s(&self.m_grid),
            s(&self.nu_grid),
            s(&self.z_grid),
            s(&self.drift_tol),
            s(&self.out),
        ];
        KEYS.iter().zip(vals).filter_map(|(k, v)| v.map(|v| (*k, v))).collect()
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: Params) -> Params {
        Params {
            potential: self.potential.or(base.potential),
            h: self.h.or(base.h),
            e: self.e.or(base.e),
            eps: self.eps.or(base.eps),
            m: self.m.or(base.m),
            n: self.n.or(base.n),
            s: self.s.or(base.s),
            exterior_r: self.exterior_r.or(base.exterior_r),
            r_max: self.r_max.or(base.r_max),
            k_max: self.k_max.or(base.k_max),
            t0: self.t0.or(base.t0),
            h_grid: self.h_grid.or(base.h_grid),
            m_grid: self.m_grid.or(base.m_grid),
            nu_grid: self.nu_grid.or(base.nu_grid),
            z_grid: self.z_grid.or(base.z_grid),
            drift_tol: self.drift_tol.or(base.drift_tol),
            out: self.out.or(base.out),
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected 'key = value'", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if map.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate key '{k}'", i + 1)));
            }
        }
        let command = Command::from_name(
            &map.remove("command")
                .ok_or_else(|| Error::Parse("config needs a 'command' key".into()))?,
        )?;
        let mut params = Params::default();
        for (k, v) in &map {
            params.set(k, v)?;
        }
        Ok(ExperimentConfig { command, params })
    }

    pub fn serialize(&self) -> String {
        let mut s = format!("command = {}\n", self.command.name());
        for (k, v) in self.params.entries() {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}
