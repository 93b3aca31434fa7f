//! Value grids given on the command line: `list:a,b,c`, `lin:a:b:n`,
//! `geom:a:b:n`. A bare number is a one-point list.

use radres_core::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ValueGrid {
    List(Vec<f64>),
    Lin { a: f64, b: f64, n: usize },
    Geom { a: f64, b: f64, n: usize },
}

fn num(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Parse(format!("bad number '{s}'")))
}

impl ValueGrid {
    pub fn parse(spec: &str) -> Result<ValueGrid> {
        let spec = spec.trim();
        let (kind, rest) = spec.split_once(':').unwrap_or(("list", spec));
        let g = match kind {
            "list" => ValueGrid::List(rest.split(',').map(num).collect::<Result<_>>()?),
            "lin" | "geom" => {
                let f: Vec<&str> = rest.split(':').collect();
                if f.len() != 3 {
                    return Err(Error::Parse(format!("'{spec}': expected {kind}:a:b:n")));
                }
                let (a, b) = (num(f[0])?, num(f[1])?);
                let n = f[2]
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("'{spec}': bad point count")))?;
                if kind == "lin" {
                    ValueGrid::Lin { a, b, n }
                } else {
                    ValueGrid::Geom { a, b, n }
                }
            }
            _ => return Err(Error::Parse(format!("unknown grid kind '{kind}' in '{spec}'"))),
        };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        match *self {
            ValueGrid::List(ref v) if v.is_empty() => Err(Error::Precondition("empty grid".into())),
            ValueGrid::Lin { n, .. } | ValueGrid::Geom { n, .. } if n == 0 => {
                Err(Error::Precondition("grid needs at least one point".into()))
            }
            ValueGrid::Geom { a, b, .. } if !(a > 0.0 && b > 0.0) => {
                Err(Error::Precondition("geometric grid needs positive end points".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let step = |n: usize, i: usize| if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
        match *self {
            ValueGrid::List(ref v) => v.clone(),
            ValueGrid::Lin { a, b, n } => (0..n).map(|i| a + (b - a) * step(n, i)).collect(),
            ValueGrid::Geom { a, b, n } => (0..n).map(|i| a * (b / a).powf(step(n, i))).collect(),
        }
    }
}

impl std::fmt::Display for ValueGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValueGrid::List(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "list:{}", s.join(","))
            }
            ValueGrid::Lin { a, b, n } => write!(f, "lin:{a}:{b}:{n}"),
            ValueGrid::Geom { a, b, n } => write!(f, "geom:{a}:{b}:{n}"),
        }
    }
}

impl std::str::FromStr for ValueGrid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ValueGrid::parse(s)
    }
}
