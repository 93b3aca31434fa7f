use radres_core::fit::{fit_exponential_rate, fit_power_law, FitResult};
use radres_core::mellin::{
    decompose, lambda_bound, mellin_forward, mellin_inverse, t0_rule, LogGrid, MultiplierSpec,
};
use radres_core::potential::RadialPotential;
use radres_core::radial_solver::{residual, Channel, GridSpec, SolutionPair};
use radres_core::resolvent::{channel_m, full_norm_nd, weighted_norm_1d, FullNorm, WeightedNormRequest};
use radres_core::specfun::{bessel_jy_scaled, envelope_ratios};
use radres_core::{Complex64 as C, Error, Result};

use crate::config::{Command, Params};
use crate::output::{cell, Table};
use crate::plot::columns;

const DEFAULT_DRIFT_TOL: f64 = 1e-6;

fn need<T: Clone>(x: &Option<T>, name: &str) -> Result<T> {
    x.clone().ok_or_else(|| Error::Precondition(format!("missing --{name}")))
}

/// A preset name, else a potential file.
pub fn load_potential(spec: &str) -> Result<RadialPotential> {
    match RadialPotential::preset(spec) {
        Ok(v) => Ok(v),
        Err(_) if std::path::Path::new(spec).is_file() => {
            let text = std::fs::read_to_string(spec)
                .map_err(|e| Error::Precondition(format!("cannot read {spec}: {e}")))?;
            RadialPotential::parse(&text)
        }
        Err(e) => Err(e),
    }
}

fn grid_spec(p: &Params) -> GridSpec {
    match p.r_max {
        Some(r) => GridSpec::default().with_r_max(r),
        None => GridSpec::default(),
    }
}

fn norm_request(p: &Params) -> Result<WeightedNormRequest> {
    WeightedNormRequest::new(p.s.unwrap_or(1.0), p.exterior_r, grid_spec(p))
}

fn table_for(cmd: Command, p: &Params) -> Table {
    let mut t = Table::new(columns(cmd));
    t.meta("command", cmd.name());
    for (k, v) in p.entries() {
        if k != "out" {
            t.meta(k, v);
        }
    }
    t
}

pub fn run(cmd: Command, p: &Params) -> Result<Table> {
    match cmd {
        Command::Solve => solve(p),
        Command::Norm => norm(p),
        Command::SweepH => sweep_h(p),
        Command::SweepM => sweep_m(p),
        Command::MellinCheck => mellin_check(p),
        Command::BesselCheck => bessel_check(p),
    }
}

fn solve(p: &Params) -> Result<Table> {
    let v = load_potential(&need(&p.potential, "potential")?)?;
    let ch = Channel::new(p.n.unwrap_or(3), need(&p.h, "h")?, need(&p.e, "E")?, p.eps.unwrap_or(0.0), need(&p.m, "m")?)?;
    let pair = SolutionPair::build_on(&ch, &v, &grid_spec(p))?;
    pair.check_drift(p.drift_tol.unwrap_or(DEFAULT_DRIFT_TOL))?;
    let mut t = table_for(Command::Solve, p);
    let w = pair.wronskian.value();
    t.meta("W_re", w.re)
        .meta("W_im", w.im)
        .meta("drift", pair.wronskian_drift)
        .meta("residual_u0", residual(&pair.u0, &ch, &v))
        .meta("residual_u1", residual(&pair.u1, &ch, &v));
    for (i, &r) in pair.grid().nodes.iter().enumerate() {
        let (a, b) = (pair.u0.val[i], pair.u1.val[i]);
        let (av, bv) = (a.value(), b.value());
        t.row(vec![
            cell(r),
            cell(av.re),
            cell(av.im),
            cell(bv.re),
            cell(bv.im),
            cell(a.log10_abs()),
            cell(b.log10_abs()),
        ]);
    }
    Ok(t)
}

/// First `k` with `m_k >= 2 max(M+, E)`: past it channel norms follow the
/// large-`m` decay.
fn default_k_max(v: &RadialPotential, e: f64, h: f64, n: usize, req: &WeightedNormRequest) -> Result<usize> {
    let r = req.exterior_r.unwrap_or_else(|| v.r_one(e));
    let target = 2.0 * v.m_plus(e, r)?.max(e);
    Ok((0..).find(|&k| channel_m(n, h, k) >= target).unwrap_or(0))
}

fn full_norm(p: &Params, h: f64) -> Result<FullNorm> {
    let v = load_potential(&need(&p.potential, "potential")?)?;
    let e = need(&p.e, "E")?;
    let n = p.n.unwrap_or(3);
    let req = norm_request(p)?;
    let k_max = match p.k_max {
        Some(k) => k,
        None => default_k_max(&v, e, h, n, &req)?,
    };
    full_norm_nd(&v, e, h, &req, n, k_max)
}

fn norm(p: &Params) -> Result<Table> {
    let f = full_norm(p, need(&p.h, "h")?)?;
    let mut t = table_for(Command::Norm, p);
    t.meta("stop", format!("{:?}", f.stop).to_lowercase())
        .meta("m_plus", f.m_plus)
        .meta("argmax_k", f.channels[f.argmax_k].k)
        .meta("r_max", f.estimate.r_max);
    for c in &f.channels {
        t.row(vec![cell(c.k), cell(c.m), cell(c.multiplicity), cell(c.norm.value), cell(c.norm.tail_bound)]);
    }
    let best = &f.channels[f.argmax_k];
    t.row(vec![
        "summary".into(),
        cell(best.m),
        cell(best.multiplicity),
        cell(f.estimate.value),
        cell(f.estimate.tail_bound),
    ]);
    Ok(t)
}

fn fit_meta(t: &mut Table, prefix: &str, f: Result<FitResult>) {
    if let Ok(f) = f {
        t.meta(&format!("{prefix}_rate"), f.rate).meta(&format!("{prefix}_r2"), f.r_squared);
    }
}

fn sweep_h(p: &Params) -> Result<Table> {
    let hs = need(&p.h_grid, "h-grid")?.values();
    let mut t = table_for(Command::SweepH, p);
    let mut pts = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for h in hs {
        let f = full_norm(p, h)?;
        let n = f.estimate.value;
        pts.push((h, n));
        best = best.max(h * n.ln());
        let slope = if pts.len() >= 4 { fit_power_law(&pts).map(|f| f.rate).unwrap_or(f64::NAN) } else { f64::NAN };
        t.row(vec![cell(h), cell(n), cell(h * n.ln()), cell(slope)]);
    }
    fit_meta(&mut t, "power_law", fit_power_law(&pts));
    fit_meta(&mut t, "exponential", fit_exponential_rate(&pts));
    t.meta("max_h_log_norm", best);
    Ok(t)
}

fn sweep_m(p: &Params) -> Result<Table> {
    let v = load_potential(&need(&p.potential, "potential")?)?;
    let (h, e) = (need(&p.h, "h")?, need(&p.e, "E")?);
    let req = norm_request(p)?;
    let mut t = table_for(Command::SweepM, p);
    for m in need(&p.m_grid, "m-grid")?.values() {
        let ch = Channel::new(p.n.unwrap_or(3), h, e, 0.0, m)?;
        let pair = SolutionPair::build_on(&ch, &v, &req.grid_spec())?;
        let n = weighted_norm_1d(&pair, &req)?.value;
        t.row(vec![cell(m), cell(n), cell(h * n.ln() / (1.0 + m.abs().sqrt()))]);
    }
    Ok(t)
}

fn mellin_check(p: &Params) -> Result<Table> {
    let (m, h) = (need(&p.m, "m")?, need(&p.h, "h")?);
    let t0 = p.t0.unwrap_or_else(|| t0_rule(m, h));
    let mu = m / (h * h);
    // u = exp(-(x + 1)^2) on the log grid, v = r^2 Q_m u in closed form
    let u = LogGrid::sample(-40.0, 40.0, 4096, |r| C::new((-(r.ln() + 1.0).powi(2)).exp(), 0.0))?;
    let v = u.map(|x, _| {
        let y = x + 1.0;
        let g = (-y * y).exp();
        let (g1, g2) = (-2.0 * y * g, (4.0 * y * y - 2.0) * g);
        C::new(-g2 + g1 + mu * g, 0.0)
    });
    let line = mellin_forward(&u, t0);
    let parseval = (line.norm() - (2.0 * std::f64::consts::PI).sqrt() * u.weighted_norm(t0)).abs() / line.norm();
    let d = decompose(&v, t0, m, h)?;
    let rec = d.reconstruct();
    let (mut err, mut peak) = (0.0f64, 0.0f64);
    for j in 0..u.len() {
        if (-5.0..=5.0).contains(&u.x(j)) {
            err = err.max((rec.samples[j] - u.samples[j]).norm());
            peak = peak.max(u.samples[j].norm());
        }
    }
    let back = mellin_inverse(&line);
    let trip = (0..u.len())
        .map(|j| (back.samples[j] - u.samples[j]).norm() * (-t0 * u.x(j)).exp())
        .fold(0.0f64, f64::max);
    let lam = lambda_bound(t0, m, h)?;
    let spec = MultiplierSpec::new(m, h, t0)?;
    let mut t = table_for(Command::MellinCheck, p);
    t.meta("t0", t0).meta("round_trip_abs", trip).meta("warnings", d.warnings.len());
    let span = 20.0f64.max(4.0 * (mu.abs() + 1.0).sqrt());
    for i in 0..=200 {
        let tau = -span + 2.0 * span * i as f64 / 200.0;
        t.row(vec![cell(tau), cell(spec.multiplier(tau).abs()), cell(lam), cell(parseval), cell(err / peak)]);
    }
    Ok(t)
}

fn bessel_check(p: &Params) -> Result<Table> {
    let nus = need(&p.nu_grid, "nu-grid")?.values();
    let zs = need(&p.z_grid, "z-grid")?.values();
    let mut t = table_for(Command::BesselCheck, p);
    t.meta("argument", "nu*z");
    for &nu in &nus {
        if !(nu > 0.0) {
            return Err(Error::Precondition(format!("bessel-check uses the argument nu*z and needs nu > 0, got {nu}")));
        }
        for &z in &zs {
            let x = C::new(nu * z, 0.0);
            let (s, _) = bessel_jy_scaled(nu, x)?;
            let env = envelope_ratios(nu, z)?;
            t.row(vec![
                cell(nu),
                cell(z),
                cell(s.j.value().re),
                cell(s.y.value().re),
                cell(env.ratio_j),
                cell(env.ratio_y),
                cell(s.wronskian_relerr(x)),
            ]);
        }
    }
    Ok(t)
}
