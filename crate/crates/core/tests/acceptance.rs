//! Acceptance suite: one line per criterion, `PASS` or `FAIL`, with timing.
//!
//! Run with `cargo test -p radres-core --test acceptance -- --nocapture`
//! to see the report.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{rngs::StdRng, Rng, SeedableRng};
use radres_core::fit::{fit_exponential_rate, fit_power_law, upper_envelope};
use radres_core::mellin::{
    decompose, lambda_bound, mellin_forward, mellin_inverse, multiplier_sup, t0_rule, t_pm, LogGrid,
    PiPart,
};
use radres_core::potential::RadialPotential;
use radres_core::radial_solver::{check_u0_monotone, Channel, GridFunction, GridSpec, SolutionPair};
use radres_core::resolvent::{apply_resolvent_1d, full_norm_nd, weighted_norm_1d, WeightedNormRequest};
use radres_core::specfun::{bessel_jy_scaled, envelope_ratios, Scaled};
use radres_core::Complex64 as C;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn geom(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
}

fn wronskian_conformance() -> Outcome {
    let mut worst = 0.0f64;
    for &nu in &[0.0, 0.5, 1.0, 5.0, 20.0, 100.0, 500.0] {
        for x in geom(0.1, 100.0, 50) {
            let z = C::new(x, 0.0);
            let (s, _) = bessel_jy_scaled(nu, z).unwrap();
            worst = worst.max(s.wronskian_relerr(z));
        }
    }
    outcome(worst <= 1e-10, format!("max rel err {worst:.2e}"))
}

fn envelope_conformance() -> Outcome {
    let nus = [20.0, 35.0, 50.0, 100.0, 200.0, 350.0, 500.0];
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &nu in &nus {
        for i in 0..40 {
            let z = 0.05 + 0.75 * i as f64 / 39.0;
            let e = envelope_ratios(nu, z).unwrap();
            for r in [e.ratio_j, e.ratio_y] {
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
    }
    // one constant for the uniform bound over z in (0, 20]
    const C_UNIFORM: f64 = 2.5;
    let mut sup = 0.0f64;
    for &nu in &nus {
        for i in 1..=1000 {
            sup = sup.max(envelope_ratios(nu, 0.02 * i as f64).unwrap().uniform_bound);
        }
    }
    let band = hi / lo;
    outcome(
        lo > 0.0 && band <= 10.0 && sup <= C_UNIFORM,
        format!("band [{lo:.3}, {hi:.3}] width {band:.2}; uniform sup {sup:.3} <= {C_UNIFORM}"),
    )
}

fn on_grid(pair: &SolutionPair, f: impl Fn(f64) -> C) -> GridFunction {
    let g = pair.grid().clone();
    let val = g.nodes.iter().map(|&r| Scaled::new(f(r))).collect();
    let der = vec![Scaled::ZERO; g.len()];
    GridFunction { grid: g, val, der }
}

fn free_field_oracle() -> Outcome {
    let v = RadialPotential::zero();
    let (mut u0_err, mut res_err) = (0.0f64, 0.0f64);
    for &h in &[0.1, 0.05, 0.02] {
        for &mh in &[0.0, 1.0, 10.0] {
            let ch = Channel::new(3, h, 1.0, 0.0, mh * h * h).unwrap();
            let pair = SolutionPair::build_on(&ch, &v, &GridSpec::default().with_r_max(6.0)).unwrap();
            let g = pair.grid();
            for (i, &r) in g.nodes.iter().enumerate() {
                let (s, _) = bessel_jy_scaled(ch.nu, ch.lambda * r).unwrap();
                let exact = s.j * Scaled::from_real(r.sqrt());
                // relative to the Hankel envelope, which does not vanish at zeros of J
                let env = s.h.log_mag + 0.5 * r.ln();
                let d = pair.u0.val[i].sub(&exact);
                if !d.is_zero() {
                    u0_err = u0_err.max((d.log_mag - env).exp());
                }
            }
            // R (P - E) g = g for a bump g centred at r = 2
            let bump = |r: f64| {
                let d = r - 2.0;
                let b = (-d * d / 0.1).exp();
                (b, (400.0 * d * d - 20.0) * b)
            };
            let f = on_grid(&pair, |r| {
                let (b, b2) = bump(r);
                C::new(-h * h * b2 + (ch.m / (r * r) - 1.0) * b, 0.0)
            });
            let u = apply_resolvent_1d(&pair, &f).unwrap();
            for (i, &r) in g.nodes.iter().enumerate() {
                res_err = res_err.max((u.val[i].value() - bump(r).0).norm());
            }
        }
    }
    outcome(
        u0_err <= 1e-6 && res_err <= 1e-6,
        format!("u0 vs r^1/2 J_nu: {u0_err:.2e}; resolvent residual {res_err:.2e}"),
    )
}

fn monotonicity() -> Outcome {
    let v = RadialPotential::well(1.0, 1.0).unwrap();
    let m0 = v.m_zero(0.5);
    let mut bad = Vec::new();
    for &h in &[0.1, 0.05, 0.02] {
        for &f in &[1.0, 2.0, 5.0] {
            let ch = Channel::new(3, h, 0.5, 0.0, f * m0).unwrap();
            let pair = SolutionPair::build_on(&ch, &v, &GridSpec::default().with_r_max(4.0)).unwrap();
            let rep = check_u0_monotone(&pair, v.support_radius()).unwrap();
            if !rep.is_empty() {
                bad.push(format!("h={h} m={}M0", f));
            }
        }
    }
    outcome(bad.is_empty(), format!("M0 = {m0}; violations: {bad:?}"))
}

fn cutoff(x: f64) -> (f64, f64, f64) {
    let w = 0.2;
    let c = 1.0 / (1.0 + (x / w).exp());
    let c1 = -c * (1.0 - c) / w;
    let c2 = -c1 * (1.0 - 2.0 * c) / w;
    (c, c1, c2)
}

/// `u = chi f` and `v = chi L f + chi' (f - 2 f') - chi'' f`, with
/// `L = -d_x^2 + d_x + mu` supplied in closed form by `f`.
fn manufacture(f: impl Fn(f64) -> (f64, f64, f64)) -> (LogGrid, LogGrid) {
    let u = LogGrid::sample(-40.0, 40.0, 4096, |r| C::new(f(r.ln()).0 * cutoff(r.ln()).0, 0.0)).unwrap();
    let v = u.map(|x, _| {
        let (f0, f1, lf) = f(x);
        let (c0, c1, c2) = cutoff(x);
        C::new(c0 * lf + c1 * (f0 - 2.0 * f1) - c2 * f0, 0.0)
    });
    (u, v)
}

fn power(mu: f64, p: f64) -> impl Fn(f64) -> (f64, f64, f64) {
    move |x| {
        let e = (p * x).exp();
        (e, p * e, (-p * p + p + mu) * e)
    }
}

fn mellin_suite() -> Outcome {
    let mut pass = true;
    // Parseval and round trip on a skewed bump
    let g = LogGrid::sample(-40.0, 40.0, 4096, |r| {
        let x = r.ln();
        C::new(r.powf(0.7) * (-(x - 0.5).powi(2)).exp(), 0.3 * (-(x + 1.0).powi(2) / 2.0).exp())
    })
    .unwrap();
    let (mut pars, mut trip) = (0.0f64, 0.0f64);
    for &t in &[-0.5, 0.0, 0.8] {
        let line = mellin_forward(&g, t);
        pars = pars.max((line.norm() - (2.0 * PI).sqrt() * g.weighted_norm(t)).abs() / line.norm());
        let back = mellin_inverse(&line);
        let w = |j: usize| (-t * g.x(j)).exp();
        let peak = (0..g.len()).fold(0.0f64, |m, j| m.max(w(j) * g.samples[j].norm()));
        for j in 0..g.len() {
            trip = trip.max((back.samples[j] - g.samples[j]).norm() * w(j) / peak);
        }
    }
    pass &= pars <= 1e-8 && trip <= 1e-10;

    // reconstruction with t0 below, between and above the roots (mu = 2)
    let mu = 2.0;
    let (tm, _) = t_pm(mu, 1.0).unwrap();
    let cases: Vec<(f64, (LogGrid, LogGrid), usize)> = vec![
        (
            -2.0,
            manufacture(|x| {
                let g = (-(x + 1.0).powi(2) / 0.5).exp();
                let (g1, g2) = (-4.0 * (x + 1.0) * g, (16.0 * (x + 1.0).powi(2) - 4.0) * g);
                (g, g1, -g2 + g1 + mu * g)
            }),
            0,
        ),
        (0.5, manufacture(power(mu, tm)), 1),
        (
            3.5,
            manufacture(|x| {
                let (a, b) = (power(mu, -1.0)(x), power(mu, 2.0)(x));
                (a.0 + b.0, a.1 + b.1, a.2 + b.2)
            }),
            2,
        ),
    ];
    let mut rec = 0.0f64;
    for (t0, (u, v), residues) in cases {
        let d = decompose(&v, t0, mu, 1.0).unwrap();
        let count = match &d.pi_part {
            PiPart::Zero => 0,
            PiPart::Powers(p) => p.len(),
            PiPart::LogPair { .. } => 99,
        };
        pass &= count == residues;
        let r = d.reconstruct();
        let (mut err, mut peak) = (0.0f64, 0.0f64);
        for j in 0..u.len() {
            if (-5.0..=2.0).contains(&u.x(j)) {
                err = err.max((r.samples[j] - u.samples[j]).norm());
                peak = peak.max(u.samples[j].norm());
            }
        }
        rec = rec.max(err / peak);
    }
    pass &= rec <= 1e-6;

    // multiplier sup and the E-part ratio against Lambda, one constant
    const C_MULT: f64 = 1.0 + 1e-9;
    let h = 0.05;
    let (_, v) = manufacture(|x| {
        let g = (-(x + 1.0).powi(2)).exp();
        let (g1, g2) = (-2.0 * (x + 1.0) * g, (4.0 * (x + 1.0).powi(2) - 2.0) * g);
        (g, g1, -g2 + g1)
    });
    let mut ratio = 0.0f64;
    for &m in &[-0.25 * h * h + 1e-6, 0.0, h * h, 10.0 * h * h, 100.0 * h * h] {
        let t0 = t0_rule(m, h);
        let lam = lambda_bound(t0, m, h).unwrap();
        ratio = ratio.max(multiplier_sup(t0, m, h).unwrap() / lam);
        let d = decompose(&v, t0, m, h).unwrap();
        ratio = ratio.max(d.e_part.weighted_norm(t0) / v.weighted_norm(t0) / lam);
    }
    pass &= ratio <= C_MULT;
    outcome(
        pass,
        format!("parseval {pars:.1e}; round trip {trip:.1e}; reconstruction {rec:.1e}; sup/Lambda {ratio:.6}"),
    )
}

fn kernel_structure() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20_240_917);
    let wells = [RadialPotential::well(1.0, 1.0).unwrap(), RadialPotential::barrier(1.0, 1.0).unwrap()];
    let mut pass = true;
    let mut notes = Vec::new();
    for trial in 0..5 {
        let v = &wells[trial % 2];
        let h = rng.gen_range(0.05..0.1);
        let e = rng.gen_range(0.4..1.2);
        let m = rng.gen_range(-0.25 * h * h..2.0);
        let (r, rp) = (rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0));
        let spec = GridSpec::default().with_r_max(8.0);
        let ch = Channel::new(3, h, e, 0.0, m).unwrap();
        let pair = SolutionPair::build_on(&ch, v, &spec).unwrap();
        let k = pair.kernel_eval(r, rp).unwrap();
        let sym = (k - pair.kernel_eval(rp, r).unwrap()).norm() / k.norm();
        let c = C::new(rng.gen_range(0.5..4.0), rng.gen_range(-1.0..1.0));
        let scaled = SolutionPair::from_parts(ch, v, pair.u0.scaled_by(c), pair.u1.scaled_by(c.inv())).unwrap();
        let resc = (scaled.kernel_eval(r, rp).unwrap() - k).norm() / k.norm();
        let drift = pair.wronskian_drift;
        let ks: Vec<C> = [1e-2, 1e-4, 1e-6]
            .iter()
            .map(|&eps| {
                let p = SolutionPair::build_on(&ch.with_eps(eps).unwrap(), v, &spec).unwrap();
                p.kernel_eval(r, rp).unwrap()
            })
            .collect();
        let (d1, d2, d3) = ((ks[0] - ks[1]).norm(), (ks[1] - ks[2]).norm(), (ks[2] - k).norm());
        let ok = sym <= 1e-12 && resc <= 1e-10 && drift <= 1e-6 && d2 < d1 && d3 < d2;
        pass &= ok;
        notes.push(format!("{}{}", if ok { "" } else { "!" }, format!("{d1:.0e}>{d2:.0e}>{d3:.0e}")));
    }
    outcome(pass, format!("eps differences {}", notes.join(", ")))
}

/// Smallest `k` with `m_k >= factor * M+`: past it channel norms obey the
/// large-`m` bound and sit below the sweep maximum.
fn channel_cap(h: f64, m_target: f64) -> usize {
    (0..).find(|&k| radres_core::resolvent::channel_m(3, h, k) >= m_target).unwrap()
}

const SWEEP: (f64, f64, usize) = (0.01, 0.1, 8);

fn exterior_scaling() -> Outcome {
    let v = RadialPotential::barrier(1.0, 1.0).unwrap();
    let req = WeightedNormRequest::new(1.0, Some(2.0), GridSpec::default()).unwrap();
    let m_plus = v.m_plus(1.0, 2.0).unwrap();
    let mut pts = Vec::new();
    let mut interior_max = true;
    for h in geom(SWEEP.0, SWEEP.1, SWEEP.2) {
        let f = full_norm_nd(&v, 1.0, h, &req, 3, channel_cap(h, 2.0 * m_plus)).unwrap();
        interior_max &= f.argmax_k + 1 < f.channels.len();
        pts.push((h, f.estimate.value));
    }
    let fit = fit_power_law(&pts).unwrap();
    outcome(
        (0.9..=1.1).contains(&fit.rate) && fit.r_squared >= 0.98 && interior_max,
        format!("p = {:.4}, r^2 = {:.4}, argmax below cap: {interior_max}", fit.rate, fit.r_squared),
    )
}

fn trapping_growth() -> Outcome {
    let v = RadialPotential::well(1.0, 1.0).unwrap();
    let e = 0.5;
    let req = WeightedNormRequest::new(1.0, None, GridSpec::default()).unwrap();
    let m_plus = v.m_plus(e, v.r_one(e)).unwrap();
    let mut pts = Vec::new();
    for h in geom(SWEEP.0, SWEEP.1, SWEEP.2) {
        let f = full_norm_nd(&v, e, h, &req, 3, channel_cap(h, 2.0 * m_plus)).unwrap();
        pts.push((h, f.estimate.value));
    }
    let hlog = pts.iter().map(|&(h, n)| h * n.ln()).fold(f64::NEG_INFINITY, f64::max);
    let env = upper_envelope(&pts);
    let fit = fit_exponential_rate(&env).unwrap();
    outcome(
        hlog >= 0.05 && fit.r_squared >= 0.9,
        format!("max h log norm = {hlog:.4}; rate {:.4}, r^2 = {:.4}", fit.rate, fit.r_squared),
    )
}

fn envelope_probe() -> Outcome {
    const C_PROBE: f64 = 1.0;
    let (h, e) = (0.05, 0.5);
    let v = RadialPotential::well(1.0, 1.0).unwrap();
    let req = WeightedNormRequest::new(1.0, None, GridSpec::default()).unwrap();
    let lo = -0.25 * h * h;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..12 {
        let m = lo + (50.0 - lo) * (i as f64 / 11.0).powi(2);
        let ch = Channel::new(3, h, e, 0.0, m).unwrap();
        let pair = SolutionPair::build_on(&ch, &v, &req.grid_spec()).unwrap();
        let n = weighted_norm_1d(&pair, &req).unwrap().value;
        worst = worst.max(h * n.ln() / (1.0 + m.abs().sqrt()));
    }
    outcome(worst <= C_PROBE, format!("sup h log norm / (1 + |m|^1/2) = {worst:.4} <= {C_PROBE}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 Bessel Wronskian conformance", wronskian_conformance),
        ("2 Bessel envelope conformance", envelope_conformance),
        ("3 free-field oracle", free_field_oracle),
        ("4 exterior h^-1 scaling", exterior_scaling),
        ("5 trapping exponential growth", trapping_growth),
        ("6 u0 monotonicity", monotonicity),
        ("7 Mellin suite", mellin_suite),
        ("8 m-sweep envelope probe", envelope_probe),
        ("9 kernel structure", kernel_structure),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {name}: {} ({:.1} s)", o.detail, t.elapsed().as_secs_f64());
        if !o.pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
