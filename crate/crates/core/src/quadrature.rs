//! Small quadrature helpers: Gauss-Legendre nodes and adaptive Simpson.

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Newton on `P_n`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `(P_n(t), P_n'(t))`.
pub fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// Spectral integration and differentiation matrices on the Gauss nodes
/// `t` of order `p`: `S[i][j] = int_{-1}^{t_i} l_j`, `D[i][j] = l_j'(t_i)`,
/// with `l_j` the Lagrange basis. Row-major `p x p`.
pub fn spectral_matrices(p: usize) -> (Vec<f64>, Vec<f64>) {
    let (t, w) = gauss_legendre(p);
    let leg = |k: usize, x: f64| legendre_with_derivative(k, x).0;
    let mut s = vec![0.0; p * p];
    for i in 0..p {
        let ti = t[i];
        // I_k(t_i) = int_{-1}^{t_i} P_k
        let ik: Vec<f64> = (0..p)
            .map(|k| {
                if k == 0 {
                    ti + 1.0
                } else {
                    (leg(k + 1, ti) - leg(k - 1, ti)) / (2 * k + 1) as f64
                }
            })
            .collect();
        for j in 0..p {
            let mut acc = 0.0;
            for (k, &ikv) in ik.iter().enumerate() {
                acc += (2 * k + 1) as f64 / 2.0 * leg(k, t[j]) * ikv;
            }
            s[i * p + j] = w[j] * acc;
        }
    }
    // barycentric differentiation matrix
    let bw: Vec<f64> = (0..p)
        .map(|j| {
            1.0 / (0..p)
                .filter(|&k| k != j)
                .map(|k| t[j] - t[k])
                .product::<f64>()
        })
        .collect();
    let mut d = vec![0.0; p * p];
    for i in 0..p {
        let mut diag = 0.0;
        for j in 0..p {
            if i != j {
                let v = bw[j] / bw[i] / (t[i] - t[j]);
                d[i * p + j] = v;
                diag -= v;
            }
        }
        d[i * p + i] = diag;
    }
    (s, d)
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(&f, a, b, fa, fm, fb, whole, tol, 50)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 10, 17] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-14, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn spectral_matrices_exact_on_polynomials() {
        let p = 12;
        let (t, _) = gauss_legendre(p);
        let (s, d) = spectral_matrices(p);
        for deg in 0..p {
            let f: Vec<f64> = t.iter().map(|x| x.powi(deg as i32)).collect();
            for i in 0..p {
                let int: f64 = (0..p).map(|j| s[i * p + j] * f[j]).sum();
                let exact = (t[i].powi(deg as i32 + 1) - (-1f64).powi(deg as i32 + 1)) / (deg as f64 + 1.0);
                assert!((int - exact).abs() < 1e-13, "deg={deg}");
                let der: f64 = (0..p).map(|j| d[i * p + j] * f[j]).sum();
                let exact_d = if deg == 0 { 0.0 } else { deg as f64 * t[i].powi(deg as i32 - 1) };
                assert!((der - exact_d).abs() < 1e-11, "deg={deg}");
            }
        }
    }

    #[test]
    fn simpson_smooth() {
        let v = adaptive_simpson(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
    }
}
