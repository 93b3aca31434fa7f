use crate::radial_solver::{GridFunction, SolutionPair};
use crate::specfun::Scaled;
use crate::{Error, Result};
use num_complex::Complex64 as C;

/// `x -> w R (w x)` for one channel, where `R` has kernel `K(r, r')` and
/// `w` is a real weight on the grid nodes.
///
/// `R` is applied through the split form
/// `-(h^2 W)^-1 [u1(r) int_0^r u0 g + u0(r) int_r^rmax u1 g]`
/// with spectral cumulative integrals, so the kink of `K` on the diagonal
/// costs no accuracy.
pub struct ChannelOperator<'a> {
    pub pair: &'a SolutionPair,
    pub weight: Vec<f64>,
}

impl<'a> ChannelOperator<'a> {
    pub fn new(pair: &'a SolutionPair, weight: Vec<f64>) -> Result<Self> {
        if weight.len() != pair.u0.len() {
            return Err(Error::Precondition("weight length differs from the grid".into()));
        }
        Ok(ChannelOperator { pair, weight })
    }

    /// `(R g, (R g)')` for log-scaled samples `g`.
    pub fn resolve(&self, g: &[Scaled]) -> (Vec<Scaled>, Vec<Scaled>) {
        let p = self.pair;
        let grid = p.grid();
        let n = g.len();
        let a_in: Vec<Scaled> = (0..n).map(|i| p.u0.val[i] * g[i]).collect();
        let b_in: Vec<Scaled> = (0..n).map(|i| p.u1.val[i] * g[i]).collect();
        let a = grid.cumulative(&a_in);
        let b = grid.cumulative_from_right(&b_in);
        let c = p.kernel_prefactor();
        let val = (0..n)
            .map(|i| c * (p.u1.val[i] * a[i]).add(&(p.u0.val[i] * b[i])))
            .collect();
        let der = (0..n)
            .map(|i| c * (p.u1.der[i] * a[i]).add(&(p.u0.der[i] * b[i])))
            .collect();
        (val, der)
    }

    /// `w R (w x)`.
    pub fn apply(&self, x: &[Scaled]) -> Vec<Scaled> {
        let wx: Vec<Scaled> = x
            .iter()
            .zip(&self.weight)
            .map(|(v, &w)| v.scale(C::new(w, 0.0)))
            .collect();
        let (y, _) = self.resolve(&wx);
        y.into_iter()
            .zip(&self.weight)
            .map(|(v, &w)| v.scale(C::new(w, 0.0)))
            .collect()
    }

    /// `(w R w)^* x`; the kernel is complex symmetric, so this is
    /// `conj(w R w conj(x))`.
    pub fn apply_adjoint(&self, x: &[Scaled]) -> Vec<Scaled> {
        let xc: Vec<Scaled> = x.iter().map(|v| v.conj()).collect();
        self.apply(&xc).into_iter().map(|v| v.conj()).collect()
    }
}

/// `u = R_m f`, the solution of `(P_m - E - i eps) u = f` given by the
/// kernel, with its derivative.
pub fn apply_resolvent_1d(pair: &SolutionPair, f: &GridFunction) -> Result<GridFunction> {
    let grid = pair.grid();
    if f.grid.nodes != grid.nodes {
        return Err(Error::Precondition("f must live on the pair's grid".into()));
    }
    let peak = f.val.iter().fold(f64::NEG_INFINITY, |a, s| a.max(s.log_mag));
    let last = f.val.last().map_or(f64::NEG_INFINITY, |s| s.log_mag);
    if peak.is_finite() && last > peak + (1e-8f64).ln() {
        return Err(Error::Precondition(
            "f must be supported inside the grid (it does not vanish at r_max)".into(),
        ));
    }
    let op = ChannelOperator::new(pair, vec![1.0; grid.len()])?;
    let (val, der) = op.resolve(&f.val);
    Ok(GridFunction {
        grid: grid.clone(),
        val,
        der,
    })
}
