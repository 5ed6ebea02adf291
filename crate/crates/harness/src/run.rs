//! Time loops and error measurement.

use stabcorr_core::fdgrid::CartesianGrid;
use stabcorr_core::problems::{HeatMms, TravelingWaveParams};
use stabcorr_core::{
    norm_max, step, Error, Norm, Real, Result, SchemeConfig, SplitSystem, StateVector,
};

/// A run aborts once `max|u_n|` exceeds this multiple of `max(max|u_0|, 1)`.
pub const BLOWUP_FACTOR: f64 = 1e6;

/// Number of steps of size `dt` covering `[t0, t_end]`; rejects spans that `dt` does not divide.
pub fn step_count(t0: f64, t_end: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidStep { dt });
    }
    let span = t_end - t0;
    let q = span / dt;
    let n = q.round();
    if span < 0.0 || (q - n).abs() > 1e-9 * q.max(1.0) {
        return Err(Error::NonIntegerSteps { dt, span });
    }
    Ok(n as usize)
}

/// Advances `u0` from `t0` to `t_end` with constant step `dt`; `t_n = t0 + n dt`.
pub fn integrate<T: Real>(
    sys: &SplitSystem<T>,
    cfg: &SchemeConfig<T>,
    u0: &StateVector<T>,
    t0: T,
    t_end: T,
    dt: T,
) -> Result<StateVector<T>> {
    let n = step_count(t0.as_f64(), t_end.as_f64(), dt.as_f64())?;
    let limit = T::lit(BLOWUP_FACTOR) * norm_max(u0)?.max(T::one());
    let mut u = u0.clone();
    for k in 0..n {
        let t = t0 + T::from_usize_lossy(k) * dt;
        u = step(sys, cfg, &u, t, dt)?;
        if !u.is_finite() || norm_max(&u)? > limit {
            return Err(Error::BlowUp { step: k + 1 });
        }
    }
    Ok(u)
}

/// Problems on the unit square with a closed-form solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridProblem {
    Heat(HeatMms),
    Wave(TravelingWaveParams<f64>),
}

impl GridProblem {
    pub fn system(&self, grid: CartesianGrid<f64>) -> Result<SplitSystem<f64>> {
        match self {
            GridProblem::Heat(p) => p.system(grid),
            GridProblem::Wave(p) => p.system(grid),
        }
    }

    pub fn exact(&self, x: f64, y: f64, t: f64) -> f64 {
        match self {
            GridProblem::Heat(p) => p.exact(x, y, t),
            GridProblem::Wave(p) => p.exact(x, y, t),
        }
    }

    pub fn exact_state(&self, grid: &CartesianGrid<f64>, t: f64) -> StateVector<f64> {
        grid.restrict_state(|x, y| self.exact(x, y, t))
    }
}

/// Unit-square grid with mesh width `h`; `1/h` must be an integer.
pub fn grid_for_h(h: f64) -> Result<CartesianGrid<f64>> {
    let n = (1.0 / h).round();
    if !(h > 0.0) || (n * h - 1.0).abs() > 1e-9 || n < 2.0 {
        return Err(Error::InvalidInput(format!("1/h must be an integer >= 2, got h = {h}")));
    }
    CartesianGrid::unit_square_from_inverse_h(n as usize)
}

/// Error after one step from the exact initial state.
pub fn local_error(
    problem: GridProblem,
    cfg: &SchemeConfig<f64>,
    dt: f64,
    h: f64,
    norm: Norm,
) -> Result<f64> {
    let grid = grid_for_h(h)?;
    let sys = problem.system(grid)?;
    let u0 = problem.exact_state(&grid, 0.0);
    let u1 = step(&sys, cfg, &u0, 0.0, dt)?;
    norm.eval(&problem.exact_state(&grid, dt).sub(&u1)?)
}

/// Errors at `t_end` in each requested norm from a single integration.
pub fn global_errors(
    problem: GridProblem,
    cfg: &SchemeConfig<f64>,
    dt: f64,
    h: f64,
    t_end: f64,
    norms: &[Norm],
) -> Result<Vec<f64>> {
    let grid = grid_for_h(h)?;
    let sys = problem.system(grid)?;
    let u0 = problem.exact_state(&grid, 0.0);
    let u = integrate(&sys, cfg, &u0, 0.0, t_end, dt)?;
    let e = problem.exact_state(&grid, t_end).sub(&u)?;
    norms.iter().map(|n| n.eval(&e)).collect()
}

pub fn global_error(
    problem: GridProblem,
    cfg: &SchemeConfig<f64>,
    dt: f64,
    h: f64,
    t_end: f64,
    norm: Norm,
) -> Result<f64> {
    Ok(global_errors(problem, cfg, dt, h, t_end, &[norm])?[0])
}

/// Self-reference: SC1A at `dt_ref` on the same discretization.
pub fn make_reference<T: Real>(
    sys: &SplitSystem<T>,
    u0: &StateVector<T>,
    t_end: T,
    dt_ref: T,
) -> Result<StateVector<T>> {
    integrate(sys, &SchemeConfig::sc1a(), u0, T::zero(), t_end, dt_ref)
}
