//! One-step maps of the Douglas stabilizing-correction family.
//!
//! All schemes share the same building block: an explicit Euler predictor followed by a chain
//! of implicit corrections, one per implicit part,
//!
//! ```text
//! v_j = v_{j-1} + theta dt (F_j(t_n, v_j) - F_j(t_{n-1}, u_{n-1})),   j = 1..s
//! ```
//!
//! realized as `(I - theta dt A_j) v_j = v_{j-1} - theta dt (A_j u_{n-1} + g_j(t_{n-1})) + theta dt g_j(t_n)`.
//! Sources are only ever evaluated at `t_{n-1}` and `t_n`.
//!
//! | scheme  | explicit part             | passes |
//! |---------|---------------------------|--------|
//! | DOUGLAS | forward Euler             | 1      |
//! | SC1A    | trapezoidal, before chain | 1      |
//! | SC1B    | trapezoidal, after chain  | 1      |
//! | HV      | trapezoidal re-predictor  | 2      |
//! | HW / CS | trapezoidal + (1/2-theta) | 2      |

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::StateVector;
use crate::system::SplitSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Douglas,
    Sc1a,
    Sc1b,
    Hv,
    Hw,
}

impl SchemeKind {
    pub fn id(self) -> &'static str {
        match self {
            SchemeKind::Douglas => "DOUGLAS",
            SchemeKind::Sc1a => "SC1A",
            SchemeKind::Sc1b => "SC1B",
            SchemeKind::Hv => "HV",
            SchemeKind::Hw => "HW",
        }
    }

    /// Number of correction passes (implicit stage chains) per step.
    pub fn passes(self) -> usize {
        match self {
            SchemeKind::Hv | SchemeKind::Hw => 2,
            _ => 1,
        }
    }
}

/// Scheme selection plus its parameter. SC1A/SC1B always use `theta = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig<T> {
    pub kind: SchemeKind,
    pub theta: T,
}

impl<T: Real> SchemeConfig<T> {
    pub fn new(kind: SchemeKind, theta: T) -> Result<Self> {
        let cfg = Self { kind, theta };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn douglas(theta: T) -> Self {
        Self { kind: SchemeKind::Douglas, theta }
    }

    pub fn sc1a() -> Self {
        Self { kind: SchemeKind::Sc1a, theta: T::half() }
    }

    pub fn sc1b() -> Self {
        Self { kind: SchemeKind::Sc1b, theta: T::half() }
    }

    pub fn hv(theta: T) -> Self {
        Self { kind: SchemeKind::Hv, theta }
    }

    pub fn hw(theta: T) -> Self {
        Self { kind: SchemeKind::Hw, theta }
    }

    /// Craig-Sneyd: HW with `theta = 1/2`.
    pub fn craig_sneyd() -> Self {
        Self::hw(T::half())
    }

    /// The L-stable choice `1 - sqrt(2)/2` used for HV and HW in comparisons.
    pub fn l_stable_theta() -> T {
        T::one() - T::SQRT_2() / T::two()
    }

    /// Effective theta (SC1A/SC1B ignore the stored value).
    pub fn effective_theta(&self) -> T {
        match self.kind {
            SchemeKind::Sc1a | SchemeKind::Sc1b => T::half(),
            _ => self.theta,
        }
    }

    /// Display label; HW at `theta = 1/2` is reported as `CS`.
    pub fn label(&self) -> &'static str {
        if self.kind == SchemeKind::Hw && self.theta == T::half() {
            "CS"
        } else {
            self.kind.id()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.kind {
            SchemeKind::Douglas => self.theta >= T::half(),
            SchemeKind::Hv | SchemeKind::Hw => self.theta > T::zero(),
            SchemeKind::Sc1a | SchemeKind::Sc1b => true,
        };
        if ok && self.theta.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidTheta {
                scheme: self.kind.id(),
                theta: self.theta.as_f64(),
            })
        }
    }
}

impl<T: Real> fmt::Display for SchemeConfig<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(theta={})", self.label(), self.effective_theta())
    }
}

/// Advances one step with the configured scheme.
pub fn step<T: Real>(
    sys: &SplitSystem<T>,
    cfg: &SchemeConfig<T>,
    u_prev: &StateVector<T>,
    t_prev: T,
    dt: T,
) -> Result<StateVector<T>> {
    cfg.validate()?;
    match cfg.kind {
        SchemeKind::Douglas => douglas_step(sys, u_prev, t_prev, dt, cfg.theta),
        SchemeKind::Sc1a => sc1a_step(sys, u_prev, t_prev, dt),
        SchemeKind::Sc1b => sc1b_step(sys, u_prev, t_prev, dt),
        SchemeKind::Hv => hv_step(sys, u_prev, t_prev, dt, cfg.theta),
        SchemeKind::Hw => hw_step(sys, u_prev, t_prev, dt, cfg.theta),
    }
}

/// Quantities evaluated once per step at `(t_{n-1}, u_{n-1})` and `t_n`.
struct Anchor<T> {
    /// `F_0(t_{n-1}, u_{n-1})`
    f0: Vec<T>,
    /// `A_j u_{n-1}`
    au: Vec<Vec<T>>,
    g_prev: Vec<Vec<T>>,
    g_next: Vec<Vec<T>>,
}

impl<T: Real> Anchor<T> {
    fn new(sys: &SplitSystem<T>, u: &[T], t_prev: T, t_next: T) -> Self {
        let m = sys.dim();
        let mut f0 = vec![T::zero(); m];
        sys.explicit(t_prev, u, &mut f0);
        let mut au = Vec::with_capacity(sys.s());
        let mut g_prev = Vec::with_capacity(sys.s());
        let mut g_next = Vec::with_capacity(sys.s());
        for j in 0..sys.s() {
            let op = sys.implicit(j);
            let mut a = vec![T::zero(); m];
            op.apply(u, &mut a);
            au.push(a);
            let mut g = vec![T::zero(); m];
            op.source(t_prev, &mut g);
            g_prev.push(g);
            let mut g = vec![T::zero(); m];
            op.source(t_next, &mut g);
            g_next.push(g);
        }
        Self { f0, au, g_prev, g_next }
    }

    /// `F(t_{n-1}, u_{n-1})`, accumulated in part order.
    fn full_rhs(&self) -> Vec<T> {
        let mut f = self.f0.clone();
        for (a, g) in self.au.iter().zip(&self.g_prev) {
            for ((fi, &ai), &gi) in f.iter_mut().zip(a).zip(g) {
                *fi += ai + gi;
            }
        }
        f
    }

    /// Stage offsets `g_j(t_n) - A_j u_{n-1} - g_j(t_{n-1})`.
    fn offsets(&self) -> Vec<Vec<T>> {
        self.au
            .iter()
            .zip(&self.g_prev)
            .zip(&self.g_next)
            .map(|((a, gp), gn)| {
                a.iter()
                    .zip(gp)
                    .zip(gn)
                    .map(|((&ai, &gpi), &gni)| gni - (ai + gpi))
                    .collect()
            })
            .collect()
    }
}

fn check_step<T: Real>(sys: &SplitSystem<T>, u: &[T], dt: T) -> Result<()> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::InvalidStep { dt: dt.as_f64() });
    }
    if u.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: u.len(),
        });
    }
    Ok(())
}

/// `u + c f`
fn axpy<T: Real>(u: &[T], c: T, f: &[T]) -> Vec<T> {
    u.iter().zip(f).map(|(&ui, &fi)| ui + c * fi).collect()
}

/// Runs the implicit chain `(I - gamma A_j) v_j = v_{j-1} + gamma c_j`, `j = 1..s`.
fn correction_chain<T: Real>(
    sys: &SplitSystem<T>,
    mut v: Vec<T>,
    gamma: T,
    offsets: &[Vec<T>],
    pass: usize,
) -> Result<Vec<T>> {
    let mut rhs = vec![T::zero(); v.len()];
    for (j, c) in offsets.iter().enumerate() {
        for ((r, &vi), &ci) in rhs.iter_mut().zip(&v).zip(c) {
            *r = vi + gamma * ci;
        }
        sys.solve_stage(j, gamma, &rhs, &mut v)
            .map_err(|e| Error::StageSolve {
                pass,
                stage: j + 1,
                source: Box::new(e),
            })?;
    }
    Ok(v)
}

/// `out_j = A_j v` for every implicit part.
fn apply_all<T: Real>(sys: &SplitSystem<T>, v: &[T]) -> Vec<Vec<T>> {
    (0..sys.s())
        .map(|j| {
            let mut a = vec![T::zero(); v.len()];
            sys.implicit(j).apply(v, &mut a);
            a
        })
        .collect()
}

/// Douglas method with forward-Euler treatment of `F_0`.
pub fn douglas_step<T: Real>(
    sys: &SplitSystem<T>,
    u_prev: &StateVector<T>,
    t_prev: T,
    dt: T,
    theta: T,
) -> Result<StateVector<T>> {
    check_step(sys, u_prev, dt)?;
    let t_next = t_prev + dt;
    let anchor = Anchor::new(sys, u_prev, t_prev, t_next);
    let v0 = axpy(u_prev, dt, &anchor.full_rhs());
    let vs = correction_chain(sys, v0, theta * dt, &anchor.offsets(), 1)?;
    Ok(u_prev.with_values(vs))
}

/// Modified Douglas method with the trapezoidal correction of `F_0` before the implicit chain.
pub fn sc1a_step<T: Real>(
    sys: &SplitSystem<T>,
    u_prev: &StateVector<T>,
    t_prev: T,
    dt: T,
) -> Result<StateVector<T>> {
    check_step(sys, u_prev, dt)?;
    let t_next = t_prev + dt;
    let anchor = Anchor::new(sys, u_prev, t_prev, t_next);
    let v_star = axpy(u_prev, dt, &anchor.full_rhs());
    let mut f0_star = vec![T::zero(); sys.dim()];
    sys.explicit(t_next, &v_star, &mut f0_star);
    let half_dt = T::half() * dt;
    let v0: Vec<T> = v_star
        .iter()
        .zip(&f0_star)
        .zip(&anchor.f0)
        .map(|((&v, &fn_), &fp)| v + half_dt * (fn_ - fp))
        .collect();
    let vs = correction_chain(sys, v0, half_dt, &anchor.offsets(), 1)?;
    Ok(u_prev.with_values(vs))
}

/// Modified Douglas method with the trapezoidal correction of `F_0` after the implicit chain.
pub fn sc1b_step<T: Real>(
    sys: &SplitSystem<T>,
    u_prev: &StateVector<T>,
    t_prev: T,
    dt: T,
) -> Result<StateVector<T>> {
    check_step(sys, u_prev, dt)?;
    let t_next = t_prev + dt;
    let anchor = Anchor::new(sys, u_prev, t_prev, t_next);
    let half_dt = T::half() * dt;
    let v0 = axpy(u_prev, dt, &anchor.full_rhs());
    let mut vs = correction_chain(sys, v0, half_dt, &anchor.offsets(), 1)?;
    let mut f0_s = vec![T::zero(); sys.dim()];
    sys.explicit(t_next, &vs, &mut f0_s);
    for ((v, &fn_), &fp) in vs.iter_mut().zip(&f0_s).zip(&anchor.f0) {
        *v += half_dt * (fn_ - fp);
    }
    Ok(u_prev.with_values(vs))
}

/// HV extended scheme: Douglas pass, trapezoidal re-predictor,
/// second correction pass anchored at `F_j(t_n, v*_s)`.
pub fn hv_step<T: Real>(
    sys: &SplitSystem<T>,
    u_prev: &StateVector<T>,
    t_prev: T,
    dt: T,
    theta: T,
) -> Result<StateVector<T>> {
    check_step(sys, u_prev, dt)?;
    let t_next = t_prev + dt;
    let gamma = theta * dt;
    let anchor = Anchor::new(sys, u_prev, t_prev, t_next);
    let f_prev = anchor.full_rhs();
    let v_star0 = axpy(u_prev, dt, &f_prev);
    let v_star = correction_chain(sys, v_star0, gamma, &anchor.offsets(), 1)?;

    // F(t_n, v*_s)
    let a_star = apply_all(sys, &v_star);
    let mut f_star = vec![T::zero(); sys.dim()];
    sys.explicit(t_next, &v_star, &mut f_star);
    for (a, g) in a_star.iter().zip(&anchor.g_next) {
        for ((fi, &ai), &gi) in f_star.iter_mut().zip(a).zip(g) {
            *fi += ai + gi;
        }
    }
    let half_dt = T::half() * dt;
    let v0: Vec<T> = u_prev
        .iter()
        .zip(&f_prev)
        .zip(&f_star)
        .map(|((&u, &fp), &fs)| u + half_dt * (fp + fs))
        .collect();

    // F_j(t_n, v_j) - F_j(t_n, v*_s) = A_j (v_j - v*_s)
    let offsets: Vec<Vec<T>> = a_star
        .into_iter()
        .map(|a| a.into_iter().map(|x| -x).collect())
        .collect();
    let vs = correction_chain(sys, v0, gamma, &offsets, 2)?;
    Ok(u_prev.with_values(vs))
}

/// HW extended scheme; `theta = 1/2` gives Craig-Sneyd.
pub fn hw_step<T: Real>(
    sys: &SplitSystem<T>,
    u_prev: &StateVector<T>,
    t_prev: T,
    dt: T,
    theta: T,
) -> Result<StateVector<T>> {
    check_step(sys, u_prev, dt)?;
    let t_next = t_prev + dt;
    let gamma = theta * dt;
    let anchor = Anchor::new(sys, u_prev, t_prev, t_next);
    let offsets = anchor.offsets();
    let v_star0 = axpy(u_prev, dt, &anchor.full_rhs());
    let v_star = correction_chain(sys, v_star0.clone(), gamma, &offsets, 1)?;

    let half_dt = T::half() * dt;
    let weight = (T::half() - theta) * dt;
    let mut f0_star = vec![T::zero(); sys.dim()];
    sys.explicit(t_next, &v_star, &mut f0_star);
    let mut v0: Vec<T> = v_star0
        .iter()
        .zip(&f0_star)
        .zip(&anchor.f0)
        .map(|((&v, &fs), &fp)| v + half_dt * (fs - fp))
        .collect();
    if weight != T::zero() {
        // sum_j F_j(t_n, v*_s) - F_j(t_{n-1}, u_{n-1}) = sum_j A_j v*_s + offset_j
        let mut acc = vec![T::zero(); sys.dim()];
        let mut a = vec![T::zero(); sys.dim()];
        for (j, c) in offsets.iter().enumerate() {
            sys.implicit(j).apply(&v_star, &mut a);
            for ((s, &ai), &ci) in acc.iter_mut().zip(&a).zip(c) {
                *s += ai + ci;
            }
        }
        for (v, &s) in v0.iter_mut().zip(&acc) {
            *v += weight * s;
        }
    }
    let vs = correction_chain(sys, v0, gamma, &offsets, 2)?;
    Ok(u_prev.with_values(vs))
}
