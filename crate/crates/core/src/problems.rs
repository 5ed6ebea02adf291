//! Model problems with closed-form exact solutions and sources.

use std::sync::Arc;

use crate::error::Result;
use crate::fdgrid::{build_heat_dimsplit, BoundaryFn, CartesianGrid, ReactionFn, SourceFn};
use crate::scalar::Real;
use crate::system::SplitSystem;

/// Manufactured solutions of `u_t = u_xx + u_yy + f` on the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeatMms {
    /// `u = sin(t) ((1 + 2x^2)(1 + y^2) - 1)`
    Poly,
    /// `u = 1 - t x^2 / 2`
    LinearT,
}

impl HeatMms {
    pub fn exact<T: Real>(self, x: T, y: T, t: T) -> T {
        let one = T::one();
        match self {
            HeatMms::Poly => t.sin() * ((one + T::two() * x * x) * (one + y * y) - one),
            HeatMms::LinearT => one - T::half() * t * x * x,
        }
    }

    /// `f = u_t - u_xx - u_yy`.
    pub fn source<T: Real>(self, x: T, y: T, t: T) -> T {
        let one = T::one();
        match self {
            HeatMms::Poly => {
                let p = one + T::two() * x * x;
                let q = one + y * y;
                t.cos() * (p * q - one) - t.sin() * (T::lit(4.0) * q + T::two() * p)
            }
            HeatMms::LinearT => -T::half() * x * x + t,
        }
    }

    /// `(u, f)` at one point.
    pub fn eval<T: Real>(self, x: T, y: T, t: T) -> (T, T) {
        (self.exact(x, y, t), self.source(x, y, t))
    }

    /// Dimension-split semi-discretization with Dirichlet data fitted to the exact solution.
    pub fn system<T: Real>(self, grid: CartesianGrid<T>) -> Result<SplitSystem<T>> {
        let bc: BoundaryFn<T> = Arc::new(move |x, y, t| self.exact(x, y, t));
        let src: SourceFn<T> = Arc::new(move |x, y, t| self.source(x, y, t));
        build_heat_dimsplit(grid, T::one(), bc, src, None)
    }
}

/// Traveling front of `u_t = eps (u_xx + u_yy) + gamma u^2 (1 - u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelingWaveParams<T> {
    pub gamma: T,
    pub epsilon: T,
    /// Propagation angle.
    pub alpha: T,
    /// Front position at `t = 0`.
    pub r0: T,
}

impl<T: Real> TravelingWaveParams<T> {
    /// `gamma = 50`, `alpha = pi/6`, `r0 = 1 - c`.
    pub fn standard(epsilon: T) -> Self {
        let gamma = T::lit(50.0);
        let c = (gamma * epsilon / T::two()).sqrt();
        Self {
            gamma,
            epsilon,
            alpha: T::PI() / T::lit(6.0),
            r0: T::one() - c,
        }
    }

    /// Steepness `beta = sqrt(2 gamma / eps) / 2`.
    pub fn beta(&self) -> T {
        T::half() * (T::two() * self.gamma / self.epsilon).sqrt()
    }

    /// Wave speed `c = sqrt(gamma eps / 2)`.
    pub fn speed(&self) -> T {
        (self.gamma * self.epsilon / T::two()).sqrt()
    }

    pub fn exact(&self, x: T, y: T, t: T) -> T {
        traveling_wave_exact(self, x, y, t)
    }

    /// Dimension-split system with explicit reaction and Dirichlet data from the exact front.
    pub fn system(&self, grid: CartesianGrid<T>) -> Result<SplitSystem<T>> {
        let p = *self;
        let bc: BoundaryFn<T> = Arc::new(move |x, y, t| p.exact(x, y, t));
        let src: SourceFn<T> = Arc::new(|_, _, _| T::zero());
        let gamma = self.gamma;
        let reaction: ReactionFn<T> = Arc::new(move |u| gamma * u * u * (T::one() - u));
        build_heat_dimsplit(grid, self.epsilon, bc, src, Some(reaction))
    }
}

pub fn traveling_wave_exact<T: Real>(p: &TravelingWaveParams<T>, x: T, y: T, t: T) -> T {
    let r = p.alpha.cos() * x + p.alpha.sin() * y - p.speed() * t;
    T::one() / (T::one() + (p.beta() * (r - p.r0)).exp())
}

/// Schnakenberg kinetics `u_t = D1 Lap u + kappa (a - u + u^2 v)`, `v_t = D2 Lap v + kappa (b - u^2 v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchnakParams<T> {
    pub d1: T,
    pub d2: T,
    pub kappa: T,
    pub a: T,
    pub b: T,
}

impl<T: Real> Default for SchnakParams<T> {
    fn default() -> Self {
        Self {
            d1: T::lit(0.05),
            d2: T::one(),
            kappa: T::lit(100.0),
            a: T::lit(0.1305),
            b: T::lit(0.7695),
        }
    }
}

impl<T: Real> SchnakParams<T> {
    /// Chemical steady state `(a + b, b / (a + b)^2)`.
    pub fn steady_state(&self) -> (T, T) {
        let s = self.a + self.b;
        (s, self.b / (s * s))
    }
}

pub fn schnakenberg_reaction<T: Real>(u: T, v: T, p: &SchnakParams<T>) -> (T, T) {
    let uuv = u * u * v;
    (p.kappa * (p.a - u + uuv), p.kappa * (p.b - uuv))
}

/// Steady state plus a small Gaussian bump in `u` centred at `(1/4, 1/6)`.
pub fn schnakenberg_initial<T: Real>(x: T, y: T, p: &SchnakParams<T>) -> (T, T) {
    let (us, vs) = p.steady_state();
    let dx = x - T::lit(0.25);
    let dy = y - T::one() / T::lit(6.0);
    let bump = T::lit(1e-3) * (-T::lit(100.0) * (dx * dx + dy * dy)).exp();
    (us + bump, vs)
}
