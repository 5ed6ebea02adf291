//! Split ODE systems `u' = F_0(t,u) + F_1(t,u) + ... + F_s(t,u)`.
//!
//! `F_0` is an arbitrary (possibly nonlinear) explicit part. Every implicit part is affine,
//! `F_j(t,v) = A_j v + g_j(t)`, and provides a solver for `(I - gamma A_j) w = rhs`.
//! Inhomogeneous boundary data belonging to `A_j` lives in `g_j`.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::Layout;

/// Explicitly treated part `F_0(t, v)`.
pub trait ExplicitPart<T: Real>: Send + Sync {
    /// Writes `F_0(t, v)` into `out` (overwriting it).
    fn eval(&self, t: T, v: &[T], out: &mut [T]);
}

impl<T, F> ExplicitPart<T> for F
where
    T: Real,
    F: Fn(T, &[T], &mut [T]) + Send + Sync,
{
    fn eval(&self, t: T, v: &[T], out: &mut [T]) {
        self(t, v, out)
    }
}

/// The explicit part that vanishes identically.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroExplicit;

impl<T: Real> ExplicitPart<T> for ZeroExplicit {
    fn eval(&self, _t: T, _v: &[T], out: &mut [T]) {
        out.fill(T::zero());
    }
}

/// Implicitly treated affine part `F_j(t,v) = A_j v + g_j(t)`.
pub trait AffineOperator<T: Real>: Send + Sync {
    /// `out = A_j v`.
    fn apply(&self, v: &[T], out: &mut [T]);

    /// `out = g_j(t)`.
    fn source(&self, t: T, out: &mut [T]);

    /// Solves `(I - gamma A_j) out = rhs`. Must be the identity for `gamma == 0`.
    fn stage_solve(&self, gamma: T, rhs: &[T], out: &mut [T]) -> Result<()>;
}

/// Diagonal affine operator `A = diag(d)`, `g(t) = const`.
///
/// Handy for scalar test equations and decoupled ODE systems.
#[derive(Debug, Clone)]
pub struct DiagonalOperator<T> {
    diag: Vec<T>,
    source: Option<Vec<T>>,
}

impl<T: Real> DiagonalOperator<T> {
    pub fn new(diag: Vec<T>) -> Self {
        Self { diag, source: None }
    }

    pub fn with_constant_source(mut self, g: Vec<T>) -> Self {
        assert_eq!(g.len(), self.diag.len());
        self.source = Some(g);
        self
    }
}

impl<T: Real> AffineOperator<T> for DiagonalOperator<T> {
    fn apply(&self, v: &[T], out: &mut [T]) {
        for ((o, &d), &x) in out.iter_mut().zip(&self.diag).zip(v) {
            *o = d * x;
        }
    }

    fn source(&self, _t: T, out: &mut [T]) {
        match &self.source {
            Some(g) => out.copy_from_slice(g),
            None => out.fill(T::zero()),
        }
    }

    fn stage_solve(&self, gamma: T, rhs: &[T], out: &mut [T]) -> Result<()> {
        for (i, ((o, &d), &r)) in out.iter_mut().zip(&self.diag).zip(rhs).enumerate() {
            let denom = T::one() - gamma * d;
            if denom == T::zero() {
                return Err(Error::Factorization { part: 0, component: i });
            }
            *o = r / denom;
        }
        Ok(())
    }
}

/// `F = F_0 + F_1 + ... + F_s` with `s >= 1` affine implicit parts.
pub struct SplitSystem<T: Real> {
    dim: usize,
    layout: Layout,
    explicit: Box<dyn ExplicitPart<T>>,
    implicit: Vec<Box<dyn AffineOperator<T>>>,
    stage_solves: AtomicUsize,
}

impl<T: Real> SplitSystem<T> {
    pub fn new(
        dim: usize,
        layout: Layout,
        explicit: Box<dyn ExplicitPart<T>>,
        implicit: Vec<Box<dyn AffineOperator<T>>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyState);
        }
        if implicit.is_empty() {
            return Err(Error::InvalidInput(
                "a split system needs at least one implicit part".into(),
            ));
        }
        if let Some(n) = layout.value_count() {
            if n != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: n,
                });
            }
        }
        Ok(Self {
            dim,
            layout,
            explicit,
            implicit,
            stage_solves: AtomicUsize::new(0),
        })
    }

    /// Decoupled diagonal system: `F_0 = diag(explicit)`, `F_j = diag(implicit[j])`.
    pub fn diagonal(explicit: Vec<T>, implicit: Vec<Vec<T>>) -> Result<Self> {
        let dim = explicit.len();
        for d in &implicit {
            if d.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: d.len(),
                });
            }
        }
        let f0 = move |_t: T, v: &[T], out: &mut [T]| {
            for ((o, &l), &x) in out.iter_mut().zip(&explicit).zip(v) {
                *o = l * x;
            }
        };
        let parts = implicit
            .into_iter()
            .map(|d| Box::new(DiagonalOperator::new(d)) as Box<dyn AffineOperator<T>>)
            .collect();
        Self::new(dim, Layout::Scalar, Box::new(f0), parts)
    }

    /// Number of implicit parts `s`.
    pub fn s(&self) -> usize {
        self.implicit.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn explicit(&self, t: T, v: &[T], out: &mut [T]) {
        self.explicit.eval(t, v, out)
    }

    /// Implicit part `j`, 0-based (`F_{j+1}` in the usual numbering).
    pub fn implicit(&self, j: usize) -> &dyn AffineOperator<T> {
        self.implicit[j].as_ref()
    }

    /// Full right-hand side `F(t, v)`, parts accumulated in index order `0, 1, ..., s`.
    pub fn eval(&self, t: T, v: &[T]) -> Vec<T> {
        let mut acc = vec![T::zero(); self.dim];
        self.explicit.eval(t, v, &mut acc);
        let mut a = vec![T::zero(); self.dim];
        let mut g = vec![T::zero(); self.dim];
        for op in &self.implicit {
            op.apply(v, &mut a);
            op.source(t, &mut g);
            for ((s, &ai), &gi) in acc.iter_mut().zip(&a).zip(&g) {
                *s += ai + gi;
            }
        }
        acc
    }

    /// Stage solve through part `j` (0-based); counted for work statistics.
    pub fn solve_stage(&self, j: usize, gamma: T, rhs: &[T], out: &mut [T]) -> Result<()> {
        self.stage_solves.fetch_add(1, Ordering::Relaxed);
        self.implicit[j].stage_solve(gamma, rhs, out)
    }

    /// Number of implicit stage solves performed so far.
    pub fn stage_solve_count(&self) -> usize {
        self.stage_solves.load(Ordering::Relaxed)
    }

    pub fn reset_stage_solve_count(&self) {
        self.stage_solves.store(0, Ordering::Relaxed);
    }
}

impl<T: Real> std::fmt::Debug for SplitSystem<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SplitSystem")
            .field("dim", &self.dim)
            .field("s", &self.s())
            .field("layout", &self.layout)
            .finish()
    }
}
