//! Second-order finite differences on a uniform Cartesian grid with dimension splitting.
//!
//! Unknowns are interior nodes only, stored x-fastest. The x- and y-direction second
//! differences form the implicit parts `A_1`, `A_2`; Dirichlet data adjacent to the boundary is
//! folded into the matching sources `g_1(t)`, `g_2(t)`.

mod thomas;

pub use thomas::{thomas_solve, thomas_solve_into};

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::{Layout, StateVector};
use crate::system::{AffineOperator, SplitSystem};

/// Boundary value `(x, y, t) -> u`.
pub type BoundaryFn<T> = Arc<dyn Fn(T, T, T) -> T + Send + Sync>;
/// Source term `(x, y, t) -> f`.
pub type SourceFn<T> = Arc<dyn Fn(T, T, T) -> T + Send + Sync>;
/// Pointwise reaction `u -> r(u)`.
pub type ReactionFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Uniform grid with `nx * ny` interior nodes at `((i+1) h, (j+1) h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianGrid<T> {
    pub nx: usize,
    pub ny: usize,
    pub h: T,
}

impl<T: Real> CartesianGrid<T> {
    pub fn new(nx: usize, ny: usize, h: T) -> Result<Self> {
        if nx == 0 || ny == 0 || !(h > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "invalid grid nx = {nx}, ny = {ny}, h = {h}"
            )));
        }
        Ok(Self { nx, ny, h })
    }

    /// Unit square with `k` interior points per direction, `h = 1/(k+1)`.
    pub fn unit_square(k: usize) -> Result<Self> {
        Self::new(k, k, T::one() / T::from_usize_lossy(k + 1))
    }

    /// Unit square with mesh width `1/n` (i.e. `n - 1` interior points).
    pub fn unit_square_from_inverse_h(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("need 1/h >= 2, got {n}")));
        }
        Self::unit_square(n - 1)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn layout(&self) -> Layout {
        Layout::Cartesian {
            nx: self.nx,
            ny: self.ny,
            species: 1,
        }
    }

    pub fn x(&self, i: usize) -> T {
        T::from_usize_lossy(i + 1) * self.h
    }

    pub fn y(&self, j: usize) -> T {
        T::from_usize_lossy(j + 1) * self.h
    }

    /// Right / top boundary coordinate.
    pub fn x_max(&self) -> T {
        T::from_usize_lossy(self.nx + 1) * self.h
    }

    pub fn y_max(&self) -> T {
        T::from_usize_lossy(self.ny + 1) * self.h
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Restriction of `f(x, y)` to the interior nodes.
    pub fn restrict(&self, f: impl Fn(T, T) -> T) -> Vec<T> {
        let mut v = Vec::with_capacity(self.len());
        for j in 0..self.ny {
            let y = self.y(j);
            for i in 0..self.nx {
                v.push(f(self.x(i), y));
            }
        }
        v
    }

    pub fn restrict_state(&self, f: impl Fn(T, T) -> T) -> StateVector<T> {
        StateVector::new(self.restrict(f), self.layout()).expect("grid is nonempty")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    X,
    Y,
}

/// `eps * h^-2 * (second difference along one direction)` with folded Dirichlet data.
pub struct DirectionalLaplacian<T: Real> {
    grid: CartesianGrid<T>,
    eps: T,
    dir: Direction,
    bc: Option<BoundaryFn<T>>,
}

impl<T: Real> DirectionalLaplacian<T> {
    /// `bc = None` means homogeneous Dirichlet data.
    pub fn new(grid: CartesianGrid<T>, eps: T, dir: Direction, bc: Option<BoundaryFn<T>>) -> Self {
        Self { grid, eps, dir, bc }
    }

    fn coeff(&self) -> T {
        self.eps / (self.grid.h * self.grid.h)
    }
}

impl<T: Real> AffineOperator<T> for DirectionalLaplacian<T> {
    fn apply(&self, v: &[T], out: &mut [T]) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let c = self.coeff();
        let two = T::two();
        match self.dir {
            Direction::X => {
                for (row_in, row_out) in v.chunks_exact(nx).zip(out.chunks_exact_mut(nx)) {
                    for i in 0..nx {
                        let left = if i > 0 { row_in[i - 1] } else { T::zero() };
                        let right = if i + 1 < nx { row_in[i + 1] } else { T::zero() };
                        row_out[i] = c * (left - two * row_in[i] + right);
                    }
                }
            }
            Direction::Y => {
                for j in 0..ny {
                    for i in 0..nx {
                        let k = j * nx + i;
                        let below = if j > 0 { v[k - nx] } else { T::zero() };
                        let above = if j + 1 < ny { v[k + nx] } else { T::zero() };
                        out[k] = c * (below - two * v[k] + above);
                    }
                }
            }
        }
    }

    fn source(&self, t: T, out: &mut [T]) {
        out.fill(T::zero());
        let Some(bc) = &self.bc else { return };
        let g = &self.grid;
        let c = self.coeff();
        match self.dir {
            Direction::X => {
                let (x0, x1) = (T::zero(), g.x_max());
                for j in 0..g.ny {
                    let y = g.y(j);
                    out[g.index(0, j)] += c * bc(x0, y, t);
                    out[g.index(g.nx - 1, j)] += c * bc(x1, y, t);
                }
            }
            Direction::Y => {
                let (y0, y1) = (T::zero(), g.y_max());
                for i in 0..g.nx {
                    let x = g.x(i);
                    out[g.index(i, 0)] += c * bc(x, y0, t);
                    out[g.index(i, g.ny - 1)] += c * bc(x, y1, t);
                }
            }
        }
    }

    fn stage_solve(&self, gamma: T, rhs: &[T], out: &mut [T]) -> Result<()> {
        stage_solve_direction(&self.grid, self.dir, gamma * self.eps, rhs, out)
    }
}

/// Applies `(I - gamma * D_dir / h^2)^{-1}` by independent Thomas solves on every grid line,
/// where `D_dir` is the unscaled `[1, -2, 1]` difference along `dir`.
///
/// Lines are solved in parallel; each line writes a disjoint set of entries, so the result is
/// bit-identical for any thread count.
pub fn stage_solve_direction<T: Real>(
    grid: &CartesianGrid<T>,
    dir: Direction,
    gamma: T,
    rhs: &[T],
    out: &mut [T],
) -> Result<()> {
    if rhs.len() != grid.len() || out.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            found: rhs.len(),
        });
    }
    if gamma < T::zero() {
        return Err(Error::InvalidInput(format!("stage gamma must be >= 0, got {gamma}")));
    }
    if gamma == T::zero() {
        out.copy_from_slice(rhs);
        return Ok(());
    }
    let k = gamma / (grid.h * grid.h);
    let nx = grid.nx;
    match dir {
        Direction::X => out
            .par_chunks_mut(nx)
            .zip(rhs.par_chunks(nx))
            .try_for_each_init(
                || vec![T::zero(); nx],
                |scratch, (line_out, line_rhs)| {
                    thomas::solve_constant_line(k, line_rhs, line_out, scratch)
                },
            ),
        Direction::Y => {
            let ny = grid.ny;
            let columns: Vec<Vec<T>> = (0..nx)
                .into_par_iter()
                .map(|i| {
                    let col: Vec<T> = (0..ny).map(|j| rhs[j * nx + i]).collect();
                    let mut sol = vec![T::zero(); ny];
                    let mut scratch = vec![T::zero(); ny];
                    thomas::solve_constant_line(k, &col, &mut sol, &mut scratch)?;
                    Ok(sol)
                })
                .collect::<Result<_>>()?;
            for (i, col) in columns.iter().enumerate() {
                for (j, &v) in col.iter().enumerate() {
                    out[j * nx + i] = v;
                }
            }
            Ok(())
        }
    }
}

/// Dimension-split heat / reaction-diffusion system on a Cartesian grid:
/// `u_t = eps (u_xx + u_yy) + source(x,y,t) + reaction(u)`, Dirichlet data from `bc`.
///
/// `F_0` = source plus reaction, `F_1` = x-direction, `F_2` = y-direction.
pub fn build_heat_dimsplit<T: Real>(
    grid: CartesianGrid<T>,
    eps: T,
    bc: BoundaryFn<T>,
    source: SourceFn<T>,
    reaction: Option<ReactionFn<T>>,
) -> Result<SplitSystem<T>> {
    if !(eps > T::zero()) {
        return Err(Error::InvalidInput(format!("diffusion must be positive, got {eps}")));
    }
    let g = grid;
    let f0 = move |t: T, v: &[T], out: &mut [T]| {
        for j in 0..g.ny {
            let y = g.y(j);
            for i in 0..g.nx {
                let k = g.index(i, j);
                let mut f = source(g.x(i), y, t);
                if let Some(r) = &reaction {
                    f += r(v[k]);
                }
                out[k] = f;
            }
        }
    };
    let parts: Vec<Box<dyn AffineOperator<T>>> = vec![
        Box::new(DirectionalLaplacian::new(grid, eps, Direction::X, Some(bc.clone()))),
        Box::new(DirectionalLaplacian::new(grid, eps, Direction::Y, Some(bc))),
    ];
    SplitSystem::new(grid.len(), grid.layout(), Box::new(f0), parts)
}
