//! Linear stability of the modified Douglas schemes on the scalar test equation
//! `u' = (lambda_0 + lambda_1 + ... + lambda_s) u`, with `z_j = dt * lambda_j`.
//!
//! Both modified schemes share the stability function
//!
//! ```text
//! r(z_0, ..., z_s) = 1 + (1 + z_0/2) (z_0 + ... + z_s) / prod_{j>=1} (1 - z_j/2)
//! ```
//!
//! and its `z_s -> -inf` limit
//!
//! ```text
//! r_*(z_0, ..., z_{s-1}) = 1 - 2 (1 + z_0/2) / prod_{1<=j<s} (1 - z_j/2).
//! ```

mod advdiff;
mod sampling;

pub use advdiff::{
    advdiff_eigenvalues, scan_stability_region, upwind_equivalent_split, write_region_csv,
    AdvDiffParams, Discretization, RegionCondition, RegionScan,
};
pub use sampling::{sample_wedge_max, WedgeSampler, Z0Mode};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Scaled eigenvalue tuple `(z_0, z_1, ..., z_s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityPoint<T> {
    z: Vec<Complex<T>>,
}

impl<T: Real> StabilityPoint<T> {
    /// Requires `s >= 1`, i.e. at least two entries.
    pub fn new(z: Vec<Complex<T>>) -> Result<Self> {
        if z.len() < 2 {
            return Err(Error::InvalidInput(
                "a stability point needs z_0 and at least one implicit z_j".into(),
            ));
        }
        Ok(Self { z })
    }

    pub fn from_real(z: &[T]) -> Result<Self> {
        Self::new(z.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn s(&self) -> usize {
        self.z.len() - 1
    }

    pub fn z(&self) -> &[Complex<T>] {
        &self.z
    }

    pub fn r(&self) -> Result<Complex<T>> {
        stability_r(&self.z)
    }
}

/// `prod (1 - z_j / 2)`; errors on an exact pole.
fn implicit_denominator<T: Real>(z: &[Complex<T>]) -> Result<Complex<T>> {
    let two = Complex::new(T::two(), T::zero());
    let mut denom = Complex::new(T::one(), T::zero());
    for &zj in z {
        if zj == two {
            return Err(Error::StabilityPole);
        }
        denom *= Complex::new(T::one(), T::zero()) - zj.scale(T::half());
    }
    Ok(denom)
}

/// Stability function `r(z_0, ..., z_s)` of the modified Douglas schemes.
///
/// `z[0]` is the explicit eigenvalue; the remaining entries are the implicit ones.
pub fn stability_r<T: Real>(z: &[Complex<T>]) -> Result<Complex<T>> {
    if z.is_empty() {
        return Err(Error::EmptyState);
    }
    let denom = implicit_denominator(&z[1..])?;
    let sum: Complex<T> = z.iter().fold(Complex::new(T::zero(), T::zero()), |a, &b| a + b);
    let lead = Complex::new(T::one(), T::zero()) + z[0].scale(T::half());
    Ok(Complex::new(T::one(), T::zero()) + lead * sum / denom)
}

/// Limit of `r(z_0, head..., z_s)` as `z_s -> -inf`; `head` holds `z_1..z_{s-1}`.
pub fn stability_r_star<T: Real>(z0: Complex<T>, head: &[Complex<T>]) -> Result<Complex<T>> {
    let denom = implicit_denominator(head)?;
    let lead = Complex::new(T::one(), T::zero()) + z0.scale(T::half());
    Ok(Complex::new(T::one(), T::zero()) - lead.scale(T::two()) / denom)
}

/// Closed wedge `W_alpha = { z : z = 0 or |arg(-z)| <= alpha }` in the left half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wedge<T> {
    pub alpha: T,
}

impl<T: Real> Wedge<T> {
    pub fn new(alpha: T) -> Self {
        Self { alpha }
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        in_wedge(z, self.alpha)
    }
}

pub fn in_wedge<T: Real>(z: Complex<T>, alpha: T) -> bool {
    if z.re == T::zero() && z.im == T::zero() {
        return true;
    }
    (-z).arg().abs() <= alpha
}
