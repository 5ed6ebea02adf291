//! Randomized certification / falsification of `|r| <= 1` over wedge-constrained eigenvalues.
//!
//! `r` is analytic in each `z_j` away from its poles, so maxima over a wedge are attained on
//! the wedge boundary rays (or at `z_j -> -inf`, evaluated exactly with `r_*`). Samples are
//! therefore drawn on the rays only.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{stability_r, stability_r_star};
use crate::scalar::Real;

/// Where `z_0` is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Z0Mode {
    /// `z_0 = 0`.
    Zero,
    /// `z_0` on the circle `|1 + z_0| = 1`.
    UnitDiskShifted,
}

/// Sampler with a separate wedge angle for every implicit eigenvalue `z_1..z_s`.
#[derive(Debug, Clone)]
pub struct WedgeSampler<T> {
    pub alphas: Vec<T>,
    pub z0_mode: Z0Mode,
    /// Moduli are log-uniform in `[min_modulus, max_modulus]`.
    pub min_modulus: T,
    pub max_modulus: T,
}

impl<T: Real> WedgeSampler<T> {
    pub fn new(alphas: Vec<T>, z0_mode: Z0Mode) -> Self {
        Self {
            alphas,
            z0_mode,
            min_modulus: T::lit(1e-3),
            max_modulus: T::lit(1e3),
        }
    }

    pub fn uniform(s: usize, alpha: T, z0_mode: Z0Mode) -> Self {
        Self::new(vec![alpha; s], z0_mode)
    }

    /// Maximum of `|r|` over `n_samples` deterministic pseudo-random boundary tuples.
    pub fn max_abs_r(&self, n_samples: usize, seed: u64) -> T {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = self.alphas.len();
        let ln_lo = self.min_modulus.as_f64().ln();
        let ln_hi = self.max_modulus.as_f64().ln();
        let mut best = T::zero();
        let mut z = vec![Complex::new(T::zero(), T::zero()); s + 1];
        for _ in 0..n_samples {
            z[0] = match self.z0_mode {
                Z0Mode::Zero => Complex::new(T::zero(), T::zero()),
                Z0Mode::UnitDiskShifted => {
                    let phi = T::lit(rng.random_range(0.0..std::f64::consts::TAU));
                    Complex::new(phi.cos() - T::one(), phi.sin())
                }
            };
            for (zj, &alpha) in z[1..].iter_mut().zip(&self.alphas) {
                // occasionally land exactly on the apex
                if rng.random_range(0..16) == 0 {
                    *zj = Complex::new(T::zero(), T::zero());
                    continue;
                }
                let rho = T::lit(rng.random_range(ln_lo..ln_hi).exp());
                let side = if rng.random_bool(0.5) { T::one() } else { -T::one() };
                // -rho * e^{i side alpha}
                *zj = Complex::new(-rho * alpha.cos(), -rho * side * alpha.sin());
            }
            // limit point: the last entry at -infinity along the negative real axis
            let use_limit = rng.random_range(0..8) == 0;
            let value = if use_limit {
                stability_r_star(z[0], &z[1..s])
            } else {
                stability_r(&z)
            };
            if let Ok(r) = value {
                let m = r.norm();
                if m > best {
                    best = m;
                }
            }
        }
        best
    }
}

/// `max |r|` with all `s` implicit eigenvalues on the rays of one wedge `W_alpha`.
pub fn sample_wedge_max<T: Real>(
    s: usize,
    alpha: T,
    n_samples: usize,
    seed: u64,
    z0_mode: Z0Mode,
) -> T {
    WedgeSampler::uniform(s, alpha, z0_mode).max_abs_r(n_samples, seed)
}
