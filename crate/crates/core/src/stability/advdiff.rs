//! Von Neumann analysis for `u_t + a u_x = d u_xx + c u` with explicit advection.

use std::io::{self, Write};

use num_complex::Complex;
use rayon::prelude::*;

use super::{stability_r, stability_r_star};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dimensionless advection-diffusion parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvDiffParams<T> {
    /// Cell Péclet number `a h / d`.
    pub mu: T,
    /// Courant number `dt a / h`.
    pub nu: T,
}

impl<T: Real> AdvDiffParams<T> {
    pub fn new(mu: T, nu: T) -> Result<Self> {
        if !(mu > T::zero() && nu > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "need mu > 0 and nu > 0, got mu = {mu}, nu = {nu}"
            )));
        }
        Ok(Self { mu, nu })
    }

    /// From advection speed `a`, diffusion `d`, mesh width `h` and step `dt`.
    pub fn from_physical(a: T, d: T, h: T, dt: T) -> Result<Self> {
        if !(d > T::zero() && h > T::zero()) {
            return Err(Error::InvalidInput("need d > 0 and h > 0".into()));
        }
        Self::new(a * h / d, dt * a / h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discretization {
    /// Second-order central advection.
    Central,
    /// First-order upwind advection.
    Upwind,
}

/// Fourier symbols `(z_0, z_1)` of the explicit advection and implicit diffusion for mode `phi`.
pub fn advdiff_eigenvalues<T: Real>(
    p: &AdvDiffParams<T>,
    phi: T,
    disc: Discretization,
) -> (Complex<T>, Complex<T>) {
    let two_phi = T::two() * phi;
    let im = p.nu * two_phi.sin();
    let re = match disc {
        Discretization::Central => T::zero(),
        Discretization::Upwind => -p.nu * (T::one() - two_phi.cos()),
    };
    let s = phi.sin();
    let z1 = -T::lit(4.0) * (p.nu / p.mu) * s * s;
    (Complex::new(re, im), Complex::new(z1, T::zero()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionCondition {
    /// `max(|r(z0,z1)|, |r_*(z0,z1)|) <= 1`: worst case over an arbitrary stiff `z_2 <= 0`.
    RFull,
    /// `|r_*(z0,z1)| <= 1` only.
    RStar,
}

/// Boolean stability mask over a `(mu, nu)` grid; `mask[i][j]` belongs to `(mu[i], nu[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionScan<T> {
    pub mu: Vec<T>,
    pub nu: Vec<T>,
    pub mask: Vec<Vec<bool>>,
}

impl<T: Real> RegionScan<T> {
    /// Largest stable `nu` in row `i` of an initial stable run, or `None` if `nu[0]` is unstable.
    pub fn max_stable_nu(&self, i: usize) -> Option<T> {
        let row = &self.mask[i];
        let n = row.iter().take_while(|&&b| b).count();
        (n > 0).then(|| self.nu[n - 1])
    }
}

const STABLE_TOL: f64 = 1e-12;

fn max_amplification<T: Real>(
    p: &AdvDiffParams<T>,
    condition: RegionCondition,
    phi_samples: usize,
) -> T {
    let mut worst = T::zero();
    for k in 0..phi_samples {
        let phi = T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(phi_samples);
        let (z0, z1) = advdiff_eigenvalues(p, phi, Discretization::Central);
        // z1 <= 0 and z0 is imaginary: no poles reachable
        let rs = stability_r_star(z0, &[z1]).map(|r| r.norm()).unwrap_or(T::infinity());
        worst = worst.max(rs);
        if condition == RegionCondition::RFull {
            let r = stability_r(&[z0, z1]).map(|r| r.norm()).unwrap_or(T::infinity());
            worst = worst.max(r);
        }
    }
    worst
}

/// Scans the central-advection stability region; rows are processed in parallel and the
/// result does not depend on scheduling.
pub fn scan_stability_region<T: Real>(
    mu_grid: &[T],
    nu_grid: &[T],
    condition: RegionCondition,
    phi_samples: usize,
) -> Result<RegionScan<T>> {
    if mu_grid.is_empty() || nu_grid.is_empty() {
        return Err(Error::InvalidInput("empty scan grid".into()));
    }
    if phi_samples < 64 {
        return Err(Error::InvalidInput(format!(
            "phi_samples must be >= 64, got {phi_samples}"
        )));
    }
    let tol = T::one() + T::lit(STABLE_TOL);
    let mask = mu_grid
        .par_iter()
        .map(|&mu| {
            nu_grid
                .iter()
                .map(|&nu| match AdvDiffParams::new(mu, nu) {
                    Ok(p) => max_amplification(&p, condition, phi_samples) <= tol,
                    Err(_) => false,
                })
                .collect()
        })
        .collect();
    Ok(RegionScan {
        mu: mu_grid.to_vec(),
        nu: nu_grid.to_vec(),
        mask,
    })
}

/// CSV with header `mu,nu,stable`, one row per cell, `mu` outermost.
pub fn write_region_csv<T: Real, W: Write>(scan: &RegionScan<T>, mut out: W) -> io::Result<()> {
    writeln!(out, "mu,nu,stable")?;
    for (i, &mu) in scan.mu.iter().enumerate() {
        for (j, &nu) in scan.nu.iter().enumerate() {
            writeln!(out, "{},{},{}", mu, nu, u8::from(scan.mask[i][j]))?;
        }
    }
    Ok(())
}

/// Mesh-dependent splitting of central advection-diffusion stencils into an upwind-like
/// explicit part `(a/h)[1, -1, 0]` and the remaining diffusion `(1 - mu/2)(d/h^2)[1, -2, 1]`.
///
/// Requires `mu = a h / d <= 2`.
pub fn upwind_equivalent_split<T: Real>(a: T, d: T, h: T) -> Result<([T; 3], [T; 3])> {
    if !(d > T::zero() && h > T::zero()) {
        return Err(Error::InvalidInput("need d > 0 and h > 0".into()));
    }
    let mu = a * h / d;
    if mu > T::two() {
        return Err(Error::PecletBound { mu: mu.as_f64() });
    }
    let c0 = a / h;
    let c1 = (T::one() - T::half() * mu) * d / (h * h);
    Ok(([c0, -c0, T::zero()], [c1, -T::two() * c1, c1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn central_eigenvalues() {
        let p = AdvDiffParams::new(2.0, 1.0).unwrap();
        let (z0, z1) = advdiff_eigenvalues(&p, 0.0, Discretization::Central);
        assert_eq!((z0.norm(), z1.norm()), (0.0, 0.0));
        let (z0, z1) = advdiff_eigenvalues(&p, PI / 2.0, Discretization::Central);
        assert!(z0.norm() < 1e-15);
        assert!((z1.re + 2.0).abs() < 1e-15);
    }

    #[test]
    fn upwind_eigenvalues_on_unit_circle() {
        let p = AdvDiffParams::new(0.7, 1.0).unwrap();
        for k in 0..100 {
            let phi = 2.0 * PI * k as f64 / 100.0;
            let (z0, _) = advdiff_eigenvalues(&p, phi, Discretization::Upwind);
            assert!(((z0 + 1.0).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn split_examples() {
        let (s0, s1) = upwind_equivalent_split(1.0, 1.0, 1.0).unwrap();
        assert_eq!(s0, [1.0, -1.0, 0.0]);
        assert_eq!(s1, [0.5, -1.0, 0.5]);
        let (_, s1) = upwind_equivalent_split(2.0, 1.0, 1.0).unwrap();
        assert_eq!(s1, [0.0, 0.0, 0.0]);
        assert!(matches!(
            upwind_equivalent_split(3.0, 1.0, 1.0),
            Err(Error::PecletBound { .. })
        ));
    }

    #[test]
    fn scan_rejects_bad_input() {
        assert!(scan_stability_region::<f64>(&[], &[1.0], RegionCondition::RStar, 64).is_err());
        assert!(scan_stability_region(&[1.0], &[1.0], RegionCondition::RStar, 10).is_err());
    }

    #[test]
    fn csv_layout() {
        let scan = RegionScan {
            mu: vec![1.0, 2.0],
            nu: vec![0.5],
            mask: vec![vec![true], vec![false]],
        };
        let mut buf = Vec::new();
        write_region_csv(&scan, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "mu,nu,stable\n1,0.5,1\n2,0.5,0\n");
    }

    proptest! {
        #[test]
        fn split_sums_to_central_stencils(a in 0.01f64..10.0, d in 0.01f64..10.0, h in 0.001f64..1.0) {
            prop_assume!(a * h / d <= 2.0);
            let (s0, s1) = upwind_equivalent_split(a, d, h).unwrap();
            let sa = [a / (2.0 * h), 0.0, -a / (2.0 * h)];
            let sd = [d / (h * h), -2.0 * d / (h * h), d / (h * h)];
            for k in 0..3 {
                let want = sa[k] + sd[k];
                let got = s0[k] + s1[k];
                prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()));
            }
        }
    }
}
