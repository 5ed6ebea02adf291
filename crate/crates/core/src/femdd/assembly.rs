use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use super::cholesky::ProfileCholesky;
use super::mesh::MeshHex;
use super::pou::PartitionOfUnity;
use super::sparse::{find_components, CsrMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Number of weighted stiffness parts.
pub const PARTS: usize = 4;

/// Factors of one part's components at one `gamma`.
type FactorSet<T> = Arc<Vec<ProfileCholesky<T>>>;

/// Weighted stiffness operators `A_j = -D K_j` of the mass-lumped P1 discretization.
pub struct SplitStiffness<T: Real> {
    pub parts: Vec<CsrMatrix<T>>,
    /// Unweighted `A = -D K`.
    pub full: CsrMatrix<T>,
    /// Lumped mass diagonal.
    pub mass: Vec<T>,
    pub components: Vec<Vec<Vec<usize>>>,
    cache: Mutex<HashMap<(usize, u64), FactorSet<T>>>,
}

impl<T: Real> std::fmt::Debug for SplitStiffness<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SplitStiffness")
            .field("nodes", &self.mass.len())
            .field(
                "components",
                &self.components.iter().map(Vec::len).collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Assembles `A_j = -D sum_e psi_j(c_e) K_e` and the lumped mass (one third of each element
/// area per vertex). The weights are evaluated at element centroids, so `sum_j A_j = A`
/// holds up to summation order.
pub fn assemble_split_fem<T: Real>(
    mesh: &MeshHex<T>,
    pou: &PartitionOfUnity<T>,
    d: T,
) -> Result<SplitStiffness<T>> {
    let n = mesh.node_count();
    let third = T::one() / T::lit(3.0);
    let mut mass = vec![T::zero(); n];
    let mut full = Vec::with_capacity(9 * mesh.triangles.len());
    let mut parts: Vec<Vec<(usize, usize, T)>> = vec![Vec::new(); PARTS];

    for (e, tri) in mesh.triangles.iter().enumerate() {
        let area = mesh.area(e);
        if !(area > T::zero()) {
            return Err(Error::DegenerateElement { element: e });
        }
        let p = tri.map(|k| mesh.nodes[k]);
        // grad phi_a = perp(p_c - p_b) / (2 area)
        let grads: [[T; 2]; 3] = std::array::from_fn(|a| {
            let b = p[(a + 1) % 3];
            let c = p[(a + 2) % 3];
            let s = T::one() / (T::two() * area);
            [(b[1] - c[1]) * s, (c[0] - b[0]) * s]
        });
        let c = mesh.centroid(e);
        let w = pou.weights(c[0], c[1]);
        for a in 0..3 {
            mass[tri[a]] += area * third;
            for b in 0..3 {
                let k = area * (grads[a][0] * grads[b][0] + grads[a][1] * grads[b][1]);
                let entry = -d * k;
                full.push((tri[a], tri[b], entry));
                for (j, &wj) in w.iter().enumerate() {
                    if wj > T::zero() {
                        parts[j].push((tri[a], tri[b], wj * entry));
                    }
                }
            }
        }
    }

    let parts: Vec<CsrMatrix<T>> = parts
        .into_iter()
        .map(|t| CsrMatrix::from_triplets(n, t))
        .collect();
    let components = parts.iter().map(find_components).collect();
    Ok(SplitStiffness {
        parts,
        full: CsrMatrix::from_triplets(n, full),
        mass,
        components,
        cache: Mutex::new(HashMap::new()),
    })
}

impl<T: Real> SplitStiffness<T> {
    pub fn nodes(&self) -> usize {
        self.mass.len()
    }

    /// Cholesky factors of `M - gamma A_j` on each component of part `j`, cached per `(j, gamma)`.
    pub fn factors(&self, j: usize, gamma: T) -> Result<FactorSet<T>> {
        let key = (j, gamma.as_f64().to_bits());
        if let Some(f) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Ok(Arc::clone(f));
        }
        let a = &self.parts[j];
        let factors = self.components[j]
            .par_iter()
            .enumerate()
            .map(|(ci, comp)| {
                let rows: Vec<Vec<(usize, T)>> = comp
                    .iter()
                    .enumerate()
                    .map(|(li, &g)| {
                        let (cols, vals) = a.row(g);
                        let mut row = Vec::with_capacity(cols.len());
                        for (&c, &v) in cols.iter().zip(vals) {
                            if c > g {
                                break;
                            }
                            if c != g && v == T::zero() {
                                continue;
                            }
                            let lc = comp.binary_search(&c).expect("component is closed");
                            let diag = if c == g { self.mass[g] } else { T::zero() };
                            row.push((lc, diag - gamma * v));
                        }
                        if row.last().map(|&(c, _)| c) != Some(li) {
                            row.push((li, self.mass[g]));
                        }
                        row
                    })
                    .collect();
                ProfileCholesky::factor(&rows).ok_or(Error::Factorization {
                    part: j,
                    component: ci,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let factors = Arc::new(factors);
        self.cache
            .lock()
            .expect("cache poisoned")
            .insert(key, Arc::clone(&factors));
        Ok(factors)
    }

    pub fn cached_factorizations(&self) -> usize {
        self.cache.lock().expect("cache poisoned").len()
    }

    pub fn clear_cache(&self) {
        self.cache.lock().expect("cache poisoned").clear();
    }

    /// `out = M^{-1} A_j v`.
    pub fn apply_part(&self, j: usize, v: &[T], out: &mut [T]) {
        self.parts[j].mul_vec(v, out);
        for (o, &m) in out.iter_mut().zip(&self.mass) {
            *o /= m;
        }
    }

    /// Solves `(M - gamma A_j) out = M rhs`; nodes outside the support of `A_j` copy `rhs`.
    pub fn stage_solve_into(&self, j: usize, gamma: T, rhs: &[T], out: &mut [T]) -> Result<()> {
        if j >= PARTS {
            return Err(Error::InvalidInput(format!("part index {j} out of range")));
        }
        if !(gamma >= T::zero()) {
            return Err(Error::InvalidInput(format!("stage gamma {gamma} must be >= 0")));
        }
        let n = self.nodes();
        if rhs.len() != n || out.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rhs.len().min(out.len()),
            });
        }
        out.copy_from_slice(rhs);
        if gamma == T::zero() {
            return Ok(());
        }
        let factors = self.factors(j, gamma)?;
        let solved: Vec<Vec<T>> = self.components[j]
            .par_iter()
            .zip(factors.par_iter())
            .map(|(comp, f)| {
                let mut x: Vec<T> = comp.iter().map(|&g| self.mass[g] * rhs[g]).collect();
                f.solve_in_place(&mut x);
                x
            })
            .collect();
        for (comp, x) in self.components[j].iter().zip(solved) {
            for (&g, v) in comp.iter().zip(x) {
                out[g] = v;
            }
        }
        Ok(())
    }
}

/// Allocating form of [`SplitStiffness::stage_solve_into`].
pub fn stage_solve_dd<T: Real>(s: &SplitStiffness<T>, j: usize, gamma: T, rhs: &[T]) -> Result<Vec<T>> {
    let mut out = vec![T::zero(); rhs.len()];
    s.stage_solve_into(j, gamma, rhs, &mut out)?;
    Ok(out)
}
