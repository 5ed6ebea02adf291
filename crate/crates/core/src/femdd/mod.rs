//! Mass-lumped P1 finite elements on a hexagon with Neumann conditions, split into four
//! partition-of-unity weighted stiffness operators.

mod assembly;
mod cholesky;
mod mesh;
mod pou;
mod sparse;

use std::io::{self, Write};
use std::sync::Arc;

use rayon::prelude::*;

pub use assembly::{assemble_split_fem, stage_solve_dd, SplitStiffness, PARTS};
pub use cholesky::ProfileCholesky;
pub use mesh::{triangulate_hexagon, MeshHex};
pub use pou::PartitionOfUnity;
pub use sparse::{find_components, CsrMatrix};

use crate::error::{Error, Result};
use crate::problems::{schnakenberg_initial, schnakenberg_reaction, SchnakParams};
use crate::scalar::Real;
use crate::state::{Layout, StateVector};
use crate::system::{AffineOperator, SplitSystem};

/// `psi(z)` of a partition of unity.
pub fn pou_psi<T: Real>(z: T, p: &PartitionOfUnity<T>) -> T {
    p.psi(z)
}

/// Part `j` of the weighted Laplacian acting on node-major interleaved species, one
/// [`SplitStiffness`] (already scaled by its diffusion coefficient) per species.
pub struct DdOperator<T: Real> {
    species: Vec<Arc<SplitStiffness<T>>>,
    part: usize,
}

impl<T: Real> DdOperator<T> {
    pub fn new(species: Vec<Arc<SplitStiffness<T>>>, part: usize) -> Result<Self> {
        if species.is_empty() || part >= PARTS {
            return Err(Error::InvalidInput("invalid DD operator".into()));
        }
        let n = species[0].nodes();
        if let Some(s) = species.iter().find(|s| s.nodes() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.nodes(),
            });
        }
        Ok(Self { species, part })
    }

    fn stride(&self) -> usize {
        self.species.len()
    }

    fn gather(&self, v: &[T], k: usize) -> Vec<T> {
        v.iter().skip(k).step_by(self.stride()).copied().collect()
    }
}

impl<T: Real> AffineOperator<T> for DdOperator<T> {
    fn apply(&self, v: &[T], out: &mut [T]) {
        let m = self.stride();
        for (k, s) in self.species.iter().enumerate() {
            s.parts[self.part].mul_vec_strided(v, out, m, k);
            for (i, &mi) in s.mass.iter().enumerate() {
                out[i * m + k] /= mi;
            }
        }
    }

    fn source(&self, _t: T, out: &mut [T]) {
        out.fill(T::zero());
    }

    fn stage_solve(&self, gamma: T, rhs: &[T], out: &mut [T]) -> Result<()> {
        let m = self.stride();
        let solved = self
            .species
            .par_iter()
            .enumerate()
            .map(|(k, s)| stage_solve_dd(s, self.part, gamma, &self.gather(rhs, k)))
            .collect::<Result<Vec<_>>>()?;
        for (k, w) in solved.into_iter().enumerate() {
            for (i, x) in w.into_iter().enumerate() {
                out[i * m + k] = x;
            }
        }
        Ok(())
    }
}

/// Two-species Schnakenberg system: `F_0` is the reaction, `F_j` the `j`-th weighted Laplacian
/// with `D_1` on `u` and `D_2` on `v`.
pub fn build_schnakenberg_system<T: Real>(
    mesh: &MeshHex<T>,
    pou: &PartitionOfUnity<T>,
    params: &SchnakParams<T>,
) -> Result<SplitSystem<T>> {
    let su = Arc::new(assemble_split_fem(mesh, pou, params.d1)?);
    let sv = Arc::new(assemble_split_fem(mesh, pou, params.d2)?);
    let parts = (0..PARTS)
        .map(|j| {
            DdOperator::new(vec![Arc::clone(&su), Arc::clone(&sv)], j)
                .map(|op| Box::new(op) as Box<dyn AffineOperator<T>>)
        })
        .collect::<Result<Vec<_>>>()?;
    let p = *params;
    let reaction = move |_t: T, v: &[T], out: &mut [T]| {
        for (o, x) in out.chunks_exact_mut(2).zip(v.chunks_exact(2)) {
            let (fu, fv) = schnakenberg_reaction(x[0], x[1], &p);
            o[0] = fu;
            o[1] = fv;
        }
    };
    let nodes = mesh.node_count();
    SplitSystem::new(
        2 * nodes,
        Layout::Mesh { nodes, species: 2 },
        Box::new(reaction),
        parts,
    )
}

/// Initial state: steady state plus the Gaussian bump in `u`.
pub fn schnakenberg_initial_state<T: Real>(
    mesh: &MeshHex<T>,
    params: &SchnakParams<T>,
) -> Result<StateVector<T>> {
    let values = mesh
        .nodes
        .iter()
        .flat_map(|p| {
            let (u, v) = schnakenberg_initial(p[0], p[1], params);
            [u, v]
        })
        .collect();
    StateVector::new(
        values,
        Layout::Mesh {
            nodes: mesh.node_count(),
            species: 2,
        },
    )
}

/// CSV `x,y,u,v`, one row per node.
pub fn write_snapshot_csv<T: Real, W: Write>(
    mesh: &MeshHex<T>,
    state: &[T],
    mut out: W,
) -> io::Result<()> {
    if state.len() != 2 * mesh.node_count() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "snapshot needs two species per node",
        ));
    }
    writeln!(out, "x,y,u,v")?;
    for (p, s) in mesh.nodes.iter().zip(state.chunks_exact(2)) {
        writeln!(out, "{},{},{},{}", p[0], p[1], s[0], s[1])?;
    }
    Ok(())
}
