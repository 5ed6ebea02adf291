//! Douglas-type stabilizing-correction splitting schemes for `u' = F_0 + F_1 + ... + F_s`,
//! their linear stability functions, and two spatial backends: a dimension-split finite
//! difference grid and a partition-of-unity split P1 finite element mesh.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for `f32` and `f64`);
//! the `*F64` aliases below fix the common choice.

// `!(x > 0)` comparisons deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fdgrid;
pub mod femdd;
pub mod problems;
pub mod scalar;
pub mod schemes;
pub mod stability;
pub mod state;
pub mod system;

pub use error::{Error, Result};
pub use scalar::Real;
pub use schemes::{step, SchemeConfig, SchemeKind};
pub use state::{norm_l2_discrete, norm_max, Layout, Norm, StateVector};
pub use system::{AffineOperator, DiagonalOperator, ExplicitPart, SplitSystem, ZeroExplicit};

pub type StateF64 = StateVector<f64>;
pub type StateF32 = StateVector<f32>;
pub type SplitSystemF64 = SplitSystem<f64>;
pub type SplitSystemF32 = SplitSystem<f32>;
pub type SchemeConfigF64 = SchemeConfig<f64>;
pub type CartesianGridF64 = fdgrid::CartesianGrid<f64>;
pub type MeshHexF64 = femdd::MeshHex<f64>;
pub type SplitStiffnessF64 = femdd::SplitStiffness<f64>;
pub type PartitionOfUnityF64 = femdd::PartitionOfUnity<f64>;
pub type Complex64 = num_complex::Complex<f64>;
