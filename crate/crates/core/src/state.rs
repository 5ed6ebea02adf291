//! State vectors and the discrete norms used for error measurement.

use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Identifies which backend owns a state vector and how entries map to space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layout {
    /// Plain ODE unknowns.
    Scalar,
    /// Interior nodes of a Cartesian grid, x fastest, `species` interleaved per node.
    Cartesian { nx: usize, ny: usize, species: usize },
    /// Mesh nodes, `species` interleaved per node (node-major).
    Mesh { nodes: usize, species: usize },
}

impl Layout {
    /// Number of values the layout implies; `None` for untyped scalar vectors.
    pub fn value_count(&self) -> Option<usize> {
        match *self {
            Layout::Scalar => None,
            Layout::Cartesian { nx, ny, species } => Some(nx * ny * species),
            Layout::Mesh { nodes, species } => Some(nodes * species),
        }
    }
}

/// Flat real-valued unknown vector with a layout tag.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    values: Vec<T>,
    layout: Layout,
}

impl<T: Real> StateVector<T> {
    pub fn new(values: Vec<T>, layout: Layout) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyState);
        }
        if let Some(n) = layout.value_count() {
            if n != values.len() {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: values.len(),
                });
            }
        }
        Ok(Self { values, layout })
    }

    pub fn scalar(values: Vec<T>) -> Result<Self> {
        Self::new(values, Layout::Scalar)
    }

    pub fn zeros(len: usize, layout: Layout) -> Result<Self> {
        Self::new(vec![T::zero(); len], layout)
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Same layout, new values; used by steppers to wrap their output.
    pub(crate) fn with_values(&self, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            values,
            layout: self.layout,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Entry-wise difference `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(self.with_values(values))
    }

    /// Extracts one species from an interleaved multi-species vector.
    pub fn species(&self, k: usize) -> Vec<T> {
        let ns = match self.layout {
            Layout::Scalar => 1,
            Layout::Cartesian { species, .. } | Layout::Mesh { species, .. } => species,
        };
        self.values.iter().skip(k).step_by(ns).copied().collect()
    }
}

impl<T> Deref for StateVector<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.values
    }
}

impl<T> DerefMut for StateVector<T> {
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.values
    }
}

/// Discrete L2 norm `sqrt(1/m * sum v_i^2)`.
pub fn norm_l2_discrete<T: Real>(v: &[T]) -> Result<T> {
    if v.is_empty() {
        return Err(Error::EmptyState);
    }
    // scale by the max entry so squares cannot overflow
    let scale = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if scale == T::zero() {
        return Ok(T::zero());
    }
    let sum: T = v.iter().map(|&x| (x / scale) * (x / scale)).sum();
    Ok(scale * (sum / T::from_usize_lossy(v.len())).sqrt())
}

/// Maximum norm `max_i |v_i|`.
pub fn norm_max<T: Real>(v: &[T]) -> Result<T> {
    if v.is_empty() {
        return Err(Error::EmptyState);
    }
    Ok(v.iter().fold(T::zero(), |m, x| m.max(x.abs())))
}

/// Norm selector used by the error harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    L2,
    Max,
}

impl Norm {
    pub fn eval<T: Real>(self, v: &[T]) -> Result<T> {
        match self {
            Norm::L2 => norm_l2_discrete(v),
            Norm::Max => norm_max(v),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Norm::L2 => "L2",
            Norm::Max => "MAX",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn l2_examples() {
        assert_eq!(norm_l2_discrete(&[1.0, 1.0, 1.0, 1.0]).unwrap(), 1.0);
        assert_relative_eq!(
            norm_l2_discrete(&[3.0, 4.0]).unwrap(),
            (12.5f64).sqrt(),
            max_relative = 1e-15
        );
        assert_eq!(norm_l2_discrete(&[0.0; 5]).unwrap(), 0.0);
    }

    #[test]
    fn max_examples() {
        assert_eq!(norm_max(&[1.0, -7.0, 3.0]).unwrap(), 7.0);
        assert_eq!(norm_max(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(norm_max(&[-2.5]).unwrap(), 2.5);
    }

    #[test]
    fn empty_is_rejected() {
        let empty: [f64; 0] = [];
        assert_eq!(norm_l2_discrete(&empty), Err(Error::EmptyState));
        assert_eq!(norm_max(&empty), Err(Error::EmptyState));
        assert_eq!(
            StateVector::<f64>::scalar(vec![]).unwrap_err(),
            Error::EmptyState
        );
    }

    #[test]
    fn layout_length_is_checked() {
        let bad = StateVector::new(vec![0.0f64; 5], Layout::Cartesian { nx: 2, ny: 2, species: 1 });
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn species_extraction_is_node_major() {
        let v = StateVector::new(vec![1.0, 10.0, 2.0, 20.0], Layout::Mesh { nodes: 2, species: 2 })
            .unwrap();
        assert_eq!(v.species(0), vec![1.0, 2.0]);
        assert_eq!(v.species(1), vec![10.0, 20.0]);
    }

    proptest! {
        #[test]
        fn l2_bounded_by_max(v in prop::collection::vec(-1e3f64..1e3, 1..64)) {
            let l2 = norm_l2_discrete(&v).unwrap();
            let mx = norm_max(&v).unwrap();
            prop_assert!(l2 <= mx * (1.0 + 1e-15));
        }

        #[test]
        fn norms_are_homogeneous(
            v in prop::collection::vec(-1e3f64..1e3, 1..64),
            alpha in -1e3f64..1e3,
        ) {
            let scaled: Vec<f64> = v.iter().map(|x| alpha * x).collect();
            for norm in [Norm::L2, Norm::Max] {
                let lhs = norm.eval(&scaled).unwrap();
                let rhs = alpha.abs() * norm.eval(&v).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
            }
        }
    }
}
