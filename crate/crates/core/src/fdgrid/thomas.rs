use crate::error::{Error, Result};
use crate::scalar::Real;

/// Solves a tridiagonal system with the Thomas algorithm.
///
/// `lower[i]` couples row `i` to `i - 1` (`lower[0]` is ignored), `upper[i]` couples row `i`
/// to `i + 1` (`upper[n-1]` is ignored). No pivoting: intended for diagonally dominant systems.
pub fn thomas_solve<T: Real>(lower: &[T], diag: &[T], upper: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let mut out = vec![T::zero(); rhs.len()];
    let mut scratch = vec![T::zero(); rhs.len()];
    thomas_solve_into(lower, diag, upper, rhs, &mut out, &mut scratch)?;
    Ok(out)
}

/// Allocation-free variant; `scratch` must be as long as `rhs`.
pub fn thomas_solve_into<T: Real>(
    lower: &[T],
    diag: &[T],
    upper: &[T],
    rhs: &[T],
    out: &mut [T],
    scratch: &mut [T],
) -> Result<()> {
    let n = rhs.len();
    if diag.len() != n || lower.len() != n || upper.len() != n || out.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: diag.len(),
        });
    }
    if n == 0 {
        return Ok(());
    }
    let c = scratch;
    if diag[0] == T::zero() {
        return Err(Error::TridiagonalBreakdown { row: 0 });
    }
    c[0] = upper[0] / diag[0];
    out[0] = rhs[0] / diag[0];
    for i in 1..n {
        let pivot = diag[i] - lower[i] * c[i - 1];
        if pivot == T::zero() || !pivot.is_finite() {
            return Err(Error::TridiagonalBreakdown { row: i });
        }
        c[i] = upper[i] / pivot;
        out[i] = (rhs[i] - lower[i] * out[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        out[i] -= c[i] * out[i + 1];
    }
    Ok(())
}

/// Constant-coefficient solve of `(1 + 2k) w_i - k (w_{i-1} + w_{i+1}) = rhs_i`.
///
/// This is `(I - gamma A) w = rhs` for `A = (eps/h^2) tridiag(1, -2, 1)` with `k = gamma eps/h^2`.
pub(crate) fn solve_constant_line<T: Real>(
    k: T,
    rhs: &[T],
    out: &mut [T],
    scratch: &mut [T],
) -> Result<()> {
    let n = rhs.len();
    let main = T::one() + T::two() * k;
    let off = -k;
    if main == T::zero() {
        return Err(Error::TridiagonalBreakdown { row: 0 });
    }
    let c = scratch;
    c[0] = off / main;
    out[0] = rhs[0] / main;
    for i in 1..n {
        let pivot = main - off * c[i - 1];
        if pivot == T::zero() {
            return Err(Error::TridiagonalBreakdown { row: i });
        }
        c[i] = off / pivot;
        out[i] = (rhs[i] - off * out[i - 1]) / pivot;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        out[i] -= c[i] * out[i + 1];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Dense Gaussian elimination with partial pivoting, test oracle only.
    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())
                .unwrap();
            a.swap(k, p);
            b.swap(k, p);
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
            x[i] = (b[i] - s) / a[i][i];
        }
        x
    }

    #[test]
    fn identity() {
        let x = thomas_solve(&[0.0, 0.0], &[1.0, 1.0], &[0.0, 0.0], &[5.0, -1.0]).unwrap();
        assert_eq!(x, vec![5.0, -1.0]);
    }

    #[test]
    fn three_by_three() {
        let x = thomas_solve(&[0.0, -1.0, -1.0], &[2.0; 3], &[-1.0, -1.0, 0.0], &[1.0, 0.0, 0.0])
            .unwrap();
        let dense = dense_solve(
            vec![
                vec![2.0, -1.0, 0.0],
                vec![-1.0, 2.0, -1.0],
                vec![0.0, -1.0, 2.0],
            ],
            vec![1.0, 0.0, 0.0],
        );
        for (a, b) in x.iter().zip([0.75f64, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
        for (a, b) in x.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_pivot_breaks_down() {
        let r = thomas_solve(&[0.0, 1.0], &[1.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]);
        assert_eq!(r, Err(Error::TridiagonalBreakdown { row: 1 }));
        assert_eq!(
            thomas_solve(&[0.0], &[0.0], &[0.0], &[1.0]),
            Err(Error::TridiagonalBreakdown { row: 0 })
        );
    }

    #[test]
    fn constant_line_matches_general() {
        let rhs = [1.0, -2.0, 0.5, 3.0, 0.0];
        let k = 0.7f64;
        let mut out = [0.0; 5];
        let mut scratch = [0.0; 5];
        solve_constant_line(k, &rhs, &mut out, &mut scratch).unwrap();
        let general = thomas_solve(&[-k; 5], &[1.0 + 2.0 * k; 5], &[-k; 5], &rhs).unwrap();
        for (a, b) in out.iter().zip(&general) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn residual_round_trip(
            rows in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -10.0f64..10.0), 1..40)
        ) {
            let n = rows.len();
            let lower: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let upper: Vec<f64> = rows.iter().map(|r| r.1).collect();
            let diag: Vec<f64> = (0..n).map(|i| 2.5 + lower[i].abs() + upper[i].abs()).collect();
            let rhs: Vec<f64> = rows.iter().map(|r| r.2).collect();
            let x = thomas_solve(&lower, &diag, &upper, &rhs).unwrap();
            let norm = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
            for i in 0..n {
                let mut ax = diag[i] * x[i];
                if i > 0 { ax += lower[i] * x[i - 1]; }
                if i + 1 < n { ax += upper[i] * x[i + 1]; }
                prop_assert!((ax - rhs[i]).abs() <= 1e-13 * norm);
            }
        }
    }
}
