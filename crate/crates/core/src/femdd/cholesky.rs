//! Envelope (profile) Cholesky factorization for small SPD blocks.

use crate::scalar::Real;

/// `L L^T` factor stored row-wise over each row's envelope `first[i]..=i`.
#[derive(Debug, Clone)]
pub struct ProfileCholesky<T> {
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<T>,
}

impl<T: Real> ProfileCholesky<T> {
    /// Factors the symmetric matrix given by its lower-triangle rows: `rows[i]` lists
    /// `(j, a_ij)` for `j <= i`, in any order. Returns `None` unless the matrix is SPD.
    pub fn factor(rows: &[Vec<(usize, T)>]) -> Option<Self> {
        let n = rows.len();
        let mut first = Vec::with_capacity(n);
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for (i, row) in rows.iter().enumerate() {
            let f = row.iter().map(|&(j, _)| j).min().unwrap_or(i).min(i);
            first.push(f);
            start.push(start[i] + (i - f + 1));
        }
        let mut data = vec![T::zero(); start[n]];
        for (i, row) in rows.iter().enumerate() {
            for &(j, v) in row {
                debug_assert!(j <= i);
                data[start[i] + (j - first[i])] += v;
            }
        }
        let mut chol = Self { first, start, data };
        for i in 0..n {
            let fi = chol.first[i];
            for j in fi..i {
                let fj = chol.first[j];
                let lo = fi.max(fj);
                let mut s = chol.data[chol.start[i] + (j - fi)];
                for k in lo..j {
                    s -= chol.data[chol.start[i] + (k - fi)] * chol.data[chol.start[j] + (k - fj)];
                }
                let ljj = chol.data[chol.start[j] + (j - fj)];
                chol.data[chol.start[i] + (j - fi)] = s / ljj;
            }
            let mut d = chol.data[chol.start[i] + (i - fi)];
            for k in fi..i {
                let l = chol.data[chol.start[i] + (k - fi)];
                d -= l * l;
            }
            if !(d > T::zero()) || !d.is_finite() {
                return None;
            }
            chol.data[chol.start[i] + (i - fi)] = d.sqrt();
        }
        Some(chol)
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Solves `L L^T x = b` in place.
    pub fn solve_in_place(&self, x: &mut [T]) {
        let n = self.dim();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let mut s = x[i];
            for k in fi..i {
                s -= row[k - fi] * x[k];
            }
            x[i] = s / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            x[i] /= row[i - fi];
            let xi = x[i];
            for k in fi..i {
                x[k] -= row[k - fi] * xi;
            }
        }
    }
}
