use crate::scalar::Real;

/// Square compressed-sparse-row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, T)>) -> Self {
        triplets.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<T> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < n && c < n, "triplet ({r}, {c}) out of range for n = {n}");
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_triplets(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `(columns, values)` of row `i`, columns ascending.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (c, v) = self.row(i);
        c.binary_search(&j).map(|k| v[k]).unwrap_or(T::zero())
    }

    pub fn mul_vec(&self, x: &[T], out: &mut [T]) {
        for (i, o) in out.iter_mut().enumerate().take(self.n) {
            let (c, v) = self.row(i);
            *o = c.iter().zip(v).map(|(&j, &a)| a * x[j]).sum();
        }
    }

    /// Strided product for interleaved multi-species vectors.
    pub fn mul_vec_strided(&self, x: &[T], out: &mut [T], stride: usize, offset: usize) {
        for i in 0..self.n {
            let (c, v) = self.row(i);
            out[i * stride + offset] = c
                .iter()
                .zip(v)
                .map(|(&j, &a)| a * x[j * stride + offset])
                .sum();
        }
    }

    pub fn max_abs(&self) -> T {
        self.vals.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Whether any stored entry of row `i` is nonzero.
    pub fn row_is_active(&self, i: usize) -> bool {
        self.row(i).1.iter().any(|&v| v != T::zero())
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        (0..self.n).all(|i| {
            let (c, v) = self.row(i);
            c.iter()
                .zip(v)
                .all(|(&j, &a)| (a - self.get(j, i)).abs() <= tol)
        })
    }
}

/// Connected components of the graph of nonzero off-diagonal entries.
///
/// Nodes whose row is entirely zero are excluded; a supported node without off-diagonal
/// neighbours forms its own component. Components are listed by smallest node index and
/// each is sorted ascending.
pub fn find_components<T: Real>(a: &CsrMatrix<T>) -> Vec<Vec<usize>> {
    let n = a.n();
    let mut label = vec![usize::MAX; n];
    let mut comps = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX || !a.row_is_active(start) {
            continue;
        }
        let id = comps.len();
        let mut members = vec![start];
        label[start] = id;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (c, v) = a.row(i);
            for (&j, &x) in c.iter().zip(v) {
                if j != i && x != T::zero() && label[j] == usize::MAX {
                    label[j] = id;
                    members.push(j);
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps
}
