use std::collections::HashMap;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Structured equilateral triangulation of the regular hexagon with vertices
/// `(±1, 0)`, `(±1/2, ±sqrt(3)/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshHex<T> {
    pub nodes: Vec<[T; 2]>,
    /// Counter-clockwise node triples.
    pub triangles: Vec<[usize; 3]>,
    pub n_sub: usize,
    /// Triangle side length, `1 / n_sub`.
    pub h: T,
}

/// Lattice of points `i e1 + j e2` with `e1 = (h, 0)`, `e2 = (h/2, h sqrt(3)/2)`; the hexagon is
/// `|i|, |j|, |i + j| <= n`. Nodes are numbered row by row (y, then x increasing) so every
/// component of a subdomain keeps a narrow profile.
pub fn triangulate_hexagon<T: Real>(n_sub: usize) -> Result<MeshHex<T>> {
    if n_sub == 0 {
        return Err(Error::InvalidInput("n_sub must be >= 1".into()));
    }
    let n = n_sub as i64;
    let h = T::one() / T::from_usize_lossy(n_sub);
    let half_h = T::half() * h;
    let row_h = h * T::lit(3.0).sqrt() / T::two();
    let inside = |i: i64, j: i64| i.abs() <= n && j.abs() <= n && (i + j).abs() <= n;

    let mut index = HashMap::new();
    let mut nodes = Vec::with_capacity((3 * n * n + 3 * n + 1) as usize);
    for j in -n..=n {
        for i in (-n).max(-n - j)..=n.min(n - j) {
            index.insert((i, j), nodes.len());
            let x = T::lit((2 * i + j) as f64) * half_h;
            let y = T::lit(j as f64) * row_h;
            nodes.push([x, y]);
        }
    }

    let mut triangles = Vec::with_capacity(6 * n_sub * n_sub);
    for j in -n..n {
        for i in -n..n {
            let up = [(i, j), (i + 1, j), (i, j + 1)];
            let down = [(i + 1, j), (i + 1, j + 1), (i, j + 1)];
            for tri in [up, down] {
                if tri.iter().all(|&(a, b)| inside(a, b)) {
                    triangles.push(tri.map(|p| index[&p]));
                }
            }
        }
    }
    Ok(MeshHex {
        nodes,
        triangles,
        n_sub,
        h,
    })
}

impl<T: Real> MeshHex<T> {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn area(&self, e: usize) -> T {
        let [a, b, c] = self.triangles[e].map(|k| self.nodes[k]);
        T::half() * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }

    pub fn centroid(&self, e: usize) -> [T; 2] {
        let [a, b, c] = self.triangles[e].map(|k| self.nodes[k]);
        let third = T::one() / T::lit(3.0);
        [(a[0] + b[0] + c[0]) * third, (a[1] + b[1] + c[1]) * third]
    }

    /// Plain-text export: `v x y` per node, then `t i j k` per triangle (0-based).
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        for p in &self.nodes {
            writeln!(out, "v {} {}", p[0], p[1])?;
        }
        for t in &self.triangles {
            writeln!(out, "t {} {} {}", t[0], t[1], t[2])?;
        }
        Ok(())
    }
}
