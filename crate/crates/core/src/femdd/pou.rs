use crate::error::{Error, Result};
use crate::scalar::Real;

/// One-dimensional plateau function `psi` on `[a, b]` and its four tensor-product weights.
///
/// `psi = 1` within `r` of the odd plateau centres `z_k = a + (b - a)(k - 1/2)/K`, `0` within `r`
/// of the even ones, and a quintic smoothstep (C2) blend in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionOfUnity<T> {
    pub plateaus: usize,
    pub r: T,
    pub a: T,
    pub b: T,
}

impl<T: Real> PartitionOfUnity<T> {
    pub fn new(plateaus: usize, r: T, a: T, b: T) -> Result<Self> {
        if plateaus < 2 || !(b > a) || r < T::zero() {
            return Err(Error::InvalidInput("invalid partition of unity".into()));
        }
        // plateaus must not touch: 2r < (b - a)/K
        let spacing = (b - a) / T::from_usize_lossy(plateaus);
        if !(T::two() * r < spacing) {
            return Err(Error::InvalidInput(format!(
                "plateau half-width {r} too large for spacing {spacing}"
            )));
        }
        Ok(Self { plateaus, r, a, b })
    }

    /// `K = 4`, `r = 0.1` on `[-1, 1]`: four subdomains of four squares each.
    pub fn squares() -> Self {
        Self::new(4, T::lit(0.1), -T::one(), T::one()).expect("valid defaults")
    }

    pub fn center(&self, k: usize) -> T {
        let kk = T::from_usize_lossy(k) - T::half();
        self.a + (self.b - self.a) * kk / T::from_usize_lossy(self.plateaus)
    }

    fn level(k: usize) -> T {
        if k % 2 == 1 {
            T::one()
        } else {
            T::zero()
        }
    }

    /// `psi(z)`; arguments outside `[a, b]` are clamped.
    pub fn psi(&self, z: T) -> T {
        let z = z.max(self.a).min(self.b);
        let k_max = self.plateaus;
        if z <= self.center(1) + self.r {
            return Self::level(1);
        }
        if z >= self.center(k_max) - self.r {
            return Self::level(k_max);
        }
        for k in 1..k_max {
            let lo = self.center(k) + self.r;
            let hi = self.center(k + 1) - self.r;
            if z <= hi {
                if z <= lo {
                    return Self::level(k);
                }
                let t = (z - lo) / (hi - lo);
                let s = smoothstep(t);
                let (v0, v1) = (Self::level(k), Self::level(k + 1));
                return v0 + (v1 - v0) * s;
            }
            if z < self.center(k + 1) + self.r {
                return Self::level(k + 1);
            }
        }
        Self::level(k_max)
    }

    /// Weight `psi_j(x, y)`, `j = 0..4`:
    /// `psi(x)psi(y)`, `(1-psi(x))psi(y)`, `psi(x)(1-psi(y))`, `(1-psi(x))(1-psi(y))`.
    pub fn weight(&self, j: usize, x: T, y: T) -> T {
        let (px, py) = (self.psi(x), self.psi(y));
        let one = T::one();
        match j {
            0 => px * py,
            1 => (one - px) * py,
            2 => px * (one - py),
            3 => (one - px) * (one - py),
            _ => panic!("partition index {j} out of range"),
        }
    }

    pub fn weights(&self, x: T, y: T) -> [T; 4] {
        [0, 1, 2, 3].map(|j| self.weight(j, x, y))
    }
}

/// `10 t^3 - 15 t^4 + 6 t^5`
fn smoothstep<T: Real>(t: T) -> T {
    let t = t.max(T::zero()).min(T::one());
    t * t * t * (T::lit(10.0) + t * (T::lit(-15.0) + T::lit(6.0) * t))
}
