//! Uniform turning-angle grid `θ_i = 2πi/N` with `N` divisible by 4.
//!
//! Node 0 has tangent `e₁` and sits at the bottom vertex, `N/4` is the right
//! pole, `N/2` the top vertex (the tip) and `3N/4` the left pole. Trig tables
//! are built from the first quadrant so that every reflection identity holds
//! bit-for-bit.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TurningGrid {
    n: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TurningGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 16 || !n.is_multiple_of(4) {
            return Err(Error::InvalidGrid(n));
        }
        let q = n / 4;
        let step = 2.0 * PI / n as f64;
        // cos on the first quadrant, evaluated on whichever half keeps the
        // argument below π/4 so the complementary sine is consistent.
        let quarter_cos: Vec<f64> = (0..=q)
            .map(|j| {
                if 2 * j <= q {
                    (j as f64 * step).cos()
                } else {
                    ((q - j) as f64 * step).sin()
                }
            })
            .collect();
        let mut cos = vec![0.0; n];
        let mut sin = vec![0.0; n];
        for i in 0..n {
            let (quadrant, j) = (i / q, i % q);
            let c = quarter_cos[j];
            let s = quarter_cos[q - j];
            let (ci, si) = match quadrant {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            cos[i] = ci;
            sin[i] = si;
        }
        Ok(TurningGrid { n, cos, sin })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Grid spacing `Δθ = 2π/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn theta(&self, i: usize) -> f64 {
        self.spacing() * i as f64
    }

    pub fn cos(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin(&self) -> &[f64] {
        &self.sin
    }

    pub fn right_pole(&self) -> usize {
        self.n / 4
    }

    pub fn tip(&self) -> usize {
        self.n / 2
    }

    pub fn left_pole(&self) -> usize {
        3 * self.n / 4
    }

    pub fn is_pole(&self, i: usize) -> bool {
        i == self.right_pole() || i == self.left_pole()
    }

    /// Nodes of the upper branch from the right pole through the tip to the
    /// left pole, i.e. `θ ∈ [π/2, 3π/2]`.
    pub fn upper_branch(&self) -> std::ops::RangeInclusive<usize> {
        self.right_pole()..=self.left_pole()
    }

    /// The orbit `{i, N−i, N/2−i, N/2+i}` of a node under both reflections.
    pub fn orbit(&self, i: usize) -> [usize; 4] {
        let n = self.n;
        let i = i % n;
        [i, (n - i) % n, (n / 2 + n - i) % n, (n / 2 + i) % n]
    }

    /// Average every orbit and write the mean back to all of its members.
    ///
    /// The mean is computed once per orbit, so the result is symmetric
    /// bit-for-bit, and already-symmetric data is returned unchanged.
    pub fn symmetrize(&self, values: &mut [f64]) {
        debug_assert_eq!(values.len(), self.n);
        for i in self.right_pole()..=self.tip() {
            let [a, b, c, d] = self.orbit(i);
            let mean = ((values[a] + values[b]) + (values[c] + values[d])) / 4.0;
            values[a] = mean;
            values[b] = mean;
            values[c] = mean;
            values[d] = mean;
        }
    }

    /// First node index breaking exact symmetry, if any.
    pub fn symmetry_violation(&self, values: &[f64]) -> Option<usize> {
        (0..self.n).find(|&i| {
            let [a, b, c, _] = self.orbit(i);
            values[a] != values[b] || values[a] != values[c]
        })
    }

    /// Build a symmetric array from values on the quarter `θ ∈ [π/2, π]`,
    /// indexed from the right pole (`quarter[0]`) to the tip (`quarter[N/4]`).
    pub fn from_quarter(&self, quarter: &[f64]) -> Vec<f64> {
        debug_assert_eq!(quarter.len(), self.n / 4 + 1);
        let mut out = vec![0.0; self.n];
        for (j, &v) in quarter.iter().enumerate() {
            for k in self.orbit(self.right_pole() + j) {
                out[k] = v;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(TurningGrid::new(12).is_err());
        assert!(TurningGrid::new(100 + 2).is_err());
        assert!(TurningGrid::new(100).is_ok());
    }

    #[test]
    fn trig_tables_are_exactly_symmetric() {
        let g = TurningGrid::new(64).unwrap();
        let n = g.len();
        for i in 0..n {
            assert_eq!(g.cos()[i], g.cos()[(n - i) % n]);
            assert_eq!(g.sin()[i], -g.sin()[(n - i) % n]);
            assert_eq!(g.cos()[i], -g.cos()[(n / 2 + n - i) % n]);
            assert_eq!(g.sin()[i], g.sin()[(n / 2 + n - i) % n]);
            assert!((g.cos()[i] - g.theta(i).cos()).abs() < 1e-15);
            assert!((g.sin()[i] - g.theta(i).sin()).abs() < 1e-15);
        }
        assert_eq!(g.cos()[g.right_pole()], 0.0);
        assert_eq!(g.sin()[g.tip()], 0.0);
        assert_eq!(g.cos()[g.tip()], -1.0);
    }

    #[test]
    fn symmetrize_is_idempotent() {
        let g = TurningGrid::new(32).unwrap();
        let mut v: Vec<f64> = (0..32).map(|i| 1.0 + (i as f64 * 0.37).sin().abs()).collect();
        g.symmetrize(&mut v);
        assert_eq!(g.symmetry_violation(&v), None);
        let before = v.clone();
        g.symmetrize(&mut v);
        assert_eq!(before, v);
    }
}
