//! Potentials sampled on a regular lattice.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Tolerance on negative second differences before a grid is flagged as non-convex.
pub const EPS_CONVEX: f64 = 1e-8;

/// Regular lattice: node k along axis i sits at `origin[i] + k * spacing[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub shape: Vec<usize>,
}

impl Lattice {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, shape: Vec<usize>) -> Result<Self> {
        let n = origin.len();
        if n == 0 || spacing.len() != n || shape.len() != n {
            return Err(Error::InvalidInput(
                "lattice origin, spacing and shape must have the same nonzero length".into(),
            ));
        }
        if spacing.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::InvalidInput("lattice spacing must be positive".into()));
        }
        if shape.iter().any(|&m| m < 2) {
            return Err(Error::InvalidInput("lattice needs at least two nodes per axis".into()));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidInput("lattice origin must be finite".into()));
        }
        Ok(Lattice {
            origin,
            spacing,
            shape,
        })
    }

    /// `nodes` nodes per axis spanning [−half_width, half_width]^n.
    pub fn centered(dim: usize, half_width: f64, nodes: usize) -> Result<Self> {
        let h = 2.0 * half_width / (nodes as f64 - 1.0);
        Lattice::new(vec![-half_width; dim], vec![h; dim], vec![nodes; dim])
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coord(&self, axis: usize, k: usize) -> f64 {
        self.origin[axis] + k as f64 * self.spacing[axis]
    }

    pub fn upper(&self, axis: usize) -> f64 {
        self.coord(axis, self.shape[axis] - 1)
    }

    /// Row-major strides (last axis fastest).
    pub fn strides(&self) -> Vec<usize> {
        let n = self.dim();
        let mut s = vec![1; n];
        for i in (0..n.saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.shape[i + 1];
        }
        s
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for i in (0..self.dim()).rev() {
            idx[i] = flat % self.shape[i];
            flat /= self.shape[i];
        }
        idx
    }

    pub fn point(&self, flat: usize) -> DVector<f64> {
        let idx = self.multi_index(flat);
        DVector::from_iterator(self.dim(), idx.iter().enumerate().map(|(i, &k)| self.coord(i, k)))
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Every other node along each axis, keeping both ends when possible.
    pub fn coarsened(&self) -> Lattice {
        Lattice {
            origin: self.origin.clone(),
            spacing: self.spacing.iter().map(|h| 2.0 * h).collect(),
            shape: self.shape.iter().map(|m| (m + 1) / 2).collect(),
        }
    }
}

/// Potential φ sampled on a lattice, +∞ outside the lattice box.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFn {
    lattice: Lattice,
    values: Vec<f64>,
    nonconvexity: f64,
}

impl GridFn {
    /// `values` in row-major order; `+∞` is allowed, NaN is not.
    pub fn new(lattice: Lattice, values: Vec<f64>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(Error::InvalidInput(format!(
                "grid has {} values but its shape needs {}",
                values.len(),
                lattice.len()
            )));
        }
        if values.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
            return Err(Error::InvalidInput("grid values must be finite or +inf".into()));
        }
        if values.iter().all(|v| v.is_infinite()) {
            return Err(Error::InvalidInput("grid potential is +inf everywhere".into()));
        }
        let mut g = GridFn {
            lattice,
            values,
            nonconvexity: 0.0,
        };
        g.nonconvexity = g.convexity_violation();
        if g.nonconvexity > EPS_CONVEX {
            log::warn!("grid potential is not convex (violation {:e})", g.nonconvexity);
        }
        Ok(g)
    }

    /// Samples `potential` at every lattice node.
    pub fn sample<F: Fn(&DVector<f64>) -> f64>(lattice: Lattice, potential: F) -> Result<Self> {
        let values = (0..lattice.len()).map(|i| potential(&lattice.point(i))).collect();
        GridFn::new(lattice, values)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Largest negative second difference found along axes and 2-D diagonals.
    pub fn nonconvexity(&self) -> f64 {
        self.nonconvexity
    }

    pub fn is_nonconvex(&self) -> bool {
        self.nonconvexity > EPS_CONVEX
    }

    fn convexity_violation(&self) -> f64 {
        let n = self.dim();
        let strides = self.lattice.strides();
        let mut steps: Vec<Vec<isize>> = Vec::new();
        for i in 0..n {
            let mut d = vec![0isize; n];
            d[i] = 1;
            steps.push(d);
            for j in (i + 1)..n {
                for s in [1isize, -1] {
                    let mut d = vec![0isize; n];
                    d[i] = 1;
                    d[j] = s;
                    steps.push(d);
                }
            }
        }
        let mut worst = 0.0_f64;
        for flat in 0..self.values.len() {
            let c = self.values[flat];
            if !c.is_finite() {
                continue;
            }
            let idx = self.lattice.multi_index(flat);
            for d in &steps {
                let inside = (0..n).all(|i| {
                    let k = idx[i] as isize;
                    k - d[i] >= 0 && k + d[i] >= 0 && (k + d[i]) < self.lattice.shape[i] as isize
                        && (k - d[i]) < self.lattice.shape[i] as isize
                });
                if !inside {
                    continue;
                }
                let off: isize = (0..n).map(|i| d[i] * strides[i] as isize).sum();
                let a = self.values[(flat as isize + off) as usize];
                let b = self.values[(flat as isize - off) as usize];
                if a.is_finite() && b.is_finite() {
                    worst = worst.max(2.0 * c - a - b);
                }
            }
        }
        worst
    }

    /// Multilinear interpolation; +∞ outside the box or when a corner is +∞.
    pub fn potential(&self, x: &DVector<f64>) -> f64 {
        let n = self.dim();
        let mut base = vec![0usize; n];
        let mut frac = vec![0.0; n];
        for i in 0..n {
            let t = (x[i] - self.lattice.origin[i]) / self.lattice.spacing[i];
            let last = (self.lattice.shape[i] - 1) as f64;
            if !(t >= -1e-12 && t <= last + 1e-12) {
                return f64::INFINITY;
            }
            let t = t.clamp(0.0, last);
            let k = (t.floor() as usize).min(self.lattice.shape[i] - 2);
            base[i] = k;
            frac[i] = t - k as f64;
        }
        let strides = self.lattice.strides();
        let mut acc = 0.0;
        for corner in 0..(1usize << n) {
            let mut w = 1.0;
            let mut flat = 0;
            for i in 0..n {
                let bit = corner >> i & 1;
                w *= if bit == 1 { frac[i] } else { 1.0 - frac[i] };
                flat += (base[i] + bit) * strides[i];
            }
            if w == 0.0 {
                continue;
            }
            let v = self.values[flat];
            if v.is_infinite() {
                return f64::INFINITY;
            }
            acc += w * v;
        }
        acc
    }

    /// Central difference of the interpolant with half-cell steps.
    pub fn gradient(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let n = self.dim();
        let mut g = DVector::zeros(n);
        for i in 0..n {
            let h = self.lattice.spacing[i];
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus[i] += 0.5 * h;
            minus[i] -= 0.5 * h;
            let (a, b) = (self.potential(&plus), self.potential(&minus));
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::OutsideDomain);
            }
            g[i] = (a - b) / h;
        }
        Ok(g)
    }

    /// Minimum node value and its location.
    pub fn min_node(&self) -> (f64, DVector<f64>) {
        let (i, v) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
        (v, self.lattice.point(i))
    }

    /// The same function resampled on another lattice.
    pub fn resample(&self, lattice: Lattice) -> Result<GridFn> {
        GridFn::sample(lattice, |x| self.potential(x))
    }

    /// Volume of {φ ≤ level} by cell counting: cells with all corners inside
    /// count fully, cells with some corners inside count half.
    pub fn sublevel_volume(&self, level: f64) -> f64 {
        let n = self.dim();
        let strides = self.lattice.strides();
        let cells: Vec<usize> = self.lattice.shape.iter().map(|m| m - 1).collect();
        let total: usize = cells.iter().product();
        let mut count = 0.0;
        for c in 0..total {
            let mut rem = c;
            let mut base = 0;
            for i in (0..n).rev() {
                base += (rem % cells[i]) * strides[i];
                rem /= cells[i];
            }
            let mut inside = 0;
            for corner in 0..(1usize << n) {
                let mut flat = base;
                for i in 0..n {
                    flat += (corner >> i & 1) * strides[i];
                }
                if self.values[flat] <= level {
                    inside += 1;
                }
            }
            if inside == 1usize << n {
                count += 1.0;
            } else if inside > 0 {
                count += 0.5;
            }
        }
        count * self.lattice.cell_volume()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_is_exact_for_affine_functions() {
        let lat = Lattice::centered(2, 1.0, 5).unwrap();
        let g = GridFn::sample(lat, |x| 1.0 + 2.0 * x[0] - 0.5 * x[1]).unwrap();
        let p = DVector::from_row_slice(&[0.3, -0.7]);
        assert!((g.potential(&p) - (1.0 + 0.6 + 0.35)).abs() < 1e-14);
        let grad = g.gradient(&p).unwrap();
        assert!((grad[0] - 2.0).abs() < 1e-12 && (grad[1] + 0.5).abs() < 1e-12);
        assert_eq!(g.potential(&DVector::from_row_slice(&[1.5, 0.0])), f64::INFINITY);
    }

    #[test]
    fn convexity_flag() {
        let lat = Lattice::centered(2, 1.0, 9).unwrap();
        let convex = GridFn::sample(lat.clone(), |x| x.norm_squared()).unwrap();
        assert!(!convex.is_nonconvex());
        let bumpy = GridFn::sample(lat, |x| (3.0 * x[0]).cos()).unwrap();
        assert!(bumpy.is_nonconvex());
    }

    #[test]
    fn sublevel_volume_of_disc() {
        let lat = Lattice::centered(2, 2.0, 401).unwrap();
        let g = GridFn::sample(lat, |x| x.norm_squared()).unwrap();
        let v = g.sublevel_volume(1.0);
        assert!((v - std::f64::consts::PI).abs() < 1e-3, "{v}");
    }

    #[test]
    fn rejects_bad_values() {
        let lat = Lattice::centered(1, 1.0, 3).unwrap();
        assert!(GridFn::new(lat.clone(), vec![0.0, f64::NAN, 0.0]).is_err());
        assert!(GridFn::new(lat, vec![0.0, 1.0]).is_err());
    }
}
