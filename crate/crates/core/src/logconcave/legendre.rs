//! Discrete Legendre transform on lattices, one axis at a time.

use super::grid::{GridFn, Lattice};
use crate::error::Result;

/// g(y_j) = max_k (x_k y_j − v_k) for uniform x and y. Values may be +∞
/// (excluded); if every value is +∞ the result is −∞.
pub fn lft_1d(x0: f64, dx: f64, values: &[f64], y0: f64, dy: f64, m: usize) -> Vec<f64> {
    // lower convex hull of the finite points
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(values.len());
    for (k, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            continue;
        }
        let p = (x0 + k as f64 * dx, v);
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b if it lies on or above segment a–p
            if (b.1 - a.1) * (p.0 - a.0) >= (p.1 - a.1) * (b.0 - a.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    if hull.is_empty() {
        return vec![f64::NEG_INFINITY; m];
    }
    let mut out = Vec::with_capacity(m);
    let mut p = 0;
    for j in 0..m {
        let y = y0 + j as f64 * dy;
        while p + 1 < hull.len() && hull[p + 1].0 * y - hull[p + 1].1 >= hull[p].0 * y - hull[p].1 {
            p += 1;
        }
        out.push(hull[p].0 * y - hull[p].1);
    }
    out
}

/// Dual lattice spanning the range of finite-difference slopes along each
/// axis. In one and two dimensions it has twice the primal resolution, so
/// every primal node tends to have a supporting slope on the lattice; in
/// three it keeps the primal node count to bound memory.
pub fn default_dual_lattice(grid: &GridFn) -> Lattice {
    let lat = grid.lattice();
    let n = lat.dim();
    let refine = if n <= 2 { 2 } else { 1 };
    let mut shape = Vec::with_capacity(n);
    let strides = lat.strides();
    let values = grid.values();
    let mut origin = Vec::with_capacity(n);
    let mut spacing = Vec::with_capacity(n);
    for axis in 0..n {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for flat in 0..values.len() {
            let k = flat / strides[axis] % lat.shape[axis];
            if k + 1 >= lat.shape[axis] {
                continue;
            }
            let (a, b) = (values[flat], values[flat + strides[axis]]);
            if a.is_finite() && b.is_finite() {
                let s = (b - a) / lat.spacing[axis];
                lo = lo.min(s);
                hi = hi.max(s);
            }
        }
        if !lo.is_finite() {
            lo = -1.0;
            hi = 1.0;
        }
        let m = (lat.shape[axis] - 1) * refine + 1;
        shape.push(m);
        let mut h = (hi - lo) / (m as f64 - 1.0);
        if h <= 1e-12 {
            h = 1e-3;
            lo -= 0.5 * h * (m as f64 - 1.0);
        }
        origin.push(lo);
        spacing.push(h);
    }
    Lattice { origin, spacing, shape }
}

/// φ*(y) = max over lattice nodes x of (x·y − φ(x)), evaluated on `dual`.
/// Runs one 1-D transform per axis; −∞ never appears in the output because
/// at least one primal value is finite.
pub fn discrete_legendre(grid: &GridFn, dual: &Lattice) -> Result<GridFn> {
    let lat = grid.lattice();
    let n = lat.dim();
    let mut shape = lat.shape.clone();
    let mut cur: Vec<f64> = grid.values().to_vec();
    for axis in 0..n {
        let mut next_shape = shape.clone();
        next_shape[axis] = dual.shape[axis];
        let stride_in: usize = shape[axis + 1..].iter().product();
        let stride_out = stride_in;
        let outer: usize = shape[..axis].iter().product();
        let m_in = shape[axis];
        let m_out = next_shape[axis];
        let mut next = vec![0.0; outer * m_out * stride_in];
        let mut line = vec![0.0; m_in];
        for o in 0..outer {
            for inner in 0..stride_in {
                for k in 0..m_in {
                    let v = cur[(o * m_in + k) * stride_in + inner];
                    // the first pass transforms φ, later passes transform −g
                    line[k] = if axis == 0 { v } else { -v };
                }
                let g = lft_1d(
                    lat.origin[axis],
                    lat.spacing[axis],
                    &line,
                    dual.origin[axis],
                    dual.spacing[axis],
                    m_out,
                );
                for (j, gv) in g.into_iter().enumerate() {
                    next[(o * m_out + j) * stride_out + inner] = gv;
                }
            }
        }
        cur = next;
        shape = next_shape;
    }
    let values = cur
        .into_iter()
        .map(|v| if v == f64::NEG_INFINITY { f64::INFINITY } else { v })
        .collect();
    GridFn::new(dual.clone(), values)
}
