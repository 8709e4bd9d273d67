//! Node sets for integrals over R^n: tensor midpoint rules in sinh-stretched
//! coordinates for n ≤ 3, shifted Halton points for n ∈ {4, 5, 6}, and plain
//! cell-centre rules for sampled grids.

use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;
use statrs::function::gamma::gamma_ur;

use super::grid::Lattice;
use crate::error::{Error, Result};
use crate::numeric::{gamma_fn, parallel_accumulate, rng, unit_ball_volume};

/// Relative tail mass allowed outside the truncation box.
pub const TAIL_TOL: f64 = 1e-12;

/// Resolution settings shared by every numeric integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Midpoint cells per axis for n ≤ 3 (rounded up to even).
    pub resolution: usize,
    /// Quasi-Monte-Carlo sample count for n ≥ 4.
    pub qmc_samples: usize,
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            resolution: 129,
            qmc_samples: 1 << 20,
            seed: 0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_resolution(resolution: usize) -> Self {
        QuadratureSpec {
            resolution,
            ..Default::default()
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Half the work, used for the a-posteriori error estimate.
    pub fn coarse(&self) -> Self {
        QuadratureSpec {
            resolution: (self.resolution / 2).max(4),
            qmc_samples: (self.qmc_samples / 2).max(1024),
            seed: self.seed,
        }
    }
}

/// Radial lower bound φ(x) ≥ a|x|^p + b, or a bounded domain of radius r.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Profile {
    Power { a: f64, p: f64, b: f64 },
    Bounded { radius: f64 },
}

impl Profile {
    /// Upper bound on ∫_{|x|>R} e^{−φ}.
    pub(crate) fn tail(&self, n: usize, r: f64) -> f64 {
        match *self {
            Profile::Power { a, p, b } => {
                let s = n as f64 / p;
                let sphere = n as f64 * unit_ball_volume(n);
                (-b).exp() * sphere / p * a.powf(-s) * gamma_fn(s) * gamma_ur(s, a * r.powf(p))
            }
            Profile::Bounded { radius } => {
                if r >= radius {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Smallest R (to 1%) with tail(R) ≤ TAIL_TOL · mass.
    pub(crate) fn truncation_radius(&self, n: usize, mass: f64) -> f64 {
        if let Profile::Bounded { radius } = *self {
            return radius * (1.0 + 1e-9);
        }
        let target = TAIL_TOL * mass;
        let mut hi = 1.0;
        while self.tail(n, hi) > target {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        while hi - lo > 0.01 * hi {
            let mid = 0.5 * (lo + hi);
            if self.tail(n, mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

/// x = s·sinh(v) for v ∈ [−V, V], V = asinh(R/s): fine near the origin,
/// coarse in the tails.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SinhMap {
    s: f64,
    v_max: f64,
}

impl SinhMap {
    pub(crate) fn new(scale: f64, radius: f64) -> Self {
        SinhMap {
            s: scale,
            v_max: (radius / scale).asinh(),
        }
    }

    /// Point and Jacobian for u ∈ [0, 1].
    fn map(&self, u: f64) -> (f64, f64) {
        let v = (2.0 * u - 1.0) * self.v_max;
        (self.s * v.sinh(), self.s * v.cosh() * 2.0 * self.v_max)
    }
}

/// Coordinate map u ↦ x on one axis, cells at integer steps of `du`.
#[derive(Clone, Copy, Debug)]
enum AxisMap {
    Sinh(SinhMap),
    Affine { x0: f64, h: f64 },
}

impl AxisMap {
    fn map(&self, u: f64) -> (f64, f64) {
        match *self {
            AxisMap::Sinh(m) => m.map(u),
            AxisMap::Affine { x0, h } => (x0 + u * h, h),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Axis {
    map: AxisMap,
    cells: usize,
    du: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    edges: Vec<f64>,
}

impl Axis {
    fn build(map: AxisMap, cells: usize, du: f64) -> Axis {
        let (nodes, weights) = (0..cells)
            .map(|k| {
                let (x, jac) = map.map((k as f64 + 0.5) * du);
                (x, jac * du)
            })
            .unzip();
        let edges = (0..=cells).map(|k| map.map(k as f64 * du).0).collect();
        Axis {
            map,
            cells,
            du,
            nodes,
            weights,
            edges,
        }
    }

    /// Midpoint rule with `cells` cells (rounded up to even, so no node sits
    /// at the origin and the node set is symmetric) in sinh coordinates.
    fn sinh(map: SinhMap, cells: usize) -> Axis {
        let cells = cells + cells % 2;
        Axis::build(AxisMap::Sinh(map), cells, 1.0 / cells as f64)
    }

    /// Cell centres of a lattice axis.
    fn cells(lat: &Lattice, axis: usize) -> Axis {
        let map = AxisMap::Affine {
            x0: lat.origin[axis],
            h: lat.spacing[axis],
        };
        Axis::build(map, lat.shape[axis] - 1, 1.0)
    }

    /// Point and weight of sub-cell `s` of `sub` inside cell `k`.
    fn sub_node(&self, k: usize, s: usize, sub: usize) -> (f64, f64) {
        let h = self.du / sub as f64;
        let (x, jac) = self.map.map(k as f64 * self.du + (s as f64 + 0.5) * h);
        (x, jac * h)
    }
}

/// A finite weighted node set approximating Lebesgue measure on a box.
#[derive(Clone, Debug)]
pub(crate) enum Nodes {
    Tensor(Vec<Axis>),
    Qmc {
        count: usize,
        shift: Vec<f64>,
        maps: Vec<SinhMap>,
    },
}

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

impl Nodes {
    /// Sinh-stretched rule on the truncation box [−R, R]^n.
    pub(crate) fn for_profile(
        n: usize,
        profile: Profile,
        length_scale: f64,
        mass: f64,
        spec: &QuadratureSpec,
    ) -> Result<Nodes> {
        let radius = profile.truncation_radius(n, mass);
        let map = SinhMap::new(length_scale.min(radius), radius);
        match n {
            1..=3 => Ok(Nodes::Tensor(vec![Axis::sinh(map, spec.resolution); n])),
            4..=6 => {
                let mut r = rng(spec.seed);
                Ok(Nodes::Qmc {
                    count: spec.qmc_samples,
                    shift: (0..n).map(|_| r.gen::<f64>()).collect(),
                    maps: vec![map; n],
                })
            }
            _ => Err(Error::UnsupportedDimension { n }),
        }
    }

    pub(crate) fn lattice_cells(lat: &Lattice) -> Nodes {
        Nodes::Tensor((0..lat.dim()).map(|i| Axis::cells(lat, i)).collect())
    }

    pub(crate) fn len(&self) -> usize {
        match self {
            Nodes::Tensor(axes) => axes.iter().map(|a| a.nodes.len()).product(),
            Nodes::Qmc { count, .. } => *count,
        }
    }

    /// Node `i` written into `x`; returns its weight.
    pub(crate) fn node(&self, i: usize, x: &mut DVector<f64>) -> f64 {
        match self {
            Nodes::Tensor(axes) => {
                let mut rem = i;
                let mut w = 1.0;
                for (d, axis) in axes.iter().enumerate().rev() {
                    let m = axis.nodes.len();
                    let k = rem % m;
                    rem /= m;
                    x[d] = axis.nodes[k];
                    w *= axis.weights[k];
                }
                w
            }
            Nodes::Qmc { count, shift, maps } => {
                let mut w = 1.0 / *count as f64;
                for (d, map) in maps.iter().enumerate() {
                    let u = (radical_inverse(i as u64 + 1, PRIMES[d]) + shift[d]).fract();
                    let (xd, jac) = map.map(u);
                    x[d] = xd;
                    w *= jac;
                }
                w
            }
        }
    }

    /// Tensor cells whose corners fall in different pieces (facet cones)
    /// are split into `sub`^n sub-cells. Other node sets pass through.
    pub(crate) fn refined<P>(&self, dim: usize, piece: P, sub: usize) -> Refined<'_>
    where
        P: Fn(&DVector<f64>) -> usize + Sync,
    {
        let Nodes::Tensor(axes) = self else {
            return Refined {
                nodes: self,
                corners: None,
                sub: 1,
                dim,
            };
        };
        if sub <= 1 {
            return Refined {
                nodes: self,
                corners: None,
                sub: 1,
                dim,
            };
        }
        let shape: Vec<usize> = axes.iter().map(|a| a.cells + 1).collect();
        let count: usize = shape.iter().product();
        let corners = (0..count)
            .into_par_iter()
            .map(|c| {
                let mut x = DVector::zeros(dim);
                let mut rem = c;
                for d in (0..dim).rev() {
                    x[d] = axes[d].edges[rem % shape[d]];
                    rem /= shape[d];
                }
                piece(&x) as u32
            })
            .collect();
        Refined {
            nodes: self,
            corners: Some((shape, corners)),
            sub,
            dim,
        }
    }

    /// Deterministic parallel sum of `body(x, w, acc)` over all nodes.
    pub(crate) fn accumulate<F>(&self, dim: usize, width: usize, body: F) -> Vec<f64>
    where
        F: Fn(&DVector<f64>, f64, &mut [f64]) + Sync,
    {
        parallel_accumulate(self.len(), width, |i, acc| {
            let mut x = DVector::zeros(dim);
            let w = self.node(i, &mut x);
            body(&x, w, acc);
        })
    }
}

/// A node set with ridge cells subdivided; see [`Nodes::refined`].
pub(crate) struct Refined<'a> {
    nodes: &'a Nodes,
    corners: Option<(Vec<usize>, Vec<u32>)>,
    sub: usize,
    dim: usize,
}

impl Refined<'_> {
    fn is_mixed(&self, idx: &[usize]) -> bool {
        let Some((shape, corners)) = &self.corners else {
            return false;
        };
        let dim = self.dim;
        let mut first = None;
        for mask in 0..(1usize << dim) {
            let mut flat = 0;
            for d in 0..dim {
                flat = flat * shape[d] + idx[d] + (mask >> d & 1);
            }
            match first {
                None => first = Some(corners[flat]),
                Some(q) if q != corners[flat] => return true,
                _ => {}
            }
        }
        false
    }

    /// Calls `emit(x, w)` for every node of base cell `i`.
    fn for_cell<E: FnMut(&DVector<f64>, f64)>(&self, i: usize, x: &mut DVector<f64>, mut emit: E) {
        let Nodes::Tensor(axes) = self.nodes else {
            let w = self.nodes.node(i, x);
            emit(x, w);
            return;
        };
        let dim = self.dim;
        let mut idx = vec![0; dim];
        let mut rem = i;
        for d in (0..dim).rev() {
            idx[d] = rem % axes[d].cells;
            rem /= axes[d].cells;
        }
        if !self.is_mixed(&idx) {
            let w = self.nodes.node(i, x);
            emit(x, w);
            return;
        }
        let sub = self.sub;
        for s in 0..sub.pow(dim as u32) {
            let mut rem = s;
            let mut w = 1.0;
            for d in (0..dim).rev() {
                let (xd, wd) = axes[d].sub_node(idx[d], rem % sub, sub);
                rem /= sub;
                x[d] = xd;
                w *= wd;
            }
            emit(x, w);
        }
    }

    pub(crate) fn accumulate<F>(&self, width: usize, body: F) -> Vec<f64>
    where
        F: Fn(&DVector<f64>, f64, &mut [f64]) + Sync,
    {
        parallel_accumulate(self.nodes.len(), width, |i, acc| {
            let mut x = DVector::zeros(self.dim);
            self.for_cell(i, &mut x, |x, w| body(x, w, acc));
        })
    }

    pub(crate) fn visit<F: FnMut(&DVector<f64>, f64)>(&self, mut visit: F) {
        let mut x = DVector::zeros(self.dim);
        for i in 0..self.nodes.len() {
            self.for_cell(i, &mut x, &mut visit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integral_in_each_dimension() {
        for n in 1..=5 {
            let profile = Profile::Power { a: 1.0, p: 2.0, b: 0.0 };
            let exact = std::f64::consts::PI.powf(n as f64 / 2.0);
            let spec = QuadratureSpec {
                qmc_samples: 1 << 16,
                ..Default::default()
            };
            let nodes = Nodes::for_profile(n, profile, 0.7, exact, &spec).unwrap();
            let got = nodes.accumulate(n, 1, |x, w, acc| acc[0] += w * (-x.norm_squared()).exp())[0];
            let tol = if n <= 3 { 1e-8 } else { 2e-3 };
            assert!(((got - exact) / exact).abs() < tol, "n={n}: {got} vs {exact}");
        }
    }

    #[test]
    fn tail_bound_is_monotone() {
        let p = Profile::Power { a: 1.0, p: 1.0, b: 0.0 };
        assert!(p.tail(2, 10.0) < p.tail(2, 5.0));
        let r = p.truncation_radius(2, 2.0 * std::f64::consts::PI);
        assert!(p.tail(2, r) <= TAIL_TOL * 2.0 * std::f64::consts::PI);
    }

    #[test]
    fn even_cell_count_avoids_origin() {
        let axis = Axis::sinh(SinhMap::new(1.0, 5.0), 129);
        assert_eq!(axis.nodes.len(), 130);
        assert!(axis.nodes.iter().all(|x| x.abs() > 1e-6));
        assert!((axis.nodes[0] + axis.nodes[129]).abs() < 1e-12);
    }
}
