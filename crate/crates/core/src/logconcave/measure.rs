//! Surface-area measures μ_f = (∇φ)_#(f dx) and the first variation δJ(f, g).

use nalgebra::{DMatrix, DVector};

use super::{Backend, Estimate, LogConcaveFn, QuadratureSpec};
use crate::error::{Error, Result};

/// Finitely many weighted points in R^d, stored flat.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(dim: usize, points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 || points.len() != dim * weights.len() {
            return Err(Error::InvalidInput(format!(
                "{} coordinates do not form {} points in dimension {dim}",
                points.len(),
                weights.len()
            )));
        }
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::NonPositiveWeight { index, value });
        }
        Ok(DiscreteMeasure {
            dim,
            points,
            weights,
        })
    }

    pub fn from_points(points: &[DVector<f64>], weights: Vec<f64>) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.len());
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: points.iter().map(|p| p.len()).find(|&d| d != dim).unwrap_or(dim),
            });
        }
        Self::new(dim, points.iter().flat_map(|p| p.iter().copied()).collect(), weights)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn point_vec(&self, i: usize) -> DVector<f64> {
        DVector::from_row_slice(self.point(i))
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        crate::numeric::pairwise_sum(&self.weights)
    }

    /// ∫ y dμ / μ(R^d).
    pub fn barycenter(&self) -> DVector<f64> {
        let mut s = DVector::zeros(self.dim);
        for i in 0..self.len() {
            s += DVector::from_row_slice(self.point(i)) * self.weights[i];
        }
        s / self.total_mass()
    }

    /// ∫ y⊗y dμ.
    pub fn second_moment(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.len() {
            let p = self.point_vec(i);
            m += &p * p.transpose() * self.weights[i];
        }
        m
    }

    /// ∫ g dμ.
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, g: F) -> f64 {
        let terms: Vec<f64> = (0..self.len()).map(|i| self.weights[i] * g(self.point(i))).collect();
        crate::numeric::pairwise_sum(&terms)
    }

    /// Same points with weights multiplied by `g(point)`.
    pub fn reweighted<F: Fn(&[f64]) -> f64>(&self, g: F) -> Result<DiscreteMeasure> {
        let weights = (0..self.len()).map(|i| self.weights[i] * g(self.point(i))).collect();
        DiscreteMeasure::new(self.dim, self.points.clone(), weights)
    }
}

/// μ_f sampled by a quadrature rule, with a bound on its total-mass error.
#[derive(Clone, Debug)]
pub struct SurfaceMeasure {
    pub measure: DiscreteMeasure,
    pub mass_error_bound: f64,
}

/// Places weight w_k f(x_k) at ∇φ(x_k) for every quadrature node x_k. Nodes on
/// ridges split their weight evenly among the adjacent facet gradients.
pub fn surface_measure(f: &LogConcaveFn, spec: &QuadratureSpec) -> Result<SurfaceMeasure> {
    if matches!(f, LogConcaveFn::Indicator { .. }) {
        return Err(Error::RestrictedDomain);
    }
    let n = f.dim();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    f.for_each_node(spec, |_, _, wf, grads| {
        for (g, share) in grads {
            points.extend(g.iter().copied());
            weights.push(wf * share);
        }
    })?;
    let measure = DiscreteMeasure::new(n, points, weights)?;
    let (_, bound) = f.integrate(spec, 1, |_, _, wf, _, acc| acc[0] += wf)?;
    Ok(SurfaceMeasure {
        measure,
        mass_error_bound: bound[0],
    })
}

fn both_quadratic(f: &LogConcaveFn, g: &LogConcaveFn) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
    let q = |h: &LogConcaveFn| match h {
        LogConcaveFn::Gaussian { dim, scale } => Some(DMatrix::identity(*dim, *dim) * *scale),
        LogConcaveFn::Quadratic(q) => Some(q.matrix().clone()),
        _ => None,
    };
    Some((q(f)?, q(g)?))
}

/// Closed form of δJ(f, g) when one is known.
fn first_variation_analytic(f: &LogConcaveFn, g: &LogConcaveFn) -> Option<f64> {
    let n = f.dim() as f64;
    let mass = f.total_mass().ok()?.value;
    if let Some((qf, qg)) = both_quadratic(f, g) {
        // ψ*(2Q_f x) = x·Q_f Q_g^{−1} Q_f x, integrated against e^{−x·Q_f x}
        let qg_inv = qg.try_inverse()?;
        return Some(0.5 * (&qf * qg_inv).trace() * mass);
    }
    if f != g {
        return None;
    }
    match f {
        LogConcaveFn::QuadMinkowski { .. } => Some(0.5 * n * mass),
        LogConcaveFn::Cone { offset, .. } => Some(offset * mass),
        _ => None,
    }
}

/// δJ(f, g) = ∫ ψ*(∇φ(x)) f(x) dx. May be +∞.
pub fn first_variation(
    f: &LogConcaveFn,
    g: &LogConcaveFn,
    backend: Backend,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: g.dim(),
        });
    }
    match backend {
        Backend::Analytic => first_variation_analytic(f, g)
            .map(Estimate::exact)
            .ok_or(Error::BackendUnavailable {
                family: f.family(),
                backend: "analytic",
            }),
        Backend::Numeric => {
            let (v, e) = if f == g && f.is_grid() {
                // ψ = φ, so ψ*(∇φ(x)) = x·∇φ(x) − φ(x)
                f.integrate(spec, 1, |x, phi, wf, grads, acc| {
                    for (y, share) in grads {
                        acc[0] += wf * share * (x.dot(y) - phi);
                    }
                })?
            } else {
                let dual = g.legendre()?;
                f.integrate(spec, 1, |_, _, wf, grads, acc| {
                    for (y, share) in grads {
                        acc[0] += wf * share * dual.potential(y);
                    }
                })?
            };
            Ok(Estimate {
                value: v[0],
                error_bound: e[0],
            })
        }
    }
}
