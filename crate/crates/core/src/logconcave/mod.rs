//! Log-concave functions f = e^{−φ}: closed-form families and sampled grids.

pub mod asplund;
pub mod grid;
pub mod legendre;
pub mod measure;
pub(crate) mod quadrature;

use nalgebra::{DMatrix, DVector};

use crate::bodies::Polytope;
use crate::ellipsoids::QuadraticForm;
use crate::error::{Error, Result};
use crate::numeric::{factorial, gamma_half};
use quadrature::{Nodes, Profile};

pub use asplund::{asplund_sum, AsplundOptions};
pub use grid::{GridFn, Lattice, EPS_CONVEX};
pub use legendre::{default_dual_lattice, discrete_legendre};
pub use measure::{first_variation, surface_measure, DiscreteMeasure, SurfaceMeasure};
pub use quadrature::QuadratureSpec;

/// Relative tolerance for deciding that x sits on a ridge between facet cones.
pub const RIDGE_TOL: f64 = 1e-12;

/// Slack on ‖x‖_K ≤ 1 for indicator potentials.
pub const DOMAIN_TOL: f64 = 1e-9;

/// Which integration path to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Analytic,
    Numeric,
}

impl Backend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Backend::Analytic => "analytic",
            Backend::Numeric => "numeric",
        }
    }
}

/// A value together with an upper bound on its absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            error_bound: 0.0,
        }
    }
}

/// A body with its polar, kept together so duals are free.
#[derive(Clone, Debug, PartialEq)]
pub struct BodyPair {
    body: Polytope,
    polar: Polytope,
}

impl BodyPair {
    pub fn new(body: Polytope) -> Result<Self> {
        let polar = body.polar()?;
        Ok(BodyPair { body, polar })
    }

    pub fn body(&self) -> &Polytope {
        &self.body
    }

    pub fn polar(&self) -> &Polytope {
        &self.polar
    }

    fn dual(&self) -> BodyPair {
        BodyPair {
            body: self.polar.clone(),
            polar: self.body.clone(),
        }
    }

    /// (T^{−1}K, T^t K°).
    fn pull_back(&self, t: &DMatrix<f64>, t_inv: &DMatrix<f64>) -> Result<BodyPair> {
        Ok(BodyPair {
            body: self.body.transform(t_inv)?,
            polar: self.polar.transform(&t.transpose())?,
        })
    }

    /// Gradients n_i/h_i of the gauge over the facets active at x, and ‖x‖_K.
    fn gauge_gradients(&self, x: &DVector<f64>) -> (f64, Vec<DVector<f64>>) {
        let (best, active) = self.body.active_facets(x, RIDGE_TOL);
        let facets = self.body.facets();
        let grads = active
            .into_iter()
            .map(|i| &facets[i].normal / facets[i].support)
            .collect();
        (best.max(0.0), grads)
    }
}

/// f = e^{−φ} for one of the supported potentials φ.
#[derive(Clone, Debug, PartialEq)]
pub enum LogConcaveFn {
    /// φ = c|x|².
    Gaussian { dim: usize, scale: f64 },
    /// φ = x·Qx.
    Quadratic(QuadraticForm),
    /// φ = c‖x‖²_K.
    QuadMinkowski { body: BodyPair, scale: f64 },
    /// φ = ‖x‖_K − c₀.
    Cone { body: BodyPair, offset: f64 },
    /// φ = c on K, +∞ outside. Arises as the dual of a cone.
    Indicator { body: BodyPair, offset: f64 },
    Grid(GridFn),
}

fn positive(name: &str, c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive, got {c}")))
    }
}

impl LogConcaveFn {
    pub fn gaussian(dim: usize, scale: f64) -> Result<Self> {
        positive("scale", scale)?;
        if !(1..=6).contains(&dim) {
            return Err(Error::UnsupportedDimension { n: dim });
        }
        Ok(LogConcaveFn::Gaussian { dim, scale })
    }

    /// γ_n = e^{−|x|²/2}.
    pub fn standard_gaussian(dim: usize) -> Self {
        LogConcaveFn::Gaussian { dim, scale: 0.5 }
    }

    pub fn quadratic(q: QuadraticForm) -> Self {
        LogConcaveFn::Quadratic(q)
    }

    pub fn quad_minkowski(body: Polytope, scale: f64) -> Result<Self> {
        positive("scale", scale)?;
        Ok(LogConcaveFn::QuadMinkowski {
            body: BodyPair::new(body)?,
            scale,
        })
    }

    pub fn cone(body: Polytope, offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::InvalidInput("offset must be finite".into()));
        }
        Ok(LogConcaveFn::Cone {
            body: BodyPair::new(body)?,
            offset,
        })
    }

    pub fn indicator(body: Polytope, offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::InvalidInput("offset must be finite".into()));
        }
        Ok(LogConcaveFn::Indicator {
            body: BodyPair::new(body)?,
            offset,
        })
    }

    pub fn grid(grid: GridFn) -> Self {
        LogConcaveFn::Grid(grid)
    }

    pub fn dim(&self) -> usize {
        match self {
            LogConcaveFn::Gaussian { dim, .. } => *dim,
            LogConcaveFn::Quadratic(q) => q.dim(),
            LogConcaveFn::QuadMinkowski { body, .. }
            | LogConcaveFn::Cone { body, .. }
            | LogConcaveFn::Indicator { body, .. } => body.body.dim(),
            LogConcaveFn::Grid(g) => g.dim(),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            LogConcaveFn::Gaussian { .. } => "gaussian",
            LogConcaveFn::Quadratic(_) => "quadratic",
            LogConcaveFn::QuadMinkowski { .. } => "quad-minkowski",
            LogConcaveFn::Cone { .. } => "cone",
            LogConcaveFn::Indicator { .. } => "indicator",
            LogConcaveFn::Grid(_) => "grid",
        }
    }

    pub fn body(&self) -> Option<&Polytope> {
        match self {
            LogConcaveFn::QuadMinkowski { body, .. }
            | LogConcaveFn::Cone { body, .. }
            | LogConcaveFn::Indicator { body, .. } => Some(&body.body),
            _ => None,
        }
    }

    pub fn is_grid(&self) -> bool {
        matches!(self, LogConcaveFn::Grid(_))
    }

    /// True when the potential was sampled and failed the convexity check.
    pub fn is_nonconvex(&self) -> bool {
        matches!(self, LogConcaveFn::Grid(g) if g.is_nonconvex())
    }

    /// φ(x), possibly +∞.
    pub fn potential(&self, x: &DVector<f64>) -> f64 {
        match self {
            LogConcaveFn::Gaussian { scale, .. } => scale * x.norm_squared(),
            LogConcaveFn::Quadratic(q) => q.quad(x),
            LogConcaveFn::QuadMinkowski { body, scale } => {
                let r = body.body.minkowski_norm(x);
                scale * r * r
            }
            LogConcaveFn::Cone { body, offset } => body.body.minkowski_norm(x) - offset,
            LogConcaveFn::Indicator { body, offset } => {
                if body.body.minkowski_norm(x) <= 1.0 + DOMAIN_TOL {
                    *offset
                } else {
                    f64::INFINITY
                }
            }
            LogConcaveFn::Grid(g) => g.potential(x),
        }
    }

    /// f(x) = e^{−φ(x)}.
    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        (-self.potential(x)).exp()
    }

    /// Every gradient of φ available at x, with equal shares summing to one.
    /// More than one entry means x lies on a ridge.
    pub fn active_gradients(&self, x: &DVector<f64>) -> Result<Vec<(DVector<f64>, f64)>> {
        let single = |g: DVector<f64>| Ok(vec![(g, 1.0)]);
        match self {
            LogConcaveFn::Gaussian { scale, .. } => single(x * (2.0 * scale)),
            LogConcaveFn::Quadratic(q) => single(q.matrix() * x * 2.0),
            LogConcaveFn::QuadMinkowski { body, scale } => {
                let (r, grads) = body.gauge_gradients(x);
                if r == 0.0 {
                    return single(DVector::zeros(x.len()));
                }
                let share = 1.0 / grads.len() as f64;
                Ok(grads.into_iter().map(|g| (g * (2.0 * scale * r), share)).collect())
            }
            LogConcaveFn::Cone { body, .. } => {
                let (_, grads) = body.gauge_gradients(x);
                let share = 1.0 / grads.len() as f64;
                Ok(grads.into_iter().map(|g| (g, share)).collect())
            }
            LogConcaveFn::Indicator { body, .. } => {
                if body.body.minkowski_norm(x) <= 1.0 + DOMAIN_TOL {
                    single(DVector::zeros(x.len()))
                } else {
                    Err(Error::OutsideDomain)
                }
            }
            LogConcaveFn::Grid(g) => single(g.gradient(x)?),
        }
    }

    /// ∇φ(x); fails on ridges and at the apex of a cone.
    pub fn gradient(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if let LogConcaveFn::Indicator { body, .. } = self {
            if (body.body.minkowski_norm(x) - 1.0).abs() <= DOMAIN_TOL {
                return Err(Error::NonSmoothPoint);
            }
        }
        let mut grads = self.active_gradients(x)?;
        if grads.len() != 1 {
            return Err(Error::NonSmoothPoint);
        }
        Ok(grads.pop().expect("one gradient").0)
    }

    /// The dual f° = e^{−φ*}. Grids use the default dual lattice.
    pub fn legendre(&self) -> Result<LogConcaveFn> {
        Ok(match self {
            LogConcaveFn::Gaussian { dim, scale } => LogConcaveFn::Gaussian {
                dim: *dim,
                scale: 0.25 / scale,
            },
            LogConcaveFn::Quadratic(q) => LogConcaveFn::Quadratic(q.inverse().scale(0.25)?),
            LogConcaveFn::QuadMinkowski { body, scale } => LogConcaveFn::QuadMinkowski {
                body: body.dual(),
                scale: 0.25 / scale,
            },
            LogConcaveFn::Cone { body, offset } => LogConcaveFn::Indicator {
                body: body.dual(),
                offset: *offset,
            },
            LogConcaveFn::Indicator { body, offset } => LogConcaveFn::Cone {
                body: body.dual(),
                offset: *offset,
            },
            LogConcaveFn::Grid(g) => {
                LogConcaveFn::Grid(discrete_legendre(g, &default_dual_lattice(g))?)
            }
        })
    }

    /// Discrete dual evaluated on an explicit lattice. Analytic families are
    /// sampled from their closed-form dual.
    pub fn legendre_on(&self, lattice: &Lattice) -> Result<GridFn> {
        match self {
            LogConcaveFn::Grid(g) => discrete_legendre(g, lattice),
            _ => {
                let dual = self.legendre()?;
                GridFn::sample(lattice.clone(), |y| dual.potential(y))
            }
        }
    }

    /// J(f) = ∫ f.
    pub fn total_mass(&self) -> Result<Estimate> {
        let n = self.dim();
        let pi = std::f64::consts::PI;
        Ok(match self {
            LogConcaveFn::Gaussian { scale, .. } => Estimate::exact((pi / scale).powf(n as f64 / 2.0)),
            LogConcaveFn::Quadratic(q) => {
                Estimate::exact(pi.powf(n as f64 / 2.0) / q.determinant().sqrt())
            }
            LogConcaveFn::QuadMinkowski { body, scale } => Estimate::exact(
                scale.powf(-(n as f64) / 2.0) * gamma_half(n + 2) * body.body.volume(),
            ),
            LogConcaveFn::Cone { body, offset } => {
                Estimate::exact(offset.exp() * factorial(n) * body.body.volume())
            }
            LogConcaveFn::Indicator { body, offset } => {
                Estimate::exact((-offset).exp() * body.body.volume())
            }
            LogConcaveFn::Grid(_) => {
                let spec = QuadratureSpec::default();
                let mass = |coarse| -> Result<f64> {
                    let (nodes, _) = self.nodes(&spec, coarse)?;
                    Ok(nodes.accumulate(n, 1, |x, w, acc| acc[0] += w * self.eval(x))[0])
                };
                let (fine, coarse) = (mass(false)?, mass(true)?);
                Estimate {
                    value: fine,
                    error_bound: (fine - coarse).abs(),
                }
            }
        })
    }

    /// J(f) through the requested backend. Grids have no analytic path.
    pub fn mass(&self, backend: Backend, spec: &QuadratureSpec) -> Result<Estimate> {
        match backend {
            Backend::Analytic if self.is_grid() => Err(Error::BackendUnavailable {
                family: self.family(),
                backend: "analytic",
            }),
            Backend::Analytic => self.total_mass(),
            Backend::Numeric => {
                let (v, e) = self.integrate(spec, 1, |_, _, wf, _, acc| acc[0] += wf)?;
                Ok(Estimate {
                    value: v[0],
                    error_bound: e[0],
                })
            }
        }
    }

    /// f∘T for an invertible T.
    pub fn compose_affine(&self, t: &DMatrix<f64>) -> Result<LogConcaveFn> {
        let n = self.dim();
        if t.nrows() != n || t.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: t.nrows(),
            });
        }
        let t_inv = t.clone().try_inverse().ok_or(Error::SingularMap)?;
        if t.determinant().abs() < 1e-300 {
            return Err(Error::SingularMap);
        }
        Ok(match self {
            LogConcaveFn::Gaussian { scale, .. } => LogConcaveFn::Quadratic(
                QuadraticForm::new(crate::numeric::symmetrize(&(t.transpose() * t * *scale)))?,
            ),
            LogConcaveFn::Quadratic(q) => LogConcaveFn::Quadratic(q.pull_back(t)?),
            LogConcaveFn::QuadMinkowski { body, scale } => LogConcaveFn::QuadMinkowski {
                body: body.pull_back(t, &t_inv)?,
                scale: *scale,
            },
            LogConcaveFn::Cone { body, offset } => LogConcaveFn::Cone {
                body: body.pull_back(t, &t_inv)?,
                offset: *offset,
            },
            LogConcaveFn::Indicator { body, offset } => LogConcaveFn::Indicator {
                body: body.pull_back(t, &t_inv)?,
                offset: *offset,
            },
            LogConcaveFn::Grid(g) => {
                let lat = g.lattice();
                // bounding box of T^{−1}(box), same node counts
                let mut lo = vec![f64::INFINITY; n];
                let mut hi = vec![f64::NEG_INFINITY; n];
                for mask in 0..(1usize << n) {
                    let corner = DVector::from_fn(n, |i, _| {
                        if mask >> i & 1 == 1 {
                            lat.upper(i)
                        } else {
                            lat.origin[i]
                        }
                    });
                    let p = &t_inv * corner;
                    for i in 0..n {
                        lo[i] = lo[i].min(p[i]);
                        hi[i] = hi[i].max(p[i]);
                    }
                }
                let spacing = (0..n)
                    .map(|i| (hi[i] - lo[i]) / (lat.shape[i] as f64 - 1.0))
                    .collect();
                let target = Lattice::new(lo, spacing, lat.shape.clone())?;
                let t = t.clone();
                LogConcaveFn::Grid(GridFn::sample(target, |x| g.potential(&(&t * x)))?)
            }
        })
    }

    /// Radial lower bound on φ and a length over which φ changes by O(1).
    fn profile(&self) -> Option<(Profile, f64)> {
        Some(match self {
            LogConcaveFn::Gaussian { scale, .. } => {
                (Profile::Power { a: *scale, p: 2.0, b: 0.0 }, 1.0 / scale.sqrt())
            }
            LogConcaveFn::Quadratic(q) => (
                Profile::Power {
                    a: q.min_eigenvalue(),
                    p: 2.0,
                    b: 0.0,
                },
                1.0 / q.max_eigenvalue().sqrt(),
            ),
            LogConcaveFn::QuadMinkowski { body, scale } => {
                let r = body.body.circumradius();
                (
                    Profile::Power {
                        a: scale / (r * r),
                        p: 2.0,
                        b: 0.0,
                    },
                    body.body.inradius() / scale.sqrt(),
                )
            }
            LogConcaveFn::Cone { body, offset } => (
                Profile::Power {
                    a: 1.0 / body.body.circumradius(),
                    p: 1.0,
                    b: -offset,
                },
                body.body.inradius(),
            ),
            LogConcaveFn::Indicator { body, .. } => {
                let r = body.body.circumradius();
                (Profile::Bounded { radius: r }, r)
            }
            LogConcaveFn::Grid(_) => return None,
        })
    }

    /// Linear change of variables x = S z under which the integrand is
    /// roughly isotropic: the vertex second moment of K to the power 1/2, or
    /// Q^{−1/2} for quadratic potentials.
    fn frame(&self) -> Result<Option<DMatrix<f64>>> {
        match self {
            LogConcaveFn::Quadratic(q) => Ok(Some(crate::numeric::spd_power(q.matrix(), -0.5)?)),
            LogConcaveFn::QuadMinkowski { body, .. }
            | LogConcaveFn::Cone { body, .. }
            | LogConcaveFn::Indicator { body, .. } => {
                let n = self.dim();
                let verts = body.body.vertices();
                let c = verts.iter().fold(DMatrix::zeros(n, n), |m, v| m + v * v.transpose())
                    / verts.len() as f64;
                Ok(Some(crate::numeric::spd_power(&c, 0.5)?))
            }
            _ => Ok(None),
        }
    }

    /// Node set in z-coordinates and the frame S with |det S|.
    fn nodes(&self, spec: &QuadratureSpec, coarse: bool) -> Result<(Nodes, Option<(DMatrix<f64>, f64)>)> {
        let spec = if coarse { spec.coarse() } else { *spec };
        match self {
            LogConcaveFn::Grid(g) => {
                let lat = if coarse {
                    g.lattice().coarsened()
                } else {
                    g.lattice().clone()
                };
                Ok((Nodes::lattice_cells(&lat), None))
            }
            _ => {
                let frame = self.frame()?;
                let local = match &frame {
                    Some(s) => self.compose_affine(s)?,
                    None => self.clone(),
                };
                let (profile, length) = local.profile().expect("analytic family");
                let mass = local.total_mass()?.value;
                let nodes = Nodes::for_profile(self.dim(), profile, length, mass, &spec)?;
                Ok((nodes, frame.map(|s| {
                    let det = s.determinant().abs();
                    (s, det)
                })))
            }
        }
    }

    /// Index of the facet cone containing x, for ridge refinement.
    fn piece(&self, x: &DVector<f64>) -> usize {
        let Some(body) = self.body() else { return 0 };
        let mut best = (0, f64::NEG_INFINITY);
        for (i, f) in body.facets().iter().enumerate() {
            let v = f.normal.dot(x) / f.support;
            if v > best.1 {
                best = (i, v);
            }
        }
        best.0
    }

    /// Sub-cells per axis for cells that straddle a ridge.
    fn refinement(&self) -> usize {
        match self {
            LogConcaveFn::QuadMinkowski { .. } | LogConcaveFn::Cone { .. } => match self.dim() {
                1 | 2 => 8,
                _ => 4,
            },
            _ => 1,
        }
    }

    /// Integrates `body(x, φ(x), w·f(x), gradients, acc)` over the nodes of a
    /// fine and a coarse rule. Returns the fine values and, per component,
    /// |fine − coarse| plus a relative tail allowance.
    pub(crate) fn integrate<F>(
        &self,
        spec: &QuadratureSpec,
        width: usize,
        body: F,
    ) -> Result<(Vec<f64>, Vec<f64>)>
    where
        F: Fn(&DVector<f64>, f64, f64, &[(DVector<f64>, f64)], &mut [f64]) + Sync,
    {
        let run = |coarse: bool| -> Result<Vec<f64>> {
            let (nodes, frame) = self.nodes(spec, coarse)?;
            let to_x = |z: &DVector<f64>| match &frame {
                Some((s, _)) => s * z,
                None => z.clone(),
            };
            let jac = frame.as_ref().map_or(1.0, |f| f.1);
            let refined = nodes.refined(self.dim(), |z| self.piece(&to_x(z)), self.refinement());
            Ok(refined.accumulate(width, |z, w, acc| {
                let x = to_x(z);
                let phi = self.potential(&x);
                if !phi.is_finite() {
                    return;
                }
                let wf = w * jac * (-phi).exp();
                if wf == 0.0 {
                    return;
                }
                if let Ok(grads) = self.active_gradients(&x) {
                    body(&x, phi, wf, &grads, acc);
                }
            }))
        };
        let fine = run(false)?;
        let coarse = run(true)?;
        let bounds = fine
            .iter()
            .zip(&coarse)
            .map(|(a, b)| (a - b).abs() + quadrature::TAIL_TOL * a.abs())
            .collect();
        Ok((fine, bounds))
    }

    /// Visits every node with positive weight, in a fixed order.
    pub(crate) fn for_each_node<F>(&self, spec: &QuadratureSpec, mut visit: F) -> Result<()>
    where
        F: FnMut(&DVector<f64>, f64, f64, &[(DVector<f64>, f64)]),
    {
        let (nodes, frame) = self.nodes(spec, false)?;
        let to_x = |z: &DVector<f64>| match &frame {
            Some((s, _)) => s * z,
            None => z.clone(),
        };
        let jac = frame.as_ref().map_or(1.0, |f| f.1);
        let refined = nodes.refined(self.dim(), |z| self.piece(&to_x(z)), self.refinement());
        refined.visit(|z, w| {
            let x = to_x(z);
            let phi = self.potential(&x);
            if !phi.is_finite() {
                return;
            }
            let wf = w * jac * (-phi).exp();
            if wf == 0.0 {
                return;
            }
            if let Ok(grads) = self.active_gradients(&x) {
                visit(&x, phi, wf, &grads);
            }
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{random_gl, rng, sphere_directions};

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(xs)
    }

    fn square() -> Polytope {
        Polytope::cube(2).unwrap()
    }

    #[test]
    fn potential_examples() {
        let g = LogConcaveFn::standard_gaussian(2);
        assert_eq!(g.potential(&v(&[0.0, 0.0])), 0.0);
        assert_eq!(g.eval(&v(&[0.0, 0.0])), 1.0);
        let c = LogConcaveFn::cone(square(), 1.0).unwrap();
        assert_eq!(c.potential(&v(&[0.0, 0.0])), -1.0);
        assert!((c.eval(&v(&[0.0, 0.0])) - std::f64::consts::E).abs() < 1e-15);
        let q = LogConcaveFn::quad_minkowski(square(), 0.5).unwrap();
        assert_eq!(q.potential(&v(&[2.0, 0.0])), 2.0);
    }

    #[test]
    fn gradient_examples() {
        let g = LogConcaveFn::standard_gaussian(2);
        assert_eq!(g.gradient(&v(&[0.3, -1.0])).unwrap(), v(&[0.3, -1.0]));
        let c = LogConcaveFn::cone(square(), 0.0).unwrap();
        assert_eq!(c.gradient(&v(&[0.5, 0.2])).unwrap(), v(&[1.0, 0.0]));
        assert!(matches!(c.gradient(&v(&[0.0, 0.0])), Err(Error::NonSmoothPoint)));
        assert!(matches!(c.gradient(&v(&[0.5, 0.5])), Err(Error::NonSmoothPoint)));
    }

    #[test]
    fn fenchel_identity_at_random_points() {
        let body = crate::bodies::random_body(3, 3, 10).unwrap();
        let fams = [
            LogConcaveFn::gaussian(3, 0.7).unwrap(),
            LogConcaveFn::quad_minkowski(body.clone(), 0.5).unwrap(),
            LogConcaveFn::cone(body, 1.3).unwrap(),
        ];
        let mut r = rng(5);
        for f in &fams {
            let dual = f.legendre().unwrap();
            for _ in 0..1000 {
                let x = crate::numeric::random_unit_vector(&mut r, 3) * 2.0;
                let y = f.gradient(&x).unwrap();
                let lhs = dual.potential(&y) + f.potential(&x);
                assert!((lhs - x.dot(&y)).abs() < 1e-9 * (1.0 + lhs.abs()), "{}", f.family());
            }
        }
    }

    #[test]
    fn analytic_duals() {
        let g = LogConcaveFn::standard_gaussian(3);
        assert_eq!(g.legendre().unwrap(), g);
        let c = LogConcaveFn::cone(square(), 1.0).unwrap();
        let d = c.legendre().unwrap();
        assert_eq!(d.family(), "indicator");
        assert_eq!(d.potential(&v(&[0.5, 0.5])), 1.0);
        assert_eq!(d.potential(&v(&[0.6, 0.6])), f64::INFINITY);
        assert_eq!(d.legendre().unwrap(), c);
        let q = LogConcaveFn::quad_minkowski(square(), 0.5).unwrap();
        assert_eq!(q.legendre().unwrap().legendre().unwrap(), q);
    }

    #[test]
    fn fenchel_inequality_on_random_pairs() {
        let body = crate::bodies::random_body(8, 2, 7).unwrap();
        let f = LogConcaveFn::quad_minkowski(body, 0.9).unwrap();
        let dual = f.legendre().unwrap();
        let dirs = sphere_directions(2, 200, 4);
        for (i, x) in dirs.iter().enumerate() {
            let y = &dirs[(i * 7 + 3) % dirs.len()] * 1.7;
            assert!(f.potential(x) + dual.potential(&y) >= x.dot(&y) - 1e-12);
        }
    }

    #[test]
    fn mass_examples() {
        for n in 1..=4 {
            let g = LogConcaveFn::standard_gaussian(n);
            let want = (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0);
            assert!((g.total_mass().unwrap().value - want).abs() < 1e-12 * want);
        }
        let q = LogConcaveFn::quad_minkowski(square(), 0.5).unwrap();
        assert!((q.total_mass().unwrap().value - 8.0).abs() < 1e-12);
        let c = LogConcaveFn::cone(square(), 0.0).unwrap();
        assert!((c.total_mass().unwrap().value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn affine_rule_for_duals() {
        let body = crate::bodies::random_body(2, 2, 6).unwrap();
        let f = LogConcaveFn::quad_minkowski(body, 0.5).unwrap();
        let mut r = rng(7);
        let t = random_gl(&mut r, 2, 0.5, 2.0);
        let lhs = f.compose_affine(&t).unwrap().legendre().unwrap();
        let dual = f.legendre().unwrap();
        let t_inv_t = t.clone().try_inverse().unwrap().transpose();
        for y in sphere_directions(2, 50, 1) {
            let a = lhs.potential(&y);
            let b = dual.potential(&(&t_inv_t * &y));
            assert!((a - b).abs() < 1e-10 * (1.0 + b));
        }
    }

    #[test]
    fn compose_scales_mass() {
        let mut r = rng(2);
        let body = crate::bodies::random_body(1, 3, 9).unwrap();
        let f = LogConcaveFn::cone(body, 0.4).unwrap();
        let t = random_gl(&mut r, 3, 0.2, 5.0);
        let m = f.compose_affine(&t).unwrap().total_mass().unwrap().value;
        let want = f.total_mass().unwrap().value / t.determinant().abs();
        assert!((m - want).abs() < 1e-9 * want);
        let id = DMatrix::identity(3, 3);
        let same = f.compose_affine(&id).unwrap();
        assert!((same.total_mass().unwrap().value - f.total_mass().unwrap().value).abs() < 1e-12);
    }

    #[test]
    fn grid_dual_of_half_square_norm() {
        let lat = Lattice::centered(2, 6.0, 121).unwrap();
        let f = LogConcaveFn::grid(GridFn::sample(lat, |x| 0.5 * x.norm_squared()).unwrap());
        let d = f.legendre().unwrap();
        let mut worst = 0.0_f64;
        for i in 0..61 {
            for j in 0..61 {
                let y = v(&[-3.0 + 0.1 * i as f64, -3.0 + 0.1 * j as f64]);
                worst = worst.max((d.potential(&y) - 0.5 * y.norm_squared()).abs());
            }
        }
        assert!(worst < 0.02, "{worst}");
    }

    #[test]
    fn numeric_masses_match_closed_forms() {
        let body = crate::bodies::random_body(4, 2, 8).unwrap();
        let fams = [
            LogConcaveFn::gaussian(2, 0.5).unwrap(),
            LogConcaveFn::quad_minkowski(body.clone(), 0.5).unwrap(),
            LogConcaveFn::cone(body, 0.5).unwrap(),
        ];
        for f in &fams {
            let (v, e) = f.integrate(&QuadratureSpec::default(), 1, |_, _, wf, _, acc| acc[0] += wf).unwrap();
            let exact = f.total_mass().unwrap().value;
            let rel = (v[0] - exact).abs() / exact;
            assert!(rel < 1e-3, "{} {rel} (bound {})", f.family(), e[0] / exact);
        }
    }
}
