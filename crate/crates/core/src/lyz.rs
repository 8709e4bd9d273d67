//! The LYZ ellipsoid Γ₋₂f of a log-concave function:
//! −log Γ₋₂f(x) = x·Mx with
//! m_ij = n²/(8 δJ(f,f)) ∫ (e_i·∇φ)(e_j·∇φ) φ*(∇φ)^{−1} e^{−φ}.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::ellipsoids::{lyz_body, QuadraticForm};
use crate::error::{Error, Result};
use crate::logconcave::{first_variation, Backend, Estimate, LogConcaveFn, QuadratureSpec};
use crate::numeric::{sphere_directions, symmetrize, unit_ball_volume};

/// Threshold for the φ* > 0 hypothesis.
pub const EPS_POS: f64 = 1e-10;

const POSITIVITY_DIRECTIONS: usize = 4096;

/// M together with the δJ(f,f) that normalizes it.
#[derive(Clone, Debug)]
pub struct Gamma2 {
    pub form: QuadraticForm,
    pub delta_j: Estimate,
    pub backend: Backend,
    /// Bound on the largest absolute entry error of M.
    pub error_bound: f64,
}

/// Serializable fragment {"lyz_matrix", "delta_J", "backend", "error_bound"}.
#[derive(Clone, Debug, Serialize)]
pub struct Gamma2Report {
    pub lyz_matrix: Vec<Vec<f64>>,
    #[serde(rename = "delta_J")]
    pub delta_j: f64,
    pub backend: Backend,
    pub error_bound: f64,
}

impl Gamma2 {
    pub fn report(&self) -> Gamma2Report {
        Gamma2Report {
            lyz_matrix: self.form.rows(),
            delta_j: self.delta_j.value,
            backend: self.backend,
            error_bound: self.error_bound,
        }
    }

    /// Γ₋₂f(x) = e^{−x·Mx}.
    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        (-self.form.quad(x)).exp()
    }
}

/// Checks φ*(y) > ε_pos for y ≠ o. Closed-form families are decided exactly;
/// grids are probed along 4096 directions at two radii inside the dual box.
pub fn check_positivity(f: &LogConcaveFn) -> Result<()> {
    match f {
        LogConcaveFn::Gaussian { .. }
        | LogConcaveFn::Quadratic(_)
        | LogConcaveFn::QuadMinkowski { .. } => Ok(()),
        LogConcaveFn::Cone { offset, .. } => {
            if *offset > EPS_POS {
                Ok(())
            } else {
                Err(Error::PositivityViolation {
                    value: *offset,
                    radius: 0.0,
                })
            }
        }
        LogConcaveFn::Indicator { .. } => Err(Error::RestrictedDomain),
        LogConcaveFn::Grid(_) => {
            let dual = f.legendre()?;
            let LogConcaveFn::Grid(d) = &dual else {
                unreachable!("grid duals are grids")
            };
            let lat = d.lattice();
            let half = (0..lat.dim())
                .map(|i| lat.origin[i].abs().min(lat.upper(i).abs()))
                .fold(f64::INFINITY, f64::min);
            for dir in sphere_directions(f.dim(), POSITIVITY_DIRECTIONS, 0x9051) {
                for radius in [0.25 * half, 0.5 * half] {
                    let value = dual.potential(&(&dir * radius));
                    if !(value > EPS_POS) {
                        return Err(Error::PositivityViolation { value, radius });
                    }
                }
            }
            Ok(())
        }
    }
}

fn analytic_matrix(f: &LogConcaveFn) -> Result<DMatrix<f64>> {
    let n = f.dim();
    Ok(match f {
        LogConcaveFn::Gaussian { scale, .. } => DMatrix::identity(n, n) * *scale,
        LogConcaveFn::Quadratic(q) => q.matrix().clone(),
        LogConcaveFn::QuadMinkowski { body, scale } => lyz_body(body.body())?.matrix() * *scale,
        LogConcaveFn::Cone { body, offset } => {
            lyz_body(body.body())?.matrix() * (n as f64 / (8.0 * offset * offset))
        }
        LogConcaveFn::Indicator { .. } | LogConcaveFn::Grid(_) => {
            return Err(Error::BackendUnavailable {
                family: f.family(),
                backend: "analytic",
            })
        }
    })
}

/// M for f. The numeric backend computes δJ(f,f) in the same pass as the
/// matrix integral so their quadrature errors are correlated.
pub fn gamma2_fn(f: &LogConcaveFn, backend: Backend, spec: &QuadratureSpec) -> Result<Gamma2> {
    check_positivity(f)?;
    let n = f.dim();
    let scale = (n * n) as f64 / 8.0;
    match backend {
        Backend::Analytic => {
            let m = analytic_matrix(f)?;
            let delta_j = first_variation(f, f, Backend::Analytic, spec)?;
            Ok(Gamma2 {
                form: QuadraticForm::new(m)?,
                delta_j,
                backend,
                error_bound: 0.0,
            })
        }
        Backend::Numeric => {
            let dual = if f.is_grid() { None } else { Some(f.legendre()?) };
            let (v, e) = f.integrate(spec, 1 + n * n, |x, phi, wf, grads, acc| {
                for (y, share) in grads {
                    let star = match &dual {
                        Some(d) => d.potential(y),
                        None => x.dot(y) - phi,
                    };
                    let w = wf * share;
                    acc[0] += w * star;
                    if y.iter().all(|c| *c == 0.0) || !(star > 0.0) {
                        continue;
                    }
                    let w = w / star;
                    for i in 0..n {
                        for j in 0..n {
                            acc[1 + i * n + j] += w * y[i] * y[j];
                        }
                    }
                }
            })?;
            let dj = v[0];
            let factor = scale / dj;
            let m = DMatrix::from_row_slice(n, n, &v[1..]) * factor;
            let rel_dj = e[0] / dj.abs();
            let error_bound = (0..n * n)
                .map(|k| e[1 + k] * factor + (v[1 + k] * factor).abs() * rel_dj)
                .fold(0.0, f64::max);
            Ok(Gamma2 {
                form: QuadraticForm::new(symmetrize(&m))?,
                delta_j: Estimate {
                    value: dj,
                    error_bound: e[0],
                },
                backend,
                error_bound,
            })
        }
    }
}

/// J(Γ₋₂f) = Γ(n/2+1) ω_n det(M)^{−1/2}.
pub fn gamma2_total_mass(m: &QuadraticForm) -> f64 {
    let n = m.dim();
    crate::numeric::gamma_half(n + 2) * unit_ball_volume(n) / m.determinant().sqrt()
}

/// f∘T.
pub fn compose_affine(f: &LogConcaveFn, t: &DMatrix<f64>) -> Result<LogConcaveFn> {
    f.compose_affine(t)
}

/// T = A^{−1/2}/√2 for the LYZ form A of f, and f∘T, whose form is I/2.
pub fn isotropic_position(
    f: &LogConcaveFn,
    backend: Backend,
    spec: &QuadratureSpec,
) -> Result<(DMatrix<f64>, LogConcaveFn)> {
    let g = gamma2_fn(f, backend, spec)?;
    let t = g.form.whitening_map()?;
    let moved = f.compose_affine(&t)?;
    Ok((t, moved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Polytope;
    use crate::numeric::{random_gl, rel_matrix_error, rng};

    #[test]
    fn analytic_examples() {
        let spec = QuadratureSpec::default();
        let g = gamma2_fn(&LogConcaveFn::standard_gaussian(3), Backend::Analytic, &spec).unwrap();
        assert!(rel_matrix_error(g.form.matrix(), &(DMatrix::identity(3, 3) * 0.5)) < 1e-15);
        let k = Polytope::regular_simplex(2).unwrap();
        let a = lyz_body(&k).unwrap();
        let q = gamma2_fn(&LogConcaveFn::quad_minkowski(k.clone(), 0.5).unwrap(), Backend::Analytic, &spec).unwrap();
        assert!(rel_matrix_error(q.form.matrix(), &(a.matrix() * 0.5)) < 1e-14);
        let c = gamma2_fn(&LogConcaveFn::cone(k, 1.5).unwrap(), Backend::Analytic, &spec).unwrap();
        assert!(rel_matrix_error(c.form.matrix(), &(a.matrix() * (2.0 / (8.0 * 2.25)))) < 1e-14);
    }

    #[test]
    fn total_mass_examples() {
        let pi = std::f64::consts::PI;
        assert!((gamma2_total_mass(&QuadraticForm::identity(2)) - pi).abs() < 1e-14);
        let half = QuadraticForm::scaled_identity(3, 0.5).unwrap();
        assert!((gamma2_total_mass(&half) - (2.0 * pi).powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn positivity_failures() {
        let k = Polytope::cube(2).unwrap();
        let c = LogConcaveFn::cone(k, 0.0).unwrap();
        assert!(matches!(
            gamma2_fn(&c, Backend::Analytic, &Default::default()),
            Err(Error::PositivityViolation { .. })
        ));
    }

    #[test]
    fn covariance_under_gl() {
        let body = crate::bodies::random_body(12, 3, 9).unwrap();
        let f = LogConcaveFn::quad_minkowski(body, 0.5).unwrap();
        let m = gamma2_fn(&f, Backend::Analytic, &Default::default()).unwrap();
        let mut r = rng(4);
        for _ in 0..20 {
            let t = random_gl(&mut r, 3, 0.1, 10.0);
            let moved = gamma2_fn(&compose_affine(&f, &t).unwrap(), Backend::Analytic, &Default::default()).unwrap();
            let want = t.transpose() * m.form.matrix() * &t;
            assert!(rel_matrix_error(moved.form.matrix(), &want) < 1e-9);
        }
    }

    #[test]
    fn isotropic_position_whitens() {
        let tri = crate::bodies::random_body(3, 2, 3).unwrap();
        let f = LogConcaveFn::quad_minkowski(tri, 0.5).unwrap();
        let (_, g) = isotropic_position(&f, Backend::Analytic, &Default::default()).unwrap();
        let m = gamma2_fn(&g, Backend::Analytic, &Default::default()).unwrap();
        assert!(rel_matrix_error(m.form.matrix(), &(DMatrix::identity(2, 2) * 0.5)) < 1e-8);
    }

    #[test]
    fn numeric_agrees_in_the_plane() {
        let spec = QuadratureSpec::default();
        let k = crate::bodies::random_body(21, 2, 3).unwrap();
        for f in [
            LogConcaveFn::standard_gaussian(2),
            LogConcaveFn::quad_minkowski(k.clone(), 0.5).unwrap(),
            LogConcaveFn::cone(k, 1.0).unwrap(),
        ] {
            let a = gamma2_fn(&f, Backend::Analytic, &spec).unwrap();
            let b = gamma2_fn(&f, Backend::Numeric, &spec).unwrap();
            let err = rel_matrix_error(b.form.matrix(), a.form.matrix());
            assert!(err < 3e-3, "{}: {err} (bound {})", f.family(), b.error_bound);
        }
    }
}
