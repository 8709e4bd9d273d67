//! α·f ⊕ β·g = e^{−(αφ* + βψ*)*}.

use super::grid::{GridFn, Lattice};
use super::legendre::{default_dual_lattice, discrete_legendre};
use super::LogConcaveFn;
use crate::ellipsoids::QuadraticForm;
use crate::error::{Error, Result};

/// Where the grid fallback samples the result.
#[derive(Clone, Debug, PartialEq)]
pub struct AsplundOptions {
    /// Primal lattice for the result; overrides `nodes` and `half_width`.
    pub lattice: Option<Lattice>,
    pub nodes: usize,
    /// Defaults to the larger truncation radius of the two inputs.
    pub half_width: Option<f64>,
}

impl Default for AsplundOptions {
    fn default() -> Self {
        AsplundOptions {
            lattice: None,
            nodes: 101,
            half_width: None,
        }
    }
}

fn quadratic_matrix(f: &LogConcaveFn) -> Option<nalgebra::DMatrix<f64>> {
    match f {
        LogConcaveFn::Gaussian { dim, scale } => Some(nalgebra::DMatrix::identity(*dim, *dim) * *scale),
        LogConcaveFn::Quadratic(q) => Some(q.matrix().clone()),
        _ => None,
    }
}

fn closed_form(alpha: f64, f: &LogConcaveFn, beta: f64, g: &LogConcaveFn) -> Result<Option<LogConcaveFn>> {
    use LogConcaveFn::*;
    Ok(match (f, g) {
        (Gaussian { dim, scale: c1 }, Gaussian { scale: c2, .. }) => Some(Gaussian {
            dim: *dim,
            scale: 1.0 / (alpha / c1 + beta / c2),
        }),
        (QuadMinkowski { body: k1, scale: c1 }, QuadMinkowski { body: k2, scale: c2 }) if k1 == k2 => {
            Some(QuadMinkowski {
                body: k1.clone(),
                scale: 1.0 / (alpha / c1 + beta / c2),
            })
        }
        (Cone { body: k1, offset: a }, Cone { body: k2, offset: b }) if k1 == k2 => Some(Cone {
            body: k1.clone(),
            offset: alpha * a + beta * b,
        }),
        _ => match (quadratic_matrix(f), quadratic_matrix(g)) {
            (Some(qf), Some(qg)) => {
                // duals are Q^{−1}/4; the result is (αQ_f^{−1} + βQ_g^{−1})^{−1}
                let inv = |m: nalgebra::DMatrix<f64>| m.try_inverse().ok_or(Error::SingularMap);
                let dual = inv(qf)? * alpha + inv(qg)? * beta;
                Some(Quadratic(QuadraticForm::new(crate::numeric::symmetrize(&inv(dual)?))?))
            }
            _ => None,
        },
    })
}

fn default_half_width(f: &LogConcaveFn) -> Option<f64> {
    let (profile, _) = f.profile()?;
    let mass = f.total_mass().ok()?.value;
    Some(profile.truncation_radius(f.dim(), mass))
}

/// Closed form when both inputs share a family that admits one, otherwise
/// a grid computed through the discrete Legendre transform.
pub fn asplund_sum(
    alpha: f64,
    f: &LogConcaveFn,
    beta: f64,
    g: &LogConcaveFn,
    opts: &AsplundOptions,
) -> Result<LogConcaveFn> {
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidInput("Asplund coefficients must be positive".into()));
    }
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: g.dim(),
        });
    }
    if opts.lattice.is_none() {
        if let Some(h) = closed_form(alpha, f, beta, g)? {
            return Ok(h);
        }
    }
    let n = f.dim();
    let primal = match (&opts.lattice, f, g) {
        (Some(l), _, _) => l.clone(),
        (None, LogConcaveFn::Grid(a), _) => a.lattice().clone(),
        (None, _, LogConcaveFn::Grid(b)) => b.lattice().clone(),
        _ => {
            let hw = opts.half_width.unwrap_or_else(|| {
                default_half_width(f)
                    .into_iter()
                    .chain(default_half_width(g))
                    .fold(1.0, f64::max)
            });
            Lattice::centered(n, hw, opts.nodes)?
        }
    };
    let sample = |h: &LogConcaveFn| -> Result<GridFn> {
        match h {
            LogConcaveFn::Grid(grid) if grid.lattice() == &primal => Ok(grid.clone()),
            LogConcaveFn::Grid(grid) => grid.resample(primal.clone()),
            _ => GridFn::sample(primal.clone(), |x| h.potential(x)),
        }
    };
    let (fs, gs) = (sample(f)?, sample(g)?);
    let (df, dg) = (default_dual_lattice(&fs), default_dual_lattice(&gs));
    let mut origin = Vec::with_capacity(n);
    let mut spacing = Vec::with_capacity(n);
    for i in 0..n {
        let lo = df.origin[i].min(dg.origin[i]);
        let hi = df.upper(i).max(dg.upper(i));
        origin.push(lo);
        spacing.push((hi - lo) / (primal.shape[i] as f64 - 1.0));
    }
    let dual = Lattice::new(origin, spacing, primal.shape.clone())?;
    let f_star = match f {
        LogConcaveFn::Grid(_) => discrete_legendre(&fs, &dual)?,
        _ => f.legendre_on(&dual)?,
    };
    let g_star = match g {
        LogConcaveFn::Grid(_) => discrete_legendre(&gs, &dual)?,
        _ => g.legendre_on(&dual)?,
    };
    let values = f_star
        .values()
        .iter()
        .zip(g_star.values())
        .map(|(a, b)| alpha * a + beta * b)
        .collect();
    let sum = GridFn::new(dual, values)?;
    Ok(LogConcaveFn::Grid(discrete_legendre(&sum, &primal)?))
}
