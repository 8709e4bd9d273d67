//! Isotropic measures on spheres, the Ball–Barthe inequality, isotropic
//! embeddings and the τ function used to transport the Gaussian.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use statrs::function::erf::{erf, erfc};

use crate::error::{Error, Result};
use crate::logconcave::{surface_measure, DiscreteMeasure, LogConcaveFn, QuadratureSpec};
use crate::numeric::{derive_seed, max_abs, pairwise_sum, random_unit_vector, rng, spd_power};

/// Isotropy tolerance for exact constructions.
pub const ISO_TOL_EXACT: f64 = 1e-9;
/// Isotropy tolerance for measures produced by quadrature.
pub const ISO_TOL_NUMERIC: f64 = 3e-3;

const UNIT_TOL: f64 = 1e-12;

/// Σ c_k δ_{u_k} with u_k on the unit sphere of R^d.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalMeasure {
    atoms: Vec<DVector<f64>>,
    weights: Vec<f64>,
}

/// Result of an isotropy test; the residual is ‖[μ] − I‖_max.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsotropyCheck {
    pub isotropic: bool,
    pub residual: f64,
}

impl SphericalMeasure {
    pub fn new(atoms: Vec<DVector<f64>>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != weights.len() {
            return Err(Error::InvalidInput(
                "spherical measure needs matching, nonempty atom and weight lists".into(),
            ));
        }
        let d = atoms[0].len();
        for (index, u) in atoms.iter().enumerate() {
            if u.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: u.len(),
                });
            }
            let norm = u.norm();
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(Error::NonUnitImage { index, norm });
            }
        }
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::NonPositiveWeight { index, value });
        }
        Ok(SphericalMeasure { atoms, weights })
    }

    /// ±e_i with weight 1/2 each.
    pub fn cross(d: usize) -> Self {
        let mut atoms = Vec::with_capacity(2 * d);
        for i in 0..d {
            for s in [1.0, -1.0] {
                let mut e = DVector::zeros(d);
                e[i] = s;
                atoms.push(e);
            }
        }
        SphericalMeasure {
            weights: vec![0.5; 2 * d],
            atoms,
        }
    }

    /// e_1, …, e_d with the given weights.
    pub fn basis(weights: Vec<f64>) -> Result<Self> {
        let d = weights.len();
        let atoms = (0..d)
            .map(|i| {
                let mut e = DVector::zeros(d);
                e[i] = 1.0;
                e
            })
            .collect();
        Self::new(atoms, weights)
    }

    /// Vertices of a regular simplex inscribed in S^{d−1}, each of weight
    /// d/(d+1).
    pub fn simplex(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::UnsupportedDimension { n: d });
        }
        // rows of an orthonormal basis of the centred subspace of R^{d+1}
        let m = d + 1;
        let centred = DMatrix::identity(m, m) - DMatrix::from_element(m, m, 1.0 / m as f64);
        let eig = crate::numeric::symmetric_eigen(&centred);
        let keep: Vec<usize> = (0..m).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
        let atoms: Vec<DVector<f64>> = (0..m)
            .map(|k| DVector::from_iterator(d, keep.iter().map(|&j| eig.eigenvectors[(k, j)])).normalize())
            .collect();
        let w = d as f64 / (d as f64 + 1.0);
        Self::new(atoms.clone(), vec![w; atoms.len()])
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].len()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[DVector<f64>] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// [μ] = Σ c_k u_k⊗u_k.
    pub fn moment_matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (u, c) in self.atoms.iter().zip(&self.weights) {
            m += u * u.transpose() * *c;
        }
        m
    }

    pub fn is_isotropic(&self, tol: f64) -> IsotropyCheck {
        let d = self.dim();
        let residual = max_abs(&(self.moment_matrix() - DMatrix::identity(d, d)));
        IsotropyCheck {
            isotropic: residual <= tol,
            residual,
        }
    }

    /// ∫ g dμ.
    pub fn integrate<F: Fn(&DVector<f64>) -> f64>(&self, g: F) -> f64 {
        let terms: Vec<f64> = self.atoms.iter().zip(&self.weights).map(|(u, c)| c * g(u)).collect();
        pairwise_sum(&terms)
    }

    /// Adds the antipodal copy of every atom, halving all weights.
    pub fn symmetrized(&self) -> Self {
        let mut atoms = Vec::with_capacity(2 * self.len());
        let mut weights = Vec::with_capacity(2 * self.len());
        for (u, c) in self.atoms.iter().zip(&self.weights) {
            atoms.push(u.clone());
            atoms.push(-u);
            weights.push(0.5 * c);
            weights.push(0.5 * c);
        }
        SphericalMeasure { atoms, weights }
    }

    /// One step u ↦ [μ]^{−1/2}u / |·|, c ↦ c |[μ]^{−1/2}u|², which makes the
    /// moment matrix the identity up to rounding.
    pub fn whitened(&self) -> Result<Self> {
        let r = spd_power(&self.moment_matrix(), -0.5)?;
        let mut atoms = Vec::with_capacity(self.len());
        let mut weights = Vec::with_capacity(self.len());
        for (u, c) in self.atoms.iter().zip(&self.weights) {
            let v = &r * u;
            let s = v.norm();
            atoms.push(v / s);
            weights.push(c * s * s);
        }
        SphericalMeasure::new(atoms, weights)
    }
}

/// Random isotropic measure with `count` atoms in R^d, optionally symmetric.
/// Whitening is repeated until the residual drops below 1e−10.
pub fn random_isotropic_measure(seed: u64, d: usize, count: usize, symmetric: bool) -> Result<SphericalMeasure> {
    if count < d {
        return Err(Error::InvalidInput(format!(
            "an isotropic measure in R^{d} needs at least {d} atoms"
        )));
    }
    for attempt in 0..32u64 {
        let mut r = rng(derive_seed(seed, attempt));
        let atoms: Vec<DVector<f64>> = (0..count).map(|_| random_unit_vector(&mut r, d)).collect();
        let weights: Vec<f64> = (0..count).map(|_| r.gen_range(0.1..1.0)).collect();
        let mut mu = SphericalMeasure::new(atoms, weights)?;
        if symmetric {
            mu = mu.symmetrized();
        }
        let mut ok = false;
        for _ in 0..8 {
            let Ok(next) = mu.whitened() else { break };
            mu = next;
            if mu.is_isotropic(1e-10).isotropic {
                ok = true;
                break;
            }
        }
        if ok {
            return Ok(mu);
        }
    }
    Err(Error::DegenerateSample { attempts: 32 })
}

/// Both sides of det ∫ l u⊗u dμ ≥ exp ∫ log l dμ, evaluated in logs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallBarthe {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub log_ratio: f64,
}

pub fn ball_barthe(mu: &SphericalMeasure, l: &[f64]) -> Result<BallBarthe> {
    if l.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            found: l.len(),
        });
    }
    if let Some((index, &value)) = l.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::NonPositiveWeight { index, value });
    }
    let check = mu.is_isotropic(ISO_TOL_EXACT);
    if !check.isotropic {
        return Err(Error::NotIsotropic {
            residual: check.residual,
        });
    }
    let d = mu.dim();
    let mut m = DMatrix::zeros(d, d);
    for ((u, c), lk) in mu.atoms.iter().zip(&mu.weights).zip(l) {
        m += u * u.transpose() * (c * lk);
    }
    let chol = m.cholesky().ok_or(Error::NotPositiveDefinite { min_eigenvalue: 0.0 })?;
    let log_lhs = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    let terms: Vec<f64> = mu.weights.iter().zip(l).map(|(c, lk)| c * lk.ln()).collect();
    let log_rhs = pairwise_sum(&terms);
    let log_ratio = log_lhs - log_rhs;
    Ok(BallBarthe {
        lhs: log_lhs.exp(),
        rhs: log_rhs.exp(),
        ratio: log_ratio.exp(),
        log_ratio,
    })
}

/// The measure Σ w_k δ_{h(x_k)}; every h(x_k) must be a unit vector.
pub fn push_forward<H>(h: H, m: &DiscreteMeasure) -> Result<SphericalMeasure>
where
    H: Fn(&[f64]) -> DVector<f64>,
{
    let mut atoms = Vec::with_capacity(m.len());
    let mut weights = Vec::with_capacity(m.len());
    for i in 0..m.len() {
        if m.weight(i) == 0.0 {
            continue;
        }
        let u = h(m.point(i));
        let norm = u.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitImage { index: i, norm });
        }
        atoms.push(u);
        weights.push(m.weight(i));
    }
    SphericalMeasure::new(atoms, weights)
}

/// Whether h is an isotropic embedding of m: ∫ |u·h|² dm = |u|² for all u.
pub fn isotropic_embedding_check<H>(h: H, m: &DiscreteMeasure, tol: f64) -> Result<IsotropyCheck>
where
    H: Fn(&[f64]) -> DVector<f64>,
{
    Ok(push_forward(h, m)?.is_isotropic(tol))
}

/// h̄-pushforward of |h|² dν for f in isotropic position, with
/// h(y) = (y, (2/n) φ*(y)) and ν = n²/(4δJ(f,f)) (φ*)^{−1} μ_f.
#[derive(Clone, Debug)]
pub struct LiftedEmbedding {
    /// Unit vectors h̄(y_k) ∈ S^n carrying weights |h(y_k)|² ν_k.
    pub sphere: SphericalMeasure,
    /// The weighted measure |h|² dν on the points y_k.
    pub measure: DiscreteMeasure,
    pub delta_j: f64,
    /// ‖2M − I‖_max of the sampled LYZ matrix.
    pub position_residual: f64,
    /// |barycenter of μ_f| relative to the RMS radius of μ_f.
    pub barycenter_offset: f64,
}

impl LiftedEmbedding {
    pub fn check(&self, tol: f64) -> IsotropyCheck {
        self.sphere.is_isotropic(tol)
    }

    /// h̄ as a map on the points of `measure`.
    pub fn map(&self, dual: &LogConcaveFn) -> impl Fn(&[f64]) -> DVector<f64> + '_ {
        let dual = dual.clone();
        move |y| {
            let n = y.len();
            let y = DVector::from_row_slice(y);
            let mut h = DVector::zeros(n + 1);
            h.rows_mut(0, n).copy_from(&y);
            h[n] = 2.0 / n as f64 * dual.potential(&y);
            let norm = h.norm();
            h / norm
        }
    }
}

/// Builds the lifted embedding. `position_tol` bounds ‖2M − I‖_max for the
/// LYZ matrix sampled from the same measure; the barycenter of μ_f must be
/// within 1e−3 of the origin relative to the RMS radius of μ_f.
pub fn lifted_embedding(f: &LogConcaveFn, spec: &QuadratureSpec, position_tol: f64) -> Result<LiftedEmbedding> {
    crate::lyz::check_positivity(f)?;
    let n = f.dim();
    let mu = surface_measure(f, spec)?.measure;
    let dual = f.legendre()?;
    let star: Vec<f64> = (0..mu.len()).map(|i| dual.potential(&mu.point_vec(i))).collect();

    let delta_j = pairwise_sum(&(0..mu.len()).map(|i| mu.weight(i) * star[i]).collect::<Vec<_>>());
    let mass = mu.total_mass();
    let second = mu.second_moment();
    let rms = (second.trace() / mass).sqrt();
    let offset = mu.barycenter().norm() / rms;

    let mut m = DMatrix::zeros(n, n);
    let mut points = Vec::with_capacity(mu.len());
    let mut weights = Vec::with_capacity(mu.len());
    let mut atoms = Vec::with_capacity(mu.len());
    let mut atom_weights = Vec::with_capacity(mu.len());
    let nu_scale = (n * n) as f64 / (4.0 * delta_j);
    for i in 0..mu.len() {
        let y = mu.point_vec(i);
        if y.iter().all(|c| *c == 0.0) || mu.weight(i) == 0.0 {
            continue;
        }
        let s = star[i];
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::PositivityViolation { value: s, radius: y.norm() });
        }
        let nu = nu_scale * mu.weight(i) / s;
        m += &y * y.transpose() * (nu / 2.0);
        let mut h = DVector::zeros(n + 1);
        h.rows_mut(0, n).copy_from(&y);
        h[n] = 2.0 / n as f64 * s;
        let h2 = h.norm_squared();
        points.extend(y.iter().copied());
        weights.push(h2 * nu);
        atoms.push(h / h2.sqrt());
        atom_weights.push(h2 * nu);
    }
    let position_residual = max_abs(&(&m * 2.0 - DMatrix::identity(n, n)));
    if position_residual > position_tol {
        return Err(Error::NotIsotropicPosition {
            residual: position_residual,
        });
    }
    if offset > 1e-3 {
        return Err(Error::BarycenterOffOrigin { offset });
    }
    Ok(LiftedEmbedding {
        sphere: SphericalMeasure::new(atoms, atom_weights)?,
        measure: DiscreteMeasure::new(n, points, weights)?,
        delta_j,
        position_residual,
        barycenter_offset: offset,
    })
}

/// ln erfc(t), with an asymptotic series once erfc underflows.
fn ln_erfc(t: f64) -> f64 {
    if t < 0.0 {
        erf(-t).ln_1p()
    } else if t <= 25.0 {
        erfc(t).ln()
    } else {
        let t2 = t * t;
        let series = 1.0 - 0.5 / t2 + 0.75 / (t2 * t2) - 1.875 / (t2 * t2 * t2);
        -t2 - (t * std::f64::consts::PI.sqrt()).ln() + series.ln()
    }
}

/// τ(t) with ∫₀^{τ(t)} e^{−l} dl = (1/√π) ∫_{−∞}^t e^{−l²} dl, i.e.
/// τ(t) = −log(erfc(t)/2).
pub fn tau(t: f64) -> f64 {
    std::f64::consts::LN_2 - ln_erfc(t)
}

/// log τ'(t), where τ'(t) = 2e^{−t²}/(√π erfc(t)).
pub fn log_tau_prime(t: f64) -> f64 {
    (2.0 / std::f64::consts::PI.sqrt()).ln() - t * t - ln_erfc(t)
}

pub fn tau_prime(t: f64) -> f64 {
    log_tau_prime(t).exp()
}
