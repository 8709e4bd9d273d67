//! Ellipsoids E = {x : x·Ax ≤ 1} as positive-definite quadratic forms, and the
//! LYZ ellipsoid Γ₋₂K of a polytope.

use nalgebra::{DMatrix, DVector};

use crate::bodies::Polytope;
use crate::error::{Error, Result};
use crate::numeric::{spd_power, symmetric_eigen, symmetrize, unit_ball_volume};

/// Symmetric positive-definite matrix A; ‖x‖²_E = x·Ax.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm {
    matrix: DMatrix<f64>,
}

impl QuadraticForm {
    /// Validates symmetry (to 1e−12 relative) and positive definiteness
    /// (eigenvalues above 1e−12·trace).
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::InvalidInput("quadratic form needs a square matrix".into()));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        let scale = crate::numeric::max_abs(&matrix).max(f64::MIN_POSITIVE);
        let asymmetry = crate::numeric::max_abs(&(&matrix - matrix.transpose()));
        if asymmetry > 1e-12 * scale {
            return Err(Error::NotSymmetric { asymmetry });
        }
        let matrix = symmetrize(&matrix);
        let eig = symmetric_eigen(&matrix);
        let trace: f64 = eig.eigenvalues.iter().sum();
        let min = eig.eigenvalues.min();
        if !(min > 1e-12 * trace) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
        Ok(QuadraticForm { matrix })
    }

    pub fn identity(n: usize) -> Self {
        QuadraticForm {
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn scaled_identity(n: usize, c: f64) -> Result<Self> {
        Self::new(DMatrix::identity(n, n) * c)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| self.matrix.row(i).iter().copied().collect())
            .collect()
    }

    /// √(x·Ax).
    pub fn norm(&self, x: &DVector<f64>) -> f64 {
        self.quad(x).sqrt()
    }

    /// x·Ax.
    pub fn quad(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(&self.matrix * x)).max(0.0)
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        symmetric_eigen(&self.matrix).eigenvalues.min()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        symmetric_eigen(&self.matrix).eigenvalues.max()
    }

    /// ω_n det(A)^{−1/2}.
    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) / self.determinant().sqrt()
    }

    pub fn inverse(&self) -> QuadraticForm {
        QuadraticForm {
            matrix: spd_power(&self.matrix, -1.0).expect("form is positive definite"),
        }
    }

    /// The form of T·E, namely T^{−t} A T^{−1}.
    pub fn push_forward(&self, t: &DMatrix<f64>) -> Result<QuadraticForm> {
        let inv = t.clone().try_inverse().ok_or(Error::SingularMap)?;
        QuadraticForm::new(symmetrize(&(inv.transpose() * &self.matrix * inv)))
    }

    /// The form of x ↦ A(Tx), namely T^t A T.
    pub fn pull_back(&self, t: &DMatrix<f64>) -> Result<QuadraticForm> {
        QuadraticForm::new(symmetrize(&(t.transpose() * &self.matrix * t)))
    }

    pub fn scale(&self, c: f64) -> Result<QuadraticForm> {
        QuadraticForm::new(&self.matrix * c)
    }

    /// Symmetric T = A^{−1/2}/√2, the canonical solution of T^t A T = I/2.
    pub fn whitening_map(&self) -> Result<DMatrix<f64>> {
        Ok(spd_power(&self.matrix, -0.5)? / std::f64::consts::SQRT_2)
    }
}

/// ρ_{Γ₋₂K}(u)^{−2} = (1/|K|) Σ_i (a_i/h_i)(u·n_i)²: the form
/// A = (1/|K|) Σ_i (a_i/h_i) n_i⊗n_i.
pub fn lyz_body(body: &Polytope) -> Result<QuadraticForm> {
    let n = body.dim();
    let volume = body.volume();
    let mut a = DMatrix::zeros(n, n);
    for f in body.facets() {
        if f.support <= 0.0 {
            return Err(Error::OriginNotInterior {
                min_support: f.support,
            });
        }
        a += &f.normal * f.normal.transpose() * (f.area / f.support);
    }
    QuadraticForm::new(symmetrize(&(a / volume)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{random_gl, rel_matrix_error, rng};

    fn diag(d: &[f64]) -> QuadraticForm {
        QuadraticForm::new(DMatrix::from_diagonal(&DVector::from_row_slice(d))).unwrap()
    }

    #[test]
    fn norm_examples() {
        let e = QuadraticForm::identity(3);
        assert_eq!(e.norm(&DVector::from_row_slice(&[0.6, 0.8, 0.0])), 1.0);
        let half = QuadraticForm::scaled_identity(2, 0.5).unwrap();
        assert!((half.norm(&DVector::from_row_slice(&[1.0, 0.0])) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((diag(&[4.0, 1.0]).norm(&DVector::from_row_slice(&[1.0, 1.0])) - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn volume_examples() {
        let pi = std::f64::consts::PI;
        assert!((QuadraticForm::identity(2).volume() - pi).abs() < 1e-14);
        assert!((QuadraticForm::scaled_identity(2, 0.25).unwrap().volume() - 4.0 * pi).abs() < 1e-13);
        assert!((diag(&[1.0, 4.0]).volume() - pi / 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_indefinite_and_asymmetric() {
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(QuadraticForm::new(bad), Err(Error::NotPositiveDefinite { .. })));
        let skew = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(QuadraticForm::new(skew), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn lyz_of_square_is_identity() {
        let a = lyz_body(&Polytope::cube(2).unwrap()).unwrap();
        assert!(rel_matrix_error(a.matrix(), &DMatrix::identity(2, 2)) < 1e-15);
    }

    #[test]
    fn lyz_of_fine_polygon_tends_to_identity() {
        let mut last = f64::INFINITY;
        for m in [8, 32, 128, 512] {
            let p = Polytope::regular_polygon(m, 1.0, 0.0).unwrap();
            let err = rel_matrix_error(lyz_body(&p).unwrap().matrix(), &DMatrix::identity(2, 2));
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn lyz_is_gl_covariant() {
        let mut r = rng(9);
        let body = crate::bodies::random_body(5, 3, 9).unwrap();
        let a = lyz_body(&body).unwrap();
        for _ in 0..20 {
            let t = random_gl(&mut r, 3, 0.1, 10.0);
            let moved = lyz_body(&body.transform(&t).unwrap()).unwrap();
            let expected = a.push_forward(&t).unwrap();
            assert!(rel_matrix_error(moved.matrix(), expected.matrix()) < 1e-9);
        }
    }

    #[test]
    fn whitening_examples() {
        let t = QuadraticForm::scaled_identity(2, 0.5).unwrap().whitening_map().unwrap();
        assert!(rel_matrix_error(&t, &DMatrix::identity(2, 2)) < 1e-15);
        let t = QuadraticForm::scaled_identity(3, 2.0).unwrap().whitening_map().unwrap();
        assert!(rel_matrix_error(&t, &(DMatrix::identity(3, 3) * 0.5)) < 1e-15);
        let mut r = rng(1);
        let g = random_gl(&mut r, 3, 0.5, 2.0);
        let a = QuadraticForm::new(symmetrize(&(&g * g.transpose()))).unwrap();
        let t = a.whitening_map().unwrap();
        let check = t.transpose() * a.matrix() * &t;
        assert!(rel_matrix_error(&check, &(DMatrix::identity(3, 3) * 0.5)) < 1e-12);
    }
}
