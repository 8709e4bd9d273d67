//! Convex polytopes in R^n for n ≤ 3, given by their vertices.
//!
//! The vertex list is canonical; facet data (outer unit normal, facet area,
//! support value) is derived once at construction by a low-dimensional hull
//! and cached. Every [`Polytope`] is full-dimensional and contains the origin
//! in its interior, so support, gauge and radial functions are always defined.

mod hull;
mod random;

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub use hull::EPS_HULL;
pub use random::{random_body, random_symmetric_body};

/// One facet of a polytope.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    /// Outer unit normal.
    pub normal: DVector<f64>,
    /// (n−1)-dimensional measure of the facet.
    pub area: f64,
    /// Support value h_K(normal), the distance of the facet plane from the origin.
    pub support: f64,
    /// Indices into [`Polytope::vertices`], counterclockwise seen from outside.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<DVector<f64>>,
    facets: Vec<Facet>,
}

fn angle_of(v: &DVector<f64>) -> f64 {
    let a = v[1].atan2(v[0]);
    if a < 0.0 {
        a + 2.0 * std::f64::consts::PI
    } else {
        a
    }
}

fn lexicographic(a: &DVector<f64>, b: &DVector<f64>) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.partial_cmp(y).unwrap_or(Ordering::Equal) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

impl Polytope {
    /// Convex hull of `points`. Interior points are discarded.
    pub fn new(points: Vec<DVector<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("polytope needs at least one vertex".into()));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        if points.iter().any(|p| p.iter().any(|c| !c.is_finite())) {
            return Err(Error::InvalidInput("vertex coordinates must be finite".into()));
        }
        if dim > 3 {
            return Err(Error::UnsupportedDimension { n: dim });
        }
        let found = hull::affine_dimension(&points);
        if found < dim {
            return Err(Error::NotFullDimensional {
                expected: dim,
                found,
            });
        }
        let body = match dim {
            1 => Self::build_1d(&points),
            2 => Self::build_2d(&points),
            _ => Self::build_3d(&points)?,
        };
        let scale = hull::scale_of(&body.vertices);
        let min_support = body
            .facets
            .iter()
            .map(|f| f.support)
            .fold(f64::INFINITY, f64::min);
        if !(min_support > EPS_HULL * scale) {
            return Err(Error::OriginNotInterior { min_support });
        }
        Ok(body)
    }

    /// Convenience constructor from coordinate rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| DVector::from_row_slice(r)).collect())
    }

    fn build_1d(points: &[DVector<f64>]) -> Self {
        let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        let vertices = vec![DVector::from_element(1, lo), DVector::from_element(1, hi)];
        let facets = vec![
            Facet {
                normal: DVector::from_element(1, -1.0),
                area: 1.0,
                support: -lo,
                vertices: vec![0],
            },
            Facet {
                normal: DVector::from_element(1, 1.0),
                area: 1.0,
                support: hi,
                vertices: vec![1],
            },
        ];
        Polytope {
            dim: 1,
            vertices,
            facets,
        }
    }

    fn build_2d(points: &[DVector<f64>]) -> Self {
        let flat: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
        let order = hull::hull_2d(&flat, hull::scale_of(points));
        let mut vertices: Vec<DVector<f64>> = order.iter().map(|&i| points[i].clone()).collect();
        // counterclockwise by angle about the origin; ties by radius
        vertices.sort_by(|a, b| {
            angle_of(a)
                .partial_cmp(&angle_of(b))
                .unwrap_or(Ordering::Equal)
                .then(a.norm().partial_cmp(&b.norm()).unwrap_or(Ordering::Equal))
        });
        let m = vertices.len();
        let facets = (0..m)
            .map(|k| {
                let a = &vertices[k];
                let b = &vertices[(k + 1) % m];
                let edge = b - a;
                let len = edge.norm();
                let normal = DVector::from_vec(vec![edge[1] / len, -edge[0] / len]);
                let support = normal.dot(a);
                Facet {
                    normal,
                    area: len,
                    support,
                    vertices: vec![k, (k + 1) % m],
                }
            })
            .collect();
        Polytope {
            dim: 2,
            vertices,
            facets,
        }
    }

    fn build_3d(points: &[DVector<f64>]) -> Result<Self> {
        let raw = hull::hull_3d(points);
        if raw.is_empty() {
            return Err(Error::DegenerateFacet);
        }
        let mut used: Vec<usize> = raw.iter().flat_map(|f| f.vertices.iter().copied()).collect();
        used.sort_unstable();
        used.dedup();
        used.sort_by(|&a, &b| lexicographic(&points[a], &points[b]));
        let mut remap = vec![usize::MAX; points.len()];
        for (new, &old) in used.iter().enumerate() {
            remap[old] = new;
        }
        let vertices: Vec<DVector<f64>> = used.iter().map(|&i| points[i].clone()).collect();
        let mut facets: Vec<Facet> = raw
            .into_iter()
            .map(|f| Facet {
                support: f.offset,
                area: f.area,
                vertices: f.vertices.iter().map(|&v| remap[v]).collect(),
                normal: f.normal,
            })
            .collect();
        facets.sort_by(|a, b| lexicographic(&a.normal, &b.normal));
        Ok(Polytope {
            dim: 3,
            vertices,
            facets,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Vertex coordinates as plain rows.
    pub fn vertex_rows(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|v| v.iter().copied().collect()).collect()
    }

    /// h_K(x) = max over vertices of x·v.
    pub fn support(&self, x: &DVector<f64>) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Gauge ‖x‖_K = max_i n_i·x / h_i; zero at the origin.
    pub fn minkowski_norm(&self, x: &DVector<f64>) -> f64 {
        self.facets
            .iter()
            .map(|f| f.normal.dot(x) / f.support)
            .fold(0.0, f64::max)
    }

    /// Index of the facet whose cone contains `x`, together with the
    /// runner-up gap. Used by gradient code to detect ridges.
    pub(crate) fn active_facets(&self, x: &DVector<f64>, rel_tol: f64) -> (f64, Vec<usize>) {
        let values: Vec<f64> = self
            .facets
            .iter()
            .map(|f| f.normal.dot(x) / f.support)
            .collect();
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tol = rel_tol * best.abs().max(f64::MIN_POSITIVE);
        let active = values
            .iter()
            .enumerate()
            .filter(|(_, v)| best - **v <= tol)
            .map(|(i, _)| i)
            .collect();
        (best, active)
    }

    /// ρ_K(x) = max{λ ≥ 0 : λx ∈ K}.
    pub fn radial(&self, x: &DVector<f64>) -> Result<f64> {
        if x.iter().all(|c| *c == 0.0) {
            return Err(Error::ZeroDirection);
        }
        Ok(1.0 / self.minkowski_norm(x))
    }

    /// K° = {x : x·y ≤ 1 for all y ∈ K}; its vertices are n_i / h_i.
    pub fn polar(&self) -> Result<Polytope> {
        let pts = self
            .facets
            .iter()
            .map(|f| {
                if f.support <= 0.0 {
                    Err(Error::OriginNotInterior {
                        min_support: f.support,
                    })
                } else {
                    Ok(&f.normal / f.support)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Polytope::new(pts)
    }

    /// Volume by the facet-pyramid formula (1/n) Σ a_i h_i.
    pub fn volume(&self) -> f64 {
        self.facets.iter().map(|f| f.area * f.support).sum::<f64>() / self.dim as f64
    }

    fn interior_point(&self) -> DVector<f64> {
        self.vertices
            .iter()
            .fold(DVector::zeros(self.dim), |acc, v| acc + v)
            / self.vertices.len() as f64
    }

    /// Simplices (volume, centroid) of a decomposition from an interior point.
    fn simplices(&self) -> Vec<(f64, DVector<f64>)> {
        let c = self.interior_point();
        match self.dim {
            1 => {
                let a = &self.vertices[0];
                let b = &self.vertices[1];
                vec![((b[0] - a[0]).abs(), (a + b) / 2.0)]
            }
            2 => {
                let m = self.vertices.len();
                (0..m)
                    .map(|k| {
                        let a = &self.vertices[k];
                        let b = &self.vertices[(k + 1) % m];
                        let da = a - &c;
                        let db = b - &c;
                        let vol = 0.5 * (da[0] * db[1] - da[1] * db[0]).abs();
                        (vol, (&c + a + b) / 3.0)
                    })
                    .collect()
            }
            _ => {
                let mut out = Vec::new();
                for f in &self.facets {
                    let p0 = &self.vertices[f.vertices[0]];
                    for w in f.vertices[1..].windows(2) {
                        let p1 = &self.vertices[w[0]];
                        let p2 = &self.vertices[w[1]];
                        let m = DMatrix::from_columns(&[p0 - &c, p1 - &c, p2 - &c]);
                        let vol = m.determinant().abs() / 6.0;
                        out.push((vol, (&c + p0 + p1 + p2) / 4.0));
                    }
                }
                out
            }
        }
    }

    /// Volume by simplicial decomposition from an interior point; an
    /// independent route to [`Polytope::volume`].
    pub fn volume_simplicial(&self) -> f64 {
        self.simplices().iter().map(|(v, _)| v).sum()
    }

    /// Volume-weighted centroid.
    pub fn centroid(&self) -> DVector<f64> {
        let parts = self.simplices();
        let total: f64 = parts.iter().map(|(v, _)| v).sum();
        parts
            .iter()
            .fold(DVector::zeros(self.dim), |acc, (v, c)| acc + c * *v)
            / total
    }

    /// Σ a_i n_i, which vanishes for a closed boundary.
    pub fn minkowski_residual(&self) -> DVector<f64> {
        self.facets
            .iter()
            .fold(DVector::zeros(self.dim), |acc, f| acc + &f.normal * f.area)
    }

    /// Image T·K.
    pub fn transform(&self, t: &DMatrix<f64>) -> Result<Polytope> {
        if t.nrows() != self.dim || t.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: t.nrows(),
            });
        }
        Polytope::new(self.vertices.iter().map(|v| t * v).collect())
    }

    pub fn translate(&self, shift: &DVector<f64>) -> Result<Polytope> {
        Polytope::new(self.vertices.iter().map(|v| v + shift).collect())
    }

    /// Ok when the vertex set is closed under negation to `tol` (relative).
    pub fn check_symmetric(&self, tol: f64) -> Result<()> {
        let scale = hull::scale_of(&self.vertices);
        for (i, v) in self.vertices.iter().enumerate() {
            let has_antipode = self
                .vertices
                .iter()
                .any(|w| (w + v).norm() <= tol * scale);
            if !has_antipode {
                return Err(Error::NotOriginSymmetric { index: i });
            }
        }
        Ok(())
    }

    /// Largest vertex norm.
    pub fn circumradius(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Smallest facet support value: the inradius about the origin.
    pub fn inradius(&self) -> f64 {
        self.facets
            .iter()
            .map(|f| f.support)
            .fold(f64::INFINITY, f64::min)
    }

    /// [−1, 1]^n.
    pub fn cube(n: usize) -> Result<Polytope> {
        let pts = (0..(1usize << n))
            .map(|mask| {
                DVector::from_fn(n, |i, _| if mask >> i & 1 == 1 { 1.0 } else { -1.0 })
            })
            .collect();
        Polytope::new(pts)
    }

    /// conv{±e_i}.
    pub fn cross_polytope(n: usize) -> Result<Polytope> {
        let mut pts = Vec::new();
        for i in 0..n {
            for s in [1.0, -1.0] {
                let mut v = DVector::zeros(n);
                v[i] = s;
                pts.push(v);
            }
        }
        Polytope::new(pts)
    }

    /// Regular simplex with centroid at the origin and unit circumradius.
    pub fn regular_simplex(n: usize) -> Result<Polytope> {
        // e_1..e_{n+1} centred, expressed in an orthonormal basis of their span
        let m = n + 1;
        let centred = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                1.0 - 1.0 / m as f64
            } else {
                -1.0 / m as f64
            }
        });
        let eig = crate::numeric::symmetric_eigen(&centred);
        let mut basis: Vec<usize> = (0..m).filter(|&k| eig.eigenvalues[k] > 0.5).collect();
        basis.sort_unstable();
        let pts: Vec<DVector<f64>> = (0..m)
            .map(|j| {
                let col = centred.column(j);
                let v = DVector::from_iterator(n, basis.iter().map(|&k| eig.eigenvectors.column(k).dot(&col)));
                let norm = v.norm();
                v / norm
            })
            .collect();
        Polytope::new(pts)
    }

    /// Regular m-gon with the given circumradius; the first vertex sits at angle `phase`.
    pub fn regular_polygon(m: usize, circumradius: f64, phase: f64) -> Result<Polytope> {
        let pts = (0..m)
            .map(|k| {
                let a = phase + 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                DVector::from_vec(vec![circumradius * a.cos(), circumradius * a.sin()])
            })
            .collect();
        Polytope::new(pts)
    }
}
