//! Convex hulls for n ≤ 3.
//!
//! Sizes here are small (tens to a few hundred points), so the 3-D hull is a
//! plane-enumeration hull: every supporting plane through three points is
//! found, coplanar points are merged into one polygonal facet, and the facet
//! polygon is ordered by a planar hull. This keeps coplanar inputs such as
//! cubes exact instead of triangulating them.

use nalgebra::DVector;

/// Relative tolerance for coplanarity and degeneracy tests.
pub const EPS_HULL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub(crate) struct RawFacet {
    pub normal: DVector<f64>,
    pub offset: f64,
    /// Indices into the input point list, counterclockwise seen from outside.
    pub vertices: Vec<usize>,
    pub area: f64,
}

pub(crate) fn scale_of(points: &[DVector<f64>]) -> f64 {
    let n = points[0].len();
    let mean = points.iter().fold(DVector::zeros(n), |acc, p| acc + p) / points.len() as f64;
    points
        .iter()
        .map(|p| (p - &mean).norm())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE)
}

/// Dimension of the affine hull, by SVD of the centred point cloud.
pub(crate) fn affine_dimension(points: &[DVector<f64>]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let n = points[0].len();
    let scale = scale_of(points);
    let m = nalgebra::DMatrix::from_fn(points.len() - 1, n, |i, j| points[i + 1][j] - points[0][j]);
    let sv = m.singular_values();
    sv.iter().filter(|s| **s > EPS_HULL * scale).count()
}

fn cross2(o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain. Returns indices of the strict hull vertices in
/// counterclockwise order; collinear boundary points are dropped.
pub(crate) fn hull_2d(points: &[[f64; 2]], scale: f64) -> Vec<usize> {
    let eps = EPS_HULL * scale;
    let area_eps = eps * scale;
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a][0]
            .partial_cmp(&points[b][0])
            .unwrap()
            .then(points[a][1].partial_cmp(&points[b][1]).unwrap())
    });
    idx.dedup_by(|a, b| {
        (points[*a][0] - points[*b][0]).abs() <= eps && (points[*a][1] - points[*b][1]).abs() <= eps
    });
    if idx.len() < 3 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && cross2(&points[lower[lower.len() - 2]], &points[lower[lower.len() - 1]], &points[i]) <= area_eps
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && cross2(&points[upper[upper.len() - 2]], &points[upper[upper.len() - 1]], &points[i]) <= area_eps
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub(crate) fn polygon_area(points: &[[f64; 2]], order: &[usize]) -> f64 {
    let mut s = 0.0;
    for k in 0..order.len() {
        let a = points[order[k]];
        let b = points[order[(k + 1) % order.len()]];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

fn cross3(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    DVector::from_vec(vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

fn plane_basis(normal: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    let helper = if normal[0].abs() < 0.9 {
        DVector::from_vec(vec![1.0, 0.0, 0.0])
    } else {
        DVector::from_vec(vec![0.0, 1.0, 0.0])
    };
    let e1 = cross3(normal, &helper).normalize();
    let e2 = cross3(normal, &e1);
    (e1, e2)
}

/// Facets of a full-dimensional point cloud in R^3.
pub(crate) fn hull_3d(points: &[DVector<f64>]) -> Vec<RawFacet> {
    let scale = scale_of(points);
    let eps = EPS_HULL * scale;
    let m = points.len();
    let mut facets: Vec<RawFacet> = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                let known = facets.iter().any(|f| {
                    [i, j, k]
                        .iter()
                        .all(|&q| (f.normal.dot(&points[q]) - f.offset).abs() <= eps)
                });
                if known {
                    continue;
                }
                let raw = cross3(&(&points[j] - &points[i]), &(&points[k] - &points[i]));
                let len = raw.norm();
                if len <= eps * scale {
                    continue;
                }
                let mut normal = raw / len;
                let mut offset = normal.dot(&points[i]);
                let mut above = false;
                let mut below = false;
                for p in points {
                    let s = normal.dot(p) - offset;
                    if s > eps {
                        above = true;
                    } else if s < -eps {
                        below = true;
                    }
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                if above {
                    normal = -normal;
                    offset = -offset;
                }
                let on_plane: Vec<usize> = (0..m)
                    .filter(|&q| (normal.dot(&points[q]) - offset).abs() <= eps)
                    .collect();
                let (e1, e2) = plane_basis(&normal);
                let projected: Vec<[f64; 2]> = on_plane
                    .iter()
                    .map(|&q| [e1.dot(&points[q]), e2.dot(&points[q])])
                    .collect();
                let order = hull_2d(&projected, scale);
                if order.len() < 3 {
                    continue;
                }
                let area = polygon_area(&projected, &order);
                let vertices: Vec<usize> = order.iter().map(|&o| on_plane[o]).collect();
                facets.push(RawFacet {
                    normal,
                    offset,
                    vertices,
                    area,
                });
            }
        }
    }
    let min_area = EPS_HULL * scale * scale;
    let before = facets.len();
    facets.retain(|f| f.area > min_area);
    if facets.len() < before {
        log::warn!("dropped {} degenerate facet(s)", before - facets.len());
    }
    facets
}
