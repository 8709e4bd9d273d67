use nalgebra::DVector;
use rand::Rng;


use super::Polytope;
use crate::error::{Error, Result};
use crate::numeric::{derive_seed, random_unit_vector, rng};

const MAX_ATTEMPTS: usize = 32;

/// Hull of `vertex_count` i.i.d. points on the shell 0.7 ≤ |x| ≤ 1, recentred
/// so that its centroid is the origin. Deterministic per seed.
pub fn random_body(seed: u64, n: usize, vertex_count: usize) -> Result<Polytope> {
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension { n });
    }
    if vertex_count < n + 1 {
        return Err(Error::InvalidInput(format!(
            "need at least {} vertices in dimension {n}",
            n + 1
        )));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut r = rng(derive_seed(seed, attempt as u64));
        let pts: Vec<DVector<f64>> = (0..vertex_count)
            .map(|_| random_unit_vector(&mut r, n) * r.gen_range(0.7..=1.0))
            .collect();
        let Ok(body) = Polytope::new(pts.clone()).or_else(|_| hull_without_origin_check(pts)) else {
            continue;
        };
        let shift = -body.centroid();
        if let Ok(centred) = body.translate(&shift) {
            return Ok(centred);
        }
    }
    Err(Error::DegenerateSample {
        attempts: MAX_ATTEMPTS,
    })
}

/// Random origin-symmetric body: hull of ±p for `pair_count` random points p.
pub fn random_symmetric_body(seed: u64, n: usize, pair_count: usize) -> Result<Polytope> {
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension { n });
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut r = rng(derive_seed(seed ^ 0x5EED_5A11, attempt as u64));
        let mut pts = Vec::with_capacity(2 * pair_count);
        for _ in 0..pair_count.max(n) {
            let p = random_unit_vector(&mut r, n) * r.gen_range(0.7..=1.0);
            pts.push(-&p);
            pts.push(p);
        }
        if let Ok(body) = Polytope::new(pts) {
            return Ok(body);
        }
    }
    Err(Error::DegenerateSample {
        attempts: MAX_ATTEMPTS,
    })
}

/// The raw sample may miss the origin; shift it by the vertex mean first so
/// the hull can be built, the caller then recentres at the true centroid.
fn hull_without_origin_check(pts: Vec<DVector<f64>>) -> Result<Polytope> {
    let n = pts[0].len();
    let mean = pts.iter().fold(DVector::zeros(n), |a, p| a + p) / pts.len() as f64;
    Polytope::new(pts.into_iter().map(|p| p - &mean).collect())
}
