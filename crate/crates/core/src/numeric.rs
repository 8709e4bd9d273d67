//! Small numeric helpers shared across modules: special constants, symmetric
//! eigen-solves, deterministic reductions and seed derivation.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Volume of the Euclidean unit ball in R^n, ω_n = π^{n/2}/Γ(n/2+1), via
/// the recurrence ω_n = (2π/n) ω_{n−2}.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Γ(k/2) for a positive integer k, by Γ(x+1) = xΓ(x) from Γ(1/2) and Γ(1).
pub fn gamma_half(k: usize) -> f64 {
    assert!(k > 0, "Γ(0) is undefined");
    match k {
        1 => std::f64::consts::PI.sqrt(),
        2 => 1.0,
        _ => (k as f64 / 2.0 - 1.0) * gamma_half(k - 2),
    }
}

/// Γ(x) for positive arguments.
pub fn gamma_fn(x: f64) -> f64 {
    gamma(x)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 step; used to derive independent per-instance seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn random_unit_vector<R: rand::Rng>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v: DVector<f64> = DVector::from_fn(n, |_, _| StandardNormal.sample(rng));
        let norm = v.norm();
        if norm > 1e-8 {
            return v / norm;
        }
    }
}

/// `count` pseudo-random directions on S^{n-1}, fixed by `seed`.
pub fn sphere_directions(n: usize, count: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut r = rng(seed);
    if n == 1 {
        return vec![DVector::from_element(1, 1.0), DVector::from_element(1, -1.0)];
    }
    (0..count).map(|_| random_unit_vector(&mut r, n)).collect()
}

/// Random matrix with |det| in `[lo, hi]`, drawn by rescaling a Gaussian matrix.
pub fn random_gl<R: rand::Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> DMatrix<f64> {

    loop {
        let m: DMatrix<f64> = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
        let det = m.determinant().abs();
        // keep conditioning reasonable so covariance checks are not swamped by rounding
        let sv = m.clone().singular_values();
        let cond = sv.max() / sv.min();
        if det < 1e-6 || cond > 50.0 {
            continue;
        }
        let target = (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp();
        let scale = (target / det).powf(1.0 / n as f64);
        return m * scale;
    }
}

pub fn symmetric_eigen(a: &DMatrix<f64>) -> SymmetricEigen<f64, nalgebra::Dyn> {
    SymmetricEigen::new(a.clone())
}

/// `a^p` for a symmetric positive-definite `a`.
pub fn spd_power(a: &DMatrix<f64>, p: f64) -> Result<DMatrix<f64>> {
    let eig = symmetric_eigen(a);
    let trace: f64 = eig.eigenvalues.iter().sum();
    let min = eig.eigenvalues.min();
    if !(min > 1e-12 * trace.abs()) || !min.is_finite() {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.powf(p)));
    let q = &eig.eigenvectors;
    let out = q * d * q.transpose();
    Ok(symmetrize(&out))
}

pub fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

pub fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Max-entry relative difference `‖a − b‖_max / ‖b‖_max`.
pub fn rel_matrix_error(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    max_abs(&(a - b)) / max_abs(b).max(f64::MIN_POSITIVE)
}

/// Pairwise (tree) summation; the order depends only on the slice length.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Fixed block length for parallel reductions. Results never depend on the
/// number of worker threads because block boundaries are fixed.
pub(crate) const BLOCK: usize = 4096;

/// Deterministic parallel reduction of `width` accumulators over `0..count`.
///
/// `body(i, acc)` adds item `i`'s contribution into `acc`. Items are grouped
/// into fixed blocks; block partials are combined by pairwise summation.
pub(crate) fn parallel_accumulate<F>(count: usize, width: usize, body: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let blocks = count.div_ceil(BLOCK);
    let partials: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![0.0; width];
            let lo = b * BLOCK;
            let hi = ((b + 1) * BLOCK).min(count);
            for i in lo..hi {
                body(i, &mut acc);
            }
            acc
        })
        .collect();
    (0..width)
        .map(|k| {
            let column: Vec<f64> = partials.iter().map(|p| p[k]).collect();
            pairwise_sum(&column)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
        for n in 1..=8 {
            let via_gamma = std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_half(n + 2);
            assert!((unit_ball_volume(n) - via_gamma).abs() < 1e-13 * via_gamma);
        }
        assert!((gamma_half(5) - 0.75 * std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn spd_power_inverts_square_root() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let r = spd_power(&a, -0.5).unwrap();
        let back = &r * &a * &r;
        assert!(rel_matrix_error(&back, &DMatrix::identity(2, 2)) < 1e-13);
    }

    #[test]
    fn accumulate_matches_serial_sum() {
        let total = parallel_accumulate(10_000, 2, |i, acc| {
            acc[0] += i as f64;
            acc[1] += 1.0;
        });
        assert_eq!(total[0], 49_995_000.0);
        assert_eq!(total[1], 10_000.0);
    }

    #[test]
    fn random_gl_determinant_in_range() {
        let mut r = rng(3);
        for _ in 0..20 {
            let t = random_gl(&mut r, 3, 0.1, 10.0);
            let d = t.determinant().abs();
            assert!((0.1 - 1e-9..=10.0 + 1e-9).contains(&d), "{d}");
        }
    }
}
