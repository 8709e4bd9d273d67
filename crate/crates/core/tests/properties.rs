use approx::assert_relative_eq;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use lyzlab::bodies::{random_body, random_symmetric_body};
use lyzlab::ellipsoids::lyz_body;
use lyzlab::io::{body_json, read_body};
use lyzlab::isotropic::{ball_barthe, random_isotropic_measure};
use lyzlab::logconcave::{asplund_sum, Backend, LogConcaveFn, QuadratureSpec};
use lyzlab::lyz::gamma2_fn;
use lyzlab::numeric::{random_gl, rng};
use lyzlab::verify::{level_set_volume, lyz_polar_check, mahler_check};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

fn point(n: usize, coords: &[f64]) -> DVector<f64> {
    DVector::from_row_slice(&coords[..n])
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn polar_is_an_involution(seed in 0u64..10_000, n in 2usize..=3, extra in 0usize..6) {
        let k = random_body(seed, n, n + 1 + extra).unwrap();
        let kk = k.polar().unwrap().polar().unwrap();
        assert_relative_eq!(kk.volume(), k.volume(), max_relative = 1e-9);
    }

    #[test]
    fn lyz_polar_ratio_at_least_one(seed in 0u64..10_000, n in 2usize..=3, extra in 0usize..8) {
        let r = lyz_polar_check(&random_body(seed, n, n + 1 + extra).unwrap()).unwrap();
        prop_assert!(r.pass && r.ratio >= 1.0 - 1e-9, "{r:?}");
    }

    #[test]
    fn lyz_polar_ratio_is_gl_invariant(seed in 0u64..10_000, n in 2usize..=3) {
        let k = random_body(seed, n, n + 3).unwrap();
        let t = random_gl(&mut rng(seed), n, 0.1, 10.0);
        let a = lyz_polar_check(&k).unwrap().ratio;
        let b = lyz_polar_check(&k.transform(&t).unwrap()).unwrap().ratio;
        assert_relative_eq!(a, b, max_relative = 1e-9);
    }

    #[test]
    fn lyz_body_is_gl_covariant(seed in 0u64..10_000, n in 2usize..=3) {
        let k = random_body(seed, n, n + 2).unwrap();
        let t = random_gl(&mut rng(seed ^ 1), n, 0.1, 10.0);
        let a = lyz_body(&k).unwrap();
        let b = lyz_body(&k.transform(&t).unwrap()).unwrap();
        let t_inv = t.clone().try_inverse().unwrap();
        let want = t_inv.transpose() * a.matrix() * &t_inv;
        let err = (b.matrix() - &want).amax() / want.amax();
        prop_assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn mahler_product_at_least_four_squared_over_two(seed in 0u64..10_000, pairs in 2usize..8) {
        let r = mahler_check(&random_symmetric_body(seed, 2, pairs).unwrap()).unwrap();
        prop_assert!(r.ratio >= 1.0 - 1e-9, "{r:?}");
    }

    #[test]
    fn fenchel_young(seed in 0u64..10_000, c0 in 0.2f64..3.0, xs in prop::array::uniform3(-3.0f64..3.0), ys in prop::array::uniform3(-3.0f64..3.0)) {
        let n = 2 + (seed % 2) as usize;
        let k = random_body(seed, n, n + 3).unwrap();
        let (x, y) = (point(n, &xs), point(n, &ys));
        for f in [
            LogConcaveFn::cone(k.clone(), c0).unwrap(),
            LogConcaveFn::quad_minkowski(k.clone(), c0).unwrap(),
            LogConcaveFn::gaussian(n, c0).unwrap(),
        ] {
            let dual = f.legendre().unwrap();
            let gap = f.potential(&x) + dual.potential(&y) - x.dot(&y);
            prop_assert!(gap >= -1e-9, "{} gap {gap}", f.family());
        }
    }

    #[test]
    fn ball_barthe_at_least_one(seed in 0u64..10_000, d in 2usize..=6, extra in 0usize..6, symmetric: bool) {
        let mu = random_isotropic_measure(seed, d, d + extra, symmetric).unwrap();
        let mut r = rng(seed);
        let l: Vec<f64> = (0..mu.len()).map(|_| rand::Rng::gen_range(&mut r, -2.3f64..2.3).exp()).collect();
        let bb = ball_barthe(&mu, &l).unwrap();
        prop_assert!(bb.log_ratio >= -1e-12, "{bb:?}");
    }

    #[test]
    fn gamma2_is_gl_covariant(seed in 0u64..10_000, c0 in 0.5f64..3.0) {
        let n = 2 + (seed % 2) as usize;
        let f = LogConcaveFn::cone(random_body(seed, n, n + 2).unwrap(), c0).unwrap();
        let t = random_gl(&mut rng(seed), n, 0.1, 10.0);
        let spec = QuadratureSpec::default();
        let m = gamma2_fn(&f, Backend::Analytic, &spec).unwrap();
        let mt = gamma2_fn(&f.compose_affine(&t).unwrap(), Backend::Analytic, &spec).unwrap();
        let want = t.transpose() * m.form.matrix() * &t;
        let err = (mt.form.matrix() - &want).amax() / want.amax();
        prop_assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn level_sets_grow_as_t_falls(c in 0.1f64..4.0, t1 in 0.01f64..1.0, t2 in 0.01f64..1.0) {
        let g = LogConcaveFn::gaussian(3, c).unwrap();
        let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(level_set_volume(&g, lo).unwrap() >= level_set_volume(&g, hi).unwrap());
    }

    #[test]
    fn asplund_of_quadratics_adds_inverse_forms(a in 0.1f64..3.0, b in 0.1f64..3.0, alpha in 0.1f64..2.0, beta in 0.1f64..2.0) {
        let f = LogConcaveFn::gaussian(2, a).unwrap();
        let g = LogConcaveFn::quadratic(lyzlab::ellipsoids::QuadraticForm::new(DMatrix::from_row_slice(2, 2, &[b, 0.1, 0.1, 1.0])).unwrap());
        let h = asplund_sum(alpha, &f, beta, &g, &Default::default()).unwrap();
        let y = DVector::from_vec(vec![0.7, -1.1]);
        let want = alpha * f.legendre().unwrap().potential(&y) + beta * g.legendre().unwrap().potential(&y);
        assert_relative_eq!(h.legendre().unwrap().potential(&y), want, max_relative = 1e-10);
    }

    #[test]
    fn body_json_round_trips(seed in 0u64..10_000, n in 1usize..=3) {
        let k = random_body(seed, n, n + 2).unwrap();
        let back = read_body(&body_json(&k)).unwrap();
        prop_assert_eq!(back.vertex_rows(), k.vertex_rows());
    }
}
