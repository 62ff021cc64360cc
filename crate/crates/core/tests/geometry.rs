mod common;

use common::{assert_close, charts, max_abs, max_diff, points, rng};
use proptest::prelude::*;
use sasaki_core::diff::DiffBackend;
use sasaki_core::field::VectorField;
use sasaki_core::models::{FrameVector, ModelChart};
use sasaki_core::{Chart, GeomError, Geometry};

#[test]
fn metric_examples() {
    let e = Geometry::new(ModelChart::euclidean(2));
    assert_eq!(e.metric_at(&[3.0, -7.0]).unwrap().as_slice(), &[1.0, 0.0, 0.0, 1.0]);

    let nil = Geometry::new(ModelChart::nil3());
    let g = nil.metric_at(&[1.0, 0.0, 0.0]).unwrap();
    assert_close(g.as_slice(), &[1.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0, -1.0, 2.0], 1e-15);

    let h = Geometry::new(ModelChart::hyperbolic(2, 1.0));
    assert_close(h.metric_at(&[0.0, 2.0]).unwrap().as_slice(), &[0.25, 0.0, 0.0, 0.25], 1e-15);
}

#[test]
fn half_space_rejects_the_boundary() {
    let h = Geometry::new(ModelChart::hyperbolic(2, 1.0));
    for p in [[0.0, 0.0], [1.0, -0.5]] {
        assert!(matches!(h.metric_at(&p), Err(GeomError::OutsideDomain { .. })));
        assert!(h.christoffel(&p).is_err());
    }
}

#[test]
fn flat_christoffels_and_curvature_vanish() {
    let geo = Geometry::new(ModelChart::euclidean(3));
    let p = [0.3, -1.2, 4.0];
    assert_eq!(max_abs(geo.christoffel(&p).unwrap().as_slice()), 0.0);
    assert_eq!(max_abs(geo.riemann(&p).unwrap().as_slice()), 0.0);
    assert_eq!(max_abs(geo.nabla_riemann(&p).unwrap().as_slice()), 0.0);
}

#[test]
fn half_plane_christoffels() {
    for c in [1.0, 2.5] {
        let geo = Geometry::new(ModelChart::hyperbolic(2, c));
        let (x, y) = (0.4, 1.7);
        let gamma = geo.christoffel(&[x, y]).unwrap();
        let mut want = [0.0; 8];
        // gamma[k][i][j], x = 0, y = 1
        want[1] = -1.0 / y;
        want[2] = -1.0 / y;
        want[4] = 1.0 / y;
        want[7] = -1.0 / y;
        assert_close(gamma.as_slice(), &want, 1e-14);
    }
}

#[test]
fn nil3_frame_connection() {
    let chart = ModelChart::nil3();
    let geo = Geometry::new(chart);
    let [e1, e2, e3] = [0, 1, 2].map(|index| FrameVector { chart, index });
    for p in [vec![0.0; 3], vec![0.7, -1.1, 2.0]] {
        let minus_half_e3: Vec<f64> = e3.eval(&p).unwrap().iter().map(|v| -0.5 * v).collect();
        let d12 = geo.covariant_derivative_along(&e2, &e1, &p).unwrap();
        let d21 = geo.covariant_derivative_along(&e1, &e2, &p).unwrap();
        assert_close(&d12, &minus_half_e3, 1e-14);
        assert_close(&d21, &minus_half_e3, 1e-14);
    }
}

#[test]
fn hyperbolic_sectional_curvature_is_minus_c_squared() {
    for (n, c) in [(2, 1.0), (3, 2.0), (4, 0.5)] {
        let geo = Geometry::new(ModelChart::hyperbolic(n, c));
        let mut p = vec![0.3; n];
        p[n - 1] = 1.3;
        let r = geo.riemann(&p).unwrap();
        let g = geo.metric_at(&p).unwrap();
        for i in 0..n {
            for j in i + 1..n {
                let mut u = vec![0.0; n];
                let mut v = vec![0.0; n];
                u[i] = 1.0;
                v[j] = 1.0;
                let k = r.sectional(&g, &u, &v);
                assert!((k + c * c).abs() < 1e-6, "n={n} c={c} plane ({i},{j}): {k}");
            }
        }
    }
}

#[test]
fn hyperbolic_curvature_is_parallel() {
    for (n, c) in [(2, 1.0), (3, 2.0)] {
        let geo = Geometry::new(ModelChart::hyperbolic(n, c));
        let mut p = vec![-0.2; n];
        p[n - 1] = 0.8;
        assert!(max_abs(geo.nabla_riemann(&p).unwrap().as_slice()) < 1e-5);
    }
}

#[test]
fn nil3_curvature_gradient_is_nonzero_and_satisfies_second_bianchi() {
    let geo = Geometry::new(ModelChart::nil3());
    let dr = geo.nabla_riemann(&[0.4, 0.1, -0.9]).unwrap();
    assert!(max_abs(dr.as_slice()) > 0.1);
    assert!(second_bianchi_defect(&dr) < 1e-6);
}

fn second_bianchi_defect(dr: &sasaki_core::geometry::CurvatureGradient<f64>) -> f64 {
    let n = dr.dim();
    let mut worst = 0.0_f64;
    for a in 0..n {
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let s = dr.get(a, l, i, j, k) + dr.get(i, l, j, a, k) + dr.get(j, l, a, i, k);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
    }
    worst / max_abs(dr.as_slice()).max(1.0)
}

#[test]
fn curvature_symmetries_at_random_points() {
    let mut rng = rng(11);
    for (chart, lo, hi) in charts() {
        let geo = Geometry::new(chart);
        let n = chart.dim();
        for p in points(&mut rng, &lo, &hi, 100) {
            let gamma = geo.christoffel(&p).unwrap();
            assert!(gamma.asymmetry() <= 1e-12);
            let g = geo.metric_at(&p).unwrap();
            assert!(g.asymmetry() <= 1e-12 && g.is_positive_definite());

            let r = geo.riemann(&p).unwrap();
            let scale = max_abs(r.as_slice()).max(1.0);
            let low = r.lowered(&g);
            let at = |l: usize, i: usize, j: usize, k: usize| low[((l * n + i) * n + j) * n + k];
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let anti = r.get(l, i, j, k) + r.get(l, j, i, k);
                            let bianchi = r.get(l, i, j, k) + r.get(l, j, k, i) + r.get(l, k, i, j);
                            let pair = at(l, i, j, k) - at(j, k, l, i);
                            assert!(anti.abs() / scale <= 1e-6, "{} antisymmetry at {p:?}", chart.name());
                            assert!(bianchi.abs() / scale <= 1e-6, "{} first Bianchi at {p:?}", chart.name());
                            assert!(pair.abs() / max_abs(&low).max(1.0) <= 1e-6, "{} pair symmetry", chart.name());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn second_bianchi_at_random_points() {
    let mut rng = rng(12);
    for (chart, lo, hi) in charts() {
        let geo = Geometry::new(chart);
        for p in points(&mut rng, &lo, &hi, 100) {
            let d = second_bianchi_defect(&geo.nabla_riemann(&p).unwrap());
            assert!(d <= 1e-6, "{} at {p:?}: {d:e}", chart.name());
        }
    }
}

#[test]
fn metric_compatibility() {
    let mut rng = rng(13);
    for (chart, lo, hi) in charts() {
        let geo = Geometry::new(chart);
        for p in points(&mut rng, &lo, &hi, 20) {
            assert!(geo.metric_compatibility_defect(&p).unwrap() <= 1e-8);
        }
    }
}

#[test]
fn backends_agree() {
    let mut rng = rng(14);
    for (chart, lo, hi) in charts() {
        let dual = Geometry::new(chart);
        let fd = Geometry::with_backend(chart, DiffBackend::finite_difference());
        for p in points(&mut rng, &lo, &hi, 10) {
            let (a, b) = (dual.christoffel(&p).unwrap(), fd.christoffel(&p).unwrap());
            let scale = max_abs(a.as_slice()).max(1.0);
            assert!(max_diff(a.as_slice(), b.as_slice()) / scale <= 1e-5, "{} Γ", chart.name());
            let (a, b) = (dual.riemann(&p).unwrap(), fd.riemann(&p).unwrap());
            let scale = max_abs(a.as_slice()).max(1.0);
            assert!(max_diff(a.as_slice(), b.as_slice()) / scale <= 1e-5, "{} R", chart.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn half_space_metric_is_conformally_flat(x in -5.0..5.0f64, y in 0.05..10.0f64, c in 0.1..3.0f64) {
        let geo = Geometry::new(ModelChart::hyperbolic(2, c));
        let g = geo.metric_at(&[x, y]).unwrap();
        let w = 1.0 / (c * y).powi(2);
        prop_assert!((g[(0, 0)] - w).abs() <= 1e-12 * w);
        prop_assert!((g[(1, 1)] - w).abs() <= 1e-12 * w);
        prop_assert_eq!(g[(0, 1)], 0.0);
    }

    #[test]
    fn nil3_volume_density_is_one(x in -10.0..10.0f64, y in -10.0..10.0f64, z in -10.0..10.0f64) {
        let geo = Geometry::new(ModelChart::nil3());
        let v = geo.volume_density(&[x, y, z]).unwrap();
        prop_assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn nil3_scalar_curvature_is_constant(x in -3.0..3.0f64, y in -3.0..3.0f64, z in -3.0..3.0f64) {
        // left-invariant metric: every scalar invariant is the same at all points
        let geo = Geometry::new(ModelChart::nil3());
        let p = [x, y, z];
        let r = geo.riemann(&p).unwrap();
        let ginv = geo.inverse_metric(&p).unwrap();
        let mut s = 0.0;
        for i in 0..3 {
            for k in 0..3 {
                let mut ric = 0.0;
                for l in 0..3 {
                    ric += r.get(l, l, i, k);
                }
                s += ginv[(i, k)] * ric;
            }
        }
        prop_assert!((s + 0.5).abs() < 1e-9, "scalar {}", s);
    }
}
