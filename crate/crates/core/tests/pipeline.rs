use core::f64::consts::PI;

use adslab_core::geometry::Geometry;
use adslab_core::group::representation::build_fuchsian_rep;
use adslab_core::hull::metric::induced_cone_metric;
use adslab_core::hull::surface::hull_boundary;
use adslab_core::hull::{MarkedConfig, Side};
use adslab_core::rigidity::{induced_metric_jacobian, isometric_kernel, mink_transversality, Gauge, SurfaceSystem};
use adslab_core::{Error, Tolerances};
use nalgebra::Vector3;

fn axis_pair(geometry: Geometry) -> Vec<MarkedConfig> {
    let rep = build_fuchsian_rep(2).unwrap();
    [Side::Plus, Side::Minus].map(|s| MarkedConfig::axis(geometry, rep.clone(), s, 0.5).unwrap()).to_vec()
}

#[test]
fn hull_metric_is_a_cone_metric() {
    let tol = Tolerances::default();
    for geometry in [Geometry::AdS, Geometry::Mink] {
        let config = &axis_pair(geometry)[0];
        let surface = hull_boundary(config, 4, &tol).unwrap();
        assert!(surface.all_spacelike());
        let metric = induced_cone_metric(&surface).unwrap();
        assert!(metric.gauss_bonnet_defect() < 1e-6, "{geometry:?}");
        assert!(metric.min_cone_angle() > 2.0 * PI, "{geometry:?}");
    }
}

#[test]
fn fuchsian_pairs_are_rigid() {
    let tol = Tolerances::default();
    for geometry in [Geometry::AdS, Geometry::Mink] {
        let sys = SurfaceSystem::from_hulls(axis_pair(geometry), 4, &tol).unwrap();
        let report = isometric_kernel(&sys, &tol).unwrap();
        assert_eq!(report.kernel_dim, 6, "{geometry:?}");
        assert!(report.rigid);
        assert!(report.max_triviality_residual() < 1e-7);
    }
}

#[test]
fn single_side_keeps_moduli() {
    let tol = Tolerances::default();
    let mut configs = axis_pair(Geometry::AdS);
    configs.truncate(1);
    let sys = SurfaceSystem::from_hulls(configs, 4, &tol).unwrap();
    let report = isometric_kernel(&sys, &tol).unwrap();
    assert_eq!(report.kernel_dim, 12);
    assert!(!report.rigid);
    assert!(report.nontrivial_residual.unwrap() > 1e-2);
}

#[test]
fn jacobian_has_full_rank() {
    let tol = Tolerances::default();
    let sys = SurfaceSystem::from_hulls(axis_pair(Geometry::AdS), 4, &tol).unwrap();
    let j = induced_metric_jacobian(&sys, Gauge::Cohomology, &tol).unwrap();
    assert!(j.min_singular_value > 0.0);
    assert!(j.cols <= j.rows);
}

#[test]
fn minkowski_images_are_transverse() {
    let tol = Tolerances::default();
    let [plus, minus] = axis_pair(Geometry::Mink).try_into().unwrap();
    let plus = SurfaceSystem::from_hulls(vec![plus], 4, &tol).unwrap();
    let minus = SurfaceSystem::from_hulls(vec![minus], 4, &tol).unwrap();
    let t = mink_transversality(&plus, &minus, &tol).unwrap();
    assert_eq!(t.h1_dim, 12);
    assert_eq!(t.combined_rank, 12);
    assert!(t.transverse);
}

#[test]
fn bad_inputs_are_rejected() {
    let rep = build_fuchsian_rep(2).unwrap();
    assert!(matches!(MarkedConfig::new(Geometry::AdS, rep.clone(), Side::Plus, vec![]), Err(Error::InvalidInput(_))));
    let wrong_side = MarkedConfig::new(Geometry::AdS, rep.clone(), Side::Plus, vec![Vector3::new(0.0, 0.0, 0.5)]);
    assert!(matches!(wrong_side, Err(Error::InvalidInput(_))));
    assert!(matches!(MarkedConfig::new(Geometry::AdS, rep, Side::Plus, vec![Vector3::new(2.0, 0.0, 0.0)]), Err(Error::ChartUndefined)));
}
