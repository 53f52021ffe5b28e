use adslab_core::geometry::killing::KillingField;
use adslab_core::geometry::isometry::apply_isometry;
use adslab_core::geometry::{mink_form, Geometry};
use adslab_core::group::cocycle::{coboundary, word_derivative, Module};
use adslab_core::group::representation::{build_fuchsian_rep, evaluate_word};
use adslab_core::group::word::{Letter, Word};
use adslab_core::pogorelov::split_radial_lateral;
use nalgebra::{DVector, Vector3};
use proptest::prelude::*;

fn word(genus: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..2 * genus, any::<bool>()), 0..8).prop_map(|ls| Word::new(ls.into_iter().map(|(g, i)| Letter::new(g, i))))
}

fn cone_point() -> impl Strategy<Value = Vector3<f64>> {
    (-0.4..0.4f64, -0.4..0.4f64, 0.2..1.0f64).prop_map(|(a, b, s)| {
        let t = (a * a + b * b).sqrt() + s;
        Vector3::new(a, b, -t)
    })
}

fn vec3(scale: f64) -> impl Strategy<Value = Vector3<f64>> {
    (-scale..scale, -scale..scale, -scale..scale).prop_map(|(a, b, c)| Vector3::new(a, b, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radial_split_reconstructs(p in cone_point(), v in vec3(1.0)) {
        let s = split_radial_lateral(&p, &v).unwrap();
        prop_assert!((s.radial + s.lateral - v).norm() < 1e-12);
        prop_assert!(mink_form(&s.lateral, &p).abs() < 1e-12 * (1.0 + v.norm()));
        prop_assert!(s.radial.cross(&p).norm() < 1e-12 * (1.0 + v.norm()));
    }

    #[test]
    fn coboundaries_evaluate_as_coboundaries(
        x in prop::collection::vec(-1.0..1.0f64, 3),
        w in word(2),
    ) {
        let rep = build_fuchsian_rep(2).unwrap();
        let module = Module::GF;
        let x = DVector::from_vec(x);
        let tau = coboundary(&rep, module, &x).unwrap();
        let g = evaluate_word(&rep, &w);
        let expected = module.action(&g).unwrap() * &x - &x;
        let got = tau.evaluate(&rep, &w).unwrap();
        prop_assert!((got - expected).norm() < 1e-9 * (1.0 + g.identity_distance().exp()));
    }

    #[test]
    fn fox_derivative_is_additive(a in word(2), b in word(2)) {
        let rep = build_fuchsian_rep(2).unwrap();
        let module = Module::GF;
        let da = word_derivative(&rep, module, &a).unwrap();
        let db = word_derivative(&rep, module, &b).unwrap();
        let dab = word_derivative(&rep, module, &a.concat(&b)).unwrap();
        let ga = module.action(&evaluate_word(&rep, &a)).unwrap();
        let err = (&dab - (&da + ga * &db)).norm();
        prop_assert!(err < 1e-8 * (1.0 + dab.norm()));
    }

    #[test]
    fn killing_velocity_is_flow_derivative(
        c in prop::array::uniform6(-0.5..0.5f64),
        p in cone_point(),
        mink in any::<bool>(),
    ) {
        let geometry = if mink { Geometry::Mink } else { Geometry::AdS };
        let p = if mink { p } else { p * 0.5 };
        let field = KillingField::new(geometry, c);
        let h = 1e-5;
        let fwd = apply_isometry(&field.flow(h), geometry, &p).unwrap();
        let back = apply_isometry(&field.flow(-h), geometry, &p).unwrap();
        let fd = (fwd - back) / (2.0 * h);
        prop_assert!((fd - field.velocity(&p)).norm() < 1e-7);
    }
}
