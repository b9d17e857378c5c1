mod common;

use common::{bessel_j, first_bessel_zero};
use proptest::prelude::*;
use specbound::bounds::{
    admissible_p_threshold, eigen_bound_constant, energy_identity_check, hadamard_constant, lp_lower_bound_check,
    torsion_bound_check, verify_linfty_bound,
};
use specbound::radial::principal_dirichlet_eigenvalue;
use specbound::{AifEvaluator, BoundScenario, Domain, IsoperimetricFunction, Status, WarpingModel};
use std::f64::consts::PI;

fn power(d: f64, n: u32) -> AifEvaluator {
    AifEvaluator::new(IsoperimetricFunction::power_law(d, n).unwrap()).unwrap()
}

#[test]
fn constant_matches_closed_form_on_power_laws() {
    let lambdas = [0.01, 0.25, 1.0, 5.783186, 40.0];
    let ps = [2.0, 2.5, 3.0, 6.0, 20.0];
    for n in [2, 3, 4] {
        for d in [1.0, (4.0 * PI).sqrt(), 2.0] {
            let aif = power(d, n);
            for &l in &lambdas {
                for &p in &ps {
                    let a = eigen_bound_constant(l, p, &aif).unwrap();
                    let b = hadamard_constant(l, p, n, d).unwrap();
                    assert!((a - b).abs() <= 1e-8 * b, "n={n} D={d} λ={l} p={p}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn worked_constants() {
    let planar = power((4.0 * PI).sqrt(), 2);
    assert!((eigen_bound_constant(0.5, 2.0, &planar).unwrap() - 0.564190).abs() < 1e-6);
    assert!((hadamard_constant(0.5, 2.0, 2, (4.0 * PI).sqrt()).unwrap() - 0.564190).abs() < 1e-6);
    assert!((eigen_bound_constant(5.783186, 2.0, &planar).unwrap() - 1.91885).abs() < 1e-4);
    let c = 2.0 * (0.375f64 / (4.0 * PI)).powf(0.2);
    assert!((eigen_bound_constant(0.1875, 5.0, &planar).unwrap() - c).abs() < 1e-9);
    assert!((c - 0.990819).abs() < 1e-6);
}

#[test]
fn constant_rejects_bad_arguments() {
    let planar = power((4.0 * PI).sqrt(), 2);
    assert!(eigen_bound_constant(0.0, 2.0, &planar).is_err());
    assert!(eigen_bound_constant(1.0, 1.5, &planar).is_err());
    assert!(hadamard_constant(1.0, 2.0, 2, -1.0).is_err());
    assert!(admissible_p_threshold(2.0, 1.0).is_err());
    assert_eq!(admissible_p_threshold(1.0, 1.0).unwrap(), f64::INFINITY);
    assert!((admissible_p_threshold(0.1875, 0.25).unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn better_profiles_give_smaller_constants() {
    let model = WarpingModel::hyperbolic(2, 1.0).unwrap();
    let sharp = AifEvaluator::new(IsoperimetricFunction::model_profile(model)).unwrap();
    let planar = power((4.0 * PI).sqrt(), 2);
    let weak = power(3.0, 2);
    for l in [0.05, 0.2, 1.0, 4.0] {
        for p in [2.0, 5.0, 11.0] {
            let cs = eigen_bound_constant(l, p, &sharp).unwrap();
            let cp = eigen_bound_constant(l, p, &planar).unwrap();
            let cw = eigen_bound_constant(l, p, &weak).unwrap();
            assert!(cs <= cp * (1.0 + 1e-12) && cp <= cw, "λ={l} p={p}");
        }
    }
}

#[test]
fn torsion_bound_on_hyperbolic_plane_is_strict() {
    let model = WarpingModel::hyperbolic(2, 1.0).unwrap();
    let planar = IsoperimetricFunction::power_law((4.0 * PI).sqrt(), 2).unwrap();
    let r = torsion_bound_check(&model, 1.0, &planar).unwrap();
    let exact = 2.0 * 0.5f64.cosh().ln();
    assert!((r.lhs - exact).abs() < 1e-6);
    assert!((r.rhs - 2.0 * PI * (1f64.cosh() - 1.0) / (4.0 * PI)).abs() < 1e-9);
    assert!(r.is_satisfied() && r.slack > 1.1);
    let sharp = torsion_bound_check(&model, 1.0, &IsoperimetricFunction::model_profile(model.clone())).unwrap();
    assert!((sharp.rhs - exact).abs() < 1e-8 && sharp.is_satisfied());
}

#[test]
fn lp_lower_bound_on_the_disk() {
    let j = first_bessel_zero();
    let pair = principal_dirichlet_eigenvalue(&WarpingModel::euclidean(2).unwrap(), 1.0, 1e-10).unwrap();
    let aif = power((4.0 * PI).sqrt(), 2);
    let r = lp_lower_bound_check(&pair, 0.0, 2.0, &aif).unwrap();
    assert!((r.lhs - PI * bessel_j(1, j).powi(2)).abs() < 1e-6);
    assert!((r.rhs - PI / (2.0 * j * j)).abs() < 1e-6);
    for p in [2.0, 3.0, 4.0] {
        for g in [0.0, 0.1] {
            assert!(lp_lower_bound_check(&pair, g, p, &aif).unwrap().is_satisfied(), "p={p} γ={g}");
        }
    }
    assert!(lp_lower_bound_check(&pair, 1.0, 2.0, &aif).is_err());
    assert!(lp_lower_bound_check(&pair, -0.1, 2.0, &aif).is_err());
}

#[test]
fn energy_identity_holds_for_eigenpairs() {
    for (m, r) in [
        (WarpingModel::euclidean(2).unwrap(), 1.0),
        (WarpingModel::euclidean(3).unwrap(), PI),
        (WarpingModel::hyperbolic(2, 1.0).unwrap(), 3.0),
        (WarpingModel::hyperbolic(3, 1.0).unwrap(), 2.0),
    ] {
        let pair = principal_dirichlet_eigenvalue(&m, r, 1e-10).unwrap();
        let rep = energy_identity_check(&pair).unwrap();
        assert!(rep.is_satisfied(), "{:?} R={r}: {} vs {}", m.kind(), rep.lhs, rep.rhs);
    }
}

#[test]
fn linfty_bound_on_balls_and_whole_plane() {
    let planar = IsoperimetricFunction::power_law((4.0 * PI).sqrt(), 2).unwrap();
    let disk = BoundScenario::new(WarpingModel::euclidean(2).unwrap(), planar.clone(), 2.0, Domain::Ball { radius: 1.0 }).unwrap();
    let r = verify_linfty_bound(&disk).unwrap();
    assert!((r.lhs - 1.0).abs() < 1e-12);
    assert!((r.rhs - 1.76565).abs() < 1e-4);
    assert!(r.is_satisfied());

    let h2 = WarpingModel::hyperbolic(2, 1.0).unwrap();
    let whole = |lambda: f64, p: f64| {
        verify_linfty_bound(&BoundScenario::new(h2.clone(), planar.clone(), p, Domain::WholeManifold { lambda }).unwrap())
            .unwrap()
    };
    let r = whole(0.1875, 5.0);
    assert!(r.is_satisfied());
    assert!(r.rhs >= r.lhs && r.lhs == 1.0);
    let r = whole(0.1875, 3.0);
    assert!(matches!(&r.status, Status::NotApplicable(s) if s.starts_with("DIVERGENT")));
    assert!(!r.is_violated());
    let r = whole(0.3, 5.0);
    assert!(matches!(r.status, Status::NotApplicable(_)));
}

#[test]
fn scaled_constant_is_caught() {
    let planar = IsoperimetricFunction::power_law((4.0 * PI).sqrt(), 2).unwrap();
    let mut s = BoundScenario::new(WarpingModel::euclidean(2).unwrap(), planar, 2.0, Domain::Ball { radius: 1.0 }).unwrap();
    s.constant_scale = 0.5;
    assert!(verify_linfty_bound(&s).unwrap().is_violated());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constant_grows_with_lambda(l in 0.01f64..50.0, f in 1.01f64..4.0, p in 2.0f64..12.0) {
        let aif = power((4.0 * PI).sqrt(), 2);
        let a = eigen_bound_constant(l, p, &aif).unwrap();
        let b = eigen_bound_constant(l * f, p, &aif).unwrap();
        prop_assert!(b > a);
    }

    #[test]
    fn threshold_grows_towards_the_bottom(l1 in 0.1f64..10.0, a in 0.01f64..0.98, b in 0.01f64..0.98) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-6);
        let t1 = admissible_p_threshold(lo * l1, l1).unwrap();
        let t2 = admissible_p_threshold(hi * l1, l1).unwrap();
        prop_assert!(t1 >= 2.0 && t2 > t1);
    }
}
