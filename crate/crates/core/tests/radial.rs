mod common;

use common::{bessel_j, first_bessel_zero};
use specbound::radial::{
    distribution_function, principal_dirichlet_eigenvalue, solve_eigen_ivp, solve_torsion, solve_whole_manifold,
};
use specbound::{AifEvaluator, Curvature, IsoperimetricFunction, LpNorm, WarpingModel};
use std::f64::consts::PI;

const TOL: f64 = 1e-10;

fn models() -> Vec<WarpingModel> {
    vec![
        WarpingModel::euclidean(2).unwrap(),
        WarpingModel::euclidean(3).unwrap(),
        WarpingModel::hyperbolic(2, 1.0).unwrap(),
        WarpingModel::hyperbolic(3, 1.0).unwrap(),
        WarpingModel::jacobi(2, Curvature::Power { a: 0.5, b: 0.5, exponent: 1.0 }, None).unwrap(),
    ]
}

#[test]
fn disk_solution_follows_the_bessel_profile() {
    let j = first_bessel_zero();
    let m = WarpingModel::euclidean(2).unwrap();
    let u = solve_eigen_ivp(&m, j * j, 1.0, TOL).unwrap();
    assert!(u.values().last().unwrap().abs() < 1e-6);
    for r in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let (v, _) = u.eval(r).unwrap();
        assert!((v - bessel_j(0, j * r)).abs() < 1e-8, "r={r}: {v} vs {}", bessel_j(0, j * r));
    }
    for ((r, v), dv) in u.radii().iter().zip(u.values()).zip(u.derivatives()) {
        assert!((v - bessel_j(0, j * r)).abs() < 1e-8, "r={r}");
        assert!((dv + j * bessel_j(1, j * r)).abs() < 1e-8, "r={r}");
    }
}

#[test]
fn disk_eigenvalue_and_norm() {
    let j = first_bessel_zero();
    let m = WarpingModel::euclidean(2).unwrap();
    let pair = principal_dirichlet_eigenvalue(&m, 1.0, TOL).unwrap();
    assert!((pair.eigenvalue - j * j).abs() < 1e-4 * j * j);
    let norm_sq = PI * bessel_j(1, j).powi(2);
    let norm = pair.eigenfunction.lp_norm(2.0, 1.0).unwrap();
    assert!((norm * norm - norm_sq).abs() < 1e-7 * norm_sq);
    assert!((norm - 0.920166).abs() < 1e-4);
    assert!((pair.eigenfunction.sup_norm() - 1.0).abs() < 1e-12);
    let pair2 = principal_dirichlet_eigenvalue(&m, 2.0, TOL).unwrap();
    assert!((pair2.eigenvalue - 1.445796).abs() < 1e-4 * 1.445796);
}

#[test]
fn shooting_is_self_consistent() {
    for m in models() {
        for r in [0.5, 1.0, 3.0] {
            let pair = principal_dirichlet_eigenvalue(&m, r, TOL).unwrap();
            assert!(pair.boundary_residual() <= 1e-6, "{:?} R={r}", m.kind());
            let again = solve_eigen_ivp(&m, pair.eigenvalue, r, TOL).unwrap();
            assert!(again.values().last().unwrap().abs() <= 1e-6 * again.sup_norm());
            let vals = pair.eigenfunction.values();
            assert!(vals[..vals.len() - 1].iter().all(|v| *v > 0.0));
        }
    }
}

#[test]
fn eigenvalue_decreases_with_the_ball() {
    for m in models() {
        let radii = [0.5, 1.0, 1.5, 2.5, 4.0];
        let lams: Vec<f64> =
            radii.iter().map(|r| principal_dirichlet_eigenvalue(&m, *r, TOL).unwrap().eigenvalue).collect();
        assert!(lams.windows(2).all(|w| w[0] > w[1]), "{:?}: {lams:?}", m.kind());
    }
}

#[test]
fn hyperbolic_eigenvalues_stay_above_a_quarter() {
    let m = WarpingModel::hyperbolic(2, 1.0).unwrap();
    let lams: Vec<f64> =
        [1.0, 2.0, 4.0, 8.0, 16.0].iter().map(|r| principal_dirichlet_eigenvalue(&m, *r, TOL).unwrap().eigenvalue).collect();
    assert!(lams.iter().all(|l| *l > 0.25), "{lams:?}");
    assert!(lams.windows(2).all(|w| w[0] > w[1]));
    assert!(lams[4] - 0.25 < 0.05);
}

#[test]
fn torsion_level_sets_satisfy_the_divergence_identity() {
    for m in [WarpingModel::euclidean(2).unwrap(), WarpingModel::hyperbolic(3, 1.0).unwrap()] {
        let u = solve_torsion(&m, 1.5).unwrap();
        let top = u.values()[0];
        for k in 1..=20 {
            let t = top * k as f64 / 21.0;
            let r = u.level_radius(t).unwrap();
            let mu = distribution_function(&u, t).unwrap();
            let (_, du) = u.eval(r).unwrap();
            let flux = m.ball_area(r).unwrap() * du.abs();
            assert!((mu - flux).abs() <= 1e-6 * mu, "t={t}: {mu} vs {flux}");
        }
    }
}

#[test]
fn coarea_chain_with_ball_profiles() {
    for m in [WarpingModel::euclidean(2).unwrap(), WarpingModel::hyperbolic(2, 1.0).unwrap()] {
        let u = solve_torsion(&m, 1.0).unwrap();
        let aif = AifEvaluator::new(IsoperimetricFunction::model_profile(m.clone())).unwrap();
        let top = u.values()[0];
        let dt = 1e-5 * top;
        for k in 1..=50 {
            let t = top * k as f64 / 51.0;
            let hi = aif.eval(distribution_function(&u, t + dt).unwrap()).unwrap();
            let lo = aif.eval(distribution_function(&u, t - dt).unwrap()).unwrap();
            let rate = -(hi - lo) / (2.0 * dt);
            assert!(rate >= 1.0 - 1e-6, "{:?} t={t}: {rate}", m.kind());
            assert!((rate - 1.0).abs() < 1e-6, "{:?} t={t}: {rate}", m.kind());
        }
    }
}

#[test]
fn whole_manifold_decay_matches_spherical_function_rate() {
    let m = WarpingModel::hyperbolic(2, 1.0).unwrap();
    for lambda in [0.1, 0.1875, 0.24] {
        let sol = solve_whole_manifold(&m, lambda, TOL).unwrap();
        let sigma = 0.5 - (0.25 - lambda).sqrt();
        assert!(sol.stabilized);
        assert!((sol.decay_rate - sigma).abs() < 5e-3 * sigma, "λ={lambda}: {} vs {sigma}", sol.decay_rate);
    }
    let sol = solve_whole_manifold(&m, 0.1875, TOL).unwrap();
    assert!(matches!(sol.lp_norm(3.0).unwrap(), LpNorm::Divergent { tail_exponent } if tail_exponent > 0.2));
    assert!(matches!(sol.lp_norm(5.0).unwrap(), LpNorm::Finite { value, .. } if value > 1.0 / 0.99074));
}

#[test]
fn whole_manifold_rejects_oscillating_solutions() {
    let m = WarpingModel::hyperbolic(2, 1.0).unwrap();
    assert!(solve_whole_manifold(&m, 1.0, TOL).is_err());
}
