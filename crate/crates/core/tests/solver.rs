//! End-to-end properties of the nonlinear solve.

use disloc2d::littlewood_paley::build_dyadic_family;
use disloc2d::picard_solver::{solve, DensityState, Preset, SolverConfig};
use disloc2d::spectral_core::{Grid, ScalarField2D};
use disloc2d::verification::{apriori_ratios, time_lipschitz_ratio};
use disloc2d::Error;

fn grid(n: usize) -> Grid {
    Grid::standard(n).unwrap()
}

fn cfg(dt: f64) -> SolverConfig {
    SolverConfig {
        dt,
        picard_tol: 1e-11,
        picard_max_iter: 30,
        c0_est: 1e-3,
        c1_est: 1e-3,
        ..SolverConfig::default()
    }
}

#[test]
fn max_principle_without_slope() {
    let s = Preset::BumpPair.build(grid(128), 0.5, 0.0).unwrap();
    let sol = solve(&s, 2.0, &cfg(0.25)).unwrap();
    for (now, start) in [(0, s.rho_plus()), (1, s.rho_minus())] {
        let tol = 1e-3 * (start.max() - start.min());
        for st in &sol.trajectory {
            let f = if now == 0 { st.rho_plus() } else { st.rho_minus() };
            assert!(f.max() <= start.max() + tol && f.min() >= start.min() - tol);
        }
    }
}

#[test]
fn linear_profile_stays_steady_under_solve() {
    let g = grid(32);
    let s = DensityState::new(ScalarField2D::zeros(g), ScalarField2D::zeros(g), 1.5, 0.0).unwrap();
    let sol = solve(&s, 1.0, &cfg(0.25)).unwrap();
    for st in &sol.trajectory {
        assert_eq!(st.rho_plus().sup_norm(), 0.0);
        assert_eq!(st.min_dx1(), (1.5, 1.5));
    }
}

#[test]
fn self_convergence_under_refinement() {
    let base = Preset::BumpPair.build(grid(128), 0.5, 0.0).unwrap();
    let t = 1.0;
    let end = |n: usize| solve(&base.resample(grid(n)), t, &cfg(0.25)).unwrap().final_state().clone();
    let (e32, e64, e128) = (end(32), end(64), end(128));
    let fam32 = build_dyadic_family(grid(32));
    let fam64 = build_dyadic_family(grid(64));
    let d1 = e64.resample(grid(32)).distance(&e32, 0.5, 2.0, &fam32).unwrap();
    let d2 = e128.resample(grid(64)).distance(&e64, 0.5, 2.0, &fam64).unwrap();
    assert!(d2 < d1, "{d1:e} -> {d2:e}");
}

#[test]
fn gronwall_ratio_is_stable_in_time() {
    let s = Preset::BumpPair.build(grid(128), 0.5, 0.0).unwrap();
    let sol = solve(&s, 5.0, &cfg(0.25)).unwrap();
    let ratios = apriori_ratios(&sol.trace).unwrap().unwrap();
    assert!(ratios.len() >= 10);
    let mean = ratios.iter().map(|r| r.1).sum::<f64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|r| (r.1 / mean - 1.0).abs()).fold(0.0, f64::max);
    assert!(mean > 0.0 && spread <= 0.3, "mean {mean}, spread {spread}");
}

#[test]
fn time_derivative_is_bounded_by_m_squared() {
    let s = Preset::BumpPair.build(grid(64), 0.5, 0.0).unwrap();
    let a = time_lipschitz_ratio(&solve(&s, 1.0, &cfg(0.25)).unwrap(), 1.5, 2.0).unwrap();
    let b = time_lipschitz_ratio(&solve(&s, 1.0, &cfg(0.125)).unwrap(), 1.5, 2.0).unwrap();
    assert!(a > 0.0 && a.is_finite());
    assert!((a - b).abs() < 0.1 * a, "{a} vs {b}");
}

#[test]
fn strong_data_with_long_steps_diverges() {
    let s = Preset::BumpPair.build(grid(32), 60.0, 0.0).unwrap();
    let c = SolverConfig {
        dt: 4.0,
        picard_max_iter: 6,
        c0_est: 1e-9,
        c1_est: 1e-9,
        ..SolverConfig::default()
    };
    assert!(matches!(solve(&s, 4.0, &c), Err(Error::PicardDivergence { .. })));
}

#[test]
fn slope_source_matches_shifted_frame() {
    // with ρ̄⁺ = ρ̄⁻ the velocity vanishes and L only rides along
    let s = Preset::EqualDensities.build(grid(32), 0.5, 0.0).unwrap();
    let sl = DensityState::new(s.rho_plus().clone(), s.rho_minus().clone(), 2.0, 0.0).unwrap();
    let sol = solve(&sl, 0.5, &cfg(0.25)).unwrap();
    assert_eq!(sol.final_state().rho_plus(), s.rho_plus());
}
