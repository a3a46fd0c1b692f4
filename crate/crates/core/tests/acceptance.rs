//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p disloc2d --test acceptance`.

use std::f64::consts::LN_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use disloc2d::littlewood_paley::build_dyadic_family;
use disloc2d::multipliers::velocity_from_densities;
use disloc2d::paraproduct_commutator::{bony_reconstruct, commutator_bound_report, dealiased_product};
use disloc2d::picard_solver::{contraction_window, existence_time, solve, Preset, Solution, SolverConfig};
use disloc2d::spectral_core::{Grid, ScalarField2D};
use disloc2d::verification::{
    calibration_reports, check_apriori, check_commutator, residual_ratios, run_default_suite, summary, SpectralSampler,
    SuiteConfig, DRIFT_LIMIT,
};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn grid(n: usize) -> Grid {
    Grid::standard(n).unwrap()
}

fn c1_partition_of_unity() -> Outcome {
    let start = Instant::now();
    let fam = build_dyadic_family(grid(256));
    let worst = fam.partition_residual();
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-12 && elapsed < Duration::from_secs(1),
        format!("max |χ + Σφ - 1| = {worst:.2e}, {elapsed:.2?}"),
    )
}

fn c2_bony_identity() -> Outcome {
    let g = grid(128);
    let fam = build_dyadic_family(g);
    let sampler = SpectralSampler::new(1.5, 31, 1.0);
    let mut worst = 0.0f64;
    for i in 0..10 {
        let u = sampler.sample(g, 2024, 2 * i).unwrap();
        let v = sampler.sample(g, 2024, 2 * i + 1).unwrap();
        let uv = dealiased_product(&u, &v).unwrap();
        let pointwise = u.pointwise_mul(&v).unwrap();
        let rec = bony_reconstruct(&u, &v, &fam).unwrap();
        worst = worst
            .max((&rec - &pointwise).sup_norm() / pointwise.sup_norm())
            .max((&rec - &uv).sup_norm() / uv.sup_norm());
    }
    outcome(worst < 1e-10, format!("worst relative error {worst:.2e} over 10 pairs"))
}

fn c3_velocity_exactness() -> Outcome {
    let g = grid(64);
    let zero = ScalarField2D::zeros(g);
    let diag = ScalarField2D::from_fn(g, |x1, x2| (x1 + x2).sin());
    let u = velocity_from_densities(&diag, &zero).unwrap();
    let e1 = (&u - &diag.scale(0.25)).sup_norm();
    let axis = ScalarField2D::from_fn(g, |x1, _| x1.sin());
    let e2 = velocity_from_densities(&axis, &zero).unwrap().sup_norm();
    outcome(e1 < 1e-12 && e2 < 1e-12, format!("diagonal {e1:.2e}, axis {e2:.2e}"))
}

fn c4_closed_forms() -> Outcome {
    let t1 = existence_time(1.0, 1.0).unwrap();
    let w = contraction_window(2.0, 1.0).unwrap();
    let m_check = (1.0 * t1 * 2.0 * 1.0f64).exp();
    outcome(
        t1 == LN_2 / 2.0 && w == 0.125 && (m_check - 2.0).abs() < 1e-15,
        format!("T1 = {t1}, T2 window = {w}, exp(C0 T1 M) = {m_check}"),
    )
}

/// Least-squares slope of `log2 s_j` against `j`.
fn log_slope(points: &[(i32, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1.log2()).sum::<f64>() / n;
    let num: f64 = points.iter().map(|p| (p.0 as f64 - mx) * (p.1.log2() - my)).sum();
    let den: f64 = points.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
    num / den
}

fn c5_commutator() -> Outcome {
    let start = Instant::now();
    let r = 1.5;
    let fam = build_dyadic_family(grid(256));
    let fields = SpectralSampler::new(r, 32, 1.0).family(*fam.grid(), 7, 5).unwrap();
    let [a, b] = check_commutator(&fields, r, &fam).unwrap();
    let mut worst_slope = f64::NEG_INFINITY;
    for w in fields.windows(2) {
        for alpha in [1, 2] {
            let rep = commutator_bound_report(&w[0], &w[1], r, alpha, &fam).unwrap();
            let scaled = rep.scaled_lhs();
            let peak = scaled.iter().fold(0.0f64, |m, p| m.max(p.1));
            let live: Vec<_> = scaled.into_iter().filter(|p| p.1 > 1e-12 * peak).collect();
            let top = &live[live.len().saturating_sub(4)..];
            worst_slope = worst_slope.max(log_slope(top));
        }
    }
    let elapsed = start.elapsed();
    let ok = a.pass && b.pass && worst_slope <= 0.0 && elapsed < Duration::from_secs(120);
    outcome(
        ok,
        format!(
            "ratios {:.3e} / {:.3e}, drifts {:.3} / {:.3}, top-4 log2 slope of 2^(jr) lhs ≤ {worst_slope:.3}, {elapsed:.1?}",
            a.worst_ratio, b.worst_ratio, a.refinement_drift, b.refinement_drift
        ),
    )
}

struct Calibrated {
    c0: f64,
    c1: f64,
    runs: Vec<Solution>,
    coarse: Vec<Solution>,
}

fn calibrated_runs() -> Calibrated {
    let cfg = SuiteConfig {
        n: 128,
        ..SuiteConfig::default()
    };
    let (_, (c0, c1)) = calibration_reports(&cfg).unwrap();
    let g = grid(128);
    let states = disloc2d::verification::random_initial_states(g, cfg.seed, 5, cfg.r, 0.5).unwrap();
    let solver = SolverConfig {
        c0_est: c0,
        c1_est: c1,
        ..cfg.solver.clone()
    };
    let fam = build_dyadic_family(g);
    let mut runs = Vec::new();
    let mut coarse = Vec::new();
    for s in &states {
        let y0 = disloc2d::norms::y_norm(s, cfg.r, cfg.p, &fam).unwrap();
        let t1 = existence_time(y0, c0).unwrap();
        runs.push(solve(s, t1, &solver).unwrap());
        coarse.push(solve(&s.resample(grid(64)), t1, &solver).unwrap());
    }
    Calibrated { c0, c1, runs, coarse }
}

fn c6_apriori(cal: &Calibrated) -> Outcome {
    let traces: Vec<_> = cal.runs.iter().map(|s| s.trace.clone()).collect();
    let coarse: Vec<_> = cal.coarse.iter().map(|s| s.trace.clone()).collect();
    let rep = check_apriori(&traces, &coarse).unwrap();
    let bound = cal
        .runs
        .iter()
        .flat_map(|s| s.trace.records.iter().map(move |r| r.y_norm / s.trace.m_bound))
        .fold(0.0f64, f64::max);
    let horizon = cal.runs.iter().map(|s| s.final_state().time()).fold(0.0f64, f64::max);
    outcome(
        rep.worst_ratio.is_finite() && rep.refinement_drift < DRIFT_LIMIT && bound <= 1.05,
        format!(
            "C0 = {:.4e}, worst ratio {:.4e}, drift {:.3}, max y/M = {bound:.4}, T up to {horizon:.2}",
            cal.c0, rep.worst_ratio, rep.refinement_drift
        ),
    )
}

fn c7_contraction(cal: &Calibrated) -> Outcome {
    let (mut steps, mut good) = (0usize, 0usize);
    let mut within_window = true;
    for s in &cal.runs {
        let window = contraction_window(s.trace.m_bound, cal.c1).unwrap();
        within_window &= s.trace.dt <= window;
        for ratios in residual_ratios(&s.trace) {
            steps += 1;
            if ratios.iter().all(|&q| q <= 0.5) {
                good += 1;
            }
        }
    }
    let frac = good as f64 / steps.max(1) as f64;
    outcome(
        within_window && steps > 0 && frac >= 0.9,
        format!("C1 = {:.4e}, {good}/{steps} steps with all ratios ≤ 0.5", cal.c1),
    )
}

fn c8_uniqueness() -> Outcome {
    let s = Preset::BumpPair.build(grid(128), 0.5, 0.0).unwrap();
    let tol = 1e-10;
    let run = |max_iter| {
        let cfg = SolverConfig {
            dt: 0.25,
            picard_tol: tol,
            picard_max_iter: max_iter,
            ..SolverConfig::default()
        };
        solve(&s, 1.0, &cfg).unwrap()
    };
    let (a, b) = (run(8), run(16));
    let converged = |x: &Solution| x.trace.records[1..].iter().all(|r| r.last_residual().unwrap() < tol);
    let fam = build_dyadic_family(grid(128));
    let d = a.final_state().distance(b.final_state(), 0.5, 2.0, &fam).unwrap();
    outcome(
        converged(&a) && converged(&b) && d < 10.0 * tol,
        format!("both converged: {}, Y_(r-1,p) distance {d:.2e}", converged(&a) && converged(&b)),
    )
}

/// Spectral derivative of a periodic sample on `[0, 2π)`.
fn derivative_1d(f: &[f64], planner: &mut FftPlanner<f64>) -> Vec<f64> {
    let n = f.len();
    let mut c: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut c);
    for (m, v) in c.iter_mut().enumerate() {
        let k = if m < n / 2 {
            m as f64
        } else if m == n / 2 {
            0.0
        } else {
            m as f64 - n as f64
        };
        *v *= Complex64::new(0.0, k / n as f64);
    }
    planner.plan_fft_inverse(n).process(&mut c);
    c.into_iter().map(|z| z.re).collect()
}

/// Reduced model in `s = x₁ + x₂`: `∂_t P + u ∂_s P = 0`, `∂_t Q - u ∂_s Q = 0`,
/// `u = (P - Q - mean)/4`, integrated by RK4 on a Fourier collocation grid.
fn reduced_model(p0: Vec<f64>, q0: Vec<f64>, t: f64, steps: usize) -> (Vec<f64>, Vec<f64>) {
    let mut planner = FftPlanner::new();
    let mut rhs = |p: &[f64], q: &[f64]| {
        let n = p.len();
        let mean = p.iter().zip(q).map(|(a, b)| a - b).sum::<f64>() / n as f64;
        let (dp, dq) = (derivative_1d(p, &mut planner), derivative_1d(q, &mut planner));
        let u: Vec<f64> = p.iter().zip(q).map(|(a, b)| 0.25 * (a - b - mean)).collect();
        (
            (0..n).map(|i| -u[i] * dp[i]).collect::<Vec<_>>(),
            (0..n).map(|i| u[i] * dq[i]).collect::<Vec<_>>(),
        )
    };
    let axpy = |x: &[f64], a: f64, y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(u, v)| u + a * v).collect() };
    let h = t / steps as f64;
    let (mut p, mut q) = (p0, q0);
    for _ in 0..steps {
        let (k1p, k1q) = rhs(&p, &q);
        let (k2p, k2q) = rhs(&axpy(&p, h / 2.0, &k1p), &axpy(&q, h / 2.0, &k1q));
        let (k3p, k3q) = rhs(&axpy(&p, h / 2.0, &k2p), &axpy(&q, h / 2.0, &k2q));
        let (k4p, k4q) = rhs(&axpy(&p, h, &k3p), &axpy(&q, h, &k3q));
        for i in 0..p.len() {
            p[i] += h / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
            q[i] += h / 6.0 * (k1q[i] + 2.0 * k2q[i] + 2.0 * k3q[i] + k4q[i]);
        }
    }
    (p, q)
}

fn c9_shear_reduction() -> Outcome {
    let n = 256;
    let g = grid(n);
    let a = Preset::ShearWave.default_amplitude();
    let s = Preset::ShearWave.build(g, a, 0.0).unwrap();
    let cfg = SolverConfig {
        dt: 0.02,
        picard_tol: 1e-13,
        picard_max_iter: 30,
        ..SolverConfig::default()
    };
    let t = 0.1;
    let sol = solve(&s, t, &cfg).unwrap();
    // the preset restricted to the diagonal: ρ(x₁, x₂) = P(x₁ + x₂)
    let p0: Vec<f64> = (0..n).map(|i| s.rho_plus().at(i, 0)).collect();
    let q0: Vec<f64> = (0..n).map(|i| s.rho_minus().at(i, 0)).collect();
    let (p, q) = reduced_model(p0, q0, t, 2000);
    let end = sol.final_state();
    let mut err = 0.0f64;
    for i2 in 0..n {
        for i1 in 0..n {
            let k = (i1 + i2) % n;
            err = err
                .max((end.rho_plus().at(i1, i2) - p[k]).abs())
                .max((end.rho_minus().at(i1, i2) - q[k]).abs());
        }
    }
    outcome(err < 1e-6, format!("sup error against 1D oracle {err:.2e}"))
}

fn c10_positivity(c0: f64) -> Outcome {
    let g = grid(128);
    let s = Preset::MonotoneL.build(g, 0.3, 1.0).unwrap();
    let dx = s.rho_plus().partial(1).sup_norm().max(s.rho_minus().partial(1).sup_norm());
    let fam = build_dyadic_family(g);
    let y0 = disloc2d::norms::y_norm(&s, 1.5, 2.0, &fam).unwrap();
    let t1 = existence_time(y0, c0).unwrap();
    let cfg = SolverConfig {
        dt: 0.25,
        picard_tol: 1e-10,
        picard_max_iter: 30,
        c0_est: c0,
        ..SolverConfig::default()
    };
    let sol = solve(&s, t1, &cfg).unwrap();
    let worst = sol
        .trajectory
        .iter()
        .map(|st| {
            let (a, b) = st.min_dx1();
            a.min(b)
        })
        .fold(f64::INFINITY, f64::min);
    outcome(
        dx <= 0.5 && worst >= -1e-6,
        format!("|∂₁ρ̄₀| ≤ {dx:.3}, min ∂₁ρ^± = {worst:.4} up to T = {t1:.2}"),
    )
}

fn c11_suite() -> Outcome {
    let start = Instant::now();
    let reports = run_default_suite(&SuiteConfig {
        n: 256,
        ..SuiteConfig::default()
    })
    .unwrap();
    let elapsed = start.elapsed();
    print!("{}", summary(&reports));
    let wanted = ["riesz", "log_sobolev", "bernstein", "product"];
    let ok = wanted
        .iter()
        .all(|w| reports.iter().any(|r| r.name == *w && r.pass))
        && reports.iter().all(|r| r.pass)
        && elapsed < Duration::from_secs(600);
    outcome(ok, format!("{} reports at n = 256 in {elapsed:.1?}", reports.len()))
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut record = |id, name, o: Outcome| {
        println!("[{}] {id:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };
    record(1, "partition of unity", c1_partition_of_unity());
    record(2, "Bony identity", c2_bony_identity());
    record(3, "velocity exactness", c3_velocity_exactness());
    record(4, "closed-form times", c4_closed_forms());
    record(5, "commutator decay", c5_commutator());
    let cal = calibrated_runs();
    record(6, "a priori estimate", c6_apriori(&cal));
    record(7, "Picard contraction", c7_contraction(&cal));
    record(8, "uniqueness surrogate", c8_uniqueness());
    record(9, "1D reduction", c9_shear_reduction());
    record(10, "positivity", c10_positivity(cal.c0));
    record(11, "inequality suites", c11_suite());
    let failed: Vec<_> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
