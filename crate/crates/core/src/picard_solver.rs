//! Successive-approximation solver for the coupled transport system
//! `∂ρ^±/∂t ± u ∂ρ^±/∂x₁ = 0`, `u = R₁²R₂²(ρ⁺ - ρ⁻)`, with an optional
//! uniform background slope `L x₁` on both densities.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::littlewood_paley::{build_dyadic_family, DyadicFamily};
use crate::multipliers::velocity_from_densities;
use crate::norms::{holder_zygmund_norm, lp_norm, pair_norm, y_norm};
use crate::spectral_core::{Grid, ScalarField2D, VectorField2D};
use crate::transport::{advect, trace_characteristics};

/// Densities at one instant. With `slope_l ≠ 0` the stored fields are the
/// periodic remainders and the full densities are `ρ̄^± + L x₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    rho_plus: ScalarField2D,
    rho_minus: ScalarField2D,
    slope_l: f64,
    time: f64,
}

impl DensityState {
    pub fn new(rho_plus: ScalarField2D, rho_minus: ScalarField2D, slope_l: f64, time: f64) -> Result<Self> {
        rho_plus.check_same_grid(&rho_minus)?;
        if !slope_l.is_finite() || !time.is_finite() {
            return Err(Error::InvalidArgument("slope and time must be finite".into()));
        }
        if !rho_plus.is_finite() || !rho_minus.is_finite() {
            return Err(Error::NonFiniteField("density"));
        }
        Ok(Self {
            rho_plus,
            rho_minus,
            slope_l,
            time,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.rho_plus.grid()
    }

    pub fn rho_plus(&self) -> &ScalarField2D {
        &self.rho_plus
    }

    pub fn rho_minus(&self) -> &ScalarField2D {
        &self.rho_minus
    }

    pub fn slope_l(&self) -> f64 {
        self.slope_l
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    /// `u = R₁²R₂²(ρ̄⁺ - ρ̄⁻)`; the slopes cancel in the difference.
    pub fn velocity(&self) -> Result<ScalarField2D> {
        velocity_from_densities(&self.rho_plus, &self.rho_minus)
    }

    /// Grid minima of `∂ρ^±/∂x₁`, slope included.
    pub fn min_dx1(&self) -> (f64, f64) {
        (
            self.rho_plus.partial(1).min() + self.slope_l,
            self.rho_minus.partial(1).min() + self.slope_l,
        )
    }

    /// `ρ⁺ = ρ⁻` exactly, so the velocity vanishes identically.
    pub fn is_degenerate(&self) -> bool {
        self.rho_plus.values() == self.rho_minus.values()
    }

    /// The same data on a finer or coarser grid (spectral resampling).
    pub fn resample(&self, target: Grid) -> Self {
        Self {
            rho_plus: self.rho_plus.resample_spectral(target),
            rho_minus: self.rho_minus.resample_spectral(target),
            slope_l: self.slope_l,
            time: self.time,
        }
    }

    /// `‖ρ_a - ρ_b‖_{s,p}` for two states on one grid.
    pub fn distance(&self, other: &Self, s: f64, p: f64, fam: &DyadicFamily) -> Result<f64> {
        let dp = self.rho_plus.zip_with(&other.rho_plus, |a, b| a - b)?;
        let dm = self.rho_minus.zip_with(&other.rho_minus, |a, b| a - b)?;
        pair_norm(&dp, &dm, s, p, fam)
    }
}

/// Solver parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub r: f64,
    pub p: f64,
    pub dt: f64,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    pub c0_est: f64,
    pub c1_est: f64,
    /// RK4 substeps per outer step when tracing characteristics.
    pub substeps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            r: 1.5,
            p: 2.0,
            dt: 0.01,
            picard_tol: 1e-9,
            picard_max_iter: 16,
            c0_est: 1.0,
            c1_est: 1.0,
            substeps: 1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 1.0) || !self.r.is_finite() {
            return Err(Error::InvalidArgument(format!("r must exceed 1, got {}", self.r)));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(Error::InvalidArgument(format!("p must lie in (1, ∞), got {}", self.p)));
        }
        for (name, v) in [
            ("dt", self.dt),
            ("picard_tol", self.picard_tol),
            ("C0", self.c0_est),
            ("C1", self.c1_est),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if self.picard_max_iter < 1 || self.substeps < 1 {
            return Err(Error::InvalidArgument("picard_max_iter and substeps must be at least 1".into()));
        }
        Ok(())
    }
}

/// `ln 2 / (2 C₀ ‖ρ₀‖_{r,p})`: the window on which the iterates stay below
/// `M = 2‖ρ₀‖_{r,p}`.
pub fn existence_time(y_norm0: f64, c0: f64) -> Result<f64> {
    if !(y_norm0 > 0.0) || !(c0 > 0.0) {
        return Err(Error::NonPositiveInput(format!("existence_time({y_norm0}, {c0})")));
    }
    Ok(std::f64::consts::LN_2 / (2.0 * c0 * y_norm0))
}

/// `1 / (4 C₁ M)`: step length on which the Picard map contracts.
pub fn contraction_window(m: f64, c1: f64) -> Result<f64> {
    if !(m > 0.0) || !(c1 > 0.0) {
        return Err(Error::NonPositiveInput(format!("contraction_window({m}, {c1})")));
    }
    Ok(1.0 / (4.0 * c1 * m))
}

/// Velocity of an iterate over a step: `u(start)` at `t0` blended linearly
/// into `u(end)` at `t1`.
struct FrozenVelocity {
    t0: f64,
    t1: f64,
    start: ScalarField2D,
    end: Option<ScalarField2D>,
}

impl FrozenVelocity {
    fn at(&self, t: f64) -> Result<ScalarField2D> {
        let slack = 1e-12 * (self.t1 - self.t0).abs().max(1.0);
        if t < self.t0 - slack || t > self.t1 + slack {
            return Err(Error::VelocityUnavailable(t));
        }
        match &self.end {
            None => Ok(self.start.clone()),
            Some(end) => {
                let theta = ((t - self.t0) / (self.t1 - self.t0)).clamp(0.0, 1.0);
                self.start.zip_with(end, |a, b| (1.0 - theta) * a + theta * b)
            }
        }
    }
}

/// One Picard iterate over `[start.time, start.time + dt]`: transports the
/// step-start state along `(±u, 0)`, where `u` is generated by `frozen_from`.
/// An iterate stamped at the step start freezes `u` for the whole step;
/// one stamped at the step end gives `u` linear between the two.
pub fn picard_step(
    frozen_from: &DensityState,
    start: &DensityState,
    dt: f64,
    cfg: &SolverConfig,
) -> Result<DensityState> {
    frozen_from.rho_plus.check_same_grid(&start.rho_plus)?;
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let (t0, t1) = (start.time, start.time + dt);
    let u_start = start.velocity()?;
    let end = if frozen_from.time == start.time {
        None
    } else {
        Some(frozen_from.velocity()?)
    };
    let u = FrozenVelocity {
        t0,
        t1,
        start: u_start,
        end,
    };
    let grid = *start.grid();
    let mut out = Vec::with_capacity(2);
    for (sign, rho) in [(1.0, &start.rho_plus), (-1.0, &start.rho_minus)] {
        let velocity = |t: f64| -> Result<VectorField2D> { Ok(VectorField2D::along_x1(u.at(t)?.scale(sign))) };
        let flow = trace_characteristics(&velocity, grid, t0, t1, cfg.substeps)?;
        let next = if start.slope_l != 0.0 {
            let l = start.slope_l;
            let source = |t: f64| -> Result<ScalarField2D> { Ok(u.at(t)?.scale(-sign * l)) };
            advect(rho, &flow, Some(&source))?
        } else {
            advect(rho, &flow, None)?
        };
        out.push(next);
    }
    let rho_minus = out.pop().expect("two components");
    let rho_plus = out.pop().expect("two components");
    if !rho_plus.is_finite() || !rho_minus.is_finite() {
        return Err(Error::NonFiniteField("Picard iterate"));
    }
    Ok(DensityState {
        rho_plus,
        rho_minus,
        slope_l: start.slope_l,
        time: t1,
    })
}

/// Diagnostics for one stored time.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub time: f64,
    pub y_norm: f64,
    pub cr_plus: f64,
    pub cr_minus: f64,
    pub lp_plus: f64,
    pub lp_minus: f64,
    pub u_cr: f64,
    pub u_lp: f64,
    /// `‖ρ^{n+1} - ρ^n‖_{r-1,p}` for each Picard iterate of the step; empty
    /// for the initial record.
    pub residuals: Vec<f64>,
    /// `sup_t ‖ρ^n(t)‖_{r,p}` over the iterates of the step.
    pub iterate_y_max: f64,
    pub min_dx1_plus: f64,
    pub min_dx1_minus: f64,
}

impl StepRecord {
    fn measure(state: &DensityState, r: f64, p: f64, fam: &DyadicFamily) -> Result<Self> {
        let cr_plus = holder_zygmund_norm(&state.rho_plus, r, fam)?.value;
        let cr_minus = holder_zygmund_norm(&state.rho_minus, r, fam)?.value;
        let lp_plus = lp_norm(&state.rho_plus, p)?;
        let lp_minus = lp_norm(&state.rho_minus, p)?;
        let u = state.velocity()?;
        let (min_dx1_plus, min_dx1_minus) = state.min_dx1();
        let y = cr_plus.max(cr_minus) + lp_plus.max(lp_minus);
        Ok(Self {
            time: state.time,
            y_norm: y,
            cr_plus,
            cr_minus,
            lp_plus,
            lp_minus,
            u_cr: holder_zygmund_norm(&u, r, fam)?.value,
            u_lp: lp_norm(&u, p)?,
            residuals: Vec::new(),
            iterate_y_max: y,
            min_dx1_plus,
            min_dx1_minus,
        })
    }

    pub fn picard_iters(&self) -> usize {
        self.residuals.len()
    }

    pub fn last_residual(&self) -> Option<f64> {
        self.residuals.last().copied()
    }

    /// `‖u‖_{C^r} + ‖u‖_{L^p}`.
    pub fn u_norm(&self) -> f64 {
        self.u_cr + self.u_lp
    }
}

/// Per-step diagnostics of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub r: f64,
    pub p: f64,
    pub requested_dt: f64,
    pub dt: f64,
    pub dt_capped: bool,
    pub existence_time: f64,
    pub m_bound: f64,
    pub records: Vec<StepRecord>,
}

impl IterationTrace {
    pub const CSV_HEADER: &'static str = "t,y_norm,cr_plus,cr_minus,lp_plus,lp_minus,u_cr,u_lp,picard_iters,last_residual,min_dx1_plus,min_dx1_minus";

    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    /// CSV with one comment line describing the step policy.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# dt={:e} requested_dt={:e} dt_capped={} existence_time={:e} M={:e}",
            self.dt, self.requested_dt, self.dt_capped, self.existence_time, self.m_bound
        );
        s.push_str(Self::CSV_HEADER);
        s.push('\n');
        for rec in &self.records {
            let last = rec.last_residual().map_or_else(String::new, |v| format!("{v:e}"));
            let _ = writeln!(
                s,
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{},{:e},{:e}",
                rec.time,
                rec.y_norm,
                rec.cr_plus,
                rec.cr_minus,
                rec.lp_plus,
                rec.lp_minus,
                rec.u_cr,
                rec.u_lp,
                rec.picard_iters(),
                last,
                rec.min_dx1_plus,
                rec.min_dx1_minus
            );
        }
        s
    }
}

/// Blowup tolerance on `M` (discretization slack).
pub const BLOWUP_SLACK: f64 = 1.05;

/// Outcome of [`solve`].
#[derive(Debug, Clone)]
pub struct Solution {
    pub trajectory: Vec<DensityState>,
    pub trace: IterationTrace,
}

impl Solution {
    pub fn final_state(&self) -> &DensityState {
        self.trajectory.last().expect("trajectory holds the initial state")
    }
}

/// Integrates to time `t_final` from `initial` by outer steps of
/// `min(cfg.dt, contraction_window)`, running the Picard iteration in each.
pub fn solve(initial: &DensityState, t_final: f64, cfg: &SolverConfig) -> Result<Solution> {
    cfg.validate()?;
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidArgument(format!("T must be positive, got {t_final}")));
    }
    let fam = build_dyadic_family(*initial.grid());
    let first = StepRecord::measure(initial, cfg.r, cfg.p, &fam)?;
    let y0 = first.y_norm;
    let m_bound = 2.0 * y0;
    let (t_exist, window) = if y0 > 0.0 {
        (existence_time(y0, cfg.c0_est)?, contraction_window(m_bound, cfg.c1_est)?)
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    let capped = window < cfg.dt;
    let dt_target = cfg.dt.min(window);
    let steps = ((t_final / dt_target).ceil() as usize).max(1);
    let dt = t_final / steps as f64;
    let mut trace = IterationTrace {
        r: cfg.r,
        p: cfg.p,
        requested_dt: cfg.dt,
        dt,
        dt_capped: capped,
        existence_time: t_exist,
        m_bound,
        records: vec![first],
    };
    let t_start = initial.time;
    let mut trajectory = vec![initial.clone()];

    if initial.is_degenerate() {
        // u ≡ 0 for all time: every later state equals the initial one
        for k in 1..=steps {
            let state = initial.clone().with_time(t_start + k as f64 * dt);
            let mut rec = trace.records[0].clone();
            rec.time = state.time;
            rec.residuals = vec![0.0];
            trace.records.push(rec);
            trajectory.push(state);
        }
        return Ok(Solution { trajectory, trace });
    }

    let sub = cfg.r - 1.0;
    for k in 1..=steps {
        let start = trajectory.last().expect("non-empty");
        let mut prev = start.clone();
        let mut residuals = Vec::new();
        let mut y_max = y_norm(start, cfg.r, cfg.p, &fam)?;
        let mut converged = false;
        for _ in 0..cfg.picard_max_iter {
            let next = picard_step(&prev, start, dt, cfg)?;
            let mut prev_end = prev.clone();
            prev_end.time = next.time;
            let res = next.distance(&prev_end, sub, cfg.p, &fam)?;
            y_max = y_max.max(y_norm(&next, cfg.r, cfg.p, &fam)?);
            residuals.push(res);
            prev = next;
            if res < cfg.picard_tol {
                converged = true;
                break;
            }
        }
        let t_now = t_start + k as f64 * dt;
        if !converged && residuals.len() >= 2 {
            let n = residuals.len();
            if residuals[n - 1] >= residuals[n - 2] {
                return Err(Error::PicardDivergence {
                    time: t_now,
                    residuals,
                });
            }
        }
        let state = prev.with_time(t_now);
        let mut rec = StepRecord::measure(&state, cfg.r, cfg.p, &fam)?;
        rec.residuals = residuals;
        rec.iterate_y_max = y_max;
        if rec.y_norm > BLOWUP_SLACK * m_bound && t_now - t_start <= t_exist {
            return Err(Error::BlowupSuspected {
                time: t_now,
                y_norm: rec.y_norm,
                bound: m_bound,
            });
        }
        trace.records.push(rec);
        trajectory.push(state);
    }
    Ok(Solution { trajectory, trace })
}

/// Named initial data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `ρ⁺ = ρ⁻`: zero velocity, constant trajectory.
    EqualDensities,
    /// Two offset periodic Gaussian-like bumps of opposite sign.
    BumpPair,
    /// Data depending on `x₁ + x₂` only, for which `u = (ρ⁺ - ρ⁻ - mean)/4`.
    ShearWave,
    /// Slope `L > 0` plus bumps with `|∂₁ρ̄| ≤ L/2`.
    MonotoneL,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "equal-densities" => Ok(Self::EqualDensities),
            "bump-pair" => Ok(Self::BumpPair),
            "shear-wave" => Ok(Self::ShearWave),
            "monotone-L" | "monotone-l" => Ok(Self::MonotoneL),
            other => Err(Error::InvalidArgument(format!("unknown preset '{other}'"))),
        }
    }
}

impl Preset {
    pub const ALL: [Preset; 4] = [Self::EqualDensities, Self::BumpPair, Self::ShearWave, Self::MonotoneL];

    pub fn name(self) -> &'static str {
        match self {
            Self::EqualDensities => "equal-densities",
            Self::BumpPair => "bump-pair",
            Self::ShearWave => "shear-wave",
            Self::MonotoneL => "monotone-L",
        }
    }

    pub fn default_amplitude(self) -> f64 {
        match self {
            Self::EqualDensities | Self::BumpPair => 0.5,
            Self::ShearWave => 0.1,
            Self::MonotoneL => 0.3,
        }
    }

    /// Builds the state. `slope_l` is used by `MonotoneL` only (must be
    /// positive there); the bump amplitude is scaled so `|∂₁ρ̄| ≤ L/2`.
    pub fn build(self, grid: Grid, amplitude: f64, slope_l: f64) -> Result<DensityState> {
        let d = grid.period();
        let w = std::f64::consts::TAU / d;
        // periodic Gaussian-like bump: exp(κ(cos(w(x-c)) - 1)) in each direction
        let bump = move |c1: f64, c2: f64, kappa: f64| {
            move |x1: f64, x2: f64| (kappa * ((w * (x1 - c1)).cos() + (w * (x2 - c2)).cos() - 2.0)).exp()
        };
        let (plus, minus, l) = match self {
            Self::EqualDensities => {
                let f = ScalarField2D::from_fn(grid, bump(0.5 * d, 0.5 * d, 3.0));
                let f = f.scale(amplitude);
                (f.clone(), f, 0.0)
            }
            Self::BumpPair => (
                ScalarField2D::from_fn(grid, bump(0.4 * d, 0.45 * d, 3.0)).scale(amplitude),
                ScalarField2D::from_fn(grid, bump(0.6 * d, 0.55 * d, 3.0)).scale(-amplitude),
                0.0,
            ),
            Self::ShearWave => (
                ScalarField2D::from_fn(grid, |x1, x2| {
                    let s = w * (x1 + x2);
                    amplitude * (s.sin() + 0.5 * (2.0 * s).cos())
                }),
                ScalarField2D::from_fn(grid, |x1, x2| {
                    let s = w * (x1 + x2);
                    amplitude * (-0.5 * s.sin() + 0.3 * s.cos())
                }),
                0.0,
            ),
            Self::MonotoneL => {
                if !(slope_l > 0.0) {
                    return Err(Error::InvalidArgument("monotone-L needs a positive slope".into()));
                }
                // max |∂₁ exp(3(cos x - 1))| ≈ 1.01·w, so this keeps |∂₁ρ̄| ≤ L/2
                let a = amplitude.min(0.49 * slope_l / w);
                (
                    ScalarField2D::from_fn(grid, bump(0.4 * d, 0.5 * d, 3.0)).scale(a),
                    ScalarField2D::from_fn(grid, bump(0.6 * d, 0.5 * d, 3.0)).scale(-a),
                    slope_l,
                )
            }
        };
        DensityState::new(plus, minus, l, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Grid {
        Grid::standard(n).unwrap()
    }

    #[test]
    fn closed_form_times() {
        assert!((existence_time(1.0, 1.0).unwrap() - std::f64::consts::LN_2 / 2.0).abs() < 1e-16);
        assert!((existence_time(2.0, 1.0).unwrap() - std::f64::consts::LN_2 / 4.0).abs() < 1e-16);
        let y0 = 0.7;
        let c0 = 1.3;
        let t1 = existence_time(y0, c0).unwrap();
        assert!(((c0 * t1 * 2.0 * y0).exp() - 2.0).abs() < 1e-14);
        assert_eq!(contraction_window(2.0, 1.0).unwrap(), 0.125);
        assert_eq!(contraction_window(1.0, 1.0).unwrap(), 0.25);
        assert!(matches!(existence_time(0.0, 1.0), Err(Error::NonPositiveInput(_))));
        assert!(matches!(contraction_window(1.0, -1.0), Err(Error::NonPositiveInput(_))));
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        for cfg in [
            SolverConfig { r: 1.0, ..Default::default() },
            SolverConfig { p: 1.0, ..Default::default() },
            SolverConfig { p: f64::INFINITY, ..Default::default() },
            SolverConfig { dt: 0.0, ..Default::default() },
            SolverConfig { picard_max_iter: 0, ..Default::default() },
        ] {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn equal_densities_are_a_fixed_point() {
        let s = Preset::EqualDensities.build(grid(32), 0.5, 0.0).unwrap();
        let next = picard_step(&s, &s, 0.1, &SolverConfig::default()).unwrap();
        assert_eq!(next.rho_plus(), s.rho_plus());
        assert_eq!(next.rho_minus(), s.rho_minus());
        let sol = solve(&s, 1.0, &SolverConfig::default()).unwrap();
        assert!(sol.trajectory.iter().all(|t| t.rho_plus() == s.rho_plus()));
        assert!((sol.final_state().time() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_profile_is_steady() {
        let g = grid(32);
        let s = DensityState::new(ScalarField2D::zeros(g), ScalarField2D::zeros(g), 2.0, 0.0).unwrap();
        let next = picard_step(&s, &s, 0.1, &SolverConfig::default()).unwrap();
        assert_eq!(next.rho_plus().sup_norm(), 0.0);
        assert_eq!(next.min_dx1(), (2.0, 2.0));
    }

    #[test]
    fn residuals_contract_for_small_data() {
        let s = Preset::BumpPair.build(grid(64), 0.5, 0.0).unwrap();
        let cfg = SolverConfig {
            dt: 0.05,
            picard_tol: 1e-11,
            ..Default::default()
        };
        let sol = solve(&s, 0.2, &cfg).unwrap();
        for rec in &sol.trace.records[1..] {
            assert!(!rec.residuals.is_empty());
            for w in rec.residuals.windows(2) {
                if w[0] > 1e-13 {
                    assert!(w[1] <= 0.5 * w[0], "{:?}", rec.residuals);
                }
            }
        }
    }

    #[test]
    fn trace_csv_layout() {
        let s = Preset::BumpPair.build(grid(32), 0.5, 0.0).unwrap();
        let cfg = SolverConfig {
            dt: 10.0,
            c1_est: 1.0,
            ..Default::default()
        };
        let sol = solve(&s, 0.1, &cfg).unwrap();
        assert!(sol.trace.dt_capped || sol.trace.dt <= 0.1);
        let csv = sol.trace.to_csv();
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with('#'));
        assert_eq!(lines.next().unwrap(), IterationTrace::CSV_HEADER);
        assert_eq!(lines.count(), sol.trace.records.len());
    }

    #[test]
    fn presets_parse_and_build() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            let s = p.build(grid(32), p.default_amplitude(), 1.0).unwrap();
            assert!(s.rho_plus().is_finite());
        }
        let m = Preset::MonotoneL.build(grid(64), 0.3, 1.0).unwrap();
        let (a, b) = m.min_dx1();
        assert!(a >= 0.5 && b >= 0.5);
        assert!("nope".parse::<Preset>().is_err());
        assert!(Preset::MonotoneL.build(grid(32), 0.3, 0.0).is_err());
    }
}
