use std::fs;
use std::path::Path;

use disloc2d::littlewood_paley::build_dyadic_family;
use disloc2d::norms::{norm_report, NormReport};
use disloc2d::picard_solver::{solve, DensityState};
use disloc2d::spectral_core::{load_snapshot, save_snapshot};
use disloc2d::verification::{calibration_reports, reports_to_csv, run_default_suite, summary, SuiteConfig};
use disloc2d::Error;

use crate::config::{InitialData, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_NUMERICAL: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_)
        | Error::MalformedSnapshot(_)
        | Error::InvalidGrid(_)
        | Error::GridMismatch
        | Error::InvalidArgument(_)
        | Error::PreconditionViolated(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn prepare_output(dir: &Path) -> Result<(), Error> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn initial_state(cfg: &RunConfig) -> Result<DensityState, Error> {
    match &cfg.simulate.initial {
        InitialData::Preset { preset, amplitude } => {
            let s = preset.build(cfg.grid, *amplitude, cfg.simulate.slope_l)?;
            if s.slope_l() == cfg.simulate.slope_l {
                Ok(s)
            } else {
                DensityState::new(s.rho_plus().clone(), s.rho_minus().clone(), cfg.simulate.slope_l, 0.0)
            }
        }
        InitialData::Files { rho_plus, rho_minus } => {
            let (plus, _) = load_snapshot(rho_plus)?;
            let (minus, _) = load_snapshot(rho_minus)?;
            if plus.grid() != &cfg.grid {
                return Err(Error::InvalidArgument(format!(
                    "field file grid n={} does not match [grid] n={}",
                    plus.grid().n(),
                    cfg.grid.n()
                )));
            }
            DensityState::new(plus, minus, cfg.simulate.slope_l, 0.0)
        }
    }
}

/// Snapshots every `snapshot_stride` steps (and the last) plus `trace.csv`.
pub fn simulate(cfg: &RunConfig) -> Result<u8, Error> {
    prepare_output(&cfg.output)?;
    let state = initial_state(cfg)?;
    let sol = solve(&state, cfg.simulate.t_final, &cfg.simulate.solver)?;
    let snaps = cfg.output.join("snapshots");
    fs::create_dir_all(&snaps)?;
    let last = sol.trajectory.len() - 1;
    for (k, s) in sol.trajectory.iter().enumerate() {
        if k % cfg.simulate.snapshot_stride == 0 || k == last {
            save_snapshot(snaps.join(format!("rho_plus_{k:05}.bin")), s.rho_plus(), &format!("rho_plus@t={:e}", s.time()))?;
            save_snapshot(snaps.join(format!("rho_minus_{k:05}.bin")), s.rho_minus(), &format!("rho_minus@t={:e}", s.time()))?;
        }
    }
    fs::write(cfg.output.join("trace.csv"), sol.trace.to_csv())?;
    let end = sol.final_state();
    println!(
        "simulated to t = {:.6} in {} steps of dt = {:.6}{}",
        end.time(),
        last,
        sol.trace.dt,
        if sol.trace.dt_capped { " (capped by contraction window)" } else { "" }
    );
    Ok(EXIT_OK)
}

fn suite_config(cfg: &RunConfig, n: usize) -> SuiteConfig {
    SuiteConfig {
        n,
        period: cfg.grid.period(),
        r: cfg.r,
        p: cfg.p,
        seed: cfg.seed,
        family_size: cfg.verify.family_size,
        eps: cfg.verify.eps,
        sim_time: cfg.verify.sim_time,
        solver: cfg.simulate.solver.clone(),
        ..SuiteConfig::default()
    }
}

/// `verify.csv` plus a summary on standard output.
pub fn verify(cfg: &RunConfig) -> Result<u8, Error> {
    prepare_output(&cfg.output)?;
    let n = cfg
        .verify
        .finest()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let reports = run_default_suite(&suite_config(cfg, n))?;
    fs::write(cfg.output.join("verify.csv"), reports_to_csv(&reports))?;
    print!("{}", summary(&reports));
    Ok(if reports.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_VERIFY })
}

/// `constants.txt` holding `C0=<v>` and `C1=<v>`.
pub fn calibrate(cfg: &RunConfig) -> Result<u8, Error> {
    prepare_output(&cfg.output)?;
    let (reports, (c0, c1)) = calibration_reports(&suite_config(cfg, cfg.grid.n()))?;
    fs::write(cfg.output.join("constants.txt"), format!("C0={c0}\nC1={c1}\n"))?;
    print!("{}", summary(&reports));
    println!("C0={c0}\nC1={c1}");
    Ok(EXIT_OK)
}

/// `norms.csv` with one row per field file.
pub fn norms(cfg: &RunConfig) -> Result<u8, Error> {
    if cfg.norm_fields.is_empty() {
        return Err(Error::InvalidArgument("[norms] fields is empty".into()));
    }
    prepare_output(&cfg.output)?;
    let mut csv = String::from(NormReport::CSV_HEADER);
    csv.push('\n');
    for path in &cfg.norm_fields {
        let (field, name) = load_snapshot(path)?;
        let fam = build_dyadic_family(*field.grid());
        let rep = norm_report(&field, cfg.r, cfg.p, &fam)?;
        csv.push_str(&rep.csv_row(&name));
        csv.push('\n');
    }
    fs::write(cfg.output.join("norms.csv"), csv)?;
    Ok(EXIT_OK)
}
