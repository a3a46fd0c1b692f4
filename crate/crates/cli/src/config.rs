//! Run configuration: flat `key = value` lines grouped by `[section]`.
//!
//! ```text
//! [grid]      n, period
//! [run]       r, p, seed, output
//! [simulate]  L, T, dt, picard_tol, picard_max_iter, C0, C1, substeps,
//!             snapshot_stride, preset, amplitude, rho_plus, rho_minus
//! [verify]    family_size, resolutions, eps, sim_time
//! [norms]     fields
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use disloc2d::picard_solver::{Preset, SolverConfig};
use disloc2d::spectral_core::Grid;
use ini::{Ini, Properties};

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Preset { preset: Preset, amplitude: f64 },
    Files { rho_plus: PathBuf, rho_minus: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateConfig {
    pub slope_l: f64,
    pub t_final: f64,
    pub snapshot_stride: usize,
    pub solver: SolverConfig,
    pub initial: InitialData,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub family_size: usize,
    pub resolutions: Vec<usize>,
    pub eps: f64,
    pub sim_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub r: f64,
    pub p: f64,
    pub seed: u64,
    pub output: PathBuf,
    pub simulate: SimulateConfig,
    pub verify: VerifyConfig,
    pub norm_fields: Vec<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Read(String),
    #[error("[{section}] {key}: {message}")]
    Value {
        section: String,
        key: String,
        message: String,
    },
    #[error("unknown section [{0}]")]
    UnknownSection(String),
    #[error("unknown key '{key}' in [{section}]")]
    UnknownKey { section: String, key: String },
    #[error("{0}")]
    Invalid(String),
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("grid", &["n", "period"]),
    ("run", &["r", "p", "seed", "output"]),
    (
        "simulate",
        &[
            "L",
            "T",
            "dt",
            "picard_tol",
            "picard_max_iter",
            "C0",
            "C1",
            "substeps",
            "snapshot_stride",
            "preset",
            "amplitude",
            "rho_plus",
            "rho_minus",
        ],
    ),
    ("verify", &["family_size", "resolutions", "eps", "sim_time"]),
    ("norms", &["fields"]),
];

struct Reader<'a> {
    ini: &'a Ini,
    base: &'a Path,
}

impl Reader<'_> {
    fn props(&self, section: &str) -> Option<&Properties> {
        self.ini.section(Some(section))
    }

    fn raw(&self, section: &str, key: &str) -> Option<&str> {
        self.props(section).and_then(|p| p.get(key)).map(str::trim)
    }

    fn value<T: FromStr>(&self, section: &str, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(section, key) {
            None => Ok(default),
            Some(s) => s.parse().map_err(|e: T::Err| ConfigError::Value {
                section: section.into(),
                key: key.into(),
                message: format!("cannot parse '{s}': {e}"),
            }),
        }
    }

    fn path(&self, section: &str, key: &str) -> Option<PathBuf> {
        self.raw(section, key).map(|s| self.base.join(s))
    }

    fn list<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        let Some(s) = self.raw(section, key) else {
            return Ok(None);
        };
        s.split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| {
                x.parse().map_err(|e: T::Err| ConfigError::Value {
                    section: section.into(),
                    key: key.into(),
                    message: format!("cannot parse '{x}': {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

fn check_known(ini: &Ini) -> Result<(), ConfigError> {
    for (section, props) in ini.iter() {
        let Some(name) = section else {
            if let Some((key, _)) = props.iter().next() {
                return Err(ConfigError::UnknownKey {
                    section: String::new(),
                    key: key.into(),
                });
            }
            continue;
        };
        let Some((_, keys)) = SECTIONS.iter().find(|(s, _)| *s == name) else {
            return Err(ConfigError::UnknownSection(name.into()));
        };
        for (key, _) in props.iter() {
            if !keys.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    section: name.into(),
                    key: key.into(),
                });
            }
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let ini = Ini::load_from_str(text).map_err(|e| ConfigError::Read(e.to_string()))?;
        check_known(&ini)?;
        let rd = Reader { ini: &ini, base };

        let n = rd.value("grid", "n", 128usize)?;
        let period = rd.value("grid", "period", std::f64::consts::TAU)?;
        let grid = Grid::new(n, period).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let r = rd.value("run", "r", 1.5)?;
        let p = rd.value("run", "p", 2.0)?;
        let seed = rd.value("run", "seed", 1u64)?;
        let output = rd.path("run", "output").unwrap_or_else(|| base.join("output"));

        let solver = SolverConfig {
            r,
            p,
            dt: rd.value("simulate", "dt", 0.25)?,
            picard_tol: rd.value("simulate", "picard_tol", 1e-10)?,
            picard_max_iter: rd.value("simulate", "picard_max_iter", 16usize)?,
            c0_est: rd.value("simulate", "C0", 0.1)?,
            c1_est: rd.value("simulate", "C1", 0.1)?,
            substeps: rd.value("simulate", "substeps", 1usize)?,
        };
        solver.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;

        let initial = match (rd.path("simulate", "rho_plus"), rd.path("simulate", "rho_minus")) {
            (Some(rho_plus), Some(rho_minus)) => {
                if rd.raw("simulate", "preset").is_some() {
                    return Err(ConfigError::Invalid("give either a preset or field files, not both".into()));
                }
                InitialData::Files { rho_plus, rho_minus }
            }
            (None, None) => {
                let preset: Preset = rd
                    .raw("simulate", "preset")
                    .unwrap_or("bump-pair")
                    .parse()
                    .map_err(|e: disloc2d::Error| ConfigError::Value {
                        section: "simulate".into(),
                        key: "preset".into(),
                        message: e.to_string(),
                    })?;
                let amplitude = rd.value("simulate", "amplitude", preset.default_amplitude())?;
                InitialData::Preset { preset, amplitude }
            }
            _ => return Err(ConfigError::Invalid("rho_plus and rho_minus must be given together".into())),
        };
        let default_l = match &initial {
            InitialData::Preset { preset: Preset::MonotoneL, .. } => 1.0,
            _ => 0.0,
        };
        let simulate = SimulateConfig {
            slope_l: rd.value("simulate", "L", default_l)?,
            t_final: rd.value("simulate", "T", 1.0)?,
            snapshot_stride: rd.value("simulate", "snapshot_stride", 1usize)?,
            solver,
            initial,
        };
        if !(simulate.t_final > 0.0) || !simulate.t_final.is_finite() {
            return Err(ConfigError::Invalid(format!("T must be positive, got {}", simulate.t_final)));
        }
        if simulate.snapshot_stride == 0 || !simulate.slope_l.is_finite() {
            return Err(ConfigError::Invalid("snapshot_stride must be ≥ 1 and L finite".into()));
        }

        let resolutions = rd.list("verify", "resolutions")?.unwrap_or_else(|| vec![n]);
        let verify = VerifyConfig {
            family_size: rd.value("verify", "family_size", 5usize)?,
            resolutions,
            eps: rd.value("verify", "eps", 0.5)?,
            sim_time: rd.value("verify", "sim_time", 2.0)?,
        };
        verify.finest()?;
        if verify.family_size < 2 || !(verify.eps > 0.0) || !(verify.sim_time > 0.0) {
            return Err(ConfigError::Invalid("verify needs family_size ≥ 2, eps > 0, sim_time > 0".into()));
        }

        let norm_fields = rd
            .raw("norms", "fields")
            .map(|s| s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(|x| base.join(x)).collect())
            .unwrap_or_default();

        Ok(Self {
            grid,
            r,
            p,
            seed,
            output,
            simulate,
            verify,
            norm_fields,
        })
    }
}

impl VerifyConfig {
    /// Finest resolution; drifts are measured against half of it, so every
    /// listed resolution must be that one or its half.
    pub fn finest(&self) -> Result<usize, ConfigError> {
        let n = *self
            .resolutions
            .iter()
            .max()
            .ok_or_else(|| ConfigError::Invalid("resolutions list is empty".into()))?;
        if let Some(bad) = self.resolutions.iter().find(|&&m| m != n && 2 * m != n) {
            return Err(ConfigError::Invalid(format!(
                "resolution {bad} is neither the finest ({n}) nor its half"
            )));
        }
        Grid::standard(n).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if n < 16 {
            return Err(ConfigError::Invalid("verify needs a finest resolution of at least 16".into()));
        }
        Ok(n)
    }
}
