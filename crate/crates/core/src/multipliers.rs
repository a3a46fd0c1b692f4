//! Fourier multipliers, Riesz transforms, and the dislocation velocity map.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral_core::{inverse_complex, Grid, ScalarField2D, HERMITIAN_TOLERANCE};

type SymbolFn = dyn Fn(f64, f64) -> Complex64 + Send + Sync;

/// A function of frequency `(ξ₁, ξ₂)` with an explicit value at `ξ = 0`.
#[derive(Clone)]
pub struct MultiplierSymbol {
    symbol: Arc<SymbolFn>,
    homogeneity_degree: f64,
    zero_frequency_value: Complex64,
}

impl fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSymbol")
            .field("homogeneity_degree", &self.homogeneity_degree)
            .field("zero_frequency_value", &self.zero_frequency_value)
            .finish_non_exhaustive()
    }
}

impl MultiplierSymbol {
    pub fn new(
        homogeneity_degree: f64,
        zero_frequency_value: Complex64,
        symbol: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            symbol: Arc::new(symbol),
            homogeneity_degree,
            zero_frequency_value,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(0.0, Complex64::new(c, 0.0), move |_, _| Complex64::new(c, 0.0))
    }

    /// `-i ξ_k / |ξ|`, zero at the origin.
    pub fn riesz(axis: usize) -> Self {
        assert!(axis == 1 || axis == 2, "axis must be 1 or 2");
        Self::new(0.0, Complex64::default(), move |xi1, xi2| {
            let xi = if axis == 1 { xi1 } else { xi2 };
            Complex64::new(0.0, -xi / xi1.hypot(xi2))
        })
    }

    /// `ξ₁² ξ₂² / |ξ|⁴`, the symbol of `R₁²R₂²`.
    pub fn riesz_squared_product() -> Self {
        Self::new(0.0, Complex64::default(), |xi1, xi2| {
            let r2 = xi1 * xi1 + xi2 * xi2;
            Complex64::new(xi1 * xi1 * xi2 * xi2 / (r2 * r2), 0.0)
        })
    }

    pub fn homogeneity_degree(&self) -> f64 {
        self.homogeneity_degree
    }

    pub fn zero_frequency_value(&self) -> Complex64 {
        self.zero_frequency_value
    }

    pub fn eval(&self, xi1: f64, xi2: f64) -> Complex64 {
        if xi1 == 0.0 && xi2 == 0.0 {
            self.zero_frequency_value
        } else {
            (self.symbol)(xi1, xi2)
        }
    }

    /// Value used at FFT indices `(m1, m2)`. A Nyquist index stands for
    /// both `±πn/D`, so the symbol is averaged over that sign flip.
    fn eval_on_lattice(&self, grid: &Grid, m1: usize, m2: usize) -> Complex64 {
        let (xi1, xi2) = (grid.frequency(m1), grid.frequency(m2));
        match (grid.is_nyquist(m1), grid.is_nyquist(m2)) {
            (false, false) => self.eval(xi1, xi2),
            (true, false) => 0.5 * (self.eval(xi1, xi2) + self.eval(-xi1, xi2)),
            (false, true) => 0.5 * (self.eval(xi1, xi2) + self.eval(xi1, -xi2)),
            (true, true) => {
                0.25 * (self.eval(xi1, xi2)
                    + self.eval(-xi1, xi2)
                    + self.eval(xi1, -xi2)
                    + self.eval(-xi1, -xi2))
            }
        }
    }
}

/// Output of a multiplier: real when the result passes the Hermitian test,
/// otherwise the full complex pair.
#[derive(Debug, Clone)]
pub enum MultiplierOutput {
    Real(ScalarField2D),
    Complex {
        re: ScalarField2D,
        im: ScalarField2D,
        residue: f64,
    },
}

impl MultiplierOutput {
    pub fn is_real(&self) -> bool {
        matches!(self, MultiplierOutput::Real(_))
    }

    pub fn into_real(self) -> Result<ScalarField2D> {
        match self {
            MultiplierOutput::Real(f) => Ok(f),
            MultiplierOutput::Complex { residue, .. } => Err(Error::NonHermitianSpectrum { residue }),
        }
    }
}

/// Pointwise spectral multiplication followed by the inverse transform.
pub fn apply_multiplier(f: &ScalarField2D, sym: &MultiplierSymbol) -> MultiplierOutput {
    let grid = *f.grid();
    let n = grid.n();
    let spec = f.spectrum();
    let mut coeffs = Vec::with_capacity(spec.len());
    for m2 in 0..n {
        for m1 in 0..n {
            coeffs.push(spec[m2 * n + m1] * sym.eval_on_lattice(&grid, m1, m2));
        }
    }
    let out = inverse_complex(&coeffs, n);
    let scale = out.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let residue = out.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let re: Vec<f64> = out.iter().map(|z| z.re).collect();
    if scale == 0.0 || residue <= HERMITIAN_TOLERANCE * scale {
        // the spectrum is exact up to the discarded imaginary residue
        return MultiplierOutput::Real(
            ScalarField2D::from_values(grid, re).expect("sizes match"),
        );
    }
    let im = out.iter().map(|z| z.im).collect();
    MultiplierOutput::Complex {
        re: ScalarField2D::from_values(grid, re).expect("sizes match"),
        im: ScalarField2D::from_values(grid, im).expect("sizes match"),
        residue: residue / scale,
    }
}

/// Riesz transform `R_k` (`k` = 1 or 2) with symbol `-iξ_k/|ξ|`.
pub fn riesz(f: &ScalarField2D, k: usize) -> Result<ScalarField2D> {
    if k != 1 && k != 2 {
        return Err(Error::InvalidArgument(format!("Riesz axis must be 1 or 2, got {k}")));
    }
    apply_multiplier(f, &MultiplierSymbol::riesz(k)).into_real()
}

/// Velocity `u = R₁²R₂²(ρ⁺ - ρ⁻)`.
pub fn velocity_from_densities(
    rho_plus: &ScalarField2D,
    rho_minus: &ScalarField2D,
) -> Result<ScalarField2D> {
    let diff = rho_plus.zip_with(rho_minus, |a, b| a - b)?;
    velocity_from_difference(&diff)
}

/// `R₁²R₂²` applied to a precomputed density difference.
pub fn velocity_from_difference(diff: &ScalarField2D) -> Result<ScalarField2D> {
    apply_multiplier(diff, &MultiplierSymbol::riesz_squared_product()).into_real()
}
