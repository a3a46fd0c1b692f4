use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use super::fft;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Relative imaginary residue above which an inverse transform is rejected.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Real samples on a periodic grid with a lazily cached spectrum.
#[derive(Debug, Clone)]
pub struct ScalarField2D {
    grid: Grid,
    values: Vec<f64>,
    spectral: OnceLock<Arc<Vec<Complex64>>>,
}

impl PartialEq for ScalarField2D {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.values == other.values
    }
}

impl ScalarField2D {
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            spectral: OnceLock::new(),
        })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
            spectral: OnceLock::new(),
        }
    }

    /// Samples `f(x1, x2)` at every grid point.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for i2 in 0..n {
            let x2 = grid.coordinate(i2);
            for i1 in 0..n {
                values.push(f(grid.coordinate(i1), x2));
            }
        }
        Self {
            grid,
            values,
            spectral: OnceLock::new(),
        }
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mutable samples; drops the cached spectrum.
    pub fn values_mut(&mut self) -> &mut [f64] {
        self.spectral.take();
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, i1: usize, i2: usize) -> f64 {
        self.values[self.grid.index(i1, i2)]
    }

    /// Normalized spectrum, computed on first use.
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectral
            .get_or_init(|| Arc::new(fft::forward_real(&self.values, self.grid.n())))
    }

    pub fn has_cached_spectrum(&self) -> bool {
        self.spectral.get().is_some()
    }

    pub fn check_same_grid(&self, other: &ScalarField2D) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
            spectral: OnceLock::new(),
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &ScalarField2D, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            spectral: OnceLock::new(),
        })
    }

    /// Aliased pointwise product of the samples.
    pub fn pointwise_mul(&self, other: &ScalarField2D) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// Multiplies the spectrum by a real mask stored in FFT layout.
    ///
    /// The mask must be even (`mask[-k] == mask[k]`) so the output is real;
    /// the imaginary round-off of the inverse transform is dropped.
    pub fn apply_real_mask(&self, mask: &[f64]) -> Self {
        debug_assert_eq!(mask.len(), self.grid.len());
        let coeffs: Vec<Complex64> = self
            .spectrum()
            .iter()
            .zip(mask)
            .map(|(&c, &m)| c * m)
            .collect();
        Self::from_spectrum_real_part(self.grid, coeffs)
    }

    /// Multiplies the spectrum by `symbol(m1, m2)` (FFT indices) and checks
    /// that the result is real.
    pub fn apply_symbol(&self, symbol: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let n = self.grid.n();
        let spec = self.spectrum();
        let mut coeffs = Vec::with_capacity(spec.len());
        for m2 in 0..n {
            for m1 in 0..n {
                coeffs.push(spec[m2 * n + m1] * symbol(m1, m2));
            }
        }
        inverse_transform(self.grid, &coeffs)
    }

    /// Spectral derivative `∂/∂x_alpha` (`alpha` is 1 or 2). The Nyquist
    /// line along the differentiated axis is dropped so the result is real.
    pub fn partial(&self, alpha: usize) -> Self {
        assert!(alpha == 1 || alpha == 2, "axis must be 1 or 2");
        let g = self.grid;
        let n = g.n();
        let spec = self.spectrum();
        let mut coeffs = vec![Complex64::default(); spec.len()];
        for m2 in 0..n {
            for m1 in 0..n {
                let m = if alpha == 1 { m1 } else { m2 };
                if g.is_nyquist(m) {
                    continue;
                }
                let xi = g.frequency(m);
                let idx = m2 * n + m1;
                coeffs[idx] = spec[idx] * Complex64::new(0.0, xi);
            }
        }
        Self::from_spectrum_real_part(g, coeffs)
    }

    /// `sup_x |∇f(x)|` (Euclidean norm of the gradient).
    pub fn gradient_sup_norm(&self) -> f64 {
        let d1 = self.partial(1);
        let d2 = self.partial(2);
        d1.values
            .iter()
            .zip(&d2.values)
            .fold(0.0, |m, (a, b)| m.max(a.hypot(*b)))
    }

    /// Builds a field from coefficients known to be Hermitian, keeping the
    /// real part of the inverse transform and caching the spectrum.
    pub(crate) fn from_spectrum_real_part(grid: Grid, coeffs: Vec<Complex64>) -> Self {
        let values = fft::inverse_complex(&coeffs, grid.n())
            .into_iter()
            .map(|z| z.re)
            .collect();
        let spectral = OnceLock::new();
        let _ = spectral.set(Arc::new(coeffs));
        Self {
            grid,
            values,
            spectral,
        }
    }

    /// Same cell at half the resolution by spectral truncation. Exact for
    /// fields whose spectrum lies strictly inside `|k| < n/4` per axis.
    pub fn restrict_to_half(&self) -> Result<Self> {
        let coarse = self
            .grid
            .coarsened()
            .ok_or_else(|| Error::InvalidGrid("grid too small to coarsen".into()))?;
        Ok(self.resample_spectral(coarse))
    }

    /// Re-synthesizes the field on another grid with the same period by
    /// copying all wavenumbers representable on both grids (Nyquist lines
    /// of either grid are dropped).
    pub fn resample_spectral(&self, target: Grid) -> Self {
        let src = self.grid;
        let spec = self.spectrum();
        let half = (src.n().min(target.n()) / 2) as i64;
        let mut coeffs = vec![Complex64::default(); target.len()];
        for k2 in (-half + 1)..half {
            for k1 in (-half + 1)..half {
                let s = src.index(src.index_of_wavenumber(k1), src.index_of_wavenumber(k2));
                let t = target.index(
                    target.index_of_wavenumber(k1),
                    target.index_of_wavenumber(k2),
                );
                coeffs[t] = spec[s];
            }
        }
        Self::from_spectrum_real_part(target, coeffs)
    }
}

/// Normalized forward transform; `A e^{ik·x}` maps to coefficient `A` at `k`.
pub fn forward_transform(f: &ScalarField2D) -> Vec<Complex64> {
    f.spectrum().to_vec()
}

/// Inverse transform to a real field.
///
/// The imaginary residue relative to the largest output magnitude is
/// discarded when below [`HERMITIAN_TOLERANCE`] and rejected otherwise.
pub fn inverse_transform(grid: Grid, coeffs: &[Complex64]) -> Result<ScalarField2D> {
    if coeffs.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} coefficients, got {}",
            grid.len(),
            coeffs.len()
        )));
    }
    let out = fft::inverse_complex(coeffs, grid.n());
    let scale = out.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let residue = out.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    if scale > 0.0 && residue > HERMITIAN_TOLERANCE * scale {
        return Err(Error::NonHermitianSpectrum {
            residue: residue / scale,
        });
    }
    let spectral = OnceLock::new();
    let _ = spectral.set(Arc::new(coeffs.to_vec()));
    Ok(ScalarField2D {
        grid,
        values: out.into_iter().map(|z| z.re).collect(),
        spectral,
    })
}

impl Add for &ScalarField2D {
    type Output = ScalarField2D;

    fn add(self, rhs: &ScalarField2D) -> ScalarField2D {
        self.zip_with(rhs, |a, b| a + b).expect("grid mismatch in add")
    }
}

impl Sub for &ScalarField2D {
    type Output = ScalarField2D;

    fn sub(self, rhs: &ScalarField2D) -> ScalarField2D {
        self.zip_with(rhs, |a, b| a - b).expect("grid mismatch in sub")
    }
}

impl Mul<f64> for &ScalarField2D {
    type Output = ScalarField2D;

    fn mul(self, rhs: f64) -> ScalarField2D {
        self.scale(rhs)
    }
}

impl Neg for &ScalarField2D {
    type Output = ScalarField2D;

    fn neg(self) -> ScalarField2D {
        self.scale(-1.0)
    }
}

/// Velocity-like pair `(v¹, v²)` on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2D {
    v1: ScalarField2D,
    v2: ScalarField2D,
}

impl VectorField2D {
    pub fn new(v1: ScalarField2D, v2: ScalarField2D) -> Result<Self> {
        v1.check_same_grid(&v2)?;
        Ok(Self { v1, v2 })
    }

    /// `(u, 0)`, the shape of the dislocation velocity.
    pub fn along_x1(u: ScalarField2D) -> Self {
        let zero = ScalarField2D::zeros(*u.grid());
        Self { v1: u, v2: zero }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            v1: ScalarField2D::zeros(grid),
            v2: ScalarField2D::zeros(grid),
        }
    }

    pub fn grid(&self) -> &Grid {
        self.v1.grid()
    }

    pub fn v1(&self) -> &ScalarField2D {
        &self.v1
    }

    pub fn v2(&self) -> &ScalarField2D {
        &self.v2
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            v1: self.v1.scale(c),
            v2: self.v2.scale(c),
        }
    }
}
