use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Square periodic cell of side `period` sampled with `n` points per axis.
///
/// Sample `(i1, i2)` sits at `x = (i1 * h, i2 * h)` with `h = period / n`.
/// Arrays over the grid are stored with `x1` varying fastest, i.e. flat
/// index `i2 * n + i1`. Spectral arrays use the same layout with FFT index
/// order, so wavenumber index `m` maps to `k = m` for `m < n/2` and
/// `k = m - n` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    period: f64,
}

impl Grid {
    pub fn new(n: usize, period: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n must be a power of two and at least 8, got {n}"
            )));
        }
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "period must be positive and finite, got {period}"
            )));
        }
        Ok(Self { n, period })
    }

    /// Grid on the standard `2π` cell.
    pub fn standard(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * PI)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn period(&self) -> f64 {
        self.period
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    /// Number of samples, `n²`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i2 * self.n + i1
    }

    #[inline]
    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    /// Integer wavenumber of FFT index `m`, in `[-n/2, n/2)`.
    #[inline]
    pub fn wavenumber(&self, m: usize) -> i64 {
        let n = self.n as i64;
        let m = m as i64;
        if m < n / 2 {
            m
        } else {
            m - n
        }
    }

    /// FFT index of integer wavenumber `k` (taken modulo `n`).
    #[inline]
    pub fn index_of_wavenumber(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Physical angular frequency `2πk/D` of FFT index `m`.
    #[inline]
    pub fn frequency(&self, m: usize) -> f64 {
        2.0 * PI * self.wavenumber(m) as f64 / self.period
    }

    /// Physical frequencies of all FFT indices along one axis.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.frequency(m)).collect()
    }

    /// Integer wavenumbers `{-n/2, …, n/2 - 1}` in ascending order.
    pub fn wavenumber_range(&self) -> Vec<i64> {
        let half = (self.n / 2) as i64;
        (-half..half).collect()
    }

    /// Radius `πn/D` of the largest axis-aligned resolved frequency.
    pub fn nyquist_radius(&self) -> f64 {
        PI * self.n as f64 / self.period
    }

    /// Index of the Hermitian partner `-k` (mod n).
    #[inline]
    pub fn partner(&self, m: usize) -> usize {
        (self.n - m) % self.n
    }

    #[inline]
    pub fn is_nyquist(&self, m: usize) -> bool {
        m == self.n / 2
    }

    /// Periodic minimum-image separation along one axis.
    #[inline]
    pub fn wrap_distance(&self, d: f64) -> f64 {
        let p = self.period;
        let r = d.rem_euclid(p);
        r.min(p - r)
    }

    /// Same cell, half the points per axis. `None` below the minimum size.
    pub fn coarsened(&self) -> Option<Grid> {
        Grid::new(self.n / 2, self.period).ok()
    }
}

/// Validated grid constructor.
pub fn make_grid(n: usize, period: f64) -> Result<Grid> {
    Grid::new(n, period)
}
