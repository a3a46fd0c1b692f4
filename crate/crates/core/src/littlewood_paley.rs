//! Dyadic frequency cutoffs and the block operators `Δ_j`, `S_j`.
//!
//! The low-pass profile `χ` is radial, equal to 1 on `|ξ| ≤ 3/4`, vanishes
//! for `|ξ| ≥ 4/3`, and interpolates with the `C^∞` smooth step
//! `ψ(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)})`. The annular profile is
//! `φ(ξ) = χ(ξ/2) - χ(ξ)`, so that `χ + Σ_{j≥0} φ(2^{-j}·) ≡ 1`.

use crate::error::Result;
use crate::spectral_core::{Grid, ScalarField2D};

pub const CHI_PLATEAU: f64 = 3.0 / 4.0;
pub const CHI_SUPPORT: f64 = 4.0 / 3.0;

fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Radial low-pass profile `χ(s)`, `s = |ξ|`.
pub fn chi_profile(s: f64) -> f64 {
    if s <= CHI_PLATEAU {
        1.0
    } else if s >= CHI_SUPPORT {
        0.0
    } else {
        1.0 - smooth_step((s - CHI_PLATEAU) / (CHI_SUPPORT - CHI_PLATEAU))
    }
}

/// Annular profile `φ(s) = χ(s/2) - χ(s)`.
pub fn phi_profile(s: f64) -> f64 {
    chi_profile(0.5 * s) - chi_profile(s)
}

/// Multiplier profile of block `j` at radius `s`.
pub fn block_profile(j: i32, s: f64) -> f64 {
    match j {
        j if j <= -2 => 0.0,
        -1 => chi_profile(s),
        j => phi_profile(s * 2f64.powi(-j)),
    }
}

/// Dyadic masks evaluated on a grid's frequency lattice.
#[derive(Debug, Clone)]
pub struct DyadicFamily {
    grid: Grid,
    j_max: i32,
    radius: Vec<f64>,
    masks: Vec<Vec<f64>>,
}

impl DyadicFamily {
    pub const J_MIN: i32 = -1;

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Largest block index carried by the family; every block above it
    /// vanishes identically on this grid.
    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn block_range(&self) -> impl Iterator<Item = i32> + Clone {
        Self::J_MIN..=self.j_max
    }

    /// `|ξ|` at every lattice point (FFT layout).
    pub fn radius(&self) -> &[f64] {
        &self.radius
    }

    /// Mask of block `j`; `None` outside `-1..=j_max`.
    pub fn mask(&self, j: i32) -> Option<&[f64]> {
        if (Self::J_MIN..=self.j_max).contains(&j) {
            Some(&self.masks[(j + 1) as usize])
        } else {
            None
        }
    }

    /// Mask of `S_j`, i.e. `χ(2^{-j}ξ)` for `j ≥ 0` and zero for `j ≤ -1`.
    pub fn low_pass_mask(&self, j: i32) -> Vec<f64> {
        if j <= -1 {
            return vec![0.0; self.radius.len()];
        }
        let scale = 2f64.powi(-j);
        self.radius.iter().map(|&s| chi_profile(s * scale)).collect()
    }

    /// Largest deviation of `χ + Σ φ(2^{-j}·)` from 1 over the lattice.
    pub fn partition_residual(&self) -> f64 {
        (0..self.radius.len())
            .map(|i| {
                let total: f64 = self.masks.iter().map(|m| m[i]).sum();
                (total - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Evaluates every block mask on the grid's lattice.
pub fn build_dyadic_family(grid: Grid) -> DyadicFamily {
    let n = grid.n();
    let freqs = grid.frequencies();
    let mut radius = Vec::with_capacity(grid.len());
    for m2 in 0..n {
        for m1 in 0..n {
            radius.push(freqs[m1].hypot(freqs[m2]));
        }
    }
    let j_max = (grid.nyquist_radius().log2().ceil() as i32 + 2).max(0);
    let masks = (DyadicFamily::J_MIN..=j_max)
        .map(|j| radius.iter().map(|&s| block_profile(j, s)).collect())
        .collect();
    DyadicFamily {
        grid,
        j_max,
        radius,
        masks,
    }
}

/// `Δ_j f`; zero for `j ≤ -2` and above the family's range.
pub fn delta_j(f: &ScalarField2D, j: i32, fam: &DyadicFamily) -> Result<ScalarField2D> {
    check_grid(f, fam)?;
    Ok(match fam.mask(j) {
        Some(mask) => f.apply_real_mask(mask),
        None => ScalarField2D::zeros(*f.grid()),
    })
}

/// `S_j f = Σ_{k ≤ j-1} Δ_k f`, applied as the single multiplier `χ(2^{-j}ξ)`.
pub fn s_j(f: &ScalarField2D, j: i32, fam: &DyadicFamily) -> Result<ScalarField2D> {
    check_grid(f, fam)?;
    if j <= -1 {
        return Ok(ScalarField2D::zeros(*f.grid()));
    }
    Ok(f.apply_real_mask(&fam.low_pass_mask(j)))
}

/// All Littlewood–Paley blocks of a field.
#[derive(Debug, Clone)]
pub struct LPDecomposition {
    grid: Grid,
    blocks: Vec<(i32, ScalarField2D)>,
}

impl LPDecomposition {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn blocks(&self) -> &[(i32, ScalarField2D)] {
        &self.blocks
    }

    /// Block `j`, or `None` outside the stored range.
    pub fn block(&self, j: i32) -> Option<&ScalarField2D> {
        let idx = j - DyadicFamily::J_MIN;
        if idx < 0 {
            return None;
        }
        self.blocks.get(idx as usize).map(|(_, b)| b)
    }

    /// Sum of all blocks.
    pub fn reconstruct(&self) -> ScalarField2D {
        let mut out = vec![0.0; self.grid.len()];
        for (_, b) in &self.blocks {
            for (o, v) in out.iter_mut().zip(b.values()) {
                *o += v;
            }
        }
        ScalarField2D::from_values(self.grid, out).expect("sizes match")
    }

    pub fn into_blocks(self) -> Vec<(i32, ScalarField2D)> {
        self.blocks
    }
}

/// Blocks `Δ_{-1} f, …, Δ_{j_max} f` sharing one forward transform.
pub fn decompose(f: &ScalarField2D, fam: &DyadicFamily) -> Result<LPDecomposition> {
    check_grid(f, fam)?;
    let blocks = fam
        .block_range()
        .map(|j| (j, f.apply_real_mask(fam.mask(j).expect("in range"))))
        .collect();
    Ok(LPDecomposition {
        grid: *f.grid(),
        blocks,
    })
}

fn check_grid(f: &ScalarField2D, fam: &DyadicFamily) -> Result<()> {
    if f.grid() == fam.grid() {
        Ok(())
    } else {
        Err(crate::Error::GridMismatch)
    }
}
