//! Hölder–Zygmund, classical Hölder, `L^p`, and pair norms.

use crate::error::{Error, Result};
use crate::littlewood_paley::{decompose, DyadicFamily};
use crate::picard_solver::DensityState;
use crate::spectral_core::ScalarField2D;

/// `‖Δ_j f‖_∞` for every block of the family, reusable across exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSups {
    sups: Vec<(i32, f64)>,
}

impl BlockSups {
    pub fn compute(f: &ScalarField2D, fam: &DyadicFamily) -> Result<Self> {
        let dec = decompose(f, fam)?;
        Ok(Self {
            sups: dec.blocks().iter().map(|(j, b)| (*j, b.sup_norm())).collect(),
        })
    }

    pub fn sups(&self) -> &[(i32, f64)] {
        &self.sups
    }

    /// `(j, 2^{jr} ‖Δ_j f‖_∞)` for every block.
    pub fn weighted(&self, r: f64) -> Vec<(i32, f64)> {
        self.sups
            .iter()
            .map(|&(j, s)| (j, 2f64.powf(j as f64 * r) * s))
            .collect()
    }

    /// `max_j 2^{jr} ‖Δ_j f‖_∞`.
    pub fn holder_zygmund(&self, r: f64) -> f64 {
        self.weighted(r).iter().fold(0.0, |m, &(_, v)| m.max(v))
    }
}

/// Hölder–Zygmund norm with its block profile.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockNorm {
    pub r: f64,
    pub value: f64,
    pub per_block: Vec<(i32, f64)>,
    pub argmax_j: i32,
}

/// `C^r`, `L^p`, and `C^r ∩ L^p` norms of one field.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub r: f64,
    pub p: f64,
    pub cr_norm: f64,
    pub lp_norm: f64,
    pub cr_lp_norm: f64,
    pub per_block: Vec<(i32, f64)>,
    pub argmax_j: i32,
}

impl NormReport {
    pub const CSV_HEADER: &'static str = "name,r,p,cr_norm,lp_norm,cr_lp_norm,argmax_j";

    pub fn csv_row(&self, name: &str) -> String {
        format!(
            "{},{},{},{:e},{:e},{:e},{}",
            name, self.r, self.p, self.cr_norm, self.lp_norm, self.cr_lp_norm, self.argmax_j
        )
    }
}

/// `‖f‖_{C^r} = max_{-1 ≤ j ≤ j_max} 2^{jr} ‖Δ_j f‖_∞`.
pub fn holder_zygmund_norm(f: &ScalarField2D, r: f64, fam: &DyadicFamily) -> Result<BlockNorm> {
    if !r.is_finite() {
        return Err(Error::InvalidArgument(format!("regularity must be finite, got {r}")));
    }
    let per_block = BlockSups::compute(f, fam)?.weighted(r);
    let (argmax_j, value) = per_block
        .iter()
        .fold((-1, 0.0), |(bj, bv), &(j, v)| if v > bv { (j, v) } else { (bj, bv) });
    Ok(BlockNorm {
        r,
        value,
        per_block,
        argmax_j,
    })
}

/// `(Σ |f|^p h²)^{1/p}` over the periodic cell.
pub fn lp_norm(f: &ScalarField2D, p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("p must lie in (1, ∞), got {p}")));
    }
    let h = f.grid().spacing();
    let sum: f64 = f.values().iter().map(|v| v.abs().powf(p)).sum();
    Ok((sum * h * h).powf(1.0 / p))
}

pub fn norm_report(f: &ScalarField2D, r: f64, p: f64, fam: &DyadicFamily) -> Result<NormReport> {
    let cr = holder_zygmund_norm(f, r, fam)?;
    let lp = lp_norm(f, p)?;
    Ok(NormReport {
        r,
        p,
        cr_norm: cr.value,
        lp_norm: lp,
        cr_lp_norm: cr.value + lp,
        per_block: cr.per_block,
        argmax_j: cr.argmax_j,
    })
}

/// `‖f‖_{C^r} + ‖f‖_{L^p}`.
pub fn cr_lp_norm(f: &ScalarField2D, r: f64, p: f64, fam: &DyadicFamily) -> Result<f64> {
    Ok(holder_zygmund_norm(f, r, fam)?.value + lp_norm(f, p)?)
}

/// `max_k ‖f_k‖_{C^r} + max_k ‖f_k‖_{L^p}` for a pair of fields.
pub fn pair_norm(
    f1: &ScalarField2D,
    f2: &ScalarField2D,
    r: f64,
    p: f64,
    fam: &DyadicFamily,
) -> Result<f64> {
    f1.check_same_grid(f2)?;
    let cr = holder_zygmund_norm(f1, r, fam)?
        .value
        .max(holder_zygmund_norm(f2, r, fam)?.value);
    let lp = lp_norm(f1, p)?.max(lp_norm(f2, p)?);
    Ok(cr + lp)
}

/// `‖ρ‖_{r,p}` of a density state (periodic remainders when `L ≠ 0`).
pub fn y_norm(state: &DensityState, r: f64, p: f64, fam: &DyadicFamily) -> Result<f64> {
    pair_norm(state.rho_plus(), state.rho_minus(), r, p, fam)
}

/// Pair-sampling options for [`classical_holder_norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderStencil {
    /// Largest offset, in grid points per axis, of the sampled pairs.
    pub radius: usize,
}

impl Default for HolderStencil {
    fn default() -> Self {
        Self { radius: 8 }
    }
}

/// Classical Hölder norm `Σ_{|β|≤[r]} ‖∂^β f‖_∞ + [∂^{[r]} f]_{r-[r]}` for
/// non-integer `r ∈ (0, 2)`.
///
/// The seminorm is the larger of the two first-derivative seminorms when
/// `r > 1`; each seminorm is sampled over all pairs within the stencil
/// plus the pair joining the field's extreme values.
pub fn classical_holder_norm(f: &ScalarField2D, r: f64, stencil: HolderStencil) -> Result<f64> {
    if r.fract() == 0.0 {
        return Err(Error::IntegerOrder(r));
    }
    if !(r > 0.0 && r < 2.0) {
        return Err(Error::InvalidArgument(format!("order must lie in (0, 2), got {r}")));
    }
    if r < 1.0 {
        return Ok(f.sup_norm() + holder_seminorm(f, r, stencil.radius));
    }
    let d1 = f.partial(1);
    let d2 = f.partial(2);
    let theta = r - 1.0;
    Ok(f.sup_norm()
        + d1.sup_norm()
        + d2.sup_norm()
        + holder_seminorm(&d1, theta, stencil.radius).max(holder_seminorm(&d2, theta, stencil.radius)))
}

/// `sup |g(x) - g(y)| / |x - y|^θ` over stencil pairs and the extreme pair.
pub fn holder_seminorm(g: &ScalarField2D, theta: f64, radius: usize) -> f64 {
    let grid = g.grid();
    let n = grid.n();
    let h = grid.spacing();
    let radius = radius.min(n / 2 - 1) as i64;
    let vals = g.values();
    let mut best = 0.0f64;
    for d2 in 0..=radius {
        for d1 in -radius..=radius {
            if d2 == 0 && d1 <= 0 {
                continue;
            }
            let dist = h * ((d1 * d1 + d2 * d2) as f64).sqrt();
            let w = dist.powf(-theta);
            let mut local = 0.0f64;
            for i2 in 0..n {
                let j2 = (i2 as i64 + d2).rem_euclid(n as i64) as usize;
                let row = &vals[i2 * n..(i2 + 1) * n];
                let shifted = &vals[j2 * n..(j2 + 1) * n];
                for i1 in 0..n {
                    let j1 = (i1 as i64 + d1).rem_euclid(n as i64) as usize;
                    local = local.max((row[i1] - shifted[j1]).abs());
                }
            }
            best = best.max(local * w);
        }
    }
    // pair joining the extreme values
    let (mut imax, mut imin) = (0, 0);
    for (i, &v) in vals.iter().enumerate() {
        if v > vals[imax] {
            imax = i;
        }
        if v < vals[imin] {
            imin = i;
        }
    }
    if imax != imin {
        let dx1 = grid.wrap_distance((imax % n) as f64 * h - (imin % n) as f64 * h);
        let dx2 = grid.wrap_distance((imax / n) as f64 * h - (imin / n) as f64 * h);
        let dist = dx1.hypot(dx2);
        best = best.max((vals[imax] - vals[imin]) / dist.powf(theta));
    }
    best
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::littlewood_paley::build_dyadic_family;
    use crate::spectral_core::Grid;

    fn fam(n: usize) -> DyadicFamily {
        build_dyadic_family(Grid::standard(n).unwrap())
    }

    #[test]
    fn constant_field_lives_in_low_block() {
        let fam = fam(32);
        let c = ScalarField2D::constant(*fam.grid(), -3.0);
        for r in [-1.0, 0.0, 0.5, 1.5, 3.0] {
            let n = holder_zygmund_norm(&c, r, &fam).unwrap();
            assert!((n.value - 2f64.powf(-r) * 3.0).abs() < 1e-13);
            assert_eq!(n.argmax_j, -1);
        }
    }

    #[test]
    fn plateau_wave_norm() {
        let fam = fam(64);
        let a = 1.7;
        let f = ScalarField2D::from_fn(*fam.grid(), |x1, _| a * (12.0 * x1).cos());
        for r in [0.5, 1.5] {
            let n = holder_zygmund_norm(&f, r, &fam).unwrap();
            assert!((n.value - 2f64.powf(3.0 * r) * a).abs() < 1e-12);
            assert_eq!(n.argmax_j, 3);
            assert_eq!(n.per_block.len(), 9);
        }
    }

    #[test]
    fn zero_field_norms() {
        let fam = fam(16);
        let z = ScalarField2D::zeros(*fam.grid());
        assert_eq!(holder_zygmund_norm(&z, 1.5, &fam).unwrap().value, 0.0);
        assert_eq!(lp_norm(&z, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn lp_rejects_bad_exponent() {
        let z = ScalarField2D::zeros(Grid::standard(8).unwrap());
        assert!(lp_norm(&z, 1.0).is_err());
        assert!(lp_norm(&z, f64::INFINITY).is_err());
    }

    #[test]
    fn lp_of_smooth_bump_matches_quadrature() {
        // flat-top bump: 1 on |x - c| ≤ 0.6, smooth decay to 0 by 1.0
        let bump = |x1: f64, x2: f64| {
            let d = (x1 - PI).hypot(x2 - PI);
            crate::littlewood_paley::chi_profile(0.75 + (d - 0.6).max(0.0) / 0.4 * (4.0 / 3.0 - 0.75))
        };
        let p = 3.0;
        // radial quadrature oracle: ∫ b^p = 2π ∫ b(ρ)^p ρ dρ
        let m = 200_000;
        let mut acc = 0.0;
        for i in 0..m {
            let rho = (i as f64 + 0.5) * 1.0 / m as f64;
            acc += bump(PI + rho, PI).powf(p) * rho;
        }
        let oracle = (2.0 * PI * acc / m as f64).powf(1.0 / p);
        let f = ScalarField2D::from_fn(Grid::standard(256).unwrap(), bump);
        let got = lp_norm(&f, p).unwrap();
        assert!((got - oracle).abs() / oracle < 2e-3, "{got} vs {oracle}");
        // flat-top disk area bound: A^{1/p} between inner and outer disks
        assert!(got > (PI * 0.36f64).powf(1.0 / p) && got < PI.powf(1.0 / p));
    }

    #[test]
    fn lp_is_homogeneous() {
        let f = ScalarField2D::from_fn(Grid::standard(32).unwrap(), |x1, x2| x1.sin() * x2.cos());
        let base = lp_norm(&f, 2.5).unwrap();
        assert!((lp_norm(&f.scale(-3.0), 2.5).unwrap() - 3.0 * base).abs() < 1e-12);
    }

    #[test]
    fn classical_norm_of_constant() {
        let c = ScalarField2D::constant(Grid::standard(32).unwrap(), 2.0);
        let v = classical_holder_norm(&c, 0.5, HolderStencil::default()).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
        assert!(matches!(
            classical_holder_norm(&c, 1.0, HolderStencil::default()),
            Err(Error::IntegerOrder(_))
        ));
    }

    /// Seminorm over every pair of grid points with periodic distances.
    fn brute_force_seminorm(g: &ScalarField2D, theta: f64) -> f64 {
        let grid = g.grid();
        let n = grid.n();
        let h = grid.spacing();
        let mut best = 0.0f64;
        for a in 0..n * n {
            for b in (a + 1)..n * n {
                let dx1 = grid.wrap_distance(((a % n) as f64 - (b % n) as f64) * h);
                let dx2 = grid.wrap_distance(((a / n) as f64 - (b / n) as f64) * h);
                let d = dx1.hypot(dx2);
                best = best.max((g.values()[a] - g.values()[b]).abs() / d.powf(theta));
            }
        }
        best
    }

    #[test]
    fn classical_norm_of_sine() {
        // sup_d 2 sin(d/2)/√d is attained at tan(d/2) = d, i.e. d ≈ 2.3311
        let t: f64 = {
            let mut t: f64 = 1.1;
            for _ in 0..60 {
                t -= (t.tan() - 2.0 * t) / (1.0 / t.cos().powi(2) - 2.0);
            }
            t
        };
        let analytic = 1.0 + 2.0 * t.sin() / (2.0 * t).sqrt();
        let g32 = ScalarField2D::from_fn(Grid::standard(32).unwrap(), |x1, _| x1.sin());
        let brute = 1.0 + brute_force_seminorm(&g32, 0.5);
        assert!((brute - analytic).abs() / analytic < 0.01, "{brute} vs {analytic}");
        let g64 = ScalarField2D::from_fn(Grid::standard(64).unwrap(), |x1, _| x1.sin());
        let v = classical_holder_norm(&g64, 0.5, HolderStencil::default()).unwrap();
        assert!((v - analytic).abs() / analytic < 0.05, "{v} vs {analytic}");
        let wide = classical_holder_norm(&g32, 0.5, HolderStencil { radius: 15 }).unwrap();
        assert!((wide - brute).abs() < 1e-12 * brute);
    }

    #[test]
    fn pair_norm_is_symmetric() {
        let fam = fam(32);
        let g = *fam.grid();
        let a = ScalarField2D::from_fn(g, |x1, x2| (x1 + x2).sin());
        let b = ScalarField2D::constant(g, 0.4);
        let ab = pair_norm(&a, &b, 1.5, 2.0, &fam).unwrap();
        let ba = pair_norm(&b, &a, 1.5, 2.0, &fam).unwrap();
        assert_eq!(ab, ba);
        let sep = holder_zygmund_norm(&a, 1.5, &fam).unwrap().value.max(holder_zygmund_norm(&b, 1.5, &fam).unwrap().value)
            + lp_norm(&a, 2.0).unwrap().max(lp_norm(&b, 2.0).unwrap());
        assert!((ab - sep).abs() < 1e-14);
    }

    #[test]
    fn equivalence_with_classical_norm() {
        let fam = fam(64);
        let g = *fam.grid();
        let mut ratios = Vec::new();
        for k in 1..6 {
            let kf = k as f64;
            let f = ScalarField2D::from_fn(g, |x1, x2| (kf * x1 + 2.0 * x2).sin() + 0.5 * (x1 - kf * x2).cos());
            for r in [0.5, 1.5] {
                let a = holder_zygmund_norm(&f, r, &fam).unwrap().value;
                let b = classical_holder_norm(&f, r, HolderStencil::default()).unwrap();
                ratios.push(b / a);
            }
        }
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        assert!(lo > 0.1 && hi < 20.0, "c1 = {lo}, c2 = {hi}");
    }
}
