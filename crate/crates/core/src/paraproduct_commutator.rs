//! Bony paraproducts, the commutator `[u ∂_α, Δ_j]`, and its bound report.
//!
//! Every product here is dealiased: factors are zero-padded to a `3n/2`
//! grid, multiplied there, and truncated back, so a product equals the
//! exact convolution restricted to the resolved wavenumbers `|k_a| < n/2`.
//! For factors band-limited below `n/4` this coincides with the pointwise
//! product of the samples.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicFamily;
use crate::norms::BlockSups;
use crate::spectral_core::{forward_real, inverse_complex, Grid, ScalarField2D};

/// Zero-padding helper for alias-free quadratic products.
#[derive(Debug, Clone, Copy)]
pub struct Dealiaser {
    grid: Grid,
    padded: usize,
}

impl Dealiaser {
    pub fn new(grid: Grid) -> Self {
        Self {
            grid,
            padded: 3 * grid.n() / 2,
        }
    }

    pub fn padded_len(&self) -> usize {
        self.padded * self.padded
    }

    /// Samples on the padded grid of the field with the given spectrum,
    /// optionally weighted by a per-coefficient factor.
    fn lift_with(&self, spec: &[Complex64], weight: impl Fn(usize) -> Complex64) -> Vec<f64> {
        let n = self.grid.n();
        let m = self.padded;
        let half = n / 2;
        let mut big = vec![Complex64::default(); m * m];
        for m2 in 0..n {
            let k2 = self.grid.wavenumber(m2);
            for m1 in 0..n {
                let idx = m2 * n + m1;
                let c = spec[idx] * weight(idx);
                if c == Complex64::default() {
                    continue;
                }
                let k1 = self.grid.wavenumber(m1);
                // a Nyquist coefficient stands for ±n/2 and is split evenly
                let k1s: &[i64] = if m1 == half { &[-(half as i64), half as i64] } else { &[k1] };
                let k2s: &[i64] = if m2 == half { &[-(half as i64), half as i64] } else { &[k2] };
                let share = 1.0 / (k1s.len() * k2s.len()) as f64;
                for &a in k1s {
                    for &b in k2s {
                        let p1 = a.rem_euclid(m as i64) as usize;
                        let p2 = b.rem_euclid(m as i64) as usize;
                        big[p2 * m + p1] += c * share;
                    }
                }
            }
        }
        inverse_complex(&big, m).into_iter().map(|z| z.re).collect()
    }

    fn lift(&self, f: &ScalarField2D) -> Vec<f64> {
        self.lift_with(f.spectrum(), |_| Complex64::new(1.0, 0.0))
    }

    fn lift_masked(&self, f: &ScalarField2D, mask: &[f64]) -> Vec<f64> {
        self.lift_with(f.spectrum(), |i| Complex64::new(mask[i], 0.0))
    }

    /// Truncates padded samples back to the base grid, dropping the
    /// Nyquist lines.
    fn lower(&self, samples: &[f64]) -> ScalarField2D {
        let n = self.grid.n();
        let m = self.padded;
        let big = forward_real(samples, m);
        let mut coeffs = vec![Complex64::default(); n * n];
        let half = (n / 2) as i64;
        for k2 in (-half + 1)..half {
            for k1 in (-half + 1)..half {
                let src = k2.rem_euclid(m as i64) as usize * m + k1.rem_euclid(m as i64) as usize;
                let dst = self.grid.index(
                    self.grid.index_of_wavenumber(k1),
                    self.grid.index_of_wavenumber(k2),
                );
                coeffs[dst] = big[src];
            }
        }
        ScalarField2D::from_spectrum_real_part(self.grid, coeffs)
    }
}

fn accumulate_product(acc: &mut [f64], a: &[f64], b: &[f64]) {
    for ((o, x), y) in acc.iter_mut().zip(a).zip(b) {
        *o += x * y;
    }
}

fn check_pair(u: &ScalarField2D, v: &ScalarField2D, fam: &DyadicFamily) -> Result<()> {
    u.check_same_grid(v)?;
    if u.grid() != fam.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Alias-free product `u v` on the resolved wavenumbers.
pub fn dealiased_product(u: &ScalarField2D, v: &ScalarField2D) -> Result<ScalarField2D> {
    u.check_same_grid(v)?;
    let d = Dealiaser::new(*u.grid());
    let mut acc = vec![0.0; d.padded_len()];
    accumulate_product(&mut acc, &d.lift(u), &d.lift(v));
    Ok(d.lower(&acc))
}

/// Paraproduct `T_u v = Σ_{j≥1} S_{j-1}(u) Δ_j v`.
pub fn paraproduct_t(u: &ScalarField2D, v: &ScalarField2D, fam: &DyadicFamily) -> Result<ScalarField2D> {
    check_pair(u, v, fam)?;
    let d = Dealiaser::new(*u.grid());
    let mut acc = vec![0.0; d.padded_len()];
    for j in 1..=fam.j_max() {
        let low = d.lift_masked(u, &fam.low_pass_mask(j - 1));
        let high = d.lift_masked(v, fam.mask(j).expect("in range"));
        accumulate_product(&mut acc, &low, &high);
    }
    Ok(d.lower(&acc))
}

/// Remainder `R(u, v) = Σ_{|i-j|≤1} Δ_i u Δ_j v`.
pub fn remainder_r(u: &ScalarField2D, v: &ScalarField2D, fam: &DyadicFamily) -> Result<ScalarField2D> {
    check_pair(u, v, fam)?;
    let d = Dealiaser::new(*u.grid());
    let mut acc = vec![0.0; d.padded_len()];
    let len = fam.grid().len();
    for i in fam.block_range() {
        let mut near = vec![0.0; len];
        for j in (i - 1)..=(i + 1) {
            if let Some(mask) = fam.mask(j) {
                for (o, m) in near.iter_mut().zip(mask) {
                    *o += m;
                }
            }
        }
        let left = d.lift_masked(u, fam.mask(i).expect("in range"));
        let right = d.lift_masked(v, &near);
        accumulate_product(&mut acc, &left, &right);
    }
    Ok(d.lower(&acc))
}

/// `T_u v + T_v u + R(u, v)`, which reproduces the product `u v`.
pub fn bony_reconstruct(u: &ScalarField2D, v: &ScalarField2D, fam: &DyadicFamily) -> Result<ScalarField2D> {
    let tuv = paraproduct_t(u, v, fam)?;
    let tvu = paraproduct_t(v, u, fam)?;
    let r = remainder_r(u, v, fam)?;
    Ok(&(&tuv + &tvu) + &r)
}

fn check_axis(alpha: usize) -> Result<()> {
    if alpha == 1 || alpha == 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("direction must be 1 or 2, got {alpha}")))
    }
}

/// Spectral weight of `∂/∂x_α` with the Nyquist line dropped.
fn derivative_weight(grid: &Grid, alpha: usize) -> impl Fn(usize) -> Complex64 + '_ {
    move |idx| {
        let n = grid.n();
        let m = if alpha == 1 { idx % n } else { idx / n };
        if grid.is_nyquist(m) {
            Complex64::default()
        } else {
            Complex64::new(0.0, grid.frequency(m))
        }
    }
}

/// Shared pieces of repeated commutator evaluations with fixed `u`, `f`.
struct CommutatorKit<'a> {
    d: Dealiaser,
    u_lifted: Vec<f64>,
    /// Dealiased `u ∂_α f` on the base grid.
    transported: ScalarField2D,
    f: &'a ScalarField2D,
    alpha: usize,
}

impl<'a> CommutatorKit<'a> {
    fn new(u: &ScalarField2D, f: &'a ScalarField2D, alpha: usize) -> Self {
        let grid = *u.grid();
        let d = Dealiaser::new(grid);
        let u_lifted = d.lift(u);
        let df = d.lift_with(f.spectrum(), derivative_weight(&grid, alpha));
        let mut acc = vec![0.0; d.padded_len()];
        accumulate_product(&mut acc, &u_lifted, &df);
        let transported = d.lower(&acc);
        Self {
            d,
            u_lifted,
            transported,
            f,
            alpha,
        }
    }

    fn evaluate(&self, j: i32, fam: &DyadicFamily) -> ScalarField2D {
        let grid = *self.f.grid();
        let Some(mask) = fam.mask(j) else {
            return ScalarField2D::zeros(grid);
        };
        let dw = derivative_weight(&grid, self.alpha);
        let dfj = self
            .d
            .lift_with(self.f.spectrum(), |i| dw(i) * mask[i]);
        let mut acc = vec![0.0; self.d.padded_len()];
        accumulate_product(&mut acc, &self.u_lifted, &dfj);
        let first = self.d.lower(&acc);
        let second = self.transported.apply_real_mask(mask);
        &first - &second
    }
}

/// `[u ∂_α, Δ_j] f = u ∂_α(Δ_j f) - Δ_j(u ∂_α f)`.
pub fn commutator(
    u: &ScalarField2D,
    f: &ScalarField2D,
    j: i32,
    alpha: usize,
    fam: &DyadicFamily,
) -> Result<ScalarField2D> {
    check_pair(u, f, fam)?;
    check_axis(alpha)?;
    Ok(CommutatorKit::new(u, f, alpha).evaluate(j, fam))
}

/// Per-block commutator sizes against both right-hand sides of the
/// `L^∞` commutator estimates (constants omitted).
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorReport {
    pub r: f64,
    pub alpha: usize,
    /// `(j, lhs, rhs1, rhs2)`.
    pub per_j: Vec<(i32, f64, f64, f64)>,
    pub ratio1: f64,
    pub ratio2: f64,
}

impl CommutatorReport {
    pub const CSV_HEADER: &'static str = "j,lhs,rhs1,rhs2";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for (j, lhs, r1, r2) in &self.per_j {
            out.push_str(&format!("{j},{lhs:e},{r1:e},{r2:e}\n"));
        }
        out
    }

    /// `2^{jr} · lhs_j` for every block.
    pub fn scaled_lhs(&self) -> Vec<(i32, f64)> {
        self.per_j
            .iter()
            .map(|&(j, lhs, _, _)| (j, 2f64.powf(j as f64 * self.r) * lhs))
            .collect()
    }
}

fn safe_ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

/// Commutator sizes for every block of the family with both bound forms:
/// `2^{-jr}(‖∂_α f‖_∞ ‖u‖_{C^r} + ‖∇u‖_∞ ‖f‖_{C^r})` and
/// `2^{-jr}(‖f‖_∞ ‖u‖_{C^{r+1}} + ‖∇u‖_∞ ‖f‖_{C^r})`.
pub fn commutator_bound_report(
    u: &ScalarField2D,
    f: &ScalarField2D,
    r: f64,
    alpha: usize,
    fam: &DyadicFamily,
) -> Result<CommutatorReport> {
    check_pair(u, f, fam)?;
    check_axis(alpha)?;
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("r must be positive, got {r}")));
    }
    let u_blocks = BlockSups::compute(u, fam)?;
    let f_blocks = BlockSups::compute(f, fam)?;
    let u_cr = u_blocks.holder_zygmund(r);
    let u_cr1 = u_blocks.holder_zygmund(r + 1.0);
    let f_cr = f_blocks.holder_zygmund(r);
    let grad_u = u.gradient_sup_norm();
    let df = f.partial(alpha).sup_norm();
    let f_sup = f.sup_norm();
    let a1 = df * u_cr + grad_u * f_cr;
    let a2 = f_sup * u_cr1 + grad_u * f_cr;

    let kit = CommutatorKit::new(u, f, alpha);
    let mut per_j = Vec::new();
    let (mut ratio1, mut ratio2) = (0.0f64, 0.0f64);
    for j in fam.block_range() {
        let lhs = kit.evaluate(j, fam).sup_norm();
        let w = 2f64.powf(-(j as f64) * r);
        let (rhs1, rhs2) = (w * a1, w * a2);
        ratio1 = ratio1.max(safe_ratio(lhs, rhs1));
        ratio2 = ratio2.max(safe_ratio(lhs, rhs2));
        per_j.push((j, lhs, rhs1, rhs2));
    }
    Ok(CommutatorReport {
        r,
        alpha,
        per_j,
        ratio1,
        ratio2,
    })
}
