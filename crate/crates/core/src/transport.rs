//! Linear transport by characteristics: backward foot points from a
//! time-dependent velocity (classical RK4 with bicubic velocity samples)
//! and the semi-Lagrangian update with an optional source integrated along
//! each characteristic.

use crate::error::{Error, Result};
use crate::spectral_core::{Grid, ScalarField2D, VectorField2D};

/// Velocity as a function of time.
pub trait VelocityProvider {
    fn velocity_at(&self, t: f64) -> Result<VectorField2D>;
}

impl<F> VelocityProvider for F
where
    F: Fn(f64) -> Result<VectorField2D>,
{
    fn velocity_at(&self, t: f64) -> Result<VectorField2D> {
        self(t)
    }
}

/// Scalar source term as a function of time.
pub trait SourceProvider {
    fn source_at(&self, t: f64) -> Result<ScalarField2D>;
}

impl<F> SourceProvider for F
where
    F: Fn(f64) -> Result<ScalarField2D>,
{
    fn source_at(&self, t: f64) -> Result<ScalarField2D> {
        self(t)
    }
}

/// Relative slack when checking that a query time is inside a window.
const TIME_SLACK: f64 = 1e-12;

/// Scalar snapshots interpolated linearly in time.
#[derive(Debug, Clone)]
pub struct ScalarSeries {
    times: Vec<f64>,
    fields: Vec<ScalarField2D>,
}

impl ScalarSeries {
    pub fn new(times: Vec<f64>, fields: Vec<ScalarField2D>) -> Result<Self> {
        if times.is_empty() || times.len() != fields.len() {
            return Err(Error::InvalidArgument("series needs matching, non-empty times and fields".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("series times must increase strictly".into()));
        }
        for f in &fields[1..] {
            f.check_same_grid(&fields[0])?;
        }
        Ok(Self { times, fields })
    }

    /// A single field valid at every time.
    pub fn steady(field: ScalarField2D) -> Self {
        Self {
            times: vec![0.0],
            fields: vec![field],
        }
    }

    pub fn grid(&self) -> &Grid {
        self.fields[0].grid()
    }

    pub fn at(&self, t: f64) -> Result<ScalarField2D> {
        if self.times.len() == 1 {
            return Ok(self.fields[0].clone());
        }
        let (t0, t1) = (self.times[0], *self.times.last().expect("non-empty"));
        let slack = TIME_SLACK * (t1 - t0).abs().max(1.0);
        if !(t >= t0 - slack && t <= t1 + slack) {
            return Err(Error::VelocityUnavailable(t));
        }
        let k = self.times.partition_point(|&s| s <= t).clamp(1, self.times.len() - 1);
        let (a, b) = (self.times[k - 1], self.times[k]);
        let theta = ((t - a) / (b - a)).clamp(0.0, 1.0);
        if theta == 0.0 {
            return Ok(self.fields[k - 1].clone());
        }
        if theta == 1.0 {
            return Ok(self.fields[k].clone());
        }
        self.fields[k - 1].zip_with(&self.fields[k], |x, y| (1.0 - theta) * x + theta * y)
    }
}

/// Velocity snapshots interpolated linearly in time.
#[derive(Debug, Clone)]
pub struct SnapshotVelocity {
    v1: ScalarSeries,
    v2: ScalarSeries,
}

impl SnapshotVelocity {
    pub fn new(times: Vec<f64>, fields: Vec<VectorField2D>) -> Result<Self> {
        let (a, b): (Vec<_>, Vec<_>) = fields.into_iter().map(|v| (v.v1().clone(), v.v2().clone())).unzip();
        Ok(Self {
            v1: ScalarSeries::new(times.clone(), a)?,
            v2: ScalarSeries::new(times, b)?,
        })
    }

    pub fn steady(v: VectorField2D) -> Self {
        Self {
            v1: ScalarSeries::steady(v.v1().clone()),
            v2: ScalarSeries::steady(v.v2().clone()),
        }
    }
}

impl VelocityProvider for SnapshotVelocity {
    fn velocity_at(&self, t: f64) -> Result<VectorField2D> {
        VectorField2D::new(self.v1.at(t)?, self.v2.at(t)?)
    }
}

/// Cubic Lagrange weights on nodes `-1, 0, 1, 2` at offset `t ∈ [0, 1)`.
#[inline]
fn cubic_weights(t: f64) -> [f64; 4] {
    [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ]
}

/// Bicubic (tensor cubic Lagrange) sampler of a periodic field.
#[derive(Debug, Clone, Copy)]
pub struct BicubicSampler<'a> {
    values: &'a [f64],
    n: usize,
    inv_h: f64,
}

impl<'a> BicubicSampler<'a> {
    pub fn new(f: &'a ScalarField2D) -> Self {
        Self {
            values: f.values(),
            n: f.grid().n(),
            inv_h: 1.0 / f.grid().spacing(),
        }
    }

    /// Value at grid coordinates `(s1, s2)` measured in cells.
    #[inline]
    fn sample_cells(&self, s1: f64, s2: f64) -> f64 {
        let n = self.n as i64;
        let f1 = s1.floor();
        let f2 = s2.floor();
        let (t1, t2) = (s1 - f1, s2 - f2);
        let (b1, b2) = (f1 as i64, f2 as i64);
        let w1 = cubic_weights(t1);
        let row = |r: i64| -> f64 {
            let base = r.rem_euclid(n) as usize * self.n;
            let mut acc = 0.0;
            for (a, w) in w1.iter().enumerate() {
                let c = (b1 - 1 + a as i64).rem_euclid(n) as usize;
                acc += w * self.values[base + c];
            }
            acc
        };
        if t2 == 0.0 {
            return row(b2);
        }
        let w2 = cubic_weights(t2);
        (0..4).map(|b| w2[b] * row(b2 - 1 + b as i64)).sum()
    }

    /// Value at physical position `(x1, x2)`, wrapped periodically.
    #[inline]
    pub fn sample(&self, x1: f64, x2: f64) -> f64 {
        self.sample_cells(x1 * self.inv_h, x2 * self.inv_h)
    }
}

/// Positions of the characteristics through every grid point at the end
/// of a time window.
#[derive(Debug, Clone)]
pub struct FlowMap {
    grid: Grid,
    time_span: (f64, f64),
    /// Foot-point offsets `X⁻¹(x) - x` at the window start.
    displacement: [Vec<f64>; 2],
    /// `(time, offsets)` at the midpoint of every substep, latest first.
    midpoints: Vec<(f64, [Vec<f64>; 2])>,
}

impl FlowMap {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn time_span(&self) -> (f64, f64) {
        self.time_span
    }

    pub fn displacement(&self) -> (&[f64], &[f64]) {
        (&self.displacement[0], &self.displacement[1])
    }

    pub fn substeps(&self) -> usize {
        self.midpoints.len()
    }

    pub fn max_displacement(&self) -> f64 {
        self.displacement[0]
            .iter()
            .zip(&self.displacement[1])
            .fold(0.0, |m, (a, b)| m.max(a.hypot(*b)))
    }
}

struct VelocitySample {
    v1: ScalarField2D,
    v2: Option<ScalarField2D>,
}

impl VelocitySample {
    fn fetch(p: &dyn VelocityProvider, t: f64, grid: &Grid) -> Result<Self> {
        let v = p.velocity_at(t)?;
        if v.grid() != grid {
            return Err(Error::GridMismatch);
        }
        if !v.v1().is_finite() || !v.v2().is_finite() {
            return Err(Error::NonFiniteField("velocity"));
        }
        let v2 = if v.v2().sup_norm() == 0.0 { None } else { Some(v.v2().clone()) };
        Ok(Self { v1: v.v1().clone(), v2 })
    }

    /// Velocity at `x + d` for every grid point `x`.
    fn eval(&self, grid: &Grid, d: &[Vec<f64>; 2]) -> [Vec<f64>; 2] {
        let n = grid.n();
        let h = grid.spacing();
        let s1 = BicubicSampler::new(&self.v1);
        let s2 = self.v2.as_ref().map(BicubicSampler::new);
        let mut out1 = Vec::with_capacity(grid.len());
        let mut out2 = Vec::with_capacity(grid.len());
        for i2 in 0..n {
            for i1 in 0..n {
                let idx = i2 * n + i1;
                let c1 = i1 as f64 + d[0][idx] / h;
                let c2 = i2 as f64 + d[1][idx] / h;
                out1.push(s1.sample_cells(c1, c2) );
                out2.push(s2.map_or(0.0, |s| s.sample_cells(c1, c2)));
            }
        }
        [out1, out2]
    }
}

fn axpy(d: &[Vec<f64>; 2], a: f64, k: &[Vec<f64>; 2]) -> [Vec<f64>; 2] {
    let f = |x: &Vec<f64>, y: &Vec<f64>| x.iter().zip(y).map(|(p, q)| p + a * q).collect();
    [f(&d[0], &k[0]), f(&d[1], &k[1])]
}

/// One backward RK4 step of size `h` from time `t`.
fn rk4_back(
    p: &dyn VelocityProvider,
    grid: &Grid,
    d: &[Vec<f64>; 2],
    t: f64,
    h: f64,
) -> Result<[Vec<f64>; 2]> {
    let v_t = VelocitySample::fetch(p, t, grid)?;
    let v_mid = VelocitySample::fetch(p, t - 0.5 * h, grid)?;
    let v_end = VelocitySample::fetch(p, t - h, grid)?;
    let k1 = v_t.eval(grid, d);
    let k2 = v_mid.eval(grid, &axpy(d, -0.5 * h, &k1));
    let k3 = v_mid.eval(grid, &axpy(d, -0.5 * h, &k2));
    let k4 = v_end.eval(grid, &axpy(d, -h, &k3));
    let combine = |c: usize| -> Vec<f64> {
        (0..grid.len())
            .map(|i| d[c][i] - h / 6.0 * (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]))
            .collect()
    };
    Ok([combine(0), combine(1)])
}

/// Traces the characteristics `dX/dt = v(X, t)` backward from every grid
/// point at `t1` to `t0`, using `substeps` RK4 substeps (each split in two
/// halves so the substep midpoints are recorded for source quadrature).
pub fn trace_characteristics(
    velocity_at: &dyn VelocityProvider,
    grid: Grid,
    t0: f64,
    t1: f64,
    substeps: usize,
) -> Result<FlowMap> {
    if !(t1 > t0) {
        return Err(Error::InvalidArgument(format!("need t1 > t0, got [{t0}, {t1}]")));
    }
    if substeps == 0 {
        return Err(Error::InvalidArgument("substeps must be at least 1".into()));
    }
    let h = (t1 - t0) / substeps as f64;
    let mut d = [vec![0.0; grid.len()], vec![0.0; grid.len()]];
    let mut midpoints = Vec::with_capacity(substeps);
    for s in 0..substeps {
        let t_start = t1 - s as f64 * h;
        d = rk4_back(velocity_at, &grid, &d, t_start, 0.5 * h)?;
        midpoints.push((t_start - 0.5 * h, d.clone()));
        d = rk4_back(velocity_at, &grid, &d, t_start - 0.5 * h, 0.5 * h)?;
    }
    if d.iter().any(|c| c.iter().any(|v| !v.is_finite())) {
        return Err(Error::NonFiniteField("foot points"));
    }
    Ok(FlowMap {
        grid,
        time_span: (t0, t1),
        displacement: d,
        midpoints,
    })
}

fn sample_along(f: &ScalarField2D, d: &[Vec<f64>; 2]) -> Vec<f64> {
    let grid = f.grid();
    let n = grid.n();
    let inv_h = 1.0 / grid.spacing();
    let s = BicubicSampler::new(f);
    let mut out = Vec::with_capacity(grid.len());
    for i2 in 0..n {
        for i1 in 0..n {
            let idx = i2 * n + i1;
            out.push(s.sample_cells(i1 as f64 + d[0][idx] * inv_h, i2 as f64 + d[1][idx] * inv_h));
        }
    }
    out
}

/// Semi-Lagrangian update `g_new(x) = g(X⁻¹(x)) + ∫ source(X(s), s) ds`,
/// the integral taken with the midpoint rule on the flow's substeps.
pub fn advect(
    g: &ScalarField2D,
    flow: &FlowMap,
    source: Option<&dyn SourceProvider>,
) -> Result<ScalarField2D> {
    if g.grid() != &flow.grid {
        return Err(Error::GridMismatch);
    }
    let mut out = sample_along(g, &flow.displacement);
    if let Some(src) = source {
        let (t0, t1) = flow.time_span;
        let h = (t1 - t0) / flow.midpoints.len() as f64;
        for (t, d) in &flow.midpoints {
            let s = src.source_at(*t)?;
            if s.grid() != &flow.grid {
                return Err(Error::GridMismatch);
            }
            for (o, v) in out.iter_mut().zip(sample_along(&s, d)) {
                *o += h * v;
            }
        }
    }
    let out = ScalarField2D::from_values(flow.grid, out)?;
    if !out.is_finite() {
        return Err(Error::NonFiniteField("advected field"));
    }
    Ok(out)
}
