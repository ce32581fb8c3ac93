//! Periodic sampling grids and band-limited translation.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};

/// `N` points per axis on `[-L, L)`, spacing `2L/N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub dims: usize,
}

impl GridSpec {
    pub fn new(n: usize, l: f64, dims: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Grid(format!("N = {n} must be a power of two and at least 8")));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::Grid(format!("L = {l} must be positive and finite")));
        }
        if !(dims == 1 || dims == 2) {
            return Err(Error::Grid(format!("dims = {dims} must be 1 or 2")));
        }
        Ok(Self { n, l, dims })
    }

    pub fn line(n: usize, l: f64) -> Result<Self> {
        Self::new(n, l, 1)
    }

    pub fn plane(n: usize, l: f64) -> Result<Self> {
        Self::new(n, l, 2)
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    /// Frequency spacing `π/L`.
    pub fn d_omega(&self) -> f64 {
        PI / self.l
    }

    pub fn x(&self, k: usize) -> f64 {
        -self.l + k as f64 * self.dx()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.x(k)).collect()
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dims as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight `Δx^dims`.
    pub fn weight(&self) -> f64 {
        self.dx().powi(self.dims as i32)
    }

    /// Grid on which the Fourier-Plancherel transform of a function on this
    /// grid is sampled: same `N`, spacing `π/L`.
    pub fn dual(&self) -> Self {
        Self { n: self.n, l: PI * self.n as f64 / (2.0 * self.l), dims: self.dims }
    }

    pub fn refined(&self) -> Self {
        Self { n: self.n * 2, ..*self }
    }

    pub fn with_dims(&self, dims: usize) -> Result<Self> {
        Self::new(self.n, self.l, dims)
    }

    fn same_as(&self, other: &GridSpec) -> bool {
        self.n == other.n && self.dims == other.dims && self.l == other.l
    }
}

/// Samples on a [`GridSpec`]. Two-dimensional data is stored with the `y`
/// index fastest: `values[i * N + j] = f(x_i, y_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub spec: GridSpec,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::DimensionMismatch { expected: spec.len(), found: values.len() });
        }
        Ok(Self { spec, values })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self { spec, values: vec![Complex64::new(0.0, 0.0); spec.len()] }
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if spec.dims != 1 {
            return Err(Error::Grid("from_fn needs a 1-D grid".into()));
        }
        Ok(Self { spec, values: spec.coords().into_iter().map(f).collect() })
    }

    pub fn from_fn2(spec: GridSpec, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        if spec.dims != 2 {
            return Err(Error::Grid("from_fn2 needs a 2-D grid".into()));
        }
        let xs = spec.coords();
        let values = xs.iter().flat_map(|&x| xs.iter().map(move |&y| (x, y))).map(|(x, y)| f(x, y)).collect();
        Ok(Self { spec, values })
    }

    /// The normalized Gaussian `π^{-1/4} exp(-(x-c)²/(2σ²)) / √σ`.
    pub fn gaussian(spec: GridSpec, center: f64, width: f64) -> Result<Self> {
        let norm = PI.powf(-0.25) / width.sqrt();
        Self::from_fn(spec, |x| Complex64::new(norm * (-(x - center).powi(2) / (2.0 * width * width)).exp(), 0.0))
    }

    /// Product of two normalized Gaussians.
    pub fn gaussian2(spec: GridSpec, center: (f64, f64), width: f64) -> Result<Self> {
        let norm = PI.powf(-0.5) / width;
        let s2 = 2.0 * width * width;
        Self::from_fn2(spec, |x, y| {
            Complex64::new(norm * (-((x - center.0).powi(2) + (y - center.1).powi(2)) / s2).exp(), 0.0)
        })
    }

    pub fn dims(&self) -> usize {
        self.spec.dims
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(Complex64::norm_sqr).sum::<f64>() * self.spec.weight()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.spec.same_as(&other.spec) {
            Ok(())
        } else {
            Err(Error::Grid(format!("grid mismatch: {:?} vs {:?}", self.spec, other.spec)))
        }
    }

    /// `⟨self, other⟩ = Σ self · conj(other) Δx^dims`.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let sum: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(sum * self.spec.weight())
    }

    pub fn distance(&self, other: &GridFunction) -> Result<f64> {
        self.check_same_grid(other)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((s * self.spec.weight()).sqrt())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { spec: self.spec, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn normalized(&self) -> Self {
        self.scaled(Complex64::new(1.0 / self.norm(), 0.0))
    }

    /// `f(x) g(y)` for two functions on the same line grid.
    pub fn outer(&self, other: &GridFunction) -> Result<Self> {
        self.check_same_grid(other)?;
        if self.dims() != 1 {
            return Err(Error::Grid("outer product needs 1-D factors".into()));
        }
        let values = self.values.iter().flat_map(|a| other.values.iter().map(move |b| a * b)).collect();
        Ok(Self { spec: self.spec.with_dims(2)?, values })
    }

    /// Largest `|f|` outside the central `(1 - fraction)` part of the box.
    pub fn boundary_energy(&self, fraction: f64) -> f64 {
        let limit = (1.0 - fraction) * self.spec.l;
        let xs = self.spec.coords();
        let outside = |k: usize| xs[k].abs() > limit;
        let n = self.spec.n;
        let s: f64 = match self.dims() {
            1 => (0..n).filter(|&k| outside(k)).map(|k| self.values[k].norm_sqr()).sum(),
            _ => (0..n * n)
                .filter(|&idx| outside(idx / n) || outside(idx % n))
                .map(|idx| self.values[idx].norm_sqr())
                .sum(),
        };
        s * self.spec.weight()
    }
}

/// FFT plans for lines of one length.
#[derive(Clone)]
pub(crate) struct LinePlans {
    pub forward: Arc<dyn Fft<f64>>,
    pub inverse: Arc<dyn Fft<f64>>,
}

impl LinePlans {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }
}

/// Signed DFT frequency index: `m` for `m < N/2`, `m - N` otherwise.
fn signed_index(m: usize, n: usize) -> f64 {
    if m < n / 2 {
        m as f64
    } else {
        m as f64 - n as f64
    }
}

/// `line[k] <- f(x_k + a)`: a phase ramp on the DFT, or an index rotation when
/// `a` is a whole number of grid steps.
pub(crate) fn shift_line(line: &mut [Complex64], dx: f64, a: f64, plans: &LinePlans) {
    if a == 0.0 {
        return;
    }
    let n = line.len();
    let steps = a / dx;
    if steps == steps.round() && steps.abs() < 1e15 {
        let s = (steps as i64).rem_euclid(n as i64) as usize;
        line.rotate_left(s);
        return;
    }
    plans.forward.process(line);
    let scale = 1.0 / n as f64;
    let base = 2.0 * PI * a / (n as f64 * dx);
    for (m, v) in line.iter_mut().enumerate() {
        *v *= Complex64::from_polar(scale, base * signed_index(m, n));
    }
    plans.inverse.process(line);
}

/// Band-limited circular translation `f(x) -> f(x + a)` on a 1-D grid.
pub fn fractional_shift(f: &GridFunction, a: f64) -> Result<GridFunction> {
    if f.dims() != 1 {
        return Err(Error::Grid("fractional_shift needs a 1-D grid".into()));
    }
    let mut out = f.clone();
    shift_line(&mut out.values, f.spec.dx(), a, &LinePlans::new(f.spec.n));
    Ok(out)
}

/// Square transpose of row-major `n × n` data.
pub(crate) fn transpose(values: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = values[i * n + j];
        }
    }
    out
}

/// Shift every contiguous row `r` by `amount(r)`.
pub(crate) fn shift_rows(values: &mut [Complex64], n: usize, dx: f64, amount: impl Fn(usize) -> f64 + Sync) {
    let plans = LinePlans::new(n);
    values.par_chunks_mut(n).enumerate().for_each(|(r, row)| shift_line(row, dx, amount(r), &plans));
}

/// Shift each `y`-line (fixed `x_i`) of 2-D data by `amount(i)`.
pub(crate) fn shift_along_y(values: &mut [Complex64], n: usize, dx: f64, amount: impl Fn(usize) -> f64 + Sync) {
    shift_rows(values, n, dx, amount);
}

/// Shift each `x`-line (fixed `y_j`) of 2-D data by `amount(j)`.
pub(crate) fn shift_along_x(values: &mut Vec<Complex64>, n: usize, dx: f64, amount: impl Fn(usize) -> f64 + Sync) {
    let mut t = transpose(values, n);
    shift_rows(&mut t, n, dx, amount);
    *values = transpose(&t, n);
}
