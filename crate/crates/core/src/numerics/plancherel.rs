//! The Fourier-Plancherel transform `V`, the rotation `W`, and the grid check
//! of `W (rho_h ⊗ rho_{-h})(g) W* = (V ⊗ I) T(√2 q, √2 hp) (V* ⊗ I)`.
//!
//! `V f(ω) = (2π)^{-1/2} ∫ f(x) e^{iωx} dx`. With this sign `V T_a V*` is
//! multiplication by `e^{iax}`, which is what the identity needs. On a grid of
//! spacing `Δx` the transform is sampled on the dual grid of spacing
//! `2π/(NΔx)`; the dual of the dual is the original grid, so `V V* = I` and
//! `V² f(x) = f(-x)` hold to roundoff.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{shift_along_x, shift_along_y, shift_rows, transpose, GridFunction, GridSpec, LinePlans};
use super::schrodinger::apply_schrodinger_pair;
use crate::error::{Error, Result};
use crate::group::FloatElement;

fn alternate(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Transform one line sampled at spacing `dx`; `forward` selects `V`, otherwise `V*`.
fn plancherel_line(line: &mut [Complex64], dx: f64, forward: bool, plans: &LinePlans) {
    for (k, v) in line.iter_mut().enumerate() {
        *v *= alternate(k);
    }
    if forward {
        plans.inverse.process(line);
    } else {
        plans.forward.process(line);
    }
    let scale = dx / (2.0 * PI).sqrt();
    for (j, v) in line.iter_mut().enumerate() {
        *v *= scale * alternate(j);
    }
}

fn plancherel_1d(f: &GridFunction, forward: bool) -> Result<GridFunction> {
    if f.dims() != 1 {
        return Err(Error::Grid("the Fourier-Plancherel transform acts on 1-D grids".into()));
    }
    let mut values = f.values.clone();
    plancherel_line(&mut values, f.spec.dx(), forward, &LinePlans::new(f.spec.n));
    GridFunction::new(f.spec.dual(), values)
}

/// `V f`, sampled on `f.spec.dual()`.
pub fn fourier_plancherel(f: &GridFunction) -> Result<GridFunction> {
    plancherel_1d(f, true)
}

/// `V* f`, sampled on `f.spec.dual()`.
pub fn fourier_plancherel_inverse(f: &GridFunction) -> Result<GridFunction> {
    plancherel_1d(f, false)
}

/// Apply `V` or `V*` along `x` to 2-D data, each `x`-line (fixed `y_j`) at once.
fn plancherel_along_x(values: &mut Vec<Complex64>, n: usize, dx: f64, forward: bool) {
    let plans = LinePlans::new(n);
    let mut t = transpose(values, n);
    t.par_chunks_mut(n).for_each(|line| plancherel_line(line, dx, forward, &plans));
    *values = transpose(&t, n);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `W f(x,y) = f((x-y)/√2, (x+y)/√2)`.
    Forward,
    /// `W*`.
    Inverse,
}

/// Aliasing guard for the shear rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationGuard {
    /// Width of the boundary band as a fraction of `L`.
    pub band: f64,
    /// Allowed band energy relative to `‖f‖²`.
    pub threshold: f64,
}

impl Default for RotationGuard {
    fn default() -> Self {
        Self { band: 0.1, threshold: 1e-8 }
    }
}

impl RotationGuard {
    fn check(&self, values: &[Complex64], spec: GridSpec, total: f64) -> Result<()> {
        let energy = GridFunction { spec, values: values.to_vec() }.boundary_energy(self.band);
        let limit = self.threshold * total;
        if energy > limit {
            return Err(Error::GuardBand { energy, threshold: limit });
        }
        Ok(())
    }
}

pub fn rotation_45(f: &GridFunction, direction: Direction) -> Result<GridFunction> {
    rotation_45_with(f, direction, &RotationGuard::default())
}

/// `W` or `W*` as three band-limited shears, `R(θ) = S_x(-tan θ/2) S_y(sin θ) S_x(-tan θ/2)`.
/// `W` moves no mass radially, so no rescaling step is needed.
pub fn rotation_45_with(f: &GridFunction, direction: Direction, guard: &RotationGuard) -> Result<GridFunction> {
    if f.dims() != 2 {
        return Err(Error::Grid("rotation_45 needs a 2-D grid".into()));
    }
    let theta = match direction {
        Direction::Forward => PI / 4.0,
        Direction::Inverse => -PI / 4.0,
    };
    let (alpha, beta) = (-(theta / 2.0).tan(), theta.sin());
    let (n, dx, spec) = (f.spec.n, f.spec.dx(), f.spec);
    let total = f.norm_sqr();
    let coords = spec.coords();
    let mut values = f.values.clone();
    guard.check(&values, spec, total)?;
    // f(Mv) for M = A B A is A applied first
    shift_along_x(&mut values, n, dx, |j| alpha * coords[j]);
    guard.check(&values, spec, total)?;
    shift_along_y(&mut values, n, dx, |i| beta * coords[i]);
    guard.check(&values, spec, total)?;
    shift_along_x(&mut values, n, dx, |j| alpha * coords[j]);
    guard.check(&values, spec, total)?;
    GridFunction::new(spec, values)
}

/// Band-limited reference for [`rotation_45`], by direct evaluation.
pub fn rotate_exact(spec: GridSpec, f: impl Fn(f64, f64) -> Complex64, direction: Direction) -> Result<GridFunction> {
    let s = match direction {
        Direction::Forward => 1.0,
        Direction::Inverse => -1.0,
    };
    GridFunction::from_fn2(spec, |x, y| f(FRAC_1_SQRT_2 * (x - s * y), FRAC_1_SQRT_2 * (s * x + y)))
}

pub fn intertwiner_residual(h: f64, g: &FloatElement, f: &GridFunction) -> Result<f64> {
    intertwiner_residual_with(h, g, f, &RotationGuard::default())
}

/// `‖W (rho_h ⊗ rho_{-h})(g) W* f - (V ⊗ I) T(√2q, √2hp) (V* ⊗ I) f‖ / ‖f‖`.
pub fn intertwiner_residual_with(h: f64, g: &FloatElement, f: &GridFunction, guard: &RotationGuard) -> Result<f64> {
    if f.dims() != 2 {
        return Err(Error::Grid("the intertwiner acts on 2-D grids".into()));
    }
    if g.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: g.dim() });
    }
    let rotated = rotation_45_with(f, Direction::Inverse, guard)?;
    let acted = apply_schrodinger_pair(h, -h, g, &rotated)?;
    let lhs = rotation_45_with(&acted, Direction::Forward, guard)?;

    let (p, q) = (g.p()[0], g.q()[0]);
    let (n, dx) = (f.spec.n, f.spec.dx());
    let mut rhs = f.values.clone();
    // T(a, b) F(x, y) = F(x - a, y - b)
    shift_along_y(&mut rhs, n, dx, |_| -SQRT_2 * h * p);
    plancherel_along_x(&mut rhs, n, dx, false);
    let mut t = transpose(&rhs, n);
    shift_rows(&mut t, n, f.spec.dual().dx(), |_| -SQRT_2 * q);
    rhs = transpose(&t, n);
    plancherel_along_x(&mut rhs, n, f.spec.dual().dx(), true);

    Ok(lhs.distance(&GridFunction::new(f.spec, rhs)?)? / f.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(n: usize, l: f64) -> GridSpec {
        GridSpec::line(n, l).unwrap()
    }

    fn plane(n: usize, l: f64) -> GridSpec {
        GridSpec::plane(n, l).unwrap()
    }

    fn random(spec: GridSpec, seed: u64) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v =
            (0..spec.len()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        GridFunction::new(spec, v).unwrap()
    }

    #[test]
    fn plancherel_is_unitary_and_inverts() {
        for n in [64, 256, 1024] {
            let f = random(line(n, 20.0), n as u64);
            let vf = fourier_plancherel(&f).unwrap();
            assert!((vf.norm() - f.norm()).abs() <= 1e-12 * f.norm());
            let back = fourier_plancherel_inverse(&vf).unwrap();
            assert!(back.distance(&f).unwrap() <= 1e-12 * f.norm());
            let other = fourier_plancherel(&fourier_plancherel_inverse(&f).unwrap()).unwrap();
            assert!(other.distance(&f).unwrap() <= 1e-12 * f.norm());
        }
    }

    #[test]
    fn gaussian_is_fixed() {
        let s = line(1024, 20.0);
        let g = GridFunction::gaussian(s, 0.0, 1.0).unwrap();
        let vg = fourier_plancherel(&g).unwrap();
        let expected = GridFunction::gaussian(s.dual(), 0.0, 1.0).unwrap();
        assert!(vg.distance(&expected).unwrap() < 1e-8);
    }

    #[test]
    fn transform_of_shifted_gaussian() {
        // V of γ(x - c) is e^{icω} γ(ω)
        let s = line(512, 16.0);
        let c = 1.25;
        let g = GridFunction::gaussian(s, c, 1.0).unwrap();
        let vg = fourier_plancherel(&g).unwrap();
        let d = s.dual();
        let expected =
            GridFunction::from_fn(d, |w| Complex64::from_polar(PI.powf(-0.25) * (-w * w / 2.0).exp(), c * w)).unwrap();
        assert!(vg.distance(&expected).unwrap() < 1e-10);
    }

    #[test]
    fn square_is_reflection() {
        let s = line(256, 10.0);
        let bump = |x: f64| {
            let r = x - 0.8;
            if r.abs() < 3.0 {
                Complex64::new((1.0 - r * r / 9.0).powi(6), 0.3 * (1.0 - r * r / 9.0).powi(6))
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let f = GridFunction::from_fn(s, bump).unwrap();
        let v2 = fourier_plancherel(&fourier_plancherel(&f).unwrap()).unwrap();
        let reflected = GridFunction::from_fn(s, |x| bump(-x)).unwrap();
        assert_eq!(v2.spec, s);
        assert!(v2.distance(&reflected).unwrap() < 1e-8);
        assert!(fourier_plancherel(&GridFunction::zeros(plane(8, 1.0))).is_err());
    }

    fn gauss2(c: (f64, f64), w: f64) -> impl Fn(f64, f64) -> Complex64 {
        move |x, y| Complex64::new((-((x - c.0).powi(2) + (y - c.1).powi(2)) / (2.0 * w * w)).exp(), 0.0)
    }

    #[test]
    fn rotation_round_trip_and_norm() {
        let s = plane(128, 10.0);
        let f = GridFunction::from_fn2(s, gauss2((1.0, -0.5), 1.1)).unwrap();
        let w = rotation_45(&f, Direction::Forward).unwrap();
        assert!((w.norm() - f.norm()).abs() <= 1e-8 * f.norm());
        let back = rotation_45(&w, Direction::Inverse).unwrap();
        assert!(back.distance(&f).unwrap() <= 1e-6 * f.norm());
        let back2 = rotation_45(&rotation_45(&f, Direction::Inverse).unwrap(), Direction::Forward).unwrap();
        assert!(back2.distance(&f).unwrap() <= 1e-6 * f.norm());
    }

    #[test]
    fn rotation_matches_direct_evaluation() {
        let s = plane(128, 10.0);
        let shape = gauss2((1.0, -0.5), 1.0);
        let f = GridFunction::from_fn2(s, &shape).unwrap();
        for dir in [Direction::Forward, Direction::Inverse] {
            let got = rotation_45(&f, dir).unwrap();
            let exact = rotate_exact(s, &shape, dir).unwrap();
            assert!(got.distance(&exact).unwrap() <= 1e-6 * f.norm());
        }
        let iso = GridFunction::from_fn2(s, gauss2((0.0, 0.0), 1.0)).unwrap();
        let rotated = rotation_45(&iso, Direction::Forward).unwrap();
        assert!(rotated.distance(&iso).unwrap() <= 1e-6 * iso.norm());
    }

    #[test]
    fn rotation_guard_band() {
        let s = plane(64, 5.0);
        let wide = GridFunction::from_fn2(s, gauss2((0.0, 0.0), 2.5)).unwrap();
        assert!(matches!(rotation_45(&wide, Direction::Forward), Err(Error::GuardBand { .. })));
        // off-centre mass that the shears push into the band
        let corner = GridFunction::from_fn2(s, gauss2((3.0, 3.0), 0.4)).unwrap();
        assert!(matches!(rotation_45(&corner, Direction::Forward), Err(Error::GuardBand { .. })));
        let loose = RotationGuard { band: 0.1, threshold: 1.0 };
        assert!(rotation_45_with(&wide, Direction::Forward, &loose).is_ok());
    }

    #[test]
    fn intertwiner_trivial_cases() {
        let s = plane(128, 10.0);
        let f = GridFunction::from_fn2(s, gauss2((0.3, -0.2), 1.0)).unwrap();
        assert!(intertwiner_residual(1.0, &FloatElement::identity(1), &f).unwrap() <= 1e-12);
        assert!(intertwiner_residual(1.7, &FloatElement::central(1, 2.3), &f).unwrap() <= 1e-12);
        assert!(intertwiner_residual(0.0, &FloatElement::scalar(1.0, 0.0, 0.0), &f).is_err());
    }

    #[test]
    fn intertwiner_at_default_grid() {
        let s = plane(256, 12.0);
        let f = GridFunction::from_fn2(s, gauss2((0.0, 0.0), 1.0)).unwrap();
        let g = FloatElement::scalar(0.5, PI / 12.0 * 3.0, 0.0);
        let r = intertwiner_residual(1.0, &g, &f).unwrap();
        assert!(r <= 1e-6, "{r}");
    }
}
