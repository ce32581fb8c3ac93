//! `rho_h(p,q,t) f(x) = e^{i(ht + qx)} f(x + hp)` on a periodic grid, and its
//! matrix coefficients.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{shift_along_x, shift_along_y, shift_line, GridFunction, LinePlans};
use crate::error::{Error, Result};
use crate::group::FloatElement;

fn scalar_coords(g: &FloatElement) -> Result<(f64, f64, f64)> {
    if g.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: g.dim() });
    }
    Ok((g.p()[0], g.q()[0], *g.t()))
}

fn check_planck(h: f64) -> Result<()> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("Schrödinger parameter h = {h} must be nonzero and finite")));
    }
    Ok(())
}

fn require_dims(f: &GridFunction, dims: usize) -> Result<()> {
    if f.dims() != dims {
        return Err(Error::Grid(format!("expected a {dims}-D grid, got {}-D", f.dims())));
    }
    Ok(())
}

pub fn apply_schrodinger(h: f64, g: &FloatElement, f: &GridFunction) -> Result<GridFunction> {
    check_planck(h)?;
    require_dims(f, 1)?;
    let (p, q, t) = scalar_coords(g)?;
    let mut out = f.clone();
    shift_line(&mut out.values, f.spec.dx(), h * p, &LinePlans::new(f.spec.n));
    for (k, v) in out.values.iter_mut().enumerate() {
        *v *= Complex64::from_polar(1.0, h * t + q * f.spec.x(k));
    }
    Ok(out)
}

/// `(rho_h ⊗ rho_h')(g) F(x,y) = e^{i((h+h')t + q(x+y))} F(x + hp, y + h'p)`.
pub fn apply_schrodinger_pair(h: f64, h2: f64, g: &FloatElement, f: &GridFunction) -> Result<GridFunction> {
    check_planck(h)?;
    check_planck(h2)?;
    require_dims(f, 2)?;
    let (p, q, t) = scalar_coords(g)?;
    let (n, dx) = (f.spec.n, f.spec.dx());
    let mut values = f.values.clone();
    shift_along_x(&mut values, n, dx, |_| h * p);
    shift_along_y(&mut values, n, dx, |_| h2 * p);
    for (idx, v) in values.iter_mut().enumerate() {
        let (x, y) = (f.spec.x(idx / n), f.spec.x(idx % n));
        *v *= Complex64::from_polar(1.0, (h + h2) * t + q * (x + y));
    }
    GridFunction::new(f.spec, values)
}

/// `⟨rho_h(g) ξ, η⟩`.
pub fn matrix_coefficient(h: f64, xi: &GridFunction, eta: &GridFunction, g: &FloatElement) -> Result<Complex64> {
    xi.check_same_grid(eta)?;
    apply_schrodinger(h, g, xi)?.inner(eta)
}

/// `⟨rho_h(g) ξ₁, η₁⟩ ⟨rho_h'(g) ξ₂, η₂⟩`.
pub fn tensor_coefficient(h: f64, h2: f64, vectors: [&GridFunction; 4], g: &FloatElement) -> Result<Complex64> {
    let [xi1, eta1, xi2, eta2] = vectors;
    xi1.check_same_grid(xi2)?;
    Ok(matrix_coefficient(h, xi1, eta1, g)? * matrix_coefficient(h2, xi2, eta2, g)?)
}

/// Closed form of `⟨rho_h(p,q,t) γ, γ⟩` for `γ(x) = π^{-1/4} e^{-x²/2}`:
/// `e^{iht} exp(-(hp)²/4 - q²/4 - i hp q / 2)`.
pub fn gaussian_coefficient(h: f64, p: f64, q: f64, t: f64) -> Complex64 {
    let a = h * p;
    Complex64::from_polar(1.0, h * t) * Complex64::new(-(a * a) / 4.0 - q * q / 4.0, -a * q / 2.0).exp()
}

/// `⟨lambda(p,q) ξ, η⟩` for the regular representation of `R²`,
/// `lambda(a,b) F(x,y) = F(x - a, y - b)`, pulled back to the group.
fn quotient_regular(xi: &GridFunction, eta: &GridFunction, g: &FloatElement) -> Result<Complex64> {
    require_dims(xi, 2)?;
    xi.check_same_grid(eta)?;
    let (p, q, _) = scalar_coords(g)?;
    let (n, dx) = (xi.spec.n, xi.spec.dx());
    let mut values = xi.values.clone();
    shift_along_x(&mut values, n, dx, |_| -p);
    shift_along_y(&mut values, n, dx, |_| -q);
    GridFunction::new(xi.spec, values)?.inner(eta)
}

/// A matrix coefficient `g -> ⟨pi(g) ξ, η⟩` together with its vectors.
#[derive(Clone, Debug)]
pub enum CoefficientFunction {
    Schrodinger {
        h: f64,
        xi: GridFunction,
        eta: GridFunction,
    },
    Tensor {
        h: f64,
        h2: f64,
        xi: [GridFunction; 2],
        eta: [GridFunction; 2],
    },
    /// Coefficient of `lambda_{R²} o q` on `L²(R²)`.
    QuotientRegular {
        xi: GridFunction,
        eta: GridFunction,
    },
    Scaled(Box<CoefficientFunction>, f64),
}

impl CoefficientFunction {
    pub fn schrodinger(h: f64, xi: GridFunction, eta: GridFunction) -> Result<Self> {
        check_planck(h)?;
        require_dims(&xi, 1)?;
        xi.check_same_grid(&eta)?;
        Ok(Self::Schrodinger { h, xi, eta })
    }

    pub fn diagonal(h: f64, xi: GridFunction) -> Result<Self> {
        Self::schrodinger(h, xi.clone(), xi)
    }

    pub fn tensor(h: f64, h2: f64, xi: [GridFunction; 2], eta: [GridFunction; 2]) -> Result<Self> {
        check_planck(h)?;
        check_planck(h2)?;
        for v in xi.iter().chain(&eta) {
            require_dims(v, 1)?;
            v.check_same_grid(&xi[0])?;
        }
        Ok(Self::Tensor { h, h2, xi, eta })
    }

    pub fn quotient_regular(xi: GridFunction, eta: GridFunction) -> Result<Self> {
        require_dims(&xi, 2)?;
        xi.check_same_grid(&eta)?;
        Ok(Self::QuotientRegular { xi, eta })
    }

    pub fn negated(self) -> Self {
        self.scaled(-1.0)
    }

    pub fn scaled(self, c: f64) -> Self {
        Self::Scaled(Box::new(self), c)
    }

    /// The `h` with `phi(0,0,t) = e^{iht} phi(0,0,0)`.
    pub fn central_parameter(&self) -> f64 {
        match self {
            Self::Schrodinger { h, .. } => *h,
            Self::Tensor { h, h2, .. } => h + h2,
            Self::QuotientRegular { .. } => 0.0,
            Self::Scaled(inner, _) => inner.central_parameter(),
        }
    }

    pub fn eval(&self, g: &FloatElement) -> Result<Complex64> {
        match self {
            Self::Schrodinger { h, xi, eta } => matrix_coefficient(*h, xi, eta, g),
            Self::Tensor { h, h2, xi, eta } => tensor_coefficient(*h, *h2, [&xi[0], &eta[0], &xi[1], &eta[1]], g),
            Self::QuotientRegular { xi, eta } => quotient_regular(xi, eta, g),
            Self::Scaled(inner, c) => Ok(inner.eval(g)? * *c),
        }
    }
}

/// Smallest eigenvalue of the Hermitian part of `[phi(s_i^{-1} s_j)]`.
pub fn pd_gram_min_eig(phi: &CoefficientFunction, sample: &[FloatElement]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InvalidParameter("Gram test needs a nonempty sample".into()));
    }
    let m = sample.len();
    let inverses: Vec<FloatElement> = sample.iter().map(FloatElement::inverse).collect();
    let entries = (0..m * m)
        .into_par_iter()
        .map(|idx| phi.eval(&inverses[idx / m].multiply(&sample[idx % m])?))
        .collect::<Result<Vec<_>>>()?;
    let g = DMatrix::from_row_slice(m, m, &entries);
    let hermitian = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let eigen = hermitian.symmetric_eigen();
    Ok(eigen.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// `max_t |phi(0,0,t) - e^{iht} phi(0,0,0)|`.
pub fn central_character_residual(phi: &CoefficientFunction, h: f64, t_samples: &[f64]) -> Result<f64> {
    let base = phi.eval(&FloatElement::identity(1))?;
    let residuals = t_samples
        .par_iter()
        .map(|&t| Ok((phi.eval(&FloatElement::central(1, t))? - Complex64::from_polar(1.0, h * t) * base).norm()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}
