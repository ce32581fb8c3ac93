//! The Heisenberg group `H_n` in polarized coordinates.
//!
//! Points are triples `(p, q, t)` with `p, q` in `R^n` and `t` real, multiplied by
//!
//! ```text
//! (p, q, t)(p', q', t') = (p + p', q + q', t + p.q' + t')
//! ```
//!
//! Coordinates are generic over [`Coordinate`]: exact rationals ([`ExactElement`])
//! for identity checks that must hold with equality, and `f64` ([`FloatElement`])
//! for numerical work.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Scalar type usable as a Heisenberg coordinate.
pub trait Coordinate:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn to_f64(&self) -> f64;
}

impl Coordinate for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Coordinate for Rational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// A point `(p, q, t)` of `H_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct HnElement<T> {
    p: Vec<T>,
    q: Vec<T>,
    t: T,
}

pub type ExactElement = HnElement<Rational>;
pub type FloatElement = HnElement<f64>;

fn dot<T: Coordinate>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

impl<T: Coordinate> HnElement<T> {
    pub fn new(p: Vec<T>, q: Vec<T>, t: T) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParameter("Heisenberg dimension n must be at least 1".into()));
        }
        if p.len() != q.len() {
            return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
        }
        Ok(Self { p, q, t })
    }

    pub fn identity(n: usize) -> Self {
        Self::central(n, T::zero())
    }

    /// The central element `(0, 0, t)`.
    pub fn central(n: usize, t: T) -> Self {
        assert!(n >= 1, "Heisenberg dimension must be at least 1");
        Self { p: vec![T::zero(); n], q: vec![T::zero(); n], t }
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[T] {
        &self.p
    }

    pub fn q(&self) -> &[T] {
        &self.q
    }

    pub fn t(&self) -> &T {
        &self.t
    }

    pub fn is_identity(&self) -> bool {
        self.t.is_zero() && self.p.iter().chain(&self.q).all(Zero::is_zero)
    }

    /// Group product `self * other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let p = self.p.iter().zip(&other.p).map(|(a, b)| a.clone() + b.clone()).collect();
        let q = self.q.iter().zip(&other.q).map(|(a, b)| a.clone() + b.clone()).collect();
        let t = self.t.clone() + dot(&self.p, &other.q) + other.t.clone();
        Ok(Self { p, q, t })
    }

    /// `(p, q, t)^{-1} = (-p, -q, -t + p.q)`.
    pub fn inverse(&self) -> Self {
        Self {
            p: self.p.iter().cloned().map(Neg::neg).collect(),
            q: self.q.iter().cloned().map(Neg::neg).collect(),
            t: -self.t.clone() + dot(&self.p, &self.q),
        }
    }

    /// Image under the quotient map `H_n -> H_n / Z = R^{2n}`, as `(p, q)`.
    pub fn quotient_project(&self) -> Vec<T> {
        self.p.iter().chain(&self.q).cloned().collect()
    }

    pub fn to_float(&self) -> FloatElement {
        HnElement {
            p: self.p.iter().map(Coordinate::to_f64).collect(),
            q: self.q.iter().map(Coordinate::to_f64).collect(),
            t: self.t.to_f64(),
        }
    }
}

impl FloatElement {
    /// Shorthand for `n = 1` float elements.
    pub fn scalar(p: f64, q: f64, t: f64) -> Self {
        Self { p: vec![p], q: vec![q], t }
    }
}

impl ExactElement {
    pub fn from_integers(p: &[i64], q: &[i64], t: i64) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x.into())).collect();
        Self::new(conv(p), conv(q), Rational::from_integer(t.into()))
    }
}

impl<T: Coordinate + fmt::Display> fmt::Display for HnElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[T]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({}; {}; {})", join(&self.p), join(&self.q), self.t)
    }
}

/// Parameters `(xi, eta)` of the one-dimensional character `chi_{xi,eta}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterParams {
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
}

impl CharacterParams {
    pub fn new(xi: Vec<f64>, eta: Vec<f64>) -> Result<Self> {
        if xi.len() != eta.len() {
            return Err(Error::DimensionMismatch { expected: xi.len(), found: eta.len() });
        }
        Ok(Self { xi, eta })
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    /// `chi_{xi,eta}(p, q, t) = exp(i (p.xi + q.eta))`.
    pub fn eval<T: Coordinate>(&self, a: &HnElement<T>) -> Result<Complex64> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: a.dim() });
        }
        let phase: f64 = a.p.iter().zip(&self.xi).map(|(p, x)| p.to_f64() * x).sum::<f64>()
            + a.q.iter().zip(&self.eta).map(|(q, e)| q.to_f64() * e).sum::<f64>();
        Ok(Complex64::from_polar(1.0, phase))
    }

    /// Pointwise product of characters: parameters add.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(Self { xi: add(&self.xi, &other.xi), eta: add(&self.eta, &other.eta) })
    }
}

/// Box grid on `R^{2n+1}` for the Haar-invariance quadrature.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HaarGrid {
    /// Cells per axis.
    pub points: usize,
    /// The box is `[-half_width, half_width]^{2n+1}`.
    pub half_width: f64,
    pub n: usize,
}

impl Default for HaarGrid {
    fn default() -> Self {
        Self { points: 64, half_width: 8.0, n: 1 }
    }
}

impl HaarGrid {
    pub fn refined(&self) -> Self {
        Self { points: self.points * 2, ..self.clone() }
    }

    fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    fn validate(&self) -> Result<()> {
        if self.points < 2 || !(self.half_width > 0.0) || self.n == 0 {
            return Err(Error::Grid(format!("invalid Haar grid {self:?}")));
        }
        Ok(())
    }
}

/// Relative size below which a boundary sample counts as zero.
const SUPPORT_THRESHOLD: f64 = 1e-10;

/// `|sum phi(shift * x) vol - sum phi(x) vol|` over the midpoint grid of the box.
///
/// A small value is numerical evidence that Lebesgue measure on `R^{2n+1}` is
/// left invariant under the polarized group law. `phi` receives the
/// coordinates `(p_1..p_n, q_1..q_n, t)`.
pub fn haar_invariance_residual<F>(phi: F, shift: &FloatElement, grid: &HaarGrid) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    grid.validate()?;
    if shift.dim() != grid.n {
        return Err(Error::DimensionMismatch { expected: grid.n, found: shift.dim() });
    }
    let n = grid.n;
    let d = 2 * n + 1;
    let m = grid.points;
    let h = grid.spacing();
    let coord = |k: usize| -grid.half_width + (k as f64 + 0.5) * h;

    // Partial sums per leading index, combined in order so the result does not
    // depend on thread scheduling.
    let partials: Vec<(f64, f64, f64, f64)> = (0..m)
        .into_par_iter()
        .map(|i0| {
            let mut plain = 0.0;
            let mut moved = 0.0;
            let mut peak = 0.0f64;
            let mut edge = 0.0f64;
            let mut idx = vec![0usize; d];
            idx[0] = i0;
            let mut x = vec![0.0; d];
            let mut y = vec![0.0; d];
            let inner = m.pow((d - 1) as u32);
            for flat in 0..inner {
                let mut r = flat;
                for slot in idx.iter_mut().skip(1).rev() {
                    *slot = r % m;
                    r /= m;
                }
                for (xi, &k) in x.iter_mut().zip(&idx) {
                    *xi = coord(k);
                }
                // shift * x in polarized coordinates
                let mut pq = shift.t;
                for j in 0..n {
                    y[j] = shift.p[j] + x[j];
                    y[n + j] = shift.q[j] + x[n + j];
                    pq += shift.p[j] * x[n + j];
                }
                y[2 * n] = pq + x[2 * n];
                let a = phi(&x);
                let b = phi(&y);
                plain += a;
                moved += b;
                peak = peak.max(a.abs()).max(b.abs());
                if idx.iter().any(|&k| k == 0 || k == m - 1) {
                    edge = edge.max(a.abs()).max(b.abs());
                }
            }
            (plain, moved, peak, edge)
        })
        .collect();

    let (mut plain, mut moved, mut peak, mut edge) = (0.0, 0.0, 0.0f64, 0.0f64);
    for (a, b, p, e) in partials {
        plain += a;
        moved += b;
        peak = peak.max(p);
        edge = edge.max(e);
    }
    if edge > SUPPORT_THRESHOLD * peak.max(f64::MIN_POSITIVE) {
        return Err(Error::SupportLeavesBox(edge));
    }
    let vol = h.powi(d as i32);
    Ok((moved * vol - plain * vol).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn exact(p: i64, qq: i64, t: i64) -> ExactElement {
        ExactElement::from_integers(&[p], &[qq], t).unwrap()
    }

    #[test]
    fn group_law_examples() {
        assert_eq!(exact(1, 0, 0).multiply(&exact(0, 1, 0)).unwrap(), exact(1, 1, 1));
        let a = exact(3, -2, 7);
        assert_eq!(ExactElement::identity(1).multiply(&a).unwrap(), a);
        assert!(a.multiply(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(exact(0, 0, 0).inverse(), exact(0, 0, 0));
        // (1,1,0)(p',q',t') = 0 forces p'=q'=-1 and 0 + 1*(-1) + t' = 0.
        let inv = exact(1, 1, 0).inverse();
        assert_eq!(inv, exact(-1, -1, 1));
        assert!(exact(1, 1, 0).multiply(&inv).unwrap().is_identity());
        assert_eq!(exact(0, 0, 5).inverse(), exact(0, 0, -5));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = ExactElement::from_integers(&[1], &[0], 0).unwrap();
        let b = ExactElement::from_integers(&[1, 2], &[0, 0], 0).unwrap();
        assert!(matches!(a.multiply(&b), Err(Error::DimensionMismatch { .. })));
        assert!(ExactElement::new(vec![q(1, 1)], vec![], q(0, 1)).is_err());
    }

    #[test]
    fn quotient_projection_drops_center() {
        assert_eq!(exact(1, 2, 7).quotient_project(), vec![q(1, 1), q(2, 1)]);
        assert_eq!(exact(0, 0, 9).quotient_project(), vec![q(0, 1), q(0, 1)]);
    }

    #[test]
    fn character_examples() {
        let trivial = CharacterParams::new(vec![0.0], vec![0.0]).unwrap();
        let a = FloatElement::scalar(1.3, -0.4, 2.0);
        assert_eq!(trivial.eval(&a).unwrap(), Complex64::new(1.0, 0.0));

        let c = CharacterParams::new(vec![1.0], vec![1.0]).unwrap();
        let v = c.eval(&FloatElement::scalar(std::f64::consts::PI, 0.0, 5.0)).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-15);

        let c2 = CharacterParams::new(vec![-0.5], vec![2.0]).unwrap();
        let lhs = c.eval(&a).unwrap() * c2.eval(&a).unwrap();
        let rhs = c.product(&c2).unwrap().eval(&a).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    fn gaussian(x: &[f64]) -> f64 {
        (-x.iter().map(|v| v * v).sum::<f64>() / 2.0).exp()
    }

    #[test]
    fn haar_identity_shift_is_exact() {
        let grid = HaarGrid { points: 24, half_width: 10.0, n: 1 };
        let r = haar_invariance_residual(gaussian, &FloatElement::identity(1), &grid).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn haar_gaussian_shifts() {
        let grid = HaarGrid { points: 48, half_width: 11.0, n: 1 };
        for shift in [FloatElement::scalar(1.0, 0.0, 0.0), FloatElement::central(1, 3.0)] {
            let coarse = haar_invariance_residual(gaussian, &shift, &grid).unwrap();
            let fine = haar_invariance_residual(gaussian, &shift, &grid.refined()).unwrap();
            assert!(coarse <= 1e-6, "{coarse}");
            assert!(fine <= coarse.max(1e-12), "{fine} vs {coarse}");
        }
    }

    #[test]
    fn haar_rejects_truncated_support() {
        let grid = HaarGrid { points: 16, half_width: 2.0, n: 1 };
        let r = haar_invariance_residual(gaussian, &FloatElement::scalar(1.0, 0.0, 0.0), &grid);
        assert!(matches!(r, Err(Error::SupportLeavesBox(_))));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| q(n, d))
    }

    fn element(n: usize) -> impl Strategy<Value = ExactElement> {
        (
            proptest::collection::vec(small_rational(), n),
            proptest::collection::vec(small_rational(), n),
            small_rational(),
        )
            .prop_map(|(p, qq, t)| ExactElement::new(p, qq, t).unwrap())
    }

    proptest! {
        #[test]
        fn associativity_exact(a in element(2), b in element(2), c in element(2)) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn center_commutes(a in element(2), t in small_rational()) {
            let z = ExactElement::central(2, t);
            prop_assert_eq!(a.multiply(&z).unwrap(), z.multiply(&a).unwrap());
        }

        #[test]
        fn quotient_is_homomorphism(a in element(1), b in element(1), t in small_rational()) {
            let ab = a.multiply(&b).unwrap().quotient_project();
            let sum: Vec<_> = a.quotient_project().iter().zip(b.quotient_project())
                .map(|(x, y)| x + y).collect();
            prop_assert_eq!(&ab, &sum);
            let z = ExactElement::central(1, t);
            prop_assert_eq!(a.multiply(&z).unwrap().quotient_project(), a.quotient_project());
            // kernel is exactly the center
            let proj = a.quotient_project();
            prop_assert_eq!(proj.iter().all(Zero::is_zero), a.p().iter().chain(a.q()).all(Zero::is_zero));
        }

        #[test]
        fn characters_are_unitary(a in element(1), b in element(1), xi in -3.0..3.0f64, eta in -3.0..3.0f64, t in -5.0..5.0f64) {
            let c = CharacterParams::new(vec![xi], vec![eta]).unwrap();
            let (fa, fb) = (a.to_float(), b.to_float());
            let ab = fa.multiply(&fb).unwrap();
            let prod = c.eval(&fa).unwrap() * c.eval(&fb).unwrap();
            prop_assert!((c.eval(&ab).unwrap() - prod).norm() < 1e-12);
            prop_assert!((c.eval(&fa).unwrap().norm() - 1.0).abs() < 1e-15);
            let central = FloatElement::central(1, t);
            prop_assert!((c.eval(&central).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }
}
