//! Layers of the Gelfand spectrum of `a(G)` and evaluation at the point at
//! infinity of `SL_2(R)`.

use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::labels::{Atom, Component, GroupKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "group", content = "n", rename_all = "lowercase")]
pub enum SpectrumGroup {
    Heisenberg(usize),
    Sl2r,
    /// Any Moore group, where `a(G) = A_F(G)`.
    Moore,
}

/// The space a layer is a copy of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayerTarget {
    Group,
    /// `H~_n`, the Heisenberg group with its centre compactified to `R^ap`.
    PartialCompactification,
    AlmostPeriodic,
    PointAtInfinity,
}

/// How the layer maps into the spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Homomorphism {
    Identity,
    GammaTilde,
    GammaAp,
    /// Inclusion of `SL_2(R)` in its one-point compactification.
    OnePoint,
}

impl fmt::Display for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Homomorphism::Identity => "identity",
            Homomorphism::GammaTilde => "gamma~",
            Homomorphism::GammaAp => "gamma_ap",
            Homomorphism::OnePoint => "one-point",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumLayer {
    pub name: String,
    pub target: LayerTarget,
    pub homomorphism: Homomorphism,
    /// Summands of `a(G)` that do not vanish on this layer.
    pub visible: Component,
}

impl fmt::Display for SpectrumLayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} via {} (visible: {})", self.name, self.homomorphism, self.visible)
    }
}

fn layer(name: String, target: LayerTarget, homomorphism: Homomorphism, visible: Component) -> SpectrumLayer {
    SpectrumLayer { name, target, homomorphism, visible }
}

fn c(text: &str) -> Component {
    text.parse().expect("built-in component")
}

/// Ordered layers: `H_n ⊔ H~_n ⊔ H_n^ap`, `SL_2(R) ⊔ {∞}`, or `G^ap`.
pub fn spectrum_layers(group: SpectrumGroup) -> Vec<SpectrumLayer> {
    use Homomorphism::*;
    use LayerTarget::*;
    match group {
        SpectrumGroup::Heisenberg(n) => vec![
            layer(format!("H_{n}"), Group, Identity, c("rho{h!=0} ⊕ A(G/Z)oq ⊕ AF")),
            layer(format!("H~_{n}"), PartialCompactification, GammaTilde, c("rho{h!=0} ⊕ A(G/Z)oq")),
            layer(format!("H_{n}^ap"), AlmostPeriodic, GammaAp, c("AF")),
        ],
        SpectrumGroup::Sl2r => vec![
            layer("SL2(R)".into(), Group, Identity, Component::sl2_pure().union(&Component::sl2_regular())),
            layer("infinity".into(), PointAtInfinity, OnePoint, c("C1")),
        ],
        SpectrumGroup::Moore => vec![layer("G^ap".into(), AlmostPeriodic, GammaAp, c("AF"))],
    }
}

/// `u = v + α1` in `B(SL_2(R)) = B_0 ⊕ C1`: the constant term and the
/// summands vanishing at infinity, each atom carrying a coefficient weight.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sl2Decomposition {
    constant: Option<Complex64>,
    vanishing: Vec<(Atom, Complex64)>,
}

impl Sl2Decomposition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(alpha: Complex64) -> Self {
        Self { constant: Some(alpha), vanishing: Vec::new() }
    }

    pub fn with_constant(mut self, alpha: Complex64) -> Self {
        self.constant = Some(alpha);
        self
    }

    /// Adds a summand vanishing at infinity; the trivial line belongs in the constant.
    pub fn with_part(mut self, atom: Atom, weight: Complex64) -> Result<Self> {
        if atom.group() != GroupKind::Sl2r {
            return Err(Error::GroupMismatch(format!("{atom} is not an SL(2,R) atom")));
        }
        if atom == Atom::Trivial {
            return Err(Error::InvalidParameter("the trivial line is the constant term".into()));
        }
        atom.validate()?;
        self.vanishing.push((atom, weight));
        Ok(self)
    }

    pub fn parts(&self) -> &[(Atom, Complex64)] {
        &self.vanishing
    }

    pub fn constant_term(&self) -> Option<Complex64> {
        self.constant
    }

    /// Product in `B(G)`: `B_0` is an ideal, so every cross term lands in it.
    pub fn product(&self, other: &Self) -> Self {
        let constant = match (self.constant, other.constant) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        let cross = !(self.vanishing.is_empty() || other.vanishing.is_empty())
            || (!self.vanishing.is_empty() && other.constant.is_some())
            || (!other.vanishing.is_empty() && self.constant.is_some());
        let vanishing = if cross { vec![(Atom::Rajchman, Complex64::new(1.0, 0.0))] } else { Vec::new() };
        Self { constant, vanishing }
    }
}

impl Add for Sl2Decomposition {
    type Output = Sl2Decomposition;

    fn add(mut self, rhs: Sl2Decomposition) -> Sl2Decomposition {
        self.constant = match (self.constant, rhs.constant) {
            (Some(a), Some(b)) => Some(a + b),
            (a, b) => a.or(b),
        };
        self.vanishing.extend(rhs.vanishing);
        self
    }
}

impl Mul<Complex64> for Sl2Decomposition {
    type Output = Sl2Decomposition;

    fn mul(mut self, s: Complex64) -> Sl2Decomposition {
        self.constant = self.constant.map(|a| a * s);
        for (_, w) in &mut self.vanishing {
            *w *= s;
        }
        self
    }
}

/// The value at the point at infinity, which is the constant term.
pub fn evaluate_at_infinity(decomp: &Sl2Decomposition) -> Result<Complex64> {
    decomp.constant.ok_or_else(|| Error::Precondition("decomposition has no explicit constant term".into()))
}
