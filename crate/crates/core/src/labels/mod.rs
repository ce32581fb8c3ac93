//! Symbolic labels for irreducible representations and for closed subspaces
//! of the Fourier–Stieltjes algebra built from their coefficient spaces.
//!
//! A [`Component`] is an `l^1`-direct sum of [`Atom`]s. Each atom is a family
//! of coefficient spaces together with the parameters it ranges over; the
//! family also fixes the measure class (atomic sums versus Lebesgue direct
//! integrals), so `A_{Pi^+}` (atomic, [`Atom::PrincipalPlus`]) and `A_{pi^+}`
//! (Lebesgue, [`Atom::RegularPlus`]) never merge.

mod set;
mod text;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::Rational;

pub use set::{Endpoint, Interval, RealSet};
pub use text::parse_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Which group a label lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Heisenberg,
    Sl2r,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Heisenberg => "heisenberg",
            GroupKind::Sl2r => "sl2r",
        })
    }
}

/// Parameters `(xi, eta)` of a character of `H_n`, kept exact.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharLabel {
    pub xi: Vec<Rational>,
    pub eta: Vec<Rational>,
}

impl CharLabel {
    pub fn new(xi: Vec<Rational>, eta: Vec<Rational>) -> Result<Self> {
        if xi.is_empty() || xi.len() != eta.len() {
            return Err(Error::InvalidParameter(format!(
                "character needs xi and eta of equal positive length, got {} and {}",
                xi.len(),
                eta.len()
            )));
        }
        Ok(Self { xi, eta })
    }

    pub fn trivial(n: usize) -> Self {
        Self { xi: vec![Rational::zero(); n], eta: vec![Rational::zero(); n] }
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    pub fn product(&self, other: &Self) -> Self {
        let add = |a: &[Rational], b: &[Rational]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Self { xi: add(&self.xi, &other.xi), eta: add(&self.eta, &other.eta) }
    }
}

/// One irreducible unitary representation, up to equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RepLabel {
    /// `rho_h`, `h != 0`.
    Schrodinger(Rational),
    /// `chi_{xi,eta}`.
    Character(CharLabel),
    /// `pi_t^+`, `t >= 0`.
    PrincipalPlus(Rational),
    /// `pi_t^-`, `t > 0`.
    PrincipalMinus(Rational),
    /// `kappa_s`, `-1 < s < 0`.
    Complementary(Rational),
    /// `delta_n^{+/-}`, `n >= 2`.
    Discrete(Sign, u32),
    /// `delta_1^{+/-}`.
    MockDiscrete(Sign),
    Trivial,
}

impl RepLabel {
    pub fn group(&self) -> GroupKind {
        match self {
            RepLabel::Schrodinger(_) | RepLabel::Character(_) => GroupKind::Heisenberg,
            _ => GroupKind::Sl2r,
        }
    }

    pub fn validate(&self) -> Result<()> {
        Atom::from(self.clone()).validate()
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            RepLabel::Trivial => true,
            RepLabel::Character(c) => c.xi.iter().chain(&c.eta).all(Zero::is_zero),
            _ => false,
        }
    }
}

/// Finite or cofinite index set `{n >= 2}` for discrete series.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IndexSet {
    Finite(BTreeSet<u32>),
    All,
}

impl IndexSet {
    fn union(&self, other: &IndexSet) -> IndexSet {
        match (self, other) {
            (IndexSet::Finite(a), IndexSet::Finite(b)) => IndexSet::Finite(a | b),
            _ => IndexSet::All,
        }
    }

    fn is_subset(&self, other: &IndexSet) -> bool {
        match (self, other) {
            (_, IndexSet::All) => true,
            (IndexSet::All, IndexSet::Finite(_)) => false,
            (IndexSet::Finite(a), IndexSet::Finite(b)) => a.is_subset(b),
        }
    }

    fn is_empty(&self) -> bool {
        matches!(self, IndexSet::Finite(s) if s.is_empty())
    }
}

/// Family tag of an atom. The declaration order is the canonical order of atoms
/// inside a component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    SchrodingerFamily,
    QuotientFourier,
    HCharFamily,
    APFourier,
    RegularPlus,
    RegularMinus,
    RegularDiscrete,
    PrincipalPlusFamily,
    PrincipalMinusFamily,
    ComplementaryFamily,
    DiscreteFamily,
    MockDiscreteFamily,
    TrivialLine,
    SpineConstant,
    RajchmanConstant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureClass {
    Atomic,
    Lebesgue,
}

/// One `l^1`-summand of a [`Component`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `A_{rho_h}` for `h` in the set.
    Schrodinger(RealSet),
    /// `A(H_n/Z) o q`.
    QuotientFourier,
    /// A finite set of characters.
    Characters(BTreeSet<CharLabel>),
    /// `A_F = A(G^ap) o gamma_ap`, the closed span of all characters.
    AlmostPeriodic,
    /// `A_{pi^+}`, Lebesgue direct integral of the even principal series.
    RegularPlus,
    /// `A_{pi^-}`.
    RegularMinus,
    /// `A_delta`, the discrete-series part of the regular representation.
    RegularDiscrete,
    PrincipalPlus(RealSet),
    PrincipalMinus(RealSet),
    Complementary(RealSet),
    Discrete(Sign, IndexSet),
    MockDiscrete(Sign),
    /// `C 1`.
    Trivial,
    /// The spine `A*(G)`; documentation only.
    Spine,
    /// The Rajchman algebra `B_0(G)`; documentation only.
    Rajchman,
}

/// Merge key: atoms with equal keys are combined by taking parameter unions.
type AtomKey = (Family, Option<Sign>);

impl Atom {
    pub fn family(&self) -> Family {
        match self {
            Atom::Schrodinger(_) => Family::SchrodingerFamily,
            Atom::QuotientFourier => Family::QuotientFourier,
            Atom::Characters(_) => Family::HCharFamily,
            Atom::AlmostPeriodic => Family::APFourier,
            Atom::RegularPlus => Family::RegularPlus,
            Atom::RegularMinus => Family::RegularMinus,
            Atom::RegularDiscrete => Family::RegularDiscrete,
            Atom::PrincipalPlus(_) => Family::PrincipalPlusFamily,
            Atom::PrincipalMinus(_) => Family::PrincipalMinusFamily,
            Atom::Complementary(_) => Family::ComplementaryFamily,
            Atom::Discrete(..) => Family::DiscreteFamily,
            Atom::MockDiscrete(_) => Family::MockDiscreteFamily,
            Atom::Trivial => Family::TrivialLine,
            Atom::Spine => Family::SpineConstant,
            Atom::Rajchman => Family::RajchmanConstant,
        }
    }

    fn key(&self) -> AtomKey {
        let sign = match self {
            Atom::Discrete(s, _) | Atom::MockDiscrete(s) => Some(*s),
            _ => None,
        };
        (self.family(), sign)
    }

    pub fn measure_class(&self) -> MeasureClass {
        match self {
            Atom::RegularPlus | Atom::RegularMinus | Atom::QuotientFourier => MeasureClass::Lebesgue,
            _ => MeasureClass::Atomic,
        }
    }

    pub fn group(&self) -> GroupKind {
        match self {
            Atom::Schrodinger(_) | Atom::QuotientFourier | Atom::Characters(_) | Atom::AlmostPeriodic => {
                GroupKind::Heisenberg
            }
            _ => GroupKind::Sl2r,
        }
    }

    pub fn is_documentary(&self) -> bool {
        matches!(self, Atom::Spine | Atom::Rajchman)
    }

    pub fn is_regular(&self) -> bool {
        matches!(self, Atom::RegularPlus | Atom::RegularMinus | Atom::RegularDiscrete)
    }

    // Named families.

    /// `R = {rho_h : h != 0}`.
    pub fn schrodinger_all() -> Self {
        Atom::Schrodinger(RealSet::nonzero())
    }

    /// `R^+ = {rho_h : h > 0}`.
    pub fn schrodinger_positive() -> Self {
        Atom::Schrodinger(RealSet::positive())
    }

    /// `R^- = {rho_h : h < 0}`.
    pub fn schrodinger_negative() -> Self {
        Atom::Schrodinger(RealSet::negative())
    }

    /// `Pi^+ = {pi_t^+ : t >= 0}`.
    pub fn principal_plus_all() -> Self {
        Atom::PrincipalPlus(RealSet::nonnegative())
    }

    /// `Pi^- = {pi_t^- : t > 0}`.
    pub fn principal_minus_all() -> Self {
        Atom::PrincipalMinus(RealSet::positive())
    }

    /// `K = {kappa_s : -1 < s < 0}`.
    pub fn complementary_all() -> Self {
        Atom::Complementary(RealSet::unit_gap())
    }

    /// `Delta^{+/-} = {delta_n^{+/-} : n >= 2}`.
    pub fn discrete_all(sign: Sign) -> Self {
        Atom::Discrete(sign, IndexSet::All)
    }

    fn is_empty(&self) -> bool {
        match self {
            Atom::Schrodinger(s) | Atom::PrincipalPlus(s) | Atom::PrincipalMinus(s) | Atom::Complementary(s) => {
                s.is_empty()
            }
            Atom::Characters(c) => c.is_empty(),
            Atom::Discrete(_, idx) => idx.is_empty(),
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let within = |set: &RealSet, range: RealSet, what: &str| {
            if set.is_subset(&range) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} parameter set {set} leaves {range}")))
            }
        };
        match self {
            Atom::Schrodinger(s) => within(s, RealSet::nonzero(), "Schrodinger (h != 0)"),
            Atom::PrincipalPlus(s) => within(s, RealSet::nonnegative(), "principal series pi^+ (t >= 0)"),
            Atom::PrincipalMinus(s) => within(s, RealSet::positive(), "principal series pi^- (t > 0)"),
            Atom::Complementary(s) => within(s, RealSet::unit_gap(), "complementary series (-1 < s < 0)"),
            Atom::Discrete(_, IndexSet::Finite(ns)) => match ns.iter().find(|&&n| n < 2) {
                Some(n) => Err(Error::InvalidParameter(format!("discrete series index {n} < 2"))),
                None => Ok(()),
            },
            Atom::Characters(cs) => {
                let dims: BTreeSet<usize> = cs.iter().map(CharLabel::dim).collect();
                if dims.len() > 1 {
                    Err(Error::InvalidParameter(format!("characters of mixed dimensions {dims:?}")))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Combine two atoms with the same key.
    fn merge(self, other: Atom) -> Atom {
        match (self, other) {
            (Atom::Schrodinger(a), Atom::Schrodinger(b)) => Atom::Schrodinger(a.union(&b)),
            (Atom::PrincipalPlus(a), Atom::PrincipalPlus(b)) => Atom::PrincipalPlus(a.union(&b)),
            (Atom::PrincipalMinus(a), Atom::PrincipalMinus(b)) => Atom::PrincipalMinus(a.union(&b)),
            (Atom::Complementary(a), Atom::Complementary(b)) => Atom::Complementary(a.union(&b)),
            (Atom::Characters(mut a), Atom::Characters(b)) => {
                a.extend(b);
                Atom::Characters(a)
            }
            (Atom::Discrete(s, a), Atom::Discrete(_, b)) => Atom::Discrete(s, a.union(&b)),
            (a, _) => a,
        }
    }

    /// Containment of coefficient spaces between two atoms: same family,
    /// same measure class and parameter inclusion.
    pub fn leq(&self, other: &Atom) -> bool {
        if matches!((self, other), (Atom::Characters(_), Atom::AlmostPeriodic)) {
            return true;
        }
        if self.key() != other.key() || self.measure_class() != other.measure_class() {
            return false;
        }
        match (self, other) {
            (Atom::Schrodinger(a), Atom::Schrodinger(b))
            | (Atom::PrincipalPlus(a), Atom::PrincipalPlus(b))
            | (Atom::PrincipalMinus(a), Atom::PrincipalMinus(b))
            | (Atom::Complementary(a), Atom::Complementary(b)) => a.is_subset(b),
            (Atom::Characters(a), Atom::Characters(b)) => a.is_subset(b),
            (Atom::Discrete(_, a), Atom::Discrete(_, b)) => a.is_subset(b),
            _ => true,
        }
    }

    /// Number of isolated parameters, used to bound closure growth.
    pub fn finite_parameter_count(&self) -> usize {
        match self {
            Atom::Schrodinger(s) | Atom::PrincipalPlus(s) | Atom::PrincipalMinus(s) | Atom::Complementary(s) => {
                s.point_count()
            }
            Atom::Characters(c) => c.len(),
            Atom::Discrete(_, IndexSet::Finite(ns)) => ns.len(),
            _ => 0,
        }
    }
}

impl From<RepLabel> for Atom {
    fn from(label: RepLabel) -> Self {
        match label {
            RepLabel::Schrodinger(h) => Atom::Schrodinger(RealSet::point(h)),
            RepLabel::Character(c) => Atom::Characters(BTreeSet::from([c])),
            RepLabel::PrincipalPlus(t) => Atom::PrincipalPlus(RealSet::point(t)),
            RepLabel::PrincipalMinus(t) => Atom::PrincipalMinus(RealSet::point(t)),
            RepLabel::Complementary(s) => Atom::Complementary(RealSet::point(s)),
            RepLabel::Discrete(sign, n) => Atom::Discrete(sign, IndexSet::Finite(BTreeSet::from([n]))),
            RepLabel::MockDiscrete(sign) => Atom::MockDiscrete(sign),
            RepLabel::Trivial => Atom::Trivial,
        }
    }
}

/// A canonical `l^1`-direct sum of atoms.
///
/// Values are only built through [`Component::normalize`], so two components
/// are equal as subspaces exactly when they are equal as values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Component {
    atoms: Vec<Atom>,
}

impl Component {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Canonical form: validates parameters, merges atoms of the same family
    /// by parameter union, lets `AF` absorb finite character sets, drops empty
    /// atoms and sorts by family.
    pub fn normalize(raw: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut merged: std::collections::BTreeMap<AtomKey, Atom> = Default::default();
        for atom in raw {
            atom.validate()?;
            if atom.is_empty() {
                continue;
            }
            let key = atom.key();
            let combined = match merged.remove(&key) {
                Some(prev) => prev.merge(atom),
                None => atom,
            };
            merged.insert(key, combined);
        }
        if merged.contains_key(&(Family::APFourier, None)) {
            merged.remove(&(Family::HCharFamily, None));
        }
        Ok(Self { atoms: merged.into_values().collect() })
    }

    pub fn single(atom: Atom) -> Result<Self> {
        Self::normalize([atom])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains_family(&self, family: Family) -> bool {
        self.atoms.iter().any(|a| a.family() == family)
    }

    pub fn get(&self, family: Family) -> Option<&Atom> {
        self.atoms.iter().find(|a| a.family() == family)
    }

    pub fn union(&self, other: &Component) -> Component {
        Self::normalize(self.atoms.iter().chain(&other.atoms).cloned()).expect("union of valid components is valid")
    }

    /// `self <= other`: every atom of `self` lies inside an atom of `other`.
    pub fn leq(&self, other: &Component) -> bool {
        self.atoms.iter().all(|a| other.atoms.iter().any(|b| a.leq(b)))
    }

    /// The group all atoms belong to. `None` for the zero component.
    pub fn group(&self) -> Result<Option<GroupKind>> {
        let mut groups = self.atoms.iter().map(Atom::group);
        let first = match groups.next() {
            Some(g) => g,
            None => return Ok(None),
        };
        if groups.any(|g| g != first) {
            return Err(Error::GroupMismatch(format!("component {self} mixes Heisenberg and SL(2,R) atoms")));
        }
        Ok(Some(first))
    }

    pub fn finite_parameter_count(&self) -> usize {
        self.atoms.iter().map(Atom::finite_parameter_count).sum()
    }

    /// The single representation this component is the coefficient space of, if any.
    pub fn as_label(&self) -> Option<RepLabel> {
        let [atom] = self.atoms.as_slice() else { return None };
        let single = |s: &RealSet| match s.as_points() {
            Some(mut v) if v.len() == 1 => v.pop(),
            _ => None,
        };
        match atom {
            Atom::Schrodinger(s) => single(s).map(RepLabel::Schrodinger),
            Atom::PrincipalPlus(s) => single(s).map(RepLabel::PrincipalPlus),
            Atom::PrincipalMinus(s) => single(s).map(RepLabel::PrincipalMinus),
            Atom::Complementary(s) => single(s).map(RepLabel::Complementary),
            Atom::Characters(cs) if cs.len() == 1 => cs.iter().next().cloned().map(RepLabel::Character),
            Atom::Discrete(sign, IndexSet::Finite(ns)) if ns.len() == 1 => {
                ns.iter().next().map(|&n| RepLabel::Discrete(*sign, n))
            }
            Atom::MockDiscrete(sign) => Some(RepLabel::MockDiscrete(*sign)),
            Atom::Trivial => Some(RepLabel::Trivial),
            _ => None,
        }
    }

    // Named components.

    /// `{Areg+, Areg-, AregD}`: the Fourier algebra `A(SL_2(R))`.
    pub fn sl2_regular() -> Self {
        Self::normalize([Atom::RegularPlus, Atom::RegularMinus, Atom::RegularDiscrete]).unwrap()
    }

    /// Atoms of `a_0(SL_2(R))`: `Pi^+, Pi^-, K, M, C1, Delta^+, Delta^-`.
    pub fn sl2_pure() -> Self {
        Self::normalize([
            Atom::principal_plus_all(),
            Atom::principal_minus_all(),
            Atom::complementary_all(),
            Atom::MockDiscrete(Sign::Plus),
            Atom::MockDiscrete(Sign::Minus),
            Atom::Trivial,
            Atom::discrete_all(Sign::Plus),
            Atom::discrete_all(Sign::Minus),
        ])
        .unwrap()
    }

    /// Atoms of `a_0(H_n)`: all Schrödinger representations and all characters.
    pub fn heisenberg_pure() -> Self {
        Self::normalize([Atom::schrodinger_all(), Atom::AlmostPeriodic]).unwrap()
    }
}

impl From<RepLabel> for Component {
    fn from(label: RepLabel) -> Self {
        Component { atoms: vec![Atom::from(label)] }
    }
}

impl Serialize for Component {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.atoms.iter().map(ToString::to_string))
    }
}

impl Serialize for RepLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
pub(crate) fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
