//! Products of coefficient spaces from tensor-product rules.
//!
//! For the Heisenberg group the rules are exact:
//!
//! * `chi_{xi,eta} (x) chi_{xi',eta'} = chi_{xi+xi',eta+eta'}`
//! * `chi (x) rho_h ≅ rho_h`
//! * `rho_h (x) rho_h' ≃ rho_{h+h'}` when `h + h' != 0`
//! * `rho_h (x) rho_{-h} ≅ lambda_{H_n/Z} o q`
//!
//! plus the module rules for `A(H_n/Z) o q`. For `SL_2(R)` every product of two
//! non-trivial irreducibles is quasi-contained in `pi^+ (+) pi^- (+) delta`,
//! with an extra `kappa_{s+t+1}` when two complementary series satisfy
//! `s + t < -1`. Family products are computed as exact set images of their
//! rational parameter sets, so a product of interval families is again a
//! finite union of intervals.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Rational;
use crate::labels::{Atom, Component, Family, GroupKind, RealSet, RepLabel};

/// The group whose rules apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "group", content = "n", rename_all = "lowercase")]
pub enum GroupTag {
    Heisenberg(usize),
    Sl2r,
}

impl GroupTag {
    pub fn kind(self) -> GroupKind {
        match self {
            GroupTag::Heisenberg(_) => GroupKind::Heisenberg,
            GroupTag::Sl2r => GroupKind::Sl2r,
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Heisenberg(n) => write!(f, "heisenberg(n={n})"),
            GroupTag::Sl2r => f.write_str("sl2r"),
        }
    }
}

/// Optional rules, recorded in every result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RuleFlags {
    /// `1 (x) pi = pi`. When off, the trivial representation is treated like
    /// any other irreducible and its products with non-trivial atoms land in
    /// the regular part.
    pub trivial_identity: bool,
    /// `A(G) B(G) ⊆ A(G)`.
    pub regular_absorbs: bool,
}

impl Default for RuleFlags {
    fn default() -> Self {
        Self { trivial_identity: true, regular_absorbs: true }
    }
}

impl fmt::Display for RuleFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let on = |b: bool| if b { "on" } else { "off" };
        write!(f, "trivial_identity={} regular_absorbs={}", on(self.trivial_identity), on(self.regular_absorbs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleSet {
    pub group: GroupTag,
    pub flags: RuleFlags,
    /// Iteration cap for closure computations.
    pub max_depth: usize,
    /// Cap on isolated parameters during closure; an infinite discrete
    /// closure (for instance the one generated by `rho(1)`) trips it.
    pub max_parameters: usize,
    /// Cap on the exponent searched by [`min_power_to_regular`].
    pub max_power: usize,
}

impl RuleSet {
    pub fn new(group: GroupTag) -> Self {
        Self { group, flags: RuleFlags::default(), max_depth: 64, max_parameters: 512, max_power: 100_000 }
    }

    pub fn heisenberg(n: usize) -> Self {
        Self::new(GroupTag::Heisenberg(n))
    }

    pub fn sl2r() -> Self {
        Self::new(GroupTag::Sl2r)
    }

    pub fn with_trivial_identity(mut self, on: bool) -> Self {
        self.flags.trivial_identity = on;
        self
    }

    pub fn with_regular_absorbs(mut self, on: bool) -> Self {
        self.flags.regular_absorbs = on;
        self
    }
}

/// Which tensor-product rule produced (part of) a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    CharacterProduct,
    CharacterSchrodinger,
    SchrodingerSum,
    SchrodingerConjugate,
    CharacterQuotient,
    QuotientSchrodinger,
    QuotientProduct,
    TrivialProduct,
    TrivialIdentity,
    TrivialGeneric,
    ComplementaryPair,
    GenericPair,
    RegularAbsorbs,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::CharacterProduct => "character-product",
            Rule::CharacterSchrodinger => "character-schrodinger",
            Rule::SchrodingerSum => "schrodinger-sum",
            Rule::SchrodingerConjugate => "schrodinger-conjugate",
            Rule::CharacterQuotient => "character-quotient",
            Rule::QuotientSchrodinger => "quotient-schrodinger",
            Rule::QuotientProduct => "quotient-product",
            Rule::TrivialProduct => "trivial-product",
            Rule::TrivialIdentity => "trivial-identity",
            Rule::TrivialGeneric => "trivial-generic",
            Rule::ComplementaryPair => "complementary-pair",
            Rule::GenericPair => "generic-pair",
            Rule::RegularAbsorbs => "regular-absorbs",
        }
    }

    /// The tensor-product statement behind the rule.
    pub fn statement(self) -> &'static str {
        match self {
            Rule::CharacterProduct => "chi_{xi,eta} (x) chi_{xi',eta'} = chi_{xi+xi',eta+eta'}",
            Rule::CharacterSchrodinger => "chi_{xi,eta} (x) rho_h ≅ rho_h",
            Rule::SchrodingerSum => "rho_h (x) rho_h' ≃ rho_{h+h'} (h+h' != 0)",
            Rule::SchrodingerConjugate => "rho_h (x) rho_{-h} ≅ lambda_{H/Z} o q",
            Rule::CharacterQuotient => "chi_{xi,eta} A(H/Z)oq = A(H/Z)oq",
            Rule::QuotientSchrodinger => "(lambda_{H/Z} o q) (x) rho_h ≃ rho_h",
            Rule::QuotientProduct => "A(H/Z)oq A(H/Z)oq = A(H/Z)oq",
            Rule::TrivialProduct => "1 (x) 1 = 1",
            Rule::TrivialIdentity => "1 (x) pi = pi",
            Rule::TrivialGeneric => "1 (x) pi ≺ pi+ (+) pi- (+) delta (trivial treated as generic)",
            Rule::ComplementaryPair => "kappa_s (x) kappa_t ≺ pi+ (+) pi- (+) delta (+) kappa_{s+t+1} (s+t < -1)",
            Rule::GenericPair => "sigma (x) tau ≺ pi+ (+) pi- (+) delta",
            Rule::RegularAbsorbs => "A(G) B(G) ⊆ A(G)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// The closed span of the product equals the result.
    Equality,
    /// The closed span of the product is contained in the result.
    QuasiContainment,
}

impl Relation {
    fn and(self, other: Relation) -> Relation {
        if self == Relation::Equality && other == Relation::Equality {
            Relation::Equality
        } else {
            Relation::QuasiContainment
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Equality => "equality",
            Relation::QuasiContainment => "quasi-containment",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FusionResult {
    pub result: Component,
    pub relation: Relation,
    pub rules: BTreeSet<Rule>,
    pub flags: RuleFlags,
}

impl fmt::Display for FusionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rules: Vec<&str> = self.rules.iter().map(|r| r.name()).collect();
        if rules.is_empty() {
            write!(f, "{} [{}]", self.result, self.relation)
        } else {
            write!(f, "{} [{}: {}]", self.result, self.relation, rules.join(", "))
        }
    }
}

struct Partial {
    atoms: Vec<Atom>,
    relation: Relation,
    rules: Vec<Rule>,
}

impl Partial {
    fn equal(atoms: Vec<Atom>, rule: Rule) -> Self {
        Self { atoms, relation: Relation::Equality, rules: vec![rule] }
    }

    fn contained(atoms: Vec<Atom>, rule: Rule) -> Self {
        Self { atoms, relation: Relation::QuasiContainment, rules: vec![rule] }
    }
}

fn regular_atoms() -> Vec<Atom> {
    vec![Atom::RegularPlus, Atom::RegularMinus, Atom::RegularDiscrete]
}

fn check_atom_group(atom: &Atom, rules: &RuleSet) -> Result<()> {
    if atom.group() != rules.group.kind() {
        return Err(Error::GroupMismatch(format!("atom {atom} does not belong to {}", rules.group)));
    }
    if let (Atom::Characters(cs), GroupTag::Heisenberg(n)) = (atom, rules.group) {
        if let Some(c) = cs.iter().find(|c| c.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
        }
    }
    Ok(())
}

fn multiply_heisenberg(a: &Atom, b: &Atom) -> Result<Partial> {
    use Atom::*;
    Ok(match (a, b) {
        (Schrodinger(x), Schrodinger(y)) => {
            let sums = x.sum(y).remove_point(&Rational::from_integer(0.into()));
            let conjugate = x.intersects(&y.negate());
            let mut atoms = Vec::new();
            let mut rules = Vec::new();
            if !sums.is_empty() {
                atoms.push(Schrodinger(sums));
                rules.push(Rule::SchrodingerSum);
            }
            if conjugate {
                atoms.push(QuotientFourier);
                rules.push(Rule::SchrodingerConjugate);
            }
            Partial { atoms, relation: Relation::Equality, rules }
        }
        (Schrodinger(x), QuotientFourier) => Partial::equal(vec![Schrodinger(x.clone())], Rule::QuotientSchrodinger),
        (Schrodinger(x), Characters(_) | AlmostPeriodic) => {
            Partial::equal(vec![Schrodinger(x.clone())], Rule::CharacterSchrodinger)
        }
        (QuotientFourier, QuotientFourier) => Partial::equal(vec![QuotientFourier], Rule::QuotientProduct),
        (QuotientFourier, Characters(_) | AlmostPeriodic) => {
            Partial::equal(vec![QuotientFourier], Rule::CharacterQuotient)
        }
        (Characters(x), Characters(y)) => {
            let products = x.iter().flat_map(|c| y.iter().map(move |d| c.product(d))).collect();
            Partial::equal(vec![Characters(products)], Rule::CharacterProduct)
        }
        (Characters(_) | AlmostPeriodic, AlmostPeriodic) => {
            Partial::equal(vec![AlmostPeriodic], Rule::CharacterProduct)
        }
        _ => return Err(Error::NoRule(format!("{a} · {b}"))),
    })
}

fn multiply_sl2(a: &Atom, b: &Atom, flags: RuleFlags) -> Result<Partial> {
    use Atom::*;
    Ok(match (a, b) {
        (Trivial, Trivial) => Partial::equal(vec![Trivial], Rule::TrivialProduct),
        (Trivial, other) | (other, Trivial) => {
            if flags.trivial_identity {
                Partial::equal(vec![other.clone()], Rule::TrivialIdentity)
            } else {
                Partial::contained(regular_atoms(), Rule::TrivialGeneric)
            }
        }
        (x, y) if x.is_regular() || y.is_regular() => {
            if !flags.regular_absorbs {
                return Err(Error::NoRule(format!("{a} · {b} with regular_absorbs off")));
            }
            Partial::contained(regular_atoms(), Rule::RegularAbsorbs)
        }
        (Complementary(s), Complementary(t)) => {
            // kappa_s kappa_t -> kappa_{s+t+1} exactly when s + t < -1, i.e. s+t+1 < 0
            let image = s.sum(t).translate(&Rational::from_integer(1.into())).intersection(&RealSet::unit_gap());
            let mut atoms = regular_atoms();
            if image.is_empty() {
                Partial::contained(atoms, Rule::GenericPair)
            } else {
                atoms.push(Complementary(image));
                Partial::contained(atoms, Rule::ComplementaryPair)
            }
        }
        _ => Partial::contained(regular_atoms(), Rule::GenericPair),
    })
}

fn multiply_atoms(a: &Atom, b: &Atom, rules: &RuleSet) -> Result<Partial> {
    if a.is_documentary() || b.is_documentary() {
        return Err(Error::NoRule(format!("{a} · {b}: spine and Rajchman labels take part in no product")));
    }
    check_atom_group(a, rules)?;
    check_atom_group(b, rules)?;
    let (a, b) = if a.family() <= b.family() { (a, b) } else { (b, a) };
    match rules.group {
        GroupTag::Heisenberg(_) => multiply_heisenberg(a, b),
        GroupTag::Sl2r => multiply_sl2(a, b, rules.flags),
    }
}

/// Closed span of `X · Y`, atom pair by atom pair.
pub fn fuse_components(x: &Component, y: &Component, rules: &RuleSet) -> Result<FusionResult> {
    let pairs: Vec<(&Atom, &Atom)> = x.atoms().iter().flat_map(|a| y.atoms().iter().map(move |b| (a, b))).collect();
    let partials = pairs.par_iter().map(|(a, b)| multiply_atoms(a, b, rules)).collect::<Result<Vec<_>>>()?;
    let mut relation = Relation::Equality;
    let mut fired = BTreeSet::new();
    let mut atoms = Vec::new();
    for p in partials {
        relation = relation.and(p.relation);
        fired.extend(p.rules);
        atoms.extend(p.atoms);
    }
    Ok(FusionResult { result: Component::normalize(atoms)?, relation, rules: fired, flags: rules.flags })
}

/// Product of two irreducible representations.
pub fn fuse_atoms(x: &RepLabel, y: &RepLabel, rules: &RuleSet) -> Result<FusionResult> {
    if x.group() != y.group() {
        return Err(Error::GroupMismatch(format!("{x} and {y} live on different groups")));
    }
    fuse_components(&Component::from(x.clone()), &Component::from(y.clone()), rules)
}

/// Single product layer, `normalize(A · B)`.
pub fn span_of_products(a: &Component, b: &Component, rules: &RuleSet) -> Result<Component> {
    Ok(fuse_components(a, b, rules)?.result)
}

/// Least `X ⊇ S` with `X · X ⊆ X`.
pub fn generated_algebra(seeds: &[Component], rules: &RuleSet) -> Result<Component> {
    let mut current = seeds.iter().fold(Component::empty(), |acc, c| acc.union(c));
    for _ in 0..rules.max_depth {
        if current.finite_parameter_count() > rules.max_parameters {
            return Err(Error::ClosureSize(rules.max_parameters));
        }
        let square = fuse_components(&current, &current, rules)?.result;
        let next = current.union(&square);
        if next == current {
            return Ok(current);
        }
        current = next;
    }
    Err(Error::ClosureDepth(rules.max_depth))
}

/// Outcome of [`min_power_to_regular`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinPower {
    /// Smallest `n` with `X^n ⊆ A(G)`, or `None` when the powers stabilize outside it.
    pub power: Option<usize>,
    /// `log2(1/(1+s_1)) - 1` for the smallest complementary parameter `s_1`,
    /// the repeated-squaring count; reported for comparison only.
    pub squaring_bound: Option<f64>,
}

/// Smallest `n >= 1` such that the `n`-fold product `X · X ⋯ X` lies in
/// `{Areg+, Areg-, AregD}`, found by literal iteration.
pub fn min_power_to_regular(x: &Component, rules: &RuleSet) -> Result<MinPower> {
    if rules.group != GroupTag::Sl2r || x.group()? != Some(GroupKind::Sl2r) {
        return Err(Error::Precondition("minimal power needs a nonzero SL(2,R) component".into()));
    }
    if x.contains_family(Family::TrivialLine) {
        return Err(Error::Precondition(format!("{x} contains the trivial line C1")));
    }
    if x.atoms().iter().any(Atom::is_documentary) {
        return Err(Error::Precondition(format!("{x} contains a documentation-only atom")));
    }
    let complementary = match x.get(Family::ComplementaryFamily) {
        Some(Atom::Complementary(s)) => {
            if !s.is_finite() {
                return Err(Error::Precondition(format!("complementary parameters of {x} must be finite")));
            }
            Some(s.clone())
        }
        _ => None,
    };
    let squaring_bound = complementary.as_ref().and_then(RealSet::min).map(|s1| {
        let sigma = (Rational::from_integer(1.into()) + s1).to_f64().unwrap_or(f64::NAN);
        (1.0 / sigma).log2() - 1.0
    });

    let target = Component::sl2_regular();
    let mut power = x.clone();
    for n in 1..=rules.max_power {
        if power.leq(&target) {
            return Ok(MinPower { power: Some(n), squaring_bound });
        }
        let next = fuse_components(&power, x, rules)?.result;
        if next == power {
            return Ok(MinPower { power: None, squaring_bound });
        }
        power = next;
    }
    Err(Error::ClosureDepth(rules.max_power))
}

/// Whether `I · A ⊆ I`, after checking `I ⊆ A` and that both are closed under products.
pub fn ideal_check(ideal: &Component, algebra: &Component, rules: &RuleSet) -> Result<bool> {
    if !ideal.leq(algebra) {
        let outside: Vec<String> = ideal
            .atoms()
            .iter()
            .filter(|a| !algebra.atoms().iter().any(|b| a.leq(b)))
            .map(ToString::to_string)
            .collect();
        return Err(Error::Precondition(format!("{} not contained in {algebra}", outside.join(", "))));
    }
    for (name, c) in [("candidate ideal", ideal), ("algebra", algebra)] {
        let square = fuse_components(c, c, rules)?.result;
        if !square.leq(c) {
            return Err(Error::Precondition(format!("{name} {c} is not closed: its square is {square}")));
        }
    }
    Ok(fuse_components(ideal, algebra, rules)?.result.leq(ideal))
}
