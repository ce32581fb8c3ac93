//! Stable text form of labels, atoms and components.
//!
//! ```text
//! rho(3/2)   chi(1,0;2,1)   pi+(1)   pi-(2)   kappa(-9/10)   delta+(2)   delta-(1)   triv
//! rho{h>0}   rho{h<0}   rho{h!=0}   rho{1,(2,inf)}   pi+{t>=0}   pi-{t>0}   kappa{-1<s<0}
//! delta+{n>=2}   chi{(1;0),(0;1)}   A(G/Z)oq   AF   Areg+   Areg-   AregD   C1   A*(G)   B0(G)
//! ```
//!
//! Components join atoms with ` ⊕ `; the zero component prints as `0`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Pow;

use super::{Atom, CharLabel, Component, Endpoint, IndexSet, Interval, RealSet, RepLabel, Sign};
use crate::error::{Error, Result};
use crate::group::Rational;

/// Parses `3/2`, `-4`, or an exact decimal such as `-0.9`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.contains('/') {
        let r = Rational::from_str(s).map_err(|_| bad())?;
        return Ok(r);
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let numer = BigInt::from_str(&digits).map_err(|_| bad())?;
        let denom: BigInt = BigInt::from(10).pow(frac.len() as u32);
        let r = Rational::new(numer, denom);
        return Ok(if negative { -r } else { r });
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

fn join(v: &[Rational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn char_body(c: &CharLabel) -> String {
    format!("{};{}", join(&c.xi), join(&c.eta))
}

impl fmt::Display for RepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepLabel::Schrodinger(h) => write!(f, "rho({h})"),
            RepLabel::Character(c) => write!(f, "chi({})", char_body(c)),
            RepLabel::PrincipalPlus(t) => write!(f, "pi+({t})"),
            RepLabel::PrincipalMinus(t) => write!(f, "pi-({t})"),
            RepLabel::Complementary(s) => write!(f, "kappa({s})"),
            RepLabel::Discrete(sign, n) => write!(f, "delta{}({n})", sign.symbol()),
            RepLabel::MockDiscrete(sign) => write!(f, "delta{}(1)", sign.symbol()),
            RepLabel::Trivial => f.write_str("triv"),
        }
    }
}

fn write_family(f: &mut fmt::Formatter<'_>, name: &str, set: &RealSet, named: &[(&str, RealSet)]) -> fmt::Result {
    if let Some((label, _)) = named.iter().find(|(_, s)| s == set) {
        return write!(f, "{name}{{{label}}}");
    }
    match set.as_points().as_deref() {
        Some([single]) => write!(f, "{name}({single})"),
        _ => write!(f, "{name}{{{set}}}"),
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Schrodinger(s) => write_family(
                f,
                "rho",
                s,
                &[("h!=0", RealSet::nonzero()), ("h>0", RealSet::positive()), ("h<0", RealSet::negative())],
            ),
            Atom::PrincipalPlus(s) => write_family(f, "pi+", s, &[("t>=0", RealSet::nonnegative())]),
            Atom::PrincipalMinus(s) => write_family(f, "pi-", s, &[("t>0", RealSet::positive())]),
            Atom::Complementary(s) => write_family(f, "kappa", s, &[("-1<s<0", RealSet::unit_gap())]),
            Atom::Characters(cs) => {
                if cs.len() == 1 {
                    write!(f, "chi({})", char_body(cs.iter().next().unwrap()))
                } else {
                    let items: Vec<String> = cs.iter().map(|c| format!("({})", char_body(c))).collect();
                    write!(f, "chi{{{}}}", items.join(","))
                }
            }
            Atom::Discrete(sign, IndexSet::All) => write!(f, "delta{}{{n>=2}}", sign.symbol()),
            Atom::Discrete(sign, IndexSet::Finite(ns)) => {
                if ns.len() == 1 {
                    write!(f, "delta{}({})", sign.symbol(), ns.iter().next().unwrap())
                } else {
                    let items: Vec<String> = ns.iter().map(ToString::to_string).collect();
                    write!(f, "delta{}{{{}}}", sign.symbol(), items.join(","))
                }
            }
            Atom::MockDiscrete(sign) => write!(f, "delta{}(1)", sign.symbol()),
            Atom::QuotientFourier => f.write_str("A(G/Z)oq"),
            Atom::AlmostPeriodic => f.write_str("AF"),
            Atom::RegularPlus => f.write_str("Areg+"),
            Atom::RegularMinus => f.write_str("Areg-"),
            Atom::RegularDiscrete => f.write_str("AregD"),
            Atom::Trivial => f.write_str("C1"),
            Atom::Spine => f.write_str("A*(G)"),
            Atom::Rajchman => f.write_str("B0(G)"),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("0");
        }
        let items: Vec<String> = self.atoms.iter().map(ToString::to_string).collect();
        f.write_str(&items.join(" ⊕ "))
    }
}

/// Split on commas that are not nested inside brackets.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.into_iter().filter(|x| !x.is_empty()).collect()
}

fn parse_endpoint(s: &str, closed: bool) -> Result<Endpoint> {
    let s = s.trim();
    if matches!(s, "inf" | "+inf" | "-inf") {
        return Ok(Endpoint::Unbounded);
    }
    let v = parse_rational(s)?;
    Ok(if closed { Endpoint::Closed(v) } else { Endpoint::Open(v) })
}

fn parse_set_item(item: &str) -> Result<Interval> {
    let first = item.chars().next().unwrap_or(' ');
    if first == '(' || first == '[' {
        let last = item.chars().last().unwrap();
        if last != ')' && last != ']' {
            return Err(Error::Parse(format!("unterminated interval {item:?}")));
        }
        let inner = &item[1..item.len() - 1];
        let (lo, hi) =
            inner.split_once(',').ok_or_else(|| Error::Parse(format!("interval needs two endpoints: {item:?}")))?;
        Ok(Interval::new(parse_endpoint(lo, first == '[')?, parse_endpoint(hi, last == ']')?))
    } else {
        Ok(Interval::point(parse_rational(item)?))
    }
}

fn parse_set(body: &str, named: &[(&str, RealSet)]) -> Result<RealSet> {
    let body = body.trim();
    if let Some((_, set)) = named.iter().find(|(label, _)| *label == body) {
        return Ok(set.clone());
    }
    let parts = split_top(body).into_iter().map(parse_set_item).collect::<Result<Vec<_>>>()?;
    Ok(RealSet::from_parts(parts))
}

fn parse_char_body(body: &str) -> Result<CharLabel> {
    let (xi, eta) =
        body.split_once(';').ok_or_else(|| Error::Parse(format!("character needs 'xi;eta', got {body:?}")))?;
    let list = |s: &str| s.split(',').map(parse_rational).collect::<Result<Vec<_>>>();
    CharLabel::new(list(xi)?, list(eta)?)
}

/// `name(args)` or `name{args}` split into name, delimiter, body.
fn split_call(s: &str) -> Option<(&str, char, &str)> {
    let open = s.find(['(', '{'])?;
    let delim = s[open..].chars().next()?;
    let close = if delim == '(' { ')' } else { '}' };
    if !s.ends_with(close) {
        return None;
    }
    Some((&s[..open], delim, &s[open + 1..s.len() - 1]))
}

fn sign_of(name: &str) -> Option<Sign> {
    match name.chars().last() {
        Some('+') => Some(Sign::Plus),
        Some('-') => Some(Sign::Minus),
        _ => None,
    }
}

impl FromStr for Atom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let constant = match s {
            "A(G/Z)oq" => Some(Atom::QuotientFourier),
            "AF" => Some(Atom::AlmostPeriodic),
            "Areg+" => Some(Atom::RegularPlus),
            "Areg-" => Some(Atom::RegularMinus),
            "AregD" => Some(Atom::RegularDiscrete),
            "C1" | "triv" | "1" => Some(Atom::Trivial),
            "A*(G)" => Some(Atom::Spine),
            "B0(G)" => Some(Atom::Rajchman),
            _ => None,
        };
        if let Some(atom) = constant {
            return Ok(atom);
        }
        let unknown = || Error::Parse(format!("unrecognized atom {s:?}"));
        let (name, delim, body) = split_call(s).ok_or_else(unknown)?;
        let braced = delim == '{';
        let real = |named: &[(&str, RealSet)]| -> Result<RealSet> {
            if braced {
                parse_set(body, named)
            } else {
                Ok(RealSet::point(parse_rational(body)?))
            }
        };
        let atom = match name {
            "rho" => Atom::Schrodinger(real(&[
                ("h!=0", RealSet::nonzero()),
                ("all", RealSet::nonzero()),
                ("h>0", RealSet::positive()),
                ("h<0", RealSet::negative()),
            ])?),
            "pi+" => Atom::PrincipalPlus(real(&[("t>=0", RealSet::nonnegative()), ("all", RealSet::nonnegative())])?),
            "pi-" => Atom::PrincipalMinus(real(&[("t>0", RealSet::positive()), ("all", RealSet::positive())])?),
            "kappa" => Atom::Complementary(real(&[("-1<s<0", RealSet::unit_gap()), ("all", RealSet::unit_gap())])?),
            "chi" if braced && body.trim() == "all" => Atom::AlmostPeriodic,
            "chi" if braced => {
                let items = split_top(body)
                    .into_iter()
                    .map(|item| {
                        let inner = item
                            .strip_prefix('(')
                            .and_then(|x| x.strip_suffix(')'))
                            .ok_or_else(|| Error::Parse(format!("character set item must be '(xi;eta)': {item:?}")))?;
                        parse_char_body(inner)
                    })
                    .collect::<Result<BTreeSet<_>>>()?;
                Atom::Characters(items)
            }
            "chi" => Atom::Characters(BTreeSet::from([parse_char_body(body)?])),
            "delta+" | "delta-" => {
                let sign = sign_of(name).unwrap();
                let body = body.trim();
                if braced && matches!(body, "n>=2" | "all") {
                    Atom::Discrete(sign, IndexSet::All)
                } else {
                    let ns = split_top(body)
                        .into_iter()
                        .map(|x| x.parse::<u32>().map_err(|_| Error::Parse(format!("bad discrete index {x:?}"))))
                        .collect::<Result<BTreeSet<u32>>>()?;
                    if !braced && ns.len() == 1 && ns.contains(&1) {
                        Atom::MockDiscrete(sign)
                    } else {
                        Atom::Discrete(sign, IndexSet::Finite(ns))
                    }
                }
            }
            _ => return Err(unknown()),
        };
        atom.validate()?;
        Ok(atom)
    }
}

impl FromStr for RepLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let atom: Atom = s.parse()?;
        Component::from_atom_unchecked(atom)
            .as_label()
            .ok_or_else(|| Error::Parse(format!("{s:?} is not a single representation")))
    }
}

impl FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Component::empty());
        }
        let atoms = s.split('⊕').map(str::parse::<Atom>).collect::<Result<Vec<_>>>()?;
        Component::normalize(atoms)
    }
}

impl Component {
    fn from_atom_unchecked(atom: Atom) -> Component {
        Component { atoms: vec![atom] }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{arb_component, arb_label};
    use super::*;
    use crate::labels::rational;
    use proptest::prelude::*;

    #[test]
    fn rational_forms() {
        assert_eq!(parse_rational("3/2").unwrap(), rational(3, 2));
        assert_eq!(parse_rational("-0.9").unwrap(), rational(-9, 10));
        assert_eq!(parse_rational("7").unwrap(), rational(7, 1));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn documented_strings() {
        assert_eq!(RepLabel::Schrodinger(rational(3, 2)).to_string(), "rho(3/2)");
        assert_eq!(RepLabel::Complementary(rational(-9, 10)).to_string(), "kappa(-9/10)");
        assert_eq!(Atom::QuotientFourier.to_string(), "A(G/Z)oq");
        assert_eq!(Atom::AlmostPeriodic.to_string(), "AF");
        assert_eq!(Atom::RegularPlus.to_string(), "Areg+");
        assert_eq!(Component::sl2_regular().to_string(), "Areg+ ⊕ Areg- ⊕ AregD");
        assert_eq!(Component::heisenberg_pure().to_string(), "rho{h!=0} ⊕ AF");
    }

    #[test]
    fn parse_named_and_generic_sets() {
        let c: Component = "rho{h>0} ⊕ rho(-1) ⊕ kappa{-1<s<0}".parse().unwrap();
        assert_eq!(c.atoms().len(), 2);
        let g: Atom = "rho{(1,inf),-2}".parse().unwrap();
        assert_eq!(g.to_string(), "rho{-2,(1,inf)}");
        assert_eq!("delta+(1)".parse::<RepLabel>().unwrap(), RepLabel::MockDiscrete(Sign::Plus));
        assert_eq!("chi{all}".parse::<Atom>().unwrap(), Atom::AlmostPeriodic);
        assert!("rho(0)".parse::<Atom>().is_err());
        assert!("kappa(-2)".parse::<Atom>().is_err());
        assert!("foo(1)".parse::<Atom>().is_err());
        assert!("rho{h>0}".parse::<RepLabel>().is_err());
    }

    proptest! {
        #[test]
        fn labels_round_trip(label in arb_label()) {
            prop_assert_eq!(label.to_string().parse::<RepLabel>().unwrap(), label);
        }

        #[test]
        fn components_round_trip(c in arb_component()) {
            prop_assert_eq!(c.to_string().parse::<Component>().unwrap(), c);
        }
    }
}
