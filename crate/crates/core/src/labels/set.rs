//! Finite unions of intervals with exact rational endpoints.
//!
//! Parameter descriptors of component atoms are stored as [`RealSet`]s. Finite
//! parameter sets are unions of degenerate closed intervals `[a, a]`; named
//! families such as "all h != 0" are ordinary unions of open intervals. The
//! representation is canonical: parts are nonempty, sorted, pairwise disjoint
//! and never touching, so structural equality is set equality.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use crate::group::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Unbounded,
    Open(Rational),
    Closed(Rational),
}

impl Endpoint {
    fn value(&self) -> Option<&Rational> {
        match self {
            Endpoint::Unbounded => None,
            Endpoint::Open(v) | Endpoint::Closed(v) => Some(v),
        }
    }

    fn is_closed(&self) -> bool {
        matches!(self, Endpoint::Closed(_))
    }

    fn add(&self, other: &Endpoint) -> Endpoint {
        match (self, other) {
            (Endpoint::Unbounded, _) | (_, Endpoint::Unbounded) => Endpoint::Unbounded,
            (Endpoint::Closed(a), Endpoint::Closed(b)) => Endpoint::Closed(a + b),
            (a, b) => Endpoint::Open(a.value().unwrap() + b.value().unwrap()),
        }
    }

    fn neg(&self) -> Endpoint {
        match self {
            Endpoint::Unbounded => Endpoint::Unbounded,
            Endpoint::Open(v) => Endpoint::Open(-v),
            Endpoint::Closed(v) => Endpoint::Closed(-v),
        }
    }
}

/// Order on lower endpoints: further left is smaller.
fn cmp_lower(a: &Endpoint, b: &Endpoint) -> Ordering {
    match (a, b) {
        (Endpoint::Unbounded, Endpoint::Unbounded) => Ordering::Equal,
        (Endpoint::Unbounded, _) => Ordering::Less,
        (_, Endpoint::Unbounded) => Ordering::Greater,
        _ => {
            let (x, y) = (a.value().unwrap(), b.value().unwrap());
            x.cmp(y).then_with(|| b.is_closed().cmp(&a.is_closed()))
        }
    }
}

/// Order on upper endpoints: further right is larger.
fn cmp_upper(a: &Endpoint, b: &Endpoint) -> Ordering {
    match (a, b) {
        (Endpoint::Unbounded, Endpoint::Unbounded) => Ordering::Equal,
        (Endpoint::Unbounded, _) => Ordering::Greater,
        (_, Endpoint::Unbounded) => Ordering::Less,
        _ => {
            let (x, y) = (a.value().unwrap(), b.value().unwrap());
            x.cmp(y).then_with(|| a.is_closed().cmp(&b.is_closed()))
        }
    }
}

/// Whether an interval ending at `hi` and one starting at `lo` (with `lo` not
/// left of the first interval's start) overlap or share a boundary point.
fn touches(hi: &Endpoint, lo: &Endpoint) -> bool {
    match (hi.value(), lo.value()) {
        (None, _) | (_, None) => true,
        (Some(b), Some(a)) => a < b || (a == b && (hi.is_closed() || lo.is_closed())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl Interval {
    pub fn new(lo: Endpoint, hi: Endpoint) -> Self {
        Self { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        Self { lo: Endpoint::Closed(v.clone()), hi: Endpoint::Closed(v) }
    }

    pub fn is_empty(&self) -> bool {
        match (self.lo.value(), self.hi.value()) {
            (Some(a), Some(b)) => a > b || (a == b && !(self.lo.is_closed() && self.hi.is_closed())),
            _ => false,
        }
    }

    pub fn as_point(&self) -> Option<&Rational> {
        match (&self.lo, &self.hi) {
            (Endpoint::Closed(a), Endpoint::Closed(b)) if a == b => Some(a),
            _ => None,
        }
    }

    fn contains_interval(&self, other: &Interval) -> bool {
        cmp_lower(&self.lo, &other.lo) != Ordering::Greater && cmp_upper(&other.hi, &self.hi) != Ordering::Greater
    }

    fn intersect(&self, other: &Interval) -> Interval {
        let lo = if cmp_lower(&self.lo, &other.lo) == Ordering::Less { &other.lo } else { &self.lo };
        let hi = if cmp_upper(&self.hi, &other.hi) == Ordering::Less { &self.hi } else { &other.hi };
        Interval::new(lo.clone(), hi.clone())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_point() {
            return write!(f, "{p}");
        }
        match &self.lo {
            Endpoint::Unbounded => write!(f, "(-inf")?,
            Endpoint::Open(v) => write!(f, "({v}")?,
            Endpoint::Closed(v) => write!(f, "[{v}")?,
        }
        match &self.hi {
            Endpoint::Unbounded => write!(f, ",inf)"),
            Endpoint::Open(v) => write!(f, ",{v})"),
            Endpoint::Closed(v) => write!(f, ",{v}]"),
        }
    }
}

/// A canonical finite union of rational intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RealSet {
    parts: Vec<Interval>,
}

impl RealSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_parts(parts: impl IntoIterator<Item = Interval>) -> Self {
        let mut parts: Vec<Interval> = parts.into_iter().filter(|i| !i.is_empty()).collect();
        parts.sort_by(|a, b| cmp_lower(&a.lo, &b.lo).then_with(|| cmp_upper(&a.hi, &b.hi)));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for part in parts {
            match merged.last_mut() {
                Some(cur) if touches(&cur.hi, &part.lo) => {
                    if cmp_upper(&part.hi, &cur.hi) == Ordering::Greater {
                        cur.hi = part.hi;
                    }
                }
                _ => merged.push(part),
            }
        }
        Self { parts: merged }
    }

    pub fn point(v: Rational) -> Self {
        Self { parts: vec![Interval::point(v)] }
    }

    pub fn points(vs: impl IntoIterator<Item = Rational>) -> Self {
        Self::from_parts(vs.into_iter().map(Interval::point))
    }

    pub fn interval(lo: Endpoint, hi: Endpoint) -> Self {
        Self::from_parts([Interval::new(lo, hi)])
    }

    /// The whole real line.
    pub fn reals() -> Self {
        Self::interval(Endpoint::Unbounded, Endpoint::Unbounded)
    }

    /// `(0, inf)`.
    pub fn positive() -> Self {
        Self::interval(Endpoint::Open(Rational::zero()), Endpoint::Unbounded)
    }

    /// `(-inf, 0)`.
    pub fn negative() -> Self {
        Self::interval(Endpoint::Unbounded, Endpoint::Open(Rational::zero()))
    }

    /// `R \ {0}`.
    pub fn nonzero() -> Self {
        Self::reals().remove_point(&Rational::zero())
    }

    /// `[0, inf)`.
    pub fn nonnegative() -> Self {
        Self::interval(Endpoint::Closed(Rational::zero()), Endpoint::Unbounded)
    }

    /// `(-1, 0)`.
    pub fn unit_gap() -> Self {
        Self::interval(Endpoint::Open(-Rational::one()), Endpoint::Open(Rational::zero()))
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The elements, when the set is finite.
    pub fn as_points(&self) -> Option<Vec<Rational>> {
        self.parts.iter().map(|i| i.as_point().cloned()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.parts.iter().all(|i| i.as_point().is_some())
    }

    /// Number of isolated points in the set.
    pub fn point_count(&self) -> usize {
        self.parts.iter().filter(|i| i.as_point().is_some()).count()
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.parts.iter().any(|i| i.contains_interval(&Interval::point(v.clone())))
    }

    pub fn is_subset(&self, other: &RealSet) -> bool {
        self.parts.iter().all(|i| other.parts.iter().any(|j| j.contains_interval(i)))
    }

    pub fn union(&self, other: &RealSet) -> RealSet {
        Self::from_parts(self.parts.iter().chain(&other.parts).cloned())
    }

    pub fn intersection(&self, other: &RealSet) -> RealSet {
        Self::from_parts(self.parts.iter().flat_map(|a| other.parts.iter().map(move |b| a.intersect(b))))
    }

    pub fn intersects(&self, other: &RealSet) -> bool {
        !self.intersection(other).is_empty()
    }

    pub fn negate(&self) -> RealSet {
        Self::from_parts(self.parts.iter().map(|i| Interval::new(i.hi.neg(), i.lo.neg())))
    }

    /// The Minkowski sum `{a + b : a in self, b in other}`.
    pub fn sum(&self, other: &RealSet) -> RealSet {
        Self::from_parts(
            self.parts
                .iter()
                .flat_map(|a| other.parts.iter().map(move |b| Interval::new(a.lo.add(&b.lo), a.hi.add(&b.hi)))),
        )
    }

    pub fn translate(&self, by: &Rational) -> RealSet {
        self.sum(&RealSet::point(by.clone()))
    }

    pub fn remove_point(&self, v: &Rational) -> RealSet {
        let mask = RealSet::from_parts([
            Interval::new(Endpoint::Unbounded, Endpoint::Open(v.clone())),
            Interval::new(Endpoint::Open(v.clone()), Endpoint::Unbounded),
        ]);
        self.intersection(&mask)
    }

    /// Smallest element, if the set has one.
    pub fn min(&self) -> Option<&Rational> {
        match self.parts.first().map(|i| &i.lo) {
            Some(Endpoint::Closed(v)) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for RealSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "{}", items.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn points_dedupe_and_sort() {
        let s = RealSet::points([r(3, 2), r(1, 1), r(3, 2)]);
        assert_eq!(s.as_points().unwrap(), vec![r(1, 1), r(3, 2)]);
    }

    #[test]
    fn points_are_absorbed_by_intervals() {
        let s = RealSet::nonzero().union(&RealSet::point(r(1, 1)));
        assert_eq!(s, RealSet::nonzero());
        assert!(!s.contains(&r(0, 1)));
    }

    #[test]
    fn touching_intervals_merge_only_through_a_closed_end() {
        let open = RealSet::positive().union(&RealSet::negative());
        assert_eq!(open.parts().len(), 2);
        let closed = open.union(&RealSet::point(r(0, 1)));
        assert_eq!(closed, RealSet::reals());
    }

    #[test]
    fn minkowski_sums() {
        assert_eq!(RealSet::positive().sum(&RealSet::negative()), RealSet::reals());
        assert_eq!(RealSet::positive().sum(&RealSet::positive()), RealSet::positive());
        let shifted = RealSet::positive().sum(&RealSet::point(r(1, 1)));
        assert_eq!(shifted, RealSet::interval(Endpoint::Open(r(1, 1)), Endpoint::Unbounded));
        assert!(shifted.is_subset(&RealSet::positive()));
        assert!(!RealSet::positive().is_subset(&shifted));
    }

    #[test]
    fn subset_respects_gaps() {
        let gap = RealSet::nonzero();
        let across = RealSet::interval(Endpoint::Open(r(-1, 1)), Endpoint::Open(r(1, 1)));
        assert!(!across.is_subset(&gap));
        assert!(RealSet::point(r(5, 1)).is_subset(&gap));
    }

    fn finite_set() -> impl Strategy<Value = RealSet> {
        proptest::collection::vec((-12i64..12, 1i64..5), 0..5)
            .prop_map(|v| RealSet::points(v.into_iter().map(|(n, d)| r(n, d))))
    }

    fn mixed_set() -> impl Strategy<Value = RealSet> {
        (finite_set(), proptest::collection::vec((-6i64..6, 0i64..6, any::<bool>(), any::<bool>()), 0..3)).prop_map(
            |(pts, ivs)| {
                let parts = ivs.into_iter().map(|(a, len, lc, hc)| {
                    let lo = if lc { Endpoint::Closed(r(a, 1)) } else { Endpoint::Open(r(a, 1)) };
                    let hi = if hc { Endpoint::Closed(r(a + len, 1)) } else { Endpoint::Open(r(a + len, 1)) };
                    Interval::new(lo, hi)
                });
                pts.union(&RealSet::from_parts(parts))
            },
        )
    }

    proptest! {
        #[test]
        fn union_is_idempotent_and_commutative(a in mixed_set(), b in mixed_set()) {
            prop_assert_eq!(a.union(&a), a.clone());
            prop_assert_eq!(a.union(&b), b.union(&a));
            prop_assert!(a.is_subset(&a.union(&b)));
        }

        #[test]
        fn sums_of_finite_sets_match_brute_force(a in finite_set(), b in finite_set()) {
            let pa = a.as_points().unwrap();
            let pb = b.as_points().unwrap();
            let brute = RealSet::points(pa.iter().flat_map(|x| pb.iter().map(move |y| x + y)));
            prop_assert_eq!(a.sum(&b), brute);
        }

        #[test]
        fn membership_agrees_with_parts(a in mixed_set(), n in -14i64..14, d in 1i64..4) {
            let v = r(n, d);
            let direct = a.parts().iter().any(|i| {
                let lo_ok = match &i.lo { Endpoint::Unbounded => true, Endpoint::Open(x) => x < &v, Endpoint::Closed(x) => x <= &v };
                let hi_ok = match &i.hi { Endpoint::Unbounded => true, Endpoint::Open(x) => &v < x, Endpoint::Closed(x) => &v <= x };
                lo_ok && hi_ok
            });
            prop_assert_eq!(a.contains(&v), direct);
            prop_assert!(!a.remove_point(&v).contains(&v));
            prop_assert_eq!(a.negate().contains(&-v.clone()), a.contains(&v));
        }
    }
}
