//! Exact interval-union sets over the unit interval.
//!
//! A [`RangeSet`] is a finite union of intervals with rational endpoints, each
//! endpoint independently open or closed. Isolated points are degenerate closed
//! intervals, so the same type holds ranges, gap zones and obstruction sets.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::scalar::{in_unit, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("interval {0} is empty or inverted")]
    Degenerate(String),
    #[error("interval {0} escapes [0,1]")]
    OutsideUnit(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval<S> {
    pub lo: S,
    pub hi: S,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl<S: Scalar> Interval<S> {
    pub fn new(lo: S, hi: S, lo_closed: bool, hi_closed: bool) -> Result<Self, SetError> {
        let iv = Interval { lo, hi, lo_closed, hi_closed };
        match iv.lo.cmp(&iv.hi) {
            Ordering::Less => Ok(iv),
            Ordering::Equal if lo_closed && hi_closed => Ok(iv),
            _ => Err(SetError::Degenerate(iv.to_string())),
        }
    }

    /// Like [`Interval::new`] but returns `None` for an empty interval.
    pub fn try_new(lo: S, hi: S, lo_closed: bool, hi_closed: bool) -> Option<Self> {
        Self::new(lo, hi, lo_closed, hi_closed).ok()
    }

    pub fn point(x: S) -> Self {
        Interval { lo: x.clone(), hi: x, lo_closed: true, hi_closed: true }
    }

    pub fn closed(lo: S, hi: S) -> Self {
        Self::new(lo, hi, true, true).expect("closed interval with lo > hi")
    }

    pub fn closed_open(lo: S, hi: S) -> Self {
        Self::new(lo, hi, true, false).expect("half-open interval must have positive length")
    }

    pub fn open(lo: S, hi: S) -> Self {
        Self::new(lo, hi, false, false).expect("open interval must have positive length")
    }

    pub fn open_closed(lo: S, hi: S) -> Self {
        Self::new(lo, hi, false, true).expect("half-open interval must have positive length")
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &S) -> bool {
        let above = match self.lo.cmp(x) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Greater => false,
        };
        above
            && match x.cmp(&self.hi) {
                Ordering::Less => true,
                Ordering::Equal => self.hi_closed,
                Ordering::Greater => false,
            }
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Self::try_new(lo, hi, lo_closed, hi_closed)
    }

    /// A rational point strictly inside the interval, or the point itself.
    pub fn interior_point(&self) -> S {
        if self.is_point() {
            self.lo.clone()
        } else {
            S::midpoint(&self.lo, &self.hi)
        }
    }

    /// The closed endpoints as concrete members.
    pub fn closed_endpoints(&self) -> Vec<S> {
        let mut out = Vec::new();
        if self.lo_closed {
            out.push(self.lo.clone());
        }
        if self.hi_closed && !self.is_point() {
            out.push(self.hi.clone());
        }
        out
    }

    fn within_unit(&self) -> bool {
        in_unit(&self.lo) && in_unit(&self.hi)
    }
}

impl<S: Scalar> fmt::Display for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() && self.lo_closed && self.hi_closed {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Canonical finite union of intervals: sorted, pairwise disjoint, and no two
/// components whose union is itself an interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RangeSet<S> {
    components: Vec<Interval<S>>,
}

impl<S: Scalar> Default for RangeSet<S> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<S: Scalar> RangeSet<S> {
    pub fn empty() -> Self {
        RangeSet { components: Vec::new() }
    }

    pub fn unit() -> Self {
        Self::interval(Interval::closed(S::zero(), S::one()))
    }

    pub fn interval(iv: Interval<S>) -> Self {
        RangeSet { components: vec![iv] }
    }

    pub fn point(x: S) -> Self {
        Self::interval(Interval::point(x))
    }

    pub fn from_points<I: IntoIterator<Item = S>>(points: I) -> Self {
        Self::canonical(points.into_iter().map(Interval::point).collect())
    }

    /// Canonical form of a union, rejecting anything outside `[0,1]`.
    pub fn normalize(raw: Vec<Interval<S>>) -> Result<Self, SetError> {
        if let Some(bad) = raw.iter().find(|iv| !iv.within_unit()) {
            return Err(SetError::OutsideUnit(bad.to_string()));
        }
        Ok(Self::canonical(raw))
    }

    pub(crate) fn canonical(mut raw: Vec<Interval<S>>) -> Self {
        // closed left endpoints first on ties
        raw.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval<S>> = Vec::with_capacity(raw.len());
        for next in raw {
            if let Some(cur) = out.last_mut() {
                let joins = match next.lo.cmp(&cur.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => cur.hi_closed || next.lo_closed,
                    Ordering::Greater => false,
                };
                if joins {
                    match next.hi.cmp(&cur.hi) {
                        Ordering::Greater => {
                            cur.hi = next.hi;
                            cur.hi_closed = next.hi_closed;
                        }
                        Ordering::Equal => cur.hi_closed |= next.hi_closed,
                        Ordering::Less => {}
                    }
                    if next.lo == cur.lo {
                        cur.lo_closed |= next.lo_closed;
                    }
                    continue;
                }
            }
            out.push(next);
        }
        RangeSet { components: out }
    }

    pub fn components(&self) -> &[Interval<S>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Interval<S>> {
        self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// True when the set is a finite collection of points.
    pub fn is_finite(&self) -> bool {
        self.components.iter().all(Interval::is_point)
    }

    /// The members, when the set is finite.
    pub fn points(&self) -> Option<Vec<S>> {
        self.is_finite()
            .then(|| self.components.iter().map(|c| c.lo.clone()).collect())
    }

    pub fn member(&self, x: &S) -> bool {
        // components are sorted; find the last one starting at or before x
        let idx = self.components.partition_point(|c| c.lo <= *x);
        idx > 0 && self.components[idx - 1].contains(x)
    }

    pub fn inf(&self) -> Option<&S> {
        self.components.first().map(|c| &c.lo)
    }

    pub fn sup(&self) -> Option<&S> {
        self.components.last().map(|c| &c.hi)
    }

    /// Least element, when the infimum is attained.
    pub fn min(&self) -> Option<&S> {
        self.components.first().filter(|c| c.lo_closed).map(|c| &c.lo)
    }

    /// Greatest element, when the supremum is attained.
    pub fn max(&self) -> Option<&S> {
        self.components.last().filter(|c| c.hi_closed).map(|c| &c.hi)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut raw = self.components.clone();
        raw.extend(other.components.iter().cloned());
        Self::canonical(raw)
    }

    pub fn union_all<'a, I>(sets: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        S: 'a,
    {
        Self::canonical(
            sets.into_iter()
                .flat_map(|s| s.components.iter().cloned())
                .collect(),
        )
    }

    pub fn insert(&mut self, iv: Interval<S>) {
        let mut raw = std::mem::take(&mut self.components);
        raw.push(iv);
        *self = Self::canonical(raw);
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.components.len() && j < other.components.len() {
            let (a, b) = (&self.components[i], &other.components[j]);
            if let Some(c) = a.intersect(b) {
                out.push(c);
            }
            // advance whichever ends first
            let a_first = match a.hi.cmp(&b.hi) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => !a.hi_closed || b.hi_closed,
            };
            if a_first {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::canonical(out)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.components.len() && j < other.components.len() {
            let (a, b) = (&self.components[i], &other.components[j]);
            if a.intersect(b).is_some() {
                return true;
            }
            if a.hi < b.hi || (a.hi == b.hi && !a.hi_closed) {
                i += 1;
            } else {
                j += 1;
            }
        }
        false
    }

    /// `[0,1] \ self`.
    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut lo = S::zero();
        let mut lo_closed = true;
        for c in &self.components {
            if let Some(gap) = Interval::try_new(lo.clone(), c.lo.clone(), lo_closed, !c.lo_closed) {
                out.push(gap);
            }
            lo = c.hi.clone();
            lo_closed = !c.hi_closed;
        }
        if let Some(tail) = Interval::try_new(lo, S::one(), lo_closed, true) {
            out.push(tail);
        }
        // components of self may stick out of [0,1]; clip
        Self::canonical(out).intersection(&Self::unit())
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn without_point(&self, x: &S) -> Self {
        self.difference(&Self::point(x.clone()))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// `O(S)`: the union of `[min{x,y}, max{x,y})` over all pairs of members.
    ///
    /// Empty for the empty set and for singletons; otherwise the sweep from the
    /// infimum (included iff attained) up to, but excluding, the supremum.
    pub fn o_span(&self) -> Self {
        match (self.components.first(), self.components.last()) {
            (Some(first), Some(last)) if first.lo < last.hi => Self::interval(Interval {
                lo: first.lo.clone(),
                hi: last.hi.clone(),
                lo_closed: first.lo_closed,
                hi_closed: false,
            }),
            _ => Self::empty(),
        }
    }

    /// Least element of `[x,1] ∩ self`, if the infimum is attained.
    pub fn least_at_or_above(&self, x: &S) -> Option<S> {
        for c in &self.components {
            if c.contains(x) {
                return Some(x.clone());
            }
            if c.lo > *x || (c.lo == *x && !c.lo_closed) {
                return c.lo_closed.then(|| c.lo.clone());
            }
        }
        None
    }

    /// Every closed endpoint plus one interior point per component.
    pub fn sample_points(&self) -> Vec<S> {
        let mut out = Vec::new();
        for c in &self.components {
            out.extend(c.closed_endpoints());
            if !c.is_point() {
                out.push(c.interior_point());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Split every non-degenerate component into `2^depth` equal pieces.
    pub fn bisect(&self, depth: u32) -> Vec<Interval<S>> {
        let mut out = Vec::new();
        for c in &self.components {
            if c.is_point() {
                out.push(c.clone());
                continue;
            }
            let parts = 1i64 << depth.min(40);
            let width = (c.hi.clone() - c.lo.clone()) / S::from_int(parts);
            for i in 0..parts {
                let lo = c.lo.clone() + width.clone() * S::from_int(i);
                let hi = if i + 1 == parts { c.hi.clone() } else { lo.clone() + width.clone() };
                let lo_closed = if i == 0 { c.lo_closed } else { true };
                let hi_closed = if i + 1 == parts { c.hi_closed } else { false };
                out.push(Interval { lo, hi, lo_closed, hi_closed });
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Display for RangeSet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "∅");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl<S: Scalar> FromIterator<Interval<S>> for RangeSet<S> {
    fn from_iter<I: IntoIterator<Item = Interval<S>>>(iter: I) -> Self {
        Self::canonical(iter.into_iter().collect())
    }
}
