//! Monotone piecewise-linear generators on `[0,1]`.
//!
//! Pieces partition `[0,1)` into left-closed, right-open cells, so the stored
//! function is right-continuous by construction; the value at `1` is explicit.
//! A value that differs from the right limit at a breakpoint can be recorded as
//! an override, which is the only way to express a function that is not
//! right-continuous.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{Interval, RangeSet};
use crate::scalar::{in_unit, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("malformed generator: {0}")]
    Structure(String),
    #[error("argument {0} is outside the function's domain")]
    Domain(String),
    #[error("operation requires a non-decreasing generator")]
    UnsupportedDirection,
    #[error("generator is not monotone in its declared direction")]
    NotMonotone,
    #[error("generator is not right-continuous")]
    NotRightContinuous,
    #[error("{0} is not in the restricted domain D")]
    OutsideRestrictedDomain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    NonDecreasing,
    NonIncreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    Constant,
    Affine,
}

/// `x ↦ slope·x + intercept` on `[x_lo, x_hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece<S> {
    pub x_lo: S,
    pub x_hi: S,
    pub kind: PieceKind,
    pub slope: S,
    pub intercept: S,
}

impl<S: Scalar> Piece<S> {
    pub fn constant(x_lo: S, x_hi: S, value: S) -> Self {
        Piece { x_lo, x_hi, kind: PieceKind::Constant, slope: S::zero(), intercept: value }
    }

    pub fn affine(x_lo: S, x_hi: S, slope: S, intercept: S) -> Self {
        Piece { x_lo, x_hi, kind: PieceKind::Affine, slope, intercept }
    }

    /// The affine piece through `(x_lo, y_lo)` whose left limit at `x_hi` is `y_hi`.
    pub fn through(x_lo: S, x_hi: S, y_lo: S, y_hi: S) -> Self {
        let slope = (y_hi - y_lo.clone()) / (x_hi.clone() - x_lo.clone());
        let intercept = y_lo - slope.clone() * x_lo.clone();
        Self::affine(x_lo, x_hi, slope, intercept)
    }

    pub fn at(&self, x: &S) -> S {
        self.slope.clone() * x.clone() + self.intercept.clone()
    }

    fn is_flat(&self) -> bool {
        self.slope.is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub monotone: bool,
    pub right_continuous: bool,
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseFn<S> {
    pieces: Vec<Piece<S>>,
    value_at_1: S,
    direction: Direction,
    overrides: Vec<(S, S)>,
}

#[derive(Clone, Copy)]
enum Rel {
    Below,
    Above,
}

impl<S: Scalar> PiecewiseFn<S> {
    pub fn new(
        direction: Direction,
        pieces: Vec<Piece<S>>,
        value_at_1: S,
        mut overrides: Vec<(S, S)>,
    ) -> Result<Self, GeneratorError> {
        let bad = |msg: String| Err(GeneratorError::Structure(msg));
        let (Some(first), Some(last)) = (pieces.first(), pieces.last()) else {
            return bad("no pieces".into());
        };
        if !first.x_lo.is_zero() {
            return bad(format!("first piece starts at {} instead of 0", first.x_lo));
        }
        if !last.x_hi.is_one() {
            return bad(format!("last piece ends at {} instead of 1", last.x_hi));
        }
        for (i, p) in pieces.iter().enumerate() {
            if p.x_lo >= p.x_hi {
                return bad(format!("piece {i} has empty domain [{}, {})", p.x_lo, p.x_hi));
            }
            if p.kind == PieceKind::Constant && !p.slope.is_zero() {
                return bad(format!("constant piece {i} has slope {}", p.slope));
            }
            if !in_unit(&p.at(&p.x_lo)) || !in_unit(&p.at(&p.x_hi)) {
                return bad(format!("piece {i} leaves [0,1]"));
            }
        }
        for (i, w) in pieces.windows(2).enumerate() {
            match w[0].x_hi.cmp(&w[1].x_lo) {
                Ordering::Less => return bad(format!("gap in domain after piece {i}")),
                Ordering::Greater => return bad(format!("pieces {i} and {} overlap", i + 1)),
                Ordering::Equal => {}
            }
        }
        if !in_unit(&value_at_1) {
            return bad(format!("value at 1 ({value_at_1}) outside [0,1]"));
        }
        overrides.sort_by(|a, b| a.0.cmp(&b.0));
        for w in overrides.windows(2) {
            if w[0].0 == w[1].0 {
                return bad(format!("duplicate override at {}", w[0].0));
            }
        }
        for (x, v) in &overrides {
            if !pieces.iter().any(|p| p.x_lo == *x) {
                return bad(format!("override at {x} is not a breakpoint in [0,1)"));
            }
            if !in_unit(v) {
                return bad(format!("override value {v} outside [0,1]"));
            }
        }
        Ok(PiecewiseFn { pieces, value_at_1, direction, overrides })
    }

    /// Non-decreasing, right-continuous function from pieces.
    pub fn non_decreasing(pieces: Vec<Piece<S>>, value_at_1: S) -> Result<Self, GeneratorError> {
        Self::new(Direction::NonDecreasing, pieces, value_at_1, Vec::new())
    }

    pub fn identity() -> Self {
        Self::non_decreasing(vec![Piece::affine(S::zero(), S::one(), S::one(), S::zero())], S::one())
            .expect("identity is well formed")
    }

    pub fn constant(c: S) -> Result<Self, GeneratorError> {
        Self::non_decreasing(vec![Piece::constant(S::zero(), S::one(), c.clone())], c)
    }

    /// The canonical step function whose range is exactly `values`.
    ///
    /// With `n > 1` distinct values the i-th smallest is taken on
    /// `[i/(n-1), (i+1)/(n-1))` and the largest only at `1`, so `1` stays in
    /// the restricted domain. A single value is taken everywhere.
    pub fn step(values: &[S]) -> Result<Self, GeneratorError> {
        let mut vals = values.to_vec();
        vals.sort();
        vals.dedup();
        let Some(top) = vals.pop() else {
            return Err(GeneratorError::Structure("empty value set".into()));
        };
        if vals.is_empty() {
            return Self::constant(top);
        }
        let n = vals.len() as i64;
        let pieces = vals
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let i = i as i64;
                Piece::constant(S::from_frac(i, n), S::from_frac(i + 1, n), v.clone())
            })
            .collect();
        Self::non_decreasing(pieces, top)
    }

    pub fn pieces(&self) -> &[Piece<S>] {
        &self.pieces
    }

    pub fn value_at_1(&self) -> &S {
        &self.value_at_1
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn overrides(&self) -> &[(S, S)] {
        &self.overrides
    }

    /// Breakpoints, including 0 and 1.
    pub fn breakpoints(&self) -> Vec<S> {
        let mut out: Vec<S> = self.pieces.iter().map(|p| p.x_lo.clone()).collect();
        out.push(S::one());
        out
    }

    fn piece_index(&self, x: &S) -> usize {
        self.pieces.partition_point(|p| p.x_lo <= *x).saturating_sub(1)
    }

    fn override_at(&self, x: &S) -> Option<&S> {
        self.overrides
            .binary_search_by(|(ox, _)| ox.cmp(x))
            .ok()
            .map(|i| &self.overrides[i].1)
    }

    fn check_domain(x: &S) -> Result<(), GeneratorError> {
        if in_unit(x) {
            Ok(())
        } else {
            Err(GeneratorError::Domain(x.to_string()))
        }
    }

    pub fn eval(&self, x: &S) -> Result<S, GeneratorError> {
        Self::check_domain(x)?;
        if x.is_one() {
            return Ok(self.value_at_1.clone());
        }
        if let Some(v) = self.override_at(x) {
            return Ok(v.clone());
        }
        Ok(self.pieces[self.piece_index(x)].at(x))
    }

    /// `f(a⁻)` for `a ∈ (0,1]`.
    pub fn left_limit(&self, a: &S) -> Result<S, GeneratorError> {
        Self::check_domain(a)?;
        if a.is_zero() {
            return Err(GeneratorError::Domain("left limit at 0".into()));
        }
        let idx = self.pieces.partition_point(|p| p.x_lo < *a) - 1;
        Ok(self.pieces[idx].at(a))
    }

    /// `f(a⁺)` for `a ∈ [0,1)`.
    pub fn right_limit(&self, a: &S) -> Result<S, GeneratorError> {
        Self::check_domain(a)?;
        if a.is_one() {
            return Err(GeneratorError::Domain("right limit at 1".into()));
        }
        Ok(self.pieces[self.piece_index(a)].at(a))
    }

    pub fn validate(&self) -> ValidationReport {
        let up = self.direction == Direction::NonDecreasing;
        let ordered = |a: &S, b: &S| if up { a <= b } else { a >= b };
        let mut monotone = self.pieces.iter().all(|p| {
            if up {
                !p.slope.is_negative()
            } else {
                !p.slope.is_positive()
            }
        });
        // across each breakpoint: left limit, stored value, right limit
        for (i, p) in self.pieces.iter().enumerate() {
            let right = p.at(&p.x_lo);
            let value = self.override_at(&p.x_lo).cloned().unwrap_or_else(|| right.clone());
            if i > 0 {
                let left = self.pieces[i - 1].at(&p.x_lo);
                monotone &= ordered(&left, &value);
            }
            monotone &= ordered(&value, &right);
        }
        let last = self.pieces.last().expect("nonempty");
        monotone &= ordered(&last.at(&last.x_hi), &self.value_at_1);

        let right_continuous = self
            .overrides
            .iter()
            .all(|(x, v)| self.pieces[self.piece_index(x)].at(x) == *v);

        let c = &self.value_at_1;
        let constant = self
            .pieces
            .iter()
            .all(|p| p.is_flat() && p.intercept == *c)
            && self.overrides.iter().all(|(_, v)| v == c);

        ValidationReport { monotone, right_continuous, constant }
    }

    /// Exact sup (or inf) of `{x : f(x) rel y}` computed piece by piece.
    fn extremum_where(&self, rel: Rel, y: &S, want_sup: bool) -> Option<S> {
        let holds = |v: &S| match rel {
            Rel::Below => v < y,
            Rel::Above => v > y,
        };
        let mut best: Option<S> = None;
        let mut offer = |c: S| {
            best = Some(match best.take() {
                None => c,
                Some(b) => {
                    if want_sup {
                        b.max(c)
                    } else {
                        b.min(c)
                    }
                }
            })
        };
        for p in &self.pieces {
            if p.is_flat() {
                if holds(&p.intercept) {
                    offer(if want_sup { p.x_hi.clone() } else { p.x_lo.clone() });
                }
                continue;
            }
            let root = (y.clone() - p.intercept.clone()) / p.slope.clone();
            // solution is x < root or x > root
            let left_of_root = matches!(
                (rel, p.slope.is_positive()),
                (Rel::Below, true) | (Rel::Above, false)
            );
            if left_of_root {
                if root > p.x_lo {
                    offer(if want_sup { root.min(p.x_hi.clone()) } else { p.x_lo.clone() });
                }
            } else if root < p.x_hi {
                offer(if want_sup { p.x_hi.clone() } else { root.max(p.x_lo.clone()) });
            }
        }
        // isolated points; removing a single point from a positive-length cell
        // never moves its sup or inf
        for (x, v) in &self.overrides {
            if holds(v) {
                offer(x.clone());
            }
        }
        if holds(&self.value_at_1) {
            offer(S::one());
        }
        best
    }

    /// `f⁽⁻¹⁾(y)`: `sup{x : f(x) < y}` for non-decreasing `f`,
    /// `sup{x : f(x) > y}` for non-increasing `f`, with `sup ∅ = 0`.
    pub fn pseudo_inverse(&self, y: &S) -> S {
        let rel = match self.direction {
            Direction::NonDecreasing => Rel::Below,
            Direction::NonIncreasing => Rel::Above,
        };
        self.extremum_where(rel, y, true).unwrap_or_else(S::zero)
    }

    /// `inf{x : f(x) > y}` (non-decreasing) or `inf{x : f(x) < y}`
    /// (non-increasing), with `inf ∅ = 1`.
    pub fn inf_beyond(&self, y: &S) -> S {
        let rel = match self.direction {
            Direction::NonDecreasing => Rel::Above,
            Direction::NonIncreasing => Rel::Below,
        };
        self.extremum_where(rel, y, false).unwrap_or_else(S::one)
    }

    pub(crate) fn require_non_decreasing(&self) -> Result<(), GeneratorError> {
        if self.direction != Direction::NonDecreasing {
            return Err(GeneratorError::UnsupportedDirection);
        }
        if !self.validate().monotone {
            return Err(GeneratorError::NotMonotone);
        }
        Ok(())
    }

    pub(crate) fn require_generator(&self) -> Result<(), GeneratorError> {
        self.require_non_decreasing()?;
        if !self.validate().right_continuous {
            return Err(GeneratorError::NotRightContinuous);
        }
        Ok(())
    }

    fn image(&self, include_one: bool) -> Result<RangeSet<S>, GeneratorError> {
        self.require_non_decreasing()?;
        let mut raw = Vec::with_capacity(self.pieces.len() + self.overrides.len() + 1);
        for p in &self.pieces {
            if p.is_flat() {
                raw.push(Interval::point(p.intercept.clone()));
            } else {
                let overridden = self.override_at(&p.x_lo).is_some();
                raw.push(Interval::new(p.at(&p.x_lo), p.at(&p.x_hi), !overridden, false).expect("increasing piece"));
            }
        }
        raw.extend(self.overrides.iter().map(|(_, v)| Interval::point(v.clone())));
        if include_one {
            raw.push(Interval::point(self.value_at_1.clone()));
        }
        Ok(RangeSet::canonical(raw))
    }

    /// `Ran(f)`.
    pub fn range_of(&self) -> Result<RangeSet<S>, GeneratorError> {
        self.image(true)
    }

    /// `f([0,1))`.
    pub fn range_below_one(&self) -> Result<RangeSet<S>, GeneratorError> {
        self.image(false)
    }

    /// Values taken on some interval of positive length.
    pub fn plateau_values(&self) -> Vec<S> {
        let mut out: Vec<S> = self
            .pieces
            .iter()
            .filter(|p| p.is_flat())
            .map(|p| p.intercept.clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// `(E, F)`: the points of `c` attained on a plateau, and the rest.
    pub fn plateau_sets(&self, c: &[S]) -> (Vec<S>, Vec<S>) {
        let plateaus = self.plateau_values();
        c.iter()
            .cloned()
            .partition(|v| plateaus.binary_search(v).is_ok())
    }

    /// `{x ∈ [0,1] : f(x) = c}`.
    pub fn preimage_of_value(&self, c: &S) -> RangeSet<S> {
        let mut raw = Vec::new();
        for p in &self.pieces {
            if p.is_flat() {
                if p.intercept == *c {
                    raw.push(Interval::closed_open(p.x_lo.clone(), p.x_hi.clone()));
                }
            } else {
                let root = (c.clone() - p.intercept.clone()) / p.slope.clone();
                if p.x_lo <= root && root < p.x_hi {
                    raw.push(Interval::point(root));
                }
            }
        }
        if self.value_at_1 == *c {
            raw.push(Interval::point(S::one()));
        }
        let mut set = RangeSet::canonical(raw);
        for (x, v) in &self.overrides {
            set = if v == c {
                set.union(&RangeSet::point(x.clone()))
            } else {
                set.without_point(x)
            };
        }
        set
    }

    /// `D = H ∪ J` together with `f* = f|_D` and `d* = f⁽⁻¹⁾`.
    ///
    /// `H` holds the least preimage of every plateau value and `J` every point
    /// whose value is not a plateau value, so `f*` is strictly increasing.
    pub fn restrict_domain(&self) -> Result<RestrictedGenerator<S>, GeneratorError> {
        self.require_generator()?;
        let mut heads = Vec::new();
        let mut plateau_preimages = RangeSet::empty();
        for c in self.plateau_values() {
            let pre = self.preimage_of_value(&c);
            heads.push(pre.min().cloned().expect("right-continuous plateaus start closed"));
            plateau_preimages = plateau_preimages.union(&pre);
        }
        let j = plateau_preimages.complement();
        let domain = j.union(&RangeSet::from_points(heads));
        Ok(RestrictedGenerator { domain, base: self.clone() })
    }
}

impl<S: Scalar> fmt::Display for PiecewiseFn<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.pieces {
            write!(f, "[{},{}): ", p.x_lo, p.x_hi)?;
            if p.is_flat() {
                writeln!(f, "{}", p.intercept)?;
            } else {
                writeln!(f, "{}·x + {}", p.slope, p.intercept)?;
            }
        }
        for (x, v) in &self.overrides {
            writeln!(f, "at {x}: {v}")?;
        }
        write!(f, "at 1: {}", self.value_at_1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedGenerator<S> {
    pub domain: RangeSet<S>,
    pub base: PiecewiseFn<S>,
}

impl<S: Scalar> RestrictedGenerator<S> {
    /// `f*(x) = f(x)` for `x ∈ D`.
    pub fn f_star(&self, x: &S) -> Result<S, GeneratorError> {
        if !self.domain.member(x) {
            return Err(GeneratorError::OutsideRestrictedDomain(x.to_string()));
        }
        self.base.eval(x)
    }

    /// `d*(y) = f⁽⁻¹⁾(y)`.
    pub fn d_star(&self, y: &S) -> S {
        self.base.pseudo_inverse(y)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::scalar::q;
    use num_rational::BigRational as R;

    fn r(n: i64, d: i64) -> R {
        q(n, d)
    }

    #[test]
    fn validate_reports() {
        let rep = g1::<R>().validate();
        assert_eq!(rep, ValidationReport { monotone: true, right_continuous: true, constant: false });
        let rep = remark_32::<R>().validate();
        assert!(rep.monotone);
        assert!(!rep.right_continuous);
        assert!(PiecewiseFn::constant(r(1, 2)).unwrap().validate().constant);
    }

    #[test]
    fn validate_detects_descent() {
        let f = PiecewiseFn::non_decreasing(
            vec![
                Piece::constant(r(0, 1), r(1, 2), r(1, 2)),
                Piece::constant(r(1, 2), r(1, 1), r(1, 4)),
            ],
            r(1, 1),
        )
        .unwrap();
        assert!(!f.validate().monotone);
        assert_eq!(f.range_of().unwrap_err(), GeneratorError::NotMonotone);
    }

    #[test]
    fn structural_errors() {
        let gap = PiecewiseFn::non_decreasing(
            vec![
                Piece::constant(r(0, 1), r(1, 3), r(0, 1)),
                Piece::constant(r(1, 2), r(1, 1), r(1, 1)),
            ],
            r(1, 1),
        );
        assert!(matches!(gap, Err(GeneratorError::Structure(_))));
        let overlap = PiecewiseFn::non_decreasing(
            vec![
                Piece::constant(r(0, 1), r(2, 3), r(0, 1)),
                Piece::constant(r(1, 2), r(1, 1), r(1, 1)),
            ],
            r(1, 1),
        );
        assert!(matches!(overlap, Err(GeneratorError::Structure(_))));
        let escapes = PiecewiseFn::non_decreasing(
            vec![Piece::affine(r(0, 1), r(1, 1), r(2, 1), r(0, 1))],
            r(1, 1),
        );
        assert!(matches!(escapes, Err(GeneratorError::Structure(_))));
        let stray_override = PiecewiseFn::new(
            Direction::NonDecreasing,
            vec![Piece::constant(r(0, 1), r(1, 1), r(0, 1))],
            r(1, 1),
            vec![(r(1, 2), r(0, 1))],
        );
        assert!(matches!(stray_override, Err(GeneratorError::Structure(_))));
    }

    #[test]
    fn eval_and_limits() {
        let f = g1::<R>();
        assert_eq!(f.eval(&r(2, 5)).unwrap(), r(2, 5));
        assert_eq!(f.eval(&r(1, 10)).unwrap(), r(1, 20));
        assert_eq!(f.eval(&r(1, 1)).unwrap(), r(1, 1));
        assert_eq!(f.left_limit(&r(2, 5)).unwrap(), r(1, 5));
        assert_eq!(f.left_limit(&r(3, 5)).unwrap(), r(2, 5));
        assert_eq!(f.left_limit(&r(7, 10)).unwrap(), r(7, 10));
        assert!(f.left_limit(&r(0, 1)).is_err());
        assert!(f.eval(&r(3, 2)).is_err());
        let c = PiecewiseFn::constant(r(1, 3)).unwrap();
        assert_eq!(c.eval(&r(5, 7)).unwrap(), r(1, 3));
    }

    #[test]
    fn pseudo_inverse_examples() {
        let f = g1::<R>();
        assert_eq!(f.pseudo_inverse(&r(3, 10)), r(2, 5));
        assert_eq!(PiecewiseFn::<R>::identity().pseudo_inverse(&r(0, 1)), r(0, 1));
        let rem = remark_32::<R>();
        assert_eq!(rem.pseudo_inverse(&r(2, 5)), r(2, 5));
        assert_eq!(rem.eval(&r(2, 5)).unwrap(), r(1, 5));
    }

    /// Sup over a grid refined around the breakpoints; exact when the true
    /// supremum is a grid point, otherwise a lower bound within one step.
    fn grid_sup(f: &PiecewiseFn<R>, y: &R, steps: i64) -> R {
        let mut best = r(0, 1);
        for i in 0..=steps {
            let x = r(i, steps);
            if f.eval(&x).unwrap() < *y && x > best {
                best = x;
            }
        }
        best
    }

    #[test]
    fn pseudo_inverse_matches_grid_oracle() {
        let f = g1::<R>();
        for (n, d) in [(3, 10), (1, 20), (1, 2), (9, 10), (2, 5), (3, 5)] {
            let y = r(n, d);
            let exact = f.pseudo_inverse(&y);
            let approx = grid_sup(&f, &y, 2000);
            assert!(approx <= exact && exact.clone() - approx <= r(1, 2000), "y = {y}");
        }
    }

    #[test]
    fn non_increasing_pseudo_inverse() {
        let f = PiecewiseFn::new(
            Direction::NonIncreasing,
            vec![Piece::affine(r(0, 1), r(1, 1), r(-1, 1), r(1, 1))],
            r(0, 1),
            vec![],
        )
        .unwrap();
        assert!(f.validate().monotone);
        // sup{x : 1 - x > 1/4} = 3/4
        assert_eq!(f.pseudo_inverse(&r(1, 4)), r(3, 4));
        assert_eq!(f.range_of().unwrap_err(), GeneratorError::UnsupportedDirection);
    }

    #[test]
    fn ranges() {
        assert_eq!(g1::<R>().range_of().unwrap().to_string(), "[0,1/5) ∪ {2/5} ∪ [3/5,1]");
        assert_eq!(g2::<R>().range_of().unwrap().to_string(), "[0,1/5] ∪ {2/5} ∪ [3/5,1]");
        assert_eq!(PiecewiseFn::constant(r(1, 2)).unwrap().range_of().unwrap(), RangeSet::point(r(1, 2)));
        assert_eq!(remark_32::<R>().range_of().unwrap().to_string(), "[0,1/5] ∪ {2/5} ∪ (3/5,1]");
    }

    #[test]
    fn plateau_sets_examples() {
        let (e, f) = g1::<R>().plateau_sets(&[r(2, 5), r(3, 5)]);
        assert_eq!((e, f), (vec![r(2, 5)], vec![r(3, 5)]));
        let (e, f) = g2::<R>().plateau_sets(&[r(1, 5), r(2, 5), r(3, 5)]);
        assert_eq!(e, vec![r(1, 5), r(2, 5), r(3, 5)]);
        assert!(f.is_empty());
        let (e, _) = PiecewiseFn::<R>::identity().plateau_sets(&[r(1, 1)]);
        assert!(e.is_empty());
    }

    #[test]
    fn restricted_domain_of_g2() {
        let rg = g2::<R>().restrict_domain().unwrap();
        assert_eq!(rg.domain.to_string(), "[0,1/5] ∪ {2/5} ∪ {3/5} ∪ (4/5,1]");
        for x in rg.domain.sample_points() {
            assert_eq!(rg.d_star(&rg.f_star(&x).unwrap()), x);
        }
        assert!(rg.f_star(&r(1, 2)).is_err());
    }

    #[test]
    fn restricted_domain_grid_cross_check() {
        // J = {x : f(x) ∈ M \ E}; compare membership on a fine grid
        let f = g2::<R>();
        let rg = f.restrict_domain().unwrap();
        let e = [r(1, 5), r(2, 5), r(3, 5)];
        let h = [r(1, 5), r(2, 5), r(3, 5)];
        for i in 0..=500 {
            let x = r(i, 500);
            let fx = f.eval(&x).unwrap();
            let in_j = !e.contains(&fx);
            assert_eq!(rg.domain.member(&x), in_j || h.contains(&x), "x = {x}");
        }
    }

    #[test]
    fn restricted_domain_of_strictly_increasing_is_unit() {
        let rg = PiecewiseFn::<R>::identity().restrict_domain().unwrap();
        assert_eq!(rg.domain, RangeSet::unit());
        assert!(remark_32::<R>().restrict_domain().is_err());
    }

    #[test]
    fn step_realizes_its_values() {
        let vals = [r(0, 1), r(19, 100), r(1, 5), r(2, 5), r(1, 2), r(9, 10), r(1, 1)];
        let f = PiecewiseFn::step(&vals).unwrap();
        assert_eq!(f.range_of().unwrap(), RangeSet::from_points(vals.iter().cloned()));
        assert_eq!(f.value_at_1(), &r(1, 1));
        assert_eq!(f.eval(&r(5, 6)).unwrap(), r(9, 10));
        let half = PiecewiseFn::step(&[r(1, 2), r(0, 1)]).unwrap();
        assert_eq!(half.pieces().len(), 1);
        assert_eq!(half.eval(&r(99, 100)).unwrap(), r(0, 1));
        assert_eq!(PiecewiseFn::step(&[r(1, 3)]).unwrap().eval(&r(0, 1)).unwrap(), r(1, 3));
    }
}
