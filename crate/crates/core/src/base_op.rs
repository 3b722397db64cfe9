//! Base operations `T*`: associative, monotone maps `[0,1]² → [0,1]` with a
//! neutral element, evaluated exactly.

use std::fmt;

use thiserror::Error;

use crate::exact::{Interval, RangeSet};
use crate::generator::Direction;
use crate::scalar::{in_unit, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("unknown base operation `{0}` (known: min, product, lukasiewicz, drastic, max, prob_sum, bounded_sum)")]
    UnknownId(String),
    #[error("invalid operation table: {0}")]
    InvalidTable(String),
    #[error("{0} is not in the table's carrier")]
    NotInCarrier(String),
    #[error("image of an empty set requested")]
    EmptyInput,
}

pub const REGISTRY_IDS: [&str; 7] = [
    "min",
    "product",
    "lukasiewicz",
    "drastic",
    "max",
    "prob_sum",
    "bounded_sum",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Min,
    Product,
    Lukasiewicz,
    Drastic,
    Max,
    ProbSum,
    BoundedSum,
}

impl OpKind {
    pub fn id(self) -> &'static str {
        match self {
            OpKind::Min => "min",
            OpKind::Product => "product",
            OpKind::Lukasiewicz => "lukasiewicz",
            OpKind::Drastic => "drastic",
            OpKind::Max => "max",
            OpKind::ProbSum => "prob_sum",
            OpKind::BoundedSum => "bounded_sum",
        }
    }

    fn from_id(id: &str) -> Option<Self> {
        Some(match id {
            "min" => OpKind::Min,
            "product" => OpKind::Product,
            "lukasiewicz" => OpKind::Lukasiewicz,
            "drastic" => OpKind::Drastic,
            "max" => OpKind::Max,
            "prob_sum" => OpKind::ProbSum,
            "bounded_sum" => OpKind::BoundedSum,
            _ => return None,
        })
    }

    fn eval<S: Scalar>(self, x: &S, y: &S) -> S {
        let (one, zero) = (S::one(), S::zero());
        match self {
            OpKind::Min => x.clone().min(y.clone()),
            OpKind::Max => x.clone().max(y.clone()),
            OpKind::Product => x.clone() * y.clone(),
            OpKind::Lukasiewicz => (x.clone() + y.clone() - one).max(zero),
            OpKind::ProbSum => x.clone() + y.clone() - x.clone() * y.clone(),
            OpKind::BoundedSum => (x.clone() + y.clone()).min(one),
            OpKind::Drastic => {
                if x.is_one() {
                    y.clone()
                } else if y.is_one() {
                    x.clone()
                } else {
                    zero
                }
            }
        }
    }

    /// Lines `a·x + b·y = c` across which the formula changes.
    fn kinks(self) -> &'static [(i64, i64, i64)] {
        match self {
            OpKind::Min | OpKind::Max => &[(1, -1, 0)],
            OpKind::Lukasiewicz | OpKind::BoundedSum => &[(1, 1, 1)],
            OpKind::Product | OpKind::ProbSum | OpKind::Drastic => &[],
        }
    }
}

/// A finite operation table on a rational carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableOp<S> {
    carrier: Vec<S>,
    table: Vec<Vec<S>>,
}

impl<S: Scalar> TableOp<S> {
    fn index(&self, x: &S) -> Option<usize> {
        self.carrier.binary_search(x).ok()
    }

    pub fn carrier(&self) -> &[S] {
        &self.carrier
    }

    pub fn table(&self) -> &[Vec<S>] {
        &self.table
    }

    fn get(&self, x: &S, y: &S) -> Result<S, OpError> {
        let i = self.index(x).ok_or_else(|| OpError::NotInCarrier(x.to_string()))?;
        let j = self.index(y).ok_or_else(|| OpError::NotInCarrier(y.to_string()))?;
        Ok(self.table[i][j].clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluator<S> {
    Registry(OpKind),
    Table(TableOp<S>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpDescriptor<S> {
    pub id: String,
    pub neutral: S,
    pub commutative: bool,
    pub direction: Direction,
    pub evaluator: Evaluator<S>,
}

pub fn registry_get<S: Scalar>(id: &str) -> Result<OpDescriptor<S>, OpError> {
    let kind = OpKind::from_id(id).ok_or_else(|| OpError::UnknownId(id.to_string()))?;
    Ok(OpDescriptor::registry(kind))
}

pub fn registry_all<S: Scalar>() -> Vec<OpDescriptor<S>> {
    REGISTRY_IDS
        .iter()
        .map(|id| registry_get(id).expect("registry id"))
        .collect()
}

impl<S: Scalar> OpDescriptor<S> {
    pub fn registry(kind: OpKind) -> Self {
        let neutral = match kind {
            OpKind::Min | OpKind::Product | OpKind::Lukasiewicz | OpKind::Drastic => S::one(),
            OpKind::Max | OpKind::ProbSum | OpKind::BoundedSum => S::zero(),
        };
        OpDescriptor {
            id: kind.id().to_string(),
            neutral,
            commutative: true,
            direction: Direction::NonDecreasing,
            evaluator: Evaluator::Registry(kind),
        }
    }

    /// Build a table-defined operation, checking closure, neutrality,
    /// associativity and monotonicity over the whole carrier.
    pub fn from_table(
        id: impl Into<String>,
        carrier: Vec<S>,
        table: Vec<Vec<S>>,
        neutral: S,
    ) -> Result<Self, OpError> {
        let bad = |m: String| Err(OpError::InvalidTable(m));
        let n = carrier.len();
        if n == 0 {
            return bad("empty carrier".into());
        }
        if carrier.windows(2).any(|w| w[0] >= w[1]) {
            return bad("carrier must be strictly increasing".into());
        }
        if let Some(x) = carrier.iter().find(|x| !in_unit(*x)) {
            return bad(format!("carrier element {x} outside [0,1]"));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return bad(format!("table must be {n}×{n}"));
        }
        let op = TableOp { carrier, table };
        for row in &op.table {
            if let Some(v) = row.iter().find(|v| op.index(v).is_none()) {
                return bad(format!("table value {v} not in carrier"));
            }
        }
        if op.index(&neutral).is_none() {
            return bad(format!("neutral element {neutral} not in carrier"));
        }
        let c = &op.carrier;
        let at = |x: &S, y: &S| op.get(x, y).expect("closed table");
        for x in c {
            if at(x, &neutral) != *x || at(&neutral, x) != *x {
                return bad(format!("{neutral} is not neutral for {x}"));
            }
        }
        for x in c {
            for y in c {
                let xy = at(x, y);
                for z in c {
                    if at(&xy, z) != at(x, &at(y, z)) {
                        return bad(format!("not associative at ({x}, {y}, {z})"));
                    }
                }
            }
        }
        let (mut up, mut down) = (true, true);
        for i in 0..n {
            for j in 1..n {
                let (row, col) = (&op.table[i], |k: usize| &op.table[k][i]);
                up &= row[j - 1] <= row[j] && col(j - 1) <= col(j);
                down &= row[j - 1] >= row[j] && col(j - 1) >= col(j);
            }
        }
        let direction = match (up, down) {
            (true, _) => Direction::NonDecreasing,
            (false, true) => Direction::NonIncreasing,
            (false, false) => return bad("not monotone in a single direction".into()),
        };
        let commutative = (0..n).all(|i| (0..n).all(|j| op.table[i][j] == op.table[j][i]));
        Ok(OpDescriptor {
            id: id.into(),
            neutral,
            commutative,
            direction,
            evaluator: Evaluator::Table(op),
        })
    }

    pub fn kind(&self) -> Option<OpKind> {
        match &self.evaluator {
            Evaluator::Registry(k) => Some(*k),
            Evaluator::Table(_) => None,
        }
    }

    pub fn table(&self) -> Option<&TableOp<S>> {
        match &self.evaluator {
            Evaluator::Table(t) => Some(t),
            Evaluator::Registry(_) => None,
        }
    }

    /// T-norm: commutative, non-decreasing, neutral element 1.
    pub fn is_t_norm(&self) -> bool {
        self.commutative && self.direction == Direction::NonDecreasing && self.neutral.is_one()
    }

    /// T-conorm: commutative, non-decreasing, neutral element 0.
    pub fn is_t_conorm(&self) -> bool {
        self.commutative && self.direction == Direction::NonDecreasing && self.neutral.is_zero()
    }

    /// Whether `x` may be passed to [`OpDescriptor::apply`].
    pub fn accepts(&self, x: &S) -> bool {
        match &self.evaluator {
            Evaluator::Registry(_) => in_unit(x),
            Evaluator::Table(t) => t.index(x).is_some(),
        }
    }

    pub fn try_apply(&self, x: &S, y: &S) -> Result<S, OpError> {
        match &self.evaluator {
            Evaluator::Registry(k) => Ok(k.eval(x, y)),
            Evaluator::Table(t) => t.get(x, y),
        }
    }

    /// `T*(x, y)`.
    ///
    /// Panics for a table operation when an argument is outside the carrier;
    /// callers check [`OpDescriptor::accepts`] up front.
    pub fn apply(&self, x: &S, y: &S) -> S {
        self.try_apply(x, y).unwrap_or_else(|e| panic!("{}: {e}", self.id))
    }

    /// The one-variable map `x ↦ T*(x, c)` (`Side::Left`) or `x ↦ T*(c, x)`
    /// (`Side::Right`), as exact linear pieces.
    pub fn section(&self, c: &S, side: Side) -> Section<S> {
        let kind = match &self.evaluator {
            Evaluator::Table(t) => {
                let pieces = t
                    .carrier
                    .iter()
                    .map(|x| {
                        let v = match side {
                            Side::Left => t.get(x, c),
                            Side::Right => t.get(c, x),
                        };
                        let v = v.unwrap_or_else(|e| panic!("{}: {e}", self.id));
                        SectionPiece { dom: Interval::point(x.clone()), slope: S::zero(), intercept: v }
                    })
                    .collect();
                return Section { pieces };
            }
            Evaluator::Registry(k) => *k,
        };
        // registry operations are symmetric
        let (zero, one) = (S::zero(), S::one());
        let lin = |lo: S, hi: S, lo_c: bool, hi_c: bool, slope: S, intercept: S| {
            Interval::try_new(lo, hi, lo_c, hi_c).map(|dom| SectionPiece { dom, slope, intercept })
        };
        let c = c.clone();
        let pieces: Vec<Option<SectionPiece<S>>> = match kind {
            OpKind::Min => vec![
                lin(zero.clone(), c.clone(), true, false, one.clone(), zero.clone()),
                lin(c.clone(), one, true, true, zero, c),
            ],
            OpKind::Max => vec![
                lin(zero.clone(), c.clone(), true, false, zero.clone(), c.clone()),
                lin(c, one.clone(), true, true, one, zero),
            ],
            OpKind::Product => vec![lin(zero.clone(), one, true, true, c, zero)],
            OpKind::Lukasiewicz => {
                let knee = one.clone() - c.clone();
                vec![
                    lin(zero.clone(), knee.clone(), true, false, zero.clone(), zero),
                    lin(knee, one.clone(), true, true, one.clone(), c - one),
                ]
            }
            OpKind::ProbSum => vec![lin(zero, one.clone(), true, true, one - c.clone(), c)],
            OpKind::BoundedSum => {
                let knee = one.clone() - c.clone();
                vec![
                    lin(zero.clone(), knee.clone(), true, false, one.clone(), c),
                    lin(knee, one.clone(), true, true, zero, one),
                ]
            }
            OpKind::Drastic => {
                if c.is_one() {
                    vec![lin(zero.clone(), one.clone(), true, true, one, zero)]
                } else {
                    vec![
                        lin(zero.clone(), one.clone(), true, false, zero.clone(), zero.clone()),
                        lin(one.clone(), one, true, true, zero, c),
                    ]
                }
            }
        };
        Section { pieces: pieces.into_iter().flatten().collect() }
    }

    /// `T*(A, c)`.
    pub fn image_left(&self, a: &RangeSet<S>, c: &S) -> RangeSet<S> {
        self.section(c, Side::Left).image(a)
    }

    /// `T*(c, A)`.
    pub fn image_right(&self, c: &S, a: &RangeSet<S>) -> RangeSet<S> {
        self.section(c, Side::Right).image(a)
    }

    /// `T*(A, B) = {T*(x, y) | x ∈ A, y ∈ B}`.
    pub fn box_image(&self, a: &RangeSet<S>, b: &RangeSet<S>) -> Result<RangeSet<S>, OpError> {
        if a.is_empty() || b.is_empty() {
            return Err(OpError::EmptyInput);
        }
        let mut out = Vec::new();
        for i in a.components() {
            for j in b.components() {
                out.extend(self.interval_image(i, j)?);
            }
        }
        Ok(RangeSet::canonical(out))
    }

    /// Exact image of `I × J`.
    pub fn interval_image(&self, i: &Interval<S>, j: &Interval<S>) -> Result<Vec<Interval<S>>, OpError> {
        let kind = match &self.evaluator {
            Evaluator::Table(t) => {
                if !i.is_point() || !j.is_point() {
                    return Err(OpError::NotInCarrier(format!("{i} × {j}")));
                }
                return Ok(vec![Interval::point(t.get(&i.lo, &j.lo)?)]);
            }
            Evaluator::Registry(k) => *k,
        };
        if kind == OpKind::Drastic {
            return Ok(drastic_image(i, j));
        }
        let lo = kind.eval(&i.lo, &j.lo);
        let hi = kind.eval(&i.hi, &j.hi);
        if lo == hi {
            return Ok(vec![Interval::point(lo)]);
        }
        let flat = |x: &S, y: &S, dx: i64, dy: i64| flat_toward(kind, x, y, dx, dy);
        let (ip, jp) = (i.is_point(), j.is_point());
        let lo_closed = (i.lo_closed && j.lo_closed)
            || (i.lo_closed && !jp && flat(&i.lo, &j.lo, 0, 1))
            || (j.lo_closed && !ip && flat(&i.lo, &j.lo, 1, 0))
            || (!ip && !jp && flat(&i.lo, &j.lo, 1, 1));
        let hi_closed = (i.hi_closed && j.hi_closed)
            || (i.hi_closed && !jp && flat(&i.hi, &j.hi, 0, -1))
            || (j.hi_closed && !ip && flat(&i.hi, &j.hi, -1, 0))
            || (!ip && !jp && flat(&i.hi, &j.hi, -1, -1));
        Ok(vec![Interval::new(lo, hi, lo_closed, hi_closed).expect("continuous image")])
    }
}

fn drastic_image<S: Scalar>(i: &Interval<S>, j: &Interval<S>) -> Vec<Interval<S>> {
    let one = S::one();
    let mut out = Vec::new();
    if i.contains(&one) {
        out.push(j.clone());
    }
    if j.contains(&one) {
        out.push(i.clone());
    }
    let below_one = |iv: &Interval<S>| !(iv.is_point() && iv.lo.is_one());
    if below_one(i) && below_one(j) {
        out.push(Interval::point(S::zero()));
    }
    out
}

/// Whether the operation is constant on a short segment leaving `(x, y)` in
/// direction `(dx, dy)`.
///
/// The probe step stays short of every formula change and of the square's
/// boundary, so the operation is one polynomial along the probed segment and,
/// being monotone along it, is constant there iff the endpoint values agree.
fn flat_toward<S: Scalar>(kind: OpKind, x: &S, y: &S, dx: i64, dy: i64) -> bool {
    let mut reach: Vec<S> = Vec::new();
    let cap = |v: &S, d: i64| match d {
        1 => Some(S::one() - v.clone()),
        -1 => Some(v.clone()),
        _ => None,
    };
    reach.extend(cap(x, dx));
    reach.extend(cap(y, dy));
    for &(a, b, c) in kind.kinks() {
        let gap = S::from_int(a) * x.clone() + S::from_int(b) * y.clone() - S::from_int(c);
        let rate = S::from_int(a * dx + b * dy);
        if !rate.is_zero() {
            let t = -gap / rate;
            if t.is_positive() {
                reach.push(t);
            }
        }
    }
    let Some(step) = reach.into_iter().min() else {
        return true;
    };
    if !step.is_positive() {
        return false;
    }
    let eps = step * S::half();
    let px = x.clone() + eps.clone() * S::from_int(dx);
    let py = y.clone() + eps * S::from_int(dy);
    kind.eval(&px, &py) == kind.eval(x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The free variable is the first argument.
    Left,
    /// The free variable is the second argument.
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionPiece<S> {
    pub dom: Interval<S>,
    pub slope: S,
    pub intercept: S,
}

impl<S: Scalar> SectionPiece<S> {
    fn map(&self, x: &S) -> S {
        self.slope.clone() * x.clone() + self.intercept.clone()
    }

    fn image_of(&self, iv: &Interval<S>) -> Interval<S> {
        if self.slope.is_zero() {
            return Interval::point(self.intercept.clone());
        }
        let (a, b) = (self.map(&iv.lo), self.map(&iv.hi));
        if self.slope.is_positive() {
            Interval { lo: a, hi: b, lo_closed: iv.lo_closed, hi_closed: iv.hi_closed }
        } else {
            Interval { lo: b, hi: a, lo_closed: iv.hi_closed, hi_closed: iv.lo_closed }
        }
    }

    fn preimage_of(&self, target: &Interval<S>) -> Option<Interval<S>> {
        if self.slope.is_zero() {
            return target.contains(&self.intercept).then(|| self.dom.clone());
        }
        let inv = |v: &S| (v.clone() - self.intercept.clone()) / self.slope.clone();
        let (a, b) = (inv(&target.lo), inv(&target.hi));
        let raw = if self.slope.is_positive() {
            Interval { lo: a, hi: b, lo_closed: target.lo_closed, hi_closed: target.hi_closed }
        } else {
            Interval { lo: b, hi: a, lo_closed: target.hi_closed, hi_closed: target.lo_closed }
        };
        raw.intersect(&self.dom)
    }
}

/// A one-variable restriction of a base operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section<S> {
    pub pieces: Vec<SectionPiece<S>>,
}

impl<S: Scalar> Section<S> {
    pub fn eval(&self, x: &S) -> Option<S> {
        self.pieces.iter().find(|p| p.dom.contains(x)).map(|p| p.map(x))
    }

    pub fn image(&self, set: &RangeSet<S>) -> RangeSet<S> {
        let mut out = Vec::new();
        for p in &self.pieces {
            for c in set.components() {
                if let Some(part) = c.intersect(&p.dom) {
                    out.push(p.image_of(&part));
                }
            }
        }
        RangeSet::canonical(out)
    }

    pub fn preimage(&self, target: &RangeSet<S>) -> RangeSet<S> {
        let mut out = Vec::new();
        for p in &self.pieces {
            for t in target.components() {
                out.extend(p.preimage_of(t));
            }
        }
        RangeSet::canonical(out)
    }
}

impl<S: Scalar> fmt::Display for OpDescriptor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (e = {})", self.id, self.neutral)
    }
}
