//! Obstruction sets and the associativity decision for `⊗`.
//!
//! With `f(1) = 1` (unit mode) `⊗` is associative iff `𝔗(M) ∩ M = ∅`; with
//! `f(1) < 1` (subunit mode) iff `I(M) ∩ (M \ {f(1)}) = ∅`, where the index
//! set gains the virtual gap `τ`. Finite `M` is decided exactly here; ranges
//! with interval components go through [`crate::enclosure`].

use std::fmt;

use thiserror::Error;

use crate::base_op::{OpDescriptor, Section, Side};
use crate::enclosure;
use crate::exact::{Interval, RangeSet};
use crate::generator::{Direction, PiecewiseFn};
use crate::scalar::Scalar;
use crate::structure::{decompose, Decomposition, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("the virtual gap τ only exists when f(1) < 1")]
    TauInUnitMode,
    #[error("no gap with index {0}")]
    NoSuchGap(usize),
    #[error("{0} is not in the range M")]
    NotInRange(String),
    #[error("the exact obstruction sets need a finite range M")]
    NotFinite,
    #[error("M is not contained in the carrier of table operation `{0}`")]
    OutsideCarrier(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
}

/// An index into the gap system, or the virtual gap `τ` with `d_τ = f(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GapRef {
    Real(usize),
    Tau,
}

impl fmt::Display for GapRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapRef::Real(k) => write!(f, "{k}"),
            GapRef::Tau => f.write_str("tau"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `f(1) = 1`.
    Unit,
    /// `f(1) < 1`.
    Subunit,
}

impl Mode {
    pub fn of<S: Scalar>(dec: &Decomposition<S>) -> Self {
        if dec.f_of_1.is_one() {
            Mode::Unit
        } else {
            Mode::Subunit
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    T1,
    T2,
    T3,
}

/// A point of the target set found inside an obstruction set, with the
/// indices of the union term that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hit<S> {
    pub value: S,
    pub part: Part,
    pub y: S,
    pub k: GapRef,
    pub l: Option<GapRef>,
    pub t: Option<S>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport<S> {
    pub t1: RangeSet<S>,
    pub t2: RangeSet<S>,
    pub t3: RangeSet<S>,
    pub mode: Mode,
    pub direction: Direction,
    /// `t2` was not computed because the operation is commutative.
    pub t2_skipped: bool,
    pub hits: Vec<Hit<S>>,
}

impl<S: Scalar> ObstructionReport<S> {
    pub fn union(&self) -> RangeSet<S> {
        self.t1.union(&self.t2).union(&self.t3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence<S> {
    /// Exact obstruction sets of a finite range.
    Exact(ObstructionReport<S>),
    /// Every enclosure at this bisection depth misses the target.
    Enclosure { depth: u32, enclosures: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<S> {
    CertifiedAssociative { evidence: Evidence<S> },
    CertifiedNonAssociative { witness: (S, S, S), lhs: S, rhs: S },
    Unknown { reason: String, depth: u32 },
}

impl<S> Verdict<S> {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::CertifiedAssociative { .. } => "certified-associative",
            Verdict::CertifiedNonAssociative { .. } => "certified-non-associative",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_associative(&self) -> Option<bool> {
        match self {
            Verdict::CertifiedAssociative { .. } => Some(true),
            Verdict::CertifiedNonAssociative { .. } => Some(false),
            Verdict::Unknown { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Deepest bisection level tried on interval components.
    pub max_depth: u32,
    /// Stop refining once a round would use more boxes than this.
    pub max_boxes: usize,
    /// Skip `𝔗₂` for commutative operations.
    pub commutative_reduction: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { max_depth: 12, max_boxes: 192, commutative_reduction: false }
    }
}

/// Shared view of `(M, T*, mode)`.
pub(crate) struct Ctx<'a, S> {
    pub dec: &'a Decomposition<S>,
    pub op: &'a OpDescriptor<S>,
    pub mode: Mode,
    pub target: RangeSet<S>,
}

impl<'a, S: Scalar> Ctx<'a, S> {
    pub fn new(dec: &'a Decomposition<S>, op: &'a OpDescriptor<S>, mode: Mode) -> Self {
        let target = match mode {
            Mode::Unit => dec.m.clone(),
            Mode::Subunit => dec.m.without_point(&dec.f_of_1),
        };
        Ctx { dec, op, mode, target }
    }

    pub fn gap_refs(&self) -> Vec<GapRef> {
        let mut out: Vec<GapRef> = self.dec.proper_gaps().map(|(k, _)| GapRef::Real(k)).collect();
        if self.mode == Mode::Subunit {
            out.push(GapRef::Tau);
        }
        out
    }

    /// Values sent to `d_k` by `G_M`; for `τ`, everything from `f(1)` up.
    pub fn zone(&self, k: GapRef) -> Result<RangeSet<S>, CertError> {
        match k {
            GapRef::Real(i) => Ok(self.dec.gaps.get(i).ok_or(CertError::NoSuchGap(i))?.zone()),
            GapRef::Tau if self.mode == Mode::Unit => Err(CertError::TauInUnitMode),
            GapRef::Tau => Ok(RangeSet::interval(Interval::closed(self.dec.f_of_1.clone(), S::one()))),
        }
    }

    pub fn d(&self, k: GapRef) -> S {
        match k {
            GapRef::Real(i) => self.dec.gaps[i].d.clone(),
            GapRef::Tau => self.dec.f_of_1.clone(),
        }
    }

    pub fn section(&self, c: &S, side: Side) -> Section<S> {
        self.op.section(c, side)
    }

    fn require_member(&self, y: &S) -> Result<(), CertError> {
        if self.dec.m.member(y) {
            Ok(())
        } else {
            Err(CertError::NotInRange(y.to_string()))
        }
    }

    fn gap_arg(&self, y: &S, k: GapRef, side: Side) -> Result<RangeSet<S>, CertError> {
        let zone = self.zone(k)?;
        Ok(self.section(y, side).preimage(&zone).intersection(&self.dec.m))
    }

    fn i_set(&self, y: &S, k: GapRef, side: Side) -> Result<RangeSet<S>, CertError> {
        let args = self.gap_arg(y, k, side)?;
        Ok(self.section(y, side).image(&args).union(&RangeSet::point(self.d(k))))
    }

    fn j_set(&self, y: &S, k: GapRef, l: GapRef) -> Result<RangeSet<S>, CertError> {
        let left = self.gap_arg(y, k, Side::Left)?;
        let right = self.gap_arg(y, l, Side::Right)?;
        if left.is_empty() || right.is_empty() {
            return Ok(RangeSet::empty());
        }
        let a = self.section(&self.d(l), Side::Left).image(&left);
        let b = self.section(&self.d(k), Side::Right).image(&right);
        Ok(a.union(&b).o_span())
    }
}

/// `M_k^y` (`Side::Left`, `T*(x,y)` in the zone of `k`) or `M_y^k`
/// (`Side::Right`, `T*(y,x)`).
pub fn gap_arg_set<S: Scalar>(
    dec: &Decomposition<S>,
    op: &OpDescriptor<S>,
    y: &S,
    k: GapRef,
    side: Side,
) -> Result<RangeSet<S>, CertError> {
    let ctx = Ctx::new(dec, op, Mode::of(dec));
    ctx.require_member(y)?;
    ctx.gap_arg(y, k, side)
}

/// `I_k^y = {d_k} ∪ T*(M_k^y, y)` or `I_y^k = {d_k} ∪ T*(y, M_y^k)`.
pub fn i_set<S: Scalar>(
    dec: &Decomposition<S>,
    op: &OpDescriptor<S>,
    y: &S,
    k: GapRef,
    side: Side,
) -> Result<RangeSet<S>, CertError> {
    let ctx = Ctx::new(dec, op, Mode::of(dec));
    ctx.require_member(y)?;
    ctx.i_set(y, k, side)
}

/// `J_{k,l}^y = O(T*(M_k^y, d_l) ∪ T*(d_k, M_y^l))`, empty unless both
/// argument sets are nonempty.
pub fn j_set<S: Scalar>(
    dec: &Decomposition<S>,
    op: &OpDescriptor<S>,
    y: &S,
    k: GapRef,
    l: GapRef,
) -> Result<RangeSet<S>, CertError> {
    let ctx = Ctx::new(dec, op, Mode::of(dec));
    ctx.require_member(y)?;
    ctx.j_set(y, k, l)
}

/// The obstruction sets of a finite `M` in the mode fixed by `f(1)`.
pub fn obstruction<S: Scalar>(
    dec: &Decomposition<S>,
    op: &OpDescriptor<S>,
    commutative_reduction: bool,
) -> Result<ObstructionReport<S>, CertError> {
    obstruction_in_mode(dec, op, Mode::of(dec), commutative_reduction)
}

/// As [`obstruction`], with the mode chosen by the caller.
pub fn obstruction_in_mode<S: Scalar>(
    dec: &Decomposition<S>,
    op: &OpDescriptor<S>,
    mode: Mode,
    commutative_reduction: bool,
) -> Result<ObstructionReport<S>, CertError> {
    let points = dec.m.points().ok_or(CertError::NotFinite)?;
    require_carrier(dec, op)?;
    let ctx = Ctx::new(dec, op, mode);
    let refs = ctx.gap_refs();
    let skip_t2 = commutative_reduction && op.commutative;
    let mut report = ObstructionReport {
        t1: RangeSet::empty(),
        t2: RangeSet::empty(),
        t3: RangeSet::empty(),
        mode,
        direction: op.direction,
        t2_skipped: skip_t2,
        hits: Vec::new(),
    };
    let n = points.len();
    let target: Vec<S> = ctx.target.points().expect("finite target");
    let index = |v: &S| points.binary_search(v).expect("gap ends lie in M");
    // tbl[i][j] = T*(p_i, p_j)
    let tbl: Vec<Vec<S>> = points.iter().map(|x| points.iter().map(|y| op.apply(x, y)).collect()).collect();
    let in_target = |v: &S| target.binary_search(v).is_ok();
    let zones: Vec<RangeSet<S>> = refs.iter().map(|&k| ctx.zone(k)).collect::<Result<_, _>>()?;
    let d_idx: Vec<usize> = refs.iter().map(|&k| index(&ctx.d(k))).collect();
    let mut spans: [Vec<Interval<S>>; 3] = Default::default();
    let mut record = |part: Part, vals: &mut dyn Iterator<Item = S>, hit: &dyn Fn() -> Hit<S>| {
        let Some(span) = o_span_of(vals) else { return };
        let from = target.partition_point(|v| *v < span.lo);
        let to = target.partition_point(|v| *v < span.hi);
        for v in &target[from..to] {
            report.hits.push(Hit { value: v.clone(), ..hit() });
        }
        spans[part as usize].push(span);
    };

    for yi in 0..n {
        let y = &points[yi];
        let m_y: Vec<usize> = (0..n).filter(|&j| in_target(&tbl[yi][j])).collect();
        let m_up_y: Vec<usize> = (0..n).filter(|&i| in_target(&tbl[i][yi])).collect();
        let left_args: Vec<Vec<usize>> =
            zones.iter().map(|z| (0..n).filter(|&i| z.member(&tbl[i][yi])).collect()).collect();
        let right_args: Vec<Vec<usize>> =
            zones.iter().map(|z| (0..n).filter(|&j| z.member(&tbl[yi][j])).collect()).collect();
        for (ki, &k) in refs.iter().enumerate() {
            let d = &points[d_idx[ki]];
            if !left_args[ki].is_empty() {
                let i_left: Vec<&S> = std::iter::once(d).chain(left_args[ki].iter().map(|&i| &tbl[i][yi])).collect();
                for &t in &m_y {
                    let tv = &points[t];
                    let hit = || Hit { value: S::zero(), part: Part::T1, y: y.clone(), k, l: None, t: Some(tv.clone()) };
                    record(Part::T1, &mut i_left.iter().map(|v| op.apply(v, tv)), &hit);
                }
            }
            if !skip_t2 && !right_args[ki].is_empty() {
                let i_right: Vec<&S> = std::iter::once(d).chain(right_args[ki].iter().map(|&j| &tbl[yi][j])).collect();
                for &t in &m_up_y {
                    let tv = &points[t];
                    let hit = || Hit { value: S::zero(), part: Part::T2, y: y.clone(), k, l: None, t: Some(tv.clone()) };
                    record(Part::T2, &mut i_right.iter().map(|v| op.apply(tv, v)), &hit);
                }
            }
        }
        for (ki, &k) in refs.iter().enumerate() {
            if left_args[ki].is_empty() {
                continue;
            }
            for (li, &l) in refs.iter().enumerate() {
                if right_args[li].is_empty() {
                    continue;
                }
                let a = left_args[ki].iter().map(|&x| tbl[x][d_idx[li]].clone());
                let b = right_args[li].iter().map(|&z| tbl[d_idx[ki]][z].clone());
                let hit = || Hit { value: S::zero(), part: Part::T3, y: y.clone(), k, l: Some(l), t: None };
                record(Part::T3, &mut a.chain(b), &hit);
            }
        }
    }
    let [t1, t2, t3] = spans;
    report.t1 = RangeSet::canonical(t1);
    report.t2 = RangeSet::canonical(t2);
    report.t3 = RangeSet::canonical(t3);
    report.hits.sort_by(|a, b| (a.part, &a.value, &a.y).cmp(&(b.part, &b.value, &b.y)));
    Ok(report)
}

/// `O(A) = [min A, max A)` for a finite `A`, empty when `A` has one element.
fn o_span_of<S: Scalar>(vals: &mut dyn Iterator<Item = S>) -> Option<Interval<S>> {
    let first = vals.next()?;
    let (lo, hi) = vals.fold((first.clone(), first), |(lo, hi), v| {
        if v < lo {
            (v, hi)
        } else if v > hi {
            (lo, v)
        } else {
            (lo, hi)
        }
    });
    Interval::try_new(lo, hi, true, false)
}

fn require_carrier<S: Scalar>(dec: &Decomposition<S>, op: &OpDescriptor<S>) -> Result<(), CertError> {
    if op.table().is_none() {
        return Ok(());
    }
    match dec.m.points() {
        Some(pts) if pts.iter().all(|x| op.accepts(x)) => Ok(()),
        _ => Err(CertError::OutsideCarrier(op.id.clone())),
    }
}

/// `((x⊗y)⊗z, x⊗(y⊗z))`.
pub fn both_sides<S: Scalar>(dec: &Decomposition<S>, op: &OpDescriptor<S>, x: &S, y: &S, z: &S) -> (S, S) {
    let lhs = dec.otimes_unchecked(op, &dec.otimes_unchecked(op, x, y), z);
    let rhs = dec.otimes_unchecked(op, x, &dec.otimes_unchecked(op, y, z));
    (lhs, rhs)
}

pub(crate) fn violation<S: Scalar>(
    dec: &Decomposition<S>,
    op: &OpDescriptor<S>,
    x: &S,
    y: &S,
    z: &S,
) -> Option<Verdict<S>> {
    let (lhs, rhs) = both_sides(dec, op, x, y, z);
    (lhs != rhs).then(|| Verdict::CertifiedNonAssociative {
        witness: (x.clone(), y.clone(), z.clone()),
        lhs,
        rhs,
    })
}

/// Whether `[min(a,b), max(a,b))` meets `target`.
pub(crate) fn span_hits<S: Scalar>(a: &S, b: &S, target: &RangeSet<S>) -> bool {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Interval::try_new(lo.clone(), hi.clone(), true, false)
        .is_some_and(|iv| target.intersects(&RangeSet::interval(iv)))
}

/// Rebuild a violating triple from the indices of a hit, following the
/// converse direction of the characterization.
fn reconstruct<S: Scalar>(ctx: &Ctx<'_, S>, hit: &Hit<S>) -> Option<Verdict<S>> {
    let (dec, op) = (ctx.dec, ctx.op);
    let pts = |set: Result<RangeSet<S>, CertError>| set.ok().and_then(|s| s.points()).unwrap_or_default();
    let y = &hit.y;
    let d_k = ctx.d(hit.k);
    match hit.part {
        Part::T1 => {
            let z = hit.t.as_ref()?;
            for x in pts(ctx.gap_arg(y, hit.k, Side::Left)) {
                let a = op.apply(&d_k, z);
                let b = op.apply(&op.apply(&x, y), z);
                if span_hits(&a, &b, &ctx.target) {
                    if let Some(v) = violation(dec, op, &x, y, z) {
                        return Some(v);
                    }
                }
            }
        }
        Part::T2 => {
            let x = hit.t.as_ref()?;
            for z in pts(ctx.gap_arg(y, hit.k, Side::Right)) {
                let a = op.apply(x, &d_k);
                let b = op.apply(x, &op.apply(y, &z));
                if span_hits(&a, &b, &ctx.target) {
                    if let Some(v) = violation(dec, op, x, y, &z) {
                        return Some(v);
                    }
                }
            }
        }
        Part::T3 => {
            let l = hit.l?;
            let d_l = ctx.d(l);
            let zs = pts(ctx.gap_arg(y, l, Side::Right));
            for x in pts(ctx.gap_arg(y, hit.k, Side::Left)) {
                for z in &zs {
                    let a = op.apply(&d_k, z);
                    let b = op.apply(&x, &d_l);
                    if span_hits(&a, &b, &ctx.target) {
                        if let Some(v) = violation(dec, op, &x, y, z) {
                            return Some(v);
                        }
                    }
                }
            }
        }
    }
    None
}

fn exhaustive<S: Scalar>(dec: &Decomposition<S>, op: &OpDescriptor<S>, points: &[S]) -> Option<Verdict<S>> {
    for x in points {
        for y in points {
            for z in points {
                if let Some(v) = violation(dec, op, x, y, z) {
                    return Some(v);
                }
            }
        }
    }
    None
}

/// Decide associativity of `⊗` on `M = Ran(f)`.
pub fn certify<S: Scalar>(
    f: &PiecewiseFn<S>,
    op: &OpDescriptor<S>,
    options: &CertifyOptions,
) -> Result<Verdict<S>, CertError> {
    let dec = decompose(f)?;
    certify_decomposition(&dec, op, options)
}

pub fn certify_decomposition<S: Scalar>(
    dec: &Decomposition<S>,
    op: &OpDescriptor<S>,
    options: &CertifyOptions,
) -> Result<Verdict<S>, CertError> {
    require_carrier(dec, op)?;
    if !dec.m.is_finite() {
        return enclosure::certify_intervals(dec, op, options);
    }
    let report = obstruction(dec, op, options.commutative_reduction)?;
    if report.hits.is_empty() {
        return Ok(Verdict::CertifiedAssociative { evidence: Evidence::Exact(report) });
    }
    let ctx = Ctx::new(dec, op, report.mode);
    if let Some(v) = report.hits.iter().find_map(|h| reconstruct(&ctx, h)) {
        return Ok(v);
    }
    let points = dec.m.points().expect("finite");
    if let Some(v) = exhaustive(dec, op, &points) {
        return Ok(v);
    }
    Ok(Verdict::Unknown {
        reason: format!(
            "obstruction set meets the target at {} but no violating triple exists",
            report.hits[0].value
        ),
        depth: 0,
    })
}

/// For an associative `⊗` under a t-norm whose image of `M × M` stays in
/// `M ∪ [0, f(0)]`, check that the unit-mode `𝔗(M)` lies in `[0, f(0)]`.
pub fn f0_bound_check<S: Scalar>(
    dec: &Decomposition<S>,
    op: &OpDescriptor<S>,
    verdict: &Verdict<S>,
) -> Result<bool, CertError> {
    if verdict.is_associative() != Some(true) {
        return Err(CertError::Precondition("verdict is not certified associative".into()));
    }
    if !op.is_t_norm() {
        return Err(CertError::Precondition(format!("{} is not a t-norm", op.id)));
    }
    let low = RangeSet::interval(Interval::closed(S::zero(), dec.f_of_0.clone()));
    let image = op.box_image(&dec.m, &dec.m).map_err(StructureError::from)?;
    if !image.is_subset_of(&dec.m.union(&low)) {
        return Err(CertError::Precondition("T*(M, M) is not inside M ∪ [0, f(0)]".into()));
    }
    let report = obstruction_in_mode(dec, op, Mode::Unit, false)?;
    Ok(report.union().is_subset_of(&low))
}
