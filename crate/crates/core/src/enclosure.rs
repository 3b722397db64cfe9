//! Certification for ranges with interval components.
//!
//! The unions over `y ∈ M` and `t ∈ M_y` are uncountable here, so each round
//! bisects the interval components of `M` into boxes and over-approximates
//! every union term by one interval per box combination. Monotonicity of `T*`
//! makes the endpoint enclosures valid. If no enclosure meets the target the
//! operation is associative; otherwise a violating triple is searched for
//! among exact sample points of the boxes involved, and the boxes are refined.

use crate::base_op::OpDescriptor;
use crate::certifier::{violation, CertError, CertifyOptions, Ctx, Evidence, GapRef, Mode, Part, Verdict};
use crate::exact::{Interval, RangeSet};
use crate::scalar::Scalar;
use crate::structure::Decomposition;

/// Triple checks allowed per round.
const SEARCH_BUDGET: usize = 20_000;
/// Sample points kept per coordinate of a suspect.
const SAMPLES_PER_AXIS: usize = 12;

pub(crate) fn certify_intervals<S: Scalar>(
    dec: &Decomposition<S>,
    op: &OpDescriptor<S>,
    options: &CertifyOptions,
) -> Result<Verdict<S>, CertError> {
    let ctx = Ctx::new(dec, op, Mode::of(dec));
    let skip_t2 = options.commutative_reduction && op.commutative;
    let mut depth = 0;
    loop {
        let boxes = dec.m.bisect(depth);
        let round = Round::new(&ctx, boxes)?;
        let (suspects, checked) = round.suspects(skip_t2);
        if suspects.is_empty() {
            return Ok(Verdict::CertifiedAssociative {
                evidence: Evidence::Enclosure { depth, enclosures: checked },
            });
        }
        if let Some(v) = round.search(&suspects) {
            return Ok(v);
        }
        let next = dec.m.bisect(depth + 1).len();
        if depth >= options.max_depth || next > options.max_boxes {
            return Ok(Verdict::Unknown {
                reason: format!(
                    "{} enclosures still meet M and no violating triple was found among sample points",
                    suspects.len()
                ),
                depth,
            });
        }
        depth += 1;
    }
}

/// An enclosure that meets the target.
struct Suspect {
    part: Part,
    y: usize,
    k: GapRef,
    l: Option<GapRef>,
    t: Option<usize>,
}

struct Round<'c, 'a, S> {
    ctx: &'c Ctx<'a, S>,
    boxes: Vec<RangeSet<S>>,
    /// `img[i][j] = T*(B_i, B_j)`.
    img: Vec<Vec<RangeSet<S>>>,
    refs: Vec<GapRef>,
    zones: Vec<RangeSet<S>>,
}

impl<'c, 'a, S: Scalar> Round<'c, 'a, S> {
    fn new(ctx: &'c Ctx<'a, S>, boxes: Vec<Interval<S>>) -> Result<Self, CertError> {
        let boxes: Vec<RangeSet<S>> = boxes.into_iter().map(RangeSet::interval).collect();
        let mut img = Vec::with_capacity(boxes.len());
        for a in &boxes {
            let row = boxes
                .iter()
                .map(|b| ctx.op.box_image(a, b))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CertError::Structure(e.into()))?;
            img.push(row);
        }
        let refs = ctx.gap_refs();
        let zones = refs.iter().map(|&k| ctx.zone(k)).collect::<Result<_, _>>()?;
        Ok(Round { ctx, boxes, img, refs, zones })
    }

    fn image(&self, a: &RangeSet<S>, b: &RangeSet<S>) -> RangeSet<S> {
        self.ctx.op.box_image(a, b).expect("nonempty boxes")
    }

    /// Boxes `X` with `T*(X, Y)` (left) or `T*(Y, X)` (right) meeting the zone,
    /// and the part of those images inside the zone.
    fn gap_args(&self, y: usize, zone: &RangeSet<S>, left: bool) -> (Vec<usize>, RangeSet<S>) {
        let mut idx = Vec::new();
        let mut values = RangeSet::empty();
        for x in 0..self.boxes.len() {
            let im = if left { &self.img[x][y] } else { &self.img[y][x] };
            let part = im.intersection(zone);
            if !part.is_empty() {
                idx.push(x);
                values = values.union(&part);
            }
        }
        (idx, values)
    }

    /// Boxes `T` with `T*(Y, T)` (right, `M_y`) or `T*(T, Y)` (left, `M^y`)
    /// meeting the target.
    fn stable(&self, y: usize, left: bool) -> Vec<usize> {
        (0..self.boxes.len())
            .filter(|&t| {
                let im = if left { &self.img[t][y] } else { &self.img[y][t] };
                im.intersects(&self.ctx.target)
            })
            .collect()
    }

    fn union_of(&self, idx: &[usize]) -> RangeSet<S> {
        RangeSet::union_all(idx.iter().map(|&i| &self.boxes[i]))
    }

    fn meets(&self, lo: S, hi: S) -> bool {
        Interval::try_new(lo, hi, true, false)
            .is_some_and(|iv| self.ctx.target.intersects(&RangeSet::interval(iv)))
    }

    /// Every enclosure meeting the target, and how many enclosures were formed.
    fn suspects(&self, skip_t2: bool) -> (Vec<Suspect>, usize) {
        let op = self.ctx.op;
        let mut out = Vec::new();
        let mut formed = 0;
        for y in 0..self.boxes.len() {
            let m_y = self.stable(y, false);
            let m_up_y = self.stable(y, true);
            let mut left_args = Vec::with_capacity(self.refs.len());
            let mut right_args = Vec::with_capacity(self.refs.len());
            for (ki, &k) in self.refs.iter().enumerate() {
                let d = self.ctx.d(k);
                let (lx, lv) = self.gap_args(y, &self.zones[ki], true);
                let (rx, rv) = self.gap_args(y, &self.zones[ki], false);
                if let Some(lo) = lv.inf() {
                    let i_lo = lo.clone().min(d.clone());
                    for &t in &m_y {
                        let tb = &self.boxes[t];
                        formed += 1;
                        let a = op.apply(&i_lo, tb.inf().expect("box"));
                        let b = op.apply(&d, tb.sup().expect("box"));
                        if self.meets(a, b) {
                            out.push(Suspect { part: Part::T1, y, k, l: None, t: Some(t) });
                        }
                    }
                }
                if !skip_t2 {
                    if let Some(lo) = rv.inf() {
                        let i_lo = lo.clone().min(d.clone());
                        for &t in &m_up_y {
                            let tb = &self.boxes[t];
                            formed += 1;
                            let a = op.apply(tb.inf().expect("box"), &i_lo);
                            let b = op.apply(tb.sup().expect("box"), &d);
                            if self.meets(a, b) {
                                out.push(Suspect { part: Part::T2, y, k, l: None, t: Some(t) });
                            }
                        }
                    }
                }
                left_args.push(lx);
                right_args.push(rx);
            }
            for (ki, &k) in self.refs.iter().enumerate() {
                if left_args[ki].is_empty() {
                    continue;
                }
                let a_set = self.union_of(&left_args[ki]);
                for (li, &l) in self.refs.iter().enumerate() {
                    if right_args[li].is_empty() {
                        continue;
                    }
                    formed += 1;
                    let b_set = self.union_of(&right_args[li]);
                    let u = self
                        .image(&a_set, &RangeSet::point(self.ctx.d(l)))
                        .union(&self.image(&RangeSet::point(self.ctx.d(k)), &b_set));
                    let (lo, hi) = (u.inf().expect("nonempty").clone(), u.sup().expect("nonempty").clone());
                    if self.meets(lo, hi) {
                        out.push(Suspect { part: Part::T3, y, k, l: Some(l), t: None });
                    }
                }
            }
        }
        (out, formed)
    }

    fn samples(&self, idx: &[usize]) -> Vec<S> {
        let mut pts: Vec<S> = idx.iter().flat_map(|&i| self.boxes[i].sample_points()).collect();
        pts.sort();
        pts.dedup();
        thin(pts, SAMPLES_PER_AXIS)
    }

    fn search(&self, suspects: &[Suspect]) -> Option<Verdict<S>> {
        let mut budget = SEARCH_BUDGET;
        for s in suspects {
            let zone_of = |k: GapRef| &self.zones[self.refs.iter().position(|&r| r == k).expect("ref")];
            let ys = self.samples(&[s.y]);
            let (xs, zs) = match s.part {
                Part::T1 => (self.gap_args(s.y, zone_of(s.k), true).0, vec![s.t?]),
                Part::T2 => (vec![s.t?], self.gap_args(s.y, zone_of(s.k), false).0),
                Part::T3 => (
                    self.gap_args(s.y, zone_of(s.k), true).0,
                    self.gap_args(s.y, zone_of(s.l?), false).0,
                ),
            };
            let (xs, zs) = (self.samples(&xs), self.samples(&zs));
            for x in &xs {
                for y in &ys {
                    for z in &zs {
                        if budget == 0 {
                            return None;
                        }
                        budget -= 1;
                        if let Some(v) = violation(self.ctx.dec, self.ctx.op, x, y, z) {
                            return Some(v);
                        }
                    }
                }
            }
        }
        None
    }
}

/// Keep at most `n` roughly evenly spaced entries, always including both ends.
fn thin<T: Clone>(v: Vec<T>, n: usize) -> Vec<T> {
    if v.len() <= n || n < 2 {
        return v;
    }
    let last = v.len() - 1;
    (0..n).map(|i| v[i * last / (n - 1)].clone()).collect()
}
