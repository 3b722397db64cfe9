//! The gap system `(S, C)` of a range `M`, the rounding map `G_M`, the
//! induced operation `⊗` and the transported operation `T₀`.

use thiserror::Error;

use crate::base_op::{OpDescriptor, OpError};
use crate::exact::{Interval, RangeSet};
use crate::generator::{GeneratorError, PiecewiseFn, RestrictedGenerator};
use crate::scalar::{in_unit, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error("{0} is not in the range M")]
    NotInRange(String),
    #[error("{0} is not in the restricted domain D")]
    NotInDomain(String),
    #[error("{0} is outside [0,1]")]
    OutsideUnit(String),
    #[error("only finite sets can be decomposed without a generator")]
    NotFinite,
}

/// One interval `[b, d]` of the system `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gap<S> {
    pub b: S,
    pub d: S,
    pub b_in_m: bool,
}

impl<S: Scalar> Gap<S> {
    /// Values that `G_M` rounds up to `d`: `(b, d)` when `b ∈ M`, else `[b, d)`.
    pub fn zone(&self) -> RangeSet<S> {
        Interval::try_new(self.b.clone(), self.d.clone(), !self.b_in_m, false)
            .map(RangeSet::interval)
            .unwrap_or_default()
    }

    pub fn zone_contains(&self, v: &S) -> bool {
        (self.b < *v || (self.b == *v && !self.b_in_m)) && *v < self.d
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<S> {
    /// The range `M` itself.
    pub m: RangeSet<S>,
    pub gaps: Vec<Gap<S>>,
    pub points_c: Vec<S>,
    pub e: Vec<S>,
    pub f: Vec<S>,
    pub f_of_0: S,
    pub f_of_1: S,
    /// Whether `gaps[0]` is the synthetic `[0, f(0)]`.
    pub leading_gap: bool,
}

/// Decompose `M = Ran(f)`.
pub fn decompose<S: Scalar>(f: &PiecewiseFn<S>) -> Result<Decomposition<S>, StructureError> {
    f.require_generator()?;
    let m = f.range_of()?;
    let f_of_0 = f.eval(&S::zero())?;
    let f_of_1 = f.value_at_1().clone();

    let below_top = RangeSet::interval(Interval::closed(S::zero(), f_of_1.clone()));
    let holes = below_top.difference(&m);
    let (gaps, points_c) = if holes.is_empty() {
        let top = Gap { b: f_of_1.clone(), d: f_of_1.clone(), b_in_m: true };
        (vec![top], vec![f_of_1.clone()])
    } else {
        let gaps: Vec<Gap<S>> = holes
            .components()
            .iter()
            .map(|h| {
                debug_assert!(!h.hi_closed && m.member(&h.hi));
                Gap { b: h.lo.clone(), d: h.hi.clone(), b_in_m: !h.lo_closed }
            })
            .collect();
        let mut c: Vec<S> = gaps
            .iter()
            .flat_map(|g| {
                let b = g.b_in_m.then(|| g.b.clone());
                b.into_iter().chain(std::iter::once(g.d.clone()))
            })
            .collect();
        c.sort();
        c.dedup();
        (gaps, c)
    };
    let (e, f_set) = f.plateau_sets(&points_c);
    Ok(Decomposition {
        m,
        gaps,
        points_c,
        e,
        f: f_set,
        leading_gap: f_of_0.is_positive(),
        f_of_0,
        f_of_1,
    })
}

/// Decompose a finite `M`, realized by the canonical step function.
pub fn decompose_range<S: Scalar>(m: &RangeSet<S>) -> Result<(PiecewiseFn<S>, Decomposition<S>), StructureError> {
    let points = m.points().ok_or(StructureError::NotFinite)?;
    let f = PiecewiseFn::step(&points)?;
    let dec = decompose(&f)?;
    Ok((f, dec))
}

impl<S: Scalar> Decomposition<S> {
    pub fn is_whole_interval(&self) -> bool {
        self.gaps.len() == 1 && self.gaps[0].b == self.gaps[0].d
    }

    /// Real gaps, i.e. those of positive length.
    pub fn proper_gaps(&self) -> impl Iterator<Item = (usize, &Gap<S>)> {
        self.gaps.iter().enumerate().filter(|(_, g)| g.b < g.d)
    }

    /// `G_M(x)`: the least element of `M` at or above `x` below `f(1)`, else `f(1)`.
    pub fn g_m(&self, x: &S) -> S {
        if *x < self.f_of_1 {
            self.m
                .least_at_or_above(x)
                .expect("every gap ends in a point of M")
        } else {
            self.f_of_1.clone()
        }
    }

    /// The gap whose rounding zone holds `v`.
    pub fn gap_for(&self, v: &S) -> Option<usize> {
        self.proper_gaps().find(|(_, g)| g.zone_contains(v)).map(|(k, _)| k)
    }

    pub fn require_member(&self, x: &S) -> Result<(), StructureError> {
        if self.m.member(x) {
            Ok(())
        } else {
            Err(StructureError::NotInRange(x.to_string()))
        }
    }

    /// `x ⊗ y = G_M(T*(x, y))`.
    pub fn otimes(&self, op: &OpDescriptor<S>, x: &S, y: &S) -> Result<S, StructureError> {
        self.require_member(x)?;
        self.require_member(y)?;
        Ok(self.g_m(&op.try_apply(x, y)?))
    }

    /// `⊗` without membership checks, for callers iterating over `M`.
    pub(crate) fn otimes_unchecked(&self, op: &OpDescriptor<S>, x: &S, y: &S) -> S {
        self.g_m(&op.apply(x, y))
    }

    /// Check `M` against the reconstruction identity `M = C ∪ ([0,f(1)] \ ⋃S)`.
    pub fn reconstruct(&self) -> RangeSet<S> {
        let mut covered = RangeSet::empty();
        for g in &self.gaps {
            covered.insert(Interval::closed(g.b.clone(), g.d.clone()));
        }
        RangeSet::interval(Interval::closed(S::zero(), self.f_of_1.clone()))
            .difference(&covered)
            .union(&RangeSet::from_points(self.points_c.iter().cloned()))
    }
}

/// `T₀(x, y) = d*(T*(f*(x), f*(y)))` on the restricted domain `D`.
pub fn t_zero<S: Scalar>(
    g: &RestrictedGenerator<S>,
    op: &OpDescriptor<S>,
    x: &S,
    y: &S,
) -> Result<S, StructureError> {
    for v in [x, y] {
        if !in_unit(v) {
            return Err(StructureError::OutsideUnit(v.to_string()));
        }
        if !g.domain.member(v) {
            return Err(StructureError::NotInDomain(v.to_string()));
        }
    }
    let t = op.try_apply(&g.f_star(x)?, &g.f_star(y)?)?;
    Ok(g.d_star(&t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_op::registry_get;
    use crate::generator::fixtures::{g1, g2};
    use crate::scalar::q;
    use num_rational::BigRational as R;

    fn r(n: i64, d: i64) -> R {
        q(n, d)
    }

    fn gap(b: R, d: R, b_in_m: bool) -> Gap<R> {
        Gap { b, d, b_in_m }
    }

    #[test]
    fn decompose_g1() {
        let dec = decompose(&g1::<R>()).unwrap();
        assert_eq!(dec.gaps, vec![gap(r(1, 5), r(2, 5), false), gap(r(2, 5), r(3, 5), true)]);
        assert_eq!(dec.points_c, vec![r(2, 5), r(3, 5)]);
        assert!(!dec.leading_gap);
        assert_eq!(dec.reconstruct(), dec.m);
    }

    #[test]
    fn decompose_g2() {
        let dec = decompose(&g2::<R>()).unwrap();
        assert_eq!(dec.gaps, vec![gap(r(1, 5), r(2, 5), true), gap(r(2, 5), r(3, 5), true)]);
        assert_eq!(dec.points_c, vec![r(1, 5), r(2, 5), r(3, 5)]);
        assert_eq!(dec.reconstruct(), dec.m);
    }

    #[test]
    fn decompose_identity_is_degenerate() {
        let dec = decompose(&PiecewiseFn::<R>::identity()).unwrap();
        assert!(dec.is_whole_interval());
        assert_eq!(dec.gaps, vec![gap(r(1, 1), r(1, 1), true)]);
        assert_eq!(dec.points_c, vec![r(1, 1)]);
        assert_eq!(dec.reconstruct(), dec.m);
    }

    #[test]
    fn leading_gap_when_f0_positive() {
        let m = RangeSet::from_points([r(1, 4), r(1, 2), r(1, 1)]);
        let (_, dec) = decompose_range(&m).unwrap();
        assert!(dec.leading_gap);
        assert_eq!(dec.gaps[0], gap(r(0, 1), r(1, 4), false));
        assert_eq!(dec.g_m(&r(0, 1)), r(1, 4));
        assert_eq!(dec.reconstruct(), m);
    }

    #[test]
    fn g_m_examples() {
        let d1 = decompose(&g1::<R>()).unwrap();
        assert_eq!(d1.g_m(&r(3, 10)), r(2, 5));
        assert_eq!(d1.g_m(&r(1, 10)), r(1, 10));
        let d2 = decompose(&g2::<R>()).unwrap();
        assert_eq!(d2.g_m(&r(1, 2)), r(3, 5));
        let (_, d3) = decompose_range(&RangeSet::from_points([r(0, 1), r(1, 2)])).unwrap();
        assert_eq!(d3.g_m(&r(3, 5)), r(1, 2));
    }

    #[test]
    fn otimes_examples() {
        let product = registry_get::<R>("product").unwrap();
        let d1 = decompose(&g1::<R>()).unwrap();
        assert_eq!(d1.otimes(&product, &r(3, 5), &r(3, 5)).unwrap(), r(2, 5));
        assert!(matches!(
            d1.otimes(&product, &r(3, 10), &r(3, 5)),
            Err(StructureError::NotInRange(_))
        ));
        let prob_sum = registry_get::<R>("prob_sum").unwrap();
        let (_, d) = decompose_range(&RangeSet::from_points([r(0, 1), r(1, 2)])).unwrap();
        assert_eq!(d.otimes(&prob_sum, &r(1, 2), &r(1, 2)).unwrap(), r(1, 2));
        // T*(x,y) ∈ M is returned unchanged
        assert_eq!(d1.otimes(&product, &r(1, 1), &r(3, 5)).unwrap(), r(3, 5));
    }

    #[test]
    fn gap_for_respects_membership_of_b() {
        let d1 = decompose(&g1::<R>()).unwrap();
        assert_eq!(d1.gap_for(&r(1, 5)), Some(0));
        assert_eq!(d1.gap_for(&r(2, 5)), None);
        assert_eq!(d1.gap_for(&r(1, 2)), Some(1));
    }

    #[test]
    fn t_zero_example() {
        let g = g2::<R>().restrict_domain().unwrap();
        let product = registry_get::<R>("product").unwrap();
        assert_eq!(t_zero(&g, &product, &r(1, 5), &r(1, 5)).unwrap(), r(1, 25));
        assert!(matches!(
            t_zero(&g, &product, &r(1, 2), &r(1, 5)),
            Err(StructureError::NotInDomain(_))
        ));
        let id = PiecewiseFn::<R>::identity().restrict_domain().unwrap();
        assert_eq!(t_zero(&id, &product, &r(1, 3), &r(3, 4)).unwrap(), r(1, 4));
    }

    #[test]
    fn t_zero_transports_otimes() {
        for f in [g1::<R>(), g2::<R>()] {
            let dec = decompose(&f).unwrap();
            let g = f.restrict_domain().unwrap();
            for id in crate::base_op::REGISTRY_IDS {
                let op = registry_get::<R>(id).unwrap();
                let pts: Vec<R> = (0..=20).map(|i| r(i, 20)).filter(|x| dec.m.member(x)).collect();
                for x in &pts {
                    for y in &pts {
                        let lhs = dec.otimes(&op, x, y).unwrap();
                        let t0 = t_zero(&g, &op, &g.d_star(x), &g.d_star(y)).unwrap();
                        assert_eq!(lhs, g.f_star(&t0).unwrap(), "{id} {x} {y}");
                    }
                }
            }
        }
    }
}
