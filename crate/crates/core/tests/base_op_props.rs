mod common;

use assocgen::{q, registry_all, Interval, OpDescriptor, RangeSet, Rational};
use common::{member_of, random_interval, unit_rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn registry_ops_are_associative_with_neutral_element() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for op in registry_all::<Rational>() {
        let t = |a: &Rational, b: &Rational| op.apply(a, b);
        for _ in 0..1000 {
            let (x, y, z) = (unit_rational(&mut rng, 40), unit_rational(&mut rng, 40), unit_rational(&mut rng, 40));
            assert_eq!(t(&t(&x, &y), &z), t(&x, &t(&y, &z)), "{} at ({x},{y},{z})", op.id);
            assert_eq!(t(&x, &op.neutral), x, "{}", op.id);
            assert_eq!(t(&op.neutral, &x), x, "{}", op.id);
            assert_eq!(t(&x, &y), t(&y, &x), "{}", op.id);
            let x2 = unit_rational(&mut rng, 40);
            if x <= x2 {
                assert!(t(&x, &y) <= t(&x2, &y), "{} not monotone", op.id);
            }
        }
    }
}

/// `{v / b : b ∈ B, b > 0}` for `v > 0`, as an interval of `[0, ∞)`
/// clipped to `[0, 1]`.
fn quotient(v: &Rational, b: &Interval) -> Option<Interval> {
    let zero = q::<Rational>(0, 1);
    if b.hi <= zero {
        return None;
    }
    let lo = v.clone() / b.hi.clone();
    if b.lo <= zero {
        return Interval::try_new(lo, q(1, 1), b.hi_closed, true);
    }
    let hi = v.clone() / b.lo.clone();
    let (hi, hi_closed) = if hi > q(1, 1) { (q(1, 1), true) } else { (hi, b.lo_closed) };
    Interval::try_new(lo, hi, b.hi_closed, hi_closed)
}

/// A pair `(a, b) ∈ A × B` with `a·b = v`, if there is one.
fn product_preimage(v: &Rational, a: &Interval, b: &Interval) -> Option<(Rational, Rational)> {
    let zero = q::<Rational>(0, 1);
    if *v == zero {
        return if a.contains(&zero) {
            Some((zero, b.interior_point()))
        } else if b.contains(&zero) {
            Some((a.interior_point(), zero))
        } else {
            None
        };
    }
    let x = a.intersect(&quotient(v, b)?)?.interior_point();
    Some((x.clone(), v.clone() / x))
}

fn flip(iv: &Interval) -> Interval {
    let one = q::<Rational>(1, 1);
    Interval::new(one.clone() - iv.hi.clone(), one - iv.lo.clone(), iv.hi_closed, iv.lo_closed).unwrap()
}

/// Preimage under the bilinear ops; `1 - (a ⊕ b) = (1-a)(1-b)` for prob_sum.
fn bilinear_preimage(op: &OpDescriptor, v: &Rational, a: &Interval, b: &Interval) -> Option<(Rational, Rational)> {
    let one = q::<Rational>(1, 1);
    match op.id.as_str() {
        "product" => product_preimage(v, a, b),
        "prob_sum" => product_preimage(&(one.clone() - v.clone()), &flip(a), &flip(b))
            .map(|(x, y)| (one.clone() - x, one - y)),
        _ => unreachable!(),
    }
}

#[test]
fn box_image_contains_every_product_of_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for op in registry_all::<Rational>() {
        for _ in 0..200 {
            let a = RangeSet::interval(random_interval(&mut rng, 10));
            let b = RangeSet::interval(random_interval(&mut rng, 10));
            let img = op.box_image(&a, &b).unwrap();
            for _ in 0..5 {
                let (x, y) = (member_of(&mut rng, &a), member_of(&mut rng, &b));
                assert!(img.member(&op.apply(&x, &y)), "{}: {a} × {b} -> {img} misses T*({x},{y})", op.id);
            }
        }
    }
}

#[test]
fn box_image_of_bilinear_ops_is_attained() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for op in registry_all::<Rational>().into_iter().filter(|o| o.id == "product" || o.id == "prob_sum") {
        for _ in 0..200 {
            let (ia, ib) = (random_interval(&mut rng, 10), random_interval(&mut rng, 10));
            let (a, b) = (RangeSet::interval(ia.clone()), RangeSet::interval(ib.clone()));
            let img = op.box_image(&a, &b).unwrap();
            let mut claimed = img.sample_points();
            claimed.extend((0..5).map(|_| member_of(&mut rng, &img)));
            for v in claimed {
                let (x, y) = bilinear_preimage(&op, &v, &ia, &ib)
                    .unwrap_or_else(|| panic!("{}: {v} in {img} is not attained on {ia} × {ib}", op.id));
                assert!(ia.contains(&x) && ib.contains(&y), "{}: bad preimage ({x},{y})", op.id);
                assert_eq!(op.apply(&x, &y), v);
            }
        }
    }
}
