#![allow(dead_code)]

use assocgen::{q, Interval as Iv, Piece, PiecewiseFn, RangeSet, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn r(n: i64, d: i64) -> Rational {
    q(n, d)
}

/// A rational in `[0,1]` with denominator at most `max_den`.
pub fn unit_rational(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    q(rng.gen_range(0..=d), d)
}

pub fn sorted_unit_rationals(rng: &mut ChaCha8Rng, n: usize, max_den: i64) -> Vec<Rational> {
    let mut v: Vec<Rational> = (0..n).map(|_| unit_rational(rng, max_den)).collect();
    v.sort();
    v
}

/// Breakpoints `0 = x_0 < … < x_k = 1`.
pub fn breakpoints(rng: &mut ChaCha8Rng, pieces: usize) -> Vec<Rational> {
    loop {
        let mut xs = vec![q(0, 1), q(1, 1)];
        xs.extend((1..pieces).map(|_| unit_rational(rng, 12)));
        xs.sort();
        xs.dedup();
        if xs.len() == pieces + 1 {
            return xs;
        }
    }
}

/// Values for a random generator with `pieces` pieces: piece `i` runs from
/// `v[2i]` to `v[2i+1]` and `f(1) = v[2·pieces]`.
pub fn generator_values(rng: &mut ChaCha8Rng, pieces: usize) -> Vec<Rational> {
    let mut v = sorted_unit_rationals(rng, 2 * pieces + 1, 12);
    for i in 0..pieces {
        if rng.gen_bool(0.4) {
            v[2 * i + 1] = v[2 * i].clone();
        }
    }
    v
}

/// The non-decreasing right-continuous generator with the given layout.
pub fn generator_from(xs: &[Rational], v: &[Rational]) -> PiecewiseFn {
    let pieces = (0..xs.len() - 1)
        .map(|i| {
            let (lo, hi) = (xs[i].clone(), xs[i + 1].clone());
            if v[2 * i] == v[2 * i + 1] {
                Piece::constant(lo, hi, v[2 * i].clone())
            } else {
                Piece::through(lo, hi, v[2 * i].clone(), v[2 * i + 1].clone())
            }
        })
        .collect();
    PiecewiseFn::non_decreasing(pieces, v[v.len() - 1].clone()).unwrap()
}

pub fn random_generator(rng: &mut ChaCha8Rng) -> PiecewiseFn {
    let k = rng.gen_range(1..=4);
    let xs = breakpoints(rng, k);
    let v = generator_values(rng, k);
    generator_from(&xs, &v)
}

pub fn random_non_constant_generator(rng: &mut ChaCha8Rng) -> PiecewiseFn {
    loop {
        let f = random_generator(rng);
        if !f.validate().constant {
            return f;
        }
    }
}

/// Random finite range, in the shape used by the fuzz harnesses.
pub fn random_finite_range(rng: &mut ChaCha8Rng, max_len: usize, max_den: i64) -> Vec<Rational> {
    let n = rng.gen_range(1..=max_len);
    let mut pts: Vec<Rational> = (0..n).map(|_| unit_rational(rng, max_den)).collect();
    if rng.gen_bool(0.5) {
        pts.push(q(1, 1));
    }
    if rng.gen_bool(0.5) {
        pts.push(q(0, 1));
    }
    pts.sort();
    pts.dedup();
    pts.truncate(max_len);
    pts
}

/// Random interval in `[0,1]` with random endpoint closure.
pub fn random_interval(rng: &mut ChaCha8Rng, max_den: i64) -> Iv {
    loop {
        let (a, b) = (unit_rational(rng, max_den), unit_rational(rng, max_den));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if let Some(iv) = Iv::try_new(lo, hi, rng.gen_bool(0.5), rng.gen_bool(0.5)) {
            return iv;
        }
    }
}

/// A rational drawn from `set`, which must be non-empty.
pub fn member_of(rng: &mut ChaCha8Rng, set: &RangeSet) -> Rational {
    let comps = set.components();
    let c = &comps[rng.gen_range(0..comps.len())];
    if c.is_point() {
        return c.lo.clone();
    }
    loop {
        let t = unit_rational(rng, 16);
        let x = c.lo.clone() + (c.hi.clone() - c.lo.clone()) * t;
        if c.contains(&x) {
            return x;
        }
    }
}
