//! End-to-end acceptance run. Every criterion prints one `pass`/`FAIL` line;
//! the test fails if any criterion does.
//!
//! Set `UPDATE_GOLDENS=1` to rewrite the stored `examples` outputs.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use assocgen::certifier::{certify, f0_bound_check, obstruction};
use assocgen::generated::GeneratedOp;
use assocgen::structure::{decompose, t_zero};
use assocgen::wire::generator_to_json;
use assocgen::{
    q, registry_all, registry_get, CertifyOptions, Interval, OpDescriptor, Part, Piece, PiecewiseFn, RangeSet, Rational,
    Variant, Verdict,
};
use assocgen_cli::{examples_registry, Example};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(n: i64, d: i64) -> Rational {
    q(n, d)
}

fn example(id: &str) -> Example {
    examples_registry().into_iter().find(|e| e.id == id).unwrap_or_else(|| panic!("no example {id}"))
}

fn unit_rational(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    r(rng.gen_range(0..=d), d)
}

/// `|M| ≤ 6`, denominators ≤ 40.
fn random_finite_range(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let mut m: Vec<Rational> = (0..rng.gen_range(1..=6)).map(|_| unit_rational(rng, 40)).collect();
    m.sort();
    m.dedup();
    m
}

/// Up to four pieces, each constant or affine, on random breakpoints.
fn random_generator(rng: &mut ChaCha8Rng) -> PiecewiseFn {
    let k = rng.gen_range(1..=4);
    let xs = loop {
        let mut xs = vec![r(0, 1), r(1, 1)];
        xs.extend((1..k).map(|_| unit_rational(rng, 12)));
        xs.sort();
        xs.dedup();
        if xs.len() == k + 1 {
            break xs;
        }
    };
    let mut v: Vec<Rational> = (0..=2 * k).map(|_| unit_rational(rng, 12)).collect();
    v.sort();
    let pieces = (0..k)
        .map(|i| {
            if v[2 * i] == v[2 * i + 1] || rng.gen_bool(0.4) {
                Piece::constant(xs[i].clone(), xs[i + 1].clone(), v[2 * i].clone())
            } else {
                Piece::through(xs[i].clone(), xs[i + 1].clone(), v[2 * i].clone(), v[2 * i + 1].clone())
            }
        })
        .collect();
    PiecewiseFn::non_decreasing(pieces, v[2 * k].clone()).unwrap()
}

/// `G_M` straight from the list of points of a finite range below `top`.
fn round_up(m: &[Rational], top: &Rational, x: &Rational) -> Rational {
    if x >= top {
        return top.clone();
    }
    m.iter().find(|v| *v >= x).cloned().unwrap_or_else(|| top.clone())
}

/// Associativity of `⊗` on a finite range by scanning `M³`.
fn otimes_oracle(m: &[Rational], op: &OpDescriptor) -> bool {
    let top = m.last().unwrap().clone();
    let o = |x: &Rational, y: &Rational| round_up(m, &top, &op.apply(x, y));
    m.iter().all(|x| m.iter().all(|y| m.iter().all(|z| o(&o(x, y), z) == o(x, &o(y, z)))))
}

fn set_of(text: &[Interval]) -> RangeSet {
    RangeSet::normalize(text.to_vec()).unwrap()
}

fn a1() {
    let g1 = decompose(&example("3.1.i").generator).unwrap();
    assert_eq!(
        g1.m,
        set_of(&[Interval::closed_open(r(0, 1), r(1, 5)), Interval::point(r(2, 5)), Interval::closed(r(3, 5), r(1, 1))])
    );
    let gaps: Vec<_> = g1.gaps.iter().map(|g| (g.b.clone(), g.d.clone())).collect();
    assert_eq!(gaps, vec![(r(1, 5), r(2, 5)), (r(2, 5), r(3, 5))]);
    assert_eq!(g1.points_c, vec![r(2, 5), r(3, 5)]);
    assert_eq!(g1.e, vec![r(2, 5)]);
    assert_eq!(g1.f, vec![r(3, 5)]);

    let g2 = decompose(&example("3.1.ii").generator).unwrap();
    let gaps: Vec<_> = g2.gaps.iter().map(|g| (g.b.clone(), g.d.clone())).collect();
    assert_eq!(gaps, vec![(r(1, 5), r(2, 5)), (r(2, 5), r(3, 5))]);
    assert_eq!(g2.points_c, vec![r(1, 5), r(2, 5), r(3, 5)]);
    assert_eq!(g2.e, vec![r(1, 5), r(2, 5), r(3, 5)]);
    assert!(g2.f.is_empty());
}

/// The case split shared by the rounding and `⊗` examples: `2/5` on the first
/// band, `3/5` on `(2/5, 3/5)`, the argument itself elsewhere.
fn banded(v: &Rational, first_closed: bool) -> Rational {
    let in_first = if first_closed { *v >= r(1, 5) } else { *v > r(1, 5) } && *v < r(2, 5);
    if in_first {
        r(2, 5)
    } else if *v > r(2, 5) && *v < r(3, 5) {
        r(3, 5)
    } else {
        v.clone()
    }
}

fn a2() {
    for (id, first_closed) in [("3.2.i", true), ("3.2.ii", false)] {
        let dec = decompose(&example(id).generator).unwrap();
        for k in 0..=20 {
            let x = r(k, 20);
            assert_eq!(dec.g_m(&x), banded(&x, first_closed), "{id}: G_M({x})");
        }
    }
}

fn a3() {
    let product = registry_get::<Rational>("product").unwrap();
    for (id, first_closed) in [("3.3.i", true), ("3.3.ii", false)] {
        let dec = decompose(&example(id).generator).unwrap();
        let members: Vec<Rational> = [(0, 1), (1, 10), (1, 5), (2, 5), (3, 5), (7, 10), (4, 5), (9, 10), (1, 1)]
            .iter()
            .map(|&(n, d)| r(n, d))
            .filter(|v| dec.m.member(v))
            .collect();
        let pairs: Vec<(Rational, Rational)> = members
            .iter()
            .enumerate()
            .flat_map(|(i, x)| members[i..].iter().map(move |y| (x.clone(), y.clone())))
            .take(15)
            .collect();
        assert_eq!(pairs.len(), 15);
        for (x, y) in pairs {
            let want = banded(&(x.clone() * y.clone()), first_closed);
            assert_eq!(dec.otimes(&product, &x, &y).unwrap(), want, "{id}: {x} ⊗ {y}");
        }
    }
}

fn grid(n: i64) -> Vec<Rational> {
    (0..=n).map(|k| r(k, n)).collect()
}

fn check_grid(t: &GeneratedOp<Rational>, n: i64, want: impl Fn(&Rational, &Rational) -> Rational) {
    for x in grid(n) {
        for y in grid(n) {
            assert_eq!(t.t_eval(&x, &y), want(&x, &y), "T({x},{y})");
        }
    }
}

fn assert_associative(v: &Verdict) {
    assert!(matches!(v, Verdict::CertifiedAssociative { .. }), "{v:?}");
}

fn a4() {
    let ex = example("5.1.i");
    let op = registry_get::<Rational>("product").unwrap();
    let report = obstruction(&decompose(&ex.generator).unwrap(), &op, false).unwrap();
    assert!(report.t1.is_empty() && report.t2.is_empty() && report.t3.is_empty());
    assert_associative(&certify(&ex.generator, &op, &CertifyOptions::default()).unwrap());
    let t = GeneratedOp::new(ex.generator, op, Variant::TopPatched).unwrap();
    let one = r(1, 1);
    check_grid(&t, 10, |x, y| {
        if *x == one {
            y.clone()
        } else if *y == one {
            x.clone()
        } else {
            r(0, 1)
        }
    });
}

fn a5() {
    let ex = example("5.1.ii");
    let op = registry_get::<Rational>("product").unwrap();
    assert_associative(&certify(&ex.generator, &op, &CertifyOptions::default()).unwrap());
    let t = GeneratedOp::new(ex.generator, op, ex.variant).unwrap();
    let (a, one) = (r(1, 2), r(1, 1));
    check_grid(&t, 20, |x, y| {
        if *x < a && *y < a {
            x * y
        } else if *x >= a && *y >= a && *x < one && *y < one {
            a.clone()
        } else {
            x.clone().min(y.clone())
        }
    });
}

fn a6() {
    let ex = example("5.1.iv");
    let op = registry_get::<Rational>("prob_sum").unwrap();
    let dec = decompose(&ex.generator).unwrap();
    assert!(dec.f_of_1 < r(1, 1), "subunit mode");
    let report = obstruction(&dec, &op, false).unwrap();
    assert!(report.t1.is_empty() && report.t2.is_empty());
    assert_eq!(report.t3, RangeSet::interval(Interval::closed_open(r(1, 2), r(3, 4))));
    assert!(report.hits.is_empty());
    assert_associative(&certify(&ex.generator, &op, &CertifyOptions::default()).unwrap());
    let t = GeneratedOp::new(ex.generator, op, Variant::Plain).unwrap();
    let one = r(1, 1);
    check_grid(&t, 10, |x, y| if *x < one && *y < one { r(0, 1) } else { one.clone() });
}

fn a7() {
    let m: Vec<Rational> = [(0, 1), (19, 100), (1, 5), (2, 5), (1, 2), (9, 10), (1, 1)].iter().map(|&(n, d)| r(n, d)).collect();
    let ex = example("counterexample.product");
    let op = registry_get::<Rational>("product").unwrap();
    let dec = decompose(&ex.generator).unwrap();
    assert_eq!(dec.m, RangeSet::from_points(m.clone()));

    // The witness is confirmed by the brute-force oracle before anything else.
    let t = GeneratedOp::new(ex.generator.clone(), op.clone(), Variant::Plain).unwrap();
    let oracle = t.brute_force_oracle(&m).unwrap();
    assert!(!oracle.associative_on_sample());
    let (x, y, z) = (r(9, 10), r(1, 2), r(2, 5));
    assert_eq!(t.t_eval(&t.t_eval(&x, &y), &z), r(1, 5));
    assert_eq!(t.t_eval(&x, &t.t_eval(&y, &z)), r(19, 100));
    assert!(!otimes_oracle(&m, &op));

    let verdict = certify(&ex.generator, &op, &CertifyOptions::default()).unwrap();
    let Verdict::CertifiedNonAssociative { lhs, rhs, .. } = &verdict else { panic!("{verdict:?}") };
    assert_ne!(lhs, rhs);
    let report = obstruction(&dec, &op, false).unwrap();
    assert!(report.t1.member(&r(19, 100)));
    assert!(report.hits.iter().any(|h| h.part == Part::T1 && h.value == r(19, 100)));
}

fn a8() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa8);
    let ops = registry_all::<Rational>();
    let options = CertifyOptions::default();
    let (mut cases, mut subunit, mut non_assoc) = (0, 0, 0);
    let start = Instant::now();
    for _ in 0..500 {
        let m = random_finite_range(&mut rng);
        let f = PiecewiseFn::step(&m).unwrap();
        if *m.last().unwrap() < r(1, 1) {
            subunit += 1;
        }
        for op in &ops {
            cases += 1;
            let verdict = certify(&f, op, &options).unwrap();
            let truth = otimes_oracle(&m, op);
            assert_eq!(verdict.is_associative(), Some(truth), "M={m:?}, {}", op.id);
            non_assoc += usize::from(!truth);
        }
    }
    let elapsed = start.elapsed();
    assert!(ops.len() >= 6 && cases >= 3000);
    assert!(subunit > 100 && non_assoc > 0);
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!("    {cases} cases ({subunit} subunit ranges, {non_assoc} non-associative) in {elapsed:.1?}");
}

fn a9() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa9);
    for _ in 0..20 {
        let f = random_generator(&mut rng);
        assert!(f.validate().right_continuous);
        let dec = decompose(&f).unwrap();
        for _ in 0..50 {
            let y = unit_rational(&mut rng, 60);
            assert_eq!(dec.g_m(&y), f.eval(&f.pseudo_inverse(&y)).unwrap(), "f={f}, y={y}");
        }
    }
    let f = example("remark3.2").generator;
    let m = f.range_of().unwrap();
    assert_eq!(m.least_at_or_above(&r(2, 5)), Some(r(2, 5)));
    assert_eq!(f.eval(&f.pseudo_inverse(&r(2, 5))).unwrap(), r(1, 5));
}

fn a10() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa10);
    let ops = registry_all::<Rational>();
    let mut pairs = 0;
    while pairs < 200 {
        let f = random_generator(&mut rng);
        let g = f.restrict_domain().unwrap();
        for x in g.domain.sample_points() {
            assert_eq!(g.d_star(&g.f_star(&x).unwrap()), x, "f={f}");
        }
        // With 1 outside D the transport identity has no meaning.
        if !g.domain.member(&r(1, 1)) {
            continue;
        }
        let dec = decompose(&f).unwrap();
        let members = dec.m.sample_points();
        for _ in 0..10 {
            let x = &members[rng.gen_range(0..members.len())];
            let y = &members[rng.gen_range(0..members.len())];
            let op = &ops[rng.gen_range(0..ops.len())];
            let via_t0 = g.f_star(&t_zero(&g, op, &g.d_star(x), &g.d_star(y)).unwrap()).unwrap();
            assert_eq!(dec.otimes(op, x, y).unwrap(), via_t0, "f={f}, {}: ({x},{y})", op.id);
            pairs += 1;
        }
    }
}

fn a11() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11);
    let t_norms: Vec<_> = registry_all::<Rational>().into_iter().filter(|o| o.is_t_norm()).collect();
    let mut patched = 0;
    for _ in 0..40 {
        let f = PiecewiseFn::step(&random_finite_range(&mut rng)).unwrap();
        let probes: Vec<Rational> = (0..100).map(|_| unit_rational(&mut rng, 60)).collect();
        for op in &t_norms {
            let t = GeneratedOp::new(f.clone(), op.clone(), Variant::Plain).unwrap();
            let report = t.remark33_checks(&probes).unwrap();
            assert!(report.upper_bound_at_one, "f={f}, {}: {:?}", op.id, report.failures);
            if let Some(ok) = report.patched_is_t_norm {
                assert!(ok, "f={f}, {}: {:?}", op.id, report.failures);
                patched += 1;
            }
        }
    }
    assert!(patched > 20, "only {patched} certified-associative cases");
}

fn a12() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa12);
    let mut qualifying = 0;
    for _ in 0..500 {
        let f = PiecewiseFn::step(&random_finite_range(&mut rng)).unwrap();
        let dec = decompose(&f).unwrap();
        for op in registry_all::<Rational>() {
            let verdict = certify(&f, &op, &CertifyOptions::default()).unwrap();
            if let Ok(holds) = f0_bound_check(&dec, &op, &verdict) {
                qualifying += 1;
                assert!(holds, "f={f}, {}", op.id);
            }
        }
    }
    assert!(qualifying > 100, "only {qualifying} qualifying samples");
}

fn a13() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa13);
    for _ in 0..200 {
        let pts = random_finite_range(&mut rng);
        let mut by_pairs = RangeSet::empty();
        for a in &pts {
            for b in &pts {
                if let Some(iv) = Interval::try_new(a.clone().min(b.clone()), a.clone().max(b.clone()), true, false) {
                    by_pairs = by_pairs.union(&RangeSet::interval(iv));
                }
            }
        }
        assert_eq!(RangeSet::from_points(pts.clone()).o_span(), by_pairs, "{pts:?}");
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_assocgen"))
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/examples")
}

fn a14() {
    let update = std::env::var_os("UPDATE_GOLDENS").is_some();
    for ex in examples_registry() {
        let out = bin().args(["examples", "--id", ex.id]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}: {}", ex.id, String::from_utf8_lossy(&out.stderr));
        let path = fixtures().join(format!("{}.json", ex.id));
        if update {
            std::fs::create_dir_all(fixtures()).unwrap();
            std::fs::write(&path, &out.stdout).unwrap();
        }
        let golden = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(golden == out.stdout, "{} differs from {}", ex.id, path.display());
    }

    let out = bin().args(["examples", "--id", "no.such.example"]).output().unwrap();
    assert_eq!(out.status.code(), Some(71));

    let dir = tempfile::tempdir().unwrap();
    for (id, op, code) in [("counterexample.product", "product", 1), ("5.1.iv", "prob_sum", 0), ("3.1.i", "nope", 67)] {
        let path = dir.path().join(format!("{id}.json"));
        std::fs::write(&path, generator_to_json(&example(id).generator)).unwrap();
        let out = bin().args(["certify", "--generator"]).arg(&path).args(["--op", op]).output().unwrap();
        assert_eq!(out.status.code(), Some(code), "certify {id} with {op}");
    }
    let analog = dir.path().join("analog.json");
    std::fs::write(&analog, generator_to_json(&example("5.1.iii-analog").generator)).unwrap();
    let out = bin().args(["certify", "--depth", "2", "--generator"]).arg(&analog).args(["--op", "product"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "an undecided range exits with 2");
}

fn main() {
    let criteria: [(&str, &str, fn()); 14] = [
        ("A1", "decomposition goldens", a1),
        ("A2", "rounding goldens", a2),
        ("A3", "induced operation goldens", a3),
        ("A4", "0 below 1, product: drastic t-norm", a4),
        ("A5", "half-slope generator, product", a5),
        ("A6", "probabilistic sum, subunit mode", a6),
        ("A7", "seven-point counterexample", a7),
        ("A8", "certifier against exhaustive oracle", a8),
        ("A9", "rounding equals f after its pseudo-inverse", a9),
        ("A10", "restricted generator identities", a10),
        ("A11", "upper bound at one and top patch", a11),
        ("A12", "f(0) bound", a12),
        ("A13", "span against pair enumeration", a13),
        ("A14", "CLI goldens and exit codes", a14),
    ];
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check));
        let status = if result.is_ok() { "pass" } else { "FAIL" };
        println!("{id:<4} {status}  {name} ({:.2?})", start.elapsed());
        if result.is_err() {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
