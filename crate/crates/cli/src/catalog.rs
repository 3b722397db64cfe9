//! Built-in worked examples. Each one fixes a generator, a base operation and
//! the values it must reproduce; running it records every such value as a
//! check in the output document.

use std::fmt::Display;

use assocgen::exact::Interval;
use assocgen::structure::decompose;
use assocgen::wire::{DecompositionDoc, GeneratorDoc, ObstructionDoc, OracleDoc, VerdictDoc, SCHEMA_VERSION};
use assocgen::{
    q, registry_get, Direction, GeneratedOp, Part, Piece, PiecewiseFn, RangeSet, Rational, Variant,
};
use serde::Serialize;

use crate::commands::{certify_all, generated_error, mode_name, oracle_points, pulled_back_witness, Certified};
use crate::{to_json, CliError, RunConfig};

fn r(n: i64, d: i64) -> Rational {
    q(n, d)
}

fn rs(pairs: &[(i64, i64)]) -> Vec<Rational> {
    pairs.iter().map(|&(n, d)| r(n, d)).collect()
}

/// A named generator/operation pair with the values it must reproduce.
#[derive(Debug, Clone)]
pub struct Example {
    pub id: &'static str,
    pub title: &'static str,
    pub generator: PiecewiseFn,
    pub op: Option<&'static str>,
    pub variant: Variant,
    /// What the example is expected to show, in words.
    pub expected: &'static str,
    probe: Probe,
}

#[derive(Debug, Clone)]
enum Probe {
    Decomposition { m: RangeSet, gaps: Vec<(Rational, Rational, bool)>, c: Vec<Rational>, e: Vec<Rational>, f: Vec<Rational> },
    Rounding { cases: Vec<(Interval<Rational>, Rational)> },
    Otimes { pairs: Vec<(Rational, Rational)>, cases: Vec<(Interval<Rational>, Rational)> },
    TwoArgument { grid: i64, formula: fn(&Rational, &Rational) -> Rational, obstruction: Option<[RangeSet; 3]> },
    Agreement,
    NotRightContinuous { at: Rational, rounded: Rational, composed: Rational },
    Counterexample { witness: [Rational; 3], lhs: Rational, rhs: Rational, hit: Rational },
}

fn g1() -> PiecewiseFn {
    PiecewiseFn::non_decreasing(
        vec![
            Piece::affine(r(0, 1), r(2, 5), r(1, 2), r(0, 1)),
            Piece::constant(r(2, 5), r(3, 5), r(2, 5)),
            Piece::affine(r(3, 5), r(1, 1), r(1, 1), r(0, 1)),
        ],
        r(1, 1),
    )
    .expect("valid generator")
}

fn g2() -> PiecewiseFn {
    PiecewiseFn::non_decreasing(
        vec![
            Piece::affine(r(0, 1), r(1, 5), r(1, 1), r(0, 1)),
            Piece::constant(r(1, 5), r(2, 5), r(1, 5)),
            Piece::constant(r(2, 5), r(3, 5), r(2, 5)),
            Piece::constant(r(3, 5), r(4, 5), r(3, 5)),
            Piece::affine(r(4, 5), r(1, 1), r(2, 1), r(-1, 1)),
        ],
        r(1, 1),
    )
    .expect("valid generator")
}

/// `0` on `[0, 1)` and `top` at `1`.
fn zero_then(top: Rational) -> PiecewiseFn {
    PiecewiseFn::non_decreasing(vec![Piece::constant(r(0, 1), r(1, 1), r(0, 1))], top).expect("valid generator")
}

/// `x ↦ max{m ∈ M : m ≤ x}` for finite `M ∋ 0, 1`, so `f(m) = m` on `M`.
pub fn floor_step(points: &[Rational]) -> PiecewiseFn {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let pieces = pts.windows(2).map(|w| Piece::constant(w[0].clone(), w[1].clone(), w[0].clone())).collect();
    PiecewiseFn::non_decreasing(pieces, pts[pts.len() - 1].clone()).expect("valid generator")
}

/// Strictly increasing except for a plateau at `0`, with range
/// `{0} ∪ ⋃_{n=1..levels} [2·4⁻ⁿ, 4·4⁻ⁿ) ∪ {1}`.
fn geometric_bands(levels: i64) -> PiecewiseFn {
    let width = r(1, levels + 1);
    let mut pieces = vec![Piece::constant(r(0, 1), width.clone(), r(0, 1))];
    for (i, n) in (1..=levels).rev().enumerate() {
        let lo = width.clone() * r(i as i64 + 1, 1);
        let hi = width.clone() * r(i as i64 + 2, 1);
        let scale = r(1, 4i64.pow(n as u32));
        pieces.push(Piece::through(lo, hi, r(2, 1) * scale.clone(), r(4, 1) * scale));
    }
    PiecewiseFn::non_decreasing(pieces, r(1, 1)).expect("valid generator")
}

fn remark_generator() -> PiecewiseFn {
    PiecewiseFn::new(
        Direction::NonDecreasing,
        g1().pieces().to_vec(),
        r(1, 1),
        vec![(r(2, 5), r(1, 5)), (r(3, 5), r(2, 5))],
    )
    .expect("valid generator")
}

fn set(parts: Vec<Interval<Rational>>) -> RangeSet {
    RangeSet::normalize(parts).expect("inside [0,1]")
}

fn drastic(x: &Rational, y: &Rational) -> Rational {
    let one = r(1, 1);
    if *x == one {
        y.clone()
    } else if *y == one {
        x.clone()
    } else {
        r(0, 1)
    }
}

/// The half-slope generator with the product base, top-patched.
fn half_slope_product(x: &Rational, y: &Rational) -> Rational {
    let a = r(1, 2);
    if *x < a && *y < a {
        x.clone() * y.clone()
    } else if *x >= a && *y >= a && *x < r(1, 1) && *y < r(1, 1) {
        a
    } else {
        x.clone().min(y.clone())
    }
}

fn two_valued(x: &Rational, y: &Rational) -> Rational {
    if *x < r(1, 1) && *y < r(1, 1) {
        r(0, 1)
    } else {
        r(1, 1)
    }
}

fn rounding_cases(first_open: bool) -> Vec<(Interval<Rational>, Rational)> {
    vec![
        (Interval::new(r(1, 5), r(2, 5), !first_open, false).expect("interval"), r(2, 5)),
        (Interval::open(r(2, 5), r(3, 5)), r(3, 5)),
    ]
}

/// Probe pairs in `M`, chosen so every case of the split is hit.
fn otimes_pairs(m: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
    let pts = rs(m);
    let mut out = Vec::new();
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i..] {
            out.push((x.clone(), y.clone()));
        }
    }
    out.truncate(15);
    out
}

/// Every built-in example.
pub fn examples_registry() -> Vec<Example> {
    let (z, one) = (r(0, 1), r(1, 1));
    vec![
        Example {
            id: "3.1.i",
            title: "g1: slope 1/2, a plateau at 2/5, then the identity",
            generator: g1(),
            op: None,
            variant: Variant::Plain,
            expected: "gaps [1/5,2/5] and [2/5,3/5], C = {2/5, 3/5}, E = {2/5}, F = {3/5}",
            probe: Probe::Decomposition {
                m: set(vec![Interval::closed_open(z.clone(), r(1, 5)), Interval::point(r(2, 5)), Interval::closed(r(3, 5), one.clone())]),
                gaps: vec![(r(1, 5), r(2, 5), false), (r(2, 5), r(3, 5), true)],
                c: rs(&[(2, 5), (3, 5)]),
                e: rs(&[(2, 5)]),
                f: rs(&[(3, 5)]),
            },
        },
        Example {
            id: "3.1.ii",
            title: "g2: identity, three plateaus, then slope 2",
            generator: g2(),
            op: None,
            variant: Variant::Plain,
            expected: "gaps [1/5,2/5] and [2/5,3/5], C = E = {1/5, 2/5, 3/5}, F = ∅",
            probe: Probe::Decomposition {
                m: set(vec![Interval::closed(z.clone(), r(1, 5)), Interval::point(r(2, 5)), Interval::closed(r(3, 5), one.clone())]),
                gaps: vec![(r(1, 5), r(2, 5), true), (r(2, 5), r(3, 5), true)],
                c: rs(&[(1, 5), (2, 5), (3, 5)]),
                e: rs(&[(1, 5), (2, 5), (3, 5)]),
                f: vec![],
            },
        },
        Example {
            id: "3.2.i",
            title: "rounding onto the range of g1",
            generator: g1(),
            op: None,
            variant: Variant::Plain,
            expected: "G_M = 2/5 on [1/5,2/5), 3/5 on (2/5,3/5), identity elsewhere",
            probe: Probe::Rounding { cases: rounding_cases(false) },
        },
        Example {
            id: "3.2.ii",
            title: "rounding onto the range of g2",
            generator: g2(),
            op: None,
            variant: Variant::Plain,
            expected: "G_M = 2/5 on (1/5,2/5), 3/5 on (2/5,3/5), identity elsewhere",
            probe: Probe::Rounding { cases: rounding_cases(true) },
        },
        Example {
            id: "3.3.i",
            title: "induced operation on the range of g1, product base",
            generator: g1(),
            op: Some("product"),
            variant: Variant::Plain,
            expected: "x⊗y = 2/5 if xy ∈ [1/5,2/5), 3/5 if xy ∈ (2/5,3/5), xy otherwise",
            probe: Probe::Otimes {
                pairs: otimes_pairs(&[(0, 1), (1, 10), (2, 5), (3, 5), (7, 10), (4, 5), (9, 10), (1, 1)]),
                cases: rounding_cases(false),
            },
        },
        Example {
            id: "3.3.ii",
            title: "induced operation on the range of g2, product base",
            generator: g2(),
            op: Some("product"),
            variant: Variant::Plain,
            expected: "x⊗y = 2/5 if xy ∈ (1/5,2/5), 3/5 if xy ∈ (2/5,3/5), xy otherwise",
            probe: Probe::Otimes {
                pairs: otimes_pairs(&[(0, 1), (1, 5), (2, 5), (3, 5), (7, 10), (4, 5), (9, 10), (1, 1)]),
                cases: rounding_cases(true),
            },
        },
        Example {
            id: "5.1.i",
            title: "0 below 1, product base, top-patched",
            generator: zero_then(one.clone()),
            op: Some("product"),
            variant: Variant::TopPatched,
            expected: "all three obstruction sets empty; certified associative; the patched operation is the drastic t-norm",
            probe: Probe::TwoArgument {
                grid: 10,
                formula: drastic,
                obstruction: Some([RangeSet::empty(), RangeSet::empty(), RangeSet::empty()]),
            },
        },
        Example {
            id: "5.1.ii",
            title: "identity on [0,1/2) then 1, product base, top-patched",
            generator: PiecewiseFn::non_decreasing(
                vec![Piece::affine(z.clone(), r(1, 2), one.clone(), z.clone()), Piece::constant(r(1, 2), one.clone(), one.clone())],
                one.clone(),
            )
            .expect("valid generator"),
            op: Some("product"),
            variant: Variant::TopPatched,
            expected: "certified associative; T = xy on [0,1/2)², 1/2 on [1/2,1)², min otherwise",
            probe: Probe::TwoArgument { grid: 20, formula: half_slope_product, obstruction: None },
        },
        Example {
            id: "5.1.iii-analog",
            title: "range {0} ∪ [1/32,1/16) ∪ [1/8,1/4) ∪ [1/2,1], product base",
            generator: geometric_bands(3),
            op: Some("product"),
            variant: Variant::Plain,
            expected: "certifier and oracle must agree",
            probe: Probe::Agreement,
        },
        Example {
            id: "5.1.iv",
            title: "0 below 1 and 1/2 at 1, probabilistic sum base",
            generator: zero_then(r(1, 2)),
            op: Some("prob_sum"),
            variant: Variant::Plain,
            expected: "I1 = I2 = ∅, I3 = [1/2,3/4), no hits; certified associative; T = 0 on [0,1)², 1 otherwise",
            probe: Probe::TwoArgument {
                grid: 10,
                formula: two_valued,
                obstruction: Some([
                    RangeSet::empty(),
                    RangeSet::empty(),
                    RangeSet::interval(Interval::closed_open(r(1, 2), r(3, 4))),
                ]),
            },
        },
        Example {
            id: "remark3.2",
            title: "g1 with f(2/5) = 1/5 and f(3/5) = 2/5, not right-continuous",
            generator: remark_generator(),
            op: None,
            variant: Variant::Plain,
            expected: "G_M(2/5) = 2/5 but f(f⁽⁻¹⁾(2/5)) = 1/5",
            probe: Probe::NotRightContinuous { at: r(2, 5), rounded: r(2, 5), composed: r(1, 5) },
        },
        Example {
            id: "counterexample.product",
            title: "seven-point range, product base",
            generator: floor_step(&rs(&[(0, 1), (19, 100), (1, 5), (2, 5), (1, 2), (9, 10), (1, 1)])),
            op: Some("product"),
            variant: Variant::Plain,
            expected: "non-associative: (9/10, 1/2, 2/5) gives 1/5 ≠ 19/100, and 19/100 lies in 𝔗₁ ∩ M",
            probe: Probe::Counterexample {
                witness: [r(9, 10), r(1, 2), r(2, 5)],
                lhs: r(1, 5),
                rhs: r(19, 100),
                hit: r(19, 100),
            },
        },
    ]
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub claim: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub rows: Vec<String>,
}

#[derive(Serialize)]
pub struct ExampleDoc {
    pub id: &'static str,
    pub title: &'static str,
    pub expected: &'static str,
    pub generator: GeneratorDoc<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub op: Option<&'static str>,
    pub variant: Variant,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionDoc<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionDoc<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictDoc<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleDoc<Rational>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl ExampleDoc {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

#[derive(Serialize)]
struct ExamplesDoc {
    schema_version: u32,
    command: &'static str,
    examples: Vec<ExampleDoc>,
}

fn check(claim: impl Into<String>, expected: impl Display, actual: impl Display) -> Check {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    Check { claim: claim.into(), ok: expected == actual, expected, actual }
}

fn list(values: &[Rational]) -> String {
    let inner: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(", "))
}

fn gaps_text(gaps: impl IntoIterator<Item = (Rational, Rational, bool)>) -> String {
    let parts: Vec<String> = gaps
        .into_iter()
        .map(|(b, d, b_in_m)| format!("[{b},{d}] ({})", if b_in_m { "b∈M" } else { "b∉M" }))
        .collect();
    parts.join(", ")
}

fn case_value(cases: &[(Interval<Rational>, Rational)], v: &Rational) -> Rational {
    cases.iter().find(|(iv, _)| iv.contains(v)).map(|(_, d)| d.clone()).unwrap_or_else(|| v.clone())
}

fn grid(n: i64) -> Vec<Rational> {
    (0..=n).map(|k| r(k, n)).collect()
}

pub(crate) fn run(config: &RunConfig) -> Result<(i32, String), CliError> {
    let all = examples_registry();
    let chosen: Vec<&Example> = match &config.example_id {
        Some(id) => vec![all.iter().find(|e| e.id == id).ok_or_else(|| CliError::UnknownExample(id.clone()))?],
        None => all.iter().collect(),
    };
    let docs = chosen.into_iter().map(|e| evaluate(e, config)).collect::<Result<Vec<_>, _>>()?;
    let code = if docs.iter().all(ExampleDoc::passed) { 0 } else { 3 };
    Ok((code, to_json(&ExamplesDoc { schema_version: SCHEMA_VERSION, command: "examples", examples: docs })))
}

/// Run one example and record its checks.
pub fn evaluate(ex: &Example, config: &RunConfig) -> Result<ExampleDoc, CliError> {
    let mut doc = ExampleDoc {
        id: ex.id,
        title: ex.title,
        expected: ex.expected,
        generator: (&ex.generator).into(),
        op: ex.op,
        variant: ex.variant,
        mode: None,
        decomposition: None,
        obstruction: None,
        verdict: None,
        oracle: None,
        tables: Vec::new(),
        checks: Vec::new(),
    };
    let op = ex.op.map(|id| registry_get::<Rational>(id).expect("catalog ops are registered"));
    let f = &ex.generator;
    let internal = |e: &dyn Display| CliError::Internal(format!("{}: {e}", ex.id));

    match &ex.probe {
        Probe::Decomposition { m, gaps, c, e, f: f_set } => {
            let dec = decompose(f).map_err(|e| internal(&e))?;
            doc.checks.push(check("M", m, &dec.m));
            doc.checks.push(check(
                "gaps",
                gaps_text(gaps.iter().cloned()),
                gaps_text(dec.gaps.iter().map(|g| (g.b.clone(), g.d.clone(), g.b_in_m))),
            ));
            doc.checks.push(check("C", list(c), list(&dec.points_c)));
            doc.checks.push(check("E", list(e), list(&dec.e)));
            doc.checks.push(check("F", list(f_set), list(&dec.f)));
            doc.decomposition = Some((&dec).into());
        }
        Probe::Rounding { cases } => {
            let dec = decompose(f).map_err(|e| internal(&e))?;
            let probes = grid(20);
            let rows: Vec<String> = probes.iter().map(|x| format!("{x} -> {}", dec.g_m(x))).collect();
            let expected: Vec<String> = probes.iter().map(|x| format!("{x} -> {}", case_value(cases, x))).collect();
            let mismatches: Vec<&String> = rows.iter().filter(|row| !expected.contains(row)).collect();
            doc.checks.push(check("G_M at k/20, k = 0..20", "all match", mismatch_text(&mismatches)));
            doc.tables.push(Table { name: "G_M".into(), rows });
        }
        Probe::Otimes { pairs, cases } => {
            let dec = decompose(f).map_err(|e| internal(&e))?;
            let op = op.as_ref().expect("otimes examples name an op");
            let mut rows = Vec::new();
            let mut mismatches = Vec::new();
            for (x, y) in pairs {
                let got = dec.otimes(op, x, y).map_err(|e| internal(&e))?;
                let want = case_value(cases, &op.apply(x, y));
                let row = format!("{x} ⊗ {y} = {got}");
                if got != want {
                    mismatches.push(format!("{row} (expected {want})"));
                }
                rows.push(row);
            }
            doc.checks.push(check(format!("⊗ at {} pairs", pairs.len()), "all match", mismatch_text(&mismatches)));
            doc.tables.push(Table { name: "otimes".into(), rows });
        }
        Probe::TwoArgument { grid: n, formula, obstruction } => {
            let op = op.expect("two-argument examples name an op");
            let c = certify_all(f, &op, config)?;
            record_certified(&mut doc, &c);
            doc.checks.push(check("verdict", "certified-associative", c.verdict.label()));
            if let Some([t1, t2, t3]) = obstruction {
                let report = c.obstruction.as_ref().ok_or_else(|| internal(&"range is not finite"))?;
                doc.checks.push(check("T1", t1, &report.t1));
                doc.checks.push(check("T2", t2, &report.t2));
                doc.checks.push(check("T3", t3, &report.t3));
                doc.checks.push(check("hits", 0, report.hits.len()));
            }
            let t = GeneratedOp::new(f.clone(), op, ex.variant).map_err(generated_error)?;
            let points = grid(*n);
            let mut rows = Vec::new();
            let mut mismatches = Vec::new();
            for x in &points {
                let mut row = Vec::new();
                for y in &points {
                    let got = t.t_eval(x, y);
                    let want = formula(x, y);
                    if got != want {
                        mismatches.push(format!("T({x},{y}) = {got}, expected {want}"));
                    }
                    row.push(got.to_string());
                }
                rows.push(format!("x={x}: {}", row.join(" ")));
            }
            let claim = format!("T against its closed form on a {0}×{0} grid", n + 1);
            doc.checks.push(check(claim, "all match", mismatch_text(&mismatches)));
            doc.tables.push(Table { name: format!("T at (i/{n}, j/{n})"), rows });
        }
        Probe::Agreement => {
            let op = op.expect("agreement examples name an op");
            let c = certify_all(f, &op, config)?;
            record_certified(&mut doc, &c);
            let t = GeneratedOp::new(f.clone(), op, ex.variant).map_err(generated_error)?;
            let points = oracle_points(f, config, &pulled_back_witness(f, &c.verdict));
            let oracle = t.brute_force_oracle(&points).map_err(generated_error)?;
            let sampled = oracle.associative_on_sample();
            let certified = match c.verdict.is_associative() {
                Some(true) => "certified associative",
                Some(false) => "certified non-associative",
                None => "unknown",
            };
            let actual = format!(
                "certifier: {certified}; oracle: {} on {} triples",
                if sampled { "associative" } else { "witness found" },
                oracle.triples
            );
            // An unknown verdict claims nothing, so only a decided one can clash.
            let ok = c.verdict.is_associative().is_none_or(|a| a == sampled);
            doc.checks.push(Check {
                claim: "certifier and oracle do not contradict each other".into(),
                expected: "consistent".into(),
                actual,
                ok,
            });
            doc.oracle = Some((&oracle).into());
        }
        Probe::NotRightContinuous { at, rounded, composed } => {
            doc.checks.push(check("right-continuous", false, f.validate().right_continuous));
            let m = f.range_of().map_err(|e| internal(&e))?;
            let g = m.least_at_or_above(at).ok_or_else(|| internal(&"empty range above the probe"))?;
            doc.checks.push(check(format!("G_M({at})"), rounded, g));
            let fx = f.eval(&f.pseudo_inverse(at)).map_err(|e| internal(&e))?;
            doc.checks.push(check(format!("f(f⁽⁻¹⁾({at}))"), composed, fx));
        }
        Probe::Counterexample { witness: [x, y, z], lhs, rhs, hit } => {
            let op = op.expect("counterexample names an op");
            let c = certify_all(f, &op, config)?;
            record_certified(&mut doc, &c);
            doc.checks.push(check("verdict", "certified-non-associative", c.verdict.label()));
            let t = GeneratedOp::new(f.clone(), op, ex.variant).map_err(generated_error)?;
            doc.checks.push(check(format!("T(T({x},{y}),{z})"), lhs, t.t_eval(&t.t_eval(x, y), z)));
            doc.checks.push(check(format!("T({x},T({y},{z}))"), rhs, t.t_eval(x, &t.t_eval(y, z))));
            let in_t1 = c
                .obstruction
                .as_ref()
                .is_some_and(|o| o.hits.iter().any(|h| h.part == Part::T1 && h.value == *hit));
            doc.checks.push(check(format!("{hit} ∈ T1 ∩ M"), true, in_t1));
            let oracle = t.brute_force_oracle(&oracle_points(f, config, &[])).map_err(generated_error)?;
            doc.checks.push(check("oracle finds a witness", true, !oracle.associative_on_sample()));
            doc.oracle = Some((&oracle).into());
        }
    }
    Ok(doc)
}

fn record_certified(doc: &mut ExampleDoc, c: &Certified) {
    doc.mode = Some(mode_name(&c.dec));
    doc.decomposition = Some((&c.dec).into());
    doc.obstruction = c.obstruction.as_ref().map(Into::into);
    doc.verdict = Some((&c.verdict).into());
}

fn mismatch_text<T: Display>(mismatches: &[T]) -> String {
    if mismatches.is_empty() {
        "all match".into()
    } else {
        let shown: Vec<String> = mismatches.iter().take(5).map(ToString::to_string).collect();
        format!("{} mismatches: {}", mismatches.len(), shown.join("; "))
    }
}
