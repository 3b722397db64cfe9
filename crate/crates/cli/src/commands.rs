use assocgen::certifier::{certify_decomposition, obstruction};
use assocgen::generated::sample_grid;
use assocgen::structure::decompose;
use assocgen::wire::{DecompositionDoc, GeneratorDoc, ObstructionDoc, OracleDoc, VerdictDoc, Q, SCHEMA_VERSION};
use assocgen::{
    CertError, CertifyOptions, Decomposition, GeneratedError, GeneratedOp, Mode, ObstructionReport, OpDescriptor, OpError,
    PiecewiseFn, Rational, Scalar, Variant, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{catalog, load_generator, load_op, to_json, CliError, Command, RunConfig};

/// Random points added to the oracle grid.
const RANDOM_POINTS: usize = 8;

pub(crate) fn dispatch(config: &RunConfig) -> Result<(i32, String), CliError> {
    match config.command {
        Command::Decompose => decompose_cmd(config),
        Command::Certify => certify_cmd(config),
        Command::Oracle => oracle_cmd(config),
        Command::Eval => eval_cmd(config),
        Command::Report => report_cmd(config),
        Command::Examples => catalog::run(config),
    }
}

pub(crate) fn verdict_code(v: &Verdict) -> i32 {
    match v.is_associative() {
        Some(true) => 0,
        Some(false) => 1,
        None => 2,
    }
}

pub(crate) fn mode_name(dec: &Decomposition) -> &'static str {
    match Mode::of(dec) {
        Mode::Unit => "unit",
        Mode::Subunit => "subunit",
    }
}

pub(crate) fn cert_error(e: CertError) -> CliError {
    match e {
        CertError::OutsideCarrier(_) => CliError::OpMismatch(e.to_string()),
        e => CliError::Internal(e.to_string()),
    }
}

pub(crate) fn generated_error(e: GeneratedError) -> CliError {
    match e {
        GeneratedError::Op(OpError::NotInCarrier(_)) | GeneratedError::PatchNeedsTNorm(_) => {
            CliError::OpMismatch(e.to_string())
        }
        e => CliError::Internal(e.to_string()),
    }
}

/// Decomposition, exact obstruction sets (finite ranges only) and verdict.
pub(crate) struct Certified {
    pub dec: Decomposition,
    pub obstruction: Option<ObstructionReport>,
    pub verdict: Verdict,
}

pub(crate) fn certify_all(f: &PiecewiseFn, op: &OpDescriptor, config: &RunConfig) -> Result<Certified, CliError> {
    let dec = decompose(f).map_err(|e| CliError::Internal(e.to_string()))?;
    let options = CertifyOptions {
        max_depth: config.refinement_depth,
        commutative_reduction: config.commutative_reduction,
        ..Default::default()
    };
    let verdict = certify_decomposition(&dec, op, &options).map_err(cert_error)?;
    let obstruction = if dec.m.is_finite() {
        Some(obstruction(&dec, op, config.commutative_reduction).map_err(cert_error)?)
    } else {
        None
    };
    Ok(Certified { dec, obstruction, verdict })
}

/// The density grid, seeded random points and `extra`.
pub(crate) fn oracle_points(f: &PiecewiseFn, config: &RunConfig, extra: &[Rational]) -> Vec<Rational> {
    let mut points = sample_grid(f, config.grid_density);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..RANDOM_POINTS {
        let d = rng.gen_range(1..=64);
        points.push(Rational::from_frac(rng.gen_range(0..=d), d));
    }
    points.extend(extra.iter().cloned());
    points.sort();
    points.dedup();
    points
}

/// A certified `⊗` witness pulled back to the domain of `T`.
pub(crate) fn pulled_back_witness(f: &PiecewiseFn, verdict: &Verdict) -> Vec<Rational> {
    match verdict {
        Verdict::CertifiedNonAssociative { witness: (x, y, z), .. } => {
            [x, y, z].iter().map(|v| f.pseudo_inverse(v)).collect()
        }
        _ => Vec::new(),
    }
}

#[derive(Serialize)]
struct DecomposeDoc {
    schema_version: u32,
    command: &'static str,
    mode: &'static str,
    decomposition: DecompositionDoc<Rational>,
}

fn decompose_cmd(config: &RunConfig) -> Result<(i32, String), CliError> {
    let f = load_generator(config)?;
    let dec = decompose(&f).map_err(|e| CliError::Internal(e.to_string()))?;
    let doc = DecomposeDoc {
        schema_version: SCHEMA_VERSION,
        command: "decompose",
        mode: mode_name(&dec),
        decomposition: (&dec).into(),
    };
    Ok((0, to_json(&doc)))
}

#[derive(Serialize)]
struct CertifyDoc {
    schema_version: u32,
    command: &'static str,
    op: String,
    mode: &'static str,
    verdict: VerdictDoc<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    obstruction: Option<ObstructionDoc<Rational>>,
}

fn certify_cmd(config: &RunConfig) -> Result<(i32, String), CliError> {
    let f = load_generator(config)?;
    let op = load_op(config)?;
    let c = certify_all(&f, &op, config)?;
    let doc = CertifyDoc {
        schema_version: SCHEMA_VERSION,
        command: "certify",
        op: op.id.clone(),
        mode: mode_name(&c.dec),
        verdict: (&c.verdict).into(),
        obstruction: c.obstruction.as_ref().map(Into::into),
    };
    Ok((verdict_code(&c.verdict), to_json(&doc)))
}

#[derive(Serialize)]
struct OracleCmdDoc {
    schema_version: u32,
    command: &'static str,
    op: String,
    variant: Variant,
    grid_density: u32,
    seed: u64,
    oracle: OracleDoc<Rational>,
}

fn oracle_cmd(config: &RunConfig) -> Result<(i32, String), CliError> {
    let f = load_generator(config)?;
    let op = load_op(config)?;
    let t = GeneratedOp::new(f.clone(), op.clone(), config.variant).map_err(generated_error)?;
    let result = t.brute_force_oracle(&oracle_points(&f, config, &[])).map_err(generated_error)?;
    let doc = OracleCmdDoc {
        schema_version: SCHEMA_VERSION,
        command: "oracle",
        op: op.id.clone(),
        variant: config.variant,
        grid_density: config.grid_density,
        seed: config.seed,
        oracle: (&result).into(),
    };
    Ok((if result.associative_on_sample() { 0 } else { 1 }, to_json(&doc)))
}

#[derive(Serialize)]
struct EvalRow {
    x: Q<Rational>,
    y: Q<Rational>,
    value: Q<Rational>,
}

#[derive(Serialize)]
struct EvalDoc {
    schema_version: u32,
    command: &'static str,
    op: String,
    variant: Variant,
    values: Vec<EvalRow>,
}

fn parse_point(text: &str) -> Result<(Rational, Rational), CliError> {
    let bad = || CliError::BadPoint(format!("`{text}` (expected \"x,y\" with rationals p/q in [0,1])"));
    let (x, y) = text.split_once(',').ok_or_else(bad)?;
    let parse = |s: &str| Rational::parse_text(s).map_err(|_| bad());
    let (x, y) = (parse(x)?, parse(y)?);
    let unit = |v: &Rational| *v >= Rational::from_int(0) && *v <= Rational::from_int(1);
    if !unit(&x) || !unit(&y) {
        return Err(bad());
    }
    Ok((x, y))
}

fn eval_cmd(config: &RunConfig) -> Result<(i32, String), CliError> {
    if config.points.is_empty() {
        return Err(CliError::Usage("eval needs at least one --point x,y".into()));
    }
    let points = config.points.iter().map(|p| parse_point(p)).collect::<Result<Vec<_>, _>>()?;
    let f = load_generator(config)?;
    let op = load_op(config)?;
    let t = GeneratedOp::new(f, op.clone(), config.variant).map_err(generated_error)?;
    let values = points
        .into_iter()
        .map(|(x, y)| {
            let value = t.try_eval(&x, &y).map_err(generated_error)?;
            Ok(EvalRow { x: Q(x), y: Q(y), value: Q(value) })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let doc = EvalDoc { schema_version: SCHEMA_VERSION, command: "eval", op: op.id.clone(), variant: config.variant, values };
    Ok((0, to_json(&doc)))
}

#[derive(Serialize)]
struct CrossCheck {
    certified_associative: Option<bool>,
    oracle_associative_on_sample: bool,
    consistent: bool,
}

#[derive(Serialize)]
struct ReportDoc {
    schema_version: u32,
    command: &'static str,
    generator: GeneratorDoc<Rational>,
    op: String,
    variant: Variant,
    mode: &'static str,
    decomposition: DecompositionDoc<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    obstruction: Option<ObstructionDoc<Rational>>,
    verdict: VerdictDoc<Rational>,
    oracle: OracleDoc<Rational>,
    cross_check: CrossCheck,
}

fn report_cmd(config: &RunConfig) -> Result<(i32, String), CliError> {
    let f = load_generator(config)?;
    let op = load_op(config)?;
    let c = certify_all(&f, &op, config)?;
    let t = GeneratedOp::new(f.clone(), op.clone(), config.variant).map_err(generated_error)?;
    let points = oracle_points(&f, config, &pulled_back_witness(&f, &c.verdict));
    let oracle = t.brute_force_oracle(&points).map_err(generated_error)?;
    let certified = c.verdict.is_associative();
    let sample = oracle.associative_on_sample();
    let doc = ReportDoc {
        schema_version: SCHEMA_VERSION,
        command: "report",
        generator: (&f).into(),
        op: op.id.clone(),
        variant: config.variant,
        mode: mode_name(&c.dec),
        decomposition: (&c.dec).into(),
        obstruction: c.obstruction.as_ref().map(Into::into),
        verdict: (&c.verdict).into(),
        oracle: (&oracle).into(),
        cross_check: CrossCheck {
            certified_associative: certified,
            oracle_associative_on_sample: sample,
            consistent: certified == Some(sample),
        },
    };
    Ok((verdict_code(&c.verdict), to_json(&doc)))
}
