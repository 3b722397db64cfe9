//! JSON documents. Every rational is a `"p/q"` string; JSON numbers are
//! rejected wherever a rational is expected.

use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::base_op::{OpDescriptor, OpError};
use crate::certifier::{Evidence, GapRef, Hit, Mode, ObstructionReport, Part, Verdict};
use crate::exact::{Interval, RangeSet, SetError};
use crate::generated::{OracleResult, OracleWitness};
use crate::generator::{Direction, GeneratorError, Piece, PieceKind, PiecewiseFn};
use crate::scalar::Scalar;
use crate::structure::Decomposition;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum WireError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    Schema(u32),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error("{0}")]
    Invalid(String),
}

/// A rational that serializes as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q<S>(pub S);

impl<S: Scalar> Serialize for Q<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        s.serialize_str(&self.0.to_text())
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Q<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Text<S>(PhantomData<S>);
        impl<S: Scalar> Visitor<'_> for Text<S> {
            type Value = Q<S>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as a \"p/q\" string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q<S>, E> {
                S::parse_text(v).map(Q).map_err(E::custom)
            }
        }
        d.deserialize_str(Text(PhantomData))
    }
}

fn qs<S: Scalar>(v: &[S]) -> Vec<Q<S>> {
    v.iter().cloned().map(Q).collect()
}

fn unq<S>(v: Vec<Q<S>>) -> Vec<S> {
    v.into_iter().map(|q| q.0).collect()
}

fn current_version() -> u32 {
    SCHEMA_VERSION
}

fn check_version(v: u32) -> Result<(), WireError> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(WireError::Schema(v))
    }
}

// ---------------------------------------------------------------- sets

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct IntervalDoc<S: Scalar> {
    pub lo: Q<S>,
    pub hi: Q<S>,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

/// A [`RangeSet`] as its list of components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(transparent)]
pub struct SetDoc<S: Scalar>(pub Vec<IntervalDoc<S>>);

impl<S: Scalar> From<&RangeSet<S>> for SetDoc<S> {
    fn from(set: &RangeSet<S>) -> Self {
        SetDoc(
            set.components()
                .iter()
                .map(|c| IntervalDoc {
                    lo: Q(c.lo.clone()),
                    hi: Q(c.hi.clone()),
                    lo_closed: c.lo_closed,
                    hi_closed: c.hi_closed,
                })
                .collect(),
        )
    }
}

impl<S: Scalar> TryFrom<SetDoc<S>> for RangeSet<S> {
    type Error = WireError;
    fn try_from(doc: SetDoc<S>) -> Result<Self, WireError> {
        let raw = doc
            .0
            .into_iter()
            .map(|c| Interval::new(c.lo.0, c.hi.0, c.lo_closed, c.hi_closed))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RangeSet::normalize(raw)?)
    }
}

// ----------------------------------------------------------- generator

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct PieceDoc<S: Scalar> {
    pub x_lo: Q<S>,
    pub x_hi: Q<S>,
    pub kind: PieceKind,
    pub slope: Q<S>,
    pub intercept: Q<S>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct OverrideDoc<S: Scalar> {
    pub x: Q<S>,
    pub value: Q<S>,
}

/// Generator file. `schema_version` may be omitted on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc<S: Scalar> {
    #[serde(default = "current_version")]
    pub schema_version: u32,
    pub direction: Direction,
    pub pieces: Vec<PieceDoc<S>>,
    pub value_at_1: Q<S>,
    #[serde(default)]
    pub overrides: Vec<OverrideDoc<S>>,
}

impl<S: Scalar> From<&PiecewiseFn<S>> for GeneratorDoc<S> {
    fn from(f: &PiecewiseFn<S>) -> Self {
        GeneratorDoc {
            schema_version: SCHEMA_VERSION,
            direction: f.direction(),
            pieces: f
                .pieces()
                .iter()
                .map(|p| PieceDoc {
                    x_lo: Q(p.x_lo.clone()),
                    x_hi: Q(p.x_hi.clone()),
                    kind: p.kind,
                    slope: Q(p.slope.clone()),
                    intercept: Q(p.intercept.clone()),
                })
                .collect(),
            value_at_1: Q(f.value_at_1().clone()),
            overrides: f
                .overrides()
                .iter()
                .map(|(x, v)| OverrideDoc { x: Q(x.clone()), value: Q(v.clone()) })
                .collect(),
        }
    }
}

impl<S: Scalar> TryFrom<GeneratorDoc<S>> for PiecewiseFn<S> {
    type Error = WireError;
    fn try_from(doc: GeneratorDoc<S>) -> Result<Self, WireError> {
        check_version(doc.schema_version)?;
        let pieces = doc
            .pieces
            .into_iter()
            .map(|p| Piece { x_lo: p.x_lo.0, x_hi: p.x_hi.0, kind: p.kind, slope: p.slope.0, intercept: p.intercept.0 })
            .collect();
        let overrides = doc.overrides.into_iter().map(|o| (o.x.0, o.value.0)).collect();
        Ok(PiecewiseFn::new(doc.direction, pieces, doc.value_at_1.0, overrides)?)
    }
}

pub fn generator_from_json<S: Scalar>(text: &str) -> Result<PiecewiseFn<S>, WireError> {
    serde_json::from_str::<GeneratorDoc<S>>(text)?.try_into()
}

pub fn generator_to_json<S: Scalar>(f: &PiecewiseFn<S>) -> String {
    serde_json::to_string_pretty(&GeneratorDoc::from(f)).expect("documents always serialize")
}

// -------------------------------------------------------------- tables

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct TableDoc<S: Scalar> {
    #[serde(default = "current_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub id: Option<String>,
    pub carrier: Vec<Q<S>>,
    pub table: Vec<Vec<Q<S>>>,
    pub neutral: Q<S>,
}

impl<S: Scalar> TableDoc<S> {
    pub fn into_op(self, default_id: &str) -> Result<OpDescriptor<S>, WireError> {
        check_version(self.schema_version)?;
        let id = self.id.unwrap_or_else(|| default_id.to_string());
        let table = self.table.into_iter().map(unq).collect();
        Ok(OpDescriptor::from_table(id, unq(self.carrier), table, self.neutral.0)?)
    }
}

pub fn table_op_from_json<S: Scalar>(text: &str, default_id: &str) -> Result<OpDescriptor<S>, WireError> {
    serde_json::from_str::<TableDoc<S>>(text)?.into_op(default_id)
}

// -------------------------------------------------------- decomposition

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GapDoc<S: Scalar> {
    pub b: Q<S>,
    pub d: Q<S>,
    #[serde(rename = "b_in_M")]
    pub b_in_m: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DecompositionDoc<S: Scalar> {
    pub schema_version: u32,
    #[serde(rename = "M")]
    pub m: SetDoc<S>,
    pub gaps: Vec<GapDoc<S>>,
    pub leading_gap: bool,
    #[serde(rename = "C")]
    pub c: Vec<Q<S>>,
    #[serde(rename = "E")]
    pub e: Vec<Q<S>>,
    #[serde(rename = "F")]
    pub f: Vec<Q<S>>,
    pub f0: Q<S>,
    pub f1: Q<S>,
}

impl<S: Scalar> From<&Decomposition<S>> for DecompositionDoc<S> {
    fn from(d: &Decomposition<S>) -> Self {
        DecompositionDoc {
            schema_version: SCHEMA_VERSION,
            m: (&d.m).into(),
            gaps: d.gaps.iter().map(|g| GapDoc { b: Q(g.b.clone()), d: Q(g.d.clone()), b_in_m: g.b_in_m }).collect(),
            leading_gap: d.leading_gap,
            c: qs(&d.points_c),
            e: qs(&d.e),
            f: qs(&d.f),
            f0: Q(d.f_of_0.clone()),
            f1: Q(d.f_of_1.clone()),
        }
    }
}

// ---------------------------------------------------------- obstruction

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GapRefDoc {
    Real(usize),
    Tau(TauTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauTag {
    Tau,
}

impl From<GapRef> for GapRefDoc {
    fn from(k: GapRef) -> Self {
        match k {
            GapRef::Real(i) => GapRefDoc::Real(i),
            GapRef::Tau => GapRefDoc::Tau(TauTag::Tau),
        }
    }
}

impl From<GapRefDoc> for GapRef {
    fn from(k: GapRefDoc) -> Self {
        match k {
            GapRefDoc::Real(i) => GapRef::Real(i),
            GapRefDoc::Tau(_) => GapRef::Tau,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeDoc {
    Unit,
    Subunit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartDoc {
    T1,
    T2,
    T3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct HitDoc<S: Scalar> {
    pub value: Q<S>,
    pub part: PartDoc,
    pub y: Q<S>,
    pub k: GapRefDoc,
    pub l: Option<GapRefDoc>,
    pub t: Option<Q<S>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct ObstructionDoc<S: Scalar> {
    pub mode: ModeDoc,
    pub direction: Direction,
    pub t1: SetDoc<S>,
    pub t2: SetDoc<S>,
    pub t3: SetDoc<S>,
    pub t2_skipped: bool,
    pub hits: Vec<HitDoc<S>>,
}

impl<S: Scalar> From<&ObstructionReport<S>> for ObstructionDoc<S> {
    fn from(r: &ObstructionReport<S>) -> Self {
        ObstructionDoc {
            mode: match r.mode {
                Mode::Unit => ModeDoc::Unit,
                Mode::Subunit => ModeDoc::Subunit,
            },
            direction: r.direction,
            t1: (&r.t1).into(),
            t2: (&r.t2).into(),
            t3: (&r.t3).into(),
            t2_skipped: r.t2_skipped,
            hits: r
                .hits
                .iter()
                .map(|h| HitDoc {
                    value: Q(h.value.clone()),
                    part: match h.part {
                        Part::T1 => PartDoc::T1,
                        Part::T2 => PartDoc::T2,
                        Part::T3 => PartDoc::T3,
                    },
                    y: Q(h.y.clone()),
                    k: h.k.into(),
                    l: h.l.map(Into::into),
                    t: h.t.clone().map(Q),
                })
                .collect(),
        }
    }
}

impl<S: Scalar> TryFrom<ObstructionDoc<S>> for ObstructionReport<S> {
    type Error = WireError;
    fn try_from(doc: ObstructionDoc<S>) -> Result<Self, WireError> {
        Ok(ObstructionReport {
            t1: doc.t1.try_into()?,
            t2: doc.t2.try_into()?,
            t3: doc.t3.try_into()?,
            mode: match doc.mode {
                ModeDoc::Unit => Mode::Unit,
                ModeDoc::Subunit => Mode::Subunit,
            },
            direction: doc.direction,
            t2_skipped: doc.t2_skipped,
            hits: doc
                .hits
                .into_iter()
                .map(|h| Hit {
                    value: h.value.0,
                    part: match h.part {
                        PartDoc::T1 => Part::T1,
                        PartDoc::T2 => Part::T2,
                        PartDoc::T3 => Part::T3,
                    },
                    y: h.y.0,
                    k: h.k.into(),
                    l: h.l.map(Into::into),
                    t: h.t.map(|t| t.0),
                })
                .collect(),
        })
    }
}

// -------------------------------------------------------------- verdict

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EvidenceDoc<S: Scalar> {
    Exact { obstruction: ObstructionDoc<S> },
    Enclosure { depth: u32, enclosures: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(tag = "verdict", rename_all = "snake_case", deny_unknown_fields)]
pub enum VerdictDoc<S: Scalar> {
    CertifiedAssociative { evidence: EvidenceDoc<S> },
    CertifiedNonAssociative { witness: [Q<S>; 3], lhs: Q<S>, rhs: Q<S> },
    Unknown { reason: String, depth: u32 },
}

impl<S: Scalar> From<&Verdict<S>> for VerdictDoc<S> {
    fn from(v: &Verdict<S>) -> Self {
        match v {
            Verdict::CertifiedAssociative { evidence } => VerdictDoc::CertifiedAssociative {
                evidence: match evidence {
                    Evidence::Exact(r) => EvidenceDoc::Exact { obstruction: r.into() },
                    Evidence::Enclosure { depth, enclosures } => {
                        EvidenceDoc::Enclosure { depth: *depth, enclosures: *enclosures }
                    }
                },
            },
            Verdict::CertifiedNonAssociative { witness: (x, y, z), lhs, rhs } => VerdictDoc::CertifiedNonAssociative {
                witness: [Q(x.clone()), Q(y.clone()), Q(z.clone())],
                lhs: Q(lhs.clone()),
                rhs: Q(rhs.clone()),
            },
            Verdict::Unknown { reason, depth } => VerdictDoc::Unknown { reason: reason.clone(), depth: *depth },
        }
    }
}

impl<S: Scalar> TryFrom<VerdictDoc<S>> for Verdict<S> {
    type Error = WireError;
    fn try_from(doc: VerdictDoc<S>) -> Result<Self, WireError> {
        Ok(match doc {
            VerdictDoc::CertifiedAssociative { evidence } => Verdict::CertifiedAssociative {
                evidence: match evidence {
                    EvidenceDoc::Exact { obstruction } => Evidence::Exact(obstruction.try_into()?),
                    EvidenceDoc::Enclosure { depth, enclosures } => Evidence::Enclosure { depth, enclosures },
                },
            },
            VerdictDoc::CertifiedNonAssociative { witness: [x, y, z], lhs, rhs } => {
                Verdict::CertifiedNonAssociative { witness: (x.0, y.0, z.0), lhs: lhs.0, rhs: rhs.0 }
            }
            VerdictDoc::Unknown { reason, depth } => Verdict::Unknown { reason, depth },
        })
    }
}

// --------------------------------------------------------------- oracle

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct WitnessDoc<S: Scalar> {
    pub x: Q<S>,
    pub y: Q<S>,
    pub z: Q<S>,
    pub lhs: Q<S>,
    pub rhs: Q<S>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct OracleDoc<S: Scalar> {
    pub associative_on_sample: bool,
    pub witness: Option<WitnessDoc<S>>,
    pub triples: usize,
    pub sample: String,
}

impl<S: Scalar> From<&OracleResult<S>> for OracleDoc<S> {
    fn from(r: &OracleResult<S>) -> Self {
        OracleDoc {
            associative_on_sample: r.associative_on_sample(),
            witness: r.witness.as_ref().map(|w: &OracleWitness<S>| WitnessDoc {
                x: Q(w.x.clone()),
                y: Q(w.y.clone()),
                z: Q(w.z.clone()),
                lhs: Q(w.lhs.clone()),
                rhs: Q(w.rhs.clone()),
            }),
            triples: r.triples,
            sample: r.sample_description.clone(),
        }
    }
}
