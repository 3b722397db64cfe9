//! Exact construction and certification of associative operations generated
//! by monotone functions on `[0,1]`.
//!
//! The algorithms are generic over an exact [`Scalar`]; the aliases at the
//! crate root fix it to [`Rational`] (`BigRational`).

pub mod base_op;
pub mod certifier;
mod enclosure;
pub mod exact;
pub mod generated;
pub mod generator;
pub mod scalar;
pub mod structure;
pub mod wire;

pub use base_op::{registry_all, registry_get, OpError, OpKind, Side, REGISTRY_IDS};
pub use certifier::{CertError, CertifyOptions, GapRef, Mode, Part};
pub use exact::SetError;
pub use generated::{GeneratedError, Variant};
pub use generator::{Direction, GeneratorError, PieceKind};
pub use scalar::{q, Scalar, ScalarParseError};
pub use structure::StructureError;
pub use wire::WireError;

pub type Rational = num_rational::BigRational;
pub type Interval = exact::Interval<Rational>;
pub type RangeSet = exact::RangeSet<Rational>;
pub type Piece = generator::Piece<Rational>;
pub type PiecewiseFn = generator::PiecewiseFn<Rational>;
pub type OpDescriptor = base_op::OpDescriptor<Rational>;
pub type Gap = structure::Gap<Rational>;
pub type Decomposition = structure::Decomposition<Rational>;
pub type ObstructionReport = certifier::ObstructionReport<Rational>;
pub type Verdict = certifier::Verdict<Rational>;
pub type GeneratedOp = generated::GeneratedOp<Rational>;
pub type OracleResult = generated::OracleResult<Rational>;
