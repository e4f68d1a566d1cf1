//! Exact genus-0 Gromov–Witten invariants of `Pⁿ` and of `Pⁿ` blown up at a
//! point, computed by the Kontsevich–Manin reconstruction from three-point
//! initial data.
//!
//! The algebra is generic over a [`Scalar`] field; the aliases below fix it
//! to arbitrary-precision rationals, which is what every table and cache
//! entry is computed with.

pub mod checks;
pub mod enumerative;
pub mod geometry;
pub mod invariant;
pub mod linalg;
pub mod memo;
pub mod published;
pub mod reconstruction;
pub mod scalar;
pub mod session;

pub use geometry::{BasisIndex, CohClass, CurveClass, Family, Geometry, GeometryError, Space};
pub use invariant::{canonicalize, EvalResult, InvariantKey};
pub use reconstruction::{EngineError, EngineStats, Level};
pub use scalar::Scalar;

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integers.
pub type Integer = num_bigint::BigInt;

/// The reconstruction engine over exact rationals.
pub type Engine = reconstruction::Engine<Rational>;
pub type MemoStore = memo::MemoStore<Rational>;
pub type Relation = reconstruction::Relation<Rational>;
pub type Workbench = session::Workbench<Rational>;
