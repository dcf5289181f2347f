//! Exact checks for codimension counts of singular hypersurface loci and for
//! the multiplicity arithmetic that excludes supermaximal singularities.
//!
//! The linear algebra is generic over [`scalar::Field`]; inequality and graph
//! arithmetic over [`scalar::ExactField`]; closed-form counts over
//! [`codim::CodimInt`]. The aliases below fix the types every decision is made in.

#![allow(clippy::needless_range_loop)]

pub mod codim;
pub mod excluder;
pub mod polyspace;
pub mod respath;
pub mod scalar;
pub mod serial;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Exact rationals, the working field for ranks and inequalities.
pub type Rational = BigRational;
/// Arbitrary-precision integers for counts and `r`-coefficients.
pub type Integer = BigInt;
/// Integer type of the closed-form codimension formulas.
pub type Codim = BigInt;

pub type RationalPoint = polyspace::ProjectivePoint<Rational>;
pub type RationalSubspace = polyspace::LinearSubspace<Rational>;
pub type RationalConditionMatrix = polyspace::ConditionMatrix<Rational>;
pub type RationalThetaFamily = polyspace::ThetaFamily<Rational>;
pub type CodimSweepReport = codim::SweepReport<Codim>;
pub type RationalInstance = excluder::NFInstance<Rational>;
