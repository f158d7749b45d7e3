//! Exact Hall algebras over finite fields.
//!
//! Representations of small acyclic quivers over `F_q`, their Ringel-Hall
//! bialgebra, two-periodic complexes of projectives and the localized Hall
//! algebra built from them, with brute-force checks of the identities that
//! tie these together.

pub mod category;
pub mod complex;
pub mod dh;
pub mod error;
pub mod field;
pub mod hall;
pub mod lincomb;
pub mod matrix;
pub mod quiver;
pub mod rep;
pub mod surd;
pub mod verify;

pub use category::{CountStore, IsoLabel, RepCategory};
pub use complex::{ComplexCategory, ComplexClass, ComplexLiteral, Decomposition, TwoComplex};
pub use dh::{DHAlgebra, DHElement, DHTerm, DoubleConvention, DoublePattern, DoubleReport};
pub use error::{HallError, Result};
pub use hall::{CoproductVariant, HallAlgebra, HallElement, HallSym, PairingVariant, TensorElement};
pub use field::{Fq, GaloisField, SUPPORTED_ORDERS};
pub use lincomb::LinComb;
pub use matrix::{enumerate_vectors, Budget, FieldMatrix, Solution, DEFAULT_BUDGET};
pub use quiver::{KClass, Quiver};
pub use rep::{Morphism, RepObject};
pub use surd::{Rational, Surd};

/// Coefficients with arbitrary-precision rational components.
pub type Coeff = Surd<num_rational::BigRational>;

/// Coefficients with machine-word rational components, for small computations.
pub type Coeff64 = Surd<num_rational::Rational64>;
