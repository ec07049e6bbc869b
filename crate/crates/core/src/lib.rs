//! Exact discriminants of Hermitian forms over imaginary quadratic fields,
//! and a rule engine that derives unitary discriminants of characters from
//! character-theoretic facts.
//!
//! The modules build on each other bottom-up:
//!
//! * [`symbols`]: places of the rationals, square classes, Legendre,
//!   Kronecker and Hilbert symbols.
//! * [`quadfield`]: the character field `Q(sqrt(-d))`, prime splitting and
//!   norm membership.
//! * [`brauer`]: order-two Brauer classes over `Q` as ramification sets.
//! * [`hermforms`]: Hermitian Gram matrices, discriminants, discriminant
//!   algebras and the transfer to quadratic forms.
//! * [`deduce`]: fact sheets and the deduction engine.
//! * [`cli`]: fact-file ingestion, reports and the `udisc` commands.

pub mod arith;
pub mod brauer;
pub mod cli;
pub mod deduce;
pub mod error;
pub mod hermforms;
pub mod quadfield;
pub mod symbols;

pub use brauer::BrauerClassQ;
pub use error::{Error, Result};
pub use hermforms::{DiagQuadFormQ, HermitianGram};
pub use quadfield::{ImagQuadField, PrimeBehavior, QuadElem};
pub use symbols::{Place, SquareClassQ};
