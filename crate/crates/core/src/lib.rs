//! Exact-arithmetic library for generalized pseudo-quadratic forms over
//! division rings: admissible pairs, twisted coset arithmetic, polar-space
//! enumeration over finite fields, quotient and cover constructions, and
//! the constructive classification of embedded polar spaces.
//!
//! Three coefficient systems are supported, all exact: finite fields
//! F_{p^n} as `F_p[x]` modulo a fixed irreducible, the rational function
//! field F_2(t), and the rational quaternions (-1, -1 / Q). Every value is
//! immutable after construction and every operation is a pure function.

pub mod admissible;
pub mod classify;
pub mod error;
pub mod fixtures;
pub mod formfile;
pub mod forms;
pub mod linalg;
pub mod polar;
pub mod quotcov;
pub mod sampler;
pub mod scalars;
pub mod verify;

pub use admissible::{AdmissiblePair, ClosedSubgroup, CosetElement};
pub use error::{Error, Result};
pub use forms::{GenPseudoQuadraticForm, SesquilinearForm, VectorSpaceSpec};
pub use polar::{PolarSpace, ProjectivePoint};
pub use scalars::{AntiAutoSpec, ArithOp, RingElement, RingSpec};
