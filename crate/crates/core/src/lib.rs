//! Exact computational algebra for trace functionals on finite-dimensional
//! algebras and the combinatorics that comes with them:
//!
//! * pseudocharacters (central functionals with vanishing S_{d+1}), their
//!   characteristic polynomials, Cayley-Hamilton defect, kernels and
//!   quotients;
//! * generalized matrix algebras with structural modules and bilinear
//!   pairings, reducibility ideals, Ext dimensions, explicit extensions,
//!   adapted embeddings, and trace-compatible involutions;
//! * Jordan types of nilpotent matrices, the dominance order, and normal
//!   forms over artinian local rings and the localized polynomial ring;
//! * refinement combinatorics for filtered phi-modules and unramified
//!   Satake parameters.
//!
//! All arithmetic is exact: rationals with big integers, odd prime
//! fields, artinian local algebras over either, and the localized
//! polynomial ring k[t]_(t).

pub mod algebra;
pub mod coeff;
pub mod error;
pub mod expr;
pub mod field;
pub mod gma;
pub mod io;
pub mod linalg;
pub mod nilpotent;
pub mod poly;
pub mod pseudochar;
pub mod refine;

pub use error::{Error, Result};
