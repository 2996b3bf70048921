//! Turaev-Viro state-sum invariants of combinatorial 3-manifolds over an
//! arbitrary spherical fusion category, with the associated TQFT state
//! spaces, cylinder projectors, Drinfeld-center hom spaces, and the extended
//! invariants of manifolds with framed tubes.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalar`], [`matrix`] — exact rational / quadratic-extension / complex
//!   arithmetic and small dense linear algebra;
//! * [`group`], [`category`] — finite groups and validated spherical fusion
//!   category data (`Vec_G`, Fibonacci, user files);
//! * [`trees`] — fusion-tree bases of hom spaces and the structure maps
//!   (cyclic rotation, pairing, composition);
//! * [`diagram`] — evaluation of colored graphs on the sphere, with or
//!   without center-object arcs;
//! * [`complex`] — polytope decompositions of surfaces and 3-manifolds and
//!   the moves M1-M3;
//! * [`statesum`] — state spaces, cell vectors, the Turaev-Viro invariant,
//!   TQFT operators and cylinder projectors;
//! * [`center`] — Drinfeld-center machinery (half-braidings, induction,
//!   averaging projector, colored hom spaces);
//! * [`extended`] — extended surfaces and 3-manifolds with framed tubes;
//! * [`io`], [`oracle`], [`cli`] — file formats, brute-force cross-check
//!   oracles, and the `tv` command-line front end.

pub mod category;
pub mod cli;
pub mod complex;
pub mod center;
pub mod diagram;
pub mod error;
pub mod extended;
pub mod group;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod scalar;
pub mod statesum;
pub mod trees;

pub use category::{builtin_fibonacci, builtin_vec_g, FusionCategory, SimpleIx};
pub use error::{Result, TvError};
pub use scalar::{Backend, Scalar};
