//! Exact computer algebra for noncommutative formal structures.
//!
//! The crate is organised bottom-up:
//!
//! - [`ncpoly`]: rationals, free associative algebra, commutative polynomials,
//!   sections over a basic open `X(f)`, and the text polynomial grammar.
//! - [`hallbasis`]: the ordered bracket basis of the free Lie algebra, word
//!   expansions and bracket normalisation.
//! - [`pbw`]: PBW normal forms `Σ [[f_λ]] M_λ`, the commutator filtration,
//!   truncated products, bilinear differential operators `C_{λμ}^ν` and
//!   truncated formal sections over basic opens.
//! - [`quiver`]: quivers, path algebras, Euler forms, extended quivers and the
//!   universal localization data attached to them.
//! - [`repscheme`]: generic matrices and the coordinate ring of `rep_n A`.
//! - [`rootalg`]: presentations of the n-th root algebra and the universal
//!   correspondences with matrix-valued maps.
//! - [`strata`]: partitions, substrata, tilde representations, stability and
//!   local quiver settings.
//! - [`cli`] and [`selftest`]: the command line front end and the acceptance
//!   checks it runs.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod hallbasis;
pub mod linalg;
pub mod matrix;
pub mod ncpoly;
pub mod pbw;
pub mod quiver;
pub mod repscheme;
pub mod rootalg;
pub mod sample;
pub mod selftest;
pub mod strata;

pub use error::{Error, Result};
pub use ncpoly::{CommPoly, LocalizedElement, NCPoly, Rational, Word};
