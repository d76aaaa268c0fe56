//! Exact-rational kernel for counting rational and elliptic curves.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere. The crate has three layers:
//!
//! - a substrate of exact scalars ([`rat`]) and sparse truncated
//!   multivariate power series with validity caps ([`series`]);
//! - the geometry: intersection numbers of boundary strata on the moduli of
//!   stable 4-pointed genus-1 curves ([`strata`]), and the differential
//!   operators of the composition axiom ([`feynman`]);
//! - the counts: genus-0 invariants of projective spaces via the
//!   associativity equations ([`genus0`]), genus-1 invariants via boundary
//!   relations ([`genus1`]), and plane Severi degrees of every genus via the
//!   contact recursion ([`severi`]).
//!
//! Independent computation paths for the same numbers are cross-checked in
//! the test suites; the `tests/acceptance.rs` target runs the headline
//! criteria end to end.

pub mod comb;
pub mod feynman;
pub mod genus0;
pub mod genus1;
pub mod rat;
pub mod severi;
pub mod series;
pub mod strata;

pub use rat::Rat;
pub use series::{Expo, SeriesError, TruncSeries, VarSpec};
