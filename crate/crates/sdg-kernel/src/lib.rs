//! Exact nilpotent calculus with an executable identity suite.
//!
//! The pieces fit together like this:
//!
//! * [`algebra`] — truncated polynomial rings ([`Jet`]) and multi-generator
//!   square-zero rings ([`SquareZero`]), over floats or exact rationals,
//!   nestable. Evaluating anything smooth at `x0 + t` with `t` a jet
//!   generator yields Taylor coefficients with no step-size error.
//! * [`smooth`] — test functions as expression trees evaluable over any
//!   of those rings, with symbolic and jet differentiation.
//! * [`quadrature`] — Gauss-Legendre product rules for intervals,
//!   circles, spheres, and balls, plus the planar divergence-theorem
//!   harness.
//! * [`distribution`] — compactly supported distributions (Diracs,
//!   intervals, spheres, balls, heat kernels) as expression trees paired
//!   against test functions; pairing a family at a jet-valued time gives
//!   exact time derivatives of the pairing.
//! * [`flows`] — vector fields as square-zero actions, formal flows via
//!   the symmetric collapse, truncated exponentials of linear operators,
//!   conjugation, and change of variables.
//! * [`evolution`] — the wave, heat, and transport fundamental solutions
//!   built from those parts, including the nilpotent-time heat state and
//!   its column-diagram rendering.
//! * [`parse`] / [`report`] — the expression grammar and the
//!   identity-verification suite behind the `sdg` binary.
//!
//! Each major capability has a runnable demo under `examples/`; the
//! acceptance gate lives in `tests/acceptance.rs`.

pub mod algebra;
pub mod distribution;
pub mod evolution;
pub mod flows;
pub mod parse;
pub mod quadrature;
pub mod report;
pub mod smooth;

pub use algebra::{Algebra, AlgebraError, Jet, Rat, SquareZero, SumZeroQuotient};
pub use distribution::{pair, pair_jet_time, Distribution, PairConfig, TimeFamily};
pub use flows::VectorField;
pub use smooth::TestFunction;

/// Jets with plain floating-point coefficients, the workhorse type.
pub type Jet64 = Jet<f64>;
/// Jets with exact rational coefficients.
pub type JetRat = Jet<Rat>;
