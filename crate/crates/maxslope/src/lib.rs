//! Validated-numerics toolkit built around the Maximal Slope Principle (MSP):
//! if `|f'| <= M` on `[a, b]` and a rigorous lower bound `l > 0` of `f` is known
//! at a point `t`, then `f > 0` on `(t - l/M, t]`. Iterating downward from `b`
//! yields a finite, machine-checkable positivity certificate for `f` on `[a, b]`.
//!
//! The crate has two tiers:
//!
//! * an exact tier ([`rigor`], [`bernd`], [`msp`], [`paperfns`]) where every
//!   number is a dyadic `m * 2^e` or a big rational, interval endpoints are
//!   rounded outward in software, and certificates replay bit-exactly;
//! * an approximation tier ([`harmonic`] and the gallery helpers) generic over
//!   the floating scalar via `num_traits::Float`, used for numerical
//!   confirmation at stated tolerances rather than proof.

pub mod bernd;
pub mod harmonic;
pub mod msp;
pub mod paperfns;
pub mod report;
pub mod rigor;

pub use bernd::{CoeffTable, LinLog2, Sign};
pub use msp::{Certificate, Registry, RigorFn, SlopeBound};
pub use rigor::{Dyadic, Interval, Precision, Rational, Rounding};

/// Concrete scalar used by the approximation tier throughout the test suite
/// and the CLI. The tier itself is generic over `num_traits::Float`.
pub type Real = f64;
