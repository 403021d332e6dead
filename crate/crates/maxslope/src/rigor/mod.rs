//! Exact dyadic/rational arithmetic and interval enclosures of the elementary
//! functions the rest of the crate needs. Everything here is pure and
//! deterministic; no directed-rounding hardware modes are assumed — outward
//! rounding is done in software on big integers.

mod dyadic;
mod elem;
mod interval;

pub use dyadic::{parse_rational, rational_floor_log2_abs, Dyadic};
pub use elem::{atan, constant, cos, log, log2, pi, sin, ConstName};
pub use interval::Interval;

#[allow(unused_imports)]
pub(crate) use dyadic::{ceil_shr, floor_shr};

/// Exact big-integer fraction, reduced to lowest terms with positive
/// denominator (guaranteed by `num_rational`).
pub type Rational = num_rational::BigRational;

/// Rounding direction for operations that lose precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// Working precision, in bits, for rounded operations. Enclosure endpoints
/// carry about this many significant bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    bits: u32,
}

impl Precision {
    pub const MIN_BITS: u32 = 16;

    /// Panics below [`Precision::MIN_BITS`]; front ends validate first.
    pub fn new(bits: u32) -> Self {
        assert!(bits >= Self::MIN_BITS, "precision must be at least 16 bits");
        Precision { bits }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Working precision with extra guard bits for internal series sums.
    pub(crate) fn guarded(self, extra: u32) -> Self {
        Precision {
            bits: self.bits + extra,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum RigorError {
    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("interval endpoints out of order")]
    EmptyInterval,
    #[error("{0} is not a dyadic rational")]
    NotDyadic(Rational),
    #[error("parse error: {0}")]
    Parse(String),
}
