//! Exact dyadic numbers `mantissa * 2^exponent` and directed rounding of
//! rationals onto them. Dyadics are the certificate currency: they parse and
//! print exactly, so a certificate replays bit-for-bit on any platform.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Rational, RigorError, Rounding};

/// Exact base-2 number `mantissa * 2^exponent`.
///
/// Canonical form: the mantissa is odd, or the value is zero with exponent
/// zero. Equality and ordering are value equality / the real order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    /// Builds a dyadic from any mantissa/exponent pair, normalizing to
    /// canonical form.
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic {
                mantissa,
                exponent: 0,
            };
        }
        let shift = mantissa.trailing_zeros().unwrap_or(0);
        if shift == 0 {
            Dyadic { mantissa, exponent }
        } else {
            Dyadic {
                mantissa: mantissa >> shift,
                exponent: exponent + shift as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: 0,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: if self.mantissa.is_zero() {
                0
            } else {
                self.exponent
            },
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn scale_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            self.clone()
        } else {
            Dyadic {
                mantissa: self.mantissa.clone(),
                exponent: self.exponent + k,
            }
        }
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << u64::try_from(self.exponent - e).expect("exponent gap");
        let b = &other.mantissa << u64::try_from(other.exponent - e).expect("exponent gap");
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        Dyadic::new(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
        )
    }

    /// Floor of log2 of `|self|`; the value lies in `[2^k, 2^{k+1})`.
    /// Panics on zero.
    pub fn floor_log2_abs(&self) -> i64 {
        assert!(!self.is_zero(), "floor_log2_abs of zero");
        self.mantissa.bits() as i64 - 1 + self.exponent
    }

    /// Directed rounding to at most `bits` significant bits below the scale
    /// `max(1, |self|)`: the result `r` satisfies `r <= self` (`Down`) or
    /// `r >= self` (`Up`) and `|r - self| <= 2^-bits * max(1, |self|)`.
    pub fn round(&self, bits: u32, dir: Rounding) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let e_top = self.floor_log2_abs().max(0);
        let g = e_top - i64::from(bits);
        if self.exponent >= g {
            return self.clone();
        }
        let shift = u64::try_from(g - self.exponent).expect("rounding shift");
        let m = match dir {
            Rounding::Down => floor_shr(&self.mantissa, shift),
            Rounding::Up => ceil_shr(&self.mantissa, shift),
        };
        Dyadic::new(m, g)
    }

    /// Directed rounding of an exact rational to a dyadic, same contract as
    /// [`Dyadic::round`]. This is the only place precision is ever lost.
    pub fn from_rational(x: &Rational, bits: u32, dir: Rounding) -> Self {
        if x.is_zero() {
            return Dyadic::zero();
        }
        let e_top = rational_floor_log2_abs(x).max(0);
        let g = e_top - i64::from(bits);
        // round(x / 2^g) with integer floor/ceil division
        let mut n = x.numer().clone();
        let mut d = x.denom().clone();
        if g <= 0 {
            n <<= u64::try_from(-g).expect("shift");
        } else {
            d <<= u64::try_from(g).expect("shift");
        }
        let m = match dir {
            Rounding::Down => n.div_floor(&d),
            Rounding::Up => n.div_ceil(&d),
        };
        Dyadic::new(m, g)
    }

    /// Directed division by a positive machine integer, keeping roughly
    /// `bits` significant bits. Avoids the rational round-trip on the series
    /// hot path.
    pub(crate) fn div_uint_dir(&self, k: u64, bits: u32, dir: Rounding) -> Self {
        assert!(k > 0);
        if self.is_zero() {
            return self.clone();
        }
        if k.is_power_of_two() {
            return self.scale_pow2(-(k.trailing_zeros() as i64));
        }
        // pre-shift so the raw quotient keeps bits plus guard significant bits
        let want = u64::from(bits) + 66;
        let have = self.mantissa.bits();
        let shift = want.saturating_sub(have);
        let m = &self.mantissa << shift;
        let e = self.exponent - shift as i64;
        let d = BigInt::from(k);
        let q = match dir {
            Rounding::Down => m.div_floor(&d),
            Rounding::Up => m.div_ceil(&d),
        };
        Dyadic::new(q, e).round(bits, dir)
    }

    /// Directed rounding onto the grid `2^g`: the finest dyadics with
    /// exponent at least `g`. Used where the caller controls the granularity
    /// directly (e.g. step rounding in the certifier).
    pub(crate) fn from_rational_granular(x: &Rational, g: i64, dir: Rounding) -> Self {
        if x.is_zero() {
            return Dyadic::zero();
        }
        let mut n = x.numer().clone();
        let mut d = x.denom().clone();
        if g <= 0 {
            n <<= u64::try_from(-g).expect("shift");
        } else {
            d <<= u64::try_from(g).expect("shift");
        }
        let m = match dir {
            Rounding::Down => n.div_floor(&d),
            Rounding::Up => n.div_ceil(&d),
        };
        Dyadic::new(m, g)
    }

    /// Exact conversion; `None` when the rational is not dyadic
    /// (denominator not a power of two).
    pub fn try_from_rational(x: &Rational) -> Option<Self> {
        let d = x.denom();
        let bits = d.bits();
        if d.is_negative() || !(d == &(BigInt::one() << (bits - 1))) {
            return None;
        }
        Some(Dyadic::new(x.numer().clone(), 1 - bits as i64))
    }

    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(
                &self.mantissa << u64::try_from(self.exponent).expect("shift"),
            )
        } else {
            Rational::new(
                self.mantissa.clone(),
                BigInt::one() << u64::try_from(-self.exponent).expect("shift"),
            )
        }
    }

    /// Exact conversion from a finite float (every finite f64 is dyadic).
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Some(Dyadic::new(BigInt::from(sign) * BigInt::from(mant), exp))
    }

    /// Nearest-ish float; large magnitudes clamp to infinities. Used only by
    /// the approximation tier and for display.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // keep 64 leading bits, then scale
        let bits = self.mantissa.bits();
        let (m, e) = if bits > 64 {
            let shift = bits - 64;
            (
                floor_shr(&self.mantissa, shift),
                self.exponent + shift as i64,
            )
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        let mf = m.to_f64().unwrap_or(f64::NAN);
        if e > i32::MAX as i64 {
            return if mf > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        if e < i32::MIN as i64 {
            return 0.0;
        }
        mf * 2f64.powi(e as i32)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mantissa.sign(), other.mantissa.sign()) {
            (a, b) if a != b => a.cmp(&b),
            (num_bigint::Sign::NoSign, _) => Ordering::Equal,
            _ => {
                let e = self.exponent.min(other.exponent);
                let a = &self.mantissa << u64::try_from(self.exponent - e).expect("gap");
                let b = &other.mantissa << u64::try_from(other.exponent - e).expect("gap");
                a.cmp(&b)
            }
        }
    }
}

impl fmt::Display for Dyadic {
    /// Canonical text form `m*2^e`, e.g. `85*2^-8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl FromStr for Dyadic {
    type Err = RigorError;

    /// Accepts `m*2^e`, a plain integer, or `p/q` with `q` a power of two.
    fn from_str(s: &str) -> Result<Self, RigorError> {
        let s = s.trim();
        if let Some((m, e)) = s.split_once("*2^") {
            let mantissa: BigInt = m
                .parse()
                .map_err(|_| RigorError::Parse(format!("bad mantissa in {s:?}")))?;
            let exponent: i64 = e
                .parse()
                .map_err(|_| RigorError::Parse(format!("bad exponent in {s:?}")))?;
            return Ok(Dyadic::new(mantissa, exponent));
        }
        let r = parse_rational(s)?;
        Dyadic::try_from_rational(&r).ok_or(RigorError::NotDyadic(r))
    }
}

/// Shift right rounding toward negative infinity.
pub(crate) fn floor_shr(m: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    if m.is_negative() {
        let mask = (BigInt::one() << shift) - BigInt::one();
        -(((-m) + mask) >> shift)
    } else {
        m >> shift
    }
}

/// Shift right rounding toward positive infinity.
pub(crate) fn ceil_shr(m: &BigInt, shift: u64) -> BigInt {
    -floor_shr(&-m, shift)
}

/// Exact floor of log2 of `|x|` for a nonzero rational.
pub fn rational_floor_log2_abs(x: &Rational) -> i64 {
    assert!(!x.is_zero());
    let n = x.numer().bits() as i64;
    let d = x.denom().bits() as i64;
    let k = n - d; // floor_log2 is k or k-1
    let numer = x.numer().abs();
    let ge = if k >= 0 {
        numer >= (x.denom() << u64::try_from(k).expect("shift"))
    } else {
        (numer << u64::try_from(-k).expect("shift")) >= *x.denom()
    };
    if ge {
        k
    } else {
        k - 1
    }
}

/// Parses an exact rational: `p/q` or a plain integer. No floating-point
/// intermediate is involved.
pub fn parse_rational(s: &str) -> Result<Rational, RigorError> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt, RigorError> {
        t.trim()
            .parse()
            .map_err(|_| RigorError::Parse(format!("bad integer {t:?}")))
    };
    if let Some((p, q)) = s.split_once('/') {
        let num = parse_int(p)?;
        let den = parse_int(q)?;
        if den.is_zero() {
            return Err(RigorError::Parse("zero denominator".into()));
        }
        Ok(Rational::new(num, den))
    } else {
        Ok(Rational::from_integer(parse_int(s)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dy(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn canonical_form() {
        let d = dy(12, -2); // 3 * 2^0
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), 0);
        let z = dy(0, 17);
        assert!(z.is_zero());
        assert_eq!(z.exponent(), 0);
    }

    #[test]
    fn exact_arithmetic_examples() {
        // (3*2^0) + (1*2^-1) = 7*2^-1
        assert_eq!(dy(3, 0).add(&dy(1, -1)), dy(7, -1));
        // (1*2^-2) * (1*2^-2) = 1*2^-4
        assert_eq!(dy(1, -2).mul(&dy(1, -2)), dy(1, -4));
        // (5*2^0) - (5*2^0) = canonical zero
        let z = dy(5, 0).sub(&dy(5, 0));
        assert!(z.is_zero());
        assert_eq!(z.exponent(), 0);
    }

    #[test]
    fn round_dir_examples() {
        // 1/3 at 8 bits
        let down = Dyadic::from_rational(&rat(1, 3), 8, Rounding::Down);
        let up = Dyadic::from_rational(&rat(1, 3), 8, Rounding::Up);
        assert_eq!(down, dy(85, -8));
        assert_eq!(up, dy(86, -8).clone());
        assert_eq!(up, Dyadic::new(BigInt::from(43), -7)); // canonical of 86*2^-8
        // 1/2 is exact at any precision
        for bits in [16u32, 24, 64] {
            for dir in [Rounding::Down, Rounding::Up] {
                assert_eq!(Dyadic::from_rational(&rat(1, 2), bits, dir), dy(1, -1));
            }
        }
    }

    #[test]
    fn ordering_matches_reals() {
        assert!(dy(1, -1) < dy(1, 0));
        assert!(dy(-3, 10) < dy(1, -60));
        assert!(dy(5, 2) == dy(20, 0));
    }

    #[test]
    fn text_roundtrip() {
        for s in ["85*2^-8", "-7*2^3", "0*2^0", "1*2^-1"] {
            let d: Dyadic = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        // alternate accepted spellings normalize
        assert_eq!("3".parse::<Dyadic>().unwrap(), dy(3, 0));
        assert_eq!("21845/65536".parse::<Dyadic>().unwrap(), dy(21845, -16));
        assert!("1/3".parse::<Dyadic>().is_err());
    }

    #[test]
    fn f64_conversion_exact() {
        let d = Dyadic::from_f64(0.1).unwrap();
        // 0.1 is not 1/10 in binary; conversion must reflect the actual bits
        assert_ne!(d.to_rational(), rat(1, 10));
        assert_eq!(d.to_f64(), 0.1);
    }

    proptest! {
        #[test]
        fn prop_arith_matches_rational_oracle(
            am in -10_000i64..10_000, ae in -30i64..30,
            bm in -10_000i64..10_000, be in -30i64..30,
        ) {
            let a = dy(am, ae);
            let b = dy(bm, be);
            prop_assert_eq!(a.add(&b).to_rational(), a.to_rational() + b.to_rational());
            prop_assert_eq!(a.sub(&b).to_rational(), a.to_rational() - b.to_rational());
            prop_assert_eq!(a.mul(&b).to_rational(), a.to_rational() * b.to_rational());
            prop_assert_eq!(a.cmp(&b), a.to_rational().cmp(&b.to_rational()));
        }

        #[test]
        fn prop_round_dir_brackets(p in -100_000i64..100_000, q in 1i64..100_000, bits in 16u32..80) {
            let x = rat(p, q);
            let down = Dyadic::from_rational(&x, bits, Rounding::Down);
            let up = Dyadic::from_rational(&x, bits, Rounding::Up);
            prop_assert!(down.to_rational() <= x);
            prop_assert!(up.to_rational() >= x);
            // |result - x| <= 2^-bits * max(1, |x|)
            let scale = if x.abs() > Rational::one() { x.abs() } else { Rational::one() };
            let tol = scale / Rational::from_integer(BigInt::one() << bits);
            prop_assert!(x.clone() - down.to_rational() <= tol);
            prop_assert!(up.to_rational() - x <= tol);
        }

        #[test]
        fn prop_display_parse_roundtrip(m in -1_000_000i64..1_000_000, e in -200i64..200) {
            let d = dy(m, e);
            let back: Dyadic = d.to_string().parse().unwrap();
            prop_assert_eq!(back, d);
        }
    }
}
