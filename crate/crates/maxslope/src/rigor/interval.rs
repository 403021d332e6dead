//! Closed intervals with exact dyadic endpoints. Every operation returns an
//! enclosure of the exact image, with endpoints rounded outward at the given
//! precision.

use std::fmt;

use num_bigint::BigInt;

use super::{Dyadic, Precision, Rational, RigorError, Rounding};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self, RigorError> {
        if lo > hi {
            return Err(RigorError::EmptyInterval);
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(v: Dyadic) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Interval::point(Dyadic::from_int(v))
    }

    /// Tightest dyadic enclosure of an exact rational at precision `p`.
    pub fn from_rational(x: &Rational, p: Precision) -> Self {
        Interval {
            lo: Dyadic::from_rational(x, p.bits(), Rounding::Down),
            hi: Dyadic::from_rational(x, p.bits(), Rounding::Up),
        }
    }

    /// Enclosure of `[lo, hi]` given exact rational endpoints.
    pub fn from_rationals(lo: &Rational, hi: &Rational, p: Precision) -> Result<Self, RigorError> {
        if lo > hi {
            return Err(RigorError::EmptyInterval);
        }
        Ok(Interval {
            lo: Dyadic::from_rational(lo, p.bits(), Rounding::Down),
            hi: Dyadic::from_rational(hi, p.bits(), Rounding::Up),
        })
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        self.lo.to_rational() <= *x && *x <= self.hi.to_rational()
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// `max(|lo|, |hi|)`.
    pub fn sup_abs(&self) -> Dyadic {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn mid_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    /// Outward rounding of both endpoints at precision `p`.
    pub fn outward(&self, p: Precision) -> Self {
        Interval {
            lo: self.lo.round(p.bits(), Rounding::Down),
            hi: self.hi.round(p.bits(), Rounding::Up),
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, other: &Interval, p: Precision) -> Self {
        Interval {
            lo: self.lo.add(&other.lo).round(p.bits(), Rounding::Down),
            hi: self.hi.add(&other.hi).round(p.bits(), Rounding::Up),
        }
    }

    pub fn sub(&self, other: &Interval, p: Precision) -> Self {
        self.add(&other.neg(), p)
    }

    pub fn mul(&self, other: &Interval, p: Precision) -> Self {
        let candidates = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = candidates.iter().min().expect("nonempty").clone();
        let hi = candidates.iter().max().expect("nonempty").clone();
        Interval {
            lo: lo.round(p.bits(), Rounding::Down),
            hi: hi.round(p.bits(), Rounding::Up),
        }
    }

    /// Tight enclosure of `x^2` (never negative, unlike `mul` by self).
    pub fn square(&self, p: Precision) -> Self {
        let (lo, hi) = if !self.lo.is_negative() {
            (self.lo.mul(&self.lo), self.hi.mul(&self.hi))
        } else if !self.hi.is_positive() {
            (self.hi.mul(&self.hi), self.lo.mul(&self.lo))
        } else {
            let a = self.lo.mul(&self.lo);
            let b = self.hi.mul(&self.hi);
            (Dyadic::zero(), if a > b { a } else { b })
        };
        Interval {
            lo: lo.round(p.bits(), Rounding::Down),
            hi: hi.round(p.bits(), Rounding::Up),
        }
    }

    pub fn div(&self, other: &Interval, p: Precision) -> Result<Self, RigorError> {
        if other.contains_zero() {
            return Err(RigorError::DivisionByIntervalContainingZero);
        }
        let quotients = [
            self.lo.to_rational() / other.lo.to_rational(),
            self.lo.to_rational() / other.hi.to_rational(),
            self.hi.to_rational() / other.lo.to_rational(),
            self.hi.to_rational() / other.hi.to_rational(),
        ];
        let lo = quotients.iter().min().expect("nonempty");
        let hi = quotients.iter().max().expect("nonempty");
        Ok(Interval {
            lo: Dyadic::from_rational(lo, p.bits(), Rounding::Down),
            hi: Dyadic::from_rational(hi, p.bits(), Rounding::Up),
        })
    }

    /// Exact scaling by a machine integer, then outward rounding.
    pub fn scale_int(&self, k: i64, p: Precision) -> Self {
        let kd = Dyadic::from_int(k);
        let a = self.lo.mul(&kd);
        let b = self.hi.mul(&kd);
        let (lo, hi) = if k >= 0 { (a, b) } else { (b, a) };
        Interval {
            lo: lo.round(p.bits(), Rounding::Down),
            hi: hi.round(p.bits(), Rounding::Up),
        }
    }

    /// Exact scaling by `2^k` (no rounding needed).
    pub fn scale_pow2(&self, k: i64) -> Self {
        Interval {
            lo: self.lo.scale_pow2(k),
            hi: self.hi.scale_pow2(k),
        }
    }

    /// Division by a positive machine integer.
    pub fn div_uint(&self, k: u64, p: Precision) -> Self {
        Interval {
            lo: self.lo.div_uint_dir(k, p.bits(), Rounding::Down),
            hi: self.hi.div_uint_dir(k, p.bits(), Rounding::Up),
        }
    }

    pub fn hull(&self, other: &Interval) -> Self {
        Interval {
            lo: if self.lo < other.lo {
                self.lo.clone()
            } else {
                other.lo.clone()
            },
            hi: if self.hi > other.hi {
                self.hi.clone()
            } else {
                other.hi.clone()
            },
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Self> {
        let lo = if self.lo > other.lo {
            self.lo.clone()
        } else {
            other.lo.clone()
        };
        let hi = if self.hi < other.hi {
            self.hi.clone()
        } else {
            other.hi.clone()
        };
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    /// Splits at the exact dyadic midpoint.
    pub fn bisect(&self) -> (Self, Self) {
        let mid = self.lo.add(&self.hi).scale_pow2(-1);
        (
            Interval {
                lo: self.lo.clone(),
                hi: mid.clone(),
            },
            Interval {
                lo: mid,
                hi: self.hi.clone(),
            },
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn p64() -> Precision {
        Precision::new(64)
    }

    fn dy(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(Dyadic::from_int(lo), Dyadic::from_int(hi)).unwrap()
    }

    #[test]
    fn mul_endpoint_products() {
        // [1,2] * [-3,4] encloses [-6,8]
        let r = iv(1, 2).mul(&iv(-3, 4), p64());
        assert_eq!(r.lo(), &Dyadic::from_int(-6));
        assert_eq!(r.hi(), &Dyadic::from_int(8));
    }

    #[test]
    fn add_identity() {
        let r = iv(0, 0).add(&iv(5, 5), p64());
        assert_eq!(r, iv(5, 5));
    }

    #[test]
    fn div_by_zero_interval_rejected() {
        assert_eq!(
            iv(1, 1).div(&iv(0, 1), p64()),
            Err(RigorError::DivisionByIntervalContainingZero)
        );
        assert!(iv(1, 1).div(&iv(1, 2), p64()).is_ok());
    }

    #[test]
    fn division_rounds_outward() {
        let r = iv(1, 1).div(&iv(3, 3), Precision::new(16)).unwrap();
        let third = Rational::new(BigInt::one(), BigInt::from(3));
        assert!(r.contains_rational(&third));
        assert!(r.lo() < r.hi());
        assert_eq!(r.lo(), &dy(21845, -16));
    }

    #[test]
    fn square_straddling_zero() {
        let x = Interval::new(Dyadic::from_int(-1), Dyadic::from_int(2)).unwrap();
        let s = x.square(p64());
        assert_eq!(s.lo(), &Dyadic::zero());
        assert_eq!(s.hi(), &Dyadic::from_int(4));
    }

    #[test]
    fn bisect_exact() {
        let (l, r) = iv(1, 2).bisect();
        assert_eq!(l.hi(), &dy(3, -1));
        assert_eq!(r.lo(), &dy(3, -1));
    }

    fn small_interval() -> impl Strategy<Value = (Interval, Rational)> {
        (
            -1000i64..1000,
            0i64..500,
            -12i64..12,
            0u32..1000,
        )
            .prop_map(|(lo, w, e, t)| {
                let a = dy(lo, e);
                let b = dy(lo + w, e);
                // a sample point a + t/1000 * (b - a), exact rational
                let span = b.to_rational() - a.to_rational();
                let pt = a.to_rational()
                    + span * Rational::new(BigInt::from(t), BigInt::from(1000));
                (Interval::new(a, b).unwrap(), pt)
            })
    }

    proptest! {
        // Containment: exact op on member points lies inside the returned interval.
        #[test]
        fn prop_containment((x, xp) in small_interval(), (y, yp) in small_interval(), bits in 16u32..64) {
            let p = Precision::new(bits);
            prop_assert!(x.add(&y, p).contains_rational(&(xp.clone() + yp.clone())));
            prop_assert!(x.sub(&y, p).contains_rational(&(xp.clone() - yp.clone())));
            prop_assert!(x.mul(&y, p).contains_rational(&(xp.clone() * yp.clone())));
            if !y.contains_zero() {
                prop_assert!(x.div(&y, p).unwrap().contains_rational(&(xp / yp)));
            }
        }

        // Inclusion isotonicity: wider inputs give wider (containing) outputs.
        #[test]
        fn prop_inclusion_isotonic((x, _) in small_interval(), (y, _) in small_interval(), pad in 1i64..50) {
            let p = p64();
            let grow = |i: &Interval| Interval::new(
                i.lo().sub(&dy(pad, -6)),
                i.hi().add(&dy(pad, -6)),
            ).unwrap();
            let (xw, yw) = (grow(&x), grow(&y));
            prop_assert!(xw.add(&yw, p).contains(&x.add(&y, p)));
            prop_assert!(xw.sub(&yw, p).contains(&x.sub(&y, p)));
            prop_assert!(xw.mul(&yw, p).contains(&x.mul(&y, p)));
        }

        // Monotone precision: more bits never widens the enclosure.
        #[test]
        fn prop_monotone_precision((x, _) in small_interval(), (y, _) in small_interval(), bits in 16u32..56) {
            let coarse = Precision::new(bits);
            let fine = Precision::new(bits + 8);
            prop_assert!(x.mul(&y, coarse).contains(&x.mul(&y, fine)));
            if !y.contains_zero() {
                prop_assert!(x.div(&y, coarse).unwrap().contains(&x.div(&y, fine).unwrap()));
            }
        }
    }
}
