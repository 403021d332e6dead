//! Exact Bernoulli numbers, the Taylor coefficients `d_k` of the boundary
//! function `h` as exact `p + q log 2` quantities, rigorous sign decisions for
//! them, and the series form of `h`.
//!
//! The coefficients satisfy both a closed formula and a two-term recurrence;
//! the two must agree exactly, and each `d_k > 0` reduces to comparing a
//! rational against an enclosure of log 2.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{Float, FromPrimitive, One, Signed, Zero};

use crate::rigor::{self, Dyadic, Interval, Precision, Rational, Rounding};

/// Exact quantity `p + q log 2` with rational `p`, `q`. Since log 2 is
/// irrational the value is nonzero whenever `q != 0`, so its sign is always
/// decidable by refining a log 2 enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinLog2 {
    p: Rational,
    q: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl LinLog2 {
    pub fn new(p: Rational, q: Rational) -> Self {
        LinLog2 { p, q }
    }

    pub fn zero() -> Self {
        LinLog2 {
            p: Rational::zero(),
            q: Rational::zero(),
        }
    }

    pub fn from_rational(p: Rational) -> Self {
        LinLog2 {
            p,
            q: Rational::zero(),
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.p
    }

    pub fn log2_part(&self) -> &Rational {
        &self.q
    }

    pub fn add(&self, other: &Self) -> Self {
        LinLog2 {
            p: &self.p + &other.p,
            q: &self.q + &other.q,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        LinLog2 {
            p: &self.p - &other.p,
            q: &self.q - &other.q,
        }
    }

    pub fn neg(&self) -> Self {
        LinLog2 {
            p: -&self.p,
            q: -&self.q,
        }
    }

    pub fn mul_rational(&self, c: &Rational) -> Self {
        LinLog2 {
            p: &self.p * c,
            q: &self.q * c,
        }
    }

    /// Interval enclosure at precision `prec`.
    pub fn enclosure(&self, prec: Precision) -> Interval {
        let p_iv = Interval::from_rational(&self.p, prec);
        if self.q.is_zero() {
            return p_iv;
        }
        let q_iv = Interval::from_rational(&self.q, prec);
        p_iv.add(&q_iv.mul(&rigor::log2(prec), prec), prec)
    }

    /// Exact sign. For `q != 0` this compares `-p/q` against a log 2
    /// enclosure, doubling the precision until decidable; irrationality of
    /// log 2 guarantees termination.
    pub fn sign(&self, start: Precision) -> Sign {
        if self.q.is_zero() {
            return if self.p.is_zero() {
                Sign::Zero
            } else if self.p.is_positive() {
                Sign::Positive
            } else {
                Sign::Negative
            };
        }
        let target = -&self.p / &self.q;
        let mut bits = start.bits();
        loop {
            let enc = rigor::log2(Precision::new(bits));
            if enc.lo().to_rational() > target {
                // log 2 > -p/q, so p + q log2 = q (log2 - target) has q's sign
                return if self.q.is_positive() {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
            }
            if enc.hi().to_rational() < target {
                return if self.q.is_positive() {
                    Sign::Negative
                } else {
                    Sign::Positive
                };
            }
            bits = bits.checked_mul(2).expect("precision escalation overflow");
            assert!(bits <= 1 << 22, "sign undecidable: is the value zero?");
        }
    }

    /// Approximate value, robust for huge rational parts.
    pub fn to_f64(&self) -> f64 {
        let p = Dyadic::from_rational(&self.p, 80, Rounding::Down).to_f64();
        let q = Dyadic::from_rational(&self.q, 80, Rounding::Down).to_f64();
        p + q * std::f64::consts::LN_2
    }
}

/// Sign of `x` at escalating precision starting from `p`.
pub fn linlog2_sign(x: &LinLog2, p: Precision) -> Sign {
    x.sign(p)
}

static BERNOULLI_CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// Exact Bernoulli number `B_n` for even `n >= 2`, from the defining
/// recurrence `sum_j C(n+1, j) B_j = 0` with `B_0 = 1`, `B_1 = -1/2`.
pub fn bernoulli(n: u32) -> Rational {
    assert!(n >= 2 && n % 2 == 0, "bernoulli: need even n >= 2");
    bernoulli_raw(n)
}

fn bernoulli_raw(n: u32) -> Rational {
    let cache = BERNOULLI_CACHE.get_or_init(|| {
        Mutex::new(vec![
            Rational::one(),
            Rational::new(BigInt::from(-1), BigInt::from(2)),
        ])
    });
    let mut table = cache.lock().expect("bernoulli cache");
    while table.len() <= n as usize {
        let m = table.len() as u32; // computing B_m
        if m % 2 == 1 {
            table.push(Rational::zero());
            continue;
        }
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let c = binomial(BigInt::from(m + 1), BigInt::from(j));
            acc += Rational::from_integer(c) * b;
        }
        let lead = Rational::from_integer(BigInt::from(m + 1));
        table.push(-acc / lead);
    }
    table[n as usize].clone()
}

/// `(1 - 4^-j) B_2j / (2j)`, the summand shared by the closed formula and the
/// recurrence.
fn weighted_bernoulli_term(j: u32) -> Rational {
    let four_pow = Rational::new(BigInt::one(), BigInt::one() << (2 * j as u64));
    (Rational::one() - four_pow) * bernoulli_raw(2 * j)
        / Rational::from_integer(BigInt::from(2 * j))
}

/// Closed formula for the Taylor coefficient `d_k`:
/// `(-1)^k 3/4 - (-1)^k log 2 + (-1)^(k+1) sum_{j<=k} (1 - 4^-j) B_2j/(2j)`.
pub fn d_closed(k: u32) -> LinLog2 {
    assert!(k >= 1);
    let sign_k = if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    let mut sum = Rational::zero();
    for j in 1..=k {
        sum += weighted_bernoulli_term(j);
    }
    let p = &sign_k * Rational::new(BigInt::from(3), BigInt::from(4)) - &sign_k * sum;
    let q = -sign_k;
    LinLog2::new(p, q)
}

/// Same coefficient via the recurrence
/// `d_{k+1} = -d_k + (-1)^k (1 - 2^(-2k-2)) B_{2k+2}/(2k+2)`, seeded with
/// `d_1 = log 2 - 11/16`.
pub fn d_recur(k: u32) -> LinLog2 {
    assert!(k >= 1);
    let mut d = LinLog2::new(
        Rational::new(BigInt::from(-11), BigInt::from(16)),
        Rational::one(),
    );
    for i in 1..k {
        let term = weighted_bernoulli_term(i + 1);
        let signed = if i % 2 == 0 { term } else { -term };
        d = d.neg().add(&LinLog2::from_rational(signed));
    }
    d
}

/// Table of `(k, d_k)` built once via the recurrence, immutable thereafter.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    entries: Vec<(u32, LinLog2)>,
}

impl CoeffTable {
    pub fn build(kmax: u32) -> Self {
        assert!(kmax >= 1);
        let mut entries = Vec::with_capacity(kmax as usize);
        let mut d = LinLog2::new(
            Rational::new(BigInt::from(-11), BigInt::from(16)),
            Rational::one(),
        );
        entries.push((1, d.clone()));
        for i in 1..kmax {
            let term = weighted_bernoulli_term(i + 1);
            let signed = if i % 2 == 0 { term } else { -term };
            d = d.neg().add(&LinLog2::from_rational(signed));
            entries.push((i + 1, d.clone()));
        }
        CoeffTable { entries }
    }

    pub fn get(&self, k: u32) -> Option<&LinLog2> {
        self.entries.get(k as usize - 1).map(|(_, d)| d)
    }

    pub fn kmax(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn iter(&self) -> impl Iterator<Item = &(u32, LinLog2)> {
        self.entries.iter()
    }
}

/// Rewrites each `d_k > 0` (k = 1..kmax) as `log 2 > r` (when the log 2
/// coefficient is +1) or `log 2 < s` (when it is -1) and returns
/// `(max r, min s)`. `min s` is `None` until an even k participates.
pub fn dk_extremes(kmax: u32) -> (Rational, Option<Rational>) {
    assert!(kmax >= 1);
    let table = CoeffTable::build(kmax);
    let mut max_r: Option<Rational> = None;
    let mut min_s: Option<Rational> = None;
    for (_, d) in table.iter() {
        if d.log2_part().is_one() {
            let r = -d.rational_part();
            if max_r.as_ref().map_or(true, |m| r > *m) {
                max_r = Some(r);
            }
        } else {
            debug_assert_eq!(*d.log2_part(), -Rational::one());
            let s = d.rational_part().clone();
            if min_s.as_ref().map_or(true, |m| s < *m) {
                min_s = Some(s);
            }
        }
    }
    (max_r.expect("k=1 always contributes an r"), min_s)
}

/// Verifies the tail of the positivity proof for a single `k >= 8`:
/// with `S_k := zeta(2) (2k-2)! / (2pi)^(2k-2)`,
///
/// 1. every term `(2j-1)!/(2pi)^(2j)`, `j < k-1`, is at most the last one;
/// 2. `3/4 - log 2 < S_k`;
/// 3. `2^16/(2^16-1) (2pi)^2 zeta(2) < 2k - 1`.
///
/// Together with `zeta(2j) <= zeta(2)` and `zeta(2k) >= 1` these entail
/// `d_k > 0` without computing `d_k` exactly. Step 3 is the binding one and
/// holds from `k = 33` on.
pub fn dk_asymptotic_check(k: u32) -> bool {
    assert!(k >= 8, "the dominance step needs k >= 8");
    let p = Precision::new(128);
    let two_pi = rigor::pi(p).scale_pow2(1);
    let zeta2 = rigor::pi(p).square(p).div_uint(6, p);

    // (1) last-term dominance among (2j-1)!/(2pi)^(2j), j = 1..k-1
    let last_fact = factorial(2 * k - 3);
    for j in 1..k - 1 {
        // (2j-1)! (2pi)^(2(k-1-j)) <= (2k-3)!
        let lhs = interval_pow(&two_pi, 2 * (k - 1 - j), p)
            .mul(&Interval::from_rational(&factorial(2 * j - 1), p), p);
        if lhs.hi().to_rational() > last_fact {
            return false;
        }
    }

    // (2) 3/4 - log2 < zeta(2) (2k-2)!/(2pi)^(2k-2)
    let excess = Interval::from_rational(&Rational::new(BigInt::from(3), BigInt::from(4)), p)
        .sub(&rigor::log2(p), p);
    let s_k = zeta2
        .mul(&Interval::from_rational(&factorial(2 * k - 2), p), p)
        .div(&interval_pow(&two_pi, 2 * k - 2, p), p)
        .expect("pi power is positive");
    if !(excess.hi() < s_k.lo()) {
        return false;
    }

    // (3) 2^16/(2^16-1) (2pi)^2 zeta(2) < 2k - 1
    let ratio = Rational::new(
        BigInt::one() << 16u32,
        (BigInt::one() << 16u32) - BigInt::one(),
    );
    let lhs = Interval::from_rational(&ratio, p)
        .mul(&two_pi.square(p), p)
        .mul(&zeta2, p);
    lhs.hi().to_rational() < Rational::from_integer(BigInt::from(2 * k - 1))
}

fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=u64::from(n) {
        acc *= i;
    }
    Rational::from_integer(acc)
}

fn interval_pow(base: &Interval, exp: u32, p: Precision) -> Interval {
    let mut acc = Interval::from_int(1);
    for _ in 0..exp {
        acc = acc.mul(base, p);
    }
    acc
}

/// Partial sum of the power series `h(phi) = sum d_k (2 phi)^(2k) / (2k)!`.
/// Approximation tier: cross-checked against the closed form, no rigorous
/// truncation bound.
pub fn h_taylor<F: Float + FromPrimitive>(phi: F, kmax: u32, table: &CoeffTable) -> F {
    assert!(kmax >= 1 && table.kmax() >= kmax);
    let two_phi_sq = {
        let t = phi + phi;
        t * t
    };
    let mut ratio = two_phi_sq / F::from_u32(2).expect("const"); // (2phi)^2 / 2!
    let mut sum = F::zero();
    for (k, d) in table.iter().take(kmax as usize) {
        sum = sum + F::from_f64(d.to_f64()).expect("coefficient") * ratio;
        let m = F::from_u32((2 * k + 1) * (2 * k + 2)).expect("const");
        ratio = ratio * two_phi_sq / m;
    }
    sum
}

/// Checks `zeta(2n) = (-1)^(n+1) (2pi)^(2n) B_2n / (2 (2n)!)` by intersecting
/// the interval value of the right side with a direct partial-sum-plus-tail
/// enclosure of `sum m^(-2n)`.
pub fn zeta_even_identity_check(n: u32, p: Precision) -> bool {
    assert!((1..=20).contains(&n));
    zeta_rhs_matches_series(n, &bernoulli_raw(2 * n), p)
}

fn zeta_rhs_matches_series(n: u32, b2n: &Rational, p: Precision) -> bool {
    let sign = if n % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    };
    let coeff = sign * b2n / (Rational::from_integer(BigInt::from(2)) * factorial(2 * n));
    let two_pi = rigor::pi(p).scale_pow2(1);
    let rhs = interval_pow(&two_pi, 2 * n, p).mul(&Interval::from_rational(&coeff, p), p);

    // direct series with integral tail bound
    let terms: u64 = 64;
    let mut s = Interval::from_int(0);
    for m in 1..=terms {
        let mth = Rational::new(BigInt::one(), BigInt::from(m).pow(2 * n));
        s = s.add(&Interval::from_rational(&mth, p), p);
    }
    // 0 <= tail <= M^(1-2n)/(2n-1)
    let tail_hi = Rational::new(
        BigInt::one(),
        BigInt::from(terms).pow(2 * n - 1) * BigInt::from(2 * n - 1),
    );
    let lhs = s.add(
        &Interval::from_rationals(&Rational::zero(), &tail_hi, p).expect("ordered"),
        p,
    );
    rhs.intersects(&lhs)
}

impl std::fmt::Display for LinLog2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{} + {}*log2", self.p, self.q)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    fn p64() -> Precision {
        Precision::new(64)
    }

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(6), rat(1, 42));
        // distinctive numerator guards against off-by-one indexing
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_matches_fresh_recurrence() {
        // independent oracle: recompute B_20 from scratch without the cache
        let mut b = vec![Rational::one(), rat(-1, 2)];
        for m in 2u32..=20 {
            let mut acc = Rational::zero();
            for (j, bj) in b.iter().enumerate() {
                let c = binomial(BigInt::from(m + 1), BigInt::from(j));
                acc += Rational::from_integer(c) * bj;
            }
            b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
        }
        assert_eq!(bernoulli(20), b[20].clone());
        assert_eq!(bernoulli(20), rat(-174611, 330));
    }

    #[test]
    fn d1_and_d2_values() {
        let d1 = d_closed(1);
        assert_eq!(d1.rational_part(), &rat(-11, 16));
        assert_eq!(d1.log2_part(), &Rational::one());
        assert!((d1.to_f64() - 0.0056472).abs() < 1e-6);

        let d2 = d_closed(2);
        assert_eq!(d2.rational_part(), &rat(89, 128));
        assert_eq!(d2.log2_part(), &(-Rational::one()));
        assert!((d2.to_f64() - 0.0021653).abs() < 1e-6);

        assert_eq!(d_recur(1), d_closed(1));
        assert_eq!(d_recur(2), d_closed(2));
    }

    #[test]
    fn closed_equals_recurrence_exactly() {
        let table = CoeffTable::build(40);
        for k in 1..=40 {
            let c = d_closed(k);
            assert_eq!(&c, table.get(k).unwrap(), "k={k}");
            assert_eq!(c, d_recur(k), "k={k}");
            // log 2 coefficient alternates as (-1)^(k+1)
            let expect_q = if k % 2 == 1 {
                Rational::one()
            } else {
                -Rational::one()
            };
            assert_eq!(c.log2_part(), &expect_q);
        }
    }

    #[test]
    fn sign_decisions() {
        assert_eq!(LinLog2::zero().sign(p64()), Sign::Zero);
        assert_eq!(
            LinLog2::new(rat(-177, 256), Rational::one()).sign(p64()),
            Sign::Positive
        );
        assert_eq!(
            LinLog2::new(rat(89, 128), -Rational::one()).sign(p64()),
            Sign::Positive
        );
        assert_eq!(
            LinLog2::new(rat(-89, 128), Rational::one()).sign(p64()),
            Sign::Negative
        );
        assert_eq!(
            LinLog2::from_rational(rat(-1, 7)).sign(p64()),
            Sign::Negative
        );
    }

    #[test]
    fn extremes_values() {
        let (r, s) = dk_extremes(32);
        assert_eq!(r, rat(177, 256));
        assert_eq!(s, Some(rat(89, 128)));
        let (r2, s2) = dk_extremes(2);
        assert_eq!(r2, rat(11, 16));
        assert_eq!(s2, Some(rat(89, 128)));
        let (r1, s1) = dk_extremes(1);
        assert_eq!(r1, rat(11, 16));
        assert_eq!(s1, None);
    }

    #[test]
    fn positivity_small_k() {
        for k in 1..=32 {
            assert_eq!(d_closed(k).sign(p64()), Sign::Positive, "d_{k}");
        }
    }

    #[test]
    fn asymptotic_chain() {
        assert!(dk_asymptotic_check(33));
        assert!(dk_asymptotic_check(40));
        assert!(dk_asymptotic_check(100));
        // below 33 the final inequality 2^16/(2^16-1)(2pi)^2 zeta(2) < 2k-1 fails
        assert!(!dk_asymptotic_check(32));
        assert!(!dk_asymptotic_check(8));
    }

    #[test]
    fn h_taylor_vanishes_at_zero() {
        let table = CoeffTable::build(8);
        assert_eq!(h_taylor(0.0f64, 8, &table), 0.0);
    }

    #[test]
    fn zeta_identity_and_mutation() {
        let p = p64();
        assert!(zeta_even_identity_check(1, p));
        assert!(zeta_even_identity_check(2, p));
        assert!(zeta_even_identity_check(5, p));
        // mutation: negated B_2 must break the identity
        assert!(!zeta_rhs_matches_series(1, &rat(-1, 6), p));
    }
}
