//! Interval enclosures of sin, cos, log, atan and the constants pi and log 2.
//!
//! Trig uses alternating Taylor partial sums with the first omitted term as
//! remainder bound (the Lagrange bound for sin/cos), log goes through the
//! atanh transform `log t = 2 atanh((t-1)/(t+1))` after scaling the argument
//! into `[3/4, 3/2)`, and pi comes from Machin's formula
//! `pi/4 = 4 atan(1/5) - atan(1/239)`. log 2 is `2 atanh(1/3)` with a
//! geometric tail bound. Constants are memoized per precision.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Dyadic, Interval, Precision, Rational, RigorError, Rounding};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstName {
    Pi,
    Log2,
}

static CONSTS: OnceLock<Mutex<HashMap<(ConstName, u32), Interval>>> = OnceLock::new();

/// Enclosure of a named constant; width is at most `2^(4 - bits)`.
/// Called thousands of times per certification run, hence the memo table.
pub fn constant(name: ConstName, p: Precision) -> Interval {
    let cache = CONSTS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("const cache").get(&(name, p.bits())) {
        return hit.clone();
    }
    let pw = p.guarded(16);
    let value = match name {
        ConstName::Pi => {
            // 16 atan(1/5) - 4 atan(1/239)
            let a = atan_point(&Rational::new(BigInt::one(), BigInt::from(5)), pw);
            let b = atan_point(&Rational::new(BigInt::one(), BigInt::from(239)), pw);
            a.scale_int(16, pw).sub(&b.scale_int(4, pw), pw)
        }
        ConstName::Log2 => {
            atanh_point(&Rational::new(BigInt::one(), BigInt::from(3)), pw).scale_pow2(1)
        }
    }
    .outward(p);
    cache
        .lock()
        .expect("const cache")
        .insert((name, p.bits()), value.clone());
    value
}

pub fn pi(p: Precision) -> Interval {
    constant(ConstName::Pi, p)
}

pub fn log2(p: Precision) -> Interval {
    constant(ConstName::Log2, p)
}

fn term_threshold(p: Precision) -> Dyadic {
    Dyadic::new(BigInt::one(), -(i64::from(p.bits()) + 4))
}

/// Subtracts an enclosed multiple of 2 pi when `|x| > 4`; inputs here are
/// usually already in `[-pi-1, pi+1]`.
fn reduce_trig(x: &Interval, pw: Precision) -> Result<Interval, RigorError> {
    let four = Dyadic::from_int(4);
    if x.sup_abs() <= four {
        return Ok(x.clone());
    }
    if x.sup_abs() > Dyadic::new(BigInt::one(), 20) {
        return Err(RigorError::Domain(
            "trig argument exceeds 2^20; no range reduction that far".into(),
        ));
    }
    let mut cur = x.clone();
    for _ in 0..4 {
        if cur.sup_abs() <= four {
            break;
        }
        let k = (cur.mid_f64() / std::f64::consts::TAU).round() as i64;
        if k == 0 {
            break;
        }
        let shift = pi(pw).scale_int(2 * k, pw);
        cur = cur.sub(&shift, pw);
    }
    Ok(cur)
}

fn unit_clip() -> Interval {
    Interval::new(Dyadic::from_int(-1), Dyadic::from_int(1)).expect("ordered")
}

/// Shared core of the sin/cos series. `term` starts as the degree-0 term
/// enclosure, `denom(k)` is the factor taking term k-1 to term k.
fn alternating_series(
    x2: &Interval,
    first: Interval,
    denom: impl Fn(u64) -> u64,
    pw: Precision,
) -> Interval {
    let threshold = term_threshold(pw);
    let mut sum = first.clone();
    let mut term = first;
    let mut k: u64 = 1;
    loop {
        term = term.mul(x2, pw).div_uint(denom(k), pw);
        sum = if k % 2 == 1 {
            sum.sub(&term, pw)
        } else {
            sum.add(&term, pw)
        };
        // Lagrange remainder after k terms is bounded by the next term's
        // magnitude, over-approximated from the current enclosure.
        let next_num = term.sup_abs().mul(&x2.sup_abs());
        let bound = Dyadic::from_rational_granular(
            &(next_num.to_rational() / Rational::from_integer(BigInt::from(denom(k + 1)))),
            -(i64::from(pw.bits()) + 12),
            Rounding::Up,
        );
        if bound <= threshold || k >= 300 {
            let rem = Interval::new(bound.neg(), bound).expect("ordered");
            return sum.add(&rem, pw);
        }
        k += 1;
    }
}

pub fn cos(x: &Interval, p: Precision) -> Result<Interval, RigorError> {
    let pw = p.guarded(16);
    let xr = reduce_trig(x, pw)?;
    if xr.sup_abs() > Dyadic::from_int(16) {
        return Ok(unit_clip());
    }
    let x2 = xr.square(pw);
    let s = alternating_series(&x2, Interval::from_int(1), |k| (2 * k - 1) * (2 * k), pw);
    Ok(s.intersect(&unit_clip()).expect("cos within [-1,1]").outward(p))
}

pub fn sin(x: &Interval, p: Precision) -> Result<Interval, RigorError> {
    let pw = p.guarded(16);
    let xr = reduce_trig(x, pw)?;
    if xr.sup_abs() > Dyadic::from_int(16) {
        return Ok(unit_clip());
    }
    let x2 = xr.square(pw);
    let s = alternating_series(&x2, xr, |k| (2 * k) * (2 * k + 1), pw);
    Ok(s.intersect(&unit_clip()).expect("sin within [-1,1]").outward(p))
}

/// atanh of an exact rational with `|y| <= 1/2`, by partial sums plus a
/// geometric tail bound on the same-signed remainder.
fn atanh_point(y: &Rational, pw: Precision) -> Interval {
    assert!(
        y.abs() <= Rational::new(BigInt::one(), BigInt::from(2)),
        "atanh argument out of the reduced range"
    );
    if y.is_zero() {
        return Interval::point(Dyadic::zero());
    }
    let threshold = term_threshold(pw);
    let y_iv = Interval::from_rational(y, pw);
    let y2 = y_iv.square(pw);
    let one_minus_y2 = Rational::one() - y * y;
    let mut power = y_iv.clone(); // y^(2k+1) enclosure
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power = power.mul(&y2, pw);
        sum = sum.add(&power.div_uint(2 * k + 1, pw), pw);
        // tail <= |y|^(2k+3) / ((2k+3)(1-y^2))
        let pn = power.sup_abs().mul(&y2.sup_abs());
        let bound = Dyadic::from_rational_granular(
            &(pn.to_rational()
                / (Rational::from_integer(BigInt::from(2 * k + 3)) * &one_minus_y2)),
            -(i64::from(pw.bits()) + 12),
            Rounding::Up,
        );
        if bound <= threshold || k >= 500 {
            let rem = if y.is_positive() {
                Interval::new(Dyadic::zero(), bound)
            } else {
                Interval::new(bound.neg(), Dyadic::zero())
            }
            .expect("ordered");
            return sum.add(&rem, pw);
        }
        k += 1;
    }
}

/// atan of an exact rational, reduced until the alternating series with
/// ratio `y^2 <= 1/4` applies.
fn atan_point(y: &Rational, pw: Precision) -> Interval {
    if y.is_zero() {
        return Interval::point(Dyadic::zero());
    }
    if y.is_negative() {
        return atan_point(&-y, pw).neg();
    }
    let one = Rational::one();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if *y > one {
        // atan y = pi/2 - atan(1/y)
        let inv = one / y;
        return pi(pw).scale_pow2(-1).sub(&atan_point(&inv, pw), pw);
    }
    if *y > half {
        // atan y = pi/4 + atan((y-1)/(y+1)), argument in (-1/3, 0]
        let t = (y - &one) / (y + &one);
        return pi(pw).scale_pow2(-2).add(&atan_point(&t, pw), pw);
    }
    let threshold = term_threshold(pw);
    let y_iv = Interval::from_rational(y, pw);
    let y2 = y_iv.square(pw);
    let mut power = y_iv.clone();
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power = power.mul(&y2, pw);
        let term = power.div_uint(2 * k + 1, pw);
        sum = if k % 2 == 1 {
            sum.sub(&term, pw)
        } else {
            sum.add(&term, pw)
        };
        // alternating with decreasing magnitudes: remainder below next term
        let pn = power.sup_abs().mul(&y2.sup_abs());
        let bound = Dyadic::from_rational_granular(
            &(pn.to_rational() / Rational::from_integer(BigInt::from(2 * k + 3))),
            -(i64::from(pw.bits()) + 12),
            Rounding::Up,
        );
        if bound <= threshold || k >= 500 {
            let rem = Interval::new(bound.neg(), bound).expect("ordered");
            return sum.add(&rem, pw);
        }
        k += 1;
    }
}

/// log of a positive dyadic point via `log t = 2 atanh((m-1)/(m+1)) + s log 2`
/// with `t = m 2^s`, `m` in `[3/4, 3/2)`.
fn log_point(t: &Dyadic, pw: Precision) -> Interval {
    debug_assert!(t.is_positive());
    let mut s = t.floor_log2_abs();
    let mut mhat = t.scale_pow2(-s); // in [1, 2)
    if mhat >= Dyadic::new(BigInt::from(3), -1) {
        mhat = mhat.scale_pow2(-1);
        s += 1;
    }
    let m = mhat.to_rational();
    let y = (&m - Rational::one()) / (&m + Rational::one());
    let core = atanh_point(&y, pw).scale_pow2(1);
    if s == 0 {
        core
    } else {
        core.add(&log2(pw).scale_int(s, pw), pw)
    }
}

pub fn log(x: &Interval, p: Precision) -> Result<Interval, RigorError> {
    if !x.lo().is_positive() {
        return Err(RigorError::Domain(
            "log of an interval touching (-inf, 0]".into(),
        ));
    }
    let pw = p.guarded(16);
    let lo = log_point(x.lo(), pw);
    let hi = log_point(x.hi(), pw);
    Ok(Interval::new(
        lo.lo().round(p.bits(), Rounding::Down),
        hi.hi().round(p.bits(), Rounding::Up),
    )
    .expect("log is monotone"))
}

pub fn atan(x: &Interval, p: Precision) -> Result<Interval, RigorError> {
    let pw = p.guarded(16);
    let lo = atan_point(&x.lo().to_rational(), pw);
    let hi = atan_point(&x.hi().to_rational(), pw);
    Ok(Interval::new(
        lo.lo().round(p.bits(), Rounding::Down),
        hi.hi().round(p.bits(), Rounding::Up),
    )
    .expect("atan is monotone"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p64() -> Precision {
        Precision::new(64)
    }

    /// Containment check against a reference value known to `tol`.
    fn assert_encloses(enc: &Interval, v: f64, tol: f64) {
        assert!(
            enc.lo().to_f64() <= v + tol && v - tol <= enc.hi().to_f64(),
            "{enc} does not enclose {v}"
        );
    }

    #[test]
    fn cos_at_zero() {
        let enc = cos(&Interval::from_int(0), p64()).unwrap();
        assert!(enc.contains_rational(&Rational::one()));
        // width <= 2^(2-p)
        assert!(enc.width() <= Dyadic::new(BigInt::one(), -62));
    }

    #[test]
    fn log_at_one() {
        let enc = log(&Interval::from_int(1), p64()).unwrap();
        assert!(enc.contains_rational(&Rational::zero()));
        assert!(enc.width().to_f64() < 1e-18);
    }

    #[test]
    fn cos_of_six_needs_reduction() {
        let enc = cos(&Interval::from_int(6), p64()).unwrap();
        assert_encloses(&enc, 0.9601702866503661, 1e-15);
        assert!(enc.width().to_f64() < 1e-15);
    }

    #[test]
    fn sin_large_argument() {
        let enc = sin(&Interval::from_int(48), p64()).unwrap();
        assert_encloses(&enc, -0.7682546613236668, 1e-13);
    }

    #[test]
    fn log2_value_and_rational_bracket() {
        let enc = log2(p64());
        assert_encloses(&enc, std::f64::consts::LN_2, 1e-15);
        for bits in [16u32, 24, 53, 64, 128] {
            let e = log2(Precision::new(bits));
            // entire enclosure within (177/256, 89/128)
            assert!(e.lo().to_rational() > Rational::new(BigInt::from(177), BigInt::from(256)));
            assert!(e.hi().to_rational() < Rational::new(BigInt::from(89), BigInt::from(128)));
            // width <= 2^(4 - bits)
            assert!(e.width() <= Dyadic::new(BigInt::one(), 4 - i64::from(bits)));
        }
    }

    #[test]
    fn pi_value_and_width() {
        let enc = pi(p64());
        assert_encloses(&enc, std::f64::consts::PI, 1e-15);
        assert!(enc.width() <= Dyadic::new(BigInt::one(), 4 - 64));
    }

    #[test]
    fn atan_one_is_quarter_pi() {
        let enc = atan(&Interval::from_int(1), p64()).unwrap();
        assert_encloses(&enc, std::f64::consts::FRAC_PI_4, 1e-15);
    }

    #[test]
    fn atan_monotone_endpoints() {
        let x = Interval::new(Dyadic::from_int(-3), Dyadic::from_int(7)).unwrap();
        let enc = atan(&x, p64()).unwrap();
        assert_encloses(&enc, (-3.0f64).atan(), 1.3);
        assert!(enc.lo().to_f64() <= (-3.0f64).atan());
        assert!(enc.hi().to_f64() >= 7.0f64.atan());
    }

    #[test]
    fn log_rejects_nonpositive() {
        let x = Interval::new(Dyadic::from_int(0), Dyadic::from_int(1)).unwrap();
        assert!(matches!(log(&x, p64()), Err(RigorError::Domain(_))));
    }

    #[test]
    fn point_width_shrinks_with_precision() {
        let x = Interval::point(Dyadic::new(BigInt::from(3), -1));
        let mut last: Option<Dyadic> = None;
        for bits in [24u32, 32, 40, 48, 56, 64] {
            let w = cos(&x, Precision::new(bits)).unwrap().width();
            if let Some(prev) = last {
                assert!(w <= prev, "width grew from {prev} at {bits} bits");
            }
            last = Some(w);
        }
    }

    #[test]
    fn wide_interval_cos_still_sound() {
        // [1/3, 3]: series enclosure may be wide but must contain the image
        let x = Interval::new(
            Dyadic::from_rational(&Rational::new(BigInt::one(), BigInt::from(3)), 20, Rounding::Down),
            Dyadic::from_int(3),
        )
        .unwrap();
        let enc = cos(&x, p64()).unwrap();
        assert!(enc.lo().to_f64() <= -0.98999);
        assert!(enc.hi().to_f64() >= 0.94495);
    }
}
