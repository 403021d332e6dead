//! The concrete functions under study, with rigorous enclosures where the
//! certificate machinery needs them: the boundary gap `h`, its derivative,
//! the partial-sum function `u`, the degree-8 polynomial from the small-angle
//! bound, and the gallery examples (Flett's series, `R_23`, the ratio `Q`).
//!
//! Registry names are stable strings used in certificate files:
//! `h`, `hprime`, `u`, `p_lemma1`, `flett`, `r23`.

use num_bigint::BigInt;
use num_traits::{Float, FromPrimitive, One, Signed, Zero};

use crate::bernd::{LinLog2, Sign};
use crate::msp::{self, Registry, RigorFn, SupAbsOutcome};
use crate::rigor::{self, Dyadic, Interval, Precision, Rational, RigorError, Rounding};

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("rigorous tail bound requires r < 1")]
pub struct RadiusError;

/// Enclosure of `2 cos(phi/2)`, the argument of the logarithm in every
/// closed form here. Must stay positive, i.e. `phi` inside `(-pi, pi)`.
pub(crate) fn two_cos_half(phi: &Interval, p: Precision) -> Result<Interval, RigorError> {
    let c = rigor::cos(&phi.scale_pow2(-1), p)?;
    let t = c.scale_pow2(1);
    if !t.lo().is_positive() {
        return Err(RigorError::Domain(
            "cos(phi/2) enclosure touches zero; phi too close to +-pi".into(),
        ));
    }
    Ok(t)
}

/// `u(phi) = cos(2phi) log(2 cos(phi/2)) + (phi/2) sin(2phi) - cos(phi) + 1/2`.
pub fn u_closed(phi: &Interval, p: Precision) -> Result<Interval, RigorError> {
    let pw = p.guarded(8);
    let l = rigor::log(&two_cos_half(phi, pw)?, pw)?;
    let two_phi = phi.scale_pow2(1);
    let c2 = rigor::cos(&two_phi, pw)?;
    let s2 = rigor::sin(&two_phi, pw)?;
    let c1 = rigor::cos(phi, pw)?;
    let half = Interval::point(Dyadic::new(BigInt::one(), -1));
    let res = c2
        .mul(&l, pw)
        .add(&phi.scale_pow2(-1).mul(&s2, pw), pw)
        .sub(&c1, pw)
        .add(&half, pw);
    Ok(res.outward(p))
}

/// `h(phi) = log 2 - 1 + cos(phi) - (phi/2) sin(2phi) - cos(2phi) log(2 cos(phi/2))`,
/// the gap `u(0) - u(phi)`.
pub fn h_closed(phi: &Interval, p: Precision) -> Result<Interval, RigorError> {
    let pw = p.guarded(8);
    let l = rigor::log(&two_cos_half(phi, pw)?, pw)?;
    let two_phi = phi.scale_pow2(1);
    let c2 = rigor::cos(&two_phi, pw)?;
    let s2 = rigor::sin(&two_phi, pw)?;
    let c1 = rigor::cos(phi, pw)?;
    let res = rigor::log2(pw)
        .sub(&Interval::from_int(1), pw)
        .add(&c1, pw)
        .sub(&phi.scale_pow2(-1).mul(&s2, pw), pw)
        .sub(&c2.mul(&l, pw), pw);
    Ok(res.outward(p))
}

/// Real form of the derivative, derived from the complex one:
/// `h'(phi) = -sin(phi) - sin(2phi)/2 - phi cos(2phi)
///            + 2 sin(2phi) log(2 cos(phi/2)) + cos(2phi) tan(phi/2) / 2`.
/// Validated against central differences of `h_closed` before use.
pub fn hprime_closed(phi: &Interval, p: Precision) -> Result<Interval, RigorError> {
    let pw = p.guarded(8);
    let tch = two_cos_half(phi, pw)?;
    let l = rigor::log(&tch, pw)?;
    let two_phi = phi.scale_pow2(1);
    let c2 = rigor::cos(&two_phi, pw)?;
    let s2 = rigor::sin(&two_phi, pw)?;
    let s1 = rigor::sin(phi, pw)?;
    let shalf = rigor::sin(&phi.scale_pow2(-1), pw)?;
    let tan_half = shalf.div(&tch.scale_pow2(-1), pw)?;
    let res = s1
        .neg()
        .sub(&s2.scale_pow2(-1), pw)
        .sub(&phi.mul(&c2, pw), pw)
        .add(&s2.scale_pow2(1).mul(&l, pw), pw)
        .add(&c2.mul(&tan_half, pw).scale_pow2(-1), pw);
    Ok(res.outward(p))
}

// --- the degree-8 polynomial from the small-angle lemma ----------------------

/// Polynomial with exact `p + q log 2` coefficients, ascending powers.
#[derive(Clone, Debug)]
pub struct PolyLinLog2 {
    coeffs: Vec<LinLog2>,
}

impl PolyLinLog2 {
    pub fn new(coeffs: Vec<LinLog2>) -> Self {
        PolyLinLog2 { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Exact evaluation at a rational point (Horner).
    pub fn eval_rational(&self, x: &Rational) -> LinLog2 {
        let mut acc = LinLog2::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_rational(x).add(c);
        }
        acc
    }

    /// Interval evaluation over an interval input (Horner with enclosed
    /// coefficients).
    pub fn eval_interval(&self, x: &Interval, p: Precision) -> Interval {
        let pw = p.guarded(8);
        let mut acc = Interval::from_int(0);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, pw).add(&c.enclosure(pw), pw);
        }
        acc.outward(p)
    }

    /// Sign-change scan on `steps` equal subdivisions of `[lo, hi]`, then
    /// bisection with exact sign evaluation until the bracket width is at
    /// most `tol`. Returns one enclosure per isolated root.
    pub fn isolate_roots(
        &self,
        lo: &Rational,
        hi: &Rational,
        tol: &Dyadic,
        steps: u32,
    ) -> Vec<Interval> {
        assert!(lo < hi && steps >= 1 && tol.is_positive());
        let sign_prec = Precision::new(64);
        let tol_rat = tol.to_rational();
        let grid_step = (hi - lo) / Rational::from_integer(BigInt::from(steps));
        let mut roots = Vec::new();
        let mut prev_x = lo.clone();
        let mut prev_sign = self.eval_rational(&prev_x).sign(sign_prec);
        for i in 1..=steps {
            let x = lo + &grid_step * Rational::from_integer(BigInt::from(i));
            let sign = self.eval_rational(&x).sign(sign_prec);
            if sign != prev_sign && prev_sign != Sign::Zero && sign != Sign::Zero {
                let (mut a, mut b) = (prev_x.clone(), x.clone());
                let sa = prev_sign;
                while &b - &a > tol_rat {
                    let mid = (&a + &b) / Rational::from_integer(BigInt::from(2));
                    let sm = self.eval_rational(&mid).sign(sign_prec);
                    if sm == Sign::Zero {
                        a = mid.clone();
                        b = mid;
                        break;
                    }
                    if sm == sa {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                roots.push(
                    Interval::from_rationals(&a, &b, Precision::new(128)).expect("ordered"),
                );
            }
            prev_x = x;
            prev_sign = sign;
        }
        roots
    }
}

/// `p(x) = 4x^8 + (20 log2 - 212) x^6 - (1020 log2 + 1947) x^4
///        + (7380 - 12480 log2) x^2 + (46080 log2 - 31680)`.
pub fn p_poly() -> PolyLinLog2 {
    let r = |v: i64| Rational::from_integer(BigInt::from(v));
    PolyLinLog2::new(vec![
        LinLog2::new(r(-31680), r(46080)),
        LinLog2::zero(),
        LinLog2::new(r(7380), r(-12480)),
        LinLog2::zero(),
        LinLog2::new(r(-1947), r(-1020)),
        LinLog2::zero(),
        LinLog2::new(r(-212), r(20)),
        LinLog2::zero(),
        LinLog2::new(r(4), r(0)),
    ])
}

/// The denominator `23040 + 1440 x^2 - 30 x^4` from the same bound.
pub fn denom_poly() -> PolyLinLog2 {
    let r = |v: i64| Rational::from_integer(BigInt::from(v));
    PolyLinLog2::new(vec![
        LinLog2::from_rational(r(23040)),
        LinLog2::zero(),
        LinLog2::from_rational(r(1440)),
        LinLog2::zero(),
        LinLog2::from_rational(r(-30)),
    ])
}

/// Exact evaluation of the lemma polynomial at a rational point.
pub fn p_eval(x: &Rational) -> LinLog2 {
    p_poly().eval_rational(x)
}

/// Root enclosures of the lemma polynomial on `[lo, hi]` at tolerance `tol`.
pub fn p_roots(lo: &Rational, hi: &Rational, tol: &Dyadic) -> Vec<Interval> {
    p_poly().isolate_roots(lo, hi, tol, 200)
}

/// Small-angle positivity: `p > 0` and the denominator `> 0` on `[0, 1/3]`
/// (proved on a slightly larger dyadic interval by adaptive bisection), plus
/// exact sign checks bracketing the first positive root.
pub fn lemma1_check() -> bool {
    let prec = Precision::new(96);
    let sign_prec = Precision::new(64);
    let r = |p: i64, q: i64| Rational::new(BigInt::from(p), BigInt::from(q));

    let pol = p_poly();
    let den = denom_poly();
    let signs_ok = p_eval(&Rational::zero()).sign(sign_prec) == Sign::Positive
        && p_eval(&r(1, 3)).sign(sign_prec) == Sign::Positive
        && p_eval(&r(39, 100)).sign(sign_prec) == Sign::Positive
        && p_eval(&r(2, 5)).sign(sign_prec) == Sign::Negative
        && den.eval_rational(&r(1, 3)).sign(sign_prec) == Sign::Positive;
    if !signs_ok {
        return false;
    }

    // rigorous positivity on [0, b1] with dyadic b1 >= 1/3
    let b1 = Dyadic::from_rational(&r(1, 3), 16, Rounding::Up);
    let p_fn = RigorFn::new("p_lemma1", move |x: &Interval, p| {
        Ok(pol.eval_interval(x, p))
    });
    let d_fn = RigorFn::new("denom", move |x: &Interval, p| {
        Ok(den.eval_interval(x, p))
    });
    let pos = |f: &RigorFn| {
        matches!(
            msp::prove_positive(f, &Dyadic::zero(), &b1, prec, 40),
            Ok(SupAbsOutcome::Proved)
        )
    };
    pos(&p_fn) && pos(&d_fn)
}

/// Enclosure of the large-angle constant `log 2 - 2 - cos 6 log(2 cos(3/2))`.
/// The caller asserts its lower endpoint is positive.
pub fn lemma2_check(p: Precision) -> Result<Interval, RigorError> {
    let pw = p.guarded(8);
    let c6 = rigor::cos(&Interval::from_int(6), pw)?;
    let l = rigor::log(&two_cos_half(&Interval::from_int(3), pw)?, pw)?;
    let res = rigor::log2(pw)
        .sub(&Interval::from_int(2), pw)
        .sub(&c6.mul(&l, pw), pw);
    Ok(res.outward(p))
}

/// Verifies the slope-bound chain for the derivative on `[1/3, 3]`:
/// `|1 + e^{3i}| = 2 cos(3/2)`, then `2(|log(2 cos(3/2))| + pi) < 11` and
/// `1/(2 cos(3/2)) < 8`, which give the bound `11 + 8 + 1 = 20`.
pub fn lemma3_chain_check(p: Precision) -> bool {
    let inner = || -> Result<bool, RigorError> {
        let pw = p.guarded(8);
        let c = two_cos_half(&Interval::from_int(3), pw)?;
        // identity |1 + e^{3i}|^2 = 2 + 2 cos 3 = (2 cos(3/2))^2
        let lhs_sq = rigor::cos(&Interval::from_int(3), pw)?
            .scale_pow2(1)
            .add(&Interval::from_int(2), pw);
        if !lhs_sq.intersects(&c.square(pw)) {
            return Ok(false);
        }
        let lc = rigor::log(&c, pw)?;
        if !lc.hi().is_negative() {
            return Ok(false); // 2 cos(3/2) < 1, so its log must be negative
        }
        let a = lc.neg().add(&rigor::pi(pw), pw).scale_pow2(1);
        let b = Interval::from_int(1).div(&c, pw)?;
        Ok(a.hi() < &Dyadic::from_int(11) && b.hi() < &Dyadic::from_int(8))
    };
    inner().unwrap_or(false)
}

// --- series functions ---------------------------------------------------------

/// A series with a term rule and a rigorous tail bound: the enclosure after
/// `n` terms is the partial sum plus the tail rule's remainder interval.
pub struct SeriesFn {
    name: &'static str,
    term: Box<dyn Fn(u32, &Interval, Precision) -> Result<Interval, RigorError> + Send + Sync>,
    tail: Box<dyn Fn(u32, &Interval, Precision) -> Result<Interval, RigorError> + Send + Sync>,
}

impl SeriesFn {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn eval(&self, x: &Interval, n: u32, p: Precision) -> Result<Interval, RigorError> {
        let pw = p.guarded(8);
        let mut acc = Interval::from_int(0);
        for i in 1..=n {
            acc = acc.add(&(self.term)(i, x, pw)?, pw);
        }
        Ok(acc.add(&(self.tail)(n, x, pw)?, pw).outward(p))
    }
}

/// Flett's series `F(t) = sum sin(t/n)/n` with a three-term tail expansion:
/// `sum_{n>N} sin(t/n)/n = t S2 - t^3/6 S4 + r`, `|r| <= |t|^5/(600 N^5)`,
/// where `S2 = sum_{n>N} n^-2` and `S4 = sum_{n>N} n^-4` carry integral
/// sandwich bounds.
pub fn flett_series() -> SeriesFn {
    SeriesFn {
        name: "flett",
        term: Box::new(|n, t, p| {
            let arg = t.div_uint(u64::from(n), p);
            Ok(rigor::sin(&arg, p)?.div_uint(u64::from(n), p))
        }),
        tail: Box::new(|n, t, p| {
            let nn = BigInt::from(n);
            let one = BigInt::one();
            // S2 in [(2N+3)/(2(N+1)^2), 2/(2N+1)]
            let s2_lo = Rational::new(
                BigInt::from(2 * u64::from(n) + 3),
                BigInt::from(2) * (&nn + &one) * (&nn + &one),
            );
            let s2_hi = Rational::new(BigInt::from(2), BigInt::from(2 * u64::from(n) + 1));
            let s2 = Interval::from_rationals(&s2_lo, &s2_hi, p).expect("ordered");
            // S4 in [1/(3(N+1)^3), 1/(3N^3)]
            let s4_lo = Rational::new(
                one.clone(),
                BigInt::from(3) * (&nn + &one) * (&nn + &one) * (&nn + &one),
            );
            let s4_hi = Rational::new(one, BigInt::from(3) * &nn * &nn * &nn);
            let s4 = Interval::from_rationals(&s4_lo, &s4_hi, p).expect("ordered");

            let t3 = t.square(p).mul(t, p);
            let main = t.mul(&s2, p).sub(&t3.mul(&s4, p).div_uint(6, p), p);
            // |r| <= sup|t|^5 / (600 N^5)
            let sup = t.sup_abs().to_rational();
            let b5 = Dyadic::from_rational(
                &(&sup * &sup * &sup * &sup * &sup
                    / (Rational::from_integer(BigInt::from(600u64))
                        * Rational::from_integer(nn.pow(5)))),
                p.bits(),
                Rounding::Up,
            );
            Ok(main.add(&Interval::new(b5.neg(), b5).expect("ordered"), p))
        }),
    }
}

/// Enclosure of Flett's `F` after `n` explicit terms. Requires
/// `n >= ceil(sup |t|)` so the tail expansion applies comfortably.
pub fn flett_eval(t: &Interval, n: u32, p: Precision) -> Result<Interval, RigorError> {
    assert!(
        Dyadic::from_int(i64::from(n)) >= t.sup_abs(),
        "need n >= ceil(|t|)"
    );
    flett_series().eval(t, n, p)
}

fn flett_auto_terms(t: &Interval) -> u32 {
    let sup = t.sup_abs().to_f64().abs();
    (64.0 + 16.0 * sup.ceil()).min(100_000.0) as u32
}

/// Bisection enclosure of the first zero of `F` beyond 48, with bracket
/// width at most `tol`.
pub fn flett_first_zero(tol: &Dyadic) -> Interval {
    assert!(tol.is_positive());
    let p = Precision::new(96);
    let n = 2048;
    let strict_sign = |t: &Dyadic| -> Option<bool> {
        let enc = flett_eval(&Interval::point(t.clone()), n, p).expect("flett eval");
        if enc.lo().is_positive() {
            Some(true)
        } else if enc.hi().is_negative() {
            Some(false)
        } else {
            None
        }
    };
    // scan upward from 48 in steps of 1/64 until the sign flips
    let step = Dyadic::new(BigInt::one(), -6);
    let mut lo = Dyadic::from_int(48);
    assert_eq!(strict_sign(&lo), Some(true), "F(48) should be positive");
    let mut hi = lo.clone();
    loop {
        hi = hi.add(&step);
        match strict_sign(&hi) {
            Some(true) => lo = hi.clone(),
            Some(false) => break,
            None => break, // straddling the zero already brackets it
        }
        assert!(hi < Dyadic::from_int(50), "no sign change found below 50");
    }
    // dyadic bisection
    while hi.sub(&lo) > *tol {
        let mid = lo.add(&hi).scale_pow2(-1);
        match strict_sign(&mid) {
            Some(true) => lo = mid,
            Some(false) => hi = mid,
            None => break, // enclosure straddles zero: bracket is tight enough
        }
    }
    Interval::new(lo, hi).expect("ordered")
}

// --- approximation-tier gallery -----------------------------------------------

/// `R_23(t) = sum_{n=1}^{23} cos(t log n)/n`, plain floating evaluation.
pub fn r23_eval<F: Float + FromPrimitive>(t: F) -> F {
    let mut acc = F::zero();
    for n in 1..=23u32 {
        let nf = F::from_u32(n).expect("const");
        acc = acc + (t * nf.ln()).cos() / nf;
    }
    acc
}

/// Zeros of `R_23` on `[lo, hi]` by scan plus bisection; returned in
/// increasing order, deduplicated within `tol`.
pub fn r23_zeros<F: Float + FromPrimitive>(lo: F, hi: F, scan_step: F, tol: F) -> Vec<F> {
    assert!(lo < hi && scan_step > F::zero() && tol > F::zero());
    let two = F::from_u32(2).expect("const");
    let mut zeros: Vec<F> = Vec::new();
    let mut x0 = lo;
    let mut f0 = r23_eval(x0);
    while x0 < hi {
        let x1 = (x0 + scan_step).min(hi);
        let f1 = r23_eval(x1);
        if f0 * f1 < F::zero() {
            let (mut a, mut b, mut fa) = (x0, x1, f0);
            for _ in 0..200 {
                if b - a <= tol {
                    break;
                }
                let m = (a + b) / two;
                let fm = r23_eval(m);
                if fm == F::zero() {
                    a = m;
                    b = m;
                    break;
                }
                if (fm > F::zero()) == (fa > F::zero()) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            let z = (a + b) / two;
            if zeros.last().map_or(true, |&last| z - last > tol) {
                zeros.push(z);
            }
        }
        x0 = x1;
        f0 = f1;
    }
    zeros
}

/// `Q(x) = (1^x + ... + (n+1)^x) / (1^x + ... + n^x)`.
pub fn q_ratio<F: Float + FromPrimitive>(n: u32, x: F) -> F {
    let power_sum = |m: u32| -> F {
        let mut s = F::zero();
        for k in 1..=m {
            s = s + F::from_u32(k).expect("const").powf(x);
        }
        s
    };
    power_sum(n + 1) / power_sum(n)
}

/// Minimum second central difference of a sampled sequence.
pub(crate) fn min_second_difference<F: Float>(values: &[F]) -> F {
    let mut min = F::infinity();
    for w in values.windows(3) {
        let d2 = w[2] - (w[1] + w[1]) + w[0];
        if d2 < min {
            min = d2;
        }
    }
    min
}

/// Numeric log-convexity check for `Q` on a uniform grid: all second central
/// differences of `log Q` at least `-1e-12`.
pub fn q_logconvex_check<F: Float + FromPrimitive>(n: u32, grid: &[F]) -> bool {
    assert!((2..=10).contains(&n) && grid.len() >= 3);
    let logq: Vec<F> = grid.iter().map(|&x| q_ratio(n, x).ln()).collect();
    min_second_difference(&logq) >= F::from_f64(-1e-12).expect("const")
}

/// Partial sum of `sum (-1)^(n-1) r^n cos(n phi) / (n+2)` with the geometric
/// tail bound `r^(N+1) / ((N+3)(1-r))`. Errors when `r >= 1`: no usable tail
/// exists there, use the closed form instead.
pub fn u_series<F: Float + FromPrimitive>(r: F, phi: F, n: u32) -> Result<(F, F), RadiusError> {
    if r >= F::one() || r <= F::zero() {
        return Err(RadiusError);
    }
    let two = F::from_u32(2).expect("const");
    let mut value = F::zero();
    let mut rk = F::one();
    for k in 1..=n {
        rk = rk * r;
        let kf = F::from_u32(k).expect("const");
        let term = rk * (kf * phi).cos() / (kf + two);
        value = if k % 2 == 1 { value + term } else { value - term };
    }
    let tail = rk * r / ((F::from_u32(n + 3).expect("const")) * (F::one() - r));
    Ok((value, tail))
}

/// Registry of every rigorously enclosable function used by certificates.
pub fn registry() -> Registry {
    let mut reg = Registry::new();
    reg.insert(RigorFn::new("h", |x: &Interval, p| h_closed(x, p)));
    reg.insert(RigorFn::new("hprime", |x: &Interval, p| hprime_closed(x, p)));
    reg.insert(RigorFn::new("u", |x: &Interval, p| u_closed(x, p)));
    let pol = p_poly();
    reg.insert(RigorFn::new("p_lemma1", move |x: &Interval, p| {
        Ok(pol.eval_interval(x, p))
    }));
    reg.insert(RigorFn::new("flett", |x: &Interval, p| {
        flett_eval(x, flett_auto_terms(x), p)
    }));
    reg.insert(RigorFn::new("r23", |x: &Interval, p| {
        let mut acc = Interval::from_int(1); // n = 1: cos(t log 1) = 1
        for n in 2..=23u32 {
            let ln = rigor::log(&Interval::from_int(i64::from(n)), p)?;
            let c = rigor::cos(&x.mul(&ln, p), p)?;
            acc = acc.add(&c.div_uint(u64::from(n), p), p);
        }
        Ok(acc)
    }));
    reg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p64() -> Precision {
        Precision::new(64)
    }

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    fn assert_encloses(enc: &Interval, v: f64, tol: f64) {
        assert!(
            enc.lo().to_f64() <= v + tol && v - tol <= enc.hi().to_f64(),
            "{enc} does not enclose {v}"
        );
    }

    #[test]
    fn u_at_zero_is_log2_minus_half() {
        let enc = u_closed(&Interval::from_int(0), p64()).unwrap();
        assert_encloses(&enc, std::f64::consts::LN_2 - 0.5, 1e-15);
    }

    #[test]
    fn u_h_and_the_constant_gap() {
        // h(phi) + u(phi) must enclose log2 - 1/2 for sampled phi
        for num in [-5i64, -2, 1, 3, 5] {
            let phi = Interval::point(Dyadic::new(BigInt::from(num), -1));
            let h = h_closed(&phi, p64()).unwrap();
            let u = u_closed(&phi, p64()).unwrap();
            let sum = h.add(&u, p64());
            assert_encloses(&sum, std::f64::consts::LN_2 - 0.5, 1e-14);
        }
    }

    #[test]
    fn evenness_on_samples() {
        for num in [1i64, 3, 5] {
            let pos = Interval::point(Dyadic::new(BigInt::from(num), -1));
            let neg = Interval::point(Dyadic::new(BigInt::from(-num), -1));
            let a = u_closed(&pos, p64()).unwrap();
            let b = u_closed(&neg, p64()).unwrap();
            assert!(a.intersects(&b), "u(+-{num}/2) enclosures must overlap");
            let c = h_closed(&pos, p64()).unwrap();
            let d = h_closed(&neg, p64()).unwrap();
            assert!(c.intersects(&d));
        }
    }

    #[test]
    fn u_at_half_pi() {
        let half_pi = rigor::pi(p64()).scale_pow2(-1);
        let enc = u_closed(&half_pi, p64()).unwrap();
        assert_encloses(&enc, 0.5 - 0.5 * std::f64::consts::LN_2, 1e-13);
    }

    #[test]
    fn h_at_half_pi() {
        let half_pi = rigor::pi(p64()).scale_pow2(-1);
        let enc = h_closed(&half_pi, p64()).unwrap();
        assert_encloses(&enc, 1.5 * std::f64::consts::LN_2 - 1.0, 1e-13);
    }

    #[test]
    fn h_vanishes_at_zero() {
        let enc = h_closed(&Interval::from_int(0), p64()).unwrap();
        assert!(enc.contains_rational(&Rational::zero()));
        assert!(enc.width().to_f64() < 1e-17);
    }

    #[test]
    fn hprime_zero_at_origin() {
        let enc = hprime_closed(&Interval::from_int(0), p64()).unwrap();
        assert!(enc.contains_rational(&Rational::zero()));
        assert!(enc.width().to_f64() < 1e-17);
    }

    #[test]
    fn p_eval_constant_term() {
        let v = p_eval(&Rational::zero());
        assert_eq!(v.sign(p64()), Sign::Positive);
        assert!((v.to_f64() - 260.2224).abs() < 1e-3);
    }

    #[test]
    fn lemma1_sign_brackets() {
        assert_eq!(p_eval(&rat(39, 100)).sign(p64()), Sign::Positive);
        assert_eq!(p_eval(&rat(2, 5)).sign(p64()), Sign::Negative);
        // denominator at 1/3: 23040 + 160 - 30/81 > 0
        assert_eq!(
            denom_poly().eval_rational(&rat(1, 3)).sign(p64()),
            Sign::Positive
        );
    }

    #[test]
    fn lemma2_constant() {
        let enc = lemma2_check(p64()).unwrap();
        assert_encloses(&enc, 0.570891, 2e-6);
        assert!(enc.lo().to_f64() > 0.5708);
        assert!(enc.width().to_f64() <= 2e-6);
    }

    #[test]
    fn lemma3_chain() {
        assert!(lemma3_chain_check(p64()));
        // spot values behind the chain
        let c = two_cos_half(&Interval::from_int(3), p64()).unwrap();
        assert_encloses(&c, 0.1414744, 1e-6);
        let inv = Interval::from_int(1).div(&c, p64()).unwrap();
        assert_encloses(&inv, 7.0684, 1e-3);
    }

    #[test]
    fn flett_small_t_slope() {
        // F(t)/t -> zeta(2) as t -> 0
        let t = Interval::point(Dyadic::new(BigInt::one(), -10));
        let enc = flett_eval(&t, 64, p64()).unwrap();
        let expected = 1.6449340668 / 1024.0;
        assert_encloses(&enc, expected, 2e-7);
        assert!(enc.lo().is_positive());
    }

    #[test]
    fn r23_at_zero_is_harmonic_number() {
        let h23: f64 = (1..=23).map(|n| 1.0 / n as f64).sum();
        assert!((r23_eval(0.0f64) - h23).abs() < 1e-12);
        assert!((h23 - 3.734292).abs() < 1e-6);
    }

    #[test]
    fn r23_zero_residuals_and_order() {
        let zeros = r23_zeros(0.5f64, 20.0, 0.05, 1e-12);
        assert!(!zeros.is_empty());
        for w in zeros.windows(2) {
            assert!(w[0] < w[1]);
        }
        for z in &zeros {
            assert!(r23_eval(*z).abs() <= 1e-10, "residual at {z}");
        }
    }

    #[test]
    fn q_ratio_at_zero() {
        for n in 2..=10u32 {
            let q: f64 = q_ratio(n, 0.0);
            assert!((q - (n as f64 + 1.0) / n as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn q_logconvex_and_mutation() {
        let grid: Vec<f64> = (0..=80).map(|i| -10.0 + 0.25 * i as f64).collect();
        assert!(q_logconvex_check(3, &grid));
        // mutation: 1/Q bends the other way
        let neg: Vec<f64> = grid.iter().map(|&x| -q_ratio(3, x).ln()).collect();
        assert!(min_second_difference(&neg) < -1e-12);
    }

    #[test]
    fn u_series_closed_form_at_phi_zero() {
        // sum (-1)^(n-1) r^n/(n+2) = (log(1+r) - r + r^2/2)/r^2
        let r = 0.5f64;
        let (value, tail) = u_series(r, 0.0, 60).unwrap();
        let oracle = ((1.0 + r).ln() - r + r * r / 2.0) / (r * r);
        assert!((value - oracle).abs() <= tail + 1e-15);
        assert!(tail < 1e-18);
    }

    #[test]
    fn u_series_radius_error() {
        assert_eq!(u_series(1.0f64, 0.3, 10), Err(RadiusError));
    }

    #[test]
    fn u_series_inequality_at_paper_radius() {
        let (v0, t0) = u_series(0.883f64, 0.0, 400).unwrap();
        let (v2, t2) = u_series(0.883f64, 2.0, 400).unwrap();
        assert!(v2 + t2 < v0 - t0);
    }

    #[test]
    fn registry_names_complete() {
        let reg = registry();
        for name in ["h", "hprime", "u", "p_lemma1", "flett", "r23"] {
            assert!(reg.get(name).is_some(), "missing {name}");
        }
    }
}
