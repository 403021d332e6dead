//! Maximal Slope Principle certificates: generation, independent
//! verification, sharded runs, and adaptive sup-bound proofs.
//!
//! A certificate for `f > 0` on `[a, b]` with slope bound `|f'| <= M` is a
//! descending chain of dyadic points `b = t_1 > t_2 > ... > t_m >= a` with
//! rigorous lower bounds `l_k > 0` such that `t_{k+1} >= t_k - l_k / M` and
//! `t_m - l_m / M < a`. The verifier trusts nothing: it re-evaluates `f` at
//! every point and replays the chain with its own lower bounds.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rigor::{Dyadic, Interval, Precision, Rational, RigorError, Rounding};

/// A named function with a rigorous interval evaluator. The evaluator must
/// satisfy containment and be deterministic given `(interval, precision)`.
pub struct RigorFn {
    name: String,
    eval: Box<dyn Fn(&Interval, Precision) -> Result<Interval, RigorError> + Send + Sync>,
}

impl RigorFn {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&Interval, Precision) -> Result<Interval, RigorError> + Send + Sync + 'static,
    ) -> Self {
        RigorFn {
            name: name.into(),
            eval: Box::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: &Interval, p: Precision) -> Result<Interval, RigorError> {
        (self.eval)(x, p)
    }
}

impl fmt::Debug for RigorFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RigorFn").field("name", &self.name).finish()
    }
}

/// Immutable name -> function map used by the verifier.
#[derive(Default, Debug)]
pub struct Registry {
    fns: BTreeMap<String, Arc<RigorFn>>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    pub fn insert(&mut self, f: RigorFn) {
        self.fns.insert(f.name().to_string(), Arc::new(f));
    }

    pub fn get(&self, name: &str) -> Option<&Arc<RigorFn>> {
        self.fns.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.fns.keys().map(|s| s.as_str())
    }
}

/// Slope bound: a single constant `M > 0`, or a piecewise-constant table of
/// contiguous segments. A step taken from `t` uses the segment containing `t`
/// and never crosses its lower edge, so the mean-value argument stays within
/// the range where the caller asserted the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlopeBound {
    Const(Dyadic),
    Table(Vec<SlopeSegment>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeSegment {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub bound: Dyadic,
}

impl SlopeBound {
    pub fn constant(m: Dyadic) -> Result<Self, MspError> {
        if !m.is_positive() {
            return Err(MspError::InvalidSlope("slope bound must be positive".into()));
        }
        Ok(SlopeBound::Const(m))
    }

    /// Segments must be sorted, contiguous, and positive.
    pub fn table(segments: Vec<SlopeSegment>) -> Result<Self, MspError> {
        if segments.is_empty() {
            return Err(MspError::InvalidSlope("empty slope table".into()));
        }
        for s in &segments {
            if !s.bound.is_positive() {
                return Err(MspError::InvalidSlope("slope bound must be positive".into()));
            }
            if s.lo >= s.hi {
                return Err(MspError::InvalidSlope("empty slope segment".into()));
            }
        }
        for w in segments.windows(2) {
            if w[0].hi != w[1].lo {
                return Err(MspError::InvalidSlope(
                    "slope segments must be contiguous".into(),
                ));
            }
        }
        Ok(SlopeBound::Table(segments))
    }

    /// Checks the bound covers `[a, b]` without gaps.
    pub fn covers(&self, a: &Dyadic, b: &Dyadic) -> bool {
        match self {
            SlopeBound::Const(_) => true,
            SlopeBound::Table(segs) => {
                segs.first().map(|s| &s.lo <= a).unwrap_or(false)
                    && segs.last().map(|s| &s.hi >= b).unwrap_or(false)
            }
        }
    }

    /// Bound applying at `t` plus the segment's lower edge (steps clamp
    /// there). A boundary point belongs to the segment below it.
    fn at(&self, t: &Dyadic) -> (&Dyadic, Option<&Dyadic>) {
        match self {
            SlopeBound::Const(m) => (m, None),
            SlopeBound::Table(segs) => {
                for (i, s) in segs.iter().enumerate() {
                    if (&s.lo < t || (i == 0 && &s.lo <= t)) && t <= &s.hi {
                        return (&s.bound, Some(&s.lo));
                    }
                }
                let s = if t < &segs[0].lo {
                    &segs[0]
                } else {
                    segs.last().expect("nonempty")
                };
                (&s.bound, Some(&s.lo))
            }
        }
    }
}

/// Ordered dyadic descent with positive lower bounds proving `f > 0` on
/// `[a, b]`. Points run from `b` down; the recorded bounds are hints, the
/// verifier recomputes them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub fn_name: String,
    pub a: Dyadic,
    pub b: Dyadic,
    pub slope: SlopeBound,
    pub precision: u32,
    pub points: Vec<(Dyadic, Dyadic)>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum MspError {
    #[error("cannot certify: lower bound {lower} <= 0 at {at}")]
    CannotCertify { at: Dyadic, lower: Dyadic },
    #[error("step underflow at {at}: function too close to 0 at working precision")]
    StepUnderflow { at: Dyadic },
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
    #[error("bisection depth exceeded; undecided on [{0}, {1}]")]
    DepthExceeded(Dyadic, Dyadic),
    #[error("invalid slope bound: {0}")]
    InvalidSlope(String),
    #[error("invalid range: need a < b")]
    InvalidRange,
    #[error("invalid step fraction: need 0 < fraction <= 1")]
    InvalidFraction,
    #[error("evaluation failed at {at}: {source}")]
    Eval { at: Dyadic, source: RigorError },
    #[error("certificate parse error: {0}")]
    Parse(String),
}

/// Verification verdict; the reason string names the first failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyOutcome {
    Valid,
    Invalid(String),
}

impl VerifyOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, VerifyOutcome::Valid)
    }
}

fn min_step(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << (bits as u64 + 8))
}

/// Grid exponent for rounding the next point: the standard `bits`-bit grid,
/// refined further when the step itself is smaller than that grid would
/// resolve (otherwise tiny steps would round away entirely).
fn step_grid(target: &Rational, step: &Rational, bits: u32) -> i64 {
    use crate::rigor::rational_floor_log2_abs;
    let g_abs = if target.is_zero() {
        -i64::from(bits)
    } else {
        rational_floor_log2_abs(target).max(0) - i64::from(bits)
    };
    let g_step = rational_floor_log2_abs(step) - 8;
    g_abs.min(g_step)
}

/// Greedy descent from `b`: at each point take the enclosure's lower bound
/// `l`, step down by `fraction * l / M`, and stop once a full step would
/// cross `a`. The next point is the rounded-down dyadic of the target unless
/// that would breach the chain invariant `t_{k+1} >= t_k - l/M`, in which
/// case it rounds up instead (only possible at fraction 1).
pub fn msp_certify(
    f: &RigorFn,
    a: &Dyadic,
    b: &Dyadic,
    slope: &SlopeBound,
    p: Precision,
    fraction: &Rational,
) -> Result<Certificate, MspError> {
    if a >= b {
        return Err(MspError::InvalidRange);
    }
    if !fraction.is_positive() || fraction > &Rational::one() {
        return Err(MspError::InvalidFraction);
    }
    if !slope.covers(a, b) {
        return Err(MspError::InvalidSlope(format!(
            "slope table does not cover [{a}, {b}]"
        )));
    }

    let tiny = min_step(p.bits());
    let a_rat = a.to_rational();
    let mut points = Vec::new();
    let mut t = b.clone();
    loop {
        let enc = f
            .eval(&Interval::point(t.clone()), p)
            .map_err(|source| MspError::Eval {
                at: t.clone(),
                source,
            })?;
        let l = enc.lo().clone();
        if !l.is_positive() {
            return Err(MspError::CannotCertify { at: t, lower: l });
        }
        points.push((t.clone(), l.clone()));

        let (m, seg_lo) = slope.at(&t);
        let full_reach = t.to_rational() - l.to_rational() / m.to_rational();
        let at_bottom_segment = seg_lo.map_or(true, |lo| lo <= a);
        if at_bottom_segment && full_reach < a_rat {
            return Ok(Certificate {
                fn_name: f.name().to_string(),
                a: a.clone(),
                b: b.clone(),
                slope: slope.clone(),
                precision: p.bits(),
                points,
            });
        }

        let step = fraction * l.to_rational() / m.to_rational();
        if step < tiny {
            return Err(MspError::StepUnderflow { at: t });
        }
        let target = t.to_rational() - &step;
        let grid = step_grid(&target, &step, p.bits());
        let mut next = Dyadic::from_rational_granular(&target, grid, Rounding::Down);
        if next.to_rational() < full_reach {
            next = Dyadic::from_rational_granular(&target, grid, Rounding::Up);
        }
        if let Some(lo) = seg_lo {
            if &next < lo && lo >= a {
                next = lo.clone();
            }
        }
        if &next < a {
            next = a.clone();
        }
        if next >= t {
            return Err(MspError::StepUnderflow { at: t });
        }
        t = next;
    }
}

/// Independent verification. Re-evaluates `f` at every recorded point at the
/// certificate's precision and replays the chain with the recomputed lower
/// bounds; recorded bounds are never trusted.
pub fn msp_verify(cert: &Certificate, registry: &Registry) -> Result<VerifyOutcome, MspError> {
    let f = registry
        .get(&cert.fn_name)
        .ok_or_else(|| MspError::UnknownFunction(cert.fn_name.clone()))?;
    if cert.precision < Precision::MIN_BITS {
        return Ok(VerifyOutcome::Invalid("precision below minimum".into()));
    }
    let p = Precision::new(cert.precision);
    if cert.a >= cert.b {
        return Ok(VerifyOutcome::Invalid("empty range".into()));
    }
    if !cert.slope.covers(&cert.a, &cert.b) {
        return Ok(VerifyOutcome::Invalid(
            "slope bound does not cover range".into(),
        ));
    }
    if cert.points.is_empty() {
        return Ok(VerifyOutcome::Invalid("no points".into()));
    }
    if cert.points[0].0 != cert.b {
        return Ok(VerifyOutcome::Invalid("first point is not b".into()));
    }
    if cert.points.last().expect("nonempty").0 < cert.a {
        return Ok(VerifyOutcome::Invalid("last point below a".into()));
    }

    let a_rat = cert.a.to_rational();
    let mut recomputed = Vec::with_capacity(cert.points.len());
    for (k, (t, _)) in cert.points.iter().enumerate() {
        if k + 1 < cert.points.len() && cert.points[k + 1].0 >= *t {
            return Ok(VerifyOutcome::Invalid(format!(
                "points not strictly decreasing at index {k}"
            )));
        }
        let enc = match f.eval(&Interval::point(t.clone()), p) {
            Ok(e) => e,
            Err(e) => {
                return Ok(VerifyOutcome::Invalid(format!(
                    "evaluation failed at index {k}: {e}"
                )))
            }
        };
        if !enc.lo().is_positive() {
            return Ok(VerifyOutcome::Invalid(format!(
                "non-positive bound at index {k} (t = {t})"
            )));
        }
        recomputed.push(enc.lo().clone());
    }

    for k in 0..cert.points.len() {
        let (t, _) = &cert.points[k];
        let (m, seg_lo) = cert.slope.at(t);
        let reach = t.to_rational() - recomputed[k].to_rational() / m.to_rational();
        if k + 1 < cert.points.len() {
            let next = &cert.points[k + 1].0;
            if next.to_rational() < reach {
                return Ok(VerifyOutcome::Invalid(format!(
                    "chain gap after index {k}: {next} < t - l/M"
                )));
            }
            if let Some(lo) = seg_lo {
                if next < lo && lo > &cert.a {
                    return Ok(VerifyOutcome::Invalid(format!(
                        "step crosses slope segment edge after index {k}"
                    )));
                }
            }
        } else {
            let at_bottom = seg_lo.map_or(true, |lo| lo <= &cert.a);
            if !(at_bottom && reach < a_rat) {
                return Ok(VerifyOutcome::Invalid(
                    "terminal step does not cross a".into(),
                ));
            }
        }
    }
    Ok(VerifyOutcome::Valid)
}

/// Coverage algebra on the recorded data alone: the union of half-open
/// intervals `(t_k - l_k/M, t_k]` must contain `[a, b]`. Exact dyadic and
/// rational arithmetic, no function evaluation.
pub fn coverage_check(cert: &Certificate) -> Result<(), MspError> {
    if cert.points.is_empty() || cert.points[0].0 != cert.b {
        return Err(MspError::Parse("coverage: missing top point".into()));
    }
    let a_rat = cert.a.to_rational();
    for k in 0..cert.points.len() {
        let (t, l) = &cert.points[k];
        let (m, _) = cert.slope.at(t);
        let reach = t.to_rational() - l.to_rational() / m.to_rational();
        let covered = if k + 1 < cert.points.len() {
            cert.points[k + 1].0.to_rational() >= reach
        } else {
            reach < a_rat
        };
        if !covered {
            return Err(MspError::Parse(format!("coverage gap at index {k}")));
        }
    }
    Ok(())
}

/// Splits `[a, b]` into contiguous dyadic subintervals, certifies each
/// independently, and concatenates. The result verifies exactly like a
/// single-run certificate over `[a, b]`.
pub fn msp_certify_sharded(
    f: &RigorFn,
    a: &Dyadic,
    b: &Dyadic,
    slope: &SlopeBound,
    p: Precision,
    fraction: &Rational,
    shards: u32,
) -> Result<Certificate, MspError> {
    assert!(shards >= 1);
    if a >= b {
        return Err(MspError::InvalidRange);
    }
    if shards == 1 {
        return msp_certify(f, a, b, slope, p, fraction);
    }
    // dyadic cut points a = c_0 < c_1 < ... < c_n = b
    let mut cuts = vec![a.clone()];
    let span = b.to_rational() - a.to_rational();
    for i in 1..shards {
        let target =
            a.to_rational() + &span * Rational::new(BigInt::from(i), BigInt::from(shards));
        let mut c = Dyadic::from_rational(&target, p.bits(), Rounding::Down);
        if &c <= cuts.last().expect("nonempty") {
            c = cuts
                .last()
                .expect("nonempty")
                .add(&Dyadic::new(BigInt::one(), -i64::from(p.bits())));
        }
        if &c >= b {
            break;
        }
        cuts.push(c);
    }
    cuts.push(b.clone());

    // certify from the top shard down so points stay descending
    let mut points: Vec<(Dyadic, Dyadic)> = Vec::new();
    for w in cuts.windows(2).rev() {
        let sub = msp_certify(f, &w[0], &w[1], slope, p, fraction)?;
        for pt in sub.points {
            if points.last().map_or(false, |last| last.0 == pt.0) {
                continue; // shard seam landed exactly on the cut
            }
            points.push(pt);
        }
    }
    Ok(Certificate {
        fn_name: f.name().to_string(),
        a: a.clone(),
        b: b.clone(),
        slope: slope.clone(),
        precision: p.bits(),
        points,
    })
}

/// Outcome of an adaptive sup-bound proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupAbsOutcome {
    Proved,
    /// Witness subinterval on which the claim fails everywhere.
    Failed(Interval),
}

enum Class {
    Accept,
    Reject,
    Split,
}

/// Adaptive bisection engine shared by the sup-bound and positivity proofs.
/// Evaluation errors on a subinterval force a split.
fn adaptive_prove(
    f: &RigorFn,
    a: &Dyadic,
    b: &Dyadic,
    p: Precision,
    max_depth: u32,
    classify: impl Fn(&Interval) -> Class,
) -> Result<SupAbsOutcome, MspError> {
    let root = Interval::new(a.clone(), b.clone()).map_err(|_| MspError::InvalidRange)?;
    let mut stack = vec![(root, 0u32)];
    while let Some((iv, depth)) = stack.pop() {
        let class = match f.eval(&iv, p) {
            Ok(enc) => classify(&enc),
            Err(_) => Class::Split,
        };
        match class {
            Class::Accept => {}
            Class::Reject => return Ok(SupAbsOutcome::Failed(iv)),
            Class::Split => {
                if depth >= max_depth {
                    return Err(MspError::DepthExceeded(iv.lo().clone(), iv.hi().clone()));
                }
                let (l, r) = iv.bisect();
                stack.push((r, depth + 1));
                stack.push((l, depth + 1));
            }
        }
    }
    Ok(SupAbsOutcome::Proved)
}

/// Proves `sup |f| < threshold` on `[a, b]` by adaptive bisection: accept a
/// subinterval once its enclosure lies inside `(-threshold, threshold)`;
/// report failure with a witness if an enclosure sits entirely outside.
pub fn bound_sup_abs(
    f: &RigorFn,
    a: &Dyadic,
    b: &Dyadic,
    threshold: &Dyadic,
    p: Precision,
    max_depth: u32,
) -> Result<SupAbsOutcome, MspError> {
    assert!(threshold.is_positive());
    let t = threshold.clone();
    let neg_t = threshold.neg();
    adaptive_prove(f, a, b, p, max_depth, move |enc| {
        if enc.hi() < &t && enc.lo() > &neg_t {
            Class::Accept
        } else if enc.lo() >= &t || enc.hi() <= &neg_t {
            Class::Reject
        } else {
            Class::Split
        }
    })
}

/// Proves `f > 0` on `[a, b]` by the same adaptive scheme.
pub fn prove_positive(
    f: &RigorFn,
    a: &Dyadic,
    b: &Dyadic,
    p: Precision,
    max_depth: u32,
) -> Result<SupAbsOutcome, MspError> {
    adaptive_prove(f, a, b, p, max_depth, |enc| {
        if enc.lo().is_positive() {
            Class::Accept
        } else if !enc.hi().is_positive() {
            Class::Reject
        } else {
            Class::Split
        }
    })
}

// --- certificate text format -------------------------------------------------

impl Certificate {
    /// Line-oriented text form; round-trips byte-exactly through
    /// [`Certificate::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("MSPCERT v1\n");
        out.push_str(&format!("fn: {}\n", self.fn_name));
        out.push_str(&format!("a: {}\n", self.a));
        out.push_str(&format!("b: {}\n", self.b));
        match &self.slope {
            SlopeBound::Const(m) => out.push_str(&format!("slope: const {m}\n")),
            SlopeBound::Table(segs) => {
                out.push_str(&format!("slope: table {}\n", segs.len()));
                for s in segs {
                    out.push_str(&format!("{} {} {}\n", s.lo, s.hi, s.bound));
                }
            }
        }
        out.push_str(&format!("prec: {}\n", self.precision));
        out.push_str(&format!("points: {}\n", self.points.len()));
        for (t, l) in &self.points {
            out.push_str(&format!("{t} {l}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, MspError> {
        let bad = |msg: &str| MspError::Parse(msg.to_string());
        let mut lines = text.lines();
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| MspError::Parse(format!("missing {what}")))
        };
        if next("header")? != "MSPCERT v1" {
            return Err(bad("bad header"));
        }
        let field = |line: &str, key: &str| -> Result<String, MspError> {
            line.strip_prefix(key)
                .map(|v| v.trim().to_string())
                .ok_or_else(|| MspError::Parse(format!("expected {key:?}")))
        };
        let parse_dyadic = |s: &str| -> Result<Dyadic, MspError> {
            s.parse()
                .map_err(|e: RigorError| MspError::Parse(e.to_string()))
        };
        let fn_name = field(next("fn")?, "fn:")?;
        let a = parse_dyadic(&field(next("a")?, "a:")?)?;
        let b = parse_dyadic(&field(next("b")?, "b:")?)?;
        let slope_spec = field(next("slope")?, "slope:")?;
        let slope = if let Some(m) = slope_spec.strip_prefix("const ") {
            SlopeBound::constant(parse_dyadic(m.trim())?)?
        } else if let Some(n) = slope_spec.strip_prefix("table ") {
            let n: usize = n.trim().parse().map_err(|_| bad("bad slope table size"))?;
            let mut segs = Vec::with_capacity(n);
            for _ in 0..n {
                let row = next("slope row")?;
                let mut cols = row.split_whitespace();
                let lo = parse_dyadic(cols.next().ok_or_else(|| bad("slope row"))?)?;
                let hi = parse_dyadic(cols.next().ok_or_else(|| bad("slope row"))?)?;
                let bound = parse_dyadic(cols.next().ok_or_else(|| bad("slope row"))?)?;
                segs.push(SlopeSegment { lo, hi, bound });
            }
            SlopeBound::table(segs)?
        } else {
            return Err(bad("bad slope spec"));
        };
        let precision: u32 = field(next("prec")?, "prec:")?
            .parse()
            .map_err(|_| bad("bad precision"))?;
        let m: usize = field(next("points")?, "points:")?
            .parse()
            .map_err(|_| bad("bad point count"))?;
        let mut points = Vec::with_capacity(m);
        for _ in 0..m {
            let row = next("point row")?;
            let mut cols = row.split_whitespace();
            let t = parse_dyadic(cols.next().ok_or_else(|| bad("point row"))?)?;
            let l = parse_dyadic(cols.next().ok_or_else(|| bad("point row"))?)?;
            points.push((t, l));
        }
        if lines.next().map_or(false, |l| !l.trim().is_empty()) {
            return Err(bad("trailing content"));
        }
        Ok(Certificate {
            fn_name,
            a,
            b,
            slope,
            precision,
            points,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigor::{self, parse_rational};

    fn p64() -> Precision {
        Precision::new(64)
    }

    fn dy(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    /// f == 2, a constant enclosure.
    fn const_two() -> RigorFn {
        RigorFn::new("two", |_x, _p| Ok(Interval::from_int(2)))
    }

    /// Identity; exact, since dyadics pass through unchanged.
    fn identity() -> RigorFn {
        RigorFn::new("id", |x: &Interval, _p| Ok(x.clone()))
    }

    fn affine() -> RigorFn {
        // f(x) = x + 1/4
        RigorFn::new("affine", |x: &Interval, p| {
            Ok(x.add(&Interval::point(Dyadic::new(BigInt::one(), -2)), p))
        })
    }

    fn registry_with(fns: Vec<RigorFn>) -> Registry {
        let mut r = Registry::new();
        for f in fns {
            r.insert(f);
        }
        r
    }

    #[test]
    fn constant_function_single_step() {
        let f = const_two();
        let slope = SlopeBound::constant(Dyadic::one()).unwrap();
        let cert = msp_certify(
            &f,
            &Dyadic::zero(),
            &Dyadic::one(),
            &slope,
            p64(),
            &Rational::one(),
        )
        .unwrap();
        // 1 - 2/1 < 0: one point suffices
        assert_eq!(cert.points.len(), 1);
        assert_eq!(cert.points[0], (Dyadic::one(), Dyadic::from_int(2)));
        let reg = registry_with(vec![const_two()]);
        assert!(msp_verify(&cert, &reg).unwrap().is_valid());
        coverage_check(&cert).unwrap();
    }

    #[test]
    fn identity_underflows_near_zero() {
        let f = identity();
        let slope = SlopeBound::constant(Dyadic::one()).unwrap();
        let frac = parse_rational("1/2").unwrap();
        let err =
            msp_certify(&f, &Dyadic::zero(), &Dyadic::one(), &slope, p64(), &frac).unwrap_err();
        match err {
            MspError::StepUnderflow { at } => {
                assert!(at.to_f64() < 1e-15, "underflow should happen near 0")
            }
            other => panic!("expected StepUnderflow, got {other:?}"),
        }
    }

    #[test]
    fn negative_function_cannot_certify() {
        let f = RigorFn::new("neg", |_x, _p| Ok(Interval::from_int(-1)));
        let slope = SlopeBound::constant(Dyadic::one()).unwrap();
        let err = msp_certify(
            &f,
            &Dyadic::zero(),
            &Dyadic::one(),
            &slope,
            p64(),
            &Rational::one(),
        )
        .unwrap_err();
        assert!(matches!(err, MspError::CannotCertify { .. }));
    }

    #[test]
    fn verify_rejects_tampering() {
        let slope = SlopeBound::constant(Dyadic::from_int(4)).unwrap();
        let cert = msp_certify(
            &affine(),
            &Dyadic::zero(),
            &Dyadic::one(),
            &slope,
            p64(),
            &Rational::one(),
        )
        .unwrap();
        assert!(cert.points.len() > 2);
        let reg = registry_with(vec![affine()]);
        assert!(msp_verify(&cert, &reg).unwrap().is_valid());

        // perturb an interior point downward so a gap opens above it
        let mut broken = cert.clone();
        broken.points[1].0 = broken.points[1].0.sub(&dy(1, -3));
        let out = msp_verify(&broken, &reg).unwrap();
        assert!(matches!(out, VerifyOutcome::Invalid(ref r) if r.contains("chain gap")));

        // claim about a constant negative function
        let neg_cert = Certificate {
            fn_name: "negone".into(),
            a: Dyadic::zero(),
            b: Dyadic::one(),
            slope: SlopeBound::constant(Dyadic::one()).unwrap(),
            precision: 64,
            points: vec![(Dyadic::one(), Dyadic::one())],
        };
        let reg2 = registry_with(vec![RigorFn::new("negone", |_x, _p| {
            Ok(Interval::from_int(-1))
        })]);
        let out2 = msp_verify(&neg_cert, &reg2).unwrap();
        assert!(matches!(out2, VerifyOutcome::Invalid(ref r) if r.contains("non-positive")));

        // unknown function is an error, not an invalid verdict
        assert!(matches!(
            msp_verify(&neg_cert, &reg),
            Err(MspError::UnknownFunction(_))
        ));
    }

    #[test]
    fn sharded_matches_single_run_semantics() {
        let slope = SlopeBound::constant(Dyadic::from_int(4)).unwrap();
        let frac = Rational::one();
        let single = msp_certify(
            &affine(),
            &Dyadic::zero(),
            &Dyadic::one(),
            &slope,
            p64(),
            &frac,
        )
        .unwrap();
        for shards in [1u32, 2, 4] {
            let cert = msp_certify_sharded(
                &affine(),
                &Dyadic::zero(),
                &Dyadic::one(),
                &slope,
                p64(),
                &frac,
                shards,
            )
            .unwrap();
            let reg = registry_with(vec![affine()]);
            assert!(msp_verify(&cert, &reg).unwrap().is_valid(), "{shards} shards");
            coverage_check(&cert).unwrap();
            if shards == 1 {
                assert_eq!(cert, single);
            }
        }
    }

    #[test]
    fn constant_two_shards_cover_unit_interval() {
        let f = const_two();
        let slope = SlopeBound::constant(Dyadic::one()).unwrap();
        let cert = msp_certify_sharded(
            &f,
            &Dyadic::zero(),
            &Dyadic::one(),
            &slope,
            p64(),
            &Rational::one(),
            2,
        )
        .unwrap();
        let reg = registry_with(vec![const_two()]);
        assert!(msp_verify(&cert, &reg).unwrap().is_valid());
    }

    #[test]
    fn determinism_and_text_roundtrip() {
        let slope = SlopeBound::constant(Dyadic::from_int(4)).unwrap();
        let run = || {
            msp_certify(
                &affine(),
                &Dyadic::zero(),
                &Dyadic::one(),
                &slope,
                p64(),
                &Rational::one(),
            )
            .unwrap()
        };
        let c1 = run();
        let c2 = run();
        assert_eq!(c1.to_text(), c2.to_text());

        let parsed = Certificate::parse(&c1.to_text()).unwrap();
        assert_eq!(parsed, c1);
        assert_eq!(parsed.to_text(), c1.to_text());
    }

    #[test]
    fn table_slope_roundtrip_and_verify() {
        let f = const_two();
        let segs = vec![
            SlopeSegment {
                lo: Dyadic::zero(),
                hi: dy(1, -1),
                bound: Dyadic::one(),
            },
            SlopeSegment {
                lo: dy(1, -1),
                hi: Dyadic::one(),
                bound: Dyadic::from_int(8),
            },
        ];
        let slope = SlopeBound::table(segs).unwrap();
        let cert = msp_certify(
            &f,
            &Dyadic::zero(),
            &Dyadic::one(),
            &slope,
            p64(),
            &Rational::one(),
        )
        .unwrap();
        let reg = registry_with(vec![const_two()]);
        assert!(msp_verify(&cert, &reg).unwrap().is_valid());
        let parsed = Certificate::parse(&cert.to_text()).unwrap();
        assert_eq!(parsed, cert);
    }

    #[test]
    fn fraction_half_needs_more_steps() {
        let slope = SlopeBound::constant(Dyadic::from_int(4)).unwrap();
        let full = msp_certify(
            &affine(),
            &Dyadic::zero(),
            &Dyadic::one(),
            &slope,
            p64(),
            &Rational::one(),
        )
        .unwrap();
        let half = msp_certify(
            &affine(),
            &Dyadic::zero(),
            &Dyadic::one(),
            &slope,
            p64(),
            &parse_rational("1/2").unwrap(),
        )
        .unwrap();
        assert!(half.points.len() >= full.points.len());
    }

    #[test]
    fn sup_abs_constant_cases() {
        let f = const_two();
        let ok = bound_sup_abs(
            &f,
            &Dyadic::zero(),
            &Dyadic::one(),
            &Dyadic::from_int(3),
            p64(),
            10,
        )
        .unwrap();
        assert_eq!(ok, SupAbsOutcome::Proved);
        // threshold equal to the sup is not strict
        let not_strict = bound_sup_abs(
            &f,
            &Dyadic::zero(),
            &Dyadic::one(),
            &Dyadic::from_int(2),
            p64(),
            10,
        );
        assert!(matches!(
            not_strict,
            Ok(SupAbsOutcome::Failed(_)) | Err(MspError::DepthExceeded(_, _))
        ));
    }

    #[test]
    fn sup_abs_uses_elementary_enclosures() {
        // |sin| < 1.009765625 on [0, 3] needs splitting near pi/2
        let f = RigorFn::new("sin", |x: &Interval, p| rigor::sin(x, p));
        let threshold = dy(517, -9);
        let out = bound_sup_abs(&f, &Dyadic::zero(), &Dyadic::from_int(3), &threshold, p64(), 30)
            .unwrap();
        assert_eq!(out, SupAbsOutcome::Proved);
    }
}
