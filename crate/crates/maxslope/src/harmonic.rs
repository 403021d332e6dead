//! Numerical confirmation of the disc picture: the Poisson representation of
//! the harmonic gap function `U`, a discrete brute-force check of the
//! rearrangement inequality, the strict-gap integral, and the grid scan of
//! the minimum-at-zero claim for radii below 1.
//!
//! Everything here is approximation tier (floating point with stated
//! tolerances), generic over the scalar; the rigorous artifact for the
//! boundary case lives in [`crate::msp`] and [`crate::paperfns`].

use num_traits::{Float, FromPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HarmonicError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("parameter ordering violated: {0}")]
    ParameterOrder(String),
}

fn c<F: Float + FromPrimitive>(x: f64) -> F {
    F::from_f64(x).expect("scalar conversion")
}

/// `P_r(t) = (1 - r^2) / (1 + r^2 - 2 r cos t)`; positive and even in `t`.
pub fn poisson_kernel<F: Float + FromPrimitive>(r: F, t: F) -> F {
    let one = F::one();
    (one - r * r) / (one + r * r - (r + r) * t.cos())
}

/// Boundary values of the harmonic gap: the floating twin of the rigorous
/// closed form, `log 2 - 1 + cos t - (t/2) sin 2t - cos 2t log(2 cos(t/2))`.
/// Blows up logarithmically at `t = +-pi`.
pub fn h_boundary<F: Float + FromPrimitive>(t: F) -> F {
    let two = c::<F>(2.0);
    let ln2 = c::<F>(std::f64::consts::LN_2);
    ln2 - F::one() + t.cos() - t / two * (two * t).sin()
        - (two * t).cos() * (two * (t / two).cos()).ln()
}

/// Interior values from the closed form: with `L = log|1 + r e^{i phi}|` and
/// `A = arg(1 + r e^{i phi})`,
/// `U(r, phi) = log 2 - 1 + cos(phi)/r - (L cos 2phi + A sin 2phi)/r^2`.
/// Validated against direct complex evaluation in the test suite.
pub fn u_direct<F: Float + FromPrimitive>(r: F, phi: F) -> F {
    assert!(r > F::zero() && r < F::one(), "u_direct needs 0 < r < 1");
    let one = F::one();
    let two = c::<F>(2.0);
    let ln2 = c::<F>(std::f64::consts::LN_2);
    let (s, co) = phi.sin_cos();
    let big_l = (one + two * r * co + r * r).ln() / two;
    let big_a = (r * s).atan2(one + r * co);
    let two_phi = two * phi;
    ln2 - one + co / r - (big_l * two_phi.cos() + big_a * two_phi.sin()) / (r * r)
}

/// Simpson quadrature cells for the Poisson integral: uniform in the middle,
/// geometrically graded toward `+-pi` (ratio 1/2, depth 30) where the
/// boundary density has its logarithmic singularity.
fn graded_cells<F: Float + FromPrimitive>(n_quad: usize) -> Vec<(F, F)> {
    let pi = c::<F>(std::f64::consts::PI);
    let w = c::<F>(0.5);
    let depth = 30;
    let half = c::<F>(0.5);
    let mut cells = Vec::new();
    // left graded region, ascending from near -pi
    for j in (0..depth).rev() {
        let outer = -pi + w * half.powi(j);
        let inner = -pi + w * half.powi(j + 1);
        cells.push((inner, outer));
    }
    // uniform middle
    let lo = -pi + w;
    let hi = pi - w;
    let dm = (hi - lo) / c::<F>(n_quad as f64);
    for i in 0..n_quad {
        let a = lo + dm * c::<F>(i as f64);
        let b = if i + 1 == n_quad {
            hi
        } else {
            lo + dm * c::<F>((i + 1) as f64)
        };
        cells.push((a, b));
    }
    // right graded region
    for j in 0..depth {
        let outer = pi - w * half.powi(j);
        let inner = pi - w * half.powi(j + 1);
        cells.push((outer, inner));
    }
    cells
}

fn simpson_on<F: Float + FromPrimitive>(f: &impl Fn(F) -> F, a: F, b: F, subcells: usize) -> F {
    let n = subcells.max(1);
    let h = (b - a) / c::<F>(n as f64);
    let six = c::<F>(6.0);
    let four = c::<F>(4.0);
    let half = c::<F>(0.5);
    let mut acc = F::zero();
    for i in 0..n {
        let x0 = a + h * c::<F>(i as f64);
        let x1 = x0 + h;
        let xm = x0 + h * half;
        acc = acc + h / six * (f(x0) + four * f(xm) + f(x1));
    }
    acc
}

/// `U(r, phi)` via the Poisson integral `(1/2pi) \int h(t) P_r(phi - t) dt`
/// on the graded mesh. Converges to [`u_direct`] as `n_quad` grows.
pub fn u_poisson<F: Float + FromPrimitive>(r: F, phi: F, n_quad: usize) -> F {
    assert!(n_quad >= 64, "n_quad too small for the graded mesh");
    assert!(r >= F::zero() && r < F::one());
    let tau = c::<F>(std::f64::consts::TAU);
    let dm = (tau - F::one()) / c::<F>(n_quad as f64);
    let integrand = |t: F| h_boundary(t) * poisson_kernel(r, phi - t);
    let mut acc = F::zero();
    for (a, b) in graded_cells::<F>(n_quad) {
        let width = b - a;
        // keep subcell width at or below the middle resolution; the kernel
        // peak may sit inside a graded end cell
        let m = (width / dm).ceil().to_f64().unwrap_or(4.0).max(4.0) as usize;
        acc = acc + simpson_on(&integrand, a, b, m.min(8192));
    }
    acc / tau
}

/// The strict-gap integral
/// `D = \int_{-eps}^{eps} (h(b+t) - h(a+t)) (P_r(a-t) - P_r(b-t)) dt`
/// with `a = phi/2 - delta`, `b = phi/2 + delta`. The integrand is pointwise
/// positive under the stated ordering, so `D > 0`.
pub fn strict_gap_d<F: Float + FromPrimitive>(
    r: F,
    phi: F,
    delta: F,
    eps: F,
    n_quad: usize,
) -> Result<F, HarmonicError> {
    let pi = c::<F>(std::f64::consts::PI);
    let two = c::<F>(2.0);
    let a = phi / two - delta;
    let b = phi / two + delta;
    let ordered = F::zero() < a - eps
        && a + eps < phi / two
        && phi / two < b - eps
        && b + eps < pi
        && eps > F::zero();
    if !ordered {
        return Err(HarmonicError::ParameterOrder(
            "need 0 < a-eps < a+eps < phi/2 < b-eps < b+eps < pi".into(),
        ));
    }
    let integrand = |t: F| {
        (h_boundary(b + t) - h_boundary(a + t))
            * (poisson_kernel(r, a - t) - poisson_kernel(r, b - t))
    };
    Ok(simpson_on(&integrand, -eps, eps, n_quad.max(16)))
}

/// Step functions on `N` equal arcs of the circle, arc `i` centered at
/// `2 pi i / N`. `F` must be even about 0 and arc-wise non-decreasing on
/// `(0, pi)`; `G` even and non-increasing there.
#[derive(Clone, Debug)]
pub struct CircleGrid<F> {
    f: Vec<F>,
    g: Vec<F>,
}

impl<F: Float + FromPrimitive> CircleGrid<F> {
    pub fn new(f: Vec<F>, g: Vec<F>) -> Result<Self, HarmonicError> {
        let n = f.len();
        if n < 2 || n % 2 != 0 || g.len() != n {
            return Err(HarmonicError::InvalidGrid(
                "need an even number of cells, same for F and G".into(),
            ));
        }
        let check = |v: &[F], name: &str, increasing: bool| -> Result<(), HarmonicError> {
            if v.iter().any(|x| *x < F::zero() || !x.is_finite()) {
                return Err(HarmonicError::InvalidGrid(format!(
                    "{name} must be non-negative and finite"
                )));
            }
            for i in 1..n {
                if v[i] != v[(n - i) % n] {
                    return Err(HarmonicError::InvalidGrid(format!(
                        "{name} is not even about 0 (cell {i})"
                    )));
                }
            }
            for i in 0..n / 2 {
                let ok = if increasing {
                    v[i] <= v[i + 1]
                } else {
                    v[i] >= v[i + 1]
                };
                if !ok {
                    return Err(HarmonicError::InvalidGrid(format!(
                        "{name} is not monotone toward pi (cell {i})"
                    )));
                }
            }
            Ok(())
        };
        check(&f, "F", true)?;
        check(&g, "G", false)?;
        Ok(CircleGrid { f, g })
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RearrangementOutcome<F> {
    pub lhs: F,
    pub rhs: F,
    pub ok: bool,
}

/// Discrete rearrangement inequality: the aligned pairing minimizes, so
/// `sum F_i G_i <= sum F_i G_{T(i)}` for any permutation `T` of the cells
/// (cell permutations are the grid-level measure-preserving maps).
pub fn rearrangement_check<F: Float + FromPrimitive>(
    grid: &CircleGrid<F>,
    perm: &[usize],
) -> Result<RearrangementOutcome<F>, HarmonicError> {
    let n = grid.len();
    if perm.len() != n {
        return Err(HarmonicError::InvalidGrid(
            "permutation length mismatch".into(),
        ));
    }
    let mut seen = vec![false; n];
    for &i in perm {
        if i >= n || seen[i] {
            return Err(HarmonicError::InvalidGrid("not a permutation".into()));
        }
        seen[i] = true;
    }
    let mut lhs = F::zero();
    let mut rhs = F::zero();
    for i in 0..n {
        lhs = lhs + grid.f[i] * grid.g[i];
        rhs = rhs + grid.f[i] * grid.g[perm[i]];
    }
    let ok = lhs <= rhs + c::<F>(1e-12);
    Ok(RearrangementOutcome { lhs, rhs, ok })
}

/// Seeded random-permutation trials; returns the number of violations
/// (expected: zero).
pub fn random_rearrangement_trials<F: Float + FromPrimitive>(
    grid: &CircleGrid<F>,
    trials: u32,
    seed: u64,
) -> u32 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut violations = 0;
    for _ in 0..trials {
        perm.shuffle(&mut rng);
        let out = rearrangement_check(grid, &perm).expect("valid permutation");
        if !out.ok {
            violations += 1;
        }
    }
    violations
}

/// Grid scan of `U(r, phi) > U(r, 0)`: reports violations (expected none)
/// and the minimum margin with its location.
#[derive(Clone, Debug)]
pub struct ScanReport<F> {
    pub pairs: usize,
    pub violations: Vec<(F, F)>,
    pub min_margin: F,
    pub argmin: (F, F),
}

pub fn theorem_scan<F: Float + FromPrimitive>(r_grid: &[F], phi_grid: &[F]) -> ScanReport<F> {
    let mut report = ScanReport {
        pairs: 0,
        violations: Vec::new(),
        min_margin: F::infinity(),
        argmin: (F::nan(), F::nan()),
    };
    for &r in r_grid {
        let base = u_direct(r, F::zero());
        for &phi in phi_grid {
            let margin = u_direct(r, phi) - base;
            report.pairs += 1;
            if margin <= F::zero() {
                report.violations.push((r, phi));
            }
            if margin < report.min_margin {
                report.min_margin = margin;
                report.argmin = (r, phi);
            }
        }
    }
    report
}
