//! The full reproduction bundle: every check the toolkit can run, gathered
//! into one deterministic PASS/FAIL report. Individual failures are
//! collected, not fatal.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;

use crate::bernd::{self, Sign};
use crate::harmonic::{self, CircleGrid};
use crate::msp::{self, SlopeBound, SupAbsOutcome};
use crate::paperfns;
use crate::rigor::{Dyadic, Precision, Rational, Rounding};

/// Twelve significant digits, deterministic across runs.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

struct Report {
    text: String,
    all_pass: bool,
}

impl Report {
    fn section(&mut self, name: &str) {
        let _ = writeln!(self.text, "== {name} ==");
    }

    fn check(&mut self, label: &str, ok: bool) {
        let _ = writeln!(self.text, "{}  {label}", if ok { "PASS" } else { "FAIL" });
        self.all_pass &= ok;
    }

    fn note(&mut self, line: &str) {
        let _ = writeln!(self.text, "      {line}");
    }
}

/// Runs the whole suite; returns the report text and whether every line
/// passed. The seed drives the random rearrangement trials only.
pub fn report_bundle(seed: u64) -> (String, bool) {
    let mut r = Report {
        text: String::new(),
        all_pass: true,
    };
    let p64 = Precision::new(64);
    let a_dyadic = Dyadic::new(BigInt::from(21845), -16); // just below 1/3
    let registry = paperfns::registry();

    r.section("lemmas");
    r.check("small-angle polynomial positivity", paperfns::lemma1_check());
    match paperfns::lemma2_check(p64) {
        Ok(enc) => {
            let ok = enc.lo().is_positive();
            r.check("large-angle constant is positive", ok);
            r.note(&format!("constant ~ {}", sig12(enc.mid_f64())));
        }
        Err(e) => r.check(&format!("large-angle constant ({e})"), false),
    }
    r.check("slope chain for the derivative", paperfns::lemma3_chain_check(p64));
    let sup = msp::bound_sup_abs(
        registry.get("hprime").expect("registered"),
        &a_dyadic,
        &Dyadic::from_int(3),
        &Dyadic::from_int(20),
        p64,
        40,
    );
    r.check(
        "sup |h'| < 20 on [1/3, 3]",
        matches!(sup, Ok(SupAbsOutcome::Proved)),
    );

    r.section("dk");
    let closed_eq_recur = (1..=40).all(|k| bernd::d_closed(k) == bernd::d_recur(k));
    r.check("closed form equals recurrence, k <= 40", closed_eq_recur);
    let signs = (1..=32).all(|k| bernd::d_closed(k).sign(p64) == Sign::Positive);
    r.check("d_k > 0 for k <= 32 by exact comparison", signs);
    let (max_r, min_s) = bernd::dk_extremes(32);
    let extremes_ok = max_r == Rational::new(BigInt::from(177), BigInt::from(256))
        && min_s == Some(Rational::new(BigInt::from(89), BigInt::from(128)));
    r.check("extreme rationals are 177/256 and 89/128", extremes_ok);
    r.note(&format!(
        "max r = {max_r}  min s = {}",
        min_s.map_or("none".into(), |s| s.to_string())
    ));
    let asym = (33..=64).all(bernd::dk_asymptotic_check);
    r.check("asymptotic chain for k = 33..64", asym);

    r.section("certificate");
    let slope = SlopeBound::constant(Dyadic::from_int(20)).expect("positive");
    match msp::msp_certify(
        registry.get("h").expect("registered"),
        &a_dyadic,
        &Dyadic::from_int(3),
        &slope,
        p64,
        &Rational::one(),
    ) {
        Ok(cert) => {
            let m = cert.points.len();
            r.note(&format!("points: {m}"));
            r.check(
                "point count within 10% of 4163",
                (3747..=4579).contains(&m),
            );
            let verdict = msp::msp_verify(&cert, &registry);
            r.check(
                "independent verification",
                matches!(verdict, Ok(v) if v.is_valid()),
            );
            r.check("coverage algebra", msp::coverage_check(&cert).is_ok());
        }
        Err(e) => r.check(&format!("certification ({e})"), false),
    }

    r.section("flett");
    let zero = paperfns::flett_first_zero(&Dyadic::new(BigInt::one(), -20));
    let mid = zero.mid_f64();
    r.note(&format!("first zero ~ {}", sig12(mid)));
    r.check("first zero near 48.418454", (mid - 48.418454).abs() <= 1e-5);
    let m_flett = Dyadic::from_rational(
        &Rational::new(BigInt::from(33), BigInt::from(20)),
        16,
        Rounding::Up,
    );
    let flett_cert = msp::msp_certify(
        registry.get("flett").expect("registered"),
        &Dyadic::new(BigInt::one(), -10),
        &Dyadic::from_int(48),
        &SlopeBound::constant(m_flett).expect("positive"),
        p64,
        &Rational::one(),
    );
    r.check(
        "positivity certificate on [1/1024, 48]",
        matches!(
            flett_cert.map(|c| msp::msp_verify(&c, &registry)),
            Ok(Ok(v)) if v.is_valid()
        ),
    );

    r.section("scan");
    let mut r_grid: Vec<f64> = (1..=9).map(|i| 0.1 * f64::from(i)).collect();
    r_grid.push(8.0 / 9.0);
    r_grid.push(0.883);
    let phi_grid: Vec<f64> = (1..=31).map(|i| 0.1 * f64::from(i)).collect();
    let scan = harmonic::theorem_scan(&r_grid, &phi_grid);
    r.check(
        &format!("zero violations over {} pairs", scan.pairs),
        scan.violations.is_empty(),
    );
    r.note(&format!(
        "min margin {} at (r, phi) = ({}, {})",
        sig12(scan.min_margin),
        sig12(scan.argmin.0),
        sig12(scan.argmin.1)
    ));
    let gap = harmonic::strict_gap_d(0.5, 2.0, 0.3, 0.1, 512);
    r.check("strict gap integral positive", matches!(gap, Ok(d) if d > 0.0));

    r.section("poisson");
    let mut worst: f64 = 0.0;
    for &rr in &[0.5, 8.0 / 9.0, 0.883] {
        for j in 0..6 {
            let phi = 0.45 * f64::from(j);
            let diff = (harmonic::u_poisson(rr, phi, 4096) - harmonic::u_direct(rr, phi)).abs();
            worst = worst.max(diff);
        }
    }
    r.note(&format!("max |integral - closed form| = {}", sig12(worst)));
    r.check("representation agreement within 1e-6", worst <= 1e-6);

    r.section("rearrangement");
    let grid6 = CircleGrid::new(
        vec![0.0f64, 0.0, 1.0, 2.0, 1.0, 0.0],
        vec![3.0, 2.0, 1.0, 0.0, 1.0, 2.0],
    )
    .expect("valid grid");
    let mut perm = [0usize, 1, 2, 3, 4, 5];
    let mut all_ok = true;
    permute6(&mut perm, 0, &mut |q| {
        if let Ok(out) = harmonic::rearrangement_check(&grid6, q) {
            all_ok &= out.ok;
        } else {
            all_ok = false;
        }
    });
    r.check("exhaustive over 720 permutations at N = 6", all_ok);
    let dist = |i: usize| (i.min(64 - i) as f64) * std::f64::consts::TAU / 64.0;
    let grid64 = CircleGrid::new(
        (0..64).map(|i| dist(i).powi(2)).collect(),
        (0..64)
            .map(|i| (std::f64::consts::PI - dist(i)).powi(2))
            .collect(),
    )
    .expect("valid grid");
    let violations = harmonic::random_rearrangement_trials(&grid64, 10_000, seed);
    r.check(
        &format!("10000 seeded trials at N = 64 (seed {seed})"),
        violations == 0,
    );

    let _ = writeln!(
        r.text,
        "\noverall: {}",
        if r.all_pass { "PASS" } else { "FAIL" }
    );
    (r.text, r.all_pass)
}

fn permute6(arr: &mut [usize; 6], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == arr.len() {
        visit(arr);
        return;
    }
    for i in k..arr.len() {
        arr.swap(k, i);
        permute6(arr, k + 1, visit);
        arr.swap(k, i);
    }
}
