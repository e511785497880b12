//! Prime-by-prime censuses and batch verification.
//!
//! Two independent routes decide whether a prime `p` divides some Somos-5
//! term.  For the three primes of bad reduction (2, 3, 17) the sequence is
//! scanned directly mod `p`: the five-term window map is invertible, so the
//! orbit is a pure cycle and a full scan of it is decisive.  Every other
//! prime is settled through the curves: `p` divides a term exactly when the
//! base point's order mod `p` is twice the isogenous point's order.  The two
//! routes overlap on small primes, which the tests exploit.
//!
//! On top of the classifier sit the density table (the empirical ratio
//! `pi'(x) / pi(x)` at chosen thresholds), the theory report (everything the
//! exact computation produces), and named check suites for the command-line
//! `verify` command.

use crate::agl::{affine_image, close_subgroup, frattini_subgroup, matrix_image_mod8, AffineGroupElement};
use crate::arith::{sieve_primes, BigInt, BigRational, Rational64};
use crate::density::{bracket_density, total_density, DensityBracket, DensityReport};
use crate::divpoly::{preimage8_polynomial, DivisionPolynomials};
use crate::ellcurve::{
    isogenous_base_point, isogenous_curve, reduce_curve, short_model_base_point, short_model_curve,
    somos_base_point, somos_curve, somos_torsion_point, two_isogeny, CurveError, CurvePoint,
    SHORT_A, SHORT_B,
};
use crate::field::{Field, PrimeField, Rationals};
use crate::somos::{scan_divides, somos5_terms, somos_terms, verify_point_identity, verify_quartic_identity};
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CensusError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// How a prime's verdict was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    /// Compared point orders on the two isogenous curves.
    CurveOrder,
    /// Scanned the sequence mod `p` through one full cycle of its window map.
    DirectScan,
}

/// The verdict for one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeClassification {
    pub p: u64,
    pub method: Method,
    /// Order of the base point on the Somos-5 curve mod `p` (curve route only).
    pub ord_p: Option<u64>,
    /// Order of the isogenous point on the isogenous curve mod `p`.
    pub ord_r: Option<u64>,
    /// Whether `p` divides some Somos-5 term.
    pub divides: bool,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Decides whether `p` divides some Somos-5 term, recording the route taken.
///
/// The order ratio between the two curves is a theorem — it is 1 or 2 for
/// every good prime — so a violation panics rather than returning an error.
pub fn classify_prime(p: u64) -> Result<PrimeClassification, CensusError> {
    if !is_prime(p) {
        return Err(CensusError::NotPrime(p));
    }
    if matches!(p, 2 | 3 | 17) {
        return Ok(PrimeClassification {
            p,
            method: Method::DirectScan,
            ord_p: None,
            ord_r: None,
            divides: scan_divides(p, None),
        });
    }
    let rat = Rationals;
    let e = reduce_curve(&somos_curve(&rat), p)?;
    let e_iso = reduce_curve(&isogenous_curve(&rat), p)?;
    let f = PrimeField::new(p);
    let ord_p = e.point_order(&somos_base_point(&f))?;
    let ord_r = e_iso.point_order(&isogenous_base_point(&f))?;
    assert!(
        ord_p == ord_r || ord_p == 2 * ord_r,
        "order ratio must be 1 or 2: p={p} ord_p={ord_p} ord_r={ord_r}"
    );
    Ok(PrimeClassification {
        p,
        method: Method::CurveOrder,
        ord_p: Some(ord_p),
        ord_r: Some(ord_r),
        divides: ord_p == 2 * ord_r,
    })
}

/// One row of the empirical density table.
#[derive(Debug, Clone, Serialize)]
pub struct DensityRow {
    /// Threshold.
    pub x: u64,
    /// Primes up to `x`.
    pub pi: u64,
    /// Primes up to `x` dividing some term.
    pub pi_prime: u64,
    /// `pi_prime / pi`.
    pub ratio: f64,
}

/// Classifies every prime up to the largest threshold and tallies the
/// dividing fraction at each threshold (sorted, deduplicated).
pub fn density_table(thresholds: &[u64]) -> Vec<DensityRow> {
    let mut sorted = thresholds.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let limit = sorted.last().copied().unwrap_or(0);
    let primes = sieve_primes(limit);
    let verdicts: Vec<bool> = primes
        .par_iter()
        .map(|&p| classify_prime(p).expect("sieve yields primes").divides)
        .collect();
    let mut rows = Vec::with_capacity(sorted.len());
    let (mut pi, mut pi_prime) = (0u64, 0u64);
    let mut i = 0;
    for x in sorted {
        while i < primes.len() && primes[i] <= x {
            pi += 1;
            pi_prime += u64::from(verdicts[i]);
            i += 1;
        }
        let ratio = if pi == 0 { 0.0 } else { pi_prime as f64 / pi as f64 };
        rows.push(DensityRow { x, pi, pi_prime, ratio });
    }
    rows
}

/// Everything the exact computation produces, bundled for display.
#[derive(Debug, Clone)]
pub struct TheoryReport {
    /// Order of the mod-8 matrix image (256).
    pub matrix_image_order: usize,
    /// The level-3 computation carrying the headline density.
    pub level3: DensityReport,
    /// The level-4 recomputation; its density must agree with level 3.
    pub level4: DensityReport,
    pub bracket3: DensityBracket,
    pub bracket4: DensityBracket,
    /// Order of the Frattini subgroup of the level-4 group.
    pub frattini_order: usize,
    /// Whether the Frattini subgroup contains every pair with matrix
    /// congruent to the identity mod 8 and vector divisible by 4.
    pub frattini_contains_deep_cosets: bool,
    /// Elements of the level-4 group reducing to the identity mod 8 (64).
    pub reduction_kernel_order: usize,
}

pub fn theory_report() -> TheoryReport {
    let i3 = affine_image(3);
    let i4 = affine_image(4);
    let level3 = total_density(&i3);
    let level4 = total_density(&i4);
    assert_eq!(level3.density, level4.density, "level-4 refinement must agree");
    let frattini = frattini_subgroup(&i4);
    let mut frattini_contains_deep_cosets = true;
    for bits in 0..16u32 {
        for e4 in 0..4u32 {
            for f4 in 0..4u32 {
                let g = AffineGroupElement::new(
                    4,
                    [
                        1 + 8 * (bits & 1),
                        8 * (bits >> 1 & 1),
                        8 * (bits >> 2 & 1),
                        1 + 8 * (bits >> 3 & 1),
                        4 * e4,
                        4 * f4,
                    ],
                );
                frattini_contains_deep_cosets &= frattini.contains(&g);
            }
        }
    }
    let id3 = AffineGroupElement::identity(3);
    let reduction_kernel_order = i4.iter().filter(|g| g.reduce_to_level(3) == id3).count();
    TheoryReport {
        matrix_image_order: matrix_image_mod8().len(),
        level3,
        level4,
        bracket3: bracket_density(&i3),
        bracket4: bracket_density(&i4),
        frattini_order: frattini.len(),
        frattini_contains_deep_cosets,
        reduction_kernel_order,
    }
}

/// Named groups of checks for the `verify` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Somos,
    Curve,
    DivPoly,
    Group,
    All,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
}

fn check(out: &mut Vec<CheckResult>, name: &str, pass: bool) {
    out.push(CheckResult { name: name.to_string(), pass });
}

fn somos_checks(out: &mut Vec<CheckResult>) {
    let want: Vec<BigInt> =
        [1, 1, 1, 1, 1, 2, 3, 5, 11, 37, 83, 274].iter().map(|&n| BigInt::from(n)).collect();
    check(
        out,
        "first twelve terms",
        somos5_terms(12).map(|t| t == want).unwrap_or(false),
    );
    check(
        out,
        "integrality for widths 4 through 7",
        (4..=7usize).all(|k| somos_terms(k, 300).is_ok()),
    );
    check(
        out,
        "strict growth",
        somos5_terms(1000).map(|t| t.windows(2).skip(4).all(|w| w[0] < w[1])).unwrap_or(false),
    );
    check(out, "point identity sweep", (0..=60usize).all(verify_point_identity));
    check(out, "quartic identity sweep", (0..=100usize).all(verify_quartic_identity));
    check(
        out,
        "divisor scan examples",
        [2u64, 3, 5, 11].iter().all(|&p| scan_divides(p, Some(50)))
            && !scan_divides(7, None)
            && !scan_divides(17, None),
    );
}

fn curve_checks(out: &mut Vec<CheckResult>) {
    let rat = Rationals;
    let e = somos_curve(&rat);
    let e_iso = isogenous_curve(&rat);
    let big = |n: i64| BigRational::from_integer(n.into());
    check(
        out,
        "discriminants 612 and -46818",
        e.discriminant() == big(612) && e_iso.discriminant() == big(-46818),
    );
    check(
        out,
        "bad primes are exactly 2 3 17",
        sieve_primes(100).into_iter().all(|p| {
            let bad = matches!(p, 2 | 3 | 17);
            reduce_curve(&e, p).is_err() == bad && reduce_curve(&e_iso, p).is_err() == bad
        }),
    );
    let p0 = somos_base_point(&rat);
    check(
        out,
        "small multiples of the base point",
        e.scalar_mul(2, &p0) == CurvePoint::Affine(big(1), big(-1))
            && e.add(&p0, &somos_torsion_point(&rat)) == CurvePoint::Affine(big(-1), big(2)),
    );
    check(
        out,
        "orders mod five",
        (|| -> Option<bool> {
            let f = PrimeField::new(5);
            let e5 = reduce_curve(&e, 5).ok()?;
            let iso5 = reduce_curve(&e_iso, 5).ok()?;
            Some(
                e5.point_order(&somos_base_point(&f)).ok()? == 10
                    && e5.point_order(&somos_torsion_point(&f)).ok()? == 2
                    && iso5.point_order(&isogenous_base_point(&f)).ok()? == 5,
            )
        })()
        .unwrap_or(false),
    );
    check(
        out,
        "isogeny is a homomorphism",
        (1..=12).all(|n| {
            let lhs = two_isogeny(&rat, &e.scalar_mul(n, &p0));
            let rhs = e_iso.scalar_mul(n, &isogenous_base_point(&rat));
            lhs == rhs
        }),
    );
    check(
        out,
        "order ratio dichotomy below 2000",
        sieve_primes(2000)
            .into_iter()
            .filter(|p| !matches!(p, 2 | 3 | 17))
            .all(|p| classify_prime(p).is_ok()),
    );
    check(
        out,
        "scan agrees with order criterion below 500",
        sieve_primes(500)
            .into_iter()
            .filter(|p| !matches!(p, 2 | 3 | 17))
            .all(|p| {
                let c = classify_prime(p).expect("good prime");
                scan_divides(p, Some(c.ord_p.expect("curve route") + 3)) == c.divides
            }),
    );
}

fn divpoly_checks(out: &mut Vec<CheckResult>) {
    let mut dp = DivisionPolynomials::new(SHORT_A, SHORT_B);
    check(
        out,
        "division polynomial degrees and leading coefficients",
        (1..=14u32).all(|m| {
            let psi = dp.psi(m as i64);
            let part = if m % 2 == 1 { &psi.x_part } else { &psi.y_part };
            let want_deg = if m % 2 == 1 { (m * m - 1) / 2 } else { (m * m - 4) / 2 } as usize;
            part.degree() == Some(want_deg) && part.leading() == Some(&BigInt::from(m))
        }),
    );
    check(
        out,
        "point multiplication matches chord-and-tangent",
        (|| -> Option<bool> {
            let f = PrimeField::new(1009);
            let e = short_model_curve(&f);
            let p0 = short_model_base_point(&f);
            Some((1..=12).all(|m| dp.multiply_point(&f, &p0, m) == e.scalar_mul(m as i64, &p0)))
        })()
        .unwrap_or(false),
    );
    let f8 = preimage8_polynomial();
    check(
        out,
        "preimage polynomial is monic of degree 64",
        f8.degree() == Some(64) && f8.leading().map(|c| c.is_one()).unwrap_or(false),
    );
    check(
        out,
        "preimage roots are eighth parts",
        {
            let mut lifted = 0usize;
            let behaved = [1009u64, 2003, 3001].iter().all(|&p| {
                let f = PrimeField::new(p);
                let e = short_model_curve(&f);
                let base = short_model_base_point(&f);
                (0..p).all(|x| {
                    if f8.eval(&f, &x) != 0 {
                        return true;
                    }
                    // lift the root to a curve point when y is rational and
                    // check that it is an eighth part of the base point (up
                    // to sign: both signs of y occur among the preimages)
                    let x3 = f.mul(&f.mul(&x, &x), &x);
                    let rhs = f.add(
                        &f.add(&x3, &f.mul(&f.from_i64(SHORT_A), &x)),
                        &f.from_i64(SHORT_B),
                    );
                    match (0..p).find(|y| f.mul(y, y) == rhs) {
                        None => true,
                        Some(y) => {
                            lifted += 1;
                            let eight = e.scalar_mul(8, &CurvePoint::Affine(x, y));
                            eight == base || eight == e.neg_point(&base)
                        }
                    }
                })
            });
            behaved && lifted > 0
        },
    );
}

fn group_checks(out: &mut Vec<CheckResult>) {
    let h3 = matrix_image_mod8();
    check(out, "matrix image order 256", h3.len() == 256);
    let i3 = affine_image(3);
    check(out, "level 3 group order 8192", i3.len() == 8192);
    check(out, "level 3 closure exhaustive", i3.is_closed_exhaustive());
    let i4 = affine_image(4);
    check(out, "level 4 group order 524288", i4.len() == 1 << 19);
    check(
        out,
        "generators close to the level 4 group",
        close_subgroup(i4.generators())
            .map(|t| t.len() == i4.len() && t.iter().all(|g| i4.contains(g)))
            .unwrap_or(false),
    );
    let report = theory_report();
    check(out, "ker order 64", report.reduction_kernel_order == 64);
    check(out, "frattini contains deep cosets", report.frattini_contains_deep_cosets);
    check(
        out,
        "verdict counts 3754 4036 365 36",
        (report.level3.good, report.level3.bad, report.level3.inconclusive_even, report.level3.inconclusive_odd)
            == (3754, 4036, 365, 36),
    );
    check(
        out,
        "headline density 5087/10752",
        report.level3.density == Rational64::new(5087, 10752)
            && (report.level3.density_f64() - 0.473121).abs() < 1e-6,
    );
    check(out, "level 4 refinement agrees", report.level4.density == report.level3.density);
    check(
        out,
        "brackets shrink around the density",
        report.bracket3.contains(report.level3.density)
            && report.bracket4.contains(report.level3.density)
            && report.bracket4.width() < report.bracket3.width(),
    );
}

pub fn verify_suites(suite: Suite) -> Vec<CheckResult> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Somos | Suite::All) {
        somos_checks(&mut out);
    }
    if matches!(suite, Suite::Curve | Suite::All) {
        curve_checks(&mut out);
    }
    if matches!(suite, Suite::DivPoly | Suite::All) {
        divpoly_checks(&mut out);
    }
    if matches!(suite, Suite::Group | Suite::All) {
        group_checks(&mut out);
    }
    out
}
