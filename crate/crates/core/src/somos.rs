//! The Somos-5 sequence, its cousins Somos-4 through Somos-7, and the bridge
//! from sequence divisibility to elliptic curve arithmetic.
//!
//! Somos-k starts with `k` ones and continues by
//!
//! ```text
//! a(m) * a(m-k) = sum over i = 1 .. floor(k/2) of a(m-i) * a(m-(k-i))
//! ```
//!
//! For `4 <= k <= 7` every term is an integer even though each step divides.
//! We compute terms exactly and *check* the division; an inexact step is a
//! hard error rather than a wrong number.
//!
//! For Somos-5 the terms package into points on an elliptic curve: with
//! `P = (2,2)` and `Q = (0,0)` on `y^2 + xy = x^3 + x^2 - 2x`,
//!
//! ```text
//! m*P + Q = ( (a(m+2)^2 - a(m)*a(m+4)) / a(m+2)^2 ,
//!             (4*a(m)*a(m+2)*a(m+4) - a(m)^2*a(m+6) - a(m+2)^3) / a(m+2)^3 )
//! ```
//!
//! so `p | a(m+2)` exactly when `m*P + Q` reduces to a point with `p` in the
//! denominators, i.e. to the identity mod `p`.  That is what lets a census of
//! "does `p` divide some term" run on curve orders instead of scanning
//! astronomically large integers.

use crate::arith::{mod_inverse, BigInt, BigRational};
use crate::ellcurve::{somos_base_point, somos_curve, somos_torsion_point, CurvePoint};
use crate::field::{Field, PrimeField, Rationals};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SomosError {
    /// A recurrence step did not divide exactly; the defining property failed.
    #[error("Somos-{k} term {index} is not an integer")]
    IntegralityViolation { k: usize, index: usize },
    /// Somos-k integrality only holds for `4 <= k <= 7`.
    #[error("Somos-{0} is not supported (k must be 4..=7)")]
    UnsupportedK(usize),
}

/// Five consecutive terms of a Somos-5-type sequence together with the index
/// of the first one.  Advancing a window is a single recurrence step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SomosWindow<T> {
    pub index: u64,
    pub terms: [T; 5],
}

impl SomosWindow<BigInt> {
    /// The initial window `a(0) .. a(4) = 1`.
    pub fn initial() -> Self {
        SomosWindow { index: 0, terms: std::array::from_fn(|_| BigInt::one()) }
    }

    /// Slides the window one step using exact division.
    pub fn advance(&mut self) -> Result<(), SomosError> {
        let [a0, a1, a2, a3, a4] = &self.terms;
        let num = a4 * a1 + a3 * a2;
        let (next, rem) = num.div_rem(a0);
        if !rem.is_zero() {
            return Err(SomosError::IntegralityViolation {
                k: 5,
                index: self.index as usize + 5,
            });
        }
        self.terms = [
            self.terms[1].clone(),
            self.terms[2].clone(),
            self.terms[3].clone(),
            self.terms[4].clone(),
            next,
        ];
        self.index += 1;
        Ok(())
    }

    /// Does `a(m+5) * a(m) = a(m+4) * a(m+1) + a(m+3) * a(m+2)` hold between
    /// this window and its successor?
    pub fn recurrence_holds(&self, next: &SomosWindow<BigInt>) -> bool {
        next.index == self.index + 1
            && next.terms[..4] == self.terms[1..]
            && &next.terms[4] * &self.terms[0]
                == &self.terms[4] * &self.terms[1] + &self.terms[3] * &self.terms[2]
    }
}

impl SomosWindow<u64> {
    /// The initial window reduced mod `p`.
    pub fn initial_mod(f: &PrimeField) -> Self {
        SomosWindow { index: 0, terms: [f.one(); 5] }
    }

    /// Slides the window one step mod `p`.
    ///
    /// Division is by the *exiting* term, which the caller guarantees nonzero
    /// (the scan in [`scan_divides`] stops as soon as a zero is produced, so
    /// no zero ever reaches the front of the window).
    pub fn advance_mod(&mut self, f: &PrimeField) {
        let [a0, a1, a2, a3, a4] = self.terms;
        let num = f.add(&f.mul(&a4, &a1), &f.mul(&a3, &a2));
        let inv = mod_inverse(a0, f.p).expect("zero term reached the window front");
        let next = f.mul(&num, &inv);
        self.terms = [a1, a2, a3, a4, next];
        self.index += 1;
    }
}

/// The first `n` terms of the Somos-5 sequence, exactly.
pub fn somos5_terms(n: usize) -> Result<Vec<BigInt>, SomosError> {
    somos_terms(5, n)
}

/// The first `n` terms of the Somos-k sequence for `4 <= k <= 7`, exactly.
pub fn somos_terms(k: usize, n: usize) -> Result<Vec<BigInt>, SomosError> {
    if !(4..=7).contains(&k) {
        return Err(SomosError::UnsupportedK(k));
    }
    let mut terms: Vec<BigInt> = (0..n.min(k)).map(|_| BigInt::one()).collect();
    for m in k..n {
        let mut num = BigInt::zero();
        for i in 1..=k / 2 {
            num += &terms[m - i] * &terms[m - (k - i)];
        }
        let (q, r) = num.div_rem(&terms[m - k]);
        if !r.is_zero() {
            return Err(SomosError::IntegralityViolation { k, index: m });
        }
        terms.push(q);
    }
    Ok(terms)
}

/// Checks the closed form of `m*P + Q` against sequence terms: both sides of
/// the identity in the module docs are computed independently (the left by
/// curve arithmetic over `Q`, the right from exact Somos-5 terms).
pub fn verify_point_identity(m: usize) -> bool {
    let f = Rationals;
    let e = somos_curve(&f);
    let lhs = e.add(
        &e.scalar_mul(m as i64, &somos_base_point(&f)),
        &somos_torsion_point(&f),
    );
    let a = match somos_terms(5, m + 7) {
        Ok(t) => t,
        Err(_) => return false,
    };
    let (a0, a2, a4, a6) = (&a[m], &a[m + 2], &a[m + 4], &a[m + 6]);
    let x = BigRational::new(a2 * a2 - a0 * a4, a2 * a2);
    let y = BigRational::new(
        BigInt::from(4) * a0 * a2 * a4 - a0 * a0 * a6 - a2 * a2 * a2,
        a2 * a2 * a2,
    );
    lhs == CurvePoint::Affine(x, y)
}

/// Checks the quartic relation
/// `a^2 g^2 - 7aceg + ae^3 + c^3 g + 8c^2 e^2 = 0`
/// on the window `(a, c, e, g) = (a(n), a(n+2), a(n+4), a(n+6))`.
pub fn verify_quartic_identity(n: usize) -> bool {
    let t = match somos_terms(5, n + 7) {
        Ok(t) => t,
        Err(_) => return false,
    };
    let (a, c, e, g) = (&t[n], &t[n + 2], &t[n + 4], &t[n + 6]);
    let val = a * a * g * g - BigInt::from(7) * a * c * e * g
        + a * e * e * e
        + c * c * c * g
        + BigInt::from(8) * c * c * e * e;
    val.is_zero()
}

/// Does `p` divide some Somos-5 term?
///
/// Runs the recurrence mod `p`.  With `max_index` given, scans terms up to
/// that index.  Without it, the scan is *decisive*: the window-to-window map
/// on nonzero 5-tuples mod `p` is invertible, so the trajectory of the
/// all-ones window is purely periodic and either hits a zero term or revisits
/// a window, after which nothing new can appear.
pub fn scan_divides(p: u64, max_index: Option<u64>) -> bool {
    let f = PrimeField::new(p);
    let mut w = SomosWindow::initial_mod(&f);
    match max_index {
        Some(bound) => {
            // terms 0..=4 are 1; check each newly produced term
            while w.index + 4 < bound {
                if w.terms[4] == 0 {
                    return true;
                }
                // a zero in front would also end the scan (p divides)
                if w.terms[0] == 0 {
                    return true;
                }
                w.advance_mod(&f);
            }
            w.terms.contains(&0)
        }
        None => {
            let mut seen: HashSet<[u64; 5]> = HashSet::new();
            loop {
                if w.terms[4] == 0 {
                    return true;
                }
                if !seen.insert(w.terms) {
                    return false;
                }
                w.advance_mod(&f);
            }
        }
    }
}
