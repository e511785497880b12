//! Elliptic curves in long Weierstrass form over an abstract field, plus the
//! specific curves attached to the Somos-5 sequence.
//!
//! The group law is the classical chord-and-tangent construction for
//!
//! ```text
//! y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6
//! ```
//!
//! Orders of points over `F_p` are found with a baby-step/giant-step search
//! over the Hasse interval followed by the usual factor-stripping, so a
//! single order computation costs `O(p^(1/4))` group operations.  A naive
//! `O(p)` point counter is kept alongside as an independent oracle for the
//! fast path.

use crate::arith::{factor_small, isqrt, BigRational};
use crate::field::{Field, PrimeField, Rationals};
use num_traits::One;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    /// The coefficients describe a singular cubic (discriminant zero).
    #[error("curve is singular over this field")]
    SingularCurve,
    /// Reduction modulo `p` of an integral model is singular.
    #[error("bad reduction at {0}")]
    BadReduction(u64),
    /// Reduction was asked for a model with non-integral coefficients.
    #[error("curve model has non-integral coefficients")]
    NonIntegralModel,
    /// Point counting was asked for a field too large to enumerate.
    #[error("refusing to enumerate F_p for p = {0}")]
    EnumerationTooLarge(u64),
    /// The Hasse-interval search found no annihilating multiple; impossible
    /// for a genuine point on a genuine curve.
    #[error("no annihilator in the Hasse interval mod {0}")]
    OrderSearchFailed(u64),
}

/// A point on a curve: infinity or affine coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurvePoint<T> {
    Infinity,
    Affine(T, T),
}

impl<T> CurvePoint<T> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassCurve<F: Field> {
    pub field: F,
    pub a1: F::Elem,
    pub a2: F::Elem,
    pub a3: F::Elem,
    pub a4: F::Elem,
    pub a6: F::Elem,
}

impl<F: Field> WeierstrassCurve<F> {
    /// Builds the curve `[a1, a2, a3, a4, a6]`, rejecting singular models.
    pub fn new(field: F, coeffs: [F::Elem; 5]) -> Result<Self, CurveError> {
        let [a1, a2, a3, a4, a6] = coeffs;
        let curve = WeierstrassCurve { field, a1, a2, a3, a4, a6 };
        if curve.field.is_zero(&curve.discriminant()) {
            return Err(CurveError::SingularCurve);
        }
        Ok(curve)
    }

    /// Convenience constructor from small integer coefficients.
    pub fn from_i64(field: F, coeffs: [i64; 5]) -> Result<Self, CurveError> {
        let c = coeffs.map(|n| field.from_i64(n));
        WeierstrassCurve::new(field, c)
    }

    /// The discriminant via the standard `b2, b4, b6, b8` invariants.
    pub fn discriminant(&self) -> F::Elem {
        let f = &self.field;
        let n = |k: i64| f.from_i64(k);
        let b2 = f.add(&f.square(&self.a1), &f.mul(&n(4), &self.a2));
        let b4 = f.add(&f.mul(&n(2), &self.a4), &f.mul(&self.a1, &self.a3));
        let b6 = f.add(&f.square(&self.a3), &f.mul(&n(4), &self.a6));
        // b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
        let b8 = {
            let t1 = f.mul(&f.square(&self.a1), &self.a6);
            let t2 = f.mul(&n(4), &f.mul(&self.a2, &self.a6));
            let t3 = f.mul(&self.a1, &f.mul(&self.a3, &self.a4));
            let t4 = f.mul(&self.a2, &f.square(&self.a3));
            let t5 = f.square(&self.a4);
            f.sub(&f.add(&f.sub(&f.add(&t1, &t2), &t3), &t4), &t5)
        };
        // delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
        let d1 = f.mul(&f.square(&b2), &b8);
        let d2 = f.mul(&n(8), &f.mul(&b4, &f.square(&b4)));
        let d3 = f.mul(&n(27), &f.square(&b6));
        let d4 = f.mul(&n(9), &f.mul(&b2, &f.mul(&b4, &b6)));
        f.add(&f.sub(&f.sub(&f.neg(&d1), &d2), &d3), &d4)
    }

    /// Does the affine equation hold (infinity always counts)?
    pub fn on_curve(&self, p: &CurvePoint<F::Elem>) -> bool {
        let f = &self.field;
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => {
                let lhs = f.add(
                    &f.square(y),
                    &f.add(&f.mul(&self.a1, &f.mul(x, y)), &f.mul(&self.a3, y)),
                );
                let x2 = f.square(x);
                let rhs = f.add(
                    &f.add(&f.mul(&x2, x), &f.mul(&self.a2, &x2)),
                    &f.add(&f.mul(&self.a4, x), &self.a6),
                );
                lhs == rhs
            }
        }
    }

    /// `-P`; the negative of `(x, y)` is `(x, -y - a1 x - a3)`.
    pub fn neg_point(&self, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        let f = &self.field;
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => {
                let ny = f.neg(&f.add(y, &f.add(&f.mul(&self.a1, x), &self.a3)));
                CurvePoint::Affine(x.clone(), ny)
            }
        }
    }

    /// Chord-and-tangent addition.  Both points must lie on the curve.
    pub fn add(
        &self,
        p1: &CurvePoint<F::Elem>,
        p2: &CurvePoint<F::Elem>,
    ) -> CurvePoint<F::Elem> {
        let f = &self.field;
        let (x1, y1) = match p1 {
            CurvePoint::Infinity => return p2.clone(),
            CurvePoint::Affine(x, y) => (x, y),
        };
        let (x2, y2) = match p2 {
            CurvePoint::Infinity => return p1.clone(),
            CurvePoint::Affine(x, y) => (x, y),
        };

        // The line through the points: y = lambda*x + nu.
        let (lambda, nu) = if x1 == x2 {
            if self.neg_point(p1) == *p2 {
                return CurvePoint::Infinity;
            }
            // Same x and not an inverse pair forces p1 == p2 with
            // nonvanishing tangent denominator 2y + a1 x + a3.
            let den = f.add(
                &f.add(y1, y1),
                &f.add(&f.mul(&self.a1, x1), &self.a3),
            );
            let den_inv = f.inv(&den).expect("tangent denominator vanishes only on inverse pairs");
            let x1sq = f.square(x1);
            let lam_num = f.sub(
                &f.add(
                    &f.add(&f.mul(&f.from_i64(3), &x1sq), &f.mul(&f.from_i64(2), &f.mul(&self.a2, x1))),
                    &self.a4,
                ),
                &f.mul(&self.a1, y1),
            );
            let nu_num = f.sub(
                &f.add(
                    &f.add(&f.neg(&f.mul(&x1sq, x1)), &f.mul(&self.a4, x1)),
                    &f.add(&self.a6, &self.a6),
                ),
                &f.mul(&self.a3, y1),
            );
            (f.mul(&lam_num, &den_inv), f.mul(&nu_num, &den_inv))
        } else {
            let dx_inv = f.inv(&f.sub(x2, x1)).expect("distinct x-coordinates");
            let lambda = f.mul(&f.sub(y2, y1), &dx_inv);
            let nu = f.sub(y1, &f.mul(&lambda, x1));
            (lambda, nu)
        };

        let x3 = f.sub(
            &f.sub(
                &f.sub(&f.add(&f.square(&lambda), &f.mul(&self.a1, &lambda)), &self.a2),
                x1,
            ),
            x2,
        );
        let y3 = f.sub(
            &f.sub(&f.neg(&f.mul(&f.add(&lambda, &self.a1), &x3)), &nu),
            &self.a3,
        );
        CurvePoint::Affine(x3, y3)
    }

    /// `n * P` by double-and-add; negative `n` multiplies the negation.
    pub fn scalar_mul(&self, n: i64, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        if n == 0 {
            return CurvePoint::Infinity;
        }
        if n < 0 {
            return self.scalar_mul(-n, &self.neg_point(p));
        }
        let mut acc = CurvePoint::Infinity;
        for bit in (0..64 - n.leading_zeros()).rev() {
            acc = self.add(&acc, &acc);
            if (n >> bit) & 1 == 1 {
                acc = self.add(&acc, p);
            }
        }
        acc
    }
}

impl WeierstrassCurve<PrimeField> {
    /// Exact order of `P` in `E(F_p)`.
    ///
    /// Finds some multiple `m` in the Hasse interval with `m P = O` by
    /// baby-step/giant-step, then strips prime factors of `m` while the
    /// annihilation survives; what remains is the order.
    pub fn point_order(&self, p: &CurvePoint<u64>) -> Result<u64, CurveError> {
        if p.is_infinity() {
            return Ok(1);
        }
        let q = self.field.p;
        let half_width = isqrt(4 * q) + 1;
        let lo = (q + 1).saturating_sub(half_width).max(1);
        let hi = q + 1 + half_width;
        let window = hi - lo + 1;
        let step = isqrt(window) + 1;

        // Baby steps: j |-> j*P for 0 <= j < step.
        let mut baby: HashMap<CurvePoint<u64>, u64> = HashMap::with_capacity(step as usize);
        let mut acc = CurvePoint::Infinity;
        for j in 0..step {
            baby.entry(acc.clone()).or_insert(j);
            acc = self.add(&acc, p);
        }
        // acc is now step*P; walk target - i*(step*P) through the interval.
        let giant_neg = self.neg_point(&acc);
        let mut cur = self.neg_point(&self.scalar_mul(lo as i64, p));
        let mut found = None;
        for i in 0..=(window / step + 1) {
            if let Some(&j) = baby.get(&cur) {
                found = Some(lo + i * step + j);
                break;
            }
            cur = self.add(&cur, &giant_neg);
        }
        let mut m = found.ok_or(CurveError::OrderSearchFailed(q))?;
        debug_assert!(self.scalar_mul(m as i64, p).is_infinity());

        let mut distinct = factor_small(m).expect("m >= 1");
        distinct.dedup();
        for f in distinct {
            while m % f == 0 && self.scalar_mul((m / f) as i64, p).is_infinity() {
                m /= f;
            }
        }
        Ok(m)
    }

    /// `#E(F_p)` by direct enumeration; an oracle for small `p` only.
    ///
    /// For odd `p` each `x` column contributes `#{z : z^2 = c^2 + 4*rhs}`
    /// points, after completing the square in `y`; one pass over `z`
    /// tabulates those counts, so the whole thing is `O(p)`.
    pub fn count_points_naive(&self) -> Result<u64, CurveError> {
        let p = self.field.p;
        if p > 10_000 {
            return Err(CurveError::EnumerationTooLarge(p));
        }
        if p == 2 {
            let mut count = 1;
            for x in 0..2u64 {
                for y in 0..2u64 {
                    if self.on_curve(&CurvePoint::Affine(x, y)) {
                        count += 1;
                    }
                }
            }
            return Ok(count);
        }
        let f = &self.field;
        let mut square_count = vec![0u64; p as usize];
        for z in 0..p {
            square_count[f.mul(&z, &z) as usize] += 1;
        }
        let mut total = 1; // infinity
        for x in 0..p {
            let c = f.add(&f.mul(&self.a1, &x), &self.a3);
            let x2 = f.square(&x);
            let rhs = f.add(
                &f.add(&f.mul(&x2, &x), &f.mul(&self.a2, &x2)),
                &f.add(&f.mul(&self.a4, &x), &self.a6),
            );
            let disc = f.add(&f.square(&c), &f.mul(&4, &rhs));
            total += square_count[disc as usize];
        }
        Ok(total)
    }
}

/// Reduces an integral model over `Q` modulo `p`, detecting bad reduction.
pub fn reduce_curve(
    curve: &WeierstrassCurve<Rationals>,
    p: u64,
) -> Result<WeierstrassCurve<PrimeField>, CurveError> {
    let f = PrimeField::new(p);
    let red = |c: &BigRational| -> Result<u64, CurveError> {
        if !c.denom().is_one() {
            return Err(CurveError::NonIntegralModel);
        }
        Ok(f.from_bigint(c.numer()))
    };
    let coeffs = [
        red(&curve.a1)?,
        red(&curve.a2)?,
        red(&curve.a3)?,
        red(&curve.a4)?,
        red(&curve.a6)?,
    ];
    WeierstrassCurve::new(f, coeffs).map_err(|e| match e {
        CurveError::SingularCurve => CurveError::BadReduction(p),
        other => other,
    })
}

/// The Somos-5 curve `y^2 + x*y = x^3 + x^2 - 2*x`.
pub fn somos_curve<F: Field>(f: &F) -> WeierstrassCurve<F> {
    WeierstrassCurve::from_i64(f.clone(), [1, 1, 0, -2, 0]).expect("nonsingular here")
}

/// The point `P = (2, 2)` of infinite order on the Somos-5 curve.
pub fn somos_base_point<F: Field>(f: &F) -> CurvePoint<F::Elem> {
    CurvePoint::Affine(f.from_i64(2), f.from_i64(2))
}

/// The rational 2-torsion point `Q = (0, 0)` on the Somos-5 curve.
pub fn somos_torsion_point<F: Field>(f: &F) -> CurvePoint<F::Elem> {
    CurvePoint::Affine(f.zero(), f.zero())
}

/// The 2-isogenous curve `y^2 + x*y = x^3 + x^2 + 8*x + 10`.
pub fn isogenous_curve<F: Field>(f: &F) -> WeierstrassCurve<F> {
    WeierstrassCurve::from_i64(f.clone(), [1, 1, 0, 8, 10]).expect("nonsingular here")
}

/// The image `R = (1, 4)` of the base point under the 2-isogeny.
pub fn isogenous_base_point<F: Field>(f: &F) -> CurvePoint<F::Elem> {
    CurvePoint::Affine(f.from_i64(1), f.from_i64(4))
}

/// Coefficient `A` of the short model `y^2 = x^3 + A*x + B` of the Somos-5 curve.
pub const SHORT_A: i64 = -3267;
/// Coefficient `B` of the short model.
pub const SHORT_B: i64 = 45630;

/// The short Weierstrass model `y^2 = x^3 - 3267*x + 45630`, isomorphic over
/// `Q` to the Somos-5 curve; division polynomials live on this model.
pub fn short_model_curve<F: Field>(f: &F) -> WeierstrassCurve<F> {
    WeierstrassCurve::from_i64(f.clone(), [0, 0, 0, SHORT_A, SHORT_B]).expect("nonsingular here")
}

/// The base point `(87, 648)` on the short model, matching `(2, 2)` under the
/// isomorphism of models.
pub fn short_model_base_point<F: Field>(f: &F) -> CurvePoint<F::Elem> {
    CurvePoint::Affine(f.from_i64(87), f.from_i64(648))
}

/// The degree-2 isogeny from the Somos-5 curve to [`isogenous_curve`], with
/// kernel `{O, (0,0)}`:
///
/// ```text
/// (x, y) |-> ( (x^2 - 2)/x , (x^2 y + 2x + 2y)/x^2 )
/// ```
pub fn two_isogeny<F: Field>(f: &F, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine(x, y) => {
            if f.is_zero(x) {
                // The kernel: on this curve x = 0 happens only at (0, 0).
                return CurvePoint::Infinity;
            }
            let x2 = f.square(x);
            let xi = f.inv(x).expect("x nonzero");
            let x2i = f.square(&xi);
            let nx = f.mul(&f.sub(&x2, &f.from_i64(2)), &xi);
            let ny_num = f.add(
                &f.mul(&x2, y),
                &f.add(&f.add(x, x), &f.add(y, y)),
            );
            let ny = f.mul(&ny_num, &x2i);
            CurvePoint::Affine(nx, ny)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{sieve_primes, BigInt};
    use num_traits::Zero;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn rat_point(x: i64, y: i64) -> CurvePoint<BigRational> {
        CurvePoint::Affine(rat(x), rat(y))
    }

    #[test]
    fn named_points_lie_on_their_curves() {
        let f = Rationals;
        assert!(somos_curve(&f).on_curve(&somos_base_point(&f)));
        assert!(somos_curve(&f).on_curve(&somos_torsion_point(&f)));
        assert!(isogenous_curve(&f).on_curve(&isogenous_base_point(&f)));
        assert!(short_model_curve(&f).on_curve(&short_model_base_point(&f)));
        assert!(!somos_curve(&f).on_curve(&rat_point(1, 1)));
    }

    #[test]
    fn discriminants_factor_over_the_same_primes() {
        // Both isogenous models degenerate exactly at 2, 3 and 17.
        let f = Rationals;
        let d1 = somos_curve(&f).discriminant();
        let d2 = isogenous_curve(&f).discriminant();
        assert_eq!(d1, rat(612)); // 2^2 * 3^2 * 17
        assert_eq!(d2, rat(-46818)); // -(2 * 3^4 * 17^2)
        for p in sieve_primes(100) {
            let bad1 = reduce_curve(&somos_curve(&f), p).is_err();
            let bad2 = reduce_curve(&isogenous_curve(&f), p).is_err();
            let expect = p == 2 || p == 3 || p == 17;
            assert_eq!(bad1, expect, "model 1 at {p}");
            assert_eq!(bad2, expect, "model 2 at {p}");
        }
    }

    #[test]
    fn addition_examples_over_q() {
        let f = Rationals;
        let e = somos_curve(&f);
        let p = somos_base_point(&f);
        let q = somos_torsion_point(&f);
        // doubling
        assert_eq!(e.add(&p, &p), rat_point(1, -1));
        // adding the 2-torsion point
        assert_eq!(e.add(&p, &q), rat_point(-1, 2));
        // identity and inverses
        assert_eq!(e.add(&p, &CurvePoint::Infinity), p);
        assert_eq!(e.add(&q, &q), CurvePoint::Infinity);
        assert_eq!(e.add(&p, &e.neg_point(&p)), CurvePoint::Infinity);
    }

    #[test]
    fn scalar_mul_matches_repeated_addition_over_q() {
        let f = Rationals;
        let e = somos_curve(&f);
        let p = somos_base_point(&f);
        let mut acc = CurvePoint::Infinity;
        for n in 0..12i64 {
            assert_eq!(e.scalar_mul(n, &p), acc, "n = {n}");
            assert!(e.on_curve(&acc));
            acc = e.add(&acc, &p);
        }
        assert_eq!(e.scalar_mul(2, &p), rat_point(1, -1));
        assert_eq!(e.scalar_mul(-3, &p), e.neg_point(&e.scalar_mul(3, &p)));
    }

    #[test]
    fn group_law_axioms_mod_p_sampled() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0201);
        for p in [5u64, 7, 11, 101, 1009] {
            let f = PrimeField::new(p);
            let e = somos_curve(&f);
            let g = somos_base_point(&f);
            for _ in 0..60 {
                let (a, b, c) = (
                    rng.gen_range(0..200i64),
                    rng.gen_range(0..200i64),
                    rng.gen_range(0..200i64),
                );
                let (pa, pb, pc) = (e.scalar_mul(a, &g), e.scalar_mul(b, &g), e.scalar_mul(c, &g));
                assert!(e.on_curve(&pa));
                // commutativity and associativity
                assert_eq!(e.add(&pa, &pb), e.add(&pb, &pa));
                assert_eq!(
                    e.add(&e.add(&pa, &pb), &pc),
                    e.add(&pa, &e.add(&pb, &pc)),
                    "p={p} a={a} b={b} c={c}"
                );
            }
        }
    }

    #[test]
    fn reduction_mod_five() {
        let f5 = PrimeField::new(5);
        let e5 = reduce_curve(&somos_curve(&Rationals), 5).unwrap();
        assert_eq!((e5.a1, e5.a2, e5.a4), (1, 1, 3));
        let p = somos_base_point(&f5);
        assert_eq!(e5.scalar_mul(5, &p), somos_torsion_point(&f5));
        assert_eq!(e5.point_order(&p), Ok(10));
        assert_eq!(e5.point_order(&somos_torsion_point(&f5)), Ok(2));
        assert_eq!(e5.count_points_naive(), Ok(10));

        let e5p = reduce_curve(&isogenous_curve(&Rationals), 5).unwrap();
        let r = isogenous_base_point(&f5);
        assert_eq!(e5p.point_order(&r), Ok(5));
    }

    #[test]
    fn point_order_agrees_with_lagrange_for_small_primes() {
        // The order of any point divides the group order, and the group
        // order lands in the Hasse window.
        let frat = Rationals;
        for p in sieve_primes(500) {
            let e = match reduce_curve(&somos_curve(&frat), p) {
                Ok(e) => e,
                Err(_) => continue,
            };
            let n = e.count_points_naive().unwrap();
            let w = isqrt(4 * p) + 1;
            assert!(n + w >= p + 1 && n <= p + 1 + w, "Hasse fails at {p}: {n}");
            let f = PrimeField::new(p);
            let ord = e.point_order(&somos_base_point(&f)).unwrap();
            assert_eq!(n % ord, 0, "p={p}: order {ord} does not divide #E = {n}");
            // and m*P = O exactly when ord | m
            let g = somos_base_point(&f);
            for m in 1..=ord {
                assert_eq!(
                    e.scalar_mul(m as i64, &g).is_infinity(),
                    m == ord,
                    "p={p} m={m} ord={ord}"
                );
            }
        }
    }

    #[test]
    fn isogeny_maps_and_halves() {
        let f = Rationals;
        let e = somos_curve(&f);
        let ei = isogenous_curve(&f);
        let p = somos_base_point(&f);
        let q = somos_torsion_point(&f);
        // kernel and the image of the base point
        assert_eq!(two_isogeny(&f, &q), CurvePoint::Infinity);
        assert_eq!(two_isogeny(&f, &CurvePoint::Infinity), CurvePoint::<BigRational>::Infinity);
        assert_eq!(two_isogeny(&f, &p), isogenous_base_point(&f));
        // phi(2P) = 2R
        let two_p = e.scalar_mul(2, &p);
        let two_r = ei.scalar_mul(2, &isogenous_base_point(&f));
        assert_eq!(two_isogeny(&f, &two_p), two_r);
        assert_eq!(two_r, rat_point(-1, -1));
        // homomorphism on a range of multiples, and images are on the target
        for n in 0..20i64 {
            let img = two_isogeny(&f, &e.scalar_mul(n, &p));
            assert!(ei.on_curve(&img));
            assert_eq!(img, ei.scalar_mul(n, &isogenous_base_point(&f)), "n={n}");
        }
    }

    #[test]
    fn isogeny_is_homomorphism_mod_p() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0202);
        for p in [5u64, 7, 11, 13, 199, 997] {
            let f = PrimeField::new(p);
            let e = somos_curve(&f);
            let ei = isogenous_curve(&f);
            let g = somos_base_point(&f);
            for _ in 0..50 {
                let (a, b) = (rng.gen_range(0..500i64), rng.gen_range(0..500i64));
                let (pa, pb) = (e.scalar_mul(a, &g), e.scalar_mul(b, &g));
                let lhs = two_isogeny(&f, &e.add(&pa, &pb));
                let rhs = ei.add(&two_isogeny(&f, &pa), &two_isogeny(&f, &pb));
                assert_eq!(lhs, rhs, "p={p} a={a} b={b}");
                assert!(ei.on_curve(&lhs));
            }
            // kernel is exactly {O, (0,0)}, so among the ord(g) distinct
            // multiples of g at most two die (at least one: O itself).
            let ord = e.point_order(&g).unwrap();
            let mut kernel = 0;
            let mut acc = CurvePoint::Infinity;
            for _ in 0..ord {
                if two_isogeny(&f, &acc).is_infinity() {
                    kernel += 1;
                }
                acc = e.add(&acc, &g);
            }
            assert!((1..=2).contains(&kernel), "p={p} kernel_in_cyclic={kernel}");
        }
    }

    #[test]
    fn order_dichotomy_for_small_good_primes() {
        // ord(P mod p) is either ord(R mod p) or twice it.
        let frat = Rationals;
        for p in sieve_primes(1000) {
            let (e, ei) = match (
                reduce_curve(&somos_curve(&frat), p),
                reduce_curve(&isogenous_curve(&frat), p),
            ) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            let f = PrimeField::new(p);
            let op = e.point_order(&somos_base_point(&f)).unwrap();
            let or = ei.point_order(&isogenous_base_point(&f)).unwrap();
            assert!(
                op == or || op == 2 * or,
                "p={p}: ord P = {op}, ord R = {or}"
            );
            // and the even-order branch is exactly "Q is a multiple of P"
            let divides = op == 2 * or;
            let q_hit = op % 2 == 0
                && e.scalar_mul((op / 2) as i64, &somos_base_point(&f)) == somos_torsion_point(&f);
            assert_eq!(divides, q_hit, "p={p}");
        }
    }

    #[test]
    fn point_order_matches_exhaustive_order_on_random_points() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0203);
        for p in [11u64, 101, 997, 9973] {
            let f = PrimeField::new(p);
            let e = somos_curve(&f);
            let g = somos_base_point(&f);
            for _ in 0..10 {
                let pt = e.scalar_mul(rng.gen_range(0..10_000i64), &g);
                let ord = e.point_order(&pt).unwrap();
                assert!(e.scalar_mul(ord as i64, &pt).is_infinity());
                for fac in factor_small(ord).unwrap() {
                    assert!(!e.scalar_mul((ord / fac) as i64, &pt).is_infinity());
                }
            }
        }
    }

    #[test]
    fn singular_input_rejected() {
        // y^2 = x^3 is a cusp.
        let err = WeierstrassCurve::from_i64(Rationals, [0, 0, 0, 0, 0]);
        assert!(matches!(err, Err(CurveError::SingularCurve)));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let curve = WeierstrassCurve::new(
            Rationals,
            [half, BigRational::zero(), BigRational::zero(), BigRational::zero(), rat(1)],
        )
        .unwrap();
        assert_eq!(reduce_curve(&curve, 5), Err(CurveError::NonIntegralModel));
    }

    #[test]
    fn count_points_rejects_large_fields() {
        let e = reduce_curve(&somos_curve(&Rationals), 1_000_003).unwrap();
        assert_eq!(
            e.count_points_naive(),
            Err(CurveError::EnumerationTooLarge(1_000_003))
        );
    }
}
