//! Division polynomials for a short Weierstrass curve `y^2 = x^3 + A*x + B`,
//! and the degree-64 polynomial whose roots are the x-coordinates of the
//! eighth-parts of the base point.
//!
//! Work happens in the coordinate ring `Z[x, y] / (y^2 - x^3 - A*x - B)`,
//! whose elements are uniquely `P(x) + y*Q(x)`.  The division polynomials
//! `psi_m` obey
//!
//! ```text
//! psi_(2t+1) = psi_(t+2) * psi_t^3 - psi_(t-1) * psi_(t+1)^3
//! 2y * psi_(2t) = psi_t * (psi_(t+2) * psi_(t-1)^2 - psi_(t-2) * psi_(t+1)^2)
//! ```
//!
//! starting from `psi_1 = 1`, `psi_2 = 2y` and the classical quartic/sextic
//! seeds, with the conventions `psi_0 = 0` and `psi_(-1) = -1` so that the
//! companion formulas
//!
//! ```text
//! phi_m = x * psi_m^2 - psi_(m+1) * psi_(m-1)
//! 4y * omega_m = psi_(m+2) * psi_(m-1)^2 - psi_(m-2) * psi_(m+1)^2
//! ```
//!
//! hold down to `m = 1`.  Then `[m](x, y) = (phi_m / psi_m^2, omega_m / psi_m^3)`,
//! giving a second, completely independent route to scalar multiplication.
//! The divisions by `2y` and `4y` are exact in the coordinate ring; this
//! module checks that at runtime instead of trusting it.

use crate::arith::BigInt;
use crate::ellcurve::{CurvePoint, SHORT_A, SHORT_B};
use crate::field::Field;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::sync::OnceLock;

/// A dense univariate polynomial with exact integer coefficients, lowest
/// degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        IntPoly::from_coeffs(vec![BigInt::from(c)])
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            out.push(a + b);
        }
        IntPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides every coefficient by `c`, or `None` if any division is inexact.
    pub fn div_scalar(&self, c: i64) -> Option<IntPoly> {
        let c = BigInt::from(c);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(&c);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(IntPoly::from_coeffs(out))
    }

    /// Exact division by a *monic* divisor, or `None` if a remainder is left.
    pub fn div_exact_monic(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(d.leading().map_or(false, |c| c.is_one()), "divisor must be monic");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return None;
        }
        let qlen = rem.len() - dd;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = std::mem::replace(&mut rem[k + dd], BigInt::zero());
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate().take(dd) {
                rem[k + i] -= &c * di;
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_coeffs(quot))
    }

    /// Horner evaluation with coefficients mapped into an arbitrary field.
    pub fn eval<F: Field>(&self, f: &F, x: &F::Elem) -> F::Elem {
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), &f.from_bigint(c));
        }
        acc
    }
}

/// An element `x_part(x) + y * y_part(x)` of the coordinate ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XYPoly {
    pub x_part: IntPoly,
    pub y_part: IntPoly,
}

impl XYPoly {
    pub fn zero() -> Self {
        XYPoly { x_part: IntPoly::zero(), y_part: IntPoly::zero() }
    }

    pub fn constant(c: i64) -> Self {
        XYPoly { x_part: IntPoly::constant(c), y_part: IntPoly::zero() }
    }

    pub fn from_x(p: IntPoly) -> Self {
        XYPoly { x_part: p, y_part: IntPoly::zero() }
    }

    /// `q(x) * y`.
    pub fn from_y(q: IntPoly) -> Self {
        XYPoly { x_part: IntPoly::zero(), y_part: q }
    }

    pub fn is_zero(&self) -> bool {
        self.x_part.is_zero() && self.y_part.is_zero()
    }

    pub fn add(&self, other: &XYPoly) -> XYPoly {
        XYPoly {
            x_part: self.x_part.add(&other.x_part),
            y_part: self.y_part.add(&other.y_part),
        }
    }

    pub fn sub(&self, other: &XYPoly) -> XYPoly {
        XYPoly {
            x_part: self.x_part.sub(&other.x_part),
            y_part: self.y_part.sub(&other.y_part),
        }
    }

    /// Value at an affine point of the curve.
    pub fn eval<F: Field>(&self, f: &F, x: &F::Elem, y: &F::Elem) -> F::Elem {
        f.add(&self.x_part.eval(f, x), &f.mul(y, &self.y_part.eval(f, x)))
    }
}

/// Division-polynomial calculator for `y^2 = x^3 + A*x + B`, with a cache of
/// every `psi_m` computed so far.
#[derive(Debug, Clone)]
pub struct DivisionPolynomials {
    a: BigInt,
    b: BigInt,
    /// `x^3 + A*x + B`; `y^2` reduces to this.
    cubic: IntPoly,
    /// `psi[m]` for `m >= 0`.
    psi_cache: Vec<XYPoly>,
}

impl DivisionPolynomials {
    pub fn new(a: i64, b: i64) -> Self {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let cubic = IntPoly::from_coeffs(vec![
            b.clone(),
            a.clone(),
            BigInt::zero(),
            BigInt::one(),
        ]);
        // seeds: psi_0 .. psi_4
        let psi0 = XYPoly::zero();
        let psi1 = XYPoly::constant(1);
        let psi2 = XYPoly::from_y(IntPoly::constant(2));
        // 3x^4 + 6A x^2 + 12B x - A^2
        let psi3 = XYPoly::from_x(IntPoly::from_coeffs(vec![
            -(&a * &a),
            BigInt::from(12) * &b,
            BigInt::from(6) * &a,
            BigInt::zero(),
            BigInt::from(3),
        ]));
        // 4y (x^6 + 5A x^4 + 20B x^3 - 5A^2 x^2 - 4AB x - 8B^2 - A^3)
        let psi4 = XYPoly::from_y(IntPoly::from_coeffs(vec![
            BigInt::from(-32) * &b * &b - BigInt::from(4) * &a * &a * &a,
            BigInt::from(-16) * &a * &b,
            BigInt::from(-20) * &a * &a,
            BigInt::from(80) * &b,
            BigInt::from(20) * &a,
            BigInt::zero(),
            BigInt::from(4),
        ]));
        DivisionPolynomials {
            a,
            b,
            cubic,
            psi_cache: vec![psi0, psi1, psi2, psi3, psi4],
        }
    }

    pub fn curve_a(&self) -> &BigInt {
        &self.a
    }

    pub fn curve_b(&self) -> &BigInt {
        &self.b
    }

    /// Product in the coordinate ring, reducing `y^2` to the cubic.
    pub fn xy_mul(&self, u: &XYPoly, v: &XYPoly) -> XYPoly {
        let px = u.x_part.mul(&v.x_part);
        let qy = u.y_part.mul(&v.y_part);
        XYPoly {
            x_part: px.add(&self.cubic.mul(&qy)),
            y_part: u.x_part.mul(&v.y_part).add(&u.y_part.mul(&v.x_part)),
        }
    }

    /// Exact division by `c * y`; panics if the theory-guaranteed exactness
    /// fails, since that would mean the recurrences are implemented wrong.
    fn div_by_scaled_y(&self, n: &XYPoly, c: i64) -> XYPoly {
        // c*y*(h0 + y*h1) = c*cubic*h1 + y*(c*h0)
        let h1 = n
            .x_part
            .div_exact_monic(&self.cubic)
            .and_then(|q| q.div_scalar(c))
            .expect("division by the cubic must be exact");
        let h0 = n.y_part.div_scalar(c).expect("scalar division must be exact");
        XYPoly { x_part: h0, y_part: h1 }
    }

    /// `psi_m` for `m >= -1`.
    pub fn psi(&mut self, m: i64) -> XYPoly {
        if m == -1 {
            return XYPoly::constant(-1);
        }
        assert!(m >= 0, "index out of range");
        self.ensure(m as usize);
        self.psi_cache[m as usize].clone()
    }

    fn cube(&self, p: &XYPoly) -> XYPoly {
        let sq = self.xy_mul(p, p);
        self.xy_mul(&sq, p)
    }

    fn ensure(&mut self, m: usize) {
        while self.psi_cache.len() <= m {
            let n = self.psi_cache.len(); // next index to fill, >= 5
            let t = n / 2;
            let cache = &self.psi_cache;
            let next = if n % 2 == 1 {
                // psi_(2t+1) = psi_(t+2) psi_t^3 - psi_(t-1) psi_(t+1)^3
                let lhs = self.xy_mul(&cache[t + 2], &self.cube(&cache[t]));
                let rhs = self.xy_mul(&cache[t - 1], &self.cube(&cache[t + 1]));
                lhs.sub(&rhs)
            } else {
                // 2y psi_(2t) = psi_t (psi_(t+2) psi_(t-1)^2 - psi_(t-2) psi_(t+1)^2)
                let lhs = self.xy_mul(&cache[t + 2], &self.xy_mul(&cache[t - 1], &cache[t - 1]));
                let rhs = self.xy_mul(&cache[t - 2], &self.xy_mul(&cache[t + 1], &cache[t + 1]));
                let prod = self.xy_mul(&cache[t], &lhs.sub(&rhs));
                self.div_by_scaled_y(&prod, 2)
            };
            self.psi_cache.push(next);
        }
    }

    /// The pair `(phi_m, omega_m)` so that `[m]P = (phi/psi^2, omega/psi^3)`.
    pub fn phi_omega(&mut self, m: u32) -> (XYPoly, XYPoly) {
        let m = m as i64;
        assert!(m >= 1, "phi/omega defined for m >= 1");
        self.ensure((m + 2) as usize);
        let x = XYPoly::from_x(IntPoly::from_coeffs(vec![BigInt::zero(), BigInt::one()]));
        let (pm2_lo, pm1, pm, pp1, pp2) = (
            self.psi(m - 2),
            self.psi(m - 1),
            self.psi(m),
            self.psi(m + 1),
            self.psi(m + 2),
        );
        let phi = self
            .xy_mul(&x, &self.xy_mul(&pm, &pm))
            .sub(&self.xy_mul(&pp1, &pm1));
        let omega_num = self
            .xy_mul(&pp2, &self.xy_mul(&pm1, &pm1))
            .sub(&self.xy_mul(&pm2_lo, &self.xy_mul(&pp1, &pp1)));
        let omega = self.div_by_scaled_y(&omega_num, 4);
        (phi, omega)
    }

    /// `[m]P` computed purely from division polynomials.  `point` must be an
    /// affine point of `y^2 = x^3 + A*x + B` over `f`.
    pub fn multiply_point<F: Field>(
        &mut self,
        f: &F,
        point: &CurvePoint<F::Elem>,
        m: u32,
    ) -> CurvePoint<F::Elem> {
        let (x0, y0) = match point {
            CurvePoint::Infinity => return CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => (x.clone(), y.clone()),
        };
        if m == 0 {
            return CurvePoint::Infinity;
        }
        let psi_val = self.psi(m as i64).eval(f, &x0, &y0);
        if f.is_zero(&psi_val) {
            return CurvePoint::Infinity;
        }
        let (phi, omega) = self.phi_omega(m);
        let phi_val = phi.eval(f, &x0, &y0);
        let omega_val = omega.eval(f, &x0, &y0);
        let d2 = f.inv(&f.square(&psi_val)).expect("nonzero");
        let d3 = f.mul(&d2, &f.inv(&psi_val).expect("nonzero"));
        CurvePoint::Affine(f.mul(&phi_val, &d2), f.mul(&omega_val, &d3))
    }
}

/// The monic degree-64 polynomial `f = phi_8 - 87 * psi_8^2` on the short
/// model of the Somos-5 curve.  Its roots are exactly the x-coordinates of
/// the points `T` with `[8]T = (87, 648)`, which is what makes its splitting
/// field carry the level-8 arithmetic of the base point.
pub fn preimage8_polynomial() -> &'static IntPoly {
    static F8: OnceLock<IntPoly> = OnceLock::new();
    F8.get_or_init(|| {
        let mut ctx = DivisionPolynomials::new(SHORT_A, SHORT_B);
        let (phi8, _) = ctx.phi_omega(8);
        let psi8 = ctx.psi(8);
        let psi8_sq = ctx.xy_mul(&psi8, &psi8);
        // both sides are pure polynomials in x
        assert!(phi8.y_part.is_zero() && psi8_sq.y_part.is_zero());
        let f = phi8.x_part.sub(&psi8_sq.x_part.scale(&BigInt::from(87)));
        assert_eq!(f.degree(), Some(64), "preimage polynomial must have degree 64");
        assert!(f.leading().unwrap().is_one(), "preimage polynomial must be monic");
        f
    })
}
