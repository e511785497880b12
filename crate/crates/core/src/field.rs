//! A minimal field abstraction so the curve and polynomial code can run
//! unchanged over the rationals, over `F_p`, and over `F_p^2`.
//!
//! The trait is deliberately context-style: a field *value* (carrying, say,
//! the modulus) acts on plain element data.  That keeps `F_p` elements as
//! bare `u64`s instead of wrapping every residue in a struct that drags the
//! modulus around.

use crate::arith::{mod_inverse, mul_mod, BigInt, BigRational};
use num_integer::Integer;
use num_traits::{One, Zero};

pub trait Field: Clone {
    type Elem: Clone + PartialEq + Eq + std::fmt::Debug + std::hash::Hash;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }
}

/// The prime field `F_p` for an odd-or-even prime `p < 2^32`; elements are
/// residues in `[0, p)` stored as `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2, "modulus must be at least 2");
        PrimeField { p }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_i64(&self, n: i64) -> u64 {
        let p = self.p as i64;
        // i64 can't represent -p for p near 2^63, but moduli here are < 2^32.
        (((n % p) + p) % p) as u64
    }

    fn from_bigint(&self, n: &BigInt) -> u64 {
        let m = n.mod_floor(&BigInt::from(self.p));
        let (_, digits) = m.to_u64_digits();
        match digits.len() {
            0 => 0,
            1 => digits[0],
            _ => unreachable!("residue exceeds modulus"),
        }
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        mod_inverse(*a, self.p).ok()
    }
}

/// The rational numbers, with `BigRational` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from(n.clone())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        Zero::is_zero(a)
    }
}

/// A quadratic extension `F_p(sqrt(t))` of an odd prime field, where `t` is a
/// quadratic nonresidue mod `p`.  Elements are `a + b*sqrt(t)`.
///
/// Used to take square roots that do not exist in `F_p` itself, e.g. to lift
/// a root of a univariate polynomial to an actual curve point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadExt {
    base: PrimeField,
    /// The nonresidue `t`.
    pub t: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: u64,
    pub b: u64,
}

impl QuadExt {
    /// Builds `F_p(sqrt(t))` after checking that `t` really is a nonresidue.
    pub fn new(p: u64, t: u64) -> Self {
        assert!(p % 2 == 1 && p > 2, "base field must be odd");
        let f = PrimeField::new(p);
        assert!(!is_square(&f, t % p), "{t} is a square mod {p}");
        QuadExt { base: f, t: t % p }
    }

    /// Finds the smallest quadratic nonresidue and extends by its root.
    pub fn smallest(p: u64) -> Self {
        let f = PrimeField::new(p);
        let t = (2..p)
            .find(|&t| !is_square(&f, t))
            .expect("every odd prime field has a nonresidue");
        QuadExt { base: f, t }
    }

    pub fn p(&self) -> u64 {
        self.base.p
    }

    /// Embeds a base-field residue.
    pub fn lift(&self, a: u64) -> QuadElem {
        QuadElem { a: a % self.base.p, b: 0 }
    }

    /// The element `b * sqrt(t)`.
    pub fn root_multiple(&self, b: u64) -> QuadElem {
        QuadElem { a: 0, b: b % self.base.p }
    }
}

/// Euler criterion; 0 counts as a square.
pub fn is_square(f: &PrimeField, a: u64) -> bool {
    if a == 0 {
        return true;
    }
    pow_mod(a, (f.p - 1) / 2, f.p) == 1
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

impl Field for QuadExt {
    type Elem = QuadElem;

    fn zero(&self) -> QuadElem {
        QuadElem { a: 0, b: 0 }
    }

    fn one(&self) -> QuadElem {
        QuadElem { a: 1 % self.base.p, b: 0 }
    }

    fn from_i64(&self, n: i64) -> QuadElem {
        QuadElem { a: self.base.from_i64(n), b: 0 }
    }

    fn from_bigint(&self, n: &BigInt) -> QuadElem {
        QuadElem { a: self.base.from_bigint(n), b: 0 }
    }

    fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem {
            a: self.base.add(&x.a, &y.a),
            b: self.base.add(&x.b, &y.b),
        }
    }

    fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem {
            a: self.base.sub(&x.a, &y.a),
            b: self.base.sub(&x.b, &y.b),
        }
    }

    fn neg(&self, x: &QuadElem) -> QuadElem {
        QuadElem {
            a: self.base.neg(&x.a),
            b: self.base.neg(&x.b),
        }
    }

    fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        // (a1 + b1 s)(a2 + b2 s) = a1 a2 + t b1 b2 + (a1 b2 + a2 b1) s
        let f = &self.base;
        QuadElem {
            a: f.add(&f.mul(&x.a, &y.a), &f.mul(&self.t, &f.mul(&x.b, &y.b))),
            b: f.add(&f.mul(&x.a, &y.b), &f.mul(&x.b, &y.a)),
        }
    }

    fn inv(&self, x: &QuadElem) -> Option<QuadElem> {
        // 1/(a + b s) = (a - b s) / (a^2 - t b^2); the norm vanishes only at
        // zero because t is a nonresidue.
        let f = &self.base;
        let norm = f.sub(&f.mul(&x.a, &x.a), &f.mul(&self.t, &f.mul(&x.b, &x.b)));
        let ninv = f.inv(&norm)?;
        Some(QuadElem {
            a: f.mul(&x.a, &ninv),
            b: f.mul(&f.neg(&x.b), &ninv),
        })
    }
}
