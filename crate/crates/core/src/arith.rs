//! Shared exact arithmetic: big integers and rationals, 2-adic valuations,
//! a prime sieve, modular inverses and naive factoring.
//!
//! Everything downstream (curve arithmetic, division polynomials, the measure
//! calculus) is exact, so the integer and rational types here are
//! arbitrary-precision.  The modular utilities work on `u64` because the
//! census only ever reduces modulo primes below `2^32`.

pub use num_bigint::BigInt;
pub use num_rational::{BigRational, Rational64};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    /// `mod_inverse(a, m)` with `gcd(a, m) != 1`.
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(u64, u64),
    /// `factor_small(0)`: zero has no factorization.
    #[error("cannot factor zero")]
    FactorZero,
}

/// 2-adic valuation of a residue class modulo `2^k`.
///
/// A nonzero residue `r mod 2^k` pins the valuation down exactly; the zero
/// class only says "at least `k`".  Keeping the distinction explicit avoids
/// silently treating a truncated zero as a genuine one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Val2 {
    /// The valuation is exactly this.
    Exact(u32),
    /// All we know modulo `2^k` is that the valuation is `>= k`.
    AtLeast(u32),
}

impl Val2 {
    /// The best lower bound this value certifies.
    pub fn lower_bound(self) -> u32 {
        match self {
            Val2::Exact(v) => v,
            Val2::AtLeast(k) => k,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Val2::Exact(_))
    }
}

/// Order by certified lower bound; an `AtLeast(k)` ranks above `Exact(v)`
/// for every `v <= k`.  Residues modulo `2^k` only ever produce `Exact(v)`
/// with `v < k` alongside `AtLeast(k)`, so within one level this is the
/// natural total order on "how divisible by 2".
impl Ord for Val2 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |v: &Val2| (v.lower_bound(), !v.is_exact() as u8);
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for Val2 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// 2-adic valuation of the residue `r` modulo `2^k` (`r` is reduced first).
pub fn ord2(r: u64, k: u32) -> Val2 {
    assert!(k >= 1 && k < 64, "level out of range");
    let r = r & ((1u64 << k) - 1);
    if r == 0 {
        Val2::AtLeast(k)
    } else {
        Val2::Exact(r.trailing_zeros())
    }
}

/// All primes `<= limit`, ascending (empty for `limit < 2`).
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Inverse of `a` modulo `m >= 2`, via the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, m: u64) -> Result<u64, ArithError> {
    assert!(m >= 2, "modulus must be at least 2");
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(ArithError::NotInvertible(a % m, m));
    }
    let m = m as i128;
    Ok(((t0 % m + m) % m) as u64)
}

/// `a * b mod m` without overflow for any `m < 2^64`.
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Floor of the square root of `n`.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    // Float rounding can land one off in either direction; fix it up.
    while x > 0 && x.checked_mul(x).map_or(true, |s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |s| s <= n) {
        x += 1;
    }
    x
}

/// Prime factorization of `n >= 1` by trial division, as an ascending list
/// with multiplicity (`factor_small(1)` is empty).
pub fn factor_small(n: u64) -> Result<Vec<u64>, ArithError> {
    if n == 0 {
        return Err(ArithError::FactorZero);
    }
    let mut n = n;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        while n % d == 0 {
            out.push(d);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    Ok(out)
}
