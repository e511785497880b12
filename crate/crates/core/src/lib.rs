//! Exact computation of the density of primes dividing some term of the
//! Somos-5 sequence.
//!
//! The Somos-5 sequence is defined by `a(0) = ... = a(4) = 1` and
//!
//! ```text
//! a(m) * a(m-5) = a(m-1) * a(m-4) + a(m-2) * a(m-3)
//! ```
//!
//! and, despite the division, consists entirely of integers.  A prime `p`
//! divides some term if and only if a certain point on an elliptic curve has
//! even order modulo `p`; tracking the image of Galois inside an affine group
//! over the 2-adic integers turns that condition into a purely group-theoretic
//! measure computation.  This crate carries out the whole chain exactly:
//!
//! * [`somos`] — the sequence itself and its elliptic-curve shadow,
//! * [`ellcurve`] — Weierstrass curve arithmetic over `Q` and `F_p`,
//! * [`divpoly`] — division polynomials and the degree-64 preimage polynomial,
//! * [`agl`] — the affine groups `AGL_2(Z/2^k)` and the image subgroups inside them,
//! * [`density`] — the measure calculus that evaluates the density exactly,
//! * [`census`] — the per-prime census that confirms it empirically.
//!
//! The headline number: the density of primes dividing some Somos-5 term is
//! exactly `5087/10752 = 0.473121...`.

pub mod agl;
pub mod arith;
pub mod census;
pub mod density;
pub mod divpoly;
pub mod ellcurve;
pub mod field;
pub mod somos;
