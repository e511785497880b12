//! The 2-adic measure calculus that converts the mod-8 Galois image into an
//! exact density of primes dividing some Somos-5 term.
//!
//! For a good prime `p`, divisibility is controlled by the image of
//! Frobenius, an affine pair `(v, M)` over the 2-adics.  Writing the
//! difference data `N = I - M = [[alpha, beta], [gamma, delta]]` and
//! `v = (e, f)`, everything is read off the three minors of the augmented
//! system `x * N = v`:
//!
//! ```text
//! A = gamma*f - delta*e,   B = alpha*f - beta*e,   C = alpha*delta - beta*gamma
//! ```
//!
//! Knowing the pair only to level `r` (entries mod `2^r`) classifies it as
//!
//! * **Good** — `B != 0` and `ord2(B)` is provably smaller than `ord2(A)`
//!   and `ord2(C)`: every 2-adic lift divides;
//! * **Bad** — some minor is nonzero mod `2^r` but the valuation test
//!   provably fails for every lift: no lift divides;
//! * **Inconclusive** — all three minors vanish mod `2^r`: the level is too
//!   coarse to decide.
//!
//! The measure `mu` of the dividing locus inside one level-`r` cell then has
//! a closed form except on a vanishing tail, which is handled by
//! self-similarity: a cell whose six entries are all even splits into the
//! same picture one level down, scaled by `1/64`.  Summing `mu` over the
//! 8192-element level-3 image group gives the headline density
//! `5087/10752 = 0.473121...`, and re-summing over the level-4 group must
//! (and does) reproduce the same total.

use crate::agl::{AffineGroupElement, GroupTable};
use crate::arith::{ord2, Rational64};
use num_traits::{ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::sync::OnceLock;

/// Difference data `(I - M, v)` of an affine pair, with entries mod
/// `2^level`: matrix `[[alpha, beta], [gamma, delta]]`, vector `(e, f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedMatrix {
    pub level: u32,
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
    pub delta: u32,
    pub e: u32,
    pub f: u32,
}

/// The three minors `(A, B, C)` of the augmented system, mod `2^level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinorTriple {
    pub level: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

/// What a finite level of precision can say about the dividing behaviour of
/// the 2-adic lifts of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every lift divides.
    Good,
    /// No lift divides.
    Bad,
    /// All minors vanish at this level; undecided.
    Inconclusive,
}

impl ReducedMatrix {
    pub fn new(level: u32, [alpha, beta, gamma, delta, e, f]: [u32; 6]) -> Self {
        assert!((1..=15).contains(&level), "level out of range");
        let m = (1u32 << level) - 1;
        ReducedMatrix {
            level,
            alpha: alpha & m,
            beta: beta & m,
            gamma: gamma & m,
            delta: delta & m,
            e: e & m,
            f: f & m,
        }
    }

    /// Difference data of a group element: `I - M` and the vector, entrywise
    /// mod `2^k`.
    pub fn from_group_element(g: &AffineGroupElement) -> Self {
        let modulus = 1u32 << g.k;
        ReducedMatrix::new(
            g.k,
            [
                modulus + 1 - g.a,
                modulus - g.b,
                modulus - g.c,
                modulus + 1 - g.d,
                g.e,
                g.f,
            ],
        )
    }

    fn entries(&self) -> [u32; 6] {
        [self.alpha, self.beta, self.gamma, self.delta, self.e, self.f]
    }

    pub fn is_zero(&self) -> bool {
        self.entries() == [0; 6]
    }

    pub fn is_all_even(&self) -> bool {
        self.entries().iter().all(|x| x % 2 == 0)
    }

    /// Divides every entry by two, dropping one level of precision.
    pub fn halve(&self) -> Self {
        assert!(self.is_all_even() && self.level >= 2);
        let [a, b, c, d, e, f] = self.entries();
        ReducedMatrix::new(self.level - 1, [a / 2, b / 2, c / 2, d / 2, e / 2, f / 2])
    }

    pub fn minors(&self) -> MinorTriple {
        let m = (1u64 << self.level) - 1;
        // any multiple of the modulus at least as large as an entry product
        let big = 1u64 << (2 * self.level);
        let p = |x: u32, y: u32| x as u64 * y as u64;
        MinorTriple {
            level: self.level,
            a: ((p(self.gamma, self.f) + big - p(self.delta, self.e)) & m) as u32,
            b: ((p(self.alpha, self.f) + big - p(self.beta, self.e)) & m) as u32,
            c: ((p(self.alpha, self.delta) + big - p(self.beta, self.gamma)) & m) as u32,
        }
    }

    /// Classifies the cell at its own level.  Good and Bad are stable under
    /// lifting: the saturating valuations from [`ord2`] make both verdicts
    /// proofs about every lift, not guesses.  All-even cells should be
    /// [`resolve`](Self::resolve)d first, which can only sharpen the verdict.
    pub fn classify(&self) -> Verdict {
        let m = self.minors();
        if m.a == 0 && m.b == 0 && m.c == 0 {
            return Verdict::Inconclusive;
        }
        if m.b != 0 {
            let vb = ord2(m.b as u64, self.level);
            if vb < ord2(m.a as u64, self.level) && vb < ord2(m.c as u64, self.level) {
                return Verdict::Good;
            }
        }
        Verdict::Bad
    }

    fn gamma_delta_even(&self) -> bool {
        self.gamma % 2 == 0 && self.delta % 2 == 0
    }

    /// Halves out the even part: lifts of an all-even cell are themselves
    /// all even, and halving them is a bijection that shifts all three minor
    /// valuations by exactly two, so the dividing locus is unchanged while
    /// one extra bit of precision becomes visible.  Returns the first
    /// not-all-even cell (or the zero cell unchanged, which never settles).
    pub fn resolve(&self) -> Self {
        let mut x = *self;
        while x.is_all_even() && !x.is_zero() && x.level >= 2 {
            x = x.halve();
        }
        x
    }

    /// A uniformly random refinement of this cell to a deeper level.
    pub fn lift(&self, rng: &mut StdRng, to_level: u32) -> Self {
        assert!((self.level..=15).contains(&to_level));
        let step = 1u32 << self.level;
        let span = 1u32 << (to_level - self.level);
        let lifted = self.entries().map(|x| x + step * rng.gen_range(0..span));
        ReducedMatrix::new(to_level, lifted)
    }

    /// The measure of the dividing locus inside this cell.
    ///
    /// Resolved Good cells divide throughout; resolved Bad cells never do;
    /// an unresolved cell carries measure `1/3` of its size when the lower
    /// row of `I - M` is even and nothing otherwise; the zero cell carries
    /// `1/7` of its size, the fixed point of the halving self-similarity.
    /// Each verdict's closed form below is those fractions times the cell
    /// size `1/(2 * 64^(level-1))`, the reciprocal of the group order.
    pub fn mu(&self) -> Rational64 {
        assert!(self.level <= 10, "measure denominators overflow past level 10");
        let scale = 64i64.pow(self.level - 1);
        if self.is_zero() {
            return *zero_cell_measure_mod2() / scale;
        }
        let r = self.resolve();
        match r.classify() {
            Verdict::Good => Rational64::new(1, 2 * scale),
            Verdict::Bad => Rational64::zero(),
            Verdict::Inconclusive => {
                if r.gamma_delta_even() {
                    Rational64::new(1, 6 * scale)
                } else {
                    Rational64::zero()
                }
            }
        }
    }
}

/// Measure of the all-zero cell mod 2, computed from the fixed-point
/// equation it satisfies: the cell splits into 64 subcells whose halved
/// data ranges over every mod-2 configuration, so `m = (S + m) / 64` with
/// `S` the total measure of the 63 nonzero configurations.
fn zero_cell_measure_mod2() -> &'static Rational64 {
    static VALUE: OnceLock<Rational64> = OnceLock::new();
    VALUE.get_or_init(|| {
        let mut s = Rational64::zero();
        for bits in 1u32..64 {
            let cfg = ReducedMatrix::new(
                1,
                [bits & 1, bits >> 1 & 1, bits >> 2 & 1, bits >> 3 & 1, bits >> 4 & 1, bits >> 5 & 1],
            );
            s += cfg.mu();
        }
        s / 63
    })
}

/// Verdict tallies over a full group table, with the undecidable zero cell
/// kept separate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct VerdictCounts {
    good: usize,
    bad: usize,
    inconclusive_even: usize,
    inconclusive_odd: usize,
    zero: usize,
}

fn verdict_counts(table: &GroupTable) -> VerdictCounts {
    let mut counts = VerdictCounts { good: 0, bad: 0, inconclusive_even: 0, inconclusive_odd: 0, zero: 0 };
    for g in table.iter() {
        let cell = ReducedMatrix::from_group_element(g);
        if cell.is_zero() {
            counts.zero += 1;
            continue;
        }
        let r = cell.resolve();
        match r.classify() {
            Verdict::Good => counts.good += 1,
            Verdict::Bad => counts.bad += 1,
            Verdict::Inconclusive => {
                if r.gamma_delta_even() {
                    counts.inconclusive_even += 1;
                } else {
                    counts.inconclusive_odd += 1;
                }
            }
        }
    }
    counts
}

/// The exact density computation over one level of the image group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub level: u32,
    pub group_order: usize,
    /// Non-identity cells where every lift divides.
    pub good: usize,
    /// Non-identity cells where no lift divides.
    pub bad: usize,
    /// Undecided cells with even lower row, measure `1/(6 * 64^(r-1))` each.
    pub inconclusive_even: usize,
    /// Undecided cells with an odd entry in the lower row, measure zero.
    pub inconclusive_odd: usize,
    /// Measure of the identity cell.
    pub identity_measure: Rational64,
    /// Total measure: the density of dividing primes.
    pub density: Rational64,
}

impl DensityReport {
    pub fn density_f64(&self) -> f64 {
        self.density.to_f64().expect("small rational")
    }
}

/// Sums the cell measure over an image group table.
pub fn total_density(table: &GroupTable) -> DensityReport {
    let counts = verdict_counts(table);
    assert_eq!(counts.zero, 1, "a group table contains exactly one identity");
    let mut density = Rational64::zero();
    let mut identity_measure = Rational64::zero();
    for g in table.iter() {
        let cell = ReducedMatrix::from_group_element(g);
        let m = cell.mu();
        if cell.is_zero() {
            identity_measure = m;
        }
        density += m;
    }
    DensityReport {
        level: table.level(),
        group_order: table.len(),
        good: counts.good,
        bad: counts.bad,
        inconclusive_even: counts.inconclusive_even,
        inconclusive_odd: counts.inconclusive_odd,
        identity_measure,
        density,
    }
}

/// Rigorous enclosure of the density from one level alone: cells proved
/// dividing over cells proved either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityBracket {
    pub level: u32,
    pub lower: Rational64,
    pub upper: Rational64,
}

impl DensityBracket {
    pub fn contains(&self, x: Rational64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> Rational64 {
        self.upper - self.lower
    }
}

/// Brackets the density using only the resolved verdicts at one level:
/// Good cells are all-dividing (lower bound); Bad and odd-row inconclusive
/// cells are non-dividing, so only Good, even-row inconclusive, and the
/// identity cell can carry dividing mass (upper bound).
pub fn bracket_density(table: &GroupTable) -> DensityBracket {
    let counts = verdict_counts(table);
    let n = table.len() as i64;
    DensityBracket {
        level: table.level(),
        lower: Rational64::new(counts.good as i64, n),
        upper: Rational64::new((counts.good + counts.inconclusive_even + counts.zero) as i64, n),
    }
}

/// Monte Carlo estimate of the dividing fraction inside one cell: sample
/// uniform lifts to `lift_level`, settle each by the stable classification
/// (halving first while all entries are even), and return the resolved
/// success rate.  The unresolved tail has probability on the order of
/// `8^-(lift_level - level)` and is dropped.
pub fn mu_montecarlo(cell: &ReducedMatrix, lift_level: u32, trials: u64, seed: u64) -> f64 {
    assert!(lift_level > cell.level);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut dividing = 0u64;
    let mut resolved = 0u64;
    for _ in 0..trials {
        let x = cell.lift(&mut rng, lift_level).resolve();
        if x.is_zero() {
            continue;
        }
        match x.classify() {
            Verdict::Good => {
                dividing += 1;
                resolved += 1;
            }
            Verdict::Bad => resolved += 1,
            Verdict::Inconclusive => {}
        }
    }
    assert!(
        (trials - resolved) * 100 <= trials,
        "more than 1% of samples unresolved; lift deeper"
    );
    dividing as f64 / resolved as f64
}

/// Number of pairs `(x, y)` mod `2^k` with `x*y = a (mod 2^k)`, in closed
/// form: `(ord2(a) + 1) * 2^(k-1)` for nonzero `a`, and `(k + 2) * 2^(k-1)`
/// for `a = 0`.
pub fn product_congruence_count(k: u32, a: u64) -> u64 {
    let a = a & ((1u64 << k) - 1);
    if a == 0 {
        (k as u64 + 2) << (k - 1)
    } else {
        (a.trailing_zeros() as u64 + 1) << (k - 1)
    }
}

/// Number of 2x2 matrices over `Z/2^k` with determinant zero, in closed
/// form: `3 * 2^(3k-1) - 2^(2k-1)`.
pub fn singular_matrix_count(k: u32) -> u64 {
    3 * (1u64 << (3 * k - 1)) - (1u64 << (2 * k - 1))
}
