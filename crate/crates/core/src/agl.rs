//! The affine groups `AGL_2(Z/2^k)` and the subgroups of them that the
//! Galois action on the Somos-5 curve actually hits.
//!
//! An element is a pair `(v, M)` of a row vector and an invertible 2x2
//! matrix with entries mod `2^k`, composed by
//!
//! ```text
//! (v1, M1) * (v2, M2) = (v1 + v2*M1, M2*M1)
//! ```
//!
//! which is the natural order when elements act on the left on column
//! vectors via the 3x3 embedding `[[a, b, 0], [c, d, 0], [e, f, 1]]`
//! (composition of embedded matrices runs in the reversed order; see the
//! anti-isomorphism test).
//!
//! The group relevant to the Somos-5 question, here `affine_image(k)`,
//! consists of the pairs whose matrix reduces mod 8 into a specific
//! 256-element matrix group and whose vector satisfies a parity link
//! `e even <=> det(M) = +-1 mod 8`.  Everything downstream (the measure
//! calculus in [`crate::density`]) only needs this group as a finite list of
//! elements, so the representation is a flat, deterministically ordered
//! table.

use crate::arith::mod_inverse;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AglError {
    /// Two elements from different levels cannot be composed.
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    /// Closure or table construction needs at least one element to fix a level.
    #[error("no generators supplied")]
    NoGenerators,
}

/// An element `(v, M)` of `AGL_2(Z/2^k)`: matrix `[[a, b], [c, d]]`, vector
/// `(e, f)`, all entries reduced mod `2^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineGroupElement {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub e: u32,
    pub f: u32,
    /// Entries live in `Z/2^k`.
    pub k: u32,
}

impl AffineGroupElement {
    pub fn new(k: u32, [a, b, c, d, e, f]: [u32; 6]) -> Self {
        assert!((1..=10).contains(&k), "level out of range");
        let m = (1u32 << k) - 1;
        AffineGroupElement { a: a & m, b: b & m, c: c & m, d: d & m, e: e & m, f: f & m, k }
    }

    pub fn identity(k: u32) -> Self {
        AffineGroupElement::new(k, [1, 0, 0, 1, 0, 0])
    }

    fn mask(&self) -> u32 {
        (1u32 << self.k) - 1
    }

    /// Packs the six entries into one word; total order on elements of a
    /// fixed level.
    pub fn key(&self) -> u64 {
        let mut key = 0u64;
        for (i, v) in [self.a, self.b, self.c, self.d, self.e, self.f].iter().enumerate() {
            key |= (*v as u64) << (10 * i);
        }
        key
    }

    /// Group law `(v1, M1) * (v2, M2) = (v1 + v2*M1, M2*M1)`.
    pub fn mul(&self, other: &Self) -> Result<Self, AglError> {
        if self.k != other.k {
            return Err(AglError::LevelMismatch(self.k, other.k));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        let m = self.mask() as u64;
        let (a1, b1, c1, d1) = (self.a as u64, self.b as u64, self.c as u64, self.d as u64);
        let (a2, b2, c2, d2) = (o.a as u64, o.b as u64, o.c as u64, o.d as u64);
        AffineGroupElement {
            // M2 * M1
            a: ((a2 * a1 + b2 * c1) & m) as u32,
            b: ((a2 * b1 + b2 * d1) & m) as u32,
            c: ((c2 * a1 + d2 * c1) & m) as u32,
            d: ((c2 * b1 + d2 * d1) & m) as u32,
            // v1 + v2 * M1
            e: ((self.e as u64 + o.e as u64 * a1 + o.f as u64 * c1) & m) as u32,
            f: ((self.f as u64 + o.e as u64 * b1 + o.f as u64 * d1) & m) as u32,
            k: self.k,
        }
    }

    pub fn det(&self) -> u32 {
        let m = self.mask() as u64;
        let ad = self.a as u64 * self.d as u64;
        let bc = self.b as u64 * self.c as u64;
        ((ad + (m + 1) * (m + 1) - bc) & m) as u32
    }

    pub fn trace(&self) -> u32 {
        (self.a + self.d) & self.mask()
    }

    /// Inverse, defined when `det` is odd (always the case in these groups).
    pub fn inverse(&self) -> Option<Self> {
        let modulus = 1u64 << self.k;
        let det_inv = mod_inverse(self.det() as u64, modulus).ok()?;
        let m = self.mask() as u64;
        let mul = |x: u64, y: u64| (x * y) & m;
        let neg = |x: u64| (modulus - (x & m)) & m;
        // M^-1 = det^-1 * [[d, -b], [-c, a]]
        let ia = mul(det_inv, self.d as u64);
        let ib = mul(det_inv, neg(self.b as u64));
        let ic = mul(det_inv, neg(self.c as u64));
        let id = mul(det_inv, self.a as u64);
        // v' = -v * M^-1
        let ie = neg(mul(self.e as u64, ia).wrapping_add(mul(self.f as u64, ic)) & m);
        let iff = neg(mul(self.e as u64, ib).wrapping_add(mul(self.f as u64, id)) & m);
        Some(AffineGroupElement {
            a: ia as u32,
            b: ib as u32,
            c: ic as u32,
            d: id as u32,
            e: ie as u32,
            f: iff as u32,
            k: self.k,
        })
    }

    /// Entrywise reduction to a smaller level.
    pub fn reduce_to_level(&self, k: u32) -> Self {
        assert!(k <= self.k);
        AffineGroupElement::new(k, [self.a, self.b, self.c, self.d, self.e, self.f])
    }

    /// The 3x3 embedding `[[a, b, 0], [c, d, 0], [e, f, 1]]`.
    pub fn to_matrix3(&self) -> [[u32; 3]; 3] {
        [
            [self.a, self.b, 0],
            [self.c, self.d, 0],
            [self.e, self.f, 1],
        ]
    }
}

/// A finite subgroup of some `AGL_2(Z/2^k)` as an explicit element table,
/// deterministically ordered, with membership testing.
#[derive(Debug, Clone)]
pub struct GroupTable {
    level: u32,
    elements: Vec<AffineGroupElement>,
    index: HashSet<u64>,
    generators: Vec<AffineGroupElement>,
}

impl GroupTable {
    fn from_set(level: u32, set: HashSet<u64>, mut elements: Vec<AffineGroupElement>, generators: Vec<AffineGroupElement>) -> Self {
        elements.sort_unstable_by_key(|g| g.key());
        GroupTable { level, elements, index: set, generators }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &AffineGroupElement) -> bool {
        g.k == self.level && self.index.contains(&g.key())
    }

    pub fn elements(&self) -> &[AffineGroupElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[AffineGroupElement] {
        &self.generators
    }

    pub fn iter(&self) -> impl Iterator<Item = &AffineGroupElement> {
        self.elements.iter()
    }

    /// Checks `g * h` lands in the table for every pair; `O(n^2)`, so only
    /// sensible for groups up to ten thousand or so elements.
    pub fn is_closed_exhaustive(&self) -> bool {
        self.elements.iter().all(|g| {
            self.elements
                .iter()
                .all(|h| self.index.contains(&g.mul_unchecked(h).key()))
        })
    }
}

/// Closes a generating set under the group operation (inverses come for free
/// in a finite group).
pub fn close_subgroup(generators: &[AffineGroupElement]) -> Result<GroupTable, AglError> {
    let level = generators.first().ok_or(AglError::NoGenerators)?.k;
    for g in generators {
        if g.k != level {
            return Err(AglError::LevelMismatch(level, g.k));
        }
    }
    let mut set = HashSet::new();
    let mut elements = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let id = AffineGroupElement::identity(level);
    set.insert(id.key());
    elements.push(id);
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for gen in generators {
            let h = g.mul_unchecked(gen);
            if set.insert(h.key()) {
                elements.push(h);
                queue.push_back(h);
            }
        }
    }
    Ok(GroupTable::from_set(level, set, elements, generators.to_vec()))
}

/// The three matrices generating the mod-8 matrix image (as affine elements
/// with zero vector at level 3), plus the vector decoration that generates
/// the full affine image at any level.
fn image_generators(k: u32) -> [AffineGroupElement; 3] {
    [
        AffineGroupElement::new(k, [1, 1, 0, 1, 0, 0]),
        AffineGroupElement::new(k, [7, 0, 2, 1, 0, 0]),
        AffineGroupElement::new(k, [5, 0, 2, 1, 1, 0]),
    ]
}

/// The 256-element matrix group mod 8 that the curve's mod-8 Galois image
/// generates (vectors all zero here; index 6 in `GL_2(Z/8)`).
pub fn matrix_image_mod8() -> GroupTable {
    let gens = [
        AffineGroupElement::new(3, [1, 1, 0, 1, 0, 0]),
        AffineGroupElement::new(3, [7, 0, 2, 1, 0, 0]),
        AffineGroupElement::new(3, [5, 0, 2, 1, 0, 0]),
    ];
    close_subgroup(&gens).expect("generators share a level")
}

/// The full affine image group at level `k` (supported: `k = 3` or `4`),
/// built by direct enumeration: matrices reducing mod 8 into the matrix
/// image, vectors with `e` even exactly when `det(M) = 1 or 7 (mod 8)`.
pub fn affine_image(k: u32) -> GroupTable {
    assert!(k == 3 || k == 4, "affine image table supported at levels 3 and 4");
    let h3 = matrix_image_mod8();
    let mat8: HashSet<u32> = h3
        .iter()
        .map(|g| g.a | g.b << 3 | g.c << 6 | g.d << 9)
        .collect();
    let size = 1u32 << k;
    let mut set = HashSet::new();
    let mut elements = Vec::new();
    for a in 0..size {
        for b in 0..size {
            for c in 0..size {
                for d in 0..size {
                    let key8 = (a & 7) | (b & 7) << 3 | (c & 7) << 6 | (d & 7) << 9;
                    if !mat8.contains(&key8) {
                        continue;
                    }
                    let det8 = (a * d).wrapping_sub(b * c) & 7;
                    let e_parity = u32::from(det8 != 1 && det8 != 7);
                    for e in (e_parity..size).step_by(2) {
                        for f in 0..size {
                            let g = AffineGroupElement { a, b, c, d, e, f, k };
                            set.insert(g.key());
                            elements.push(g);
                        }
                    }
                }
            }
        }
    }
    GroupTable::from_set(k, set, elements, image_generators(k).to_vec())
}

/// The Frattini subgroup of a finite 2-group: the closure of all squares.
///
/// Squares are collected in deterministic order and added as generators one
/// by one, re-closing, until every square is inside.
pub fn frattini_subgroup(group: &GroupTable) -> GroupTable {
    assert!(group.len().is_power_of_two(), "Frattini-by-squares needs a 2-group");
    let mut squares: Vec<AffineGroupElement> =
        group.iter().map(|g| g.mul_unchecked(g)).collect();
    squares.sort_unstable_by_key(|g| g.key());
    squares.dedup_by_key(|g| g.key());
    let mut gens: Vec<AffineGroupElement> = Vec::new();
    let mut table = close_subgroup(&[AffineGroupElement::identity(group.level())])
        .expect("identity closure");
    for s in squares {
        if !table.contains(&s) {
            gens.push(s);
            table = close_subgroup(&gens).expect("same level");
        }
    }
    table
}

/// The least `o >= 0` such that `x * (I - M) = 2^o * v` has a solution `x`
/// mod `2^k`, found by brute force over all `4^k` vectors.  Always at most
/// `k`, since at `o = k` the right side is zero and `x = 0` works.
///
/// When `(v, M)` is the image of Frobenius at a good prime `p`, this `o` is
/// the 2-adic valuation of the order of the base point mod `p` (capped at
/// what level `k` can see).
pub fn image_order(g: &AffineGroupElement) -> u32 {
    let modulus = 1u64 << g.k;
    let m = modulus - 1;
    // rows of I - M
    let n11 = (modulus + 1 - g.a as u64) & m;
    let n21 = (modulus - g.c as u64) & m;
    let n12 = (modulus - g.b as u64) & m;
    let n22 = (modulus + 1 - g.d as u64) & m;
    for o in 0..=g.k {
        let t1 = ((g.e as u64) << o) & m;
        let t2 = ((g.f as u64) << o) & m;
        for x1 in 0..modulus {
            for x2 in 0..modulus {
                if (x1 * n11 + x2 * n21) & m == t1 && (x1 * n12 + x2 * n22) & m == t2 {
                    return o;
                }
            }
        }
    }
    unreachable!("o = k always solves");
}
