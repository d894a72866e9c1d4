// SPDX-License-Identifier: Apache-2.0
//! The mod-2 cohomology algebra of a product of three spheres and its
//! degree-preserving ring involutions.
//!
//! The algebra is an exterior algebra on three generators `a`, `b`, `c` of
//! degrees `n ≤ m ≤ l`: squares vanish, so it has exactly eight monomials,
//! the square-free words in `a`, `b`, `c`. A monomial is packed into three
//! bits (`a` = bit 0, `b` = bit 1, `c` = bit 2) and an element into an
//! eight-bit set of monomials. All arithmetic is exact bit twiddling.
//!
//! An involution of the algebra is determined by degree-preserving images
//! of the generators whose induced endomorphism squares to the identity;
//! [`enumerate_involutions`] lists them all. From an involution the module
//! derives the data the spectral-sequence engine consumes: the matrices of
//! `τ = 1 + φ` per degree, a minimal generating set of the fixed
//! subalgebra, products `α·φ(α)` that must survive as permanent cocycles,
//! and the obstruction witness showing a nontrivial action cannot come
//! from a free involution when one exists.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec, Subspace};

/// Errors from fiber-algebra construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    /// Sphere degrees must be positive and sorted.
    #[error("sphere degrees must satisfy 1 <= n <= m <= l, got ({n}, {m}, {l})")]
    InvalidDegrees { n: usize, m: usize, l: usize },
    /// The total degree cap keeps enumeration sizes sane.
    #[error("total degree n + m + l = {total} exceeds the supported cap {cap}")]
    DegreesTooLarge { total: usize, cap: usize },
    /// An element string could not be parsed.
    #[error("cannot parse fiber element from {input:?}: {reason}")]
    ParseElement { input: String, reason: String },
    /// An involution string could not be parsed.
    #[error("cannot parse involution from {input:?}: {reason}")]
    ParseInvolution { input: String, reason: String },
    /// Generator images do not define an involution.
    #[error("generator images do not square to the identity")]
    NotAnInvolution,
    /// Generator images are not homogeneous of the generator degrees.
    #[error("image of generator {generator} is not homogeneous of degree {expected}")]
    InhomogeneousImage { generator: char, expected: usize },
}

/// Largest supported total degree `n + m + l`.
///
/// Pattern enumeration is exponential in the number of candidate pages and
/// targets; the cap keeps every supported instance comfortably fast.
pub const MAX_TOTAL_DEGREE: usize = 24;

/// The degrees `(n, m, l)` of the three sphere factors, with `n ≤ m ≤ l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SphereTriple {
    n: usize,
    m: usize,
    l: usize,
}

impl SphereTriple {
    /// Validates `1 ≤ n ≤ m ≤ l` and `n + m + l ≤ MAX_TOTAL_DEGREE`.
    pub fn new(n: usize, m: usize, l: usize) -> Result<Self, FiberError> {
        if n == 0 || n > m || m > l {
            return Err(FiberError::InvalidDegrees { n, m, l });
        }
        let total = n + m + l;
        if total > MAX_TOTAL_DEGREE {
            return Err(FiberError::DegreesTooLarge {
                total,
                cap: MAX_TOTAL_DEGREE,
            });
        }
        Ok(Self { n, m, l })
    }

    /// Degree of the first factor.
    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree of the second factor.
    #[must_use]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Degree of the third factor.
    #[must_use]
    pub fn l(&self) -> usize {
        self.l
    }

    /// Top nonzero degree of the fiber algebra, `n + m + l`.
    #[must_use]
    pub fn top(&self) -> usize {
        self.n + self.m + self.l
    }

    /// Degree of the generator with the given index (0 = `a`, 1 = `b`,
    /// 2 = `c`).
    ///
    /// # Panics
    /// Panics for an index above 2.
    #[must_use]
    pub fn generator_degree(&self, index: usize) -> usize {
        match index {
            0 => self.n,
            1 => self.m,
            2 => self.l,
            _ => panic!("generator index {index} out of range"),
        }
    }

    /// The monomial basis of the fiber algebra in degree `q`, in mask
    /// order.
    #[must_use]
    pub fn degree_basis(&self, q: usize) -> Vec<FiberMonomial> {
        FiberMonomial::all()
            .filter(|mono| mono.degree(self) == q)
            .collect()
    }

    /// Dimension of the fiber algebra in degree `q`.
    #[must_use]
    pub fn degree_dim(&self, q: usize) -> usize {
        self.degree_basis(q).len()
    }

    /// All nonzero homogeneous elements of degree `q`, in value order.
    #[must_use]
    pub fn homogeneous_elements(&self, q: usize) -> Vec<FiberElement> {
        let basis = self.degree_basis(q);
        (1..1u16 << basis.len())
            .map(|bits| {
                let mut e = FiberElement::zero();
                for (i, mono) in basis.iter().enumerate() {
                    if bits >> i & 1 == 1 {
                        e = e.add(FiberElement::from(*mono));
                    }
                }
                e
            })
            .collect()
    }
}

impl fmt::Display for SphereTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.m, self.l)
    }
}

/// A square-free monomial in the generators `a`, `b`, `c`.
///
/// Bit 0 is `a`, bit 1 is `b`, bit 2 is `c`; the empty word is the unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiberMonomial(u8);

impl FiberMonomial {
    /// The unit monomial.
    pub const ONE: Self = Self(0);
    /// The generator `a`.
    pub const A: Self = Self(1);
    /// The generator `b`.
    pub const B: Self = Self(2);
    /// The generator `c`.
    pub const C: Self = Self(4);

    /// Builds a monomial from its three-bit mask.
    ///
    /// # Panics
    /// Panics when `mask >= 8`.
    #[must_use]
    pub fn from_mask(mask: u8) -> Self {
        assert!(mask < 8, "monomial mask {mask} out of range");
        Self(mask)
    }

    /// The three-bit mask of the monomial.
    #[must_use]
    pub fn mask(&self) -> u8 {
        self.0
    }

    /// All eight monomials in mask order.
    pub fn all() -> impl Iterator<Item = Self> {
        (0..8).map(Self)
    }

    /// Degree of the monomial for the given sphere degrees.
    #[must_use]
    pub fn degree(&self, triple: &SphereTriple) -> usize {
        let mut d = 0;
        if self.0 & 1 != 0 {
            d += triple.n();
        }
        if self.0 & 2 != 0 {
            d += triple.m();
        }
        if self.0 & 4 != 0 {
            d += triple.l();
        }
        d
    }

    /// Product of two monomials; `None` when a generator repeats (squares
    /// vanish).
    #[must_use]
    pub fn product(&self, other: &Self) -> Option<Self> {
        (self.0 & other.0 == 0).then(|| Self(self.0 | other.0))
    }
}

impl fmt::Display for FiberMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        for (bit, name) in [(1, 'a'), (2, 'b'), (4, 'c')] {
            if self.0 & bit != 0 {
                write!(f, "{name}")?;
            }
        }
        Ok(())
    }
}

/// An element of the fiber algebra: a set of monomials, added over GF(2).
///
/// Bit `i` of the backing byte records whether the monomial with mask `i`
/// occurs. The derived `Ord` gives a fixed total order used for
/// deterministic enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FiberElement(u8);

impl FiberElement {
    /// The zero element.
    #[must_use]
    pub fn zero() -> Self {
        Self(0)
    }

    /// The multiplicative unit.
    #[must_use]
    pub fn one() -> Self {
        Self(1)
    }

    /// Builds an element from its eight-bit monomial set.
    #[must_use]
    pub fn from_bits(bits: u8) -> Self {
        Self(bits)
    }

    /// The eight-bit monomial set.
    #[must_use]
    pub fn bits(&self) -> u8 {
        self.0
    }

    /// True for the zero element.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }

    /// Sum (symmetric difference of monomial sets).
    #[must_use]
    pub fn add(self, other: Self) -> Self {
        Self(self.0 ^ other.0)
    }

    /// Product, distributing over monomials; overlapping words vanish.
    #[must_use]
    pub fn mul(self, other: Self) -> Self {
        let mut out = 0u8;
        for i in 0..8 {
            if self.0 >> i & 1 == 0 {
                continue;
            }
            for j in 0..8 {
                if other.0 >> j & 1 == 0 {
                    continue;
                }
                if i & j == 0 {
                    out ^= 1 << (i | j);
                }
            }
        }
        Self(out)
    }

    /// The monomials of the element in mask order.
    pub fn monomials(&self) -> impl Iterator<Item = FiberMonomial> + '_ {
        (0..8).filter(|i| self.0 >> i & 1 == 1).map(FiberMonomial)
    }

    /// The set of degrees in which the element has monomials.
    #[must_use]
    pub fn degrees(&self, triple: &SphereTriple) -> BTreeSet<usize> {
        self.monomials().map(|mo| mo.degree(triple)).collect()
    }

    /// Degree of a nonzero homogeneous element; `None` when zero or mixed.
    #[must_use]
    pub fn homogeneous_degree(&self, triple: &SphereTriple) -> Option<usize> {
        let ds = self.degrees(triple);
        (ds.len() == 1).then(|| *ds.iter().next().expect("nonempty"))
    }

    /// Coordinates of the element in a monomial basis; `None` when a
    /// monomial of the element is missing from the basis.
    #[must_use]
    pub fn coordinates(&self, basis: &[FiberMonomial]) -> Option<BitVec> {
        let mut v = BitVec::zeros(basis.len());
        for mono in self.monomials() {
            let i = basis.iter().position(|b| *b == mono)?;
            v.set(i, true);
        }
        Some(v)
    }

    /// Reconstructs an element from coordinates in a monomial basis.
    ///
    /// # Panics
    /// Panics when the vector length differs from the basis length.
    #[must_use]
    pub fn from_coordinates(v: &BitVec, basis: &[FiberMonomial]) -> Self {
        assert_eq!(v.len(), basis.len(), "coordinate length mismatch");
        let mut e = Self::zero();
        for i in v.iter_ones() {
            e = e.add(Self::from(basis[i]));
        }
        e
    }
}

impl From<FiberMonomial> for FiberElement {
    fn from(mono: FiberMonomial) -> Self {
        Self(1 << mono.mask())
    }
}

impl fmt::Display for FiberElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for mono in self.monomials() {
            if !first {
                write!(f, "+")?;
            }
            write!(f, "{mono}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for FiberElement {
    type Err = FiberError;

    /// Parses sums of square-free words, e.g. `"0"`, `"1"`, `"a+bc"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| FiberError::ParseElement {
            input: s.to_owned(),
            reason: reason.to_owned(),
        };
        let trimmed = s.trim();
        if trimmed == "0" {
            return Ok(Self::zero());
        }
        if trimmed.is_empty() {
            return Err(err("empty string"));
        }
        let mut out = Self::zero();
        for term in trimmed.split('+') {
            let term = term.trim();
            let mask = if term == "1" {
                0u8
            } else {
                if term.is_empty() {
                    return Err(err("empty term"));
                }
                let mut mask = 0u8;
                for ch in term.chars() {
                    let bit = match ch {
                        'a' => 1,
                        'b' => 2,
                        'c' => 4,
                        _ => return Err(err("expected letters a, b, c or the term 1")),
                    };
                    if mask & bit != 0 {
                        return Err(err("repeated generator in a term"));
                    }
                    mask |= bit;
                }
                mask
            };
            let term_elem = Self(1 << mask);
            if out.0 & term_elem.0 != 0 {
                return Err(err("repeated term"));
            }
            out = out.add(term_elem);
        }
        Ok(out)
    }
}

/// A degree-preserving ring involution of the fiber algebra, recorded by
/// the images of the generators `a`, `b`, `c`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiberInvolution {
    images: [FiberElement; 3],
}

impl FiberInvolution {
    /// The identity involution.
    #[must_use]
    pub fn identity() -> Self {
        Self {
            images: [
                FiberElement::from(FiberMonomial::A),
                FiberElement::from(FiberMonomial::B),
                FiberElement::from(FiberMonomial::C),
            ],
        }
    }

    /// Builds an involution from generator images, checking that each
    /// image is homogeneous of the generator's degree and that the induced
    /// endomorphism squares to the identity.
    pub fn new(triple: &SphereTriple, images: [FiberElement; 3]) -> Result<Self, FiberError> {
        for (idx, name) in ['a', 'b', 'c'].into_iter().enumerate() {
            let expected = triple.generator_degree(idx);
            if images[idx].homogeneous_degree(triple) != Some(expected) {
                return Err(FiberError::InhomogeneousImage {
                    generator: name,
                    expected,
                });
            }
        }
        let candidate = Self { images };
        let is_involution = (0..3).all(|idx| {
            let gen = FiberElement::from(FiberMonomial::from_mask(1 << idx));
            candidate.apply(candidate.images[idx]) == gen
        });
        if !is_involution {
            return Err(FiberError::NotAnInvolution);
        }
        Ok(candidate)
    }

    /// The image of the generator with the given index (0 = `a`, 1 = `b`,
    /// 2 = `c`).
    ///
    /// # Panics
    /// Panics for an index above 2.
    #[must_use]
    pub fn image(&self, index: usize) -> FiberElement {
        self.images[index]
    }

    /// True for the identity involution.
    #[must_use]
    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Applies the induced ring map to an element.
    #[must_use]
    pub fn apply(&self, element: FiberElement) -> FiberElement {
        let mut out = FiberElement::zero();
        for mono in element.monomials() {
            let mut image = FiberElement::one();
            for idx in 0..3 {
                if mono.mask() >> idx & 1 == 1 {
                    image = image.mul(self.images[idx]);
                }
            }
            out = out.add(image);
        }
        out
    }

    /// Matrix of `τ = 1 + φ` on the degree-`q` monomial basis, acting on
    /// row vectors.
    #[must_use]
    pub fn tau_matrix(&self, triple: &SphereTriple, q: usize) -> BitMatrix {
        let basis = triple.degree_basis(q);
        let rows = basis
            .iter()
            .map(|mono| {
                let e = FiberElement::from(*mono);
                let image = e.add(self.apply(e));
                image
                    .coordinates(&basis)
                    .expect("involutions preserve degree")
            })
            .collect();
        BitMatrix::from_rows(basis.len(), rows).expect("rows share the basis length")
    }

    /// Kernel of `τ = 1 + φ` in degree `q`, i.e. the fixed elements.
    #[must_use]
    pub fn tau_kernel(&self, triple: &SphereTriple, q: usize) -> Subspace {
        let tau = self.tau_matrix(triple, q);
        Subspace::from_vectors(tau.rows(), tau.kernel_basis())
    }

    /// Image of `τ = 1 + φ` in degree `q`.
    #[must_use]
    pub fn tau_image(&self, triple: &SphereTriple, q: usize) -> Subspace {
        let tau = self.tau_matrix(triple, q);
        Subspace::from_vectors(tau.cols(), tau.image_basis())
    }

    /// A minimal generating set of the fixed subalgebra, found degree by
    /// degree: in each degree, fixed elements not yet spanned by products
    /// of earlier generators are appended in value order.
    #[must_use]
    pub fn fixed_subalgebra_generators(&self, triple: &SphereTriple) -> Vec<FiberElement> {
        let mut generators: Vec<FiberElement> = Vec::new();
        for q in 1..=triple.top() {
            let basis = triple.degree_basis(q);
            if basis.is_empty() {
                continue;
            }
            let fixed = self.tau_kernel(triple, q);
            loop {
                let spanned = span_of_products(&generators, triple, q, &basis);
                let missing = fixed
                    .basis()
                    .iter()
                    .map(|v| FiberElement::from_coordinates(v, &basis))
                    .filter(|e| {
                        let coords = e.coordinates(&basis).expect("degree-q element");
                        !spanned.contains(&coords)
                    })
                    .min();
                match missing {
                    Some(e) => generators.push(e),
                    None => break,
                }
            }
        }
        generators
    }

    /// The nonzero products `α · φ(α)` over homogeneous `α`, deduplicated
    /// and sorted by (degree, value). Under a free involution these classes
    /// must survive to every page at the base of the spectral sequence.
    #[must_use]
    pub fn permanent_classes(&self, triple: &SphereTriple) -> Vec<(usize, FiberElement)> {
        let mut out = BTreeSet::new();
        for q in 1..=triple.top() {
            for alpha in triple.homogeneous_elements(q) {
                let product = alpha.mul(self.apply(alpha));
                if !product.is_zero() {
                    let degree = product
                        .homogeneous_degree(triple)
                        .expect("product of homogeneous elements is homogeneous");
                    out.insert((degree, product));
                }
            }
        }
        out.into_iter().collect()
    }

    /// The smallest half-degree homogeneous `α` with `α · φ(α) ≠ 0`,
    /// together with the product (which then spans the top degree). Such a
    /// witness forces any involution inducing `φ` to have a fixed point, so
    /// no free action exists.
    ///
    /// Only half-degree elements can produce a top-degree product, hence
    /// the search scope; triples of odd total degree admit no witness.
    #[must_use]
    pub fn obstruction_witness(&self, triple: &SphereTriple) -> Option<(FiberElement, FiberElement)> {
        let top = triple.top();
        if top % 2 != 0 {
            return None;
        }
        for alpha in triple.homogeneous_elements(top / 2) {
            let product = alpha.mul(self.apply(alpha));
            if !product.is_zero() {
                return Some((alpha, product));
            }
        }
        None
    }

    /// Whether [`FiberInvolution::obstruction_witness`] finds a witness:
    /// true means the action cannot come from a free involution.
    #[must_use]
    pub fn fixed_point_obstruction(&self, triple: &SphereTriple) -> bool {
        self.obstruction_witness(triple).is_some()
    }
}

impl fmt::Display for FiberInvolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a->{},b->{},c->{}",
            self.images[0], self.images[1], self.images[2]
        )
    }
}

impl FromStr for FiberInvolution {
    type Err = FiberError;

    /// Parses `"a->IMAGE,b->IMAGE,c->IMAGE"`; whitespace around commas and
    /// arrows is tolerated. Validation against a triple happens separately
    /// via [`FiberInvolution::new`], so this only restores the images.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| FiberError::ParseInvolution {
            input: s.to_owned(),
            reason: reason.to_owned(),
        };
        let mut images: [Option<FiberElement>; 3] = [None, None, None];
        for part in s.split(',') {
            let (lhs, rhs) = part
                .split_once("->")
                .ok_or_else(|| err("expected GENERATOR->IMAGE parts"))?;
            let idx = match lhs.trim() {
                "a" => 0,
                "b" => 1,
                "c" => 2,
                _ => return Err(err("generator must be a, b or c")),
            };
            if images[idx].is_some() {
                return Err(err("generator listed twice"));
            }
            images[idx] = Some(rhs.trim().parse()?);
        }
        match images {
            [Some(a), Some(b), Some(c)] => Ok(Self { images: [a, b, c] }),
            _ => Err(err("all three generators must be listed")),
        }
    }
}

/// Span, inside the degree-`q` monomial basis, of all products of distinct
/// generators from `generators` (including the empty product in degree 0).
fn span_of_products(
    generators: &[FiberElement],
    triple: &SphereTriple,
    q: usize,
    basis: &[FiberMonomial],
) -> Subspace {
    let mut span = Subspace::zero(basis.len());
    for subset in 0..1u32 << generators.len() {
        let mut product = FiberElement::one();
        for (i, g) in generators.iter().enumerate() {
            if subset >> i & 1 == 1 {
                product = product.mul(*g);
            }
        }
        if product.is_zero() {
            continue;
        }
        if product.homogeneous_degree(triple) == Some(q) {
            if let Some(coords) = product.coordinates(basis) {
                span.insert(&coords);
            }
        }
    }
    span
}

/// All degree-preserving ring involutions of the fiber algebra, identity
/// included, sorted by generator images.
///
/// Candidate images for each generator are the nonzero homogeneous
/// elements of its degree; a choice qualifies when the induced
/// endomorphism squares to the identity.
#[must_use]
pub fn enumerate_involutions(triple: &SphereTriple) -> Vec<FiberInvolution> {
    let candidates: Vec<Vec<FiberElement>> = (0..3)
        .map(|idx| triple.homogeneous_elements(triple.generator_degree(idx)))
        .collect();
    let mut out = Vec::new();
    for ia in &candidates[0] {
        for ib in &candidates[1] {
            for ic in &candidates[2] {
                if let Ok(inv) = FiberInvolution::new(triple, [*ia, *ib, *ic]) {
                    out.push(inv);
                }
            }
        }
    }
    out.sort();
    out
}

/// All nontrivial degree-preserving ring involutions, sorted.
#[must_use]
pub fn nontrivial_involutions(triple: &SphereTriple) -> Vec<FiberInvolution> {
    enumerate_involutions(triple)
        .into_iter()
        .filter(|inv| !inv.is_identity())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(n: usize, m: usize, l: usize) -> SphereTriple {
        SphereTriple::new(n, m, l).unwrap()
    }

    fn elem(s: &str) -> FiberElement {
        s.parse().unwrap()
    }

    #[test]
    fn triple_validation() {
        assert!(SphereTriple::new(0, 1, 2).is_err());
        assert!(SphereTriple::new(2, 1, 3).is_err());
        assert!(SphereTriple::new(8, 8, 9).is_err());
        let t = triple(1, 2, 4);
        assert_eq!(t.top(), 7);
        assert_eq!(t.to_string(), "(1, 2, 4)");
    }

    #[test]
    fn monomial_degrees_distinct_triple() {
        let t = triple(1, 2, 4);
        let degrees: Vec<usize> = FiberMonomial::all().map(|mo| mo.degree(&t)).collect();
        assert_eq!(degrees, vec![0, 1, 2, 3, 4, 5, 6, 7]);
        for q in 0..=7 {
            assert_eq!(t.degree_dim(q), 1, "degree {q}");
        }
    }

    #[test]
    fn degree_bases_with_collisions() {
        let t = triple(1, 1, 2);
        let names = |q: usize| -> Vec<String> {
            t.degree_basis(q).iter().map(ToString::to_string).collect()
        };
        assert_eq!(names(0), vec!["1"]);
        assert_eq!(names(1), vec!["a", "b"]);
        assert_eq!(names(2), vec!["ab", "c"]);
        assert_eq!(names(3), vec!["ac", "bc"]);
        assert_eq!(names(4), vec!["abc"]);
    }

    #[test]
    fn element_arithmetic() {
        assert_eq!(elem("a").mul(elem("bc")), elem("abc"));
        assert!(elem("a").mul(elem("ab")).is_zero());
        assert!(elem("a+b").mul(elem("a+b")).is_zero());
        assert_eq!(elem("a+b").mul(elem("c")), elem("ac+bc"));
        assert_eq!(elem("a").add(elem("a")), FiberElement::zero());
        assert_eq!(FiberElement::one().mul(elem("abc")), elem("abc"));
    }

    #[test]
    fn element_parse_display_round_trip() {
        for s in ["0", "1", "a", "a+bc", "abc", "1+ab+abc"] {
            assert_eq!(elem(s).to_string(), s);
        }
        assert_eq!(elem(" b + a ").to_string(), "a+b");
        assert!("aa".parse::<FiberElement>().is_err());
        assert!("d".parse::<FiberElement>().is_err());
        assert!("".parse::<FiberElement>().is_err());
        assert!("a+a".parse::<FiberElement>().is_err());
    }

    #[test]
    fn homogeneity() {
        let t = triple(1, 2, 4);
        assert_eq!(elem("ab").homogeneous_degree(&t), Some(3));
        assert_eq!(elem("a+b").homogeneous_degree(&t), None);
        assert_eq!(elem("0").homogeneous_degree(&t), None);
        let t2 = triple(1, 1, 2);
        assert_eq!(elem("ab+c").homogeneous_degree(&t2), Some(2));
    }

    #[test]
    fn coordinates_round_trip() {
        let t = triple(1, 1, 2);
        let basis = t.degree_basis(3);
        let v = elem("ac+bc").coordinates(&basis).unwrap();
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(FiberElement::from_coordinates(&v, &basis), elem("ac+bc"));
        // A degree-2 element has no coordinates in the degree-3 basis.
        assert!(elem("c").coordinates(&basis).is_none());
    }

    #[test]
    fn involution_counts() {
        assert_eq!(enumerate_involutions(&triple(1, 2, 4)).len(), 1);
        assert_eq!(enumerate_involutions(&triple(1, 2, 2)).len(), 4);
        assert_eq!(enumerate_involutions(&triple(2, 2, 2)).len(), 22);
        assert_eq!(enumerate_involutions(&triple(1, 2, 3)).len(), 2);
    }

    #[test]
    fn sum_triple_has_unique_nontrivial_involution() {
        let t = triple(1, 2, 3);
        let nontrivial = nontrivial_involutions(&t);
        assert_eq!(nontrivial.len(), 1);
        let inv = &nontrivial[0];
        assert_eq!(inv.to_string(), "a->a,b->b,c->ab+c");
        let (alpha, product) = inv.obstruction_witness(&t).unwrap();
        assert!(inv.fixed_point_obstruction(&t));
        assert_eq!(alpha, elem("c"));
        assert_eq!(product, elem("abc"));
        // The identity has no obstruction witness: products α·α vanish.
        assert!(FiberInvolution::identity().obstruction_witness(&t).is_none());
    }

    #[test]
    fn obstruction_scope_is_the_half_degree() {
        // The swap action on (1, 2, 2) has a nonzero product b·φ(b) = bc in
        // degree 4, but the total degree 5 is odd, so no half-degree element
        // exists and the action is not obstructed.
        let t = triple(1, 2, 2);
        let swap = FiberInvolution::new(&t, [elem("a"), elem("c"), elem("b")]).unwrap();
        assert!(!swap.permanent_classes(&t).is_empty());
        assert!(swap.obstruction_witness(&t).is_none());
        assert!(!swap.fixed_point_obstruction(&t));
    }

    #[test]
    fn involution_parse_display_round_trip() {
        let s = "a->a,b->c,c->b";
        let inv: FiberInvolution = s.parse().unwrap();
        assert_eq!(inv.to_string(), s);
        let t = triple(1, 2, 2);
        assert!(FiberInvolution::new(&t, [inv.image(0), inv.image(1), inv.image(2)]).is_ok());
        assert!("a->a,b->c".parse::<FiberInvolution>().is_err());
        assert!("a->a,a->a,b->b".parse::<FiberInvolution>().is_err());
        // Swapping b and c is not degree-preserving on (1, 2, 3).
        let t2 = triple(1, 2, 3);
        assert_eq!(
            FiberInvolution::new(&t2, [inv.image(0), inv.image(1), inv.image(2)]),
            Err(FiberError::InhomogeneousImage {
                generator: 'b',
                expected: 2
            })
        );
    }

    #[test]
    fn swap_involution_tau_and_fixed_generators() {
        let t = triple(1, 2, 2);
        let swap: FiberInvolution = "a->a,b->c,c->b".parse().unwrap();
        assert!(FiberInvolution::new(&t, [swap.image(0), swap.image(1), swap.image(2)]).is_ok());
        assert_eq!(swap.apply(elem("ab")), elem("ac"));
        assert_eq!(swap.apply(elem("bc")), elem("bc"));
        // Degree 2 basis is {b, c}: τ(b) = b + c = τ(c), kernel is b + c.
        let tau2 = swap.tau_matrix(&t, 2);
        assert_eq!(tau2.rank(), 1);
        assert_eq!(swap.tau_kernel(&t, 2).dim(), 1);
        let kernel_rep = FiberElement::from_coordinates(
            &swap.tau_kernel(&t, 2).basis()[0],
            &t.degree_basis(2),
        );
        assert_eq!(kernel_rep, elem("b+c"));
        assert_eq!(swap.tau_image(&t, 2).dim(), 1);
        // Fixed subalgebra needs a, b+c and bc; ab+ac = a(b+c) is covered.
        let gens = swap.fixed_subalgebra_generators(&t);
        assert_eq!(gens, vec![elem("a"), elem("b+c"), elem("bc")]);
    }

    #[test]
    fn swap_involution_permanent_classes() {
        let t = triple(1, 2, 2);
        let swap: FiberInvolution = "a->a,b->c,c->b".parse().unwrap();
        assert_eq!(swap.permanent_classes(&t), vec![(4, elem("bc"))]);
        // The identity action has no nonzero products α·α.
        assert!(FiberInvolution::identity().permanent_classes(&t).is_empty());
    }

    #[test]
    fn tau_vanishes_for_identity() {
        let t = triple(2, 3, 5);
        let id = FiberInvolution::identity();
        for q in 0..=t.top() {
            assert!(id.tau_matrix(&t, q).is_zero(), "degree {q}");
            assert_eq!(id.tau_kernel(&t, q).dim(), t.degree_dim(q));
        }
        assert_eq!(
            id.fixed_subalgebra_generators(&t),
            vec![elem("a"), elem("b"), elem("c")]
        );
    }
}
