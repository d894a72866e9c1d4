// SPDX-License-Identifier: Apache-2.0
//! Dense linear algebra over the two-element field.
//!
//! Vectors are packed into 64-bit words; matrices store one [`BitVec`] per
//! row and act on row vectors (`v ↦ v · M`), so `M.row(i)` is the image of
//! the `i`-th basis vector. [`Subspace`] keeps its basis in reduced row
//! echelon form, which makes membership tests, coordinates and canonical
//! coset representatives unique and cheap. [`SubQuotient`] layers a
//! boundary subspace inside a cycle subspace and hands out canonical
//! transversal representatives for the quotient.

use std::fmt;

use thiserror::Error;

/// Errors from GF(2) linear algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// A vector was required to lie in a subspace but does not.
    #[error("vector is not contained in the subspace")]
    NotInSubspace,
    /// The boundary space of a subquotient must lie inside the cycle space.
    #[error("boundaries are not contained in cycles")]
    BoundariesNotInCycles,
}

/// A vector over GF(2) with a fixed length, packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    /// The zero vector of the given length.
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// A vector with ones exactly at `indices`.
    ///
    /// # Panics
    /// Panics if any index is out of range.
    #[must_use]
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    /// Number of coordinates.
    #[must_use]
    pub fn len(&self) -> usize {
        self.len
    }

    /// True when the length is zero.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Coordinate `i`.
    ///
    /// # Panics
    /// Panics if `i >= len`.
    #[must_use]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Sets coordinate `i`.
    ///
    /// # Panics
    /// Panics if `i >= len`.
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    /// Adds `other` into `self` (addition over GF(2) is XOR).
    ///
    /// # Panics
    /// Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch in xor_assign");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// True when every coordinate is zero.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the first nonzero coordinate, if any.
    #[must_use]
    pub fn first_set(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Number of nonzero coordinates.
    #[must_use]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Iterates over the indices of nonzero coordinates in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A matrix over GF(2), stored as one [`BitVec`] per row.
///
/// The matrix represents a linear map from a `rows`-dimensional space to a
/// `cols`-dimensional space acting on row vectors: row `i` is the image of
/// the `i`-th source basis vector.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    /// The zero map.
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    /// The identity map on an `n`-dimensional space.
    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    /// Builds a matrix from rows, which must all share one length.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self, Gf2Error> {
        for r in &rows {
            if r.len() != cols {
                return Err(Gf2Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Source dimension (number of rows).
    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Target dimension (number of columns).
    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at `(row, col)`.
    #[must_use]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row].get(col)
    }

    /// Sets the entry at `(row, col)`.
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.data[row].set(col, value);
    }

    /// Row `i`, i.e. the image of the `i`-th basis vector.
    #[must_use]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    /// Applies the map to a row vector: XOR of the rows selected by `v`.
    pub fn apply(&self, v: &BitVec) -> Result<BitVec, Gf2Error> {
        if v.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows,
                got: v.len(),
            });
        }
        let mut out = BitVec::zeros(self.cols);
        for i in v.iter_ones() {
            out.xor_assign(&self.data[i]);
        }
        Ok(out)
    }

    /// Composes `self: A → B` with `then: B → C` into `A → C`.
    pub fn compose(&self, then: &Self) -> Result<Self, Gf2Error> {
        if self.cols != then.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: then.rows,
            });
        }
        let data = self
            .data
            .iter()
            .map(|r| then.apply(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            rows: self.rows,
            cols: then.cols,
            data,
        })
    }

    /// True when every entry is zero.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    /// The transposed matrix.
    #[must_use]
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for j in row.iter_ones() {
                t.data[j].set(i, true);
            }
        }
        t
    }

    /// Rank of the matrix.
    #[must_use]
    pub fn rank(&self) -> usize {
        Subspace::from_vectors(self.cols, self.data.iter().cloned()).dim()
    }

    /// A basis of the image (row space), in reduced row echelon form.
    #[must_use]
    pub fn image_basis(&self) -> Vec<BitVec> {
        Subspace::from_vectors(self.cols, self.data.iter().cloned())
            .basis()
            .to_vec()
    }

    /// A basis of the kernel: all `v` with `v · M = 0`.
    ///
    /// Computed by eliminating `[M | I]`; rows whose `M`-part vanishes have
    /// kernel coordinates in their `I`-part.
    #[must_use]
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let mut work: Vec<(BitVec, BitVec)> = (0..self.rows)
            .map(|i| {
                (
                    self.data[i].clone(),
                    BitVec::from_indices(self.rows, &[i]),
                )
            })
            .collect();
        let mut kernel = Vec::new();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (col, work index)
        for idx in 0..work.len() {
            // Reduce the current row by all previously found pivots.
            for &(col, pidx) in &pivots {
                if work[idx].0.get(col) {
                    let (pm, pt) = (work[pidx].0.clone(), work[pidx].1.clone());
                    work[idx].0.xor_assign(&pm);
                    work[idx].1.xor_assign(&pt);
                }
            }
            match work[idx].0.first_set() {
                Some(col) => pivots.push((col, idx)),
                None => kernel.push(work[idx].1.clone()),
            }
        }
        kernel
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

/// A subspace of GF(2)^n with its basis kept in reduced row echelon form.
///
/// The RREF basis makes every derived quantity canonical: membership,
/// coordinates, and the normal form of a coset representative.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<BitVec>,
}

impl Subspace {
    /// The zero subspace of GF(2)^`ambient`.
    #[must_use]
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    /// The full space GF(2)^`ambient`.
    #[must_use]
    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| BitVec::from_indices(ambient, &[i]))
            .collect();
        Self { ambient, basis }
    }

    /// The span of the given vectors.
    ///
    /// # Panics
    /// Panics if a vector's length differs from `ambient`.
    #[must_use]
    pub fn from_vectors(ambient: usize, vectors: impl IntoIterator<Item = BitVec>) -> Self {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(&v);
        }
        s
    }

    /// Ambient dimension.
    #[must_use]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the subspace.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The RREF basis rows, pivot columns strictly increasing.
    #[must_use]
    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    /// Pivot columns of the RREF basis, strictly increasing.
    #[must_use]
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|b| b.first_set().expect("basis rows are nonzero"))
            .collect()
    }

    /// Adds a vector to the span; returns true when the dimension grew.
    ///
    /// # Panics
    /// Panics if the vector's length differs from the ambient dimension.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let r = self.reduce(v);
        let Some(pivot) = r.first_set() else {
            return false;
        };
        // Keep RREF: clear the new pivot column from existing rows, then
        // insert the new row at its sorted position.
        for b in &mut self.basis {
            if b.get(pivot) {
                b.xor_assign(&r);
            }
        }
        let pos = self
            .basis
            .iter()
            .position(|b| b.first_set().expect("nonzero") > pivot)
            .unwrap_or(self.basis.len());
        self.basis.insert(pos, r);
        true
    }

    /// Normal form of `v` modulo the subspace (unique per coset).
    ///
    /// # Panics
    /// Panics if the vector's length differs from the ambient dimension.
    #[must_use]
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let mut r = v.clone();
        for b in &self.basis {
            let pivot = b.first_set().expect("basis rows are nonzero");
            if r.get(pivot) {
                r.xor_assign(b);
            }
        }
        r
    }

    /// True when `v` lies in the subspace.
    #[must_use]
    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of `v` in the RREF basis, or `None` when `v` is outside.
    ///
    /// Index `i` of the result refers to `basis()[i]`.
    #[must_use]
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let mut r = v.clone();
        let mut coords = BitVec::zeros(self.basis.len());
        for (i, b) in self.basis.iter().enumerate() {
            let pivot = b.first_set().expect("basis rows are nonzero");
            if r.get(pivot) {
                r.xor_assign(b);
                coords.set(i, true);
            }
        }
        r.is_zero().then_some(coords)
    }

    /// The sum of two subspaces.
    ///
    /// # Panics
    /// Panics on ambient dimension mismatch.
    #[must_use]
    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        let mut s = self.clone();
        for b in &other.basis {
            s.insert(b);
        }
        s
    }

    /// True when `self` is contained in `other`.
    #[must_use]
    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of {}; ", self.dim(), self.ambient)?;
        for b in &self.basis {
            write!(f, "{b} ")?;
        }
        write!(f, ")")
    }
}

/// A subquotient `cycles / boundaries` of GF(2)^n.
///
/// This is the shape of one bigraded spot of a spectral-sequence page: a
/// space of cycles inside a fixed ambient basis, modulo a space of
/// boundaries contained in it.
#[derive(Clone, PartialEq, Eq)]
pub struct SubQuotient {
    cycles: Subspace,
    boundaries: Subspace,
}

impl SubQuotient {
    /// Builds a subquotient, checking `boundaries ⊆ cycles`.
    pub fn new(cycles: Subspace, boundaries: Subspace) -> Result<Self, Gf2Error> {
        if cycles.ambient_dim() != boundaries.ambient_dim() {
            return Err(Gf2Error::DimensionMismatch {
                expected: cycles.ambient_dim(),
                got: boundaries.ambient_dim(),
            });
        }
        if !boundaries.is_subspace_of(&cycles) {
            return Err(Gf2Error::BoundariesNotInCycles);
        }
        Ok(Self { cycles, boundaries })
    }

    /// The zero subquotient of GF(2)^`ambient`.
    #[must_use]
    pub fn zero(ambient: usize) -> Self {
        Self {
            cycles: Subspace::zero(ambient),
            boundaries: Subspace::zero(ambient),
        }
    }

    /// Full ambient space modulo nothing.
    #[must_use]
    pub fn full(ambient: usize) -> Self {
        Self {
            cycles: Subspace::full(ambient),
            boundaries: Subspace::zero(ambient),
        }
    }

    /// Ambient dimension.
    #[must_use]
    pub fn ambient_dim(&self) -> usize {
        self.cycles.ambient_dim()
    }

    /// Dimension of the quotient.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.cycles.dim() - self.boundaries.dim()
    }

    /// The cycle subspace.
    #[must_use]
    pub fn cycles(&self) -> &Subspace {
        &self.cycles
    }

    /// The boundary subspace.
    #[must_use]
    pub fn boundaries(&self) -> &Subspace {
        &self.boundaries
    }

    /// Canonical representatives of a quotient basis.
    ///
    /// In RREF the pivot columns of the boundary basis are a subset of the
    /// pivot columns of the cycle basis; the cycle rows whose pivots are
    /// not boundary pivots, reduced modulo the boundaries, form a canonical
    /// transversal basis.
    #[must_use]
    pub fn transversal_reps(&self) -> Vec<BitVec> {
        let bp = self.boundaries.pivots();
        self.cycles
            .basis()
            .iter()
            .filter(|z| !bp.contains(&z.first_set().expect("nonzero")))
            .map(|z| self.boundaries.reduce(z))
            .collect()
    }

    /// Canonical representative of the class of `v`, or `None` when `v` is
    /// not a cycle. The zero vector is returned for classes that vanish.
    #[must_use]
    pub fn class_of(&self, v: &BitVec) -> Option<BitVec> {
        self.cycles
            .contains(v)
            .then(|| self.boundaries.reduce(v))
    }

    /// True when `v` is a cycle whose class vanishes.
    #[must_use]
    pub fn is_zero_class(&self, v: &BitVec) -> bool {
        self.class_of(v).is_some_and(|r| r.is_zero())
    }

    /// Coordinates of the class of `v` in the `transversal_reps` basis, or
    /// `None` when `v` is not a cycle.
    #[must_use]
    pub fn class_coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let coords = self.cycles.coordinates(v)?;
        let bp = self.boundaries.pivots();
        let free: Vec<usize> = self
            .cycles
            .basis()
            .iter()
            .enumerate()
            .filter(|(_, z)| !bp.contains(&z.first_set().expect("nonzero")))
            .map(|(i, _)| i)
            .collect();
        let mut out = BitVec::zeros(free.len());
        for (j, &i) in free.iter().enumerate() {
            out.set(j, coords.get(i));
        }
        Some(out)
    }
}

impl fmt::Debug for SubQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SubQuotient(dim {} = {}/{} in {})",
            self.dim(),
            self.cycles.dim(),
            self.boundaries.dim(),
            self.ambient_dim()
        )
    }
}
