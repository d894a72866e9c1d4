// SPDX-License-Identifier: Apache-2.0

//! Independent chain-level cross-check for orbit-space cohomology.
//!
//! A diagonal involution that is antipodal on exactly one sphere factor and
//! trivial on the other two is free, and its orbit space is a product of a
//! real projective space with the two untouched spheres. The mod-2 cohomology
//! of such a product is computable from small cellular chain complexes with
//! nothing but rank arithmetic — no spectral sequence involved — which makes
//! it ground truth the engine must reproduce: [`quotient_poincare`] builds the
//! product complex and reads off Betti numbers, while [`antipodal_pattern`]
//! names the differential pattern the engine runs for the same action.
//!
//! The minimal models used here have zero boundary maps, but [`ChainComplex`]
//! carries honest boundary matrices and [`ChainComplex::tensor`] implements
//! the full graded boundary formula, so randomized complexes with nonzero
//! boundaries exercise the same rank machinery (see the module tests).

use std::fmt;

use thiserror::Error;

use crate::fiber::{FiberElement, FiberMonomial, SphereTriple};
use crate::gf2::BitMatrix;
use crate::pages::GenFate;
use crate::patterns::{DifferentialPattern, PatternEntry};
use crate::results::PoincarePolynomial;

/// Errors from assembling cellular chain complexes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    /// A complex spanning `degrees` degrees needs one boundary map per
    /// consecutive pair of degrees.
    #[error("expected {expected} boundary maps for {degrees} degrees, got {got}")]
    BoundaryCount {
        /// Number of graded pieces, including degree zero.
        degrees: usize,
        /// Required number of boundary maps.
        expected: usize,
        /// Number actually supplied.
        got: usize,
    },
    /// A boundary map's shape disagrees with the neighboring cell counts.
    #[error(
        "boundary out of degree {degree} is {rows}x{cols}, expected {expected_rows}x{expected_cols}"
    )]
    BoundaryShape {
        /// Source degree of the offending map.
        degree: usize,
        /// Supplied row count.
        rows: usize,
        /// Supplied column count.
        cols: usize,
        /// Cell count in the source degree.
        expected_rows: usize,
        /// Cell count in the target degree.
        expected_cols: usize,
    },
    /// Two consecutive boundary maps fail to compose to zero.
    #[error("consecutive boundaries out of degree {degree} do not compose to zero")]
    DSquaredNotZero {
        /// Source degree of the first map applied.
        degree: usize,
    },
    /// An antipodal factor index outside `1..=3`.
    #[error("antipodal factor must be 1, 2, or 3, got {got}")]
    InvalidFactor {
        /// The rejected index.
        got: usize,
    },
}

/// A finite chain complex of GF(2) vector spaces given by cell counts and
/// boundary matrices.
///
/// `boundaries[k]` is the boundary map out of degree `k + 1` into degree `k`,
/// acting on row vectors: row `i` is the boundary of the `i`-th cell of degree
/// `k + 1` expressed in the cells of degree `k`. [`ChainComplex::new`]
/// validates shapes and the vanishing of all two-step composites, so every
/// held value satisfies `d ∘ d = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    cells: Vec<usize>,
    boundaries: Vec<BitMatrix>,
}

impl ChainComplex {
    /// Validates and assembles a complex from cell counts and boundary maps.
    ///
    /// # Errors
    ///
    /// [`OracleError::BoundaryCount`] or [`OracleError::BoundaryShape`] when
    /// the matrices do not line up with the cell counts, and
    /// [`OracleError::DSquaredNotZero`] when some two-step composite is a
    /// nonzero map.
    pub fn new(cells: Vec<usize>, boundaries: Vec<BitMatrix>) -> Result<Self, OracleError> {
        let expected = cells.len().saturating_sub(1);
        if boundaries.len() != expected {
            return Err(OracleError::BoundaryCount {
                degrees: cells.len(),
                expected,
                got: boundaries.len(),
            });
        }
        for (k, boundary) in boundaries.iter().enumerate() {
            if boundary.rows() != cells[k + 1] || boundary.cols() != cells[k] {
                return Err(OracleError::BoundaryShape {
                    degree: k + 1,
                    rows: boundary.rows(),
                    cols: boundary.cols(),
                    expected_rows: cells[k + 1],
                    expected_cols: cells[k],
                });
            }
        }
        for k in 1..boundaries.len() {
            let composite = boundaries[k]
                .compose(&boundaries[k - 1])
                .expect("boundary shapes were validated above");
            if !composite.is_zero() {
                return Err(OracleError::DSquaredNotZero { degree: k + 1 });
            }
        }
        Ok(Self { cells, boundaries })
    }

    /// A complex with the given cell counts and all-zero boundaries.
    fn with_zero_boundaries(cells: Vec<usize>) -> Self {
        let boundaries = cells
            .windows(2)
            .map(|pair| BitMatrix::zeros(pair[1], pair[0]))
            .collect();
        Self { cells, boundaries }
    }

    /// Number of cells in each degree, starting from degree zero.
    #[must_use]
    pub fn cells_per_degree(&self) -> &[usize] {
        &self.cells
    }

    /// The boundary maps; entry `k` sends degree `k + 1` to degree `k`.
    #[must_use]
    pub fn boundaries(&self) -> &[BitMatrix] {
        &self.boundaries
    }

    /// Homology dimension in each degree: cells minus the ranks of the
    /// boundary maps out of and into the degree.
    #[must_use]
    pub fn homology_dims(&self) -> Vec<usize> {
        (0..self.cells.len())
            .map(|k| {
                let rank_out = if k > 0 { self.boundaries[k - 1].rank() } else { 0 };
                let rank_in = self.boundaries.get(k).map_or(0, BitMatrix::rank);
                self.cells[k] - rank_out - rank_in
            })
            .collect()
    }

    /// The Poincaré polynomial of the homology.
    #[must_use]
    pub fn poincare(&self) -> PoincarePolynomial {
        PoincarePolynomial::new(self.homology_dims())
    }

    /// Alternating sum of cell counts; equals the alternating sum of homology
    /// dimensions, so it is preserved by taking homology.
    #[must_use]
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, &count)| {
                let signed = i64::try_from(count).expect("cell counts stay small");
                if k % 2 == 0 {
                    signed
                } else {
                    -signed
                }
            })
            .sum()
    }

    /// Tensor product of complexes: cell counts convolve, and the boundary of
    /// `x ⊗ y` is `dx ⊗ y + x ⊗ dy` (signs are trivial mod 2).
    ///
    /// Cells of total degree `d` are ordered by ascending left degree, then by
    /// left cell index, then by right cell index.
    #[must_use]
    pub fn tensor(&self, other: &Self) -> Self {
        if self.cells.is_empty() || other.cells.is_empty() {
            return Self {
                cells: Vec::new(),
                boundaries: Vec::new(),
            };
        }
        let len = self.cells.len() + other.cells.len() - 1;
        let cells: Vec<usize> = (0..len)
            .map(|d| {
                self.left_degrees(other, d)
                    .map(|da| self.cells[da] * other.cells[d - da])
                    .sum()
            })
            .collect();
        let boundaries = (1..len)
            .map(|d| {
                let mut matrix = BitMatrix::zeros(cells[d], cells[d - 1]);
                for da in self.left_degrees(other, d) {
                    let db = d - da;
                    for i in 0..self.cells[da] {
                        for j in 0..other.cells[db] {
                            let row = self.block_offset(other, d, da) + i * other.cells[db] + j;
                            if da > 0 {
                                let base = self.block_offset(other, d - 1, da - 1);
                                for i2 in self.boundaries[da - 1].row(i).iter_ones() {
                                    matrix.set(row, base + i2 * other.cells[db] + j, true);
                                }
                            }
                            if db > 0 {
                                let base = self.block_offset(other, d - 1, da);
                                for j2 in other.boundaries[db - 1].row(j).iter_ones() {
                                    matrix.set(row, base + i * other.cells[db - 1] + j2, true);
                                }
                            }
                        }
                    }
                }
                matrix
            })
            .collect();
        Self { cells, boundaries }
    }

    /// Left-factor degrees that contribute a block to total degree `d`.
    fn left_degrees(&self, other: &Self, d: usize) -> std::ops::RangeInclusive<usize> {
        d.saturating_sub(other.cells.len() - 1)..=d.min(self.cells.len() - 1)
    }

    /// Starting index of the `(da, d - da)` block among the cells of total
    /// degree `d` in a tensor product.
    fn block_offset(&self, other: &Self, d: usize, da: usize) -> usize {
        self.left_degrees(other, d)
            .take_while(|&left| left < da)
            .map(|left| self.cells[left] * other.cells[d - left])
            .sum()
    }
}

/// The one-point complex: a single cell in degree zero, the unit for
/// [`ChainComplex::tensor`].
#[must_use]
pub fn point_complex() -> ChainComplex {
    ChainComplex::with_zero_boundaries(vec![1])
}

/// Minimal model of the `k`-sphere: one cell each in degrees `0` and `k`,
/// zero boundaries.
///
/// # Panics
///
/// For `k = 0`; sphere factors here always have positive dimension.
#[must_use]
pub fn sphere_complex(k: usize) -> ChainComplex {
    assert!(k >= 1, "sphere dimension must be positive");
    let mut cells = vec![0; k + 1];
    cells[0] = 1;
    cells[k] = 1;
    ChainComplex::with_zero_boundaries(cells)
}

/// Minimal model of real projective `k`-space over GF(2): one cell in every
/// degree `0..=k`. The integral boundaries alternate between zero and
/// multiplication by two, so all of them vanish mod 2.
///
/// # Panics
///
/// For `k = 0`.
#[must_use]
pub fn projective_complex(k: usize) -> ChainComplex {
    assert!(k >= 1, "projective dimension must be positive");
    ChainComplex::with_zero_boundaries(vec![1; k + 1])
}

/// Selects the sphere factor on which a diagonal involution acts antipodally
/// while fixing the other two factors pointwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AntipodalFactor {
    /// Antipodal on the sphere of dimension `n`.
    First,
    /// Antipodal on the sphere of dimension `m`.
    Second,
    /// Antipodal on the sphere of dimension `l`.
    Third,
}

impl AntipodalFactor {
    /// All three factors, in command-line index order.
    pub const ALL: [Self; 3] = [Self::First, Self::Second, Self::Third];

    /// The 1-based index used on the command line.
    #[must_use]
    pub fn index(self) -> usize {
        match self {
            Self::First => 1,
            Self::Second => 2,
            Self::Third => 3,
        }
    }

    /// Dimension of the sphere the involution negates.
    #[must_use]
    pub fn sphere_degree(self, triple: &SphereTriple) -> usize {
        match self {
            Self::First => triple.n(),
            Self::Second => triple.m(),
            Self::Third => triple.l(),
        }
    }

    /// Dimensions of the two spheres the involution fixes.
    #[must_use]
    pub fn untouched_degrees(self, triple: &SphereTriple) -> [usize; 2] {
        match self {
            Self::First => [triple.m(), triple.l()],
            Self::Second => [triple.n(), triple.l()],
            Self::Third => [triple.n(), triple.m()],
        }
    }

    /// The fiber generator carried by the negated sphere.
    fn generator(self) -> FiberElement {
        let mask = match self {
            Self::First => 1,
            Self::Second => 2,
            Self::Third => 4,
        };
        FiberElement::from(FiberMonomial::from_mask(mask))
    }
}

impl TryFrom<usize> for AntipodalFactor {
    type Error = OracleError;

    fn try_from(value: usize) -> Result<Self, Self::Error> {
        match value {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            3 => Ok(Self::Third),
            got => Err(OracleError::InvalidFactor { got }),
        }
    }
}

impl fmt::Display for AntipodalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Poincaré polynomial of the orbit space of the involution that is antipodal
/// on the chosen factor.
///
/// The quotient is a product of a real projective space with the two fixed
/// spheres, so its cohomology is the convolution of the factors' cohomologies.
#[must_use]
pub fn quotient_poincare(triple: &SphereTriple, factor: AntipodalFactor) -> PoincarePolynomial {
    let [first, second] = factor.untouched_degrees(triple);
    projective_complex(factor.sphere_degree(triple))
        .tensor(&sphere_complex(first))
        .tensor(&sphere_complex(second))
        .poincare()
}

/// The differential pattern the engine must follow for the same action: the
/// negated factor's generator transgresses to the base on the first possible
/// page, and the fixed factors' generators survive.
#[must_use]
pub fn antipodal_pattern(triple: &SphereTriple, factor: AntipodalFactor) -> DifferentialPattern {
    let entries = AntipodalFactor::ALL
        .map(|candidate| PatternEntry {
            element: candidate.generator(),
            fate: if candidate == factor {
                GenFate::Fires {
                    page: candidate.sphere_degree(triple) + 1,
                    target: FiberElement::one(),
                }
            } else {
                GenFate::Survives
            },
        })
        .to_vec();
    DifferentialPattern::new(entries).expect("three distinct definite entries form a pattern")
}
