// SPDX-License-Identifier: Apache-2.0

//! Read-outs of a stabilized limit term.
//!
//! Once a run ends with an [`EInfinity`] table, this module turns the table
//! into the deliverables of the computation: the Poincaré polynomial of the
//! orbit-space cohomology, a ring presentation whose undetermined extension
//! constants appear as named parameters, a classification of the completed
//! run against the catalog of known outcome families, and the two
//! nonexistence indexes read off the base row and the first differential
//! into it.
//!
//! The presentation is generated by the degree-one base class `x` together
//! with one representative per surviving column-0 class. Within a row the
//! representatives form a flag-adapted basis: vectors are admitted in order
//! of increasing tower length, so that the chosen towers add up exactly to
//! the cell counts of the table. Relations are hedged: every product of two
//! fiber generators, and every tower truncation, is equated to a sum of the
//! canonical monomials of the same degree that are still alive, each scaled
//! by a fresh parameter `a0, a1, …` whose value the sequence alone cannot
//! determine.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fiber::{FiberElement, FiberInvolution, FiberMonomial, SphereTriple};
use crate::gf2::{BitVec, Subspace};
use crate::pages::{CompletedFate, EInfinity, FateResolution, RunReport};

/// Errors produced while interpreting result tokens.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResultsError {
    /// The token does not name a catalog entry.
    #[error("unknown case id `{input}`; expected a token such as `thm3.2` or `thm3.7-1`")]
    UnknownCaseId {
        /// The rejected input.
        input: String,
    },
}

/// Coefficients of the mod-2 Poincaré polynomial, lowest degree first.
///
/// Trailing zero coefficients are trimmed on construction, so equal
/// polynomials compare equal regardless of how they were padded.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PoincarePolynomial {
    coefficients: Vec<usize>,
}

impl PoincarePolynomial {
    /// Builds a polynomial from raw coefficients, trimming trailing zeros.
    #[must_use]
    pub fn new(mut coefficients: Vec<usize>) -> Self {
        while coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    /// The trimmed coefficient slice.
    #[must_use]
    pub fn coefficients(&self) -> &[usize] {
        &self.coefficients
    }

    /// The coefficient in the given degree (zero beyond the trimmed range).
    #[must_use]
    pub fn coefficient(&self, degree: usize) -> usize {
        self.coefficients.get(degree).copied().unwrap_or(0)
    }

    /// Degree of the highest nonzero coefficient, `None` for zero.
    #[must_use]
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// Sum of all coefficients: the total dimension of the graded space.
    #[must_use]
    pub fn total_dimension(&self) -> usize {
        self.coefficients.iter().sum()
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (degree, &coefficient) in self.coefficients.iter().enumerate() {
            if coefficient == 0 {
                continue;
            }
            let power = match degree {
                0 => String::new(),
                1 => "t".to_owned(),
                d => format!("t^{d}"),
            };
            terms.push(match (degree, coefficient) {
                (0, c) => c.to_string(),
                (_, 1) => power,
                (_, c) => format!("{c}{power}"),
            });
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// Poincaré polynomial of the limit term: the coefficient in degree `k` is
/// the number of surviving cells on the diagonal `p + q = k`.
#[must_use]
pub fn poincare(einfinity: &EInfinity) -> PoincarePolynomial {
    let top = einfinity.top();
    let coefficients = (0..=top)
        .map(|total| (0..=total).map(|row| einfinity.dim(total - row, row)).sum())
        .collect();
    PoincarePolynomial::new(coefficients)
}

/// One multiplicative generator of the presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingGenerator {
    /// Printable name; the base class is always `x`, fiber classes get
    /// `y, w, z, u, v, …` in order.
    pub name: String,
    /// Total degree of the class.
    pub degree: usize,
    /// Column-0 representative (`1` for the base class, whose powers run
    /// along the base row instead).
    pub value: FiberElement,
    /// Largest `j` with `x^j`·(this class) still alive in the limit term.
    pub tower: usize,
}

/// A canonical monomial `x^xpow · g`, where `g` is one fiber generator of
/// the presentation or `1` when `generator` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monomial {
    /// Power of the base class.
    pub xpow: usize,
    /// Index of the fiber generator into the generator list, if any.
    pub generator: Option<usize>,
}

/// Left-hand side of a relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationLead {
    /// Product of the fiber generators with the given indices (`i <= j`;
    /// equal indices form a square).
    Product(usize, usize),
    /// First vanishing power `x^xpow · g` of a fiber generator's tower.
    Truncation {
        /// Power of the base class, always `tower + 1`.
        xpow: usize,
        /// Index of the truncated fiber generator.
        gen: usize,
    },
}

/// One relation of the presentation: the lead equals the sum of its
/// corrections, each weighted by a parameter the table cannot pin down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    /// The product or truncation being rewritten.
    pub lead: RelationLead,
    /// `(parameter name, monomial)` pairs of the same total degree.
    pub corrections: Vec<(String, Monomial)>,
    /// Total degree of the relation.
    pub degree: usize,
}

/// Presentation of the orbit-space cohomology as a quotient of a polynomial
/// algebra over the field with two elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    /// `x` first, then the fiber generators in (degree, descending tower,
    /// representative) order.
    pub generators: Vec<RingGenerator>,
    /// Pairwise products of fiber generators, then tower truncations.
    pub relations: Vec<Relation>,
    /// Nilpotence bound of the base class: `x^q = 0`, `x^{q-1} != 0`.
    pub q: usize,
}

impl RingPresentation {
    /// Sorted degrees of the fiber generators (the base class excluded).
    #[must_use]
    pub fn fiber_generator_degrees(&self) -> Vec<usize> {
        let mut degrees: Vec<usize> = self.generators[1..].iter().map(|g| g.degree).collect();
        degrees.sort_unstable();
        degrees
    }

    /// Sorted degrees of the relations (`x^q` excluded, carried by [`Self::q`]).
    #[must_use]
    pub fn relation_degrees(&self) -> Vec<usize> {
        let mut degrees: Vec<usize> = self.relations.iter().map(|r| r.degree).collect();
        degrees.sort_unstable();
        degrees
    }

    /// Renders a canonical monomial with the presentation's names.
    #[must_use]
    pub fn monomial_string(&self, monomial: &Monomial) -> String {
        let power = match monomial.xpow {
            0 => None,
            1 => Some("x".to_owned()),
            j => Some(format!("x^{j}")),
        };
        let name = monomial
            .generator
            .map(|index| self.generators[index].name.clone());
        match (power, name) {
            (None, None) => "1".to_owned(),
            (Some(p), None) => p,
            (None, Some(g)) => g,
            (Some(p), Some(g)) => format!("{p}*{g}"),
        }
    }

    /// Renders a relation lead.
    #[must_use]
    pub fn lead_string(&self, lead: &RelationLead) -> String {
        match *lead {
            RelationLead::Product(i, j) if i == j => format!("{}^2", self.generators[i].name),
            RelationLead::Product(i, j) => {
                format!("{}*{}", self.generators[i].name, self.generators[j].name)
            }
            RelationLead::Truncation { xpow, gen } => self.monomial_string(&Monomial {
                xpow,
                generator: Some(gen),
            }),
        }
    }

    /// Renders a full relation, e.g. `y^2 + a0*w + a1*x^2`.
    #[must_use]
    pub fn relation_string(&self, relation: &Relation) -> String {
        let mut out = self.lead_string(&relation.lead);
        for (parameter, monomial) in &relation.corrections {
            out.push_str(" + ");
            out.push_str(parameter);
            out.push('*');
            out.push_str(&self.monomial_string(monomial));
        }
        out
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        write!(f, "Z2[{}]/(x^{}", names.join(", "), self.q)?;
        for relation in &self.relations {
            write!(f, ", {}", self.relation_string(relation))?;
        }
        write!(f, ")")
    }
}

/// Extracts the ring presentation of the limit term.
///
/// Fiber generators are read row by row: within each row the column-0
/// classes are swept in order of increasing tower length and a vector is
/// admitted whenever it is independent of those already chosen. The sweep
/// makes every prefix span the classes of bounded tower, so the generator
/// towers reproduce the cell counts of the table — a descending greedy
/// choice would overcount rows that mix long and short towers.
#[must_use]
pub fn extract_presentation(einfinity: &EInfinity) -> RingPresentation {
    let top = einfinity.top();
    let q = einfinity
        .last_alive_base_column()
        .expect("the base class survives at the origin")
        + 1;

    let mut generators = vec![RingGenerator {
        name: "x".to_owned(),
        degree: 1,
        value: FiberElement::one(),
        tower: q - 1,
    }];

    let mut adapted: Vec<(usize, usize, FiberElement)> = Vec::new();
    for row in 1..=top {
        let basis = einfinity.column_zero_basis(row);
        if basis.is_empty() {
            continue;
        }
        let mut candidates: Vec<(usize, FiberElement)> = nonzero_combinations(&basis)
            .into_iter()
            .map(|value| {
                let tower = einfinity
                    .tower_length(value, row)
                    .expect("column-0 classes are alive at column 0");
                (tower, value)
            })
            .collect();
        candidates.sort_by_key(|(tower, value)| (*tower, value.bits()));
        let mut span = Subspace::zero(8);
        for (tower, value) in candidates {
            if span.insert(&monomial_vector(value)) {
                adapted.push((row, tower, value));
            }
        }
    }
    adapted.sort_by_key(|(row, tower, value)| (*row, Reverse(*tower), value.bits()));
    for (index, (row, tower, value)) in adapted.into_iter().enumerate() {
        generators.push(RingGenerator {
            name: generator_name(index),
            degree: row,
            value,
            tower,
        });
    }

    let mut relations = Vec::new();
    let mut parameters = 0usize;
    for i in 1..generators.len() {
        for j in i..generators.len() {
            let degree = generators[i].degree + generators[j].degree;
            relations.push(relation(
                &generators,
                q,
                RelationLead::Product(i, j),
                degree,
                &mut parameters,
            ));
        }
    }
    for gen in 1..generators.len() {
        let xpow = generators[gen].tower + 1;
        if xpow < q {
            let degree = generators[gen].degree + xpow;
            relations.push(relation(
                &generators,
                q,
                RelationLead::Truncation { xpow, gen },
                degree,
                &mut parameters,
            ));
        }
    }

    RingPresentation {
        generators,
        relations,
        q,
    }
}

/// Names for fiber generators in discovery order.
fn generator_name(index: usize) -> String {
    const NAMES: [&str; 7] = ["y", "w", "z", "u", "v", "s", "r"];
    NAMES
        .get(index)
        .map_or_else(|| format!("g{index}"), |name| (*name).to_owned())
}

/// All nonzero sums of the given basis vectors, in construction order.
fn nonzero_combinations(basis: &[FiberElement]) -> Vec<FiberElement> {
    (1u32..1 << basis.len())
        .map(|mask| {
            basis
                .iter()
                .enumerate()
                .fold(FiberElement::zero(), |acc, (i, v)| {
                    if mask >> i & 1 == 1 {
                        acc.add(*v)
                    } else {
                        acc
                    }
                })
        })
        .collect()
}

/// Coordinates of an element in the eight-dimensional monomial space.
fn monomial_vector(element: FiberElement) -> BitVec {
    let mut v = BitVec::zeros(8);
    for monomial in element.monomials() {
        v.set(monomial.mask() as usize, true);
    }
    v
}

/// Builds one hedged relation: the candidate corrections are the canonical
/// monomials `x^j` (with `j < q`) and `x^j·g` (with `j` at most the tower of
/// `g`) of the lead's degree, ordered by ascending power of `x`. A
/// truncation lead never reappears among its own corrections because its
/// power exceeds the tower bound by construction.
fn relation(
    generators: &[RingGenerator],
    q: usize,
    lead: RelationLead,
    degree: usize,
    parameters: &mut usize,
) -> Relation {
    let mut monomials = Vec::new();
    for (index, generator) in generators.iter().enumerate().skip(1) {
        let Some(xpow) = degree.checked_sub(generator.degree) else {
            continue;
        };
        if xpow <= generator.tower {
            monomials.push(Monomial {
                xpow,
                generator: Some(index),
            });
        }
    }
    if degree < q {
        monomials.push(Monomial {
            xpow: degree,
            generator: None,
        });
    }
    monomials.sort_by_key(|monomial| (monomial.xpow, monomial.generator.unwrap_or(usize::MAX)));
    let corrections = monomials
        .into_iter()
        .map(|monomial| {
            let name = format!("a{parameters}");
            *parameters += 1;
            (name, monomial)
        })
        .collect();
    Relation {
        lead,
        corrections,
        degree,
    }
}

/// Token naming one family of the verified outcome catalog.
///
/// The token grammar (`thm3.2`, `thm3.4-1`, …, `thm3.8-4`) is part of the
/// verification interface: the first number selects a family, the optional
/// suffix one of its possibilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CaseId {
    family: u8,
    possibility: u8,
}

impl CaseId {
    /// Every catalog token, in verification order.
    pub const ALL: [Self; 14] = [
        Self {
            family: 2,
            possibility: 0,
        },
        Self {
            family: 4,
            possibility: 1,
        },
        Self {
            family: 4,
            possibility: 2,
        },
        Self {
            family: 4,
            possibility: 3,
        },
        Self {
            family: 6,
            possibility: 1,
        },
        Self {
            family: 6,
            possibility: 2,
        },
        Self {
            family: 7,
            possibility: 1,
        },
        Self {
            family: 7,
            possibility: 2,
        },
        Self {
            family: 7,
            possibility: 3,
        },
        Self {
            family: 7,
            possibility: 4,
        },
        Self {
            family: 8,
            possibility: 1,
        },
        Self {
            family: 8,
            possibility: 2,
        },
        Self {
            family: 8,
            possibility: 3,
        },
        Self {
            family: 8,
            possibility: 4,
        },
    ];

    /// The family number of the token.
    #[must_use]
    pub fn family(self) -> u8 {
        self.family
    }

    /// The possibility within the family, `None` for the undivided `thm3.2`.
    #[must_use]
    pub fn possibility(self) -> Option<u8> {
        (self.possibility != 0).then_some(self.possibility)
    }

    fn lookup(family: u8, possibility: u8) -> Option<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.family == family && id.possibility == possibility)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.possibility == 0 {
            write!(f, "thm3.{}", self.family)
        } else {
            write!(f, "thm3.{}-{}", self.family, self.possibility)
        }
    }
}

impl FromStr for CaseId {
    type Err = ResultsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| ResultsError::UnknownCaseId {
                input: s.to_owned(),
            })
    }
}

/// Classifies a completed admissible run against the outcome catalog.
///
/// For the trivial involution the decision reads which of the three
/// spherical classes fired, on which pages, and into which rows; for a
/// twisted involution it reads the shape of the triple and the fire page of
/// the degree-`l` generator. Runs fitting no family return `None`.
#[must_use]
pub fn match_theorem(
    triple: &SphereTriple,
    action: &FiberInvolution,
    completion: &[CompletedFate],
) -> Option<CaseId> {
    let (n, m, l) = (triple.n(), triple.m(), triple.l());
    if action.is_identity() {
        let fired = |mask: u8| {
            let element = FiberElement::from(FiberMonomial::from_mask(mask));
            completion.iter().find_map(|fate| match fate.resolution {
                FateResolution::Fired { page, target } if fate.element == element => {
                    Some((page, target))
                }
                _ => None,
            })
        };
        let a_fire = fired(1);
        let b_fire = fired(2);
        let c_fire = fired(4);
        if a_fire.is_some() {
            // The lowest sphere transgresses; the family splits on whether
            // the top sphere dies even earlier while the middle one holds.
            let early_top =
                b_fire.is_none() && matches!(c_fire, Some((page, _)) if page < n + 1);
            return CaseId::lookup(6, if early_top { 2 } else { 1 });
        }
        if let Some((page, _)) = b_fire {
            if n < m && page == m - n + 1 {
                return CaseId::lookup(7, if c_fire.is_some() { 3 } else { 1 });
            }
            if page == m + 1 {
                let folded =
                    matches!(c_fire, Some((cpage, _)) if l < m + n && cpage == l - n + 1);
                return CaseId::lookup(7, if folded { 4 } else { 2 });
            }
            return None;
        }
        if let Some((page, target)) = c_fire {
            let row = (l + 1).checked_sub(page)?;
            let b_element = FiberElement::from(FiberMonomial::from_mask(2));
            return if row == n + m {
                CaseId::lookup(8, 1)
            } else if row == 0 {
                CaseId::lookup(8, 4)
            } else if row == n && row == m {
                // Equal lower degrees: the target value separates the
                // possibilities.
                CaseId::lookup(8, if target == b_element { 2 } else { 3 })
            } else if row == m {
                CaseId::lookup(8, 2)
            } else if row == n {
                CaseId::lookup(8, 3)
            } else {
                None
            };
        }
        None
    } else if n < m && m == l {
        CaseId::lookup(2, 0)
    } else if n == m && m == l {
        CaseId::lookup(4, 3)
    } else if n == m && m < l {
        // The degree-`l` generator of the fixed subalgebra decides the
        // possibility by the page on which it fires.
        let top_fire_pages: Vec<usize> = completion
            .iter()
            .filter_map(|fate| match fate.resolution {
                FateResolution::Fired { page, .. } if fate.degree == l => Some(page),
                _ => None,
            })
            .collect();
        if l > 2 * n && top_fire_pages.contains(&(l - 2 * n + 1)) {
            CaseId::lookup(4, 1)
        } else if top_fire_pages.contains(&(l + 1)) {
            CaseId::lookup(4, 2)
        } else {
            None
        }
    } else {
        None
    }
}

/// Largest base column alive in the limit term: the index `s` with `t^s`
/// surviving and `t^{s+1} = 0`.
#[must_use]
pub fn cohomology_index(einfinity: &EInfinity) -> usize {
    einfinity.last_alive_base_column().unwrap_or(0)
}

/// Page of the first differential with nonzero rank into the base row, if
/// the run recorded one.
#[must_use]
pub fn volovikov_index(report: &RunReport) -> Option<usize> {
    report.volovikov
}

/// The two nonexistence indexes of an admissible run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexReport {
    /// Largest `p` with a surviving base-row class `t^p`.
    pub cohomology_index: usize,
    /// Page of the first differential hitting the base row.
    pub volovikov_page: usize,
}

impl IndexReport {
    /// The nonexistence statements carried by the indexes, plus a note on
    /// the page-versus-index convention.
    #[must_use]
    pub fn notes(&self) -> [String; 3] {
        [
            format!(
                "no equivariant map S^d -> X for d > {}",
                self.cohomology_index
            ),
            format!(
                "no equivariant map X -> S^k for 1 <= k < {}",
                self.volovikov_page.saturating_sub(1)
            ),
            format!(
                "an alternative convention reports this invariant as the page minus one, i.e. {}",
                self.volovikov_page.saturating_sub(1)
            ),
        ]
    }
}

impl fmt::Display for IndexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cohomology index {}, first base-row differential on page {}",
            self.cohomology_index, self.volovikov_page
        )
    }
}

/// Both indexes of a completed run, or `None` when the run produced no
/// limit term (a rejected pattern) or never hit the base row.
#[must_use]
pub fn index_report(report: &RunReport) -> Option<IndexReport> {
    let einfinity = report.einfinity.as_ref()?;
    Some(IndexReport {
        cohomology_index: cohomology_index(einfinity),
        volovikov_page: report.volovikov?,
    })
}

/// Comparison footprint of one admissible outcome: enough to decide whether
/// two runs produce the same cohomology table and presentation shape.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CaseSummary {
    /// Poincaré coefficients, degree 0 upward.
    pub poincare: Vec<usize>,
    /// Nilpotence bound of the base class.
    pub q: usize,
    /// Sorted degrees of the fiber generators.
    pub gens: Vec<usize>,
    /// Sorted degrees of the relations (`x^q` carried by `q`, not repeated).
    pub relations: Vec<usize>,
}

/// Summarizes a limit term for setwise comparison of outcomes.
#[must_use]
pub fn summarize(einfinity: &EInfinity) -> CaseSummary {
    let presentation = extract_presentation(einfinity);
    CaseSummary {
        poincare: poincare(einfinity).coefficients().to_vec(),
        q: presentation.q,
        gens: presentation.fiber_generator_degrees(),
        relations: presentation.relation_degrees(),
    }
}
