// SPDX-License-Identifier: Apache-2.0

//! Page-by-page reduction of the mod-2 Borel spectral sequence of a free
//! involution on a space with the cohomology of a product of three spheres.
//!
//! The sequence lives on a half-plane grid: column `p` counts powers of the
//! degree-one polynomial generator `t` of the base, row `q` carries the fiber
//! cohomology in degree `q`.  The second page is determined by the action:
//! cycles in row `q` are the kernel of the difference map `1 + φ`, boundaries
//! are zero in column 0 and the image of `1 + φ` elsewhere.  From there the
//! engine repeatedly builds the page-`r` differential as a derivation from the
//! assigned generator fates, checks it for internal consistency, and takes
//! homology to produce the next page.
//!
//! Two structural facts keep the representation small:
//!
//! * cycles on any page are independent of the column, because every
//!   differential lands in columns at or beyond the boundary saturation
//!   threshold of its page;
//! * boundaries in a row form a filtration that is nondecreasing in the
//!   column and constant from column `r - 1` on page `r`.
//!
//! So a page stores one cycle subspace per row plus a per-column boundary
//! filtration, and every class-level question (aliveness, death column,
//! feasible targets) reduces to membership tests against those subspaces.
//!
//! A run either survives to the stable page and reports the limit term, or
//! stops at the first rule violated by the assigned differentials.  The
//! violation verdicts carry an explicit witness class so callers can report
//! exactly which class breaks which rule.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::fiber::{FiberElement, FiberError, FiberInvolution, FiberMonomial, SphereTriple};
use crate::gf2::{BitMatrix, BitVec, Gf2Error, SubQuotient, Subspace};

/// Errors from driving the engine with ill-formed input, plus internal
/// invariant failures that indicate a bug rather than a rejected pattern.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    /// A fiber-level error (parsing, validation) surfaced by the engine.
    #[error(transparent)]
    Fiber(#[from] FiberError),
    /// A linear-algebra error surfaced by the engine.
    #[error(transparent)]
    Linear(#[from] Gf2Error),
    /// An engine method was called in the wrong phase of the page loop.
    #[error("engine phase misuse: {0}")]
    Phase(&'static str),
    /// The number of initial fates does not match the initial generators.
    #[error("got {got} initial fates for {expected} initial generators")]
    FateCount { expected: usize, got: usize },
    /// A fate fires on a page the generator cannot reach.
    #[error("fate for {element} fires on page {page}, which it cannot reach")]
    InvalidFatePage { element: FiberElement, page: usize },
    /// A fate's target has the wrong degree for its page, or is zero.
    #[error("fate for {element} has invalid target {target}")]
    InvalidFateTarget {
        element: FiberElement,
        target: FiberElement,
    },
    /// A fire was assigned to a class that is not alive at the target cell.
    #[error("assigned target {target} for {element} is not an alive class")]
    InvalidTarget {
        element: FiberElement,
        target: FiberElement,
    },
    /// A preset fate element is not homogeneous.
    #[error("pattern element {element} is not homogeneous")]
    InhomogeneousPatternElement { element: FiberElement },
    /// A preset fate refers to an element that never appears as a generator.
    #[error("pattern entry for {element} matches no tracked generator")]
    UnusedPatternEntry { element: FiberElement },
    /// A bookkeeping invariant failed; this is an engine bug, not a verdict.
    #[error("internal invariant broken on page {page}: {what}")]
    InvariantBroken { what: &'static str, page: usize },
    /// An internal assumption failed; this is an engine bug, not a verdict.
    #[error("internal error: {0}")]
    Internal(&'static str),
}

/// Column extent of the computed grid.
///
/// `reported` columns are what results are read from; `internal` columns add
/// enough margin that every reported cell is exact despite differentials
/// leaving the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    /// Largest column whose cells are reported to callers.
    pub reported: usize,
    /// Largest column actually stored; strictly larger than `reported`.
    pub internal: usize,
}

impl Window {
    /// The default window for a triple: `2·top + 4` reported columns, with
    /// `top + 2` further internal columns so that a differential chain of
    /// length up to `top` starting inside the reported window stays exact.
    #[must_use]
    pub fn for_triple(triple: &SphereTriple) -> Self {
        let top = triple.top();
        let reported = 2 * top + 4;
        Self {
            reported,
            internal: reported + top + 2,
        }
    }
}

/// A class witness `t^p ⊗ value` at cell `(p, q)`, used in verdicts and the
/// event trail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassWitness {
    /// Column (power of `t`).
    pub p: usize,
    /// Row (fiber degree).
    pub q: usize,
    /// Fiber component of the class.
    pub value: FiberElement,
}

impl fmt::Display for ClassWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 0 {
            write!(f, "{}", self.value)
        } else if self.value == FiberElement::one() {
            write!(f, "t^{}", self.p)
        } else if self.value.monomials().count() > 1 {
            write!(f, "t^{}*({})", self.p, self.value)
        } else {
            write!(f, "t^{}*{}", self.p, self.value)
        }
    }
}

/// Outcome of a complete run, or the first rule violated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every page was consistent and the limit term vanishes above the total
    /// degree of the fiber: the assigned pattern describes a plausible free
    /// involution.
    Admissible,
    /// A differential composite failed to vanish, or a differential image
    /// escaped the cycles of its target cell.
    ViolatesDSquared { page: usize, witness: ClassWitness },
    /// The derivation rule failed: either dependent products demand
    /// conflicting values, or a class maps onto one that outlives it.
    ViolatesLeibniz {
        page: usize,
        witness: ClassWitness,
        detail: &'static str,
    },
    /// The limit term has a class strictly above the fiber's total degree,
    /// so the orbit-space cohomology would be infinite-dimensional.
    ViolatesFreeness { witness: ClassWitness },
    /// A class of the form `α·φ(α)` died even though it must survive to the
    /// limit term for a free involution.
    ViolatesPermanentCocycle { page: usize, witness: ClassWitness },
    /// The run ended without certifying that all later differentials vanish.
    NotStabilized { page: usize },
}

impl Verdict {
    /// True for [`Verdict::Admissible`].
    #[must_use]
    pub fn is_admissible(&self) -> bool {
        matches!(self, Verdict::Admissible)
    }

    /// Stable snake_case code naming the verdict.
    #[must_use]
    pub fn code(&self) -> &'static str {
        match self {
            Verdict::Admissible => "admissible",
            Verdict::ViolatesDSquared { .. } => "violates_d_squared",
            Verdict::ViolatesLeibniz { .. } => "violates_leibniz",
            Verdict::ViolatesFreeness { .. } => "violates_freeness",
            Verdict::ViolatesPermanentCocycle { .. } => "violates_permanent_cocycle",
            Verdict::NotStabilized { .. } => "not_stabilized",
        }
    }

    /// The witness class, when the verdict carries one.
    #[must_use]
    pub fn witness(&self) -> Option<&ClassWitness> {
        match self {
            Verdict::Admissible | Verdict::NotStabilized { .. } => None,
            Verdict::ViolatesDSquared { witness, .. }
            | Verdict::ViolatesLeibniz { witness, .. }
            | Verdict::ViolatesFreeness { witness }
            | Verdict::ViolatesPermanentCocycle { witness, .. } => Some(witness),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Admissible => write!(f, "admissible"),
            Verdict::ViolatesDSquared { page, witness } => {
                write!(f, "violates_d_squared (page {page}, witness {witness})")
            }
            Verdict::ViolatesLeibniz {
                page,
                witness,
                detail,
            } => write!(
                f,
                "violates_leibniz (page {page}, witness {witness}: {detail})"
            ),
            Verdict::ViolatesFreeness { witness } => {
                write!(f, "violates_freeness (witness {witness})")
            }
            Verdict::ViolatesPermanentCocycle { page, witness } => write!(
                f,
                "violates_permanent_cocycle (page {page}, witness {witness})"
            ),
            Verdict::NotStabilized { page } => write!(f, "not_stabilized (page {page})"),
        }
    }
}

/// The assigned fate of a tracked generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenFate {
    /// No decision yet; resolves to [`GenFate::Survives`] at stabilization.
    Undecided,
    /// The generator supports no differential and survives to the limit.
    Survives,
    /// The generator's differential on page `page` is `t^page ⊗ target`.
    Fires { page: usize, target: FiberElement },
}

/// A multiplicative generator the engine tracks through the pages: the three
/// initial fiber generators (or the generators of the fixed subalgebra for a
/// twisted action) plus every class discovered outside the product span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackedGen {
    /// Canonical column-0 representative.
    pub element: FiberElement,
    /// Fiber degree (row).
    pub degree: usize,
    /// Page on which the generator entered the run.
    pub birth_page: usize,
    /// Assigned fate.
    pub fate: GenFate,
    /// Page on which the fate was consumed by a nonzero differential.
    pub fired_at: Option<usize>,
    /// Page on which the fate was consumed by a dead target (zero
    /// differential).
    pub vacuous_at: Option<usize>,
}

impl TrackedGen {
    /// Whether the generator still participates in products: true until its
    /// nonzero differential is consumed.
    #[must_use]
    pub fn in_closure(&self) -> bool {
        self.fired_at.is_none()
    }
}

/// How a generator's fate resolved over the whole run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FateResolution {
    /// Survived to the limit term.
    Survived,
    /// Fired a nonzero differential on `page`.
    Fired { page: usize, target: FiberElement },
    /// Was assigned a fire whose target was already dead; the differential
    /// acted as zero on `page`.
    VacuousFired { page: usize, target: FiberElement },
}

/// A tracked generator together with its resolved fate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletedFate {
    /// Canonical column-0 representative.
    pub element: FiberElement,
    /// Fiber degree (row).
    pub degree: usize,
    /// Page on which the generator entered the run.
    pub birth_page: usize,
    /// Resolution of the assigned fate.
    pub resolution: FateResolution,
}

/// One event in the deterministic run trail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrailEvent {
    /// A column-0 class outside the product span became a new generator.
    Discovered {
        page: usize,
        element: FiberElement,
        degree: usize,
    },
    /// A generator fired a nonzero differential.
    Fired {
        page: usize,
        source: FiberElement,
        target: ClassWitness,
    },
    /// An assigned fire found its target already dead and acted as zero.
    VacuousFire {
        page: usize,
        source: FiberElement,
        target: ClassWitness,
    },
    /// The run certified that no later differential can be nonzero.
    Stabilized { page: usize },
}

impl fmt::Display for TrailEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrailEvent::Discovered {
                page,
                element,
                degree,
            } => write!(f, "page {page}: discovered generator {element} in degree {degree}"),
            TrailEvent::Fired {
                page,
                source,
                target,
            } => write!(f, "page {page}: d_{page}({source}) = {target}"),
            TrailEvent::VacuousFire {
                page,
                source,
                target,
            } => write!(
                f,
                "page {page}: assigned target {target} for {source} is already zero; differential acts as zero"
            ),
            TrailEvent::Stabilized { page } => write!(f, "page {page}: stabilized"),
        }
    }
}

/// Counts of the structural checks the engine performed during a run.
///
/// Failures of these checks are engine bugs and surface as
/// [`EngineError::InvariantBroken`], never as a verdict; the counts let
/// callers confirm the checks actually ran.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InvariantStats {
    /// Per-cell checks that the new dimension equals the old one minus the
    /// incoming and outgoing differential ranks.
    pub rank_checks: usize,
    /// Per-cell checks that multiplication by `t` is an isomorphism from
    /// column `p` to `p + 1` for `p ≥ r` on page `r`.
    pub t_periodicity_checks: usize,
    /// Per-page checks that the alternating sum over the window is conserved
    /// up to the classes whose targets fall outside the window.
    pub alternating_checks: usize,
    /// Per-page checks that each class of the form `α·φ(α)` is still alive.
    pub permanent_checks: usize,
}

impl InvariantStats {
    /// Total number of checks performed.
    #[must_use]
    pub fn total(&self) -> usize {
        self.rank_checks + self.t_periodicity_checks + self.alternating_checks
            + self.permanent_checks
    }

    /// Adds another run's counts into this one.
    pub fn absorb(&mut self, other: &Self) {
        self.rank_checks += other.rank_checks;
        self.t_periodicity_checks += other.t_periodicity_checks;
        self.alternating_checks += other.alternating_checks;
        self.permanent_checks += other.permanent_checks;
    }
}

/// The full grid of one page: per-row cycles plus the per-column boundary
/// filtration, in the monomial coordinates fixed by the triple.
#[derive(Debug, Clone)]
pub struct PageData {
    r: usize,
    top: usize,
    internal: usize,
    bases: Vec<Vec<FiberMonomial>>,
    cycles: Vec<Subspace>,
    boundaries: Vec<Vec<Subspace>>,
}

impl PageData {
    /// Builds the second page from the action: cycles are the kernel of
    /// `1 + φ` per row, boundaries are zero in column 0 and its image in
    /// every later column.
    fn e2(
        triple: &SphereTriple,
        action: &FiberInvolution,
        window: Window,
    ) -> Result<Self, EngineError> {
        let top = triple.top();
        let internal = window.internal;
        let mut bases = Vec::with_capacity(top + 1);
        let mut cycles = Vec::with_capacity(top + 1);
        let mut boundaries = Vec::with_capacity(top + 1);
        for q in 0..=top {
            let basis = triple.degree_basis(q);
            let ker = action.tau_kernel(triple, q);
            let im = action.tau_image(triple, q);
            if !im.is_subspace_of(&ker) {
                return Err(EngineError::Internal(
                    "difference map of an involution must square to zero",
                ));
            }
            let mut cols = Vec::with_capacity(internal + 1);
            cols.push(Subspace::zero(basis.len()));
            for _ in 1..=internal {
                cols.push(im.clone());
            }
            bases.push(basis);
            cycles.push(ker);
            boundaries.push(cols);
        }
        Ok(Self {
            r: 2,
            top,
            internal,
            bases,
            cycles,
            boundaries,
        })
    }

    /// The page index `r`.
    #[must_use]
    pub fn page_index(&self) -> usize {
        self.r
    }

    /// Top fiber degree (largest row).
    #[must_use]
    pub fn top(&self) -> usize {
        self.top
    }

    /// Largest stored column.
    #[must_use]
    pub fn internal_columns(&self) -> usize {
        self.internal
    }

    /// Monomial basis of row `q`.
    #[must_use]
    pub fn row_basis(&self, q: usize) -> &[FiberMonomial] {
        &self.bases[q]
    }

    fn boundary(&self, p: usize, q: usize) -> &Subspace {
        &self.boundaries[q][p.min(self.internal)]
    }

    /// Dimension of the cell `(p, q)`; columns beyond the stored window use
    /// the saturated boundaries, which is exact by t-periodicity.
    #[must_use]
    pub fn dim(&self, p: usize, q: usize) -> usize {
        if q > self.top {
            return 0;
        }
        self.cycles[q].dim() - self.boundary(p, q).dim()
    }

    /// Whether `t^p ⊗ value` is a nonzero class at `(p, q)`.
    #[must_use]
    pub fn is_alive(&self, value: FiberElement, p: usize, q: usize) -> bool {
        if q > self.top || value.is_zero() {
            return false;
        }
        let Some(coords) = value.coordinates(&self.bases[q]) else {
            return false;
        };
        self.cycles[q].contains(&coords) && !self.boundary(p, q).contains(&coords)
    }

    /// First column where `value` stops being an alive class in row `q`, or
    /// `None` if it is alive through the saturated columns (hence forever).
    ///
    /// A value that is not a cycle at all dies at column 0.
    #[must_use]
    pub fn first_dead_column(&self, value: FiberElement, q: usize) -> Option<usize> {
        if q > self.top {
            return Some(0);
        }
        let Some(coords) = value.coordinates(&self.bases[q]) else {
            return Some(0);
        };
        if !self.cycles[q].contains(&coords) {
            return Some(0);
        }
        let sat = self.r.saturating_sub(1).min(self.internal);
        (0..=sat).find(|&p| self.boundaries[q][p].contains(&coords))
    }

    /// Coset normal form of `value` at `(p, q)`, or `None` if it is not a
    /// cycle there.
    #[must_use]
    pub fn class_reduce(&self, value: FiberElement, p: usize, q: usize) -> Option<FiberElement> {
        if q > self.top {
            return None;
        }
        let coords = value.coordinates(&self.bases[q])?;
        if !self.cycles[q].contains(&coords) {
            return None;
        }
        let reduced = self.boundary(p, q).reduce(&coords);
        Some(FiberElement::from_coordinates(&reduced, &self.bases[q]))
    }

    /// Canonical representatives of the nonzero classes' basis at `(p, q)`.
    #[must_use]
    pub fn class_basis(&self, p: usize, q: usize) -> Vec<FiberElement> {
        if q > self.top {
            return Vec::new();
        }
        let Ok(sq) = SubQuotient::new(self.cycles[q].clone(), self.boundary(p, q).clone()) else {
            return Vec::new();
        };
        sq.transversal_reps()
            .iter()
            .map(|v| FiberElement::from_coordinates(v, &self.bases[q]))
            .collect()
    }
}

/// The immutable data shared by every run on one `(triple, action)` pair.
#[derive(Debug, Clone)]
pub struct SpectralSystem {
    triple: SphereTriple,
    action: FiberInvolution,
    window: Window,
    permanent: Vec<(usize, FiberElement)>,
    initial: Vec<FiberElement>,
}

impl SpectralSystem {
    /// Prepares a system for the given triple and action with the default
    /// window.
    #[must_use]
    pub fn new(triple: SphereTriple, action: FiberInvolution) -> Self {
        let window = Window::for_triple(&triple);
        let permanent = action.permanent_classes(&triple);
        let initial = action.fixed_subalgebra_generators(&triple);
        Self {
            triple,
            action,
            window,
            permanent,
            initial,
        }
    }

    /// The sphere triple.
    #[must_use]
    pub fn triple(&self) -> &SphereTriple {
        &self.triple
    }

    /// The involution on the fiber.
    #[must_use]
    pub fn action(&self) -> &FiberInvolution {
        &self.action
    }

    /// The column window.
    #[must_use]
    pub fn window(&self) -> Window {
        self.window
    }

    /// Top fiber degree.
    #[must_use]
    pub fn top(&self) -> usize {
        self.triple.top()
    }

    /// The initial tracked generators (fixed-subalgebra generators; `a`, `b`,
    /// `c` for the trivial action), in degree-ascending order.
    #[must_use]
    pub fn initial_generators(&self) -> &[FiberElement] {
        &self.initial
    }

    /// The classes `α·φ(α)` that must survive to the limit term, as
    /// `(degree, value)` pairs.
    #[must_use]
    pub fn permanent_classes(&self) -> &[(usize, FiberElement)] {
        &self.permanent
    }

    /// Starts a run with one fate per initial generator.
    pub fn start(&self, fates: Vec<GenFate>) -> Result<RunState<'_>, EngineError> {
        self.start_with_preset(fates, BTreeMap::new())
    }

    /// Starts a run with one fate per initial generator plus preset fates for
    /// generators expected to be discovered later, keyed by their canonical
    /// element.  Presets that never match a discovery fail the run at
    /// finalization.
    pub fn start_with_preset(
        &self,
        fates: Vec<GenFate>,
        preset: BTreeMap<FiberElement, GenFate>,
    ) -> Result<RunState<'_>, EngineError> {
        if fates.len() != self.initial.len() {
            return Err(EngineError::FateCount {
                expected: self.initial.len(),
                got: fates.len(),
            });
        }
        let mut gens = Vec::with_capacity(fates.len());
        for (element, fate) in self.initial.iter().zip(fates) {
            let degree = element
                .homogeneous_degree(&self.triple)
                .ok_or(EngineError::Internal("initial generators are homogeneous"))?;
            validate_fate(&self.triple, *element, degree, &fate)?;
            gens.push(TrackedGen {
                element: *element,
                degree,
                birth_page: 2,
                fate,
                fired_at: None,
                vacuous_at: None,
            });
        }
        for (element, fate) in &preset {
            let degree = element.homogeneous_degree(&self.triple).ok_or(
                EngineError::InhomogeneousPatternElement { element: *element },
            )?;
            validate_fate(&self.triple, *element, degree, fate)?;
        }
        let page = PageData::e2(&self.triple, &self.action, self.window)?;
        Ok(RunState {
            sys: self,
            page,
            gens,
            preset,
            preset_used: BTreeSet::new(),
            products: Vec::new(),
            phase: Phase::BeforeDiscovery,
            trail: Vec::new(),
            stats: InvariantStats::default(),
            volovikov: None,
        })
    }
}

/// Checks that a fate's page and target are arithmetically possible for a
/// generator of the given degree.
fn validate_fate(
    triple: &SphereTriple,
    element: FiberElement,
    degree: usize,
    fate: &GenFate,
) -> Result<(), EngineError> {
    if let GenFate::Fires { page, target } = fate {
        if *page < 2 {
            return Err(EngineError::InvalidFatePage {
                element,
                page: *page,
            });
        }
        let Some(target_row) = (degree + 1).checked_sub(*page) else {
            return Err(EngineError::InvalidFatePage {
                element,
                page: *page,
            });
        };
        if target.is_zero() || target.homogeneous_degree(triple) != Some(target_row) {
            return Err(EngineError::InvalidFateTarget {
                element,
                target: *target,
            });
        }
    }
    Ok(())
}

/// Outcome of finishing one page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PageStep {
    /// The page was consistent; the state now holds the next page.
    Advanced,
    /// A rule was violated; the run is over.
    Violated(Verdict),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    BeforeDiscovery,
    AwaitingFinish,
}

/// A product of distinct tracked generators, with the member indices in
/// tracked order.
#[derive(Debug, Clone)]
struct ProductEntry {
    members: Vec<usize>,
    element: FiberElement,
    degree: usize,
}

/// A derivation under construction on one row: a linear map from the row's
/// coordinates to fiber elements, kept in reduced row echelon form so that
/// dependent insertions are detected and checked for consistency.
#[derive(Debug, Clone, Default)]
struct RowDerivation {
    rows: Vec<(BitVec, FiberElement)>,
}

enum InsertOutcome {
    Added,
    Consistent,
    Conflict { residual: FiberElement },
}

impl RowDerivation {
    fn reduce(&self, v: &BitVec) -> (BitVec, FiberElement) {
        let mut coords = v.clone();
        let mut acc = FiberElement::zero();
        for (rc, rv) in &self.rows {
            let lead = rc.first_set().expect("derivation rows are nonzero");
            if coords.get(lead) {
                coords.xor_assign(rc);
                acc = acc.add(*rv);
            }
        }
        (coords, acc)
    }

    fn insert(&mut self, coords: BitVec, value: FiberElement) -> InsertOutcome {
        let (red, acc) = self.reduce(&coords);
        let rest = value.add(acc);
        if red.is_zero() {
            return if rest.is_zero() {
                InsertOutcome::Consistent
            } else {
                InsertOutcome::Conflict { residual: rest }
            };
        }
        let lead = red.first_set().expect("reduced vector is nonzero");
        for (rc, rv) in &mut self.rows {
            if rc.get(lead) {
                rc.xor_assign(&red);
                *rv = rv.add(rest);
            }
        }
        let pos = self
            .rows
            .partition_point(|(rc, _)| rc.first_set().expect("rows nonzero") < lead);
        self.rows.insert(pos, (red, rest));
        InsertOutcome::Added
    }

    fn apply(&self, v: &BitVec) -> Option<FiberElement> {
        let (red, acc) = self.reduce(v);
        red.is_zero().then_some(acc)
    }

    fn is_zero_map(&self) -> bool {
        self.rows.iter().all(|(_, v)| v.is_zero())
    }
}

/// One in-progress run of the engine.
///
/// The page loop alternates [`RunState::begin_page`] (generator discovery)
/// with [`RunState::finish_page`] (differential construction, consistency
/// checks and the page turn).  Between the two, callers may decide fates for
/// undecided generators via [`RunState::assign_fire`]; anything left
/// undecided defers, and defers resolve to survival at stabilization.
#[derive(Debug, Clone)]
pub struct RunState<'a> {
    sys: &'a SpectralSystem,
    page: PageData,
    gens: Vec<TrackedGen>,
    preset: BTreeMap<FiberElement, GenFate>,
    preset_used: BTreeSet<FiberElement>,
    products: Vec<ProductEntry>,
    phase: Phase,
    trail: Vec<TrailEvent>,
    stats: InvariantStats,
    volovikov: Option<usize>,
}

impl<'a> RunState<'a> {
    /// The current page index.
    #[must_use]
    pub fn page(&self) -> usize {
        self.page.r
    }

    /// The current page grid.
    #[must_use]
    pub fn data(&self) -> &PageData {
        &self.page
    }

    /// The tracked generators, initial first, then in discovery order.
    #[must_use]
    pub fn gens(&self) -> &[TrackedGen] {
        &self.gens
    }

    /// The event trail so far.
    #[must_use]
    pub fn trail(&self) -> &[TrailEvent] {
        &self.trail
    }

    /// Structural check counts so far.
    #[must_use]
    pub fn stats(&self) -> InvariantStats {
        self.stats
    }

    /// Whether every page with a possibly-nonzero differential has been
    /// processed.
    #[must_use]
    pub fn is_complete(&self) -> bool {
        self.page.r > self.sys.top() + 1
    }

    /// Runs generator discovery for the current page: walks the rows in
    /// ascending degree and promotes every column-0 class outside the span
    /// of products of in-closure generators to a new tracked generator.
    ///
    /// Returns the indices of the generators discovered.
    pub fn begin_page(&mut self) -> Result<Vec<usize>, EngineError> {
        if self.phase != Phase::BeforeDiscovery {
            return Err(EngineError::Phase("begin_page called twice"));
        }
        if self.is_complete() {
            return Err(EngineError::Phase("begin_page after completion"));
        }
        let r = self.page.r;
        self.rebuild_products()?;
        let mut discovered = Vec::new();
        for q in 1..=self.sys.top() {
            if self.page.cycles[q].dim() == 0 {
                continue;
            }
            loop {
                let candidate = {
                    let span = self.closure_span(q);
                    self.page.cycles[q]
                        .basis()
                        .iter()
                        .find(|row| !span.contains(row))
                        .map(|row| FiberElement::from_coordinates(row, &self.page.bases[q]))
                };
                let Some(element) = candidate else { break };
                let fate = match self.preset.get(&element) {
                    Some(f) => {
                        if let GenFate::Fires { page, .. } = f {
                            if *page < r {
                                return Err(EngineError::InvalidFatePage {
                                    element,
                                    page: *page,
                                });
                            }
                        }
                        self.preset_used.insert(element);
                        *f
                    }
                    None => GenFate::Undecided,
                };
                self.gens.push(TrackedGen {
                    element,
                    degree: q,
                    birth_page: r,
                    fate,
                    fired_at: None,
                    vacuous_at: None,
                });
                self.trail.push(TrailEvent::Discovered {
                    page: r,
                    element,
                    degree: q,
                });
                discovered.push(self.gens.len() - 1);
                self.rebuild_products()?;
            }
        }
        self.phase = Phase::AwaitingFinish;
        Ok(discovered)
    }

    /// Indices of generators with no fate yet.
    #[must_use]
    pub fn undecided_indices(&self) -> Vec<usize> {
        (0..self.gens.len())
            .filter(|&i| matches!(self.gens[i].fate, GenFate::Undecided))
            .collect()
    }

    /// The alive classes the generator could fire onto on the current page,
    /// in ascending element order.  Empty when the target row is out of
    /// range or every class there is dead.
    #[must_use]
    pub fn feasible_targets(&self, idx: usize) -> Vec<FiberElement> {
        let r = self.page.r;
        let g = &self.gens[idx];
        let Some(target_row) = (g.degree + 1).checked_sub(r) else {
            return Vec::new();
        };
        if target_row > self.sys.top() {
            return Vec::new();
        }
        let reps = self.page.class_basis(r, target_row);
        let mut out = BTreeSet::new();
        for mask in 1usize..(1 << reps.len()) {
            let mut sum = FiberElement::zero();
            for (i, rep) in reps.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    sum = sum.add(*rep);
                }
            }
            out.insert(sum);
        }
        out.into_iter().collect()
    }

    /// Assigns an undecided generator a fire on the current page.
    pub fn assign_fire(&mut self, idx: usize, target: FiberElement) -> Result<(), EngineError> {
        if self.phase != Phase::AwaitingFinish {
            return Err(EngineError::Phase("assign_fire outside a page"));
        }
        if !matches!(self.gens[idx].fate, GenFate::Undecided) {
            return Err(EngineError::Phase("generator already has a fate"));
        }
        let r = self.page.r;
        let element = self.gens[idx].element;
        let Some(target_row) = (self.gens[idx].degree + 1).checked_sub(r) else {
            return Err(EngineError::InvalidFatePage { element, page: r });
        };
        if !self.page.is_alive(target, r, target_row) {
            return Err(EngineError::InvalidTarget { element, target });
        }
        self.gens[idx].fate = GenFate::Fires { page: r, target };
        Ok(())
    }

    /// Builds the page differential from the consumed fates, checks the
    /// derivation, torsion-order and composite rules, and turns the page.
    pub fn finish_page(&mut self) -> Result<PageStep, EngineError> {
        if self.phase != Phase::AwaitingFinish {
            return Err(EngineError::Phase("finish_page before begin_page"));
        }
        let r = self.page.r;
        let top = self.sys.top();

        // Resolve the fates due this page: a fire whose target is already
        // dead acts as the zero differential (and is recorded as such).
        for i in 0..self.gens.len() {
            let GenFate::Fires { page, target } = self.gens[i].fate else {
                continue;
            };
            if self.gens[i].fired_at.is_some() || self.gens[i].vacuous_at.is_some() {
                continue;
            }
            let element = self.gens[i].element;
            if page < r {
                return Err(EngineError::InvalidFatePage { element, page });
            }
            if page > r {
                continue;
            }
            let target_row = (self.gens[i].degree + 1)
                .checked_sub(r)
                .ok_or(EngineError::InvalidFatePage { element, page })?;
            let witness = ClassWitness {
                p: r,
                q: target_row,
                value: target,
            };
            if self.page.is_alive(target, r, target_row) {
                self.gens[i].fired_at = Some(r);
                self.trail.push(TrailEvent::Fired {
                    page: r,
                    source: element,
                    target: witness,
                });
            } else {
                self.gens[i].vacuous_at = Some(r);
                self.trail.push(TrailEvent::VacuousFire {
                    page: r,
                    source: element,
                    target: witness,
                });
            }
        }

        // Leibniz value of the differential on every product of distinct
        // in-closure generators, in subset order.
        let mut entry_values: Vec<FiberElement> = Vec::with_capacity(self.products.len());
        for entry in &self.products {
            let mut value = FiberElement::zero();
            for (pos, &i) in entry.members.iter().enumerate() {
                if self.gens[i].fired_at != Some(r) {
                    continue;
                }
                let GenFate::Fires { target, .. } = self.gens[i].fate else {
                    continue;
                };
                let mut partial = FiberElement::one();
                for (pos2, &j) in entry.members.iter().enumerate() {
                    if pos2 != pos {
                        partial = partial.mul(self.gens[j].element);
                    }
                }
                value = value.add(partial.mul(target));
            }
            entry_values.push(value);
        }

        // Torsion-order rule: a class may only map onto one that dies no
        // later than itself.  The witness is the first surviving multiple of
        // the image.  This runs on the raw product values, before dependent
        // products are reconciled, so its witnesses take precedence.
        for (entry, value) in self.products.iter().zip(&entry_values) {
            if value.is_zero() {
                continue;
            }
            let Some(j_s) = self.page.first_dead_column(entry.element, entry.degree) else {
                continue;
            };
            let Some(target_row) = (entry.degree + 1).checked_sub(r) else {
                continue;
            };
            let j_w = self.page.first_dead_column(*value, target_row);
            let violated = match j_w {
                None => true,
                Some(j_w) => j_s < j_w,
            };
            if violated {
                return Ok(PageStep::Violated(Verdict::ViolatesLeibniz {
                    page: r,
                    witness: ClassWitness {
                        p: j_s + r - 1,
                        q: target_row,
                        value: *value,
                    },
                    detail: "source class dies before its image",
                }));
            }
        }

        // Extend the fates to a derivation row by row.  A dependent
        // insertion must agree with the value forced by the existing rows
        // wherever the product is an alive class.
        let mut derivs: Vec<RowDerivation> = (0..=top).map(|_| RowDerivation::default()).collect();
        for (entry, value) in self.products.iter().zip(&entry_values) {
            let q = entry.degree;
            let coords = entry
                .element
                .coordinates(&self.page.bases[q])
                .ok_or(EngineError::Internal("product has coordinates in its row"))?;
            if let InsertOutcome::Conflict { residual } = derivs[q].insert(coords, *value) {
                let target_row = (q + 1)
                    .checked_sub(r)
                    .ok_or(EngineError::Internal("conflict value in a negative row"))?;
                if let Some(p_bad) = self.conflict_column(entry.element, q, residual, target_row) {
                    return Ok(PageStep::Violated(Verdict::ViolatesLeibniz {
                        page: r,
                        witness: ClassWitness {
                            p: p_bad + r,
                            q: target_row,
                            value: residual,
                        },
                        detail: "dependent products force conflicting differential values",
                    }));
                }
            }
        }

        // Composite rule: the differential must map cycles to cycles and its
        // square must vanish as classes.
        for q in 0..=top {
            let Some(target_row) = (q + 1).checked_sub(r) else {
                continue;
            };
            if derivs[q].is_zero_map() {
                continue;
            }
            for v in self.page.cycles[q].basis() {
                let w = derivs[q]
                    .apply(v)
                    .ok_or(EngineError::Internal("cycles lie in the derivation span"))?;
                if w.is_zero() {
                    continue;
                }
                let source = FiberElement::from_coordinates(v, &self.page.bases[q]);
                let witness = ClassWitness {
                    p: 0,
                    q,
                    value: source,
                };
                let w_coords = w
                    .coordinates(&self.page.bases[target_row])
                    .ok_or(EngineError::Internal("derivation value has target degree"))?;
                if !self.page.cycles[target_row].contains(&w_coords) {
                    return Ok(PageStep::Violated(Verdict::ViolatesDSquared {
                        page: r,
                        witness,
                    }));
                }
                if let Some(second_row) = (target_row + 1).checked_sub(r) {
                    let u = derivs[target_row]
                        .apply(&w_coords)
                        .ok_or(EngineError::Internal("cycles lie in the derivation span"))?;
                    if !u.is_zero() {
                        let u_coords = u.coordinates(&self.page.bases[second_row]).ok_or(
                            EngineError::Internal("derivation value has target degree"),
                        )?;
                        if !self.page.boundaries[second_row][self.page.internal]
                            .contains(&u_coords)
                        {
                            return Ok(PageStep::Violated(Verdict::ViolatesDSquared {
                                page: r,
                                witness,
                            }));
                        }
                    }
                }
            }
        }

        // Turn the page: new cycles are the kernel of the class-level
        // differential, new boundaries add its image from column r on.
        let alt_old = alternating_total(&self.page.cycles, &self.page.boundaries, self.page.internal);
        let mut rho = vec![0usize; top + 1];
        let mut new_cycles: Vec<Subspace> = Vec::with_capacity(top + 1);
        let mut images: Vec<Option<Subspace>> = vec![None; top + 1];
        for q in 0..=top {
            let Some(target_row) = (q + 1).checked_sub(r) else {
                new_cycles.push(self.page.cycles[q].clone());
                continue;
            };
            if derivs[q].is_zero_map() || self.page.cycles[q].dim() == 0 {
                new_cycles.push(self.page.cycles[q].clone());
                continue;
            }
            let sat_boundary = &self.page.boundaries[target_row][self.page.internal];
            let cycle_basis = self.page.cycles[q].basis().to_vec();
            let target_dim = self.page.bases[target_row].len();
            let mut reduced_rows = Vec::with_capacity(cycle_basis.len());
            let mut image = Subspace::zero(target_dim);
            for v in &cycle_basis {
                let w = derivs[q]
                    .apply(v)
                    .ok_or(EngineError::Internal("cycles lie in the derivation span"))?;
                let w_coords = w
                    .coordinates(&self.page.bases[target_row])
                    .ok_or(EngineError::Internal("derivation value has target degree"))?;
                image.insert(&w_coords);
                reduced_rows.push(sat_boundary.reduce(&w_coords));
            }
            let matrix = BitMatrix::from_rows(target_dim, reduced_rows)?;
            rho[q] = matrix.rank();
            let mut kernel = Subspace::zero(self.page.bases[q].len());
            for combo in matrix.kernel_basis() {
                let mut vector = BitVec::zeros(self.page.bases[q].len());
                for i in combo.iter_ones() {
                    vector.xor_assign(&cycle_basis[i]);
                }
                kernel.insert(&vector);
            }
            new_cycles.push(kernel);
            images[q] = Some(image);
        }

        let mut new_boundaries = self.page.boundaries.clone();
        for q in 0..=top {
            let Some(image) = &images[q] else { continue };
            let target_row = q + 1 - r;
            let mut saturated = self.page.boundaries[target_row][self.page.internal].clone();
            for v in image.basis() {
                saturated.insert(v);
            }
            for p in r..=self.page.internal {
                new_boundaries[target_row][p] = saturated.clone();
            }
        }

        // Containment: every boundary must be a cycle of the new page.  A
        // failure means a differential image escaped the target's cycles.
        for q in 0..=top {
            for beta in new_boundaries[q][self.page.internal].basis() {
                if !new_cycles[q].contains(beta) {
                    let value = FiberElement::from_coordinates(beta, &self.page.bases[q]);
                    let p_first = (0..=self.page.internal)
                        .find(|&p| new_boundaries[q][p].contains(beta))
                        .unwrap_or(self.page.internal);
                    return Ok(PageStep::Violated(Verdict::ViolatesDSquared {
                        page: r,
                        witness: ClassWitness {
                            p: p_first,
                            q,
                            value,
                        },
                    }));
                }
            }
        }

        // Rank bookkeeping: dim E_{r+1} = dim E_r − rank(out) − rank(in),
        // cell by cell.
        for q in 0..=top {
            let rho_out = rho[q] as i64;
            let rho_in = if q + r - 1 <= top {
                rho[q + r - 1] as i64
            } else {
                0
            };
            for p in 0..=self.page.internal {
                let old_dim = self.page.dim(p, q) as i64;
                let new_dim = new_cycles[q].dim() as i64 - new_boundaries[q][p].dim() as i64;
                let expected = old_dim - rho_out - if p >= r { rho_in } else { 0 };
                if new_dim != expected {
                    return Err(EngineError::InvariantBroken {
                        what: "rank bookkeeping",
                        page: r,
                    });
                }
                self.stats.rank_checks += 1;
            }
        }

        // t-periodicity: on page r+1 the boundary filtration is constant from
        // column r+1 on, so multiplication by t is an isomorphism there.
        for q in 0..=top {
            for p in (r + 1)..self.page.internal {
                if new_boundaries[q][p] != new_boundaries[q][p + 1] {
                    return Err(EngineError::InvariantBroken {
                        what: "t-periodicity",
                        page: r,
                    });
                }
                self.stats.t_periodicity_checks += 1;
            }
        }

        // Alternating-sum conservation over the stored window, corrected for
        // classes whose targets fall outside it.
        let alt_new = alternating_total(&new_cycles, &new_boundaries, self.page.internal);
        let mut crossing = 0i64;
        for q in 0..=top {
            if rho[q] == 0 {
                continue;
            }
            for p in (self.page.internal + 1 - r)..=self.page.internal {
                let sign = if (p + q) % 2 == 0 { 1 } else { -1 };
                crossing += rho[q] as i64 * sign;
            }
        }
        if alt_new != alt_old - crossing {
            return Err(EngineError::InvariantBroken {
                what: "alternating-sum conservation",
                page: r,
            });
        }
        self.stats.alternating_checks += 1;

        // Permanent classes must still be alive at column 0 of their row.
        for (degree, value) in self.sys.permanent_classes() {
            self.stats.permanent_checks += 1;
            let coords = value
                .coordinates(&self.page.bases[*degree])
                .ok_or(EngineError::Internal("permanent classes are homogeneous"))?;
            if !new_cycles[*degree].contains(&coords) {
                return Ok(PageStep::Violated(Verdict::ViolatesPermanentCocycle {
                    page: r,
                    witness: ClassWitness {
                        p: 0,
                        q: *degree,
                        value: *value,
                    },
                }));
            }
        }

        // A nonzero class-level differential into the base row fixes the
        // first page with one.
        if r >= 1 && r - 1 <= top && rho[r - 1] > 0 && self.volovikov.is_none() {
            self.volovikov = Some(r);
        }

        self.page.cycles = new_cycles;
        self.page.boundaries = new_boundaries;
        self.page.r = r + 1;
        self.phase = Phase::BeforeDiscovery;
        Ok(PageStep::Advanced)
    }

    /// Certifies stabilization, checks the limit term vanishes above the
    /// fiber's total degree, and produces the report.
    pub fn finalize(mut self) -> Result<RunReport, EngineError> {
        if self.phase != Phase::BeforeDiscovery {
            return Err(EngineError::Phase("finalize during a page"));
        }
        if !self.is_complete() {
            return Err(EngineError::Phase("finalize before completion"));
        }
        for element in self.preset.keys() {
            if !self.preset_used.contains(element) {
                return Err(EngineError::UnusedPatternEntry { element: *element });
            }
        }
        for g in &mut self.gens {
            if matches!(g.fate, GenFate::Undecided) {
                g.fate = GenFate::Survives;
            }
        }
        let final_page = self.page.r;
        let top = self.sys.top();

        // No later differential can be nonzero: for every candidate page the
        // target row of every populated source row is negative.
        let mut stable = true;
        'certify: for rr in final_page..=(final_page + top + 1) {
            for q in 0..=top {
                if self.page.cycles[q].dim() == 0 {
                    continue;
                }
                let Some(target_row) = (q + 1).checked_sub(rr) else {
                    continue;
                };
                if target_row <= top && self.page.cycles[target_row].dim() > 0 {
                    stable = false;
                    break 'certify;
                }
            }
        }
        if !stable {
            let verdict = Verdict::NotStabilized { page: final_page };
            return Ok(self.into_report(verdict, None));
        }
        self.trail.push(TrailEvent::Stabilized { page: final_page });

        let reported = self.sys.window().reported;
        for p in 0..=reported {
            for q in 0..=top {
                if p + q > top && self.page.dim(p, q) > 0 {
                    let value = self
                        .page
                        .class_basis(p, q)
                        .first()
                        .copied()
                        .unwrap_or_else(FiberElement::zero);
                    let verdict = Verdict::ViolatesFreeness {
                        witness: ClassWitness { p, q, value },
                    };
                    return Ok(self.into_report(verdict, None));
                }
            }
        }

        let einfinity = EInfinity {
            data: self.page.clone(),
            stabilized_at: final_page,
            reported,
        };
        Ok(self.into_report(Verdict::Admissible, Some(einfinity)))
    }

    /// Wraps a violation into a report, preserving the trail and fates.
    #[must_use]
    pub fn into_failure(self, verdict: Verdict) -> RunReport {
        self.into_report(verdict, None)
    }

    /// Drives the run to completion using only preassigned fates: undecided
    /// generators defer on every page and survive.
    pub fn run_to_completion(mut self) -> Result<RunReport, EngineError> {
        loop {
            if self.is_complete() {
                return self.finalize();
            }
            self.begin_page()?;
            match self.finish_page()? {
                PageStep::Advanced => {}
                PageStep::Violated(verdict) => return Ok(self.into_failure(verdict)),
            }
        }
    }

    fn into_report(self, verdict: Verdict, einfinity: Option<EInfinity>) -> RunReport {
        let completion = self
            .gens
            .iter()
            .map(|g| {
                let resolution = match (g.fired_at, g.vacuous_at, &g.fate) {
                    (Some(page), _, GenFate::Fires { target, .. }) => FateResolution::Fired {
                        page,
                        target: *target,
                    },
                    (_, Some(page), GenFate::Fires { target, .. }) => {
                        FateResolution::VacuousFired {
                            page,
                            target: *target,
                        }
                    }
                    _ => FateResolution::Survived,
                };
                CompletedFate {
                    element: g.element,
                    degree: g.degree,
                    birth_page: g.birth_page,
                    resolution,
                }
            })
            .collect();
        RunReport {
            verdict,
            einfinity,
            completion,
            trail: self.trail,
            stats: self.stats,
            volovikov: self.volovikov,
        }
    }

    fn rebuild_products(&mut self) -> Result<(), EngineError> {
        let alive: Vec<usize> = (0..self.gens.len())
            .filter(|&i| self.gens[i].in_closure())
            .collect();
        if alive.len() > 16 {
            return Err(EngineError::Internal(
                "more in-closure generators than the fiber can support",
            ));
        }
        let mut products = Vec::new();
        for mask in 1u32..(1u32 << alive.len()) {
            let mut element = FiberElement::one();
            let mut members = Vec::new();
            for (bit, &idx) in alive.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    element = element.mul(self.gens[idx].element);
                    members.push(idx);
                }
            }
            if element.is_zero() {
                continue;
            }
            let degree = element
                .homogeneous_degree(self.sys.triple())
                .ok_or(EngineError::Internal(
                    "products of homogeneous generators are homogeneous",
                ))?;
            if degree > self.sys.top() {
                continue;
            }
            products.push(ProductEntry {
                members,
                element,
                degree,
            });
        }
        self.products = products;
        Ok(())
    }

    fn closure_span(&self, q: usize) -> Subspace {
        let mut span = Subspace::zero(self.page.bases[q].len());
        for entry in &self.products {
            if entry.degree == q {
                if let Some(coords) = entry.element.coordinates(&self.page.bases[q]) {
                    span.insert(&coords);
                }
            }
        }
        span
    }

    /// First column where `sigma` is alive but `residual` is not a vanishing
    /// class at the corresponding target cell.
    fn conflict_column(
        &self,
        sigma: FiberElement,
        q: usize,
        residual: FiberElement,
        target_row: usize,
    ) -> Option<usize> {
        let r = self.page.r;
        // Both aliveness and vanishing are constant from the saturation
        // threshold on, so scanning one page-length of columns is exhaustive.
        let limit = r.min(self.page.internal);
        (0..=limit).find(|&p| {
            self.page.is_alive(sigma, p, q) && !self.vanishes_at(residual, p + r, target_row)
        })
    }

    /// Whether `value` is the zero class at `(p, q)`: zero, or a cycle lying
    /// in the boundaries.
    fn vanishes_at(&self, value: FiberElement, p: usize, q: usize) -> bool {
        if value.is_zero() {
            return true;
        }
        if q > self.sys.top() {
            return false;
        }
        let Some(coords) = value.coordinates(&self.page.bases[q]) else {
            return false;
        };
        if !self.page.cycles[q].contains(&coords) {
            return false;
        }
        self.page.boundary(p, q).contains(&coords)
    }
}

/// Signed cell-dimension total over the stored window.
fn alternating_total(cycles: &[Subspace], boundaries: &[Vec<Subspace>], internal: usize) -> i64 {
    let mut total = 0i64;
    for (q, row) in boundaries.iter().enumerate() {
        let cdim = cycles[q].dim() as i64;
        for (p, b) in row.iter().enumerate().take(internal + 1) {
            let sign = if (p + q) % 2 == 0 { 1 } else { -1 };
            total += sign * (cdim - b.dim() as i64);
        }
    }
    total
}

/// The limit term of an admissible run.
#[derive(Debug, Clone)]
pub struct EInfinity {
    data: PageData,
    /// Page on which stabilization was certified.
    pub stabilized_at: usize,
    reported: usize,
}

impl EInfinity {
    /// Top fiber degree (largest row).
    #[must_use]
    pub fn top(&self) -> usize {
        self.data.top
    }

    /// Largest reported column.
    #[must_use]
    pub fn reported_columns(&self) -> usize {
        self.reported
    }

    /// Dimension of the cell `(p, q)`.
    #[must_use]
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.data.dim(p, q)
    }

    /// Basis of the column-0 classes of row `q`.
    #[must_use]
    pub fn column_zero_basis(&self, q: usize) -> Vec<FiberElement> {
        if q > self.data.top {
            return Vec::new();
        }
        self.data.cycles[q]
            .basis()
            .iter()
            .map(|v| FiberElement::from_coordinates(v, &self.data.bases[q]))
            .collect()
    }

    /// Whether `t^p ⊗ value` is a nonzero class at `(p, q)`.
    #[must_use]
    pub fn is_alive(&self, value: FiberElement, p: usize, q: usize) -> bool {
        self.data.is_alive(value, p, q)
    }

    /// Coset normal form of `value` at `(p, q)`, or `None` if not a cycle.
    #[must_use]
    pub fn class_reduce(&self, value: FiberElement, p: usize, q: usize) -> Option<FiberElement> {
        self.data.class_reduce(value, p, q)
    }

    /// Last column at which `value` is alive in row `q`: the height of its
    /// `t`-tower.  `None` if it is dead already at column 0.
    #[must_use]
    pub fn tower_length(&self, value: FiberElement, q: usize) -> Option<usize> {
        if !self.data.is_alive(value, 0, q) {
            return None;
        }
        let mut t = 0;
        while t < self.reported && self.data.is_alive(value, t + 1, q) {
            t += 1;
        }
        Some(t)
    }

    /// Largest column with a nonzero cell in the base row.
    #[must_use]
    pub fn last_alive_base_column(&self) -> Option<usize> {
        (0..=self.reported).rev().find(|&p| self.data.dim(p, 0) > 0)
    }
}

/// The outcome of one complete run (or the first violation it hit).
#[derive(Debug, Clone)]
pub struct RunReport {
    /// Final verdict.
    pub verdict: Verdict,
    /// Limit term; present exactly when the verdict is admissible.
    pub einfinity: Option<EInfinity>,
    /// Every tracked generator with its resolved fate.
    pub completion: Vec<CompletedFate>,
    /// Deterministic event trail.
    pub trail: Vec<TrailEvent>,
    /// Structural check counts.
    pub stats: InvariantStats,
    /// First page with a nonzero class-level differential into the base row.
    pub volovikov: Option<usize>,
}
