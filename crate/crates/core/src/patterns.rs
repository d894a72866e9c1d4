// SPDX-License-Identifier: Apache-2.0

//! Enumeration and admissibility search over differential patterns.
//!
//! A *differential pattern* commits each base generator of the second page to
//! either surviving every differential or transgressing on a definite page to
//! a definite class. [`enumerate_patterns`] lists every commitment consistent
//! with the degree arithmetic of the second page, [`check_admissible`] runs
//! the engine over the completions of one pattern (generators discovered on
//! later pages are branched over), [`admissible_completions`] keeps every
//! admissible branch instead of the first, and [`admissible_set`] expands the
//! full enumeration into all completed patterns whose limit term is
//! compatible with a free involution.
//!
//! Patterns also have a textual descriptor form, `ELEMENT->surv` or
//! `ELEMENT->PAGE:TARGET` entries joined by commas, so a completed run can be
//! replayed exactly: entries for base generators become initial fates, and
//! entries for later discoveries are fed through the engine's preset channel.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fiber::{FiberElement, FiberError};
use crate::pages::{
    CompletedFate, EngineError, FateResolution, GenFate, PageStep, RunReport, RunState,
    SpectralSystem,
};

/// Errors raised while parsing or assembling a differential pattern.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    /// An entry is not of the form `ELEMENT->surv` or `ELEMENT->PAGE:TARGET`.
    #[error("malformed pattern entry `{entry}`: expected `ELEMENT->surv` or `ELEMENT->PAGE:TARGET`")]
    MalformedEntry {
        /// The offending entry text.
        entry: String,
    },
    /// The page component of an entry is not an unsigned integer.
    #[error("invalid page in pattern entry `{entry}`")]
    InvalidPage {
        /// The offending entry text.
        entry: String,
    },
    /// An element or target failed to parse as a fiber element.
    #[error(transparent)]
    Element(#[from] FiberError),
    /// The same element is assigned a fate more than once.
    #[error("element {element} is assigned more than once")]
    DuplicateElement {
        /// The repeated element.
        element: FiberElement,
    },
    /// A pattern entry must commit to a definite fate.
    #[error("element {element} has no definite fate")]
    IndefiniteEntry {
        /// The element left undecided.
        element: FiberElement,
    },
    /// The pattern contains no entries.
    #[error("empty pattern")]
    Empty,
}

/// One definite fate assignment inside a differential pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternEntry {
    /// The assigned element: a base generator or a later discovery.
    pub element: FiberElement,
    /// Its committed fate; never [`GenFate::Undecided`].
    pub fate: GenFate,
}

impl fmt::Display for PatternEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fate {
            GenFate::Survives | GenFate::Undecided => write!(f, "{}->surv", self.element),
            GenFate::Fires { page, target } => {
                write!(f, "{}->{}:{}", self.element, page, target)
            }
        }
    }
}

/// A commitment of fates for the generators of a run.
///
/// Patterns produced by [`enumerate_patterns`] cover exactly the base
/// generators of the system. Parsed descriptors may mention fewer (the rest
/// are explored by [`check_admissible`]) or more (entries for generators that
/// only appear on later pages).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialPattern {
    entries: Vec<PatternEntry>,
}

impl DifferentialPattern {
    /// Builds a pattern from definite, pairwise-distinct assignments.
    ///
    /// # Errors
    ///
    /// [`PatternError::Empty`] without entries, [`PatternError::DuplicateElement`]
    /// when an element repeats, and [`PatternError::IndefiniteEntry`] when an
    /// entry carries [`GenFate::Undecided`].
    pub fn new(entries: Vec<PatternEntry>) -> Result<Self, PatternError> {
        if entries.is_empty() {
            return Err(PatternError::Empty);
        }
        for (i, entry) in entries.iter().enumerate() {
            if matches!(entry.fate, GenFate::Undecided) {
                return Err(PatternError::IndefiniteEntry {
                    element: entry.element,
                });
            }
            if entries[..i].iter().any(|e| e.element == entry.element) {
                return Err(PatternError::DuplicateElement {
                    element: entry.element,
                });
            }
        }
        Ok(Self { entries })
    }

    /// The assignments in descriptor order.
    #[must_use]
    pub fn entries(&self) -> &[PatternEntry] {
        &self.entries
    }

    /// The committed fate for `element`, when the pattern mentions it.
    #[must_use]
    pub fn fate_of(&self, element: FiberElement) -> Option<GenFate> {
        self.entries
            .iter()
            .find(|e| e.element == element)
            .map(|e| e.fate)
    }

    /// Rebuilds the full pattern a finished run actually followed, with one
    /// entry per tracked generator in discovery order. Vacuous fires keep
    /// their assigned page and target so a replay resolves them identically.
    #[must_use]
    pub fn from_completion(completion: &[CompletedFate]) -> Self {
        let entries = completion
            .iter()
            .map(|fate| {
                let resolved = match fate.resolution {
                    FateResolution::Survived => GenFate::Survives,
                    FateResolution::Fired { page, target }
                    | FateResolution::VacuousFired { page, target } => {
                        GenFate::Fires { page, target }
                    }
                };
                PatternEntry {
                    element: fate.element,
                    fate: resolved,
                }
            })
            .collect();
        Self { entries }
    }

    /// Splits the entries into fates for the system's base generators (in the
    /// system's order, [`GenFate::Undecided`] where unmentioned) and a preset
    /// for generators that only appear on later pages.
    #[must_use]
    pub fn resolve(
        &self,
        system: &SpectralSystem,
    ) -> (Vec<GenFate>, BTreeMap<FiberElement, GenFate>) {
        let initial = system.initial_generators();
        let fates = initial
            .iter()
            .map(|g| self.fate_of(*g).unwrap_or(GenFate::Undecided))
            .collect();
        let preset = self
            .entries
            .iter()
            .filter(|e| !initial.contains(&e.element))
            .map(|e| (e.element, e.fate))
            .collect();
        (fates, preset)
    }
}

impl fmt::Display for DifferentialPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, entry) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{entry}")?;
        }
        Ok(())
    }
}

impl FromStr for DifferentialPattern {
    type Err = PatternError;

    /// Parses a comma-separated descriptor, e.g. `"a->3:1, c->2:ab, b->surv"`;
    /// whitespace around separators is ignored and empty entries are skipped.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut entries = Vec::new();
        for raw in s.split(',') {
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let (lhs, rhs) = raw.split_once("->").ok_or_else(|| {
                PatternError::MalformedEntry {
                    entry: raw.to_string(),
                }
            })?;
            let element = FiberElement::from_str(lhs.trim())?;
            let rhs = rhs.trim();
            let fate = if rhs == "surv" {
                GenFate::Survives
            } else {
                let (page, target) =
                    rhs.split_once(':')
                        .ok_or_else(|| PatternError::MalformedEntry {
                            entry: raw.to_string(),
                        })?;
                let page = page
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| PatternError::InvalidPage {
                        entry: raw.to_string(),
                    })?;
                let target = FiberElement::from_str(target.trim())?;
                GenFate::Fires { page, target }
            };
            entries.push(PatternEntry { element, fate });
        }
        Self::new(entries)
    }
}

/// Lists every pattern over the base generators whose pages and targets are
/// consistent with the degree arithmetic of the second page.
///
/// For a generator of degree `d`, a transgression on page `r` needs
/// `2 <= r <= d + 1` (so the target row `d + 1 - r` exists) and a nonzero
/// class at cell `(r, d + 1 - r)` of the second page; the targets run over
/// every nonzero sum of basis classes there. The all-survive pattern is
/// omitted: a free involution needs at least one nonzero differential.
///
/// Patterns are produced in the order [`admissible_set`] reports: entry-wise
/// lexicographic on `(page, target)` with survival ordered last.
///
/// # Errors
///
/// Only internal engine errors; every degree-consistent input enumerates.
pub fn enumerate_patterns(
    system: &SpectralSystem,
) -> Result<Vec<DifferentialPattern>, EngineError> {
    let base = vec![GenFate::Undecided; system.initial_generators().len()];
    let probe = system.start(base)?;
    let page = probe.data();

    let mut options: Vec<Vec<GenFate>> = Vec::new();
    for gen in probe.gens() {
        let mut fates = Vec::new();
        for r in 2..=gen.degree + 1 {
            let row = gen.degree + 1 - r;
            for target in nonzero_sums(&page.class_basis(r, row)) {
                fates.push(GenFate::Fires { page: r, target });
            }
        }
        fates.push(GenFate::Survives);
        options.push(fates);
    }

    let total: usize = options.iter().map(Vec::len).product();
    let mut patterns = Vec::with_capacity(total.saturating_sub(1));
    let mut odometer = vec![0usize; options.len()];
    for _ in 0..total {
        let entries: Vec<PatternEntry> = odometer
            .iter()
            .zip(probe.gens())
            .zip(&options)
            .map(|((&i, gen), fates)| PatternEntry {
                element: gen.element,
                fate: fates[i],
            })
            .collect();
        if entries
            .iter()
            .any(|e| !matches!(e.fate, GenFate::Survives))
        {
            patterns.push(DifferentialPattern { entries });
        }
        for pos in (0..odometer.len()).rev() {
            odometer[pos] += 1;
            if odometer[pos] < options[pos].len() {
                break;
            }
            odometer[pos] = 0;
        }
    }
    Ok(patterns)
}

/// Every nonzero sum of the given independent classes, ascending by element
/// encoding.
fn nonzero_sums(basis: &[FiberElement]) -> Vec<FiberElement> {
    let mut sums = Vec::with_capacity((1usize << basis.len()) - 1);
    for mask in 1u32..(1u32 << basis.len()) {
        let mut value = FiberElement::zero();
        for (i, class) in basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                value = value.add(*class);
            }
        }
        sums.push(value);
    }
    sums.sort_by_key(FiberElement::bits);
    sums
}

/// Runs the engine on `pattern`, exploring every completion of the
/// generators the pattern leaves open, and returns the first admissible
/// completion in search order — or, when none is admissible, the report of
/// the first completion explored.
///
/// Open generators are the base generators the pattern does not mention plus
/// everything discovered on later pages without a preset entry. The search
/// resolves each page's open generators in discovery order, trying deferral
/// before each feasible target in ascending element order, so the reported
/// completion (and its verdict) is deterministic.
///
/// # Errors
///
/// Internal engine errors, and [`EngineError::UnusedPatternEntry`] when the
/// pattern pins an element that never appears as a generator; rejections are
/// verdicts inside the report, never errors.
pub fn check_admissible(
    system: &SpectralSystem,
    pattern: &DifferentialPattern,
) -> Result<RunReport, EngineError> {
    let (fates, preset) = pattern.resolve(system);
    let state = system.start_with_preset(fates, preset)?;
    explore(state)
}

/// Drives one state to the next branch point or to the end of the run.
fn explore(mut state: RunState<'_>) -> Result<RunReport, EngineError> {
    if state.is_complete() {
        return state.finalize();
    }
    state.begin_page()?;
    let undecided = state.undecided_indices();
    branch(state, &undecided, 0)
}

/// Depth-first search over the fates of this page's undecided generators.
fn branch(
    state: RunState<'_>,
    undecided: &[usize],
    pos: usize,
) -> Result<RunReport, EngineError> {
    if pos == undecided.len() {
        let mut state = state;
        return match state.finish_page()? {
            PageStep::Advanced => explore(state),
            PageStep::Violated(verdict) => Ok(state.into_failure(verdict)),
        };
    }
    let idx = undecided[pos];
    let targets = state.feasible_targets(idx);
    if targets.is_empty() {
        return branch(state, undecided, pos + 1);
    }
    let deferred = branch(state.clone(), undecided, pos + 1)?;
    if deferred.verdict.is_admissible() {
        return Ok(deferred);
    }
    for target in targets {
        let mut fired = state.clone();
        fired.assign_fire(idx, target)?;
        let report = branch(fired, undecided, pos + 1)?;
        if report.verdict.is_admissible() {
            return Ok(report);
        }
    }
    Ok(deferred)
}

/// Runs the engine on `pattern` and returns every admissible completion, in
/// the same defer-first search order as [`check_admissible`].
///
/// Completions differ in the fates of the generators the pattern leaves
/// open, so a fully pinned pattern yields at most one report.
///
/// # Errors
///
/// Same conditions as [`check_admissible`].
pub fn admissible_completions(
    system: &SpectralSystem,
    pattern: &DifferentialPattern,
) -> Result<Vec<RunReport>, EngineError> {
    let (fates, preset) = pattern.resolve(system);
    let state = system.start_with_preset(fates, preset)?;
    let mut reports = Vec::new();
    explore_all(state, &mut reports)?;
    Ok(reports)
}

/// Drives one state to the next branch point, collecting admissible runs.
fn explore_all(mut state: RunState<'_>, reports: &mut Vec<RunReport>) -> Result<(), EngineError> {
    if state.is_complete() {
        let report = state.finalize()?;
        if report.verdict.is_admissible() {
            reports.push(report);
        }
        return Ok(());
    }
    state.begin_page()?;
    let undecided = state.undecided_indices();
    branch_all(state, &undecided, 0, reports)
}

/// Depth-first search over this page's undecided generators, keeping every
/// admissible leaf rather than stopping at the first.
fn branch_all(
    state: RunState<'_>,
    undecided: &[usize],
    pos: usize,
    reports: &mut Vec<RunReport>,
) -> Result<(), EngineError> {
    if pos == undecided.len() {
        let mut state = state;
        return match state.finish_page()? {
            PageStep::Advanced => explore_all(state, reports),
            PageStep::Violated(_) => Ok(()),
        };
    }
    let idx = undecided[pos];
    let targets = state.feasible_targets(idx);
    if targets.is_empty() {
        return branch_all(state, undecided, pos + 1, reports);
    }
    branch_all(state.clone(), undecided, pos + 1, reports)?;
    for target in targets {
        let mut fired = state.clone();
        fired.assign_fire(idx, target)?;
        branch_all(fired, undecided, pos + 1, reports)?;
    }
    Ok(())
}

/// Enumerates every degree-consistent pattern, explores every completion of
/// each, and returns all admissible completions with their reports.
///
/// The pattern in each row is the *completed* descriptor — base generators
/// plus every generator discovered along the way — so distinct rows record
/// genuinely different runs and each row replays to itself.
///
/// The order is deterministic regardless of how the validations are executed:
/// entry-wise lexicographic on `(page, target encoding)` with survival
/// ordered after every transgression.
///
/// # Errors
///
/// Only internal engine errors; an action admitting no free involution simply
/// yields an empty set.
pub fn admissible_set(
    system: &SpectralSystem,
) -> Result<Vec<(DifferentialPattern, RunReport)>, EngineError> {
    let mut admissible = Vec::new();
    for pattern in enumerate_patterns(system)? {
        for report in admissible_completions(system, &pattern)? {
            let completed = DifferentialPattern::from_completion(&report.completion);
            admissible.push((completed, report));
        }
    }
    admissible.sort_by_key(|(pattern, _)| sort_key(pattern));
    Ok(admissible)
}

/// Sort key for the deterministic ordering: per entry `(page, target bits)`,
/// with survival after every finite page.
fn sort_key(pattern: &DifferentialPattern) -> Vec<(usize, u8)> {
    pattern
        .entries()
        .iter()
        .map(|e| match e.fate {
            GenFate::Fires { page, target } => (page, target.bits()),
            GenFate::Survives | GenFate::Undecided => (usize::MAX, 0),
        })
        .collect()
}
