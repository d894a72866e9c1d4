// SPDX-License-Identifier: Apache-2.0
//! Core engine for analyzing free involutions on products of three spheres
//! through the spectral sequence of the Borel fibration.
//!
//! The crate is organized bottom-up:
//!
//! - [`gf2`]: dense linear algebra over the two-element field;
//! - [`fiber`]: the cohomology algebra of the fiber and its involutions;
//! - [`pages`]: pages of the spectral sequence and the differential engine;
//! - [`patterns`]: enumeration and completion of differential patterns;
//! - [`results`]: ring presentations, case classification and indexes;
//! - [`oracle`]: an independent chain-level cross-check.

pub mod fiber;
pub mod gf2;
pub mod oracle;
pub mod pages;
pub mod patterns;
pub mod results;

pub use fiber::{
    enumerate_involutions, nontrivial_involutions, FiberElement, FiberError, FiberInvolution,
    FiberMonomial, SphereTriple,
};
pub use gf2::{BitMatrix, BitVec, Gf2Error, SubQuotient, Subspace};
pub use oracle::{
    antipodal_pattern, point_complex, projective_complex, quotient_poincare, sphere_complex,
    AntipodalFactor, ChainComplex, OracleError,
};
pub use pages::{
    ClassWitness, CompletedFate, EInfinity, EngineError, FateResolution, GenFate, InvariantStats,
    PageData, PageStep, RunReport, RunState, SpectralSystem, TrackedGen, TrailEvent, Verdict,
    Window,
};
pub use patterns::{
    admissible_completions, admissible_set, check_admissible, enumerate_patterns,
    DifferentialPattern, PatternEntry, PatternError,
};
pub use results::{
    cohomology_index, extract_presentation, index_report, match_theorem, poincare, summarize,
    volovikov_index, CaseId, CaseSummary, IndexReport, Monomial, PoincarePolynomial, Relation,
    RelationLead, ResultsError, RingGenerator, RingPresentation,
};
