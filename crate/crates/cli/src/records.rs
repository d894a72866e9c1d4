// SPDX-License-Identifier: Apache-2.0

//! Output records and their rendering.
//!
//! Machine output (the `records` format) is line-delimited JSON: one
//! versioned header line, then one record per line. Records serialize with a
//! fixed field order, round-trip losslessly through serde, and are
//! deterministic for a given command line. Human output (the `human` format)
//! presents the same content as aligned tables.

use std::fmt::Write as _;

use clap::ValueEnum;
use orbits_core::{
    extract_presentation, index_report, match_theorem, poincare, CaseSummary,
    DifferentialPattern, FiberInvolution, RingPresentation, RunReport, SphereTriple,
};
use serde::{Deserialize, Serialize};

/// Version of the record layout, embedded in every emitted line.
pub const SCHEMA: u32 = 1;

/// Output style selected by `--format` or the `ORBITS_FORMAT` variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Aligned tables for reading.
    Human,
    /// Line-delimited JSON records for tooling.
    Records,
}

/// First line of machine output: tool identity, schema and the command that
/// produced the stream. Output below the header is byte-stable per command
/// line; the header itself carries the versioned part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeaderRecord {
    /// Always `"header"`.
    pub record: String,
    /// Record layout version.
    pub schema: u32,
    /// Tool name.
    pub tool: String,
    /// Tool version.
    pub version: String,
    /// Canonicalized command that produced the stream.
    pub command: String,
}

impl HeaderRecord {
    /// Header for a stream produced by `command`.
    #[must_use]
    pub fn new(command: String) -> Self {
        Self {
            record: "header".to_owned(),
            schema: SCHEMA,
            tool: "orbits".to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            command,
        }
    }
}

/// The three sphere degrees of one analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRecord {
    /// Smallest degree.
    pub n: usize,
    /// Middle degree.
    pub m: usize,
    /// Largest degree.
    pub l: usize,
}

impl From<SphereTriple> for TripleRecord {
    fn from(triple: SphereTriple) -> Self {
        Self {
            n: triple.n(),
            m: triple.m(),
            l: triple.l(),
        }
    }
}

/// One generator of the reported cohomology ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    /// Printable name (`x` for the base class).
    pub name: String,
    /// Total degree.
    pub degree: usize,
    /// Largest power of the base class that still multiplies this generator
    /// to a nonzero class.
    pub tower: usize,
    /// Fiber representative.
    pub class: String,
}

/// One relation of the reported cohomology ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRecord {
    /// Rendered relation including its undetermined parameters.
    pub display: String,
    /// Total degree.
    pub degree: usize,
}

/// The cohomology ring of the orbit space as generators and relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationRecord {
    /// Nilpotence bound of the base class: `x^q = 0`, `x^{q-1} != 0`.
    pub q: usize,
    /// Generators, the base class first.
    pub generators: Vec<GeneratorRecord>,
    /// Relations in emission order.
    pub relations: Vec<RelationRecord>,
}

/// Index bounds extracted from one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRecord {
    /// Largest power of the base class alive in the limit term.
    pub cohomology_index: usize,
    /// First page with a nonzero differential into the base row.
    pub volovikov_page: usize,
    /// Nonexistence statements and the page-versus-index convention note.
    pub notes: Vec<String>,
}

/// One admissible (action, pattern) outcome of `analyze`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    /// Always `"result"`.
    pub record: String,
    /// Record layout version.
    pub schema: u32,
    /// Sphere degrees.
    pub triple: TripleRecord,
    /// Generator images of the action.
    pub action: String,
    /// Full pattern descriptor, including forced composite fates; feeding it
    /// back through `analyze --pattern` reproduces this record.
    pub pattern: String,
    /// Verdict token; always `admissible` for result records.
    pub verdict: String,
    /// Matched catalog case token, if any.
    pub case: Option<String>,
    /// Poincaré coefficients of the orbit space, degree 0 upward.
    pub poincare: Vec<usize>,
    /// Ring presentation of the orbit-space cohomology.
    pub presentation: PresentationRecord,
    /// Index bounds.
    pub index: IndexRecord,
    /// Deterministic event trail of the run.
    pub trail: Vec<String>,
}

/// An explicitly requested pattern that the engine refused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionRecord {
    /// Always `"rejection"`.
    pub record: String,
    /// Record layout version.
    pub schema: u32,
    /// Sphere degrees.
    pub triple: TripleRecord,
    /// Generator images of the action.
    pub action: String,
    /// The requested pattern descriptor, canonicalized.
    pub pattern: String,
    /// Verdict token naming the violated rule.
    pub verdict: String,
    /// Full verdict text.
    pub detail: String,
    /// The witness class, when the verdict carries one.
    pub witness: Option<String>,
    /// Deterministic event trail up to the violation.
    pub trail: Vec<String>,
}

/// Setwise-comparable summary of one outcome; the golden-table currency.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SummaryRecord {
    /// Poincaré coefficients, degree 0 upward.
    pub poincare: Vec<usize>,
    /// Nilpotence bound of the base class.
    pub q: usize,
    /// Sorted degrees of the fiber generators.
    pub gens: Vec<usize>,
    /// Sorted degrees of the relations (`x^q` carried by `q`, not repeated).
    pub relations: Vec<usize>,
}

impl From<CaseSummary> for SummaryRecord {
    fn from(summary: CaseSummary) -> Self {
        Self {
            poincare: summary.poincare,
            q: summary.q,
            gens: summary.gens,
            relations: summary.relations,
        }
    }
}

/// Verdict of a golden-table comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRecord {
    /// Always `"verify"`.
    pub record: String,
    /// Record layout version.
    pub schema: u32,
    /// Catalog case token.
    pub case: String,
    /// Sphere degrees.
    pub triple: TripleRecord,
    /// `"pass"` or `"fail"`.
    pub status: String,
    /// Stored golden summaries, sorted.
    pub expected: Vec<SummaryRecord>,
    /// Summaries the engine produced, sorted.
    pub actual: Vec<SummaryRecord>,
    /// Stored summaries the engine failed to produce.
    pub missing: Vec<SummaryRecord>,
    /// Engine summaries absent from the stored table.
    pub unexpected: Vec<SummaryRecord>,
}

/// Verdict of an engine-versus-chain-model comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRecord {
    /// Always `"oracle"`.
    pub record: String,
    /// Record layout version.
    pub schema: u32,
    /// Sphere degrees.
    pub triple: TripleRecord,
    /// 1-based index of the negated sphere factor.
    pub factor: usize,
    /// `"pass"` or `"fail"`.
    pub status: String,
    /// Engine Poincaré coefficients.
    pub engine: Vec<usize>,
    /// Chain-model Poincaré coefficients.
    pub oracle: Vec<usize>,
}

/// Builds the result record for an admissible run.
///
/// # Panics
///
/// If the report is not admissible; callers filter first.
#[must_use]
pub fn result_record(
    triple: SphereTriple,
    action: &FiberInvolution,
    report: &RunReport,
) -> ResultRecord {
    let einfinity = report
        .einfinity
        .as_ref()
        .expect("result records require an admissible run");
    let index = index_report(report).expect("admissible runs carry an index report");
    ResultRecord {
        record: "result".to_owned(),
        schema: SCHEMA,
        triple: triple.into(),
        action: action.to_string(),
        pattern: DifferentialPattern::from_completion(&report.completion).to_string(),
        verdict: report.verdict.code().to_owned(),
        case: match_theorem(&triple, action, &report.completion).map(|case| case.to_string()),
        poincare: poincare(einfinity).coefficients().to_vec(),
        presentation: presentation_record(&extract_presentation(einfinity)),
        index: IndexRecord {
            cohomology_index: index.cohomology_index,
            volovikov_page: index.volovikov_page,
            notes: index.notes().to_vec(),
        },
        trail: report.trail.iter().map(ToString::to_string).collect(),
    }
}

/// Builds the rejection record for a refused pattern.
#[must_use]
pub fn rejection_record(
    triple: SphereTriple,
    action: &FiberInvolution,
    pattern: &DifferentialPattern,
    report: &RunReport,
) -> RejectionRecord {
    RejectionRecord {
        record: "rejection".to_owned(),
        schema: SCHEMA,
        triple: triple.into(),
        action: action.to_string(),
        pattern: pattern.to_string(),
        verdict: report.verdict.code().to_owned(),
        detail: report.verdict.to_string(),
        witness: report.verdict.witness().map(ToString::to_string),
        trail: report.trail.iter().map(ToString::to_string).collect(),
    }
}

fn presentation_record(presentation: &RingPresentation) -> PresentationRecord {
    PresentationRecord {
        q: presentation.q,
        generators: presentation
            .generators
            .iter()
            .map(|generator| GeneratorRecord {
                name: generator.name.clone(),
                degree: generator.degree,
                tower: generator.tower,
                class: generator.value.to_string(),
            })
            .collect(),
        relations: presentation
            .relations
            .iter()
            .map(|relation| RelationRecord {
                display: presentation.relation_string(relation),
                degree: relation.degree,
            })
            .collect(),
    }
}

/// Two-row table of degrees and dimensions with columns aligned.
#[must_use]
pub fn dimension_table(label: &str, coefficients: &[usize], indent: &str) -> String {
    let width = label.len().max("degree".len());
    let mut degree_row = format!("{indent}{:<width$} |", "degree");
    let mut dim_row = format!("{indent}{label:<width$} |");
    for (degree, &dim) in coefficients.iter().enumerate() {
        let cell = degree.to_string().len().max(dim.to_string().len());
        write!(degree_row, " {degree:>cell$}").expect("writing to a string cannot fail");
        write!(dim_row, " {dim:>cell$}").expect("writing to a string cannot fail");
    }
    format!("{degree_row}\n{dim_row}\n")
}

/// Human heading for any record stream.
#[must_use]
pub fn render_header_human(header: &HeaderRecord) -> String {
    format!("{} {} - {}\n", header.tool, header.version, header.command)
}

/// Aligned-table rendering of one result record.
#[must_use]
pub fn render_result_human(record: &ResultRecord) -> String {
    let mut out = String::new();
    let case = record.case.as_deref().unwrap_or("(uncataloged)");
    let _ = writeln!(
        out,
        "triple ({},{},{})  action {}  case {}",
        record.triple.n, record.triple.m, record.triple.l, record.action, case
    );
    let _ = writeln!(out, "  pattern  {}", record.pattern);
    let _ = writeln!(out, "  verdict  {}", record.verdict);
    out.push_str(&dimension_table("dim", &record.poincare, "  "));
    let _ = writeln!(out, "  ring     x^{} = 0", record.presentation.q);
    let name_width = record
        .presentation
        .generators
        .iter()
        .map(|generator| generator.name.len())
        .max()
        .unwrap_or(1);
    for generator in &record.presentation.generators {
        let _ = writeln!(
            out,
            "    gen {:<name_width$}  degree {:>2}  tower {:>3}  class {}",
            generator.name, generator.degree, generator.tower, generator.class
        );
    }
    for relation in &record.presentation.relations {
        let _ = writeln!(out, "    rel degree {:>2}  {}", relation.degree, relation.display);
    }
    let _ = writeln!(
        out,
        "  index    cohomology index {}, first base-row differential on page {}",
        record.index.cohomology_index, record.index.volovikov_page
    );
    for note in &record.index.notes {
        let _ = writeln!(out, "    note   {note}");
    }
    let _ = writeln!(out, "  trail    {} event(s)", record.trail.len());
    for event in &record.trail {
        let _ = writeln!(out, "    {event}");
    }
    out
}

/// Aligned-table rendering of one rejection record.
#[must_use]
pub fn render_rejection_human(record: &RejectionRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "triple ({},{},{})  action {}  REJECTED",
        record.triple.n, record.triple.m, record.triple.l, record.action
    );
    let _ = writeln!(out, "  pattern  {}", record.pattern);
    let _ = writeln!(out, "  verdict  {}", record.verdict);
    let _ = writeln!(out, "  detail   {}", record.detail);
    if let Some(witness) = &record.witness {
        let _ = writeln!(out, "  witness  {witness}");
    }
    let _ = writeln!(out, "  trail    {} event(s)", record.trail.len());
    for event in &record.trail {
        let _ = writeln!(out, "    {event}");
    }
    out
}

fn summary_line(summary: &SummaryRecord) -> String {
    format!(
        "q={:<3} gens={:?} relations={:?} poincare={:?}",
        summary.q, summary.gens, summary.relations, summary.poincare
    )
}

/// Aligned-table rendering of one verify record.
#[must_use]
pub fn render_verify_human(record: &VerifyRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "verify {}  triple ({},{},{})  {}",
        record.case,
        record.triple.n,
        record.triple.m,
        record.triple.l,
        record.status.to_uppercase()
    );
    for (label, summaries) in [
        ("expected", &record.expected),
        ("actual", &record.actual),
        ("missing", &record.missing),
        ("unexpected", &record.unexpected),
    ] {
        if (label == "missing" || label == "unexpected") && summaries.is_empty() {
            continue;
        }
        let _ = writeln!(out, "  {label} ({}):", summaries.len());
        for summary in summaries.iter() {
            let _ = writeln!(out, "    {}", summary_line(summary));
        }
    }
    out
}

/// Aligned-table rendering of one oracle record.
#[must_use]
pub fn render_oracle_human(record: &OracleRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "oracle factor {} on ({},{},{})  {}",
        record.factor,
        record.triple.n,
        record.triple.m,
        record.triple.l,
        record.status.to_uppercase()
    );
    out.push_str(&dimension_table("engine", &record.engine, "  "));
    out.push_str(&dimension_table("oracle", &record.oracle, "  "));
    out
}

#[cfg(test)]
mod tests {
    use orbits_core::{check_admissible, FiberInvolution, SpectralSystem, SphereTriple};

    use super::*;

    fn sample_report() -> (SphereTriple, FiberInvolution, RunReport) {
        let triple = SphereTriple::new(1, 2, 4).unwrap();
        let action = FiberInvolution::identity();
        let system = SpectralSystem::new(triple, action.clone());
        let pattern: DifferentialPattern = "a->2:1, b->surv, c->surv".parse().unwrap();
        let report = check_admissible(&system, &pattern).unwrap();
        (triple, action, report)
    }

    #[test]
    fn result_records_round_trip_through_json() {
        let (triple, action, report) = sample_report();
        let record = result_record(triple, &action, &report);
        assert_eq!(record.verdict, "admissible");
        assert_eq!(record.case.as_deref(), Some("thm3.6-1"));
        assert_eq!(record.poincare, [1, 1, 1, 1, 1, 1, 1, 1]);

        let line = serde_json::to_string(&record).unwrap();
        let back: ResultRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, record);
        assert_eq!(serde_json::to_string(&back).unwrap(), line);
    }

    #[test]
    fn human_tables_align_degree_and_dimension_columns() {
        let table = dimension_table("dim", &[1, 2, 10, 4], "  ");
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].len(), lines[1].len());
        assert_eq!(lines[0], "  degree | 0 1  2 3");
        assert_eq!(lines[1], "  dim    | 1 2 10 4");
    }

    #[test]
    fn rejection_records_carry_the_witness() {
        let triple = SphereTriple::new(2, 2, 5).unwrap();
        let action = FiberInvolution::identity();
        let system = SpectralSystem::new(triple, action.clone());
        let pattern: DifferentialPattern = "a->3:1, b->3:1, c->2:ab".parse().unwrap();
        let report = check_admissible(&system, &pattern).unwrap();
        let record = rejection_record(triple, &action, &pattern, &report);
        assert_eq!(record.verdict, "violates_leibniz");
        assert_eq!(record.witness.as_deref(), Some("t^4*(a+b)"));
        let line = serde_json::to_string(&record).unwrap();
        let back: RejectionRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, record);
    }
}
