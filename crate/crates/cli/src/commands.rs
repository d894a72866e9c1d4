// SPDX-License-Identifier: Apache-2.0

//! Implementations of the `analyze`, `verify` and `oracle` subcommands.
//!
//! Each command builds its records first and renders afterwards, so machine
//! and human output always describe the same computation and the whole
//! stream is emitted in one deterministic write.

use std::collections::BTreeSet;
use std::fmt;

use orbits_core::{
    admissible_set, antipodal_pattern, check_admissible, match_theorem, nontrivial_involutions,
    poincare, quotient_poincare, summarize, AntipodalFactor, CaseId, DifferentialPattern,
    FiberInvolution, SpectralSystem, SphereTriple,
};
use serde::Serialize;

use crate::goldens::GoldenStore;
use crate::records::{
    rejection_record, render_header_human, render_oracle_human, render_rejection_human,
    render_result_human, render_verify_human, result_record, HeaderRecord, OracleRecord,
    OutputFormat, RejectionRecord, ResultRecord, SummaryRecord, TripleRecord, VerifyRecord,
};

/// A command failure, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Rejected input; the process exits with code 2.
    Usage(String),
    /// Unexpected internal failure; the process exits with code 1.
    Internal(String),
}

impl CliError {
    /// Process exit code for this failure.
    #[must_use]
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(message) => write!(f, "usage error: {message}"),
            Self::Internal(message) => write!(f, "error: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

/// One line of `analyze` output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnalyzeOutcome {
    /// An admissible (action, pattern) result.
    Result(ResultRecord),
    /// An explicitly requested pattern the engine refused.
    Rejection(RejectionRecord),
}

fn parse_triple(n: usize, m: usize, l: usize) -> Result<SphereTriple, CliError> {
    SphereTriple::new(n, m, l).map_err(|error| CliError::Usage(error.to_string()))
}

fn machine_line<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string(value)
        .map_err(|error| CliError::Internal(format!("serialization failed: {error}")))
}

/// Resolves the action selector into concrete involutions to run.
fn select_actions(selector: &str, triple: SphereTriple) -> Result<Vec<FiberInvolution>, CliError> {
    match selector {
        "trivial" => Ok(vec![FiberInvolution::identity()]),
        "all" => {
            let mut actions = vec![FiberInvolution::identity()];
            actions.extend(nontrivial_involutions(&triple));
            Ok(actions)
        }
        explicit => {
            let parsed: FiberInvolution = explicit
                .parse()
                .map_err(|error| CliError::Usage(format!("bad action selector: {error}")))?;
            let images = [parsed.image(0), parsed.image(1), parsed.image(2)];
            FiberInvolution::new(&triple, images)
                .map(|action| vec![action])
                .map_err(|error| CliError::Usage(format!("invalid action: {error}")))
        }
    }
}

/// Computes the `analyze` outcome stream without rendering it.
///
/// # Errors
///
/// Usage errors for invalid triples, action selectors, or pattern
/// descriptors; internal errors if the engine fails outright.
pub fn collect_analyze(
    n: usize,
    m: usize,
    l: usize,
    action: &str,
    pattern: Option<&str>,
) -> Result<Vec<AnalyzeOutcome>, CliError> {
    let triple = parse_triple(n, m, l)?;
    if pattern.is_some() && action == "all" {
        return Err(CliError::Usage(
            "--pattern checks one run; use --action trivial or explicit generator images"
                .to_owned(),
        ));
    }
    let actions = select_actions(action, triple)?;
    let mut outcomes = Vec::new();
    for involution in &actions {
        let system = SpectralSystem::new(triple, involution.clone());
        if let Some(descriptor) = pattern {
            let parsed: DifferentialPattern = descriptor
                .parse()
                .map_err(|error| CliError::Usage(format!("bad pattern descriptor: {error}")))?;
            let report = check_admissible(&system, &parsed)
                .map_err(|error| CliError::Usage(format!("pattern does not fit this run: {error}")))?;
            if report.verdict.is_admissible() {
                outcomes.push(AnalyzeOutcome::Result(result_record(
                    triple, involution, &report,
                )));
            } else {
                outcomes.push(AnalyzeOutcome::Rejection(rejection_record(
                    triple, involution, &parsed, &report,
                )));
            }
        } else {
            let set = admissible_set(&system)
                .map_err(|error| CliError::Internal(format!("engine failure: {error}")))?;
            for (_, report) in &set {
                outcomes.push(AnalyzeOutcome::Result(result_record(
                    triple, involution, report,
                )));
            }
        }
    }
    Ok(outcomes)
}

/// Runs `analyze` and renders its stream; the exit code is always 0.
///
/// # Errors
///
/// See [`collect_analyze`].
pub fn analyze(
    n: usize,
    m: usize,
    l: usize,
    action: &str,
    pattern: Option<&str>,
    format: OutputFormat,
) -> Result<(String, u8), CliError> {
    let outcomes = collect_analyze(n, m, l, action, pattern)?;
    let mut command = format!("analyze --n {n} --m {m} --l {l} --action {action}");
    if let Some(descriptor) = pattern {
        command.push_str(&format!(" --pattern \"{descriptor}\""));
    }
    let header = HeaderRecord::new(command);
    let mut out = String::new();
    match format {
        OutputFormat::Records => {
            out.push_str(&machine_line(&header)?);
            out.push('\n');
            for outcome in &outcomes {
                let line = match outcome {
                    AnalyzeOutcome::Result(record) => machine_line(record)?,
                    AnalyzeOutcome::Rejection(record) => machine_line(record)?,
                };
                out.push_str(&line);
                out.push('\n');
            }
        }
        OutputFormat::Human => {
            out.push_str(&render_header_human(&header));
            for outcome in &outcomes {
                out.push('\n');
                match outcome {
                    AnalyzeOutcome::Result(record) => out.push_str(&render_result_human(record)),
                    AnalyzeOutcome::Rejection(record) => {
                        out.push_str(&render_rejection_human(record));
                    }
                }
            }
            let results = outcomes
                .iter()
                .filter(|outcome| matches!(outcome, AnalyzeOutcome::Result(_)))
                .count();
            out.push_str(&format!(
                "\n{results} admissible record(s), {} rejection(s)\n",
                outcomes.len() - results
            ));
        }
    }
    Ok((out, 0))
}

/// Degree hypotheses a case puts on the triple; violations are usage errors
/// so a failing exit always means a genuine diff.
fn hypothesis_gate(token: &str, n: usize, m: usize, l: usize) -> Result<(), CliError> {
    let (requirement, satisfied) = match token {
        "thm3.2" => ("n < m = l", n < m && m == l),
        "thm3.4-1" => ("n = m and l > 2n", n == m && l > 2 * n),
        "thm3.4-2" => ("n = m < l", n == m && m < l),
        "thm3.4-3" => ("n = m = l", n == m && m == l),
        "thm3.6-2" => ("n >= 2", n >= 2),
        "thm3.7-1" | "thm3.7-3" => ("n < m", n < m),
        "thm3.7-4" => ("n < l < n + m", n < l && l < n + m),
        "thm3.8-1" => ("l > n + m", l > n + m),
        "thm3.8-2" => ("m < l", m < l),
        "thm3.8-3" => ("n < l", n < l),
        _ => return Ok(()),
    };
    if satisfied {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "case {token} requires {requirement}, got ({n},{m},{l})"
        )))
    }
}

/// True for the cases whose action is the identity involution.
fn trivial_action_family(token: &str) -> bool {
    token.starts_with("thm3.6") || token.starts_with("thm3.7") || token.starts_with("thm3.8")
}

/// The complete set of distinct summaries the engine produces for a case at
/// a triple, unioned over the case's action family.
///
/// # Errors
///
/// Internal errors if the engine fails outright.
pub fn case_summaries(
    case: CaseId,
    triple: SphereTriple,
) -> Result<BTreeSet<SummaryRecord>, CliError> {
    let token = case.to_string();
    let actions = if trivial_action_family(&token) {
        vec![FiberInvolution::identity()]
    } else {
        nontrivial_involutions(&triple)
            .into_iter()
            .filter(|action| !action.fixed_point_obstruction(&triple))
            .collect()
    };
    let mut summaries = BTreeSet::new();
    for action in actions {
        let system = SpectralSystem::new(triple, action.clone());
        let set = admissible_set(&system)
            .map_err(|error| CliError::Internal(format!("engine failure: {error}")))?;
        for (_, report) in &set {
            if match_theorem(&triple, &action, &report.completion) == Some(case) {
                let einfinity = report
                    .einfinity
                    .as_ref()
                    .expect("admissible runs carry a limit term");
                summaries.insert(summarize(einfinity).into());
            }
        }
    }
    Ok(summaries)
}

/// Computes the `verify` record without rendering it.
///
/// # Errors
///
/// Usage errors for unknown case tokens, invalid triples, violated case
/// hypotheses, or triples with no stored golden entry.
pub fn verify_outcome(
    case_token: &str,
    n: usize,
    m: usize,
    l: usize,
) -> Result<VerifyRecord, CliError> {
    let case: CaseId = case_token
        .parse()
        .map_err(|error| CliError::Usage(format!("{error}")))?;
    let token = case.to_string();
    let triple = parse_triple(n, m, l)?;
    hypothesis_gate(&token, n, m, l)?;
    let store = GoldenStore::load().map_err(|error| CliError::Internal(error.to_string()))?;
    let Some(stored) = store.lookup(&token, n, m, l) else {
        let available: Vec<String> = store
            .triples_for(&token)
            .into_iter()
            .map(|(a, b, c)| format!("({a},{b},{c})"))
            .collect();
        return Err(CliError::Usage(format!(
            "no stored golden for {token} at ({n},{m},{l}); stored triples: {}",
            available.join(", ")
        )));
    };
    let expected: BTreeSet<SummaryRecord> = stored.iter().cloned().collect();
    let actual = case_summaries(case, triple)?;
    let missing: Vec<SummaryRecord> = expected.difference(&actual).cloned().collect();
    let unexpected: Vec<SummaryRecord> = actual.difference(&expected).cloned().collect();
    let status = if missing.is_empty() && unexpected.is_empty() {
        "pass"
    } else {
        "fail"
    };
    Ok(VerifyRecord {
        record: "verify".to_owned(),
        schema: crate::records::SCHEMA,
        case: token,
        triple: TripleRecord { n, m, l },
        status: status.to_owned(),
        expected: expected.into_iter().collect(),
        actual: actual.into_iter().collect(),
        missing,
        unexpected,
    })
}

/// Runs `verify` and renders it; exit code 0 on pass, 1 on diff.
///
/// # Errors
///
/// See [`verify_outcome`].
pub fn verify(
    case_token: &str,
    n: usize,
    m: usize,
    l: usize,
    format: OutputFormat,
) -> Result<(String, u8), CliError> {
    let record = verify_outcome(case_token, n, m, l)?;
    let header = HeaderRecord::new(format!("verify {} --n {n} --m {m} --l {l}", record.case));
    let mut out = String::new();
    match format {
        OutputFormat::Records => {
            out.push_str(&machine_line(&header)?);
            out.push('\n');
            out.push_str(&machine_line(&record)?);
            out.push('\n');
        }
        OutputFormat::Human => {
            out.push_str(&render_header_human(&header));
            out.push('\n');
            out.push_str(&render_verify_human(&record));
        }
    }
    let code = u8::from(record.status != "pass");
    Ok((out, code))
}

/// Computes the `oracle` record without rendering it.
///
/// # Errors
///
/// Usage errors for invalid triples or factors; internal errors if the
/// engine rejects the antipodal pattern, which would be an engine defect.
pub fn oracle_outcome(
    n: usize,
    m: usize,
    l: usize,
    factor: usize,
) -> Result<OracleRecord, CliError> {
    let triple = parse_triple(n, m, l)?;
    let factor = AntipodalFactor::try_from(factor)
        .map_err(|error| CliError::Usage(error.to_string()))?;
    let system = SpectralSystem::new(triple, FiberInvolution::identity());
    let pattern = antipodal_pattern(&triple, factor);
    let report = check_admissible(&system, &pattern)
        .map_err(|error| CliError::Internal(format!("engine failure: {error}")))?;
    let Some(einfinity) = report.einfinity.as_ref() else {
        return Err(CliError::Internal(format!(
            "engine rejected the antipodal pattern: {}",
            report.verdict
        )));
    };
    let engine = poincare(einfinity).coefficients().to_vec();
    let oracle = quotient_poincare(&triple, factor).coefficients().to_vec();
    let status = if engine == oracle { "pass" } else { "fail" };
    Ok(OracleRecord {
        record: "oracle".to_owned(),
        schema: crate::records::SCHEMA,
        triple: triple.into(),
        factor: factor.index(),
        status: status.to_owned(),
        engine,
        oracle,
    })
}

/// Runs `oracle` and renders it; exit code 0 on pass, 1 on mismatch.
///
/// # Errors
///
/// See [`oracle_outcome`].
pub fn oracle_check(
    n: usize,
    m: usize,
    l: usize,
    factor: usize,
    format: OutputFormat,
) -> Result<(String, u8), CliError> {
    let record = oracle_outcome(n, m, l, factor)?;
    let header = HeaderRecord::new(format!(
        "oracle --n {n} --m {m} --l {l} --factor {}",
        record.factor
    ));
    let mut out = String::new();
    match format {
        OutputFormat::Records => {
            out.push_str(&machine_line(&header)?);
            out.push('\n');
            out.push_str(&machine_line(&record)?);
            out.push('\n');
        }
        OutputFormat::Human => {
            out.push_str(&render_header_human(&header));
            out.push('\n');
            out.push_str(&render_oracle_human(&record));
        }
    }
    let code = u8::from(record.status != "pass");
    Ok((out, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_rejects_malformed_inputs_as_usage_errors() {
        for error in [
            collect_analyze(0, 1, 1, "trivial", None).unwrap_err(),
            collect_analyze(2, 1, 1, "trivial", None).unwrap_err(),
            collect_analyze(1, 2, 4, "sideways", None).unwrap_err(),
            collect_analyze(1, 2, 4, "a->b,b->a,c->c", None).unwrap_err(),
            collect_analyze(1, 2, 4, "all", Some("a->2:1")).unwrap_err(),
            collect_analyze(1, 2, 4, "trivial", Some("q->2:1")).unwrap_err(),
        ] {
            assert_eq!(error.exit_code(), 2, "{error}");
        }
    }

    #[test]
    fn analyze_streams_match_the_admissible_set() {
        let outcomes = collect_analyze(1, 2, 4, "trivial", None).unwrap();
        assert!(!outcomes.is_empty());
        let cases: Vec<Option<&str>> = outcomes
            .iter()
            .map(|outcome| match outcome {
                AnalyzeOutcome::Result(record) => record.case.as_deref(),
                AnalyzeOutcome::Rejection(_) => panic!("enumeration emits results only"),
            })
            .collect();
        assert!(cases.contains(&Some("thm3.6-1")));
        assert!(cases.contains(&Some("thm3.8-1")));
    }

    #[test]
    fn explicit_patterns_report_rejections_without_failing() {
        let outcomes =
            collect_analyze(2, 2, 5, "trivial", Some("a->3:1, b->3:1, c->2:ab")).unwrap();
        assert_eq!(outcomes.len(), 1);
        match &outcomes[0] {
            AnalyzeOutcome::Rejection(record) => {
                assert_eq!(record.verdict, "violates_leibniz");
                assert_eq!(record.witness.as_deref(), Some("t^4*(a+b)"));
            }
            AnalyzeOutcome::Result(_) => panic!("expected a rejection"),
        }
    }

    #[test]
    fn verify_gates_hypotheses_and_stored_triples() {
        let gate = verify_outcome("thm3.4-1", 1, 2, 4).unwrap_err();
        assert_eq!(gate.exit_code(), 2);
        assert!(gate.to_string().contains("n = m"), "{gate}");

        let unknown = verify_outcome("thm9.9", 1, 2, 4).unwrap_err();
        assert_eq!(unknown.exit_code(), 2);

        let unstored = verify_outcome("thm3.6-1", 1, 2, 5).unwrap_err();
        assert_eq!(unstored.exit_code(), 2);
        assert!(unstored.to_string().contains("stored triples"), "{unstored}");

        let record = verify_outcome("thm3.6-1", 1, 2, 4).unwrap();
        assert_eq!(record.status, "pass");
        assert_eq!(record.missing, []);
        assert_eq!(record.unexpected, []);
    }

    #[test]
    fn oracle_compares_engine_and_chain_model() {
        let record = oracle_outcome(1, 2, 4, 3).unwrap();
        assert_eq!(record.status, "pass");
        assert_eq!(record.engine, [1, 2, 3, 4, 4, 3, 2, 1]);
        assert_eq!(record.engine, record.oracle);

        let bad = oracle_outcome(1, 2, 4, 4).unwrap_err();
        assert_eq!(bad.exit_code(), 2);
    }
}
