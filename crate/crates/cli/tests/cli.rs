// SPDX-License-Identifier: Apache-2.0

//! End-to-end tests that drive the compiled `orbits` binary.

use std::process::{Command, Output};

use orbits_cli::records::{HeaderRecord, ResultRecord, VerifyRecord, SCHEMA};

fn orbits(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbits"))
        .args(args)
        .env_remove("ORBITS_FORMAT")
        .output()
        .expect("binary runs")
}

fn orbits_with_env(args: &[&str], format: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbits"))
        .args(args)
        .env("ORBITS_FORMAT", format)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn analyze_streams_typed_records_with_a_versioned_header() {
    let output = orbits(&[
        "analyze", "--n", "1", "--m", "2", "--l", "4", "--format", "records",
    ]);
    assert_eq!(exit_code(&output), 0, "{}", stderr(&output));
    let text = stdout(&output);
    let mut lines = text.lines();

    let header: HeaderRecord =
        serde_json::from_str(lines.next().expect("header line")).expect("header parses");
    assert_eq!(header.record, "header");
    assert_eq!(header.schema, SCHEMA);
    assert_eq!(header.tool, "orbits");
    assert!(header.command.contains("analyze --n 1 --m 2 --l 4"));

    let records: Vec<ResultRecord> = lines
        .map(|line| serde_json::from_str(line).expect("result parses"))
        .collect();
    assert!(!records.is_empty());
    for record in &records {
        assert_eq!(record.schema, SCHEMA);
        assert_eq!(record.verdict, "admissible");
        assert_eq!(
            (record.triple.n, record.triple.m, record.triple.l),
            (1, 2, 4)
        );
        let round_trip: ResultRecord =
            serde_json::from_str(&serde_json::to_string(record).unwrap()).unwrap();
        assert_eq!(&round_trip, record);
    }
    assert!(records.iter().any(|r| r.case.as_deref() == Some("thm3.6-1")));
    assert!(records.iter().any(|r| r.case.as_deref() == Some("thm3.8-1")));
}

#[test]
fn identical_invocations_produce_byte_identical_output() {
    let args = [
        "analyze", "--n", "2", "--m", "2", "--l", "2", "--action", "all", "--format", "records",
    ];
    let first = orbits(&args);
    let second = orbits(&args);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn environment_variable_selects_the_format_and_the_flag_wins() {
    let env_only = orbits_with_env(&["oracle", "--n", "1", "--m", "2", "--l", "4", "--factor", "1"], "records");
    assert_eq!(exit_code(&env_only), 0);
    assert!(stdout(&env_only).starts_with('{'), "env selects records");

    let flag_wins = orbits_with_env(
        &[
            "oracle", "--n", "1", "--m", "2", "--l", "4", "--factor", "1", "--format", "human",
        ],
        "records",
    );
    assert_eq!(exit_code(&flag_wins), 0);
    assert!(
        stdout(&flag_wins).starts_with("orbits "),
        "flag overrides env"
    );
}

#[test]
fn every_emitted_record_replays_to_itself() {
    let output = orbits(&[
        "analyze", "--n", "1", "--m", "2", "--l", "2", "--action", "all", "--format", "records",
    ]);
    assert_eq!(exit_code(&output), 0, "{}", stderr(&output));
    let text = stdout(&output);
    let records: Vec<ResultRecord> = text
        .lines()
        .skip(1)
        .map(|line| serde_json::from_str(line).expect("result parses"))
        .collect();
    assert!(!records.is_empty());
    for record in &records {
        let replay = orbits(&[
            "analyze",
            "--n",
            "1",
            "--m",
            "2",
            "--l",
            "2",
            "--action",
            &record.action,
            "--pattern",
            &record.pattern,
            "--format",
            "records",
        ]);
        assert_eq!(exit_code(&replay), 0, "{}", stderr(&replay));
        let replay_text = stdout(&replay);
        let replayed: Vec<ResultRecord> = replay_text
            .lines()
            .skip(1)
            .map(|line| serde_json::from_str(line).expect("replay parses"))
            .collect();
        assert_eq!(replayed.len(), 1, "one pattern yields one record");
        assert_eq!(&replayed[0], record);
    }
}

#[test]
fn verify_passes_on_stored_triples_and_rejects_bad_requests() {
    let pass = orbits(&["verify", "thm3.6-1", "--n", "1", "--m", "2", "--l", "4"]);
    assert_eq!(exit_code(&pass), 0, "{}", stderr(&pass));
    assert!(stdout(&pass).contains("PASS"));

    let records = orbits(&[
        "verify", "thm3.8-1", "--n", "2", "--m", "3", "--l", "6", "--format", "records",
    ]);
    assert_eq!(exit_code(&records), 0, "{}", stderr(&records));
    let line = stdout(&records).lines().nth(1).unwrap().to_owned();
    let record: VerifyRecord = serde_json::from_str(&line).expect("verify record parses");
    assert_eq!(record.status, "pass");
    assert!(record.missing.is_empty() && record.unexpected.is_empty());
    assert!(!record.expected.is_empty());

    let hypothesis = orbits(&["verify", "thm3.4-1", "--n", "1", "--m", "2", "--l", "4"]);
    assert_eq!(exit_code(&hypothesis), 2);
    assert!(stderr(&hypothesis).contains("n = m"), "{}", stderr(&hypothesis));

    let unknown = orbits(&["verify", "thm9.9", "--n", "1", "--m", "2", "--l", "4"]);
    assert_eq!(exit_code(&unknown), 2);

    let unstored = orbits(&["verify", "thm3.6-1", "--n", "1", "--m", "2", "--l", "5"]);
    assert_eq!(exit_code(&unstored), 2);
    assert!(stderr(&unstored).contains("stored triples"));
}

#[test]
fn usage_errors_exit_with_code_two() {
    let bad_triple = orbits(&["analyze", "--n", "0", "--m", "1", "--l", "1"]);
    assert_eq!(exit_code(&bad_triple), 2);

    let unordered = orbits(&["analyze", "--n", "3", "--m", "2", "--l", "4"]);
    assert_eq!(exit_code(&unordered), 2);

    let bad_factor = orbits(&["oracle", "--n", "1", "--m", "2", "--l", "4", "--factor", "4"]);
    assert_eq!(exit_code(&bad_factor), 2);
    assert!(stderr(&bad_factor).contains("factor"), "{}", stderr(&bad_factor));

    let missing_args = orbits(&["analyze", "--n", "1"]);
    assert_eq!(exit_code(&missing_args), 2);
}

#[test]
fn human_output_renders_aligned_dimension_tables() {
    let analyze = orbits(&["analyze", "--n", "1", "--m", "2", "--l", "4"]);
    assert_eq!(exit_code(&analyze), 0);
    let text = stdout(&analyze);
    assert!(text.contains("degree |"));
    assert!(text.contains("dim    |"));
    assert!(text.contains("admissible record(s)"));

    let oracle = orbits(&["oracle", "--n", "1", "--m", "2", "--l", "4", "--factor", "3"]);
    assert_eq!(exit_code(&oracle), 0);
    let text = stdout(&oracle);
    assert!(text.contains("engine |"));
    assert!(text.contains("oracle |"));
    assert!(text.contains("PASS"));
}

#[test]
fn rejection_runs_still_exit_cleanly_and_carry_the_witness() {
    let output = orbits(&[
        "analyze",
        "--n",
        "2",
        "--m",
        "2",
        "--l",
        "5",
        "--pattern",
        "a->3:1, b->3:1, c->2:ab",
        "--format",
        "records",
    ]);
    assert_eq!(exit_code(&output), 0, "{}", stderr(&output));
    let text = stdout(&output);
    let line = text.lines().nth(1).expect("rejection line");
    assert!(line.contains("\"record\":\"rejection\""));
    assert!(line.contains("\"verdict\":\"violates_leibniz\""));
    assert!(line.contains("t^4*(a+b)"));
}
