// SPDX-License-Identifier: Apache-2.0

//! Embedded golden tables: the expected outcome summaries for every catalog
//! case, keyed by case token and sphere triple.
//!
//! The tables were expanded by hand from the catalog's closed forms and
//! frozen before the engine existed, so they diff the engine against an
//! independent transcription rather than against itself. Each entry lists the
//! complete set of distinct summaries the case admits at that triple.

use std::collections::BTreeMap;

use anyhow::{bail, Context};
use serde::Deserialize;

use crate::records::SummaryRecord;

/// The golden tables compiled into the binary.
const RAW_CASES: &str = include_str!("../goldens/cases.json");

/// Version of the golden-file layout this build understands.
const GOLDEN_SCHEMA: u32 = 1;

#[derive(Debug, Deserialize)]
struct GoldenFile {
    schema: u32,
    cases: BTreeMap<String, GoldenCase>,
}

#[derive(Debug, Deserialize)]
struct GoldenCase {
    triples: BTreeMap<String, Vec<SummaryRecord>>,
}

/// Parsed golden tables.
#[derive(Debug)]
pub struct GoldenStore {
    file: GoldenFile,
}

impl GoldenStore {
    /// Parses the embedded tables.
    ///
    /// # Errors
    ///
    /// When the embedded JSON is unreadable or uses a different schema
    /// version; both indicate a broken build rather than user error.
    pub fn load() -> anyhow::Result<Self> {
        let file: GoldenFile =
            serde_json::from_str(RAW_CASES).context("embedded golden tables are unreadable")?;
        if file.schema != GOLDEN_SCHEMA {
            bail!(
                "golden tables use schema {}, this build expects {}",
                file.schema,
                GOLDEN_SCHEMA
            );
        }
        Ok(Self { file })
    }

    /// Stored summaries for a case at a triple, if any.
    #[must_use]
    pub fn lookup(&self, case: &str, n: usize, m: usize, l: usize) -> Option<&[SummaryRecord]> {
        let key = format!("{n},{m},{l}");
        self.file
            .cases
            .get(case)?
            .triples
            .get(&key)
            .map(Vec::as_slice)
    }

    /// All case tokens present in the tables, sorted.
    pub fn case_tokens(&self) -> impl Iterator<Item = &str> {
        self.file.cases.keys().map(String::as_str)
    }

    /// Triples stored for one case, in table order.
    #[must_use]
    pub fn triples_for(&self, case: &str) -> Vec<(usize, usize, usize)> {
        let Some(entry) = self.file.cases.get(case) else {
            return Vec::new();
        };
        entry
            .triples
            .keys()
            .filter_map(|key| {
                let mut parts = key.split(',').map(str::parse::<usize>);
                match (parts.next(), parts.next(), parts.next(), parts.next()) {
                    (Some(Ok(n)), Some(Ok(m)), Some(Ok(l)), None) => Some((n, m, l)),
                    _ => None,
                }
            })
            .collect()
    }
}
