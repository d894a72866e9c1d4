// SPDX-License-Identifier: Apache-2.0

//! Library surface of the `orbits` command-line tool: reusable command
//! implementations, output records, and the embedded golden tables.
//!
//! The binary in `main.rs` only parses arguments and prints; everything it
//! does is callable from here, which is how the integration and acceptance
//! tests drive the tool without spawning processes for every check.

pub mod commands;
pub mod goldens;
pub mod records;
