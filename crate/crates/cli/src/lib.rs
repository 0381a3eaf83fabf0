//! Library behind the `dismantle` binary: reports, corpus and commands.

pub mod commands;
pub mod corpus;
pub mod report;
