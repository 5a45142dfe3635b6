//! Command-line front end: system files, reports and the CLI verbs.

pub mod commands;
pub mod report;
pub mod system_file;
