//! Front end for the `incibraid` binary: file formats, run reports and the
//! `check`, `family` and `search` commands.

pub mod commands;
pub mod format;
pub mod report;

pub use commands::{run_check, run_family, run_search, CheckKind, CliError, FamilyArgs, SearchArgs};
pub use report::RunReport;
