//! Presentation parsing, suite runner and reports behind the `wittkit` binary.

mod parse;
mod report;
mod suites;

pub use parse::{format_poly, parse_presentation, Built, Kind, Presentation};
pub use report::{Exclusion, Params, Report, Section, SCHEMA_VERSION};
pub use suites::{run_suite, run_suite_timed, GRASSMANNIAN_EXCLUSION, SUITES};
