//! Library side of the `sigma3` command-line tool: subject resolution,
//! reports and verification suites.

pub mod report;
pub mod subject;
pub mod suites;

pub use report::{build_report, Report};
pub use subject::{resolve, Caps, Resolved, Subject};
pub use suites::{run_suite, Status, SuiteOptions, SuiteResult, SUITES};
