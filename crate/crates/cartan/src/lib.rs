//! Command-line verification harness for `cartan-core`: seeded suites with
//! JSON reports, element inspection and the JSON element format.

pub mod inspect;
pub mod json;
pub mod report;
pub mod suites;
