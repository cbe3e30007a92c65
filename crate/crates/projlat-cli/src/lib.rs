//! Command-line companion to the projection-lattice library: JSON file
//! formats, seeded fixture generation, and the deterministic check suites
//! behind the `projlat` binary.

pub mod fixtures;
pub mod formats;
pub mod suites;

pub use suites::{run_suites, CheckRecord, Report, Suite, SuiteConfig};
