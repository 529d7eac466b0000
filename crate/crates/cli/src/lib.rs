//! Library side of the `arithdeg` command: scenario schema, execution and reports.

pub mod bundled;
pub mod report;
pub mod run;
pub mod scenario;
