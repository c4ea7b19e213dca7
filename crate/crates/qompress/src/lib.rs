//! Front end for the multi-level CZ library: document parsing, seeded
//! sampling, the reproducible claims and report rendering.

pub mod claims;
pub mod docs;
pub mod report;
pub mod sampling;
pub mod verify;
