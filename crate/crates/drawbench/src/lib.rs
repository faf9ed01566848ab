//! File formats, model clients, the two-turn harness and reporting.

pub mod aggregate;
pub mod client;
pub mod harness;
pub mod http;
pub mod io;
pub mod prompt;
pub mod report;
