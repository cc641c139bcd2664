//! Harness for explain-then-translate code translation: prompt rendering,
//! model gateway with deterministic replay, per-language completion
//! truncation, sandboxed unit-test execution, pass@k metrics, explanation
//! re-ranking heuristics, and ablation tooling.

pub mod ablate;
pub mod corpus;
pub mod error;
pub mod experiment;
pub mod gateway;
pub mod lang;
pub mod metrics;
pub mod obfuscate;
pub mod postproc;
pub mod prompt;
pub mod retrieve;
pub mod runner;
pub mod select;
pub mod store;

pub use error::{Error, Result};
