//! Scenario runner around the waveqc-core simulators.
//!
//! A run is described by a TOML config (strictly validated: unknown keys are
//! rejected), executes deterministically for a fixed seed, and leaves behind
//! CSV/JSON artifacts plus a manifest echoing the resolved configuration.

// Negated float comparisons like `!(x > 0.0)` are deliberate: they reject NaN
// along with out-of-range values in one check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::manual_is_multiple_of)]

pub mod config;
pub mod envelope_io;
pub mod output;
pub mod scenarios;
pub mod sweep;

pub const TOOL_NAME: &str = "waveqc";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit codes of the command-line interface.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    /// An embedded scenario assertion failed (or a tuple was infeasible).
    pub const ASSERTION_FAILURE: i32 = 1;
    /// Bad usage, malformed config, or an environment/IO problem.
    pub const USAGE_OR_CONFIG: i32 = 2;
}
