//! Experiment harness around the `splitquad` library.
//!
//! Two batch experiments, both emitted as CSV:
//! - `flatpanel`: accuracy map of the kernel-split single-layer evaluation
//!   over a flat panel, as a function of the decay parameter α and the
//!   panel length h, against an adaptive reference quadrature;
//! - `annulus`: a Dirichlet problem on an annulus solved with the Nyström
//!   method, comparing the plain kernel-split scheme against the
//!   per-target subdivision variant for accuracy and assembly cost.
//!
//! A `selftest` mode runs quick internal consistency checks.

pub mod annulus;
pub mod config;
pub mod csvfmt;
pub mod flatpanel;
pub mod selftest;

/// Harness-level errors, split by exit code: invalid configuration (1)
/// versus numerical failure of an oracle or solver (2).
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}
