//! Witness-producing verifiers and exhaustive falsification sweeps for the
//! structure theory of zero-sum sequences.
//!
//! Each sweep enumerates the full canonical grid for its statement and
//! returns a [`VerificationReport`]: either `verified` (after recounting
//! the grid against the stars-and-bars closed form) or a list of concrete
//! counterexamples. A counterexample to a theorem is treated as an
//! implementation bug and surfaces as a soundness alarm at the command
//! line; a counterexample to a conjecture is a reportable finding.

pub mod afk;
pub mod schmid;
pub mod sweeps;

pub use afk::{AfkInstance, AfkSolution, AfkStrategy};
pub use schmid::{generate_schmid, match_schmid, schmid_forms, SchmidForm};
pub use sweeps::{
    property_b, sweep_conjecture1, sweep_conjecture10, sweep_conjecture11, sweep_corollary7,
    sweep_theorem12, sweep_theorem3, sweep_theorem4, sweep_theorem5, sweep_theorem8_converse,
    verify_theorem12, verify_theorem5,
};

use crate::{Statement, StatementKind};

/// Outcome of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// The full declared grid was exhausted with zero exceptions.
    Verified,
    /// At least one instance violated the statement.
    CounterexampleFound,
}

impl Outcome {
    pub fn token(&self) -> &'static str {
        match self {
            Outcome::Verified => "verified",
            Outcome::CounterexampleFound => "counterexample",
        }
    }
}

/// One offending instance: the sequence (canonical literal) and which
/// clause it violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub sequence: String,
    pub clause: String,
}

/// Machine-readable outcome of a statement sweep.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub statement: Statement,
    pub group: String,
    /// Parameter grid, as ordered key/value pairs.
    pub params: Vec<(String, serde_json::Value)>,
    pub outcome: Outcome,
    pub counterexamples: Vec<Counterexample>,
    pub instances_checked: u64,
    pub nodes: u64,
    pub millis: u128,
}

impl VerificationReport {
    pub fn kind(&self) -> StatementKind {
        self.statement.kind()
    }

    pub fn is_verified(&self) -> bool {
        self.outcome == Outcome::Verified
    }
}
