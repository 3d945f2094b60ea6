//! Exact computation and exhaustive desk-scale verification of zero-sum
//! invariants over finite Abelian groups.
//!
//! Everything here is exact integer arithmetic. Groups are given by their
//! invariant factors `C_{n_1} ⊕ … ⊕ C_{n_r}` (with `n_1 | … | n_r`),
//! sequences are finite multisets of group elements, and the classical
//! zero-sum machinery is implemented as witness-producing procedures:
//!
//! * [`group`] — group arithmetic, canonicalization of cyclic
//!   decompositions, basis and generating-pair enumeration.
//! * [`sequence`] — the sequence calculus: sums, the exact zero-sum length
//!   spectrum (a subset-sum dynamic program over `(group element, length)`
//!   states), and the classification predicates (zero-sumfree, minimal
//!   zero-sum, normal, dispersive, `0^i T` shape).
//! * [`enumeration`] — canonical pruned enumeration of sequences and exact
//!   computation of the Davenport constant `D(G)`, its lower bound `D*(G)`,
//!   and the invariants `s_mN(G)` and `η_{ℓm}(G)`, each with an extremal
//!   witness.
//! * [`theorems`] — exhaustive sweeps for the structure theorems on normal
//!   and dispersive sequences, Property B, Schmid's characterization of
//!   maximal-length minimal zero-sum sequences over rank-two groups, and a
//!   constructive Alon–Friedland–Kalai subset finder.
//! * [`nullstellensatz`] — the Combinatorial Nullstellensatz route to
//!   residue-avoiding zero-sum subsequences over elementary p-groups, built
//!   as an evaluable polynomial plus a support-pattern witness search.
//! * [`report`] / [`cli`] — byte-stable report emission (JSON/CSV/text),
//!   run manifests, and the command-line front end.
//!
//! Every runnable capability has a corresponding example under `examples/`;
//! start with `cargo run --example davenport`.

pub mod cli;
pub mod enumeration;
pub mod group;
pub mod nullstellensatz;
pub mod report;
pub mod sequence;
pub mod theorems;

pub(crate) mod walk;

use std::fmt;

pub use group::{Basis, FiniteAbelianGroup, GroupElement};
pub use sequence::{Sequence, ZeroSumProfile};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The trivial group (empty factor list) is not constructible publicly.
    #[error("the trivial group cannot be constructed; every factor list must multiply to at least 2")]
    TrivialGroup,

    /// A cyclic factor below 2 was supplied.
    #[error("invalid cyclic factor {0}: factors must be at least 2")]
    InvalidFactor(u64),

    /// An element with the wrong number of coordinates was used.
    #[error("rank mismatch: expected {expected} coordinates, got {got}")]
    RankMismatch { expected: usize, got: usize },

    /// An element of one group was combined with a different group.
    #[error("element does not belong to this group")]
    GroupMismatch,

    /// A configured ceiling was exceeded. `what` names the bound and carries
    /// partial-progress statistics where available.
    #[error("resource ceiling exceeded: {what} (limit {limit})")]
    ResourceLimit { what: String, limit: u64 },

    /// A stated precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A caller-supplied Davenport constant is contradicted by the data:
    /// a sequence at least that long has no non-empty zero-sum subsequence.
    #[error("inconsistent Davenport constant {davenport}: {sequence} has length {length} but no non-empty zero-sum subsequence")]
    InconsistentDavenport {
        davenport: u64,
        sequence: String,
        length: u64,
    },

    /// A proved statement failed on a concrete instance. This signals an
    /// implementation bug, never a mathematical discovery, and aborts runs.
    #[error("soundness alarm: {0}")]
    SoundnessAlarm(String),

    /// A literal (group, element, sequence, or flag value) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Configurable ceilings. Defaults keep every supported computation far
/// below desk-scale limits while failing loudly instead of truncating.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Elementary-step bound `|G|·|S|²` for the zero-sum profile DP.
    pub dp_steps: u64,
    /// Node bound for exhaustive searches and sweeps.
    pub search_nodes: u64,
    /// Largest group order admitted to basis / generating-pair enumeration.
    pub basis_group_order: u64,
    /// Largest group order admitted to exhaustive sequence walks
    /// (bounded by the `|G|²` addition table).
    pub walk_group_order: u64,
    /// Largest vector count for subset searches (2^m supports / index sets).
    pub subset_search_bits: u32,
    /// Plain subset search switches to meet-in-the-middle beyond 2^this.
    pub mitm_threshold_bits: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            dp_steps: 100_000_000,
            search_nodes: 100_000_000,
            basis_group_order: 1024,
            walk_group_order: 4096,
            subset_search_bits: 24,
            mitm_threshold_bits: 20,
        }
    }
}

/// Execution knobs threaded through searches and sweeps.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    /// Worker threads for sharded sweeps; 0 uses the global default pool.
    /// Results are merged in canonical order, so reports are identical for
    /// every thread count.
    pub threads: usize,
    pub limits: Limits,
    /// Emit progress lines to stderr every million nodes.
    pub progress: bool,
}

impl RunConfig {
    pub fn with_threads(threads: usize) -> Self {
        RunConfig {
            threads,
            ..Default::default()
        }
    }
}

/// Which kind of statement a sweep checks. A counterexample to a theorem is
/// an implementation bug (soundness alarm); a counterexample to a conjecture
/// is a finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatementKind {
    Theorem,
    Conjecture,
}

/// The statements the sweep front end knows about. Tokens double as CLI
/// subcommand arguments and as the `statement` field of reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statement {
    /// Over a p-group, every normal sequence of length D(G)+i−1 with
    /// 1 ≤ i ≤ p−1 is 0^i·T with T zero-sumfree.
    Theorem3,
    /// Rank-two analogue: over C_m ⊕ C_mn with m satisfying Property B,
    /// every normal sequence of length D(G)+i−1 with 1 ≤ i ≤ m−1 is 0^i·T.
    Theorem4,
    /// Over a p-group, every sequence of length D(G)+i−1 with 1 ≤ i ≤ p has
    /// a non-empty zero-sum subsequence whose length avoids, mod p, each
    /// residue of a prescribed (i−1)-subset of [1, p−1].
    Theorem5,
    /// Dispersive consequences: with |S| = D(G)+i−1, (i) if i ≥ 2 and some
    /// zero-sum length is not divisible by p then S is dispersive; (ii) if
    /// no zero-sum length is divisible by p then i ≤ p−1 and S has at least
    /// i distinct zero-sum lengths.
    Corollary7,
    /// Schmid's characterization of maximal-length minimal zero-sum
    /// sequences over C_m ⊕ C_mn (given Property B for m): every such
    /// sequence matches a basis form or a generating-pair form.
    Theorem8,
    /// With T zero-sumfree of length D(G)−1, U non-empty supported inside
    /// Supp(T), and m satisfying Property B, every non-empty zero-sum
    /// subsequence of TU has length at least m.
    Theorem12,
    /// Gao's conjecture: over any G, every normal sequence of length
    /// D(G)+i−1 with 1 ≤ i ≤ n_1−1 is 0^i·T with T zero-sumfree.
    Conjecture1,
    /// Residue avoidance mod n_1 over any G: with |S| = D(G)+i−1 and A an
    /// (i−1)-subset of [1, n_1−1], some non-empty zero-sum subsequence has
    /// length avoiding every residue of A mod n_1.
    Conjecture10,
    /// With |S| = η_{ℓm}(G)+i−1 and 1 ≤ i ≤ ℓm, some zero-sum subsequence
    /// has length in [i, ℓm].
    Conjecture11,
    /// Property B for n: every minimal zero-sum sequence of length 2n−1
    /// over C_n ⊕ C_n repeats some element n−1 times.
    PropertyB,
}

impl Statement {
    pub fn token(&self) -> &'static str {
        match self {
            Statement::Theorem3 => "theorem3",
            Statement::Theorem4 => "theorem4",
            Statement::Theorem5 => "theorem5",
            Statement::Corollary7 => "corollary7",
            Statement::Theorem8 => "theorem8",
            Statement::Theorem12 => "theorem12",
            Statement::Conjecture1 => "conj1",
            Statement::Conjecture10 => "conj10",
            Statement::Conjecture11 => "conj11",
            Statement::PropertyB => "property-b",
        }
    }

    pub fn kind(&self) -> StatementKind {
        match self {
            Statement::Theorem3
            | Statement::Theorem4
            | Statement::Theorem5
            | Statement::Corollary7
            | Statement::Theorem8
            | Statement::Theorem12 => StatementKind::Theorem,
            Statement::Conjecture1
            | Statement::Conjecture10
            | Statement::Conjecture11
            | Statement::PropertyB => StatementKind::Conjecture,
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}
