//! Exact enumeration of permutations by circular peak set.
//!
//! A value `σ(i)` of a permutation in one-line notation is a *circular peak*
//! when `σ(i-1) < σ(i) > σ(i+1)` at an interior position. For a set `S`,
//! `cp_n(S)` counts the permutations of `[n]` whose circular peak set equals
//! `S` exactly. This crate computes `cp_n(S)` by several independent routes
//! and cross-checks them against each other and a brute-force oracle:
//!
//! - [`oracle`] — exhaustive enumeration of `S_n` (ground truth, small `n`);
//! - [`closed_forms`] — explicit formulas for `|S| <= 2` and for tail runs
//!   `[n-k+1, n]`, driven by exact-rational coefficient triangles;
//! - [`recurrences`] — subset dynamic programming over full count tables;
//! - [`genfunc`] — a formal multivariate generating-function recursion;
//! - [`paths`] — weighted lattice paths and the general run-stripping
//!   formula, giving a fast single-entry route at any scale.
//!
//! All counts are exact big integers; all coefficient arithmetic is exact
//! rational.

pub mod closed_forms;
pub mod genfunc;
pub mod oracle;
pub mod paths;
pub mod perm;
pub mod recurrences;
pub mod table;
pub mod table3;
pub mod verify;

pub use num_bigint::BigUint;
pub use num_rational::BigRational;
pub use perm::{PeakSet, Permutation, Run, RunDecomposition};
pub use table::{CountTable, SetKey};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid peak set: {0}")]
    InvalidPeakSet(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("scale limit exceeded: {0}")]
    ScaleLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn env_limit(var: &str, default: u32, min: u32, max: u32) -> u32 {
    match std::env::var(var) {
        Ok(v) => match v.trim().parse::<u32>() {
            Ok(n) => n.clamp(min, max),
            Err(_) => default,
        },
        Err(_) => default,
    }
}

/// Largest order accepted by the brute-force oracle. Defaults to 9
/// (sub-second); can be raised via `CIRCPEAK_ORACLE_LIMIT` up to the hard
/// cap of 12, beyond which a full pass over `S_n` takes minutes.
pub fn oracle_limit() -> u32 {
    env_limit(
        "CIRCPEAK_ORACLE_LIMIT",
        oracle::DEFAULT_ORACLE_LIMIT,
        3,
        oracle::ORACLE_HARD_CAP,
    )
}

/// Largest order accepted by the table-building routes (DP and generating
/// function). Defaults to 20; can be adjusted via `CIRCPEAK_DP_LIMIT` up to
/// the hard cap of 24.
pub fn dp_limit() -> u32 {
    env_limit(
        "CIRCPEAK_DP_LIMIT",
        recurrences::DEFAULT_DP_LIMIT,
        3,
        recurrences::DP_HARD_CAP,
    )
}
