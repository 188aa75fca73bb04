//! Quantitative information-leakage analysis for finite channels.
//!
//! The library answers questions of the form: an adversary observes the
//! output Y of a known channel P(Y|X) with a known prior on the secret X.
//! How much better can it guess X (or any function of X) after seeing Y than
//! before? The answers are expressed as leakage measures in nats, built from
//! Renyi divergence, Sibson and Arimoto mutual information, and expected-gain
//! comparisons. A multi-guess layer covers adversaries that get k attempts
//! instead of one, with closed-form optimal strategies and certificates.
//!
//! Organization:
//! - [`prob`]: alphabets, pmfs, channels, joint distributions, tilting.
//! - [`info`]: entropies, divergences, mutual informations, the Bregman
//!   generator used by multi-guess regret analysis.
//! - [`gain`]: gain functions on [0,1], their structural properties, and
//!   single-guess maximal expected gain.
//! - [`leakage`]: maximal leakage and its gain-function, pointwise,
//!   opportunistic, and realizable variants.
//! - [`guess`]: k-guess adversaries, optimal guess vectors, admissibility,
//!   strategy decomposition, and k-guess leakage.
//! - [`oracle`]: slow independent reference implementations (grid searches,
//!   projected gradient, LP feasibility) used to certify the fast paths.
//! - [`verify`]: seeded end-to-end check suites shared by the test harness
//!   and the CLI.
//! - [`exact`]: rational-arithmetic reproduction of the built-in worked
//!   reference cases.
//! - [`io`]: JSON/CSV ingestion of priors, channels, and joints.

pub mod error;
pub mod exact;
pub mod gain;
pub mod guess;
pub mod info;
pub mod io;
pub mod leakage;
mod opt;
pub mod oracle;
pub mod prob;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
