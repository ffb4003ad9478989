//! Exact verification of power-sum identities.
//!
//! The crate evaluates `h(p, k) = Σ_{s≤k} s^p` several independent ways,
//! recovers Bernoulli numbers by comparing two closed forms of `h`, checks
//! identities between the exponential power sums `Σ_{s<k} s^p e^{±2πims/k}`
//! exactly in cyclotomic rings, and runs a double-precision check of an
//! identity linking `L(r, χ)` to Gauss sums.
//!
//! Module map:
//!
//! - [`exact`]: rationals, binomials, polynomials, `Q[x]/Φ_k`
//! - [`compositions`]: compositions, decreasing chains, series coefficients
//! - [`power_sums`]: `h(p, k)` four ways
//! - [`bernoulli`]: oracle and retrieval of `B_n`
//! - [`exp_sums`]: exponential power sums and their identities
//! - [`dirichlet`]: characters, Gauss sums, `L(r, χ)`
//! - [`verify`], [`report`]: sweeps and their output
//! - [`cli`]: the `powsum` command line

pub mod bernoulli;
pub mod cli;
pub mod compositions;
pub mod dirichlet;
pub mod exact;
pub mod exp_sums;
pub mod power_sums;
pub mod report;
pub mod verify;
