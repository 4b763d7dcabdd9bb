//! Learner-private sequential search.
//!
//! A learner locates an unknown target `X* ∈ [0,1]` (or `[0,1]^d`) by asking
//! threshold questions "is `X* ≥ q`?" while an eavesdropper who sees the
//! queries, but not the answers, tries to localize the target too. This crate
//! holds the pure algorithmic side of that problem:
//!
//! - querying strategies for noiseless responses ([`noiseless`]): bisection,
//!   grid search, replicated bisection, the staged Bayesian strategy and the
//!   two guess-planting strategies for the deterministic setting;
//! - the Burnashev-Zigangirov belief-grid search and the staged private
//!   strategy for noisy responses ([`noisy`]);
//! - per-coordinate composition in `d` dimensions ([`multidim`]);
//! - attack estimators that only see the query sequence ([`adversary`]);
//! - exact information-set privacy checks and Monte Carlo breach estimates
//!   ([`privacy`]);
//! - closed-form query-complexity bounds ([`bounds`]).
//!
//! Every strategy is a resumable state machine implementing [`Session`]; a
//! driver feeds it oracle responses and coin flips. All randomness is derived
//! from a [`SeedSpec`], so every trial is a pure function of
//! `(master_seed, trial_index)`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adversary;
pub mod bounds;
mod error;
pub mod interval;
pub mod math;
pub mod multidim;
pub mod noiseless;
pub mod noisy;
pub mod oracle;
pub mod params;
pub mod privacy;
pub mod seed;
pub mod session;
pub mod strategy;
pub mod transcript;
pub mod trial;
pub mod worked;

pub use error::Error;
pub use interval::{covering_number, Interval};
pub use oracle::{NoiseModel, TargetModel};
pub use params::{ProblemParams, Setting};
pub use seed::{SeedSpec, Stream};
pub use session::{drive, Session, Step};
pub use strategy::Strategy;
pub use transcript::Transcript;

pub type Result<T, E = Error> = core::result::Result<T, E>;
