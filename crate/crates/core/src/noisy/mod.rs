//! Strategies for responses that are flipped with probability `1 − p`.

mod belief;
mod bz;
mod multistage;

pub use belief::BeliefGrid;
pub use bz::{bz_alpha, bz_run};
pub use multistage::{mle_subinterval, NoisyMultistage, NoisyStageConfig, Variant};
