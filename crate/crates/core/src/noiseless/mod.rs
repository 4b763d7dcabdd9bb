//! Strategies for noiseless responses.

mod bisection;
mod grid;
mod guess;
mod multistage;

pub use bisection::Bisection;
pub use grid::GridSearch;
pub use guess::{choose_guess_plan, GuessPlan, LargeDelta, SmallDelta};
pub use multistage::{Multistage, MultistageConfig};
