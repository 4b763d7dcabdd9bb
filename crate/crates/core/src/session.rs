use rand::Rng;

use crate::oracle::{answer, NoiseModel};
use crate::transcript::Transcript;

/// What a session wants next.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Query(f64),
    /// A uniform draw from `0..n`; fake bits use `n = 2`.
    Coin(u32),
    Done(f64),
}

/// A learner strategy as a resumable state machine.
///
/// The driver calls [`Session::step`]; after `Query` it must call
/// [`Session::respond`], after `Coin(n)` it must call [`Session::coin`].
/// `step` is idempotent until the request has been answered.
pub trait Session {
    fn step(&mut self) -> Step;
    fn respond(&mut self, response: bool);
    fn coin(&mut self, value: u32);
}

/// Runs `session` against `target` to completion.
pub fn drive<S, N, C>(session: &mut S, target: f64, noise: NoiseModel, noise_rng: &mut N, coin_rng: &mut C) -> Transcript
where
    S: Session + ?Sized,
    N: Rng + ?Sized,
    C: Rng + ?Sized,
{
    let mut t = Transcript::new();
    loop {
        match session.step() {
            Step::Query(q) => {
                let r = answer(q, target, noise, noise_rng);
                t.push(q, r);
                session.respond(r);
            }
            Step::Coin(n) => {
                let c = coin_rng.gen_range(0..n);
                session.coin(c);
            }
            Step::Done(x) => {
                t.set_estimate(x);
                return t;
            }
        }
    }
}
