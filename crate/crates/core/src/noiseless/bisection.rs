use crate::interval::Interval;
use crate::math::halvings_to;
use crate::session::{Session, Step};

/// Plain bisection until the interval is at most `epsilon` wide.
#[derive(Debug, Clone)]
pub struct Bisection {
    iv: Interval,
    left: u32,
}

impl Bisection {
    pub fn new(epsilon: f64) -> Self {
        Self::on(Interval::UNIT, halvings_to(1.0, epsilon))
    }

    /// `steps` halvings of `iv`.
    pub fn on(iv: Interval, steps: u32) -> Self {
        Bisection { iv, left: steps }
    }

    pub fn interval(&self) -> Interval {
        self.iv
    }
}

impl Session for Bisection {
    fn step(&mut self) -> Step {
        if self.left == 0 {
            Step::Done(self.iv.midpoint())
        } else {
            Step::Query(self.iv.midpoint())
        }
    }

    fn respond(&mut self, response: bool) {
        let mid = self.iv.midpoint();
        if response {
            self.iv.lo = mid;
        } else {
            self.iv.hi = mid;
        }
        self.left -= 1;
    }

    fn coin(&mut self, _value: u32) {
        debug_assert!(false, "bisection never asks for coins");
    }
}
