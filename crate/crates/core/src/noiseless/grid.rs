use crate::session::{Session, Step};

/// Non-adaptive grid: queries `ε, 2ε, ...` below 1, then reports the midpoint
/// of the cell holding the target.
#[derive(Debug, Clone)]
pub struct GridSearch {
    eps: f64,
    points: u32,
    next: u32,
    ones: u32,
}

impl GridSearch {
    pub fn new(epsilon: f64) -> Self {
        GridSearch { eps: epsilon, points: grid_points(epsilon), next: 0, ones: 0 }
    }

    pub fn points(&self) -> u32 {
        self.points
    }
}

/// `⌈1/ε⌉ − 1`.
pub fn grid_points(eps: f64) -> u32 {
    let mut n = libm::ceil(1.0 / eps) as u32;
    while n > 1 && (n - 1) as f64 * eps >= 1.0 {
        n -= 1;
    }
    while (n as f64) * eps < 1.0 {
        n += 1;
    }
    n - 1
}

impl Session for GridSearch {
    fn step(&mut self) -> Step {
        if self.next < self.points {
            Step::Query((self.next + 1) as f64 * self.eps)
        } else {
            let lo = self.ones as f64 * self.eps;
            let hi = ((self.ones + 1) as f64 * self.eps).min(1.0);
            Step::Done((lo + hi) / 2.0)
        }
    }

    fn respond(&mut self, response: bool) {
        self.next += 1;
        self.ones += response as u32;
    }

    fn coin(&mut self, _value: u32) {
        debug_assert!(false, "grid search never asks for coins");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::NoiseModel;
    use crate::session::drive;
    use crate::{SeedSpec, Stream};
    use alloc::vec;

    fn run(eps: f64, x: f64) -> crate::Transcript {
        let s = SeedSpec::new(0, 0);
        drive(&mut GridSearch::new(eps), x, NoiseModel::Noiseless, &mut s.rng(Stream::Noise), &mut s.rng(Stream::Coins))
    }

    #[test]
    fn quarter_grid() {
        for x in [0.0, 0.1, 0.6, 1.0] {
            assert_eq!(run(0.25, x).queries, vec![0.25, 0.5, 0.75]);
        }
        assert_eq!(run(0.25, 0.6).estimate, Some(0.625));
    }

    #[test]
    fn half_grid() {
        assert_eq!(run(0.5, 0.2).queries, vec![0.5]);
    }

    #[test]
    fn non_reciprocal_eps() {
        assert_eq!(grid_points(0.3), 3);
        let t = run(0.3, 0.95);
        assert!((t.estimate.unwrap() - 0.95).abs() <= 0.15);
    }
}
