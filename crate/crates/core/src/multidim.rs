//! `d`-dimensional search by running a 1-D strategy on every coordinate with
//! privacy level `⌈L^{1/d}⌉`.
//!
//! Coordinates are searched one after another, each with its own coin and
//! noise streams, so the queries on coordinate `i` depend only on the
//! responses about coordinate `i`. The candidate cells of the coordinates
//! multiply into `⌈γ⌉^d ≥ L` candidate boxes.

use crate::noiseless::MultistageConfig;
use crate::params::{per_dim_l, ProblemParams, Setting};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimPlan {
    pub d: u32,
    /// `L^{1/d}`.
    pub gamma: f64,
    /// `⌈γ⌉`.
    pub per_dim_l: u32,
}

impl DimPlan {
    pub fn new(params: &ProblemParams) -> Self {
        DimPlan {
            d: params.d,
            gamma: libm::pow(params.l as f64, 1.0 / params.d as f64),
            per_dim_l: per_dim_l(params.l, params.d),
        }
    }

    /// Number of candidate boxes.
    pub fn boxes(&self) -> u64 {
        (self.per_dim_l as u64).pow(self.d)
    }
}

/// Per-coordinate shape of the Bayesian strategy: the staged strategy with
/// `⌈γ⌉` cells, whose replicated phase stops once the cells are `ε` wide.
pub fn bayes_coordinate_config(params: &ProblemParams) -> Result<MultistageConfig> {
    let p = params.validate(Setting::BayesD)?;
    Ok(MultistageConfig::tight(p.epsilon, p.delta, p.per_dim_l()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::pow2;

    #[test]
    fn plan_exact_gamma() {
        let p = ProblemParams::noiseless(pow2(-10), pow2(-6), 4).with_dim(2);
        let plan = DimPlan::new(&p);
        assert_eq!(plan.per_dim_l, 2);
        assert_eq!(plan.gamma, 2.0);
        assert_eq!(plan.boxes(), 4);
        let p = ProblemParams::noiseless(pow2(-10), pow2(-6), 8).with_dim(3);
        assert_eq!(DimPlan::new(&p).per_dim_l, 2);
    }

    #[test]
    fn bayes_coordinate_shape() {
        let p = ProblemParams::noiseless(pow2(-10), pow2(-6), 4).with_dim(2);
        let c = bayes_coordinate_config(&p).unwrap();
        assert_eq!(c, MultistageConfig { k1: 5, clones: 2, k2: 4 });
        assert_eq!(2 * c.total_queries(), 28);
    }
}
