//! Bound curves along a linked sweep `δ = C·ε^E`.

use privsearch_core::bounds::{bound_curve, geometric_points, CurvePoint, DeltaLink};
use privsearch_core::{ProblemParams, Setting};

use crate::error::{config_err, Result};

/// Parses `C*eps^E`, `eps^E`, `C*eps` or a bare constant `C`.
pub fn parse_delta_link(s: &str) -> Result<DeltaLink> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || config_err(format!("delta link `{s}`: expected C*eps^E"));
    let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let (coef, rest) = match compact.split_once('*') {
        Some((c, r)) => (num(c)?, r),
        None if compact.starts_with("eps") => (1.0, compact.as_str()),
        None => return Ok(DeltaLink { coef: num(&compact)?, exp: 0.0 }),
    };
    let exp = match rest.strip_prefix("eps").ok_or_else(bad)? {
        "" => 1.0,
        e => num(e.strip_prefix('^').ok_or_else(bad)?)?,
    };
    if !(coef > 0.0) {
        return Err(bad());
    }
    Ok(DeltaLink { coef, exp })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub setting: Setting,
    pub base: ProblemParams,
    pub link: DeltaLink,
    pub eps_from: f64,
    /// Upper end of the sweep; the point where `δ` reaches `1/L` when absent.
    pub eps_to: Option<f64>,
    pub points: usize,
}

pub fn curve(spec: &CurveSpec) -> Result<Vec<CurvePoint>> {
    let to = match spec.eps_to {
        Some(t) => t,
        None if spec.link.exp > 0.0 => spec.link.cutoff(spec.base.l),
        None => return Err(config_err("a cutoff needs a delta link that grows with eps")),
    };
    if !(spec.eps_from > 0.0 && to > spec.eps_from) || spec.points < 2 {
        return Err(config_err(format!("empty sweep from {} to {to}", spec.eps_from)));
    }
    let eps = geometric_points(spec.eps_from, to, spec.points);
    Ok(bound_curve(spec.setting, &spec.base, spec.link, &eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn links() {
        assert_eq!(parse_delta_link("4*eps^0.5").unwrap(), DeltaLink { coef: 4.0, exp: 0.5 });
        assert_eq!(parse_delta_link(" eps^0.9 ").unwrap(), DeltaLink { coef: 1.0, exp: 0.9 });
        assert_eq!(parse_delta_link("2*eps").unwrap(), DeltaLink { coef: 2.0, exp: 1.0 });
        assert_eq!(parse_delta_link("0.01").unwrap(), DeltaLink { coef: 0.01, exp: 0.0 });
        for bad in ["4*x^2", "4*eps0.5", "-1*eps", "abc"] {
            assert!(parse_delta_link(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn cutoff_sweep_ends_at_cutoff() {
        let spec = CurveSpec {
            setting: Setting::BayesNoiseless,
            base: ProblemParams::noiseless(1e-6, 1e-3, 15),
            link: parse_delta_link("4*eps^0.5").unwrap(),
            eps_from: 1e-6,
            eps_to: None,
            points: 50,
        };
        let c = curve(&spec).unwrap();
        assert_eq!(c.len(), 50);
        assert!((c.last().unwrap().eps - (1.0f64 / 60.0).powi(2)).abs() < 1e-15);
    }
}
