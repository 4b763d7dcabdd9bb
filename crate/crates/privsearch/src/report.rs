//! CSV output and human-readable summaries.
//!
//! Floats are written as `{:.16e}`, 17 significant digits, which round-trips
//! every `f64` exactly. Missing values are empty fields.

use std::fmt::Write as _;
use std::io::Write;

use privsearch_core::bounds::CurvePoint;

use crate::experiment::{ExperimentReport, Row};
use crate::error::Result;

pub const REPORT_HEADER: [&str; 23] = [
    "setting",
    "strategy",
    "adversary",
    "eps",
    "delta",
    "L",
    "p",
    "M",
    "d",
    "trials",
    "queries_mean",
    "queries_max",
    "queries_exact_formula",
    "err_mean",
    "err_max",
    "whp_fail_rate",
    "breach_rate",
    "breach_ci_lo",
    "breach_ci_hi",
    "min_covering",
    "bound_upper",
    "bound_lower",
    "seed",
];

pub const CURVE_HEADER: [&str; 6] = ["eps", "delta", "upper_new", "lower_new", "upper_prior", "lower_prior"];

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn row_fields(r: &Row) -> Vec<String> {
    let p = &r.params;
    vec![
        r.setting.to_string(),
        r.strategy.to_string(),
        r.adversary.clone(),
        float(p.epsilon),
        float(p.delta),
        p.l.to_string(),
        opt_float(p.p),
        opt_float(p.m),
        p.d.to_string(),
        r.trials.to_string(),
        float(r.queries_mean),
        r.queries_max.to_string(),
        opt(r.queries_exact_formula),
        float(r.err_mean),
        float(r.err_max),
        float(r.whp_fail_rate),
        opt_float(r.breach_rate),
        opt_float(r.breach_ci.map(|c| c.0)),
        opt_float(r.breach_ci.map(|c| c.1)),
        opt(r.min_covering),
        opt_float(r.bound_upper),
        opt_float(r.bound_lower),
        r.seed.to_string(),
    ]
}

pub fn write_report<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for r in rows {
        w.write_record(row_fields(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curve<W: Write>(points: &[CurvePoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVE_HEADER)?;
    for c in points {
        w.write_record([
            float(c.eps),
            float(c.delta),
            opt_float(c.upper_new),
            opt_float(c.lower_new),
            opt_float(c.upper_prior),
            opt_float(c.lower_prior),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn summarize(report: &ExperimentReport) -> String {
    let mut s = String::new();
    for r in &report.rows {
        let p = &r.params;
        let _ = write!(s, "{:<10} eps={:<12.6e} delta={:<12.6e} L={:<3}", r.strategy, p.epsilon, p.delta, p.l);
        if p.d > 1 {
            let _ = write!(s, " d={}", p.d);
        }
        let _ = write!(s, " trials={} queries mean={:.2} max={}", r.trials, r.queries_mean, r.queries_max);
        if let Some(b) = r.bound_upper {
            let _ = write!(s, " (bound {b})");
        }
        let _ = write!(s, " err max={:.3e}", r.err_max);
        if let (Some(rate), Some((lo, hi))) = (r.breach_rate, r.breach_ci) {
            let _ = write!(s, " {}: breach {rate:.4} [{lo:.4}, {hi:.4}]", r.adversary);
        }
        if let Some(c) = r.min_covering {
            let _ = write!(s, " min_covering={c}");
        }
        s.push('\n');
    }
    for (p, why) in &report.skipped {
        let _ = writeln!(s, "skipped eps={} delta={} L={}: {why}", p.epsilon, p.delta, p.l);
    }
    for v in &report.violations {
        let _ = writeln!(s, "VIOLATION {v}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2f64.powi(-10), 1e-300, 27.0] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(float(0.25), "2.5000000000000000e-1");
    }

    #[test]
    fn curve_csv() {
        let pts = [CurvePoint {
            eps: 0.5,
            delta: 0.25,
            valid: false,
            upper_new: None,
            lower_new: Some(-1.0),
            upper_prior: None,
            lower_prior: None,
        }];
        let mut buf = Vec::new();
        write_curve(&pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CURVE_HEADER.join(","));
        assert_eq!(text.lines().nth(1).unwrap(), "5.0000000000000000e-1,2.5000000000000000e-1,,-1.0000000000000000e0,,");
    }
}
