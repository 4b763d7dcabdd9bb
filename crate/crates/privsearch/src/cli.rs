//! Command-line front end. Exit codes: 0 success, 1 invariant violation,
//! 2 configuration error.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use privsearch_core::worked::{replay_example, EXAMPLES};
use privsearch_core::{ProblemParams, Setting, Strategy};

use crate::config::{parse_key_values, AdversarySpec, ExperimentConfig, KeyValues};
use crate::curves::{curve, parse_delta_link, CurveSpec};
use crate::error::{config_err, Result};
use crate::experiment::{run_experiment, thread_pool};
use crate::report::{float, summarize, write_curve, write_report};
use crate::verify::verify_det;

pub const THREADS_ENV: &str = "PRIVSEARCH_THREADS";

#[derive(Debug, Parser)]
#[command(name = "privsearch", version, about = "Learner-private sequential search experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one parameter point.
    Run(ExperimentArgs),
    /// Run every point of a parameter grid.
    Sweep(ExperimentArgs),
    /// Emit bound curves along a linked (eps, delta) sweep.
    Bounds(BoundsArgs),
    /// Check information-set covering numbers over a target grid.
    VerifyDet(VerifyArgs),
    /// Fit the histogram attack on simulated runs, then evaluate it.
    AttackTrain(ExperimentArgs),
    /// List or replay the worked examples.
    Examples(ExamplesArgs),
}

/// Experiment flags. Each one overrides the same key in `--config`.
#[derive(Debug, Args, Default)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub setting: Option<String>,
    #[arg(long)]
    pub strategy: Option<String>,
    /// Comma-separated: last, prop, trunc[:K], map, hist.
    #[arg(long)]
    pub adversary: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long = "L")]
    pub l: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long = "M")]
    pub m: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub parallelism: Option<String>,
    /// `bayes` or `grid`.
    #[arg(long)]
    pub targets: Option<String>,
    #[arg(long)]
    pub streams: Option<String>,
    #[arg(long)]
    pub grid_step: Option<String>,
    #[arg(long)]
    pub covering: Option<String>,
    #[arg(long)]
    pub hist_bins: Option<String>,
    #[arg(long)]
    pub hist_train: Option<String>,
    #[arg(long)]
    pub hist_prefix: Option<String>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value = "bayes")]
    pub setting: String,
    #[arg(long = "L")]
    pub l: u32,
    /// `C*eps^E`; use `--delta` for a fixed delta instead.
    #[arg(long)]
    pub delta_link: Option<String>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub eps_from: f64,
    /// A number or `cutoff`.
    #[arg(long, default_value = "cutoff")]
    pub eps_to: String,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long = "M")]
    pub m: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub strategy: String,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long = "L")]
    pub l: u32,
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    #[arg(long, default_value_t = 32)]
    pub streams: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Target spacing per coordinate; eps/3 when absent.
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[arg(long)]
    pub parallelism: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExamplesArgs {
    /// Only list the registered examples.
    #[arg(long)]
    pub list: bool,
    /// Examples to replay; all of them when empty.
    pub names: Vec<String>,
}

impl ExperimentArgs {
    fn key_values(&self) -> Result<KeyValues> {
        let mut kv = match &self.config {
            Some(path) => parse_key_values(&std::fs::read_to_string(path)?)?,
            None => KeyValues::new(),
        };
        let flags: [(&str, Option<&String>); 19] = [
            ("setting", self.setting.as_ref()),
            ("strategy", self.strategy.as_ref()),
            ("adversary", self.adversary.as_ref()),
            ("eps", self.eps.as_ref()),
            ("delta", self.delta.as_ref()),
            ("L", self.l.as_ref()),
            ("p", self.p.as_ref()),
            ("M", self.m.as_ref()),
            ("d", self.d.as_ref()),
            ("trials", self.trials.as_ref()),
            ("seed", self.seed.as_ref()),
            ("parallelism", self.parallelism.as_ref()),
            ("targets", self.targets.as_ref()),
            ("streams", self.streams.as_ref()),
            ("grid_step", self.grid_step.as_ref()),
            ("covering", self.covering.as_ref()),
            ("hist_bins", self.hist_bins.as_ref()),
            ("hist_train", self.hist_train.as_ref()),
            ("hist_prefix", self.hist_prefix.as_ref()),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                kv.insert(k.to_string(), v.clone());
            }
        }
        if let Some(out) = &self.out {
            kv.insert("out".into(), out.display().to_string());
        }
        Ok(kv)
    }

    pub fn to_config(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::from_key_values(&self.key_values()?)?;
        if let Some(n) = threads_override()? {
            cfg.parallelism = n;
        }
        Ok(cfg)
    }
}

fn threads_override() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(config_err(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}

/// Sends CSV to `path` when given, else to stdout; the summary goes to
/// whichever stream the CSV does not use.
fn emit(path: Option<&Path>, csv: impl FnOnce(&mut dyn Write) -> Result<()>, summary: &str) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = io::BufWriter::new(File::create(p)?);
            csv(&mut f)?;
            f.flush()?;
            print!("{summary}");
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            csv(&mut lock)?;
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn experiment(args: &ExperimentArgs, single: bool, force_hist: bool) -> Result<i32> {
    let mut cfg = args.to_config()?;
    if single && cfg.points().len() != 1 {
        return Err(config_err("`run` takes one parameter point; use `sweep` for lists"));
    }
    if force_hist && !cfg.adversaries.contains(&AdversarySpec::Hist) {
        cfg.adversaries.push(AdversarySpec::Hist);
    }
    let report = run_experiment(&cfg)?;
    if report.rows.is_empty() {
        let why: Vec<String> = report.skipped.iter().map(|(_, w)| w.clone()).collect();
        return Err(config_err(format!("no valid parameter point: {}", why.join("; "))));
    }
    if single && !report.skipped.is_empty() {
        return Err(config_err(report.skipped[0].1.clone()));
    }
    let mut summary = summarize(&report);
    for k in &report.histogram_keys {
        summary += &format!("histogram attack trained on {} runs, {k} distinct transcript keys\n", cfg.hist.train);
    }
    emit(cfg.out.as_deref(), |w| write_report(&report.rows, w), &summary)?;
    Ok(if report.violations.is_empty() { 0 } else { 1 })
}

fn bounds(args: &BoundsArgs) -> Result<i32> {
    let setting = Setting::from_name(&args.setting).ok_or_else(|| config_err(format!("unknown setting `{}`", args.setting)))?;
    let link = match (&args.delta_link, args.delta) {
        (Some(s), None) => parse_delta_link(s)?,
        (None, Some(d)) => parse_delta_link(&d.to_string())?,
        _ => return Err(config_err("give exactly one of --delta-link and --delta")),
    };
    let eps_to = match args.eps_to.as_str() {
        "cutoff" => None,
        s => Some(s.parse::<f64>().map_err(|_| config_err(format!("--eps-to: cannot parse `{s}`")))?),
    };
    let base = ProblemParams { epsilon: args.eps_from, delta: link.delta(args.eps_from), l: args.l, p: args.p, m: args.m, d: args.d };
    let spec = CurveSpec { setting, base, link, eps_from: args.eps_from, eps_to, points: args.points };
    let pts = curve(&spec)?;
    let invalid = pts.iter().filter(|c| !c.valid).count();
    let mut summary = format!("{} points of the {} bounds, L = {}", pts.len(), setting.name(), args.l);
    if let Some(last) = pts.last() {
        summary += &format!(", eps up to {}", float(last.eps));
    }
    summary += &format!("; {invalid} outside the valid regime\n");
    emit(args.out.as_deref(), |w| write_curve(&pts, w), &summary)?;
    Ok(0)
}

fn verify(args: &VerifyArgs) -> Result<i32> {
    let strategy = Strategy::from_id(&args.strategy).ok_or_else(|| config_err(format!("unknown strategy `{}`", args.strategy)))?;
    let params = ProblemParams { epsilon: args.eps, delta: args.delta, l: args.l, p: None, m: None, d: args.d };
    let threads = match threads_override()? {
        Some(n) => n,
        None => args.parallelism.unwrap_or_else(crate::config::default_parallelism),
    };
    let pool = thread_pool(threads)?;
    let step = args.grid_step.unwrap_or(args.eps / 3.0);
    let r = verify_det(strategy, &params, step, args.streams, args.seed, &pool)?;
    let mut summary = format!(
        "{}: {} targets x {} streams, {} runs checked, min_covering = {} (L = {})\n",
        strategy.id(),
        r.targets,
        r.streams,
        r.checked,
        r.min_covering,
        args.l
    );
    for w in r.witnesses.iter().take(20) {
        summary += &format!("  witness target={:?} stream={} covering={}\n", w.target, w.stream, w.covering);
    }
    let csv = |w: &mut dyn Write| -> Result<()> {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["strategy", "eps", "delta", "L", "d", "targets", "streams", "checked", "min_covering", "witnesses", "seed"])?;
        c.write_record([
            strategy.id().to_string(),
            float(args.eps),
            float(args.delta),
            args.l.to_string(),
            args.d.to_string(),
            r.targets.to_string(),
            r.streams.to_string(),
            r.checked.to_string(),
            r.min_covering.to_string(),
            r.witnesses.len().to_string(),
            args.seed.to_string(),
        ])?;
        c.flush()?;
        Ok(())
    };
    emit(args.out.as_deref(), csv, &summary)?;
    Ok(if r.min_covering >= args.l as usize { 0 } else { 1 })
}

fn examples(args: &ExamplesArgs) -> Result<i32> {
    if args.list {
        for (name, what) in EXAMPLES {
            println!("{name:<16} {what}");
        }
        return Ok(0);
    }
    let names: Vec<String> = match args.names.is_empty() {
        true => EXAMPLES.iter().map(|(n, _)| n.to_string()).collect(),
        false => args.names.clone(),
    };
    let mut failed = false;
    for name in &names {
        let r = replay_example(name)?;
        println!("{} {} ({} queries)", if r.passed { "PASS" } else { "FAIL" }, r.name, r.transcript.len());
        for d in &r.diffs {
            println!("  {d}");
        }
        failed |= !r.passed;
    }
    Ok(if failed { 1 } else { 0 })
}

pub fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Run(a) => experiment(a, true, false),
        Command::Sweep(a) => experiment(a, false, false),
        Command::AttackTrain(a) => experiment(a, true, true),
        Command::Bounds(a) => bounds(a),
        Command::VerifyDet(a) => verify(a),
        Command::Examples(a) => examples(a),
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
