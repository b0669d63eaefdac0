//! The `multijet` command-line tool.
//!
//! Every command reads an optional JSON config, writes its tables and
//! reports under `--out`, and finishes with `manifest.json`. Exit codes:
//! 0 success, 2 validation failure, 3 input error, 4 numerical degeneracy.

pub mod config;
pub mod output;

use std::collections::HashMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::Serialize;

use self::config::*;
use self::output::{json_bytes, write_outputs, Stamp, Table};
use crate::configspace::{ev_kernel, limit_probe, log_spaced, Configuration, Subspace};
use crate::empirics::{count_zeros_1d, count_zeros_2d, empirical_moments, Comparison};
use crate::error::{Error, Result};
use crate::gaussfield::{nondegeneracy_check, Kernel};
use crate::interp::{divided_difference, kergin, FnOracle};
use crate::kacrice::{
    factorial_moment_integral, factorials_by_block_count, moment_from_factorials, rho1, rho_p, IntegrationConfig,
};
use crate::polycore::{homogeneous, monomials, MultiIndex};
use crate::row;
use crate::stats::{mean_se, Estimate};
use crate::validate::{run_all, ValidateConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "multijet", version, about = "Kergin interpolation, evaluation-map kernels and Kac-Rice moments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON config for the command; defaults are used for missing fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = "multijet-out")]
    pub out: PathBuf,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Overrides the trial count of moments, simulate and validate.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Overrides the Monte Carlo sample count of rho, moments and validate.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Lift the desk-scale caps on trials, samples and point counts.
    #[arg(long, global = true)]
    pub override_caps: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Divided difference of a registry function at a point list.
    Divdiff,
    /// Kergin interpolant and its subset residuals.
    Kergin,
    /// Orthonormal basis of the evaluation-map kernel.
    Kernel,
    /// Kernels along a path approaching the diagonal.
    Limit,
    /// Jet non-degeneracy certificates.
    Nondeg,
    /// Kac-Rice densities.
    Rho,
    /// Empirical zero-count moments against Kac-Rice predictions.
    Moments,
    /// Raw zero or critical-point counts per trial.
    Simulate,
    /// The full acceptance suite.
    Validate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Divdiff => "divdiff",
            Command::Kergin => "kergin",
            Command::Kernel => "kernel",
            Command::Limit => "limit",
            Command::Nondeg => "nondeg",
            Command::Rho => "rho",
            Command::Moments => "moments",
            Command::Simulate => "simulate",
            Command::Validate => "validate",
        }
    }
}

/// Files produced by a command, plus whether it counts as a success.
struct Outcome {
    config: serde_json::Value,
    files: Vec<(String, Tabular)>,
    summary: Vec<String>,
    exit: i32,
}

enum Tabular {
    Csv(Table),
    Json(Vec<u8>),
}

impl Outcome {
    fn new<C: Serialize>(config: &C) -> Self {
        Outcome {
            config: serde_json::to_value(config).expect("serializable"),
            files: vec![],
            summary: vec![],
            exit: EXIT_OK,
        }
    }

    fn csv(&mut self, name: &str, t: Table) {
        self.files.push((name.into(), Tabular::Csv(t)));
    }

    fn json<T: Serialize>(&mut self, name: &str, v: &T) {
        self.files.push((name.into(), Tabular::Json(json_bytes(v))));
    }
}

fn load<C: DeserializeOwned + Default>(path: Option<&Path>) -> Result<C> {
    load_or(path, C::default)
}

fn load_or<C: DeserializeOwned>(path: Option<&Path>, default: impl FnOnce() -> C) -> Result<C> {
    match path {
        None => Ok(default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("config {}: {e}", p.display())))
        }
    }
}

fn alpha_label(alpha: &MultiIndex) -> String {
    let e: Vec<String> = alpha.exponents().iter().map(|k| k.to_string()).collect();
    format!("({})", e.join(","))
}

fn points_label(points: &[Vec<f64>]) -> String {
    let p: Vec<String> =
        points.iter().map(|x| format!("({})", x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))).collect();
    p.join(";")
}

fn oracle_dims(f: &dyn FnOracle, points: &[Vec<f64>]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    match points.iter().find(|x| x.len() != f.n()) {
        Some(x) => Err(Error::DimensionMismatch { expected: f.n(), got: x.len() }),
        None => Ok(()),
    }
}

fn cmd_divdiff(cli: &Cli) -> Result<Outcome> {
    let cfg: InterpConfig = load_or(cli.config.as_deref(), InterpConfig::divdiff_default)?;
    check_points(&cfg.points, cli.override_caps)?;
    let f = cfg.function.build()?;
    oracle_dims(&f, &cfg.points)?;
    let form = divided_difference(&f, &cfg.points)?;
    let mut t = Table::new(&["alpha", "coefficient"]);
    for (alpha, c) in homogeneous(form.n(), form.order()).iter().zip(form.coeffs()) {
        t.push(row![alpha_label(alpha), *c]);
    }
    let mut out = Outcome::new(&cfg);
    out.summary.push(format!("order {} form, {} coefficients", form.order(), form.coeffs().len()));
    out.csv("divdiff.csv", t);
    Ok(out)
}

fn cmd_kergin(cli: &Cli) -> Result<Outcome> {
    let cfg: InterpConfig = load(cli.config.as_deref())?;
    check_points(&cfg.points, cli.override_caps)?;
    let f = cfg.function.build()?;
    oracle_dims(&f, &cfg.points)?;
    let p = cfg.points.len();
    let k = kergin(&f, &cfg.points)?.raise_degree(p - 1);
    let mut coeffs = Table::new(&["alpha", "coefficient"]);
    for (alpha, c) in monomials(k.n(), p - 1).iter().zip(k.coeffs()) {
        coeffs.push(row![alpha_label(alpha), *c]);
    }
    // K(f)[x_J] = f[x_J] for every nonempty J
    let mut residuals = Table::new(&["subset", "max_abs_residual"]);
    let mut worst = 0.0f64;
    for mask in 1u32..(1 << p) {
        let idx: Vec<usize> = (0..p).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<f64>> = idx.iter().map(|&i| cfg.points[i].clone()).collect();
        let r = divided_difference(&k, &sub)?.max_abs_diff(&divided_difference(&f, &sub)?);
        worst = worst.max(r);
        let label: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
        residuals.push(row![format!("{{{}}}", label.join(",")), r]);
    }
    let mut out = Outcome::new(&cfg);
    out.summary.push(format!("degree <= {} interpolant, max subset residual {worst:e}", p - 1));
    out.csv("kergin.csv", coeffs);
    out.csv("kergin_residuals.csv", residuals);
    Ok(out)
}

fn basis_table(n: usize, degree: usize, s: &Subspace) -> Table {
    let labels: Vec<String> = monomials(n, degree).iter().map(alpha_label).collect();
    let mut header = vec!["vector"];
    header.extend(labels.iter().map(String::as_str));
    let mut t = Table::new(&header);
    for j in 0..s.dim() {
        let mut r = row![j + 1];
        r.extend(s.basis().column(j).iter().map(|&v| output::Cell::from(v)));
        t.push(r);
    }
    t
}

fn cmd_kernel(cli: &Cli) -> Result<Outcome> {
    let cfg: KernelConfig = load(cli.config.as_deref())?;
    check_points(&cfg.points, cli.override_caps)?;
    let config = Configuration::new(cfg.points.clone())?;
    let g = ev_kernel(&config)?;
    let mut out = Outcome::new(&cfg);
    out.summary.push(format!("kernel of dimension {} and codimension {}", g.dim(), g.codim()));
    out.csv("kernel.csv", basis_table(config.n(), config.p() - 1, &g));
    Ok(out)
}

fn cmd_limit(cli: &Cli) -> Result<Outcome> {
    let cfg: LimitConfig = load(cli.config.as_deref())?;
    if !(cfg.eps_max > 0.0 && cfg.eps_min > 0.0 && cfg.count >= 1) {
        return Err(Error::InvalidInput("eps_max, eps_min must be positive and count ≥ 1".into()));
    }
    let eps = log_spaced(cfg.eps_max, cfg.eps_min, cfg.count);
    let (path, expected): (Box<dyn Fn(f64) -> Configuration>, Option<Subspace>) = match cfg.path {
        LimitPath::Spiral => (
            Box::new(|e: f64| {
                Configuration::new(vec![vec![0.0, 0.0], vec![e * e.cos(), e * e.sin()]])
                    .expect("two points in the plane")
            }),
            Some(Subspace::span(&DMatrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]))),
        ),
        LimitPath::Constant => (
            Box::new(|_| Configuration::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).expect("two points in the plane")),
            None,
        ),
    };
    let rows = limit_probe(&*path, &eps, expected.as_ref())?;
    let mut t = Table::new(&["epsilon", "angle_to_expected", "increment"]);
    for r in &rows {
        t.push(row![r.epsilon, r.angle_to_expected, r.increment]);
    }
    let mut out = Outcome::new(&cfg);
    if let Some(last) = rows.last() {
        out.csv("limit_kernel.csv", basis_table(2, 1, &last.kernel));
        out.summary.push(format!("{} points, last angle {:?}", rows.len(), last.angle_to_expected));
    }
    out.files.insert(0, ("limit.csv".into(), Tabular::Csv(t)));
    Ok(out)
}

fn cmd_nondeg(cli: &Cli) -> Result<Outcome> {
    let cfg: NondegConfig = load(cli.config.as_deref())?;
    let k = Kernel::from_spec(&cfg.kernel)?;
    let reports = cfg.orders.iter().map(|&q| nondegeneracy_check(&k, q, cfg.components)).collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["order", "components", "min_eigenvalue", "certified"]);
    for r in &reports {
        t.push(row![r.order, r.components, r.min_eigenvalue, r.certified]);
    }
    let mut out = Outcome::new(&cfg);
    for r in &reports {
        out.summary.push(format!("q = {}: min eigenvalue {:e}, certified {}", r.order, r.min_eigenvalue, r.certified));
    }
    out.csv("nondeg.csv", t);
    out.json("nondeg.json", &reports);
    Ok(out)
}

fn cmd_rho(cli: &Cli) -> Result<Outcome> {
    let mut cfg: RhoConfig = load(cli.config.as_deref())?;
    if let Some(s) = cli.samples {
        cfg.samples = s;
    }
    check_cap("samples", cfg.samples, MAX_SAMPLES, cli.override_caps)?;
    let k = Kernel::from_spec(&cfg.kernel)?;
    let mut t = Table::new(&["configuration", "p", "value", "std_error", "samples", "method", "error"]);
    let mut out = Outcome::new(&cfg);
    // all configurations share one Monte Carlo seed (common random numbers)
    for pts in &cfg.configurations {
        check_points(pts, cli.override_caps)?;
        let label = points_label(pts);
        let res = match pts.as_slice() {
            [x] => rho1(&k, cfg.r, x, cfg.samples, cli.seed),
            _ => Configuration::new(pts.clone()).and_then(|c| rho_p(&k, cfg.r, &c, cfg.samples, cli.seed)),
        };
        match res {
            Ok(d) => {
                let method = serde_json::to_value(d.method).expect("unit enum");
                t.push(row![
                    label,
                    pts.len(),
                    d.value,
                    d.std_error,
                    d.samples,
                    method.as_str().unwrap_or_default(),
                    None::<String>
                ]);
            }
            Err(e) if e.is_numerical() => {
                out.exit = EXIT_NUMERICAL;
                t.push(row![label, pts.len(), None::<f64>, None::<f64>, None::<usize>, None::<String>, e.code()]);
            }
            Err(e) => return Err(e),
        }
    }
    out.summary.push(format!("{} densities", cfg.configurations.len()));
    out.csv("rho.csv", t);
    Ok(out)
}

#[derive(Serialize)]
struct MomentsReport {
    empirical: crate::empirics::MomentReport,
    integrals: Vec<crate::kacrice::FactorialIntegral>,
    predicted_moments: Vec<Option<Estimate>>,
}

fn cmd_moments(cli: &Cli) -> Result<Outcome> {
    let mut cfg: MomentsConfig = load(cli.config.as_deref())?;
    if let Some(t) = cli.trials {
        cfg.trials = t;
    }
    if let Some(s) = cli.samples {
        cfg.samples = s;
    }
    check_cap("trials", cfg.trials, MAX_TRIALS, cli.override_caps)?;
    check_cap("samples", cfg.samples, MAX_SAMPLES, cli.override_caps)?;
    let k = Kernel::from_spec(&cfg.kernel)?;
    let mut report = empirical_moments(&k, cfg.r, &cfg.bx, cfg.p, cfg.trials, cli.seed)?;
    let icfg = IntegrationConfig { samples: cfg.samples, seed: cli.seed, ..IntegrationConfig::default() };
    let mut integrals = Vec::new();
    for j in 1..=cfg.p {
        match factorial_moment_integral(&k, cfg.r, &cfg.bx, j, &icfg) {
            Ok(i) => integrals.push(i),
            Err(Error::InvalidInput(_)) => break,
            Err(e) => return Err(e),
        }
    }
    let by_blocks: Vec<Estimate> = integrals.iter().map(|i| i.estimate).collect();
    let mut predicted_moments = Vec::with_capacity(cfg.p);
    for j in 1..=cfg.p {
        let f = factorials_by_block_count(j, &by_blocks);
        let m = moment_from_factorials(&f, j, true).ok();
        if let Some(m) = m {
            report.compare(&format!("E[N^{j}]"), report.moments[j - 1], m);
        }
        if let Some(i) = by_blocks.get(j - 1) {
            report.compare(&format!("E[N^({j})] factorial"), report.factorial_moments[j - 1], *i);
        }
        predicted_moments.push(m);
    }
    let mut t = Table::new(&[
        "k",
        "moment",
        "moment_se",
        "predicted_moment",
        "predicted_moment_se",
        "factorial_moment",
        "factorial_moment_se",
        "predicted_factorial",
        "predicted_factorial_se",
    ]);
    for (j, pm) in predicted_moments.iter().copied().enumerate().take(cfg.p) {
        let (m, f) = (report.moments[j], report.factorial_moments[j]);
        let pf = by_blocks.get(j).copied();
        t.push(row![
            j + 1,
            m.value,
            m.std_error,
            pm.map(|e| e.value),
            pm.map(|e| e.std_error),
            f.value,
            f.std_error,
            pf.map(|e| e.value),
            pf.map(|e| e.std_error),
        ]);
    }
    let mut out = Outcome::new(&cfg);
    for c in &report.comparisons {
        out.summary.push(comparison_line(c));
    }
    out.csv("moments.csv", t);
    out.json("moments.json", &MomentsReport { empirical: report, integrals, predicted_moments });
    Ok(out)
}

fn comparison_line(c: &Comparison) -> String {
    format!(
        "{}: empirical {:.6} ± {:.6}, predicted {:.6} ± {:.6}, z = {:.2}",
        c.label, c.empirical.value, c.empirical.std_error, c.predicted.value, c.predicted.std_error, c.z
    )
}

#[derive(Serialize)]
struct SimulateReport {
    mean: Estimate,
    histogram: Vec<(u64, usize)>,
    bulinskaya: crate::empirics::BulinskayaReport,
    warnings: Vec<crate::Warning>,
}

fn cmd_simulate(cli: &Cli) -> Result<Outcome> {
    let mut cfg: SimulateConfig = load(cli.config.as_deref())?;
    if let Some(t) = cli.trials {
        cfg.trials = t;
    }
    check_cap("trials", cfg.trials, MAX_TRIALS, cli.override_caps)?;
    let k = Kernel::from_spec(&cfg.kernel)?;
    if cfg.bx.len() != k.n() {
        return Err(Error::DimensionMismatch { expected: k.n(), got: cfg.bx.len() });
    }
    let run = match (k.n(), cfg.target) {
        (1, Target::Zeros) => count_zeros_1d(&k, cfg.bx[0], 0, cfg.trials, cli.seed)?,
        (1, Target::CriticalPoints) => count_zeros_1d(&k, cfg.bx[0], 1, cfg.trials, cli.seed)?,
        (2, Target::Zeros) => count_zeros_2d(&k, [cfg.bx[0], cfg.bx[1]], cfg.trials, cli.seed)?,
        (n, t) => {
            return Err(Error::InvalidInput(format!(
                "simulate supports {t:?} for n = 1 (and zeros for n = 2), got n = {n}"
            )))
        }
    };
    let mut t = Table::new(&["trial", "count"]);
    let mut hist: HashMap<u64, usize> = HashMap::new();
    for (i, &c) in run.counts.iter().enumerate() {
        t.push(row![i, c]);
        *hist.entry(c).or_default() += 1;
    }
    let mut histogram: Vec<(u64, usize)> = hist.into_iter().collect();
    histogram.sort_unstable();
    let xs: Vec<f64> = run.counts.iter().map(|&c| c as f64).collect();
    let mean = mean_se(&xs);
    let mut out = Outcome::new(&cfg);
    out.summary.push(format!("mean count {:.6} ± {:.6} over {} trials", mean.value, mean.std_error, xs.len()));
    out.csv("counts.csv", t);
    out.json("simulate.json", &SimulateReport { mean, histogram, bulinskaya: run.bulinskaya, warnings: run.warnings });
    Ok(out)
}

fn cmd_validate(cli: &Cli) -> Result<Outcome> {
    let mut opts: ValidateOptions = load(cli.config.as_deref())?;
    if let Some(t) = cli.trials {
        opts.trials = t;
    }
    if let Some(s) = cli.samples {
        opts.samples = s;
    }
    check_cap("trials", opts.trials, MAX_TRIALS, cli.override_caps)?;
    check_cap("samples", opts.samples, MAX_SAMPLES, cli.override_caps)?;
    let cfg = ValidateConfig { seed: cli.seed, trials: opts.trials, samples: opts.samples };
    let (run, secs) = run_all(&cfg);
    let mut t = Table::new(&["criterion", "title", "criterion_pass", "metric", "value", "bound", "metric_pass"]);
    let mut out = Outcome::new(&opts);
    for (r, s) in run.results.iter().zip(&secs) {
        out.summary.push(format!(
            "criterion {:>2} {} ({s:.2} s): {}",
            r.id,
            if r.pass { "PASS" } else { "FAIL" },
            r.title
        ));
        if r.metrics.is_empty() {
            t.push(row![
                r.id as usize,
                r.title.as_str(),
                r.pass,
                r.note.clone(),
                None::<f64>,
                None::<String>,
                None::<bool>
            ]);
        }
        for m in &r.metrics {
            t.push(row![r.id as usize, r.title.as_str(), r.pass, m.name.as_str(), m.value, m.bound.as_str(), m.pass]);
        }
    }
    if !run.all_pass() {
        out.exit = EXIT_VALIDATION;
    }
    out.csv("validate.csv", t);
    out.json("validate.json", &run);
    Ok(out)
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match cli.command {
        Command::Divdiff => cmd_divdiff(cli),
        Command::Kergin => cmd_kergin(cli),
        Command::Kernel => cmd_kernel(cli),
        Command::Limit => cmd_limit(cli),
        Command::Nondeg => cmd_nondeg(cli),
        Command::Rho => cmd_rho(cli),
        Command::Moments => cmd_moments(cli),
        Command::Simulate => cmd_simulate(cli),
        Command::Validate => cmd_validate(cli),
    }
}

fn execute(cli: &Cli) -> i32 {
    let start = Instant::now();
    let outcome = match dispatch(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.code());
            return if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INPUT };
        }
    };
    let stamp = Stamp::new(cli.command.name(), cli.seed, &outcome.config);
    let files: Vec<(String, Vec<u8>)> = outcome
        .files
        .into_iter()
        .map(|(name, f)| {
            let bytes = match f {
                Tabular::Csv(t) => t.to_csv(&stamp),
                Tabular::Json(b) => b,
            };
            (name, bytes)
        })
        .collect();
    if let Err(e) = write_outputs(&cli.out, &files, &stamp, &outcome.config, start.elapsed().as_secs_f64()) {
        eprintln!("error [io]: cannot write to {}: {e}", cli.out.display());
        return EXIT_INPUT;
    }
    for line in &outcome.summary {
        println!("{line}");
    }
    println!("wrote {} file(s) and manifest.json to {}", files.len(), cli.out.display());
    outcome.exit
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match cli.threads {
        Some(0) => {
            eprintln!("error [invalid_input]: --threads must be at least 1");
            EXIT_INPUT
        }
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => {
                eprintln!("error [invalid_input]: cannot start {k} worker threads: {e}");
                EXIT_INPUT
            }
        },
        None => execute(&cli),
    }
}
