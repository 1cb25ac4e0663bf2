use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sasaki_lab::families::{Family, FamilySpec};
use sasaki_lab::kmu::{self, KMuSweep};
use sasaki_lab::suite::{self, SuiteConfig};
use sasaki_lab::{ContactMetricStructure, VerificationReport};

#[derive(Parser, Debug)]
#[command(name = "sasaki-lab", version, about = "Verify left-invariant Sasakian and (k,mu) structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Absolute tolerance for residual checks
    #[arg(long, global = true, env = "SASAKI_LAB_TOL", default_value_t = 1e-9, allow_hyphen_values = true)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Spread grid sweeps over threads
    #[arg(long, global = true)]
    parallel: bool,

    /// Seed for random plane and vector sampling
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Report elapsed_ms as 0 so output is reproducible byte for byte
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jacobi identity, Sasakian axioms and center of a catalog or user structure
    VerifyFamily {
        #[arg(long, required_unless_present = "file")]
        family: Option<String>,
        /// Parameter assignment such as c=2 (repeatable)
        #[arg(long = "param", value_parser = parse_param, allow_hyphen_values = true)]
        params: Vec<(String, f64)>,
        /// JSON structure file (brackets, eta, optional gram/xi/phi)
        #[arg(long, conflicts_with_all = ["family", "params"])]
        file: Option<PathBuf>,
    },
    /// Curvature of the base: product of surfaces or complex hyperbolic plane
    VerifySymmetric {
        #[arg(long)]
        family: String,
        #[arg(long = "param", value_parser = parse_param, allow_hyphen_values = true)]
        params: Vec<(String, f64)>,
    },
    /// (k,mu) deformations of the special A2 structure
    KmuSweep {
        /// Comma separated deformation parameters, each > 1
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        a: Vec<f64>,
    },
    /// Boeckx invariant round trip through the sl(2,R) x aff(R) model
    Corollary {
        #[arg(long, alias = "corollary-I", allow_hyphen_values = true)]
        invariant: f64,
    },
    /// Every catalog-level check
    ReportAll,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Errors caused by the user's input rather than by a failed check.
#[derive(Debug)]
struct InvalidInput(String);

impl fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInput {}

fn invalid(e: impl fmt::Display) -> anyhow::Error {
    anyhow::Error::new(InvalidInput(format!("{e:#}")))
}

struct Ctx {
    cfg: SuiteConfig,
    format: Format,
    no_timing: bool,
}

impl Ctx {
    fn finish(&self, mut r: VerificationReport) -> VerificationReport {
        if self.no_timing {
            r.elapsed_ms = 0.0;
        }
        r
    }

    fn json<T: Serialize>(&self, value: &T) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(value)? + "\n")
    }
}

fn family_spec(name: &str, params: &[(String, f64)]) -> anyhow::Result<FamilySpec> {
    let family: Family = name.parse().map_err(invalid)?;
    let mut map = BTreeMap::new();
    for (k, v) in params {
        if map.insert(k.clone(), *v).is_some() {
            return Err(invalid(format!("parameter `{k}` given twice")));
        }
    }
    FamilySpec::from_params(family, &map).map_err(invalid)
}

fn verify_family(ctx: &Ctx, family: Option<String>, params: &[(String, f64)], file: Option<PathBuf>) -> anyhow::Result<(String, bool)> {
    let report = match file {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(invalid)?;
            let s = ContactMetricStructure::from_json_str(&text).map_err(invalid)?;
            let start = std::time::Instant::now();
            suite::structure_report(&path.display().to_string(), &s, ctx.cfg.tol)?.timed(start)
        }
        None => {
            let name = family.ok_or_else(|| invalid("either --family or --file is required"))?;
            let spec = family_spec(&name, params)?;
            suite::family_report(&spec, ctx.cfg.tol)?
        }
    };
    let report = ctx.finish(report);
    let out = match ctx.format {
        Format::Json => ctx.json(&report)?,
        Format::Text => report.to_text(),
    };
    Ok((out, report.passed()))
}

fn verify_symmetric(ctx: &Ctx, family: &str, params: &[(String, f64)]) -> anyhow::Result<(String, bool)> {
    let spec = family_spec(family, params)?;
    let mut out = suite::symmetric_report(&spec, &ctx.cfg)?;
    out.report = ctx.finish(out.report);
    let text = match ctx.format {
        Format::Json => ctx.json(&out)?,
        Format::Text => {
            let mut t = out.report.to_text();
            if let (Some(l), Some(m)) = (out.lambda, out.mu) {
                writeln!(t, "  lambda = {l:.10}")?;
                writeln!(t, "  mu     = {m:.10}")?;
            }
            if let Some(a) = out.alpha {
                writeln!(t, "  alpha  = {a:.10}")?;
            }
            t
        }
    };
    Ok((text, out.report.passed()))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.10}"))
}

fn sweep_table(sweep: &KMuSweep) -> String {
    let mut out = format!(
        "{:>8}  {:>14}  {:>14}  {:>14}  {:>10}  {}\n",
        "a", "k", "mu", "I", "residual", "status"
    );
    for row in &sweep.rows {
        out.push_str(&format!(
            "{:>8}  {:>14}  {:>14}  {:>14}  {:>10}  {}\n",
            row.a,
            fmt_opt(row.k),
            fmt_opt(row.mu),
            fmt_opt(row.boeckx),
            row.residual.map_or_else(|| "-".to_string(), |r| format!("{r:.2e}")),
            if row.passed() { "PASS" } else { "FAIL" },
        ));
        if let Some(e) = &row.error {
            out.push_str(&format!("          error: {e}\n"));
        }
        for c in row.report.failures() {
            out.push_str(&format!("          {} residual {:.2e} tol {:.2e}\n", c.name, c.residual, c.tol));
        }
    }
    out.push_str(&format!(
        "I increasing in a: {}\n",
        if sweep.monotone { "yes" } else { "NO" }
    ));
    out
}

fn kmu_sweep(ctx: &Ctx, a: &[f64]) -> anyhow::Result<(String, bool)> {
    if let Some(bad) = a.iter().find(|x| !(**x > 1.0) || !x.is_finite()) {
        return Err(invalid(format!("deformation parameters must exceed 1, got {bad}")));
    }
    let mut sweep = kmu::kmu_sweep(a, ctx.cfg.parallel, ctx.cfg.tol)?;
    for row in &mut sweep.rows {
        row.report = ctx.finish(row.report.clone());
    }
    let out = match ctx.format {
        Format::Json => ctx.json(&sweep.rows)?,
        Format::Text => sweep_table(&sweep),
    };
    Ok((out, sweep.passed()))
}

fn corollary(ctx: &Ctx, invariant: f64) -> anyhow::Result<(String, bool)> {
    if !(invariant < -1.0) || !invariant.is_finite() {
        return Err(invalid(format!("the invariant must be below -1, got {invariant}")));
    }
    let mut out = kmu::roundtrip_corollary(invariant, ctx.cfg.tol)?;
    out.report = ctx.finish(out.report);
    let text = match ctx.format {
        Format::Json => ctx.json(&out)?,
        Format::Text => {
            let mut t = out.report.to_text();
            writeln!(t, "  computed I = {}", fmt_opt(out.computed))?;
            writeln!(t, "  k = {:.10}, mu = {}", out.k, fmt_opt(out.mu))?;
            t
        }
    };
    Ok((text, out.report.passed()))
}

fn report_all(ctx: &Ctx) -> anyhow::Result<(String, bool)> {
    let reports: Vec<VerificationReport> = suite::report_all(&ctx.cfg).into_iter().map(|r| ctx.finish(r)).collect();
    let passed = reports.iter().all(VerificationReport::passed);
    let out = match ctx.format {
        Format::Json => ctx.json(&reports)?,
        Format::Text => {
            let mut t = String::new();
            for (i, r) in reports.iter().enumerate() {
                writeln!(t, "[{}] {}", i + 1, if r.passed() { "PASS" } else { "FAIL" })?;
                t.push_str(&r.to_text());
            }
            writeln!(t, "overall: {}", if passed { "PASS" } else { "FAIL" })?;
            t
        }
    };
    Ok((out, passed))
}

fn run(cli: Cli) -> anyhow::Result<(String, bool)> {
    if !(cli.tol > 0.0) || !cli.tol.is_finite() {
        return Err(invalid(anyhow!("--tol must be a positive number, got {}", cli.tol)));
    }
    let ctx = Ctx {
        cfg: SuiteConfig {
            tol: cli.tol,
            seed: cli.seed,
            parallel: cli.parallel,
        },
        format: cli.format,
        no_timing: cli.no_timing,
    };
    match cli.command {
        Command::VerifyFamily { family, params, file } => verify_family(&ctx, family, &params, file),
        Command::VerifySymmetric { family, params } => verify_symmetric(&ctx, &family, &params),
        Command::KmuSweep { a } => kmu_sweep(&ctx, &a),
        Command::Corollary { invariant } => corollary(&ctx, invariant),
        Command::ReportAll => report_all(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, passed)) => {
            let mut stdout = io::stdout().lock();
            match stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    eprintln!("error: writing output: {e}");
                    ExitCode::from(1)
                }
                _ if passed => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<InvalidInput>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
