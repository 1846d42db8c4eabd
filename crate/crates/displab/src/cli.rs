//! Command-line front end: `run`, `list`, `report`.
//!
//! Exit codes: 0 success, 1 other errors, 2 invalid configuration, 3 guard trip or `--strict` failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::experiments::{self, output, ExperimentSpec, Preset, RunManifest, DEFAULT_BUDGET_MIB};

pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_GUARD_OR_STRICT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "displab", version, about = "Spectral laboratory for flow-map instability of dispersive equations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run one experiment and write its output directory
    Run {
        name: String,
        /// TOML file with `preset`, `seed`, `out`, `budget_mib`, `strict` and a `[params]` table
        #[arg(long)]
        config: Option<PathBuf>,
        /// output directory (default: $DISPLAB_OUT/<name>, else displab-out/<name>)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// exit with code 3 when any check or fit fails
        #[arg(long)]
        strict: bool,
        #[arg(long = "budget-mib")]
        budget_mib: Option<u64>,
        /// quick or full
        #[arg(long)]
        preset: Option<String>,
    },
    /// List registered experiments
    List,
    /// Summarise an output directory and regenerate its plots
    Report { dir: PathBuf },
}

/// Run configuration file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Option<String>,
    pub preset: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub budget_mib: Option<u64>,
    pub strict: Option<bool>,
    #[serde(default)]
    pub params: toml::Table,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::invalid("config", format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::invalid("config", format!("{}: {}", path.display(), e.message())))
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Guard(_) => EXIT_GUARD_OR_STRICT,
        Error::InvalidArgument { .. } | Error::InvalidGrid(_) => EXIT_INVALID,
        _ => EXIT_ERROR,
    }
}

/// Parse `args` (including the program name) and execute; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { 0 };
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::List => {
            for r in experiments::registry() {
                println!("{:<24} {}", r.name, r.description);
            }
            Ok(0)
        }
        Cmd::Report { dir } => report(&dir),
        Cmd::Run { name, config, out, seed, strict, budget_mib, preset } => {
            let cfg = match &config {
                Some(p) => RunConfig::load(p)?,
                None => RunConfig::default(),
            };
            if let Some(e) = &cfg.experiment {
                if e != &name {
                    return Err(Error::invalid("experiment", format!("config is for `{e}`, command line asks for `{name}`")));
                }
            }
            let preset = Preset::parse(preset.as_deref().or(cfg.preset.as_deref()).unwrap_or("full"))?;
            let mut spec = ExperimentSpec::new(&name, preset);
            spec.params = cfg.params.clone();
            spec.seed = seed.or(cfg.seed).unwrap_or(0);
            spec.budget_mib = budget_mib.or(cfg.budget_mib).unwrap_or(DEFAULT_BUDGET_MIB);
            let strict = strict || cfg.strict.unwrap_or(false);
            let dir = out.or(cfg.out.clone()).unwrap_or_else(|| output::default_root().join(&name));
            let (manifest, _) = experiments::run_to_dir(&spec, &dir)?;
            print_summary(&dir, &manifest);
            Ok(if strict && !manifest.pass { EXIT_GUARD_OR_STRICT } else { 0 })
        }
    }
}

fn report(dir: &Path) -> Result<i32> {
    let m = RunManifest::read(dir)?;
    if m.partial {
        println!("{}: partial run (interrupted before completion)", dir.display());
        return Ok(EXIT_ERROR);
    }
    experiments::render_plots(dir, &m)?;
    for (file, sum) in &m.checksums {
        if file.starts_with("plots/") {
            continue;
        }
        if output::sha256_file(&dir.join(file))? != *sum {
            println!("checksum mismatch: {file}");
        }
    }
    print_summary(dir, &m);
    Ok(0)
}

fn print_summary(dir: &Path, m: &RunManifest) {
    println!("{} [{}] seed={} -> {}", m.experiment, m.preset, m.seed, dir.display());
    for c in &m.checks {
        println!("  {} check {:<40} value={:<12.6e} threshold={:.6e}", tag(c.pass), c.name, c.value, c.threshold);
    }
    for f in &m.fits {
        match std::fs::read_to_string(dir.join(f)).ok().and_then(|t| serde_json::from_str::<experiments::SlopeFit>(&t).ok()) {
            Some(fit) => println!(
                "  {} fit   {:<40} slope={:.4} (+/- {:.4}) predicted={}",
                tag(fit.pass),
                fit.name,
                fit.slope,
                fit.slope_ci,
                fit.predicted.map_or("-".to_string(), |p| format!("{p:.4} {:?} {}", fit.rule, fit.tolerance))
            ),
            None => println!("  ???? fit   {f} unreadable"),
        }
    }
    for n in &m.notes {
        println!("  note: {n}");
    }
    println!("  {} in {:.1} s", if m.pass { "PASS" } else { "FAIL" }, m.wall_seconds);
}

fn tag(ok: bool) -> &'static str {
    if ok {
        "ok  "
    } else {
        "FAIL"
    }
}
