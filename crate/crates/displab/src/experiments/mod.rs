//! Experiment suites: registry, parameter resolution, runners, outputs and plots.

mod bo_instability;
mod bona_smith;
mod burgers_instability;
mod energy_estimate;
pub mod fit;
mod loc_ratio;
mod nls_decoherence;
pub mod output;
pub mod plot;
mod residual_scaling;
mod surveys;

use std::path::Path;
use std::time::Instant;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral_core::{apply_multiplier, Field1D, MultiplierSpec, Parity};

pub use bo_instability::{BoInstability, BoInstabilityParams};
pub use bona_smith::{BonaSmith, BonaSmithParams};
pub use burgers_instability::{BurgersInstability, BurgersInstabilityParams};
pub use energy_estimate::{EnergyEstimate, EnergyEstimateParams};
pub use fit::{fit_power_law, SlopeFit, SlopeRule};
pub use loc_ratio::{LocRatio, LocRatioParams};
pub use nls_decoherence::{NlsDecoherence, NlsDecoherenceParams};
pub use output::{Check, Outcome, RunManifest, Series};
pub use residual_scaling::{ResidualScaling, ResidualScalingParams};
pub use surveys::{quantile, KatoPonce, KatoPonceParams, Strichartz, StrichartzParams};

/// Parameter preset; `quick` shrinks every sweep for smoke runs and determinism checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Quick,
    Full,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Preset::Quick),
            "full" => Ok(Preset::Full),
            other => Err(Error::invalid("preset", format!("unknown preset `{other}` (quick, full)"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Quick => "quick",
            Preset::Full => "full",
        }
    }
}

/// Runtime settings shared by all runners.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunContext {
    pub seed: u64,
    pub budget_mib: u64,
    pub preset: Preset,
}

impl RunContext {
    pub fn new(preset: Preset) -> Self {
        RunContext { seed: 0, budget_mib: DEFAULT_BUDGET_MIB, preset }
    }

    pub fn budget_bytes(&self) -> f64 {
        self.budget_mib as f64 * 1024.0 * 1024.0
    }
}

pub const DEFAULT_BUDGET_MIB: u64 = 2048;

/// A runnable suite with typed parameters.
pub trait Experiment {
    type Params: Serialize + DeserializeOwned + Clone;
    const NAME: &'static str;
    const DESCRIPTION: &'static str;
    fn defaults(preset: Preset) -> Self::Params;
    /// Reject parameters outside their family ranges before anything runs.
    fn validate(p: &Self::Params) -> Result<()>;
    fn run(ctx: &RunContext, p: &Self::Params) -> Result<Outcome>;
}

/// Everything needed to start a run.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub preset: Preset,
    /// overrides of the preset defaults, by parameter name
    pub params: toml::Table,
    pub seed: u64,
    pub budget_mib: u64,
}

impl ExperimentSpec {
    pub fn new(name: &str, preset: Preset) -> Self {
        ExperimentSpec { name: name.to_string(), preset, params: toml::Table::new(), seed: 0, budget_mib: DEFAULT_BUDGET_MIB }
    }

    pub fn with_param(mut self, key: &str, v: impl Into<toml::Value>) -> Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    fn context(&self) -> RunContext {
        RunContext { seed: self.seed, budget_mib: self.budget_mib, preset: self.preset }
    }
}

/// Registry entry with the typed parts erased.
pub struct Registration {
    pub name: &'static str,
    pub description: &'static str,
    defaults: fn(Preset) -> toml::Table,
    resolve: fn(Preset, &toml::Table) -> Result<serde_json::Value>,
    run: fn(&RunContext, &serde_json::Value) -> Result<Outcome>,
}

impl Registration {
    pub fn defaults(&self, preset: Preset) -> toml::Table {
        (self.defaults)(preset)
    }

    /// Merge overrides into the preset, type-check and validate.
    pub fn resolve(&self, preset: Preset, overrides: &toml::Table) -> Result<serde_json::Value> {
        (self.resolve)(preset, overrides)
    }
}

fn defaults_of<E: Experiment>(preset: Preset) -> toml::Table {
    toml::Table::try_from(E::defaults(preset)).expect("parameter structs serialize to tables")
}

/// Overlay `overrides` on the preset table, rejecting unknown keys.
pub fn resolve_params<E: Experiment>(preset: Preset, overrides: &toml::Table) -> Result<E::Params> {
    let mut t = defaults_of::<E>(preset);
    for (k, v) in overrides {
        if !t.contains_key(k) {
            let known: Vec<&str> = t.keys().map(|s| s.as_str()).collect();
            return Err(Error::invalid(k, format!("unknown parameter for {} (known: {})", E::NAME, known.join(", "))));
        }
        t.insert(k.clone(), v.clone());
    }
    let p: E::Params = toml::Value::Table(t).try_into().map_err(|e: toml::de::Error| Error::invalid("params", e.message().to_string()))?;
    E::validate(&p)?;
    Ok(p)
}

fn resolve_of<E: Experiment>(preset: Preset, overrides: &toml::Table) -> Result<serde_json::Value> {
    let p = resolve_params::<E>(preset, overrides)?;
    Ok(serde_json::to_value(p)?)
}

fn run_of<E: Experiment>(ctx: &RunContext, v: &serde_json::Value) -> Result<Outcome> {
    let p: E::Params = serde_json::from_value(v.clone())?;
    E::run(ctx, &p)
}

fn entry<E: Experiment>() -> Registration {
    Registration {
        name: E::NAME,
        description: E::DESCRIPTION,
        defaults: defaults_of::<E>,
        resolve: resolve_of::<E>,
        run: run_of::<E>,
    }
}

/// All experiments, in listing order.
pub fn registry() -> Vec<Registration> {
    vec![
        entry::<BoInstability>(),
        entry::<BurgersInstability>(),
        entry::<BonaSmith>(),
        entry::<NlsDecoherence>(),
        entry::<ResidualScaling>(),
        entry::<KatoPonce>(),
        entry::<Strichartz>(),
        entry::<EnergyEstimate>(),
        entry::<LocRatio>(),
    ]
}

pub fn find(name: &str) -> Result<Registration> {
    registry()
        .into_iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::invalid("experiment", format!("unknown experiment `{name}`")))
}

/// Run in memory without touching the filesystem.
pub fn run_in_memory(spec: &ExperimentSpec) -> Result<Outcome> {
    let reg = find(&spec.name)?;
    let params = reg.resolve(spec.preset, &spec.params)?;
    (reg.run)(&spec.context(), &params)
}

/// Validate, run and write `manifest.json`, `series/`, `fits/` and `plots/` under `dir`.
///
/// Invalid specs fail before `dir` is created. The manifest is first written with `partial = true`
/// so an interrupted run is recognisable.
pub fn run_to_dir(spec: &ExperimentSpec, dir: &Path) -> Result<(RunManifest, Outcome)> {
    let reg = find(&spec.name)?;
    let params = reg.resolve(spec.preset, &spec.params)?;
    output::prepare_dir(dir)?;
    let mut manifest = RunManifest {
        experiment: spec.name.clone(),
        preset: spec.preset.as_str().to_string(),
        seed: spec.seed,
        budget_mib: spec.budget_mib,
        params: params.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        grids: Default::default(),
        wall_seconds: 0.0,
        partial: true,
        pass: false,
        failures: Vec::new(),
        checks: Vec::new(),
        series: Vec::new(),
        fits: Vec::new(),
        checksums: Default::default(),
        notes: Vec::new(),
    };
    manifest.write(dir)?;
    let start = Instant::now();
    let outcome = (reg.run)(&spec.context(), &params)?;
    let (series, fits) = output::write_outcome(dir, &outcome)?;
    manifest.series = series;
    manifest.fits = fits;
    let plots = render_plots(dir, &manifest)?;
    let files = manifest.series.iter().map(|s| s.file.clone()).chain(manifest.fits.iter().cloned()).chain(plots);
    manifest.checksums = output::checksums(dir, files)?;
    manifest.grids = outcome.grids.clone();
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    manifest.partial = false;
    manifest.pass = outcome.all_pass();
    manifest.failures = outcome.failures();
    manifest.checks = outcome.checks.clone();
    manifest.notes = outcome.notes.clone();
    manifest.write(dir)?;
    Ok((manifest, outcome))
}

/// Regenerate `plots/*.svg` from the files listed in the manifest; returns relative paths.
pub fn render_plots(dir: &Path, manifest: &RunManifest) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir.join("plots"))?;
    let mut out = Vec::new();
    for e in &manifest.series {
        let mut s = Series::read(&dir.join(&e.file))?;
        s.loglog = e.loglog;
        let rel = format!("plots/{}.svg", s.name);
        std::fs::write(dir.join(&rel), plot::series_svg(&s))?;
        out.push(rel);
    }
    for f in &manifest.fits {
        let text = std::fs::read_to_string(dir.join(f))?;
        let fit: SlopeFit = serde_json::from_str(&text)?;
        let rel = format!("plots/fit_{}.svg", fit.name);
        std::fs::write(dir.join(&rel), plot::fit_svg(&fit))?;
        out.push(rel);
    }
    Ok(out)
}

/// Largest entry of `candidates` whose estimated footprint fits the budget.
pub fn largest_within_budget(candidates: &[f64], budget_bytes: f64, bytes: impl Fn(f64) -> f64) -> Option<f64> {
    candidates.iter().cloned().filter(|&c| bytes(c) <= budget_bytes).fold(None, |m, c| Some(m.map_or(c, |m: f64| m.max(c))))
}

/// Part of the spectrum with `|xi| > lambda / 2`.
pub fn high_pass(u: &Field1D, lambda: f64) -> Result<Field1D> {
    let m = MultiplierSpec::new("high_pass", Parity::Even, move |xi| Complex64::new((xi.abs() > 0.5 * lambda) as u8 as f64, 0.0));
    apply_multiplier(u, &m)
}

/// Largest relative deviation `max |a - b| / max |b|`.
pub fn sup_rel_dev(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

#[cfg(test)]
mod tests;
