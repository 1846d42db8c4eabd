use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::fit_power_law;
use super::output::{Check, Outcome, Series};
use super::{Experiment, Preset, RunContext};
use crate::constructions::{loc_limit, loc_ratio};
use crate::error::{Error, Result};
use crate::spectral_core::{BumpKind, BumpProfile};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocRatioParams {
    pub s: f64,
    pub delta: f64,
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub profile: String,
    /// relative tolerance at the largest lambda
    pub tolerance: f64,
}

pub struct LocRatio;

impl Experiment for LocRatio {
    type Params = LocRatioParams;
    const NAME: &'static str = "loc-ratio";
    const DESCRIPTION: &'static str = "H^s norm of a modulated wave packet over its limit ||phi||/sqrt2 as lambda grows";

    fn defaults(preset: Preset) -> LocRatioParams {
        let lambdas = match preset {
            Preset::Quick => vec![32.0, 64.0, 128.0],
            Preset::Full => vec![64.0, 128.0, 256.0, 512.0],
        };
        LocRatioParams { s: 1.0, delta: 0.6, alphas: vec![0.0, 1.0], lambdas, profile: "compact-polynomial".into(), tolerance: 0.02 }
    }

    fn validate(p: &LocRatioParams) -> Result<()> {
        if !(p.s >= 0.0) {
            return Err(Error::invalid("s", format!("need s >= 0, got {}", p.s)));
        }
        if !(p.delta > 0.0 && p.delta < 1.0) {
            return Err(Error::invalid("delta", format!("need 0 < delta < 1, got {}", p.delta)));
        }
        if p.alphas.is_empty() {
            return Err(Error::invalid("alphas", "need at least one phase"));
        }
        if p.lambdas.len() < 2 || p.lambdas.iter().any(|&l| !(l >= 1.0)) {
            return Err(Error::invalid("lambdas", "need at least two values >= 1"));
        }
        BumpKind::parse(&p.profile)?;
        Ok(())
    }

    fn run(_ctx: &RunContext, p: &LocRatioParams) -> Result<Outcome> {
        let phi = BumpProfile::of_kind(BumpKind::parse(&p.profile)?).normalized();
        let limit = loc_limit(&phi);
        let mut lambdas = p.lambdas.clone();
        lambdas.sort_by(f64::total_cmp);
        let jobs: Vec<(f64, f64)> = lambdas.iter().flat_map(|&l| p.alphas.iter().map(move |&a| (l, a))).collect();
        let ratios: Vec<f64> =
            jobs.par_iter().map(|&(l, a)| loc_ratio(&phi, p.s, p.delta, a, l)).collect::<Result<Vec<f64>>>()?;
        let na = p.alphas.len();
        let mut cols = vec!["lambda".to_string()];
        cols.extend((0..na).map(|i| format!("ratio_alpha{i}")));
        cols.push("limit_ref".into());
        cols.push("max_rel_deviation".into());
        let colrefs: Vec<&str> = cols.iter().map(|s| s.as_str()).collect();
        let mut series = Series::new("loc_ratio", &colrefs);
        let mut devs = Vec::new();
        let mut out = Outcome::default();
        for (i, &l) in lambdas.iter().enumerate() {
            let row_r = &ratios[i * na..(i + 1) * na];
            let dev = row_r.iter().map(|r| (r - limit).abs() / limit).fold(0.0, f64::max);
            devs.push(dev);
            let mut row = vec![l];
            row.extend_from_slice(row_r);
            row.push(limit);
            row.push(dev);
            series.push(row);
            out.grids.insert(format!("lambda={l}"), format!("envelope, scale lambda^{}", 1.0 + p.delta));
        }
        for a in 0..na {
            let d: Vec<f64> = (0..lambdas.len()).map(|i| (ratios[i * na + a] - limit).abs()).collect();
            let dec = d.windows(2).all(|w| w[1] < w[0]);
            out.checks.push(Check::flag(&format!("deviation_decreasing_alpha{a}"), dec, format!("{d:?}")));
        }
        out.checks.push(Check::at_most("limit_within_tolerance", *devs.last().expect("two lambdas"), p.tolerance));
        if lambdas.len() >= 3 && devs.iter().all(|d| *d > 0.0) {
            out.fits.push(fit_power_law(&lambdas, &devs)?.named("loc_deviation"));
        }
        out.series.push(series);
        Ok(out)
    }
}
