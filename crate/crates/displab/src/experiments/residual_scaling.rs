use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_power_law, SlopeRule};
use super::output::{Check, Outcome, Series};
use super::{Experiment, Preset, RunContext};
use crate::constructions::{
    bo_residual_decomposition, bo_term_exponents, burgers_residual_norm, BOFamilyParams, BoLowFamily,
    BurgersFamilyParams, ResidualReport,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualScalingParams {
    pub bo_s: f64,
    pub bo_delta: f64,
    pub bo_omega: f64,
    pub bo_lambdas: Vec<f64>,
    pub burgers_s: f64,
    pub burgers_delta: f64,
    pub burgers_omega: f64,
    pub burgers_lambdas: Vec<f64>,
    /// evaluation time
    pub t: f64,
    pub total_tolerance: f64,
    pub term_tolerance: f64,
}

pub struct ResidualScaling;

fn check_sweep(name: &str, l: &[f64]) -> Result<()> {
    if l.len() < 3 {
        return Err(Error::invalid(name, "need at least three lambdas for a slope"));
    }
    Ok(())
}

impl Experiment for ResidualScaling {
    type Params = ResidualScalingParams;
    const NAME: &'static str = "residual-scaling";
    const DESCRIPTION: &'static str = "log-log slopes of the Benjamin-Ono and Burgers ansatz residuals in lambda";

    fn defaults(preset: Preset) -> ResidualScalingParams {
        let lambdas = match preset {
            Preset::Quick => vec![16.0, 32.0, 64.0],
            Preset::Full => vec![32.0, 64.0, 128.0, 256.0],
        };
        ResidualScalingParams {
            bo_s: 1.0,
            bo_delta: 0.5,
            bo_omega: 1.0,
            bo_lambdas: lambdas.clone(),
            burgers_s: 1.6,
            burgers_delta: 1.2,
            burgers_omega: 1.0,
            burgers_lambdas: lambdas,
            t: 1.0,
            total_tolerance: 0.15,
            term_tolerance: 0.2,
        }
    }

    fn validate(p: &ResidualScalingParams) -> Result<()> {
        check_sweep("bo_lambdas", &p.bo_lambdas)?;
        check_sweep("burgers_lambdas", &p.burgers_lambdas)?;
        for &l in &p.bo_lambdas {
            BOFamilyParams::new(p.bo_omega, l, p.bo_delta, p.bo_s)?;
        }
        for &l in &p.burgers_lambdas {
            BurgersFamilyParams::new(p.burgers_omega, l, p.burgers_delta, p.burgers_s)?;
        }
        if !(p.t > 0.0 && p.t <= 1.0) || (p.t * 128.0).fract() != 0.0 {
            return Err(Error::invalid("t", "need 0 < t <= 1 on the 1/128 time lattice"));
        }
        Ok(())
    }

    fn run(_ctx: &RunContext, p: &ResidualScalingParams) -> Result<Outcome> {
        let mut out = Outcome::default();
        let mut bl = p.bo_lambdas.clone();
        bl.sort_by(f64::total_cmp);
        let bo: Vec<ResidualReport> = bl
            .par_iter()
            .map(|&l| bo_residual_decomposition(&BOFamilyParams::new(p.bo_omega, l, p.bo_delta, p.bo_s)?, p.t))
            .collect::<Result<_>>()?;
        let p0 = BOFamilyParams::new(p.bo_omega, bl[0], p.bo_delta, p.bo_s)?;
        let names: Vec<String> = bo[0].terms.keys().cloned().collect();
        let mut cols = vec!["lambda".to_string(), "total".to_string()];
        cols.extend(names.iter().cloned());
        cols.push("predicted_bound".into());
        let cr: Vec<&str> = cols.iter().map(|s| s.as_str()).collect();
        let mut s = Series::new("bo_residuals", &cr).loglog();
        for r in &bo {
            let mut row = vec![r.lambda, r.total];
            row.extend(names.iter().map(|n| r.terms[n]));
            row.push(r.predicted_bound);
            s.push(row);
            out.grids.insert(format!("bo lambda={}", r.lambda), "envelope grid, low family dt 1/128".into());
        }
        out.series.push(s);
        out.checks.push(Check::flag("bo_triangle", bo.iter().all(|r| r.triangle_ok()), "total <= sum of pieces"));
        let totals: Vec<f64> = bo.iter().map(|r| r.total).collect();
        let pred = BoLowFamily::predicted_exponent(&p0);
        out.fits.push(fit_power_law(&bl, &totals)?.against("bo_total", pred, p.total_tolerance, SlopeRule::AtMost));
        for (name, e) in bo_term_exponents(&p0) {
            let ys: Vec<f64> = bo.iter().map(|r| r.terms[&name]).collect();
            out.fits.push(fit_power_law(&bl, &ys)?.against(&format!("bo_{name}"), e, p.term_tolerance, SlopeRule::AtMost));
        }

        let mut ul = p.burgers_lambdas.clone();
        ul.sort_by(f64::total_cmp);
        let bu: Vec<ResidualReport> = ul
            .par_iter()
            .map(|&l| {
                burgers_residual_norm(&BurgersFamilyParams::new(p.burgers_omega, l, p.burgers_delta, p.burgers_s)?, p.t)
            })
            .collect::<Result<_>>()?;
        let names: Vec<String> = bu[0].terms.keys().cloned().collect();
        let mut cols = vec!["lambda".to_string(), "total".to_string()];
        cols.extend(names.iter().cloned());
        cols.push("predicted_bound".into());
        let cr: Vec<&str> = cols.iter().map(|s| s.as_str()).collect();
        let mut s = Series::new("burgers_residuals", &cr).loglog();
        for r in &bu {
            let mut row = vec![r.lambda, r.total];
            row.extend(names.iter().map(|n| r.terms[n]));
            row.push(r.predicted_bound);
            s.push(row);
        }
        out.series.push(s);
        out.checks.push(Check::flag("burgers_triangle", bu.iter().all(|r| r.triangle_ok()), "total <= sum of pieces"));
        let totals: Vec<f64> = bu.iter().map(|r| r.total).collect();
        let f = fit_power_law(&ul, &totals)?.against("burgers_total", -p.burgers_s, 0.0, SlopeRule::AtMost);
        out.checks.push(Check::at_least("burgers_epsilon", -f.slope - p.burgers_s, 1e-12));
        out.notes.push(format!("burgers fitted epsilon = {:.4}", -f.slope - p.burgers_s));
        out.fits.push(f);
        Ok(out)
    }
}
