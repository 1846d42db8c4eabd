use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_power_law, SlopeRule};
use super::output::{Check, Outcome, Series};
use super::{high_pass, largest_within_budget, sup_rel_dev, Experiment, Preset, RunContext};
use crate::constructions::{bo_initial_data, bo_low_family_default, BOFamilyParams, BoLowFamily};
use crate::error::{Error, Result};
use crate::evolvers::{evolve_observed, EquationKind, EquationSpec, Scheme, StepperSpec};
use crate::spectral_core::{sobolev_norm, Field1D};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoInstabilityParams {
    pub s: f64,
    pub delta: f64,
    pub lambdas: Vec<f64>,
    /// ansatz samples per unit time (must divide 128)
    pub ansatz_per_unit: u32,
    /// candidates for the evolved pair; the largest one within the memory budget runs
    pub evolve_lambdas: Vec<f64>,
    pub evolve_dt: f64,
    pub evolve_scheme: String,
    /// evolved samples per unit time
    pub evolve_per_unit: u32,
    pub ansatz_tolerance: f64,
    pub evolved_tolerance: f64,
}

pub struct BoInstability;

/// Stored snapshots plus about 24 working copies of the state.
fn evolve_bytes(p: &BOFamilyParams, samples: usize) -> f64 {
    match p.carrier_grid() {
        Ok(g) => g.len() as f64 * 16.0 * (samples as f64 + 24.0),
        Err(_) => f64::INFINITY,
    }
}

fn sqrt2_sin(t: f64) -> f64 {
    std::f64::consts::SQRT_2 * t.sin().abs()
}

struct AnsatzCurves {
    high: Vec<f64>,
    full: Vec<f64>,
}

fn ansatz_curves(plus: &BoLowFamily, minus: &BoLowFamily, times: &[f64], s: f64, norm: f64) -> Result<AnsatzCurves> {
    let mut high = Vec::new();
    let mut full = Vec::new();
    for &t in times {
        high.push(plus.high(t)?.sub(&minus.high(t)?)?.hs_norm(s) / norm);
        full.push(plus.approx(t)?.sub(&minus.approx(t)?)?.hs_norm(s) / norm);
    }
    Ok(AnsatzCurves { high, full })
}

impl Experiment for BoInstability {
    type Params = BoInstabilityParams;
    const NAME: &'static str = "bo-instability";
    const DESCRIPTION: &'static str = "Benjamin-Ono: separation of the omega = +1/-1 family members, ansatz sweep and evolved pair";

    fn defaults(preset: Preset) -> BoInstabilityParams {
        let (lambdas, ev) = match preset {
            Preset::Quick => (vec![16.0, 32.0, 64.0], vec![16.0]),
            Preset::Full => (vec![32.0, 64.0, 128.0, 256.0], vec![32.0, 64.0]),
        };
        BoInstabilityParams {
            s: 1.0,
            delta: 0.5,
            lambdas,
            ansatz_per_unit: 32,
            evolve_lambdas: ev,
            evolve_dt: 1.0 / 128.0,
            evolve_scheme: "if-rk4".into(),
            evolve_per_unit: 8,
            ansatz_tolerance: 0.05,
            evolved_tolerance: 0.15,
        }
    }

    fn validate(p: &BoInstabilityParams) -> Result<()> {
        if p.lambdas.len() < 3 {
            return Err(Error::invalid("lambdas", "need at least three values"));
        }
        for &l in p.lambdas.iter().chain(&p.evolve_lambdas) {
            BOFamilyParams::new(1.0, l, p.delta, p.s)?;
        }
        if p.ansatz_per_unit == 0 || 128 % p.ansatz_per_unit != 0 {
            return Err(Error::invalid("ansatz_per_unit", "must divide 128"));
        }
        let per = 1.0 / (p.evolve_per_unit.max(1) as f64 * p.evolve_dt);
        if p.evolve_per_unit == 0 || !(p.evolve_dt > 0.0) || (per - per.round()).abs() > 1e-9 {
            return Err(Error::invalid("evolve_dt", "1 / (evolve_per_unit * evolve_dt) must be an integer"));
        }
        Scheme::parse(&p.evolve_scheme)?;
        Ok(())
    }

    fn run(ctx: &RunContext, p: &BoInstabilityParams) -> Result<Outcome> {
        let mut out = Outcome::default();
        let mut lambdas = p.lambdas.clone();
        lambdas.sort_by(f64::total_cmp);
        let times: Vec<f64> = (0..=p.ansatz_per_unit).map(|k| k as f64 / p.ansatz_per_unit as f64).collect();
        let reference: Vec<f64> = times.iter().map(|&t| sqrt2_sin(t)).collect();
        let curves: Vec<AnsatzCurves> = lambdas
            .par_iter()
            .map(|&l| {
                let pp = BOFamilyParams::new(1.0, l, p.delta, p.s)?;
                let pm = pp.with_omega(-1.0);
                let (a, b) = rayon::join(|| bo_low_family_default(&pp), || bo_low_family_default(&pm));
                ansatz_curves(&a?, &b?, &times, p.s, pp.phi.l2_norm())
            })
            .collect::<Result<_>>()?;
        let mut cols = vec!["t".to_string()];
        cols.extend(lambdas.iter().map(|l| format!("lambda{l}")));
        cols.push("sqrt2_sin_ref".into());
        let cr: Vec<&str> = cols.iter().map(|s| s.as_str()).collect();
        let mut high = Series::new("bo_ansatz_high", &cr);
        let mut full = Series::new("bo_ansatz_full", &cr);
        for (k, &t) in times.iter().enumerate() {
            let mut rh = vec![t];
            let mut rf = vec![t];
            for c in &curves {
                rh.push(c.high[k]);
                rf.push(c.full[k]);
            }
            rh.push(reference[k]);
            rf.push(reference[k]);
            high.push(rh);
            full.push(rf);
        }
        out.series.push(high);
        out.series.push(full);
        let dev_high: Vec<f64> = curves.iter().map(|c| sup_rel_dev(&c.high, &reference)).collect();
        let dev_full: Vec<f64> = curves.iter().map(|c| sup_rel_dev(&c.full, &reference)).collect();
        let mut dev = Series::new("bo_ansatz_deviation", &["lambda", "high_deviation", "full_deviation", "initial_separation"]).loglog();
        for (i, &l) in lambdas.iter().enumerate() {
            dev.push(vec![l, dev_high[i], dev_full[i], curves[i].full[0]]);
        }
        out.series.push(dev);
        out.checks.push(Check::at_most("ansatz_high_vs_sqrt2_sin", *dev_high.last().expect("lambdas"), p.ansatz_tolerance));
        out.checks.push(Check::flag("ansatz_high_deviation_decreasing", dev_high.windows(2).all(|w| w[1] < w[0]), format!("{dev_high:?}")));
        out.checks.push(Check::flag("ansatz_full_deviation_decreasing", dev_full.windows(2).all(|w| w[1] < w[0]), format!("{dev_full:?}")));
        let init: Vec<f64> = curves.iter().map(|c| c.full[0]).collect();
        out.fits.push(fit_power_law(&lambdas, &init)?.against("bo_initial_separation", -(1.0 - p.delta) / 2.0, 0.05, SlopeRule::Within));
        out.notes.extend(BOFamilyParams::new(1.0, lambdas[0], p.delta, p.s)?.regime_warnings());

        let samples = p.evolve_per_unit as usize + 1;
        let lam = largest_within_budget(&p.evolve_lambdas, ctx.budget_bytes(), |l| {
            BOFamilyParams::new(1.0, l, p.delta, p.s).map(|q| evolve_bytes(&q, samples)).unwrap_or(f64::INFINITY)
        });
        let Some(lam) = lam else {
            out.notes.push("no evolved lambda fits the memory budget; ansatz only".into());
            return Ok(out);
        };
        let pp = BOFamilyParams::new(1.0, lam, p.delta, p.s)?;
        let pm = pp.with_omega(-1.0);
        let grid = pp.carrier_grid()?;
        out.grids.insert(format!("evolved lambda={lam}"), format!("N={} L={:.6}", grid.len(), grid.length()));
        let eq = EquationSpec::new(EquationKind::Bo)?;
        let store = (1.0 / (p.evolve_per_unit as f64 * p.evolve_dt)).round() as usize;
        let stepper = StepperSpec::new(Scheme::parse(&p.evolve_scheme)?, p.evolve_dt).with_store_every(store);
        let mut kept: Vec<Field1D> = Vec::with_capacity(samples);
        evolve_observed(&eq, &bo_initial_data(&pp, &grid)?, 1.0, &stepper, &mut |_, u| {
            kept.push(u.clone());
            Ok(())
        })?;
        let norm = pp.phi.l2_norm();
        let mut ev_t = Vec::new();
        let mut ev_full = Vec::new();
        let mut ev_high = Vec::new();
        let mut k = 0;
        evolve_observed(&eq, &bo_initial_data(&pm, &grid)?, 1.0, &stepper, &mut |t, u| {
            let d = kept[k].sub(u)?;
            ev_t.push(t);
            ev_full.push(sobolev_norm(&d, p.s) / norm);
            ev_high.push(sobolev_norm(&high_pass(&d, lam)?, p.s) / norm);
            k += 1;
            Ok(())
        })?;
        drop(kept);
        let (a, b) = rayon::join(|| bo_low_family_default(&pp), || bo_low_family_default(&pm));
        let an = ansatz_curves(&a?, &b?, &ev_t, p.s, norm)?;
        let mut s = Series::new("bo_evolved", &["t", "evolved_full", "ansatz_full", "evolved_high", "ansatz_high", "sqrt2_sin_ref"]);
        for i in 0..ev_t.len() {
            s.push(vec![ev_t[i], ev_full[i], an.full[i], ev_high[i], an.high[i], sqrt2_sin(ev_t[i])]);
        }
        out.series.push(s);
        out.checks.push(Check::at_most("evolved_vs_ansatz", sup_rel_dev(&ev_full, &an.full), p.evolved_tolerance));
        let last = *ev_t.last().expect("samples");
        let hl = *ev_high.last().expect("samples");
        out.checks.push(Check::at_most("evolved_high_at_t1_vs_limit", (hl - sqrt2_sin(last)).abs() / sqrt2_sin(last), p.evolved_tolerance));
        out.notes.push(format!("evolved pair at lambda = {lam}"));
        Ok(out)
    }
}
