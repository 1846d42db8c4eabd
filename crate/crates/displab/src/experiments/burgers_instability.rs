use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_power_law, SlopeRule};
use super::output::{Check, Outcome, Series};
use super::{high_pass, largest_within_budget, sup_rel_dev, Experiment, Preset, RunContext};
use crate::constructions::{burgers_approx, burgers_parts, carrier_grid, BurgersFamilyParams};
use crate::error::{Error, Result};
use crate::evolvers::{evolve_observed, EquationKind, EquationSpec, Scheme, StepperSpec};
use crate::spectral_core::{sobolev_norm, Field1D, Grid1D};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BurgersInstabilityParams {
    pub s: f64,
    pub delta: f64,
    pub lambdas: Vec<f64>,
    pub samples: u32,
    pub evolve_lambdas: Vec<f64>,
    pub evolve_dt: f64,
    pub evolve_per_unit: u32,
    /// grid points per carrier wavelength in the evolved runs
    pub points_per_wave: f64,
    pub ansatz_tolerance: f64,
    pub evolved_tolerance: f64,
}

pub struct BurgersInstability;

fn grid_for(p: &BurgersFamilyParams, per_wave: f64) -> Result<Grid1D> {
    carrier_grid(p.box_length(), p.lambda, per_wave)
}

fn sqrt2_sin(t: f64) -> f64 {
    std::f64::consts::SQRT_2 * t.sin().abs()
}

struct Curves {
    high: Vec<f64>,
    full: Vec<f64>,
    omega0: f64,
}

fn curves(pp: &BurgersFamilyParams, times: &[f64], s: f64) -> Result<Curves> {
    let pm = pp.with_omega(-pp.omega);
    let env = pp.envelope_grid()?;
    let norm = pp.phi.l2_norm();
    let mut high = Vec::new();
    let mut full = Vec::new();
    for &t in times {
        let (la, ha) = burgers_parts(pp, t, &env)?;
        let (lb, hb) = burgers_parts(&pm, t, &env)?;
        high.push(ha.sub(&hb)?.hs_norm(s) / norm);
        full.push(la.add(&ha)?.sub(&lb.add(&hb)?)?.hs_norm(s) / norm);
    }
    let z = pp.with_omega(0.0);
    let (l0, _) = burgers_parts(&z, 0.0, &env)?;
    Ok(Curves { high, full, omega0: l0.hs_norm(s) })
}

impl Experiment for BurgersInstability {
    type Params = BurgersInstabilityParams;
    const NAME: &'static str = "burgers-instability";
    const DESCRIPTION: &'static str = "Burgers: separation of the omega = +1/-1 family members, ansatz sweep and evolved pair";

    fn defaults(preset: Preset) -> BurgersInstabilityParams {
        let (lambdas, ev) = match preset {
            Preset::Quick => (vec![16.0, 32.0, 64.0], vec![16.0]),
            Preset::Full => (vec![32.0, 64.0, 128.0, 256.0], vec![32.0, 64.0]),
        };
        BurgersInstabilityParams {
            s: 1.6,
            delta: 1.2,
            lambdas,
            samples: 33,
            evolve_lambdas: ev,
            evolve_dt: 1.0 / 128.0,
            evolve_per_unit: 8,
            points_per_wave: 16.0,
            ansatz_tolerance: 0.05,
            evolved_tolerance: 0.15,
        }
    }

    fn validate(p: &BurgersInstabilityParams) -> Result<()> {
        if p.lambdas.len() < 3 {
            return Err(Error::invalid("lambdas", "need at least three values"));
        }
        for &l in p.lambdas.iter().chain(&p.evolve_lambdas) {
            BurgersFamilyParams::new(1.0, l, p.delta, p.s)?;
        }
        if p.samples < 2 {
            return Err(Error::invalid("samples", "need at least two time samples"));
        }
        let per = 1.0 / (p.evolve_per_unit.max(1) as f64 * p.evolve_dt);
        if p.evolve_per_unit == 0 || !(p.evolve_dt > 0.0) || (per - per.round()).abs() > 1e-9 {
            return Err(Error::invalid("evolve_dt", "1 / (evolve_per_unit * evolve_dt) must be an integer"));
        }
        if !(p.points_per_wave >= 8.0) {
            return Err(Error::invalid("points_per_wave", "need at least 8 points per wavelength"));
        }
        Ok(())
    }

    fn run(ctx: &RunContext, p: &BurgersInstabilityParams) -> Result<Outcome> {
        let mut out = Outcome::default();
        let mut lambdas = p.lambdas.clone();
        lambdas.sort_by(f64::total_cmp);
        let times: Vec<f64> = (0..p.samples).map(|k| k as f64 / (p.samples - 1) as f64).collect();
        let reference: Vec<f64> = times.iter().map(|&t| sqrt2_sin(t)).collect();
        let cs: Vec<Curves> = lambdas
            .par_iter()
            .map(|&l| curves(&BurgersFamilyParams::new(1.0, l, p.delta, p.s)?, &times, p.s))
            .collect::<Result<_>>()?;
        let mut cols = vec!["t".to_string()];
        cols.extend(lambdas.iter().map(|l| format!("lambda{l}")));
        cols.push("sqrt2_sin_ref".into());
        let cr: Vec<&str> = cols.iter().map(|s| s.as_str()).collect();
        let mut high = Series::new("burgers_ansatz_high", &cr);
        for (k, &t) in times.iter().enumerate() {
            let mut row = vec![t];
            row.extend(cs.iter().map(|c| c.high[k]));
            row.push(reference[k]);
            high.push(row);
        }
        out.series.push(high);
        let dev: Vec<f64> = cs.iter().map(|c| sup_rel_dev(&c.high, &reference)).collect();
        let init: Vec<f64> = cs.iter().map(|c| c.full[0]).collect();
        let mut d = Series::new("burgers_ansatz_deviation", &["lambda", "high_deviation", "initial_separation"]).loglog();
        for (i, &l) in lambdas.iter().enumerate() {
            d.push(vec![l, dev[i], init[i]]);
        }
        out.series.push(d);
        out.checks.push(Check::at_most("ansatz_high_vs_sqrt2_sin", *dev.last().expect("lambdas"), p.ansatz_tolerance));
        out.checks.push(Check::flag("initial_separation_decreasing", init.windows(2).all(|w| w[1] < w[0]), format!("{init:?}")));
        let zero = cs.iter().map(|c| c.omega0).fold(0.0, f64::max);
        out.checks.push(Check::at_most("omega0_low_part_vanishes", zero, 1e-300));
        out.fits.push(fit_power_law(&lambdas, &init)?.against("burgers_initial_separation", 0.5 * p.delta - 1.0, 0.05, SlopeRule::Within));

        let samples = p.evolve_per_unit as usize + 1;
        let lam = largest_within_budget(&p.evolve_lambdas, ctx.budget_bytes(), |l| {
            BurgersFamilyParams::new(1.0, l, p.delta, p.s)
                .and_then(|q| grid_for(&q, p.points_per_wave))
                .map(|g| g.len() as f64 * 16.0 * (2.0 * samples as f64 + 24.0))
                .unwrap_or(f64::INFINITY)
        });
        let Some(lam) = lam else {
            out.notes.push("no evolved lambda fits the memory budget; ansatz only".into());
            return Ok(out);
        };
        let pp = BurgersFamilyParams::new(1.0, lam, p.delta, p.s)?;
        let pm = pp.with_omega(-1.0);
        let grid = grid_for(&pp, p.points_per_wave)?;
        out.grids.insert(format!("evolved lambda={lam}"), format!("N={} L={:.6}", grid.len(), grid.length()));
        let eq = EquationSpec::new(EquationKind::Burgers)?;
        let store = (1.0 / (p.evolve_per_unit as f64 * p.evolve_dt)).round() as usize;
        let stepper = StepperSpec::new(Scheme::parse("if-rk4")?, p.evolve_dt).with_store_every(store);
        let run = |q: &BurgersFamilyParams| -> Result<Vec<(f64, Field1D)>> {
            let mut v = Vec::with_capacity(samples);
            evolve_observed(&eq, &burgers_approx(q, 0.0, &grid)?, 1.0, &stepper, &mut |t, u| {
                v.push((t, u.clone()));
                Ok(())
            })?;
            Ok(v)
        };
        let (a, b) = rayon::join(|| run(&pp), || run(&pm));
        let (a, b) = (a?, b?);
        let norm = pp.phi.l2_norm();
        let mut ev_t = Vec::new();
        let mut ev = Vec::new();
        let mut ev_high = Vec::new();
        let mut an = Vec::new();
        for ((t, ua), (_, ub)) in a.iter().zip(&b) {
            let d = ua.sub(ub)?;
            ev_t.push(*t);
            ev.push(sobolev_norm(&d, p.s) / norm);
            ev_high.push(sobolev_norm(&high_pass(&d, lam)?, p.s) / norm);
            let d = burgers_approx(&pp, *t, &grid)?.sub(&burgers_approx(&pm, *t, &grid)?)?;
            an.push(sobolev_norm(&d, p.s) / norm);
        }
        let mut s = Series::new("burgers_evolved", &["t", "evolved", "ansatz", "evolved_high", "sqrt2_sin_ref"]);
        for i in 0..ev_t.len() {
            s.push(vec![ev_t[i], ev[i], an[i], ev_high[i], sqrt2_sin(ev_t[i])]);
        }
        out.series.push(s);
        out.checks.push(Check::at_most("evolved_vs_ansatz", sup_rel_dev(&ev, &an), p.evolved_tolerance));
        let last = *ev_t.last().expect("samples");
        let el = *ev_high.last().expect("samples");
        out.checks.push(Check::at_most("evolved_high_at_t1_vs_limit", (el - sqrt2_sin(last)).abs() / sqrt2_sin(last), p.evolved_tolerance));
        out.notes.push(format!("evolved pair at lambda = {lam}"));
        Ok(out)
    }
}
