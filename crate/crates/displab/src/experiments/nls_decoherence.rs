use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{Check, Outcome, Series};
use super::{Experiment, Preset, RunContext};
use crate::constructions::{nls_ansatz_error, NLSConcentrationParams};
use crate::error::{Error, Result};
use crate::evolvers::{evolve_observed, nls_ode_solution, EquationKind, EquationSpec, NlsSign, Scheme, StepperSpec};
use crate::spectral_core::{make_grid, sobolev_norm, Field1D};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NlsDecoherenceParams {
    pub s: f64,
    pub n: u64,
    pub kappa: f64,
    /// second amplitude is `kappa (1 - eta)`
    pub eta: f64,
    pub sign: NlsSign,
    pub points_per_n: usize,
    /// nonlinear phase advance per step
    pub phase_step: f64,
    pub samples: usize,
    pub model_tolerance: f64,
    pub min_growth: f64,
    /// concentration scales for the 2-D ansatz-error sweep; empty skips it
    pub ansatz_2d_ns: Vec<u64>,
    pub ansatz_2d_s: f64,
}

pub struct NlsDecoherence;

/// Gaussian packet `a n^(1/2 - s) exp(-n^2 (x - pi)^2 / 2)` on the circle.
fn packet(grid: &crate::spectral_core::Grid1D, a: f64, n: f64, s: f64) -> Field1D {
    let amp = a * n.powf(0.5 - s);
    Field1D::from_fn(grid, |x| Complex64::new(amp * (-(n * (x - PI)).powi(2) / 2.0).exp(), 0.0))
}

fn model_sep(u: &Field1D, v: &Field1D, t: f64, sign: NlsSign, s: f64) -> Result<f64> {
    Ok(sobolev_norm(&nls_ode_solution(u, t, sign).sub(&nls_ode_solution(v, t, sign))?, s))
}

/// First local maximum of the two-phase model, searched on `[0, 2 t_pi]` where `t_pi` is the time
/// at which the peak phases differ by `pi`.
fn model_first_peak(u: &Field1D, v: &Field1D, t_pi: f64, sign: NlsSign, s: f64) -> Result<f64> {
    let m = 400;
    let ts: Vec<f64> = (0..=m).map(|k| 2.0 * t_pi * k as f64 / m as f64).collect();
    let ys: Vec<f64> = ts.par_iter().map(|&t| model_sep(u, v, t, sign, s)).collect::<Result<_>>()?;
    let k = (1..m).find(|&k| ys[k] >= ys[k - 1] && ys[k] > ys[k + 1]).unwrap_or(m);
    Ok(ts[k])
}

impl Experiment for NlsDecoherence {
    type Params = NlsDecoherenceParams;
    const NAME: &'static str = "nls-decoherence-torus";
    const DESCRIPTION: &'static str =
        "cubic NLS on the circle: negative-regularity separation of two nearby concentrated amplitudes against the two-phase model";

    fn defaults(preset: Preset) -> NlsDecoherenceParams {
        let (n, ns) = match preset {
            Preset::Quick => (32, vec![]),
            Preset::Full => (64, vec![16, 32, 64]),
        };
        NlsDecoherenceParams {
            s: -0.25,
            n,
            kappa: 100.0,
            eta: 0.05,
            sign: NlsSign::Defocusing,
            points_per_n: 512,
            phase_step: 0.01,
            samples: 40,
            model_tolerance: 0.2,
            min_growth: 10.0,
            ansatz_2d_ns: ns,
            ansatz_2d_s: -0.1,
        }
    }

    fn validate(p: &NlsDecoherenceParams) -> Result<()> {
        if !(p.s > -0.5 && p.s < 0.0) {
            return Err(Error::invalid("s", format!("need -1/2 < s < 0, got {}", p.s)));
        }
        if p.n < 2 {
            return Err(Error::invalid("n", "need n >= 2"));
        }
        if !(p.kappa > 0.0) {
            return Err(Error::invalid("kappa", "need kappa > 0"));
        }
        if !(p.eta > 0.0 && p.eta < 1.0) {
            return Err(Error::invalid("eta", "need 0 < eta < 1"));
        }
        if p.points_per_n < 16 || !(p.points_per_n * p.n as usize).is_power_of_two() {
            return Err(Error::invalid("points_per_n", "need points_per_n * n a power of two, points_per_n >= 16"));
        }
        if !(p.phase_step > 0.0 && p.phase_step <= 0.1) {
            return Err(Error::invalid("phase_step", "need 0 < phase_step <= 0.1"));
        }
        if p.samples < 4 {
            return Err(Error::invalid("samples", "need at least 4 samples"));
        }
        for &n in &p.ansatz_2d_ns {
            NLSConcentrationParams::new(2, p.ansatz_2d_s, n, 0.1, 0.2, 2)?;
        }
        Ok(())
    }

    fn run(_ctx: &RunContext, p: &NlsDecoherenceParams) -> Result<Outcome> {
        let mut out = Outcome::default();
        let nf = p.n as f64;
        let grid = make_grid(p.points_per_n * p.n as usize, 2.0 * PI)?;
        out.grids.insert("circle".into(), format!("N={} L=2pi", grid.len()));
        let (k1, k2) = (p.kappa, p.kappa * (1.0 - p.eta));
        let u0 = packet(&grid, k1, nf, p.s);
        let v0 = packet(&grid, k2, nf, p.s);
        let a2 = nf.powf(1.0 - 2.0 * p.s);
        let t_pi = PI / ((k1 * k1 - k2 * k2) * a2);
        let t_end = model_first_peak(&u0, &v0, t_pi, p.sign, p.s)?;
        let dt = p.phase_step / (k1 * k1 * a2);
        let chunk = t_end / p.samples as f64;
        let sub = (chunk / dt).ceil() as usize;
        let st = StepperSpec::new(Scheme::parse("if-rk4")?, chunk / sub as f64)
            .with_dealias(false)
            .with_store_every(sub)
            .without_guards();
        let eq = EquationSpec::new(EquationKind::NlsTorus { d: 1, sign: p.sign })?;
        let run = |d: &Field1D| -> Result<Vec<Field1D>> {
            let mut v = Vec::new();
            evolve_observed(&eq, d, t_end, &st, &mut |_, u| {
                v.push(u.clone());
                Ok(())
            })?;
            Ok(v)
        };
        let (a, b) = rayon::join(|| run(&u0), || run(&v0));
        let (a, b) = (a?, b?);
        let mut series = Series::new("nls_decoherence", &["t", "measured", "model", "ratio"]);
        let mut worst: f64 = 0.0;
        let mut first = 0.0;
        let mut last = 0.0;
        for (i, (ua, ub)) in a.iter().zip(&b).enumerate() {
            let t = chunk * i as f64;
            let m = sobolev_norm(&ua.sub(ub)?, p.s);
            let q = model_sep(&u0, &v0, t, p.sign, p.s)?;
            worst = worst.max((m / q - 1.0).abs());
            if i == 0 {
                first = m;
            }
            last = m;
            series.push(vec![t, m, q, m / q]);
        }
        out.series.push(series);
        out.checks.push(Check::at_most("model_deviation_to_first_peak", worst, p.model_tolerance));
        out.checks.push(Check::at_least("final_over_initial", last / first, p.min_growth));
        out.notes.push(format!(
            "first model peak at t = {t_end:.6e}; dispersive time n^-2 = {:.3e}; {} steps",
            1.0 / (nf * nf),
            sub * p.samples
        ));

        if !p.ansatz_2d_ns.is_empty() {
            let errs: Vec<(u64, f64)> = p
                .ansatz_2d_ns
                .iter()
                .map(|&n| {
                    let q = NLSConcentrationParams::new(2, p.ansatz_2d_s, n, 0.1, 0.2, 2)?;
                    let e = nls_ansatz_error(&q, q.t_n(), 8)?;
                    Ok((n, e.max_energy_error()))
                })
                .collect::<Result<_>>()?;
            let mut s = Series::new("nls_ansatz_error_2d", &["n", "max_energy_error"]).loglog();
            for &(n, e) in &errs {
                s.push(vec![n as f64, e]);
            }
            out.series.push(s);
            let ys: Vec<f64> = errs.iter().map(|e| e.1).collect();
            out.checks.push(Check::flag("ansatz_error_2d_decreasing", ys.windows(2).all(|w| w[1] < w[0]), format!("{ys:?}")));
        }
        Ok(out)
    }
}
