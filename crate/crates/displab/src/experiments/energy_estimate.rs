use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{Check, Outcome, Series};
use super::{Experiment, Preset, RunContext};
use crate::error::{Error, Result};
use crate::evolvers::{evolve_observed, EquationKind, EquationSpec, Scheme, StepperSpec};
use crate::spectral_core::{derivative, make_grid, sobolev_norm, Field1D, Grid1D};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyEstimateParams {
    pub s_values: Vec<f64>,
    /// data `A v0` for each amplitude `A`
    pub amplitudes: Vec<f64>,
    pub n: usize,
    /// a priori window `T = c / (1 + ||u0||_{H^s})`
    pub window_constant: f64,
    pub time_samples: usize,
    /// largest `dt * max|u0| * k_max`
    pub cfl: f64,
    pub halving_tolerance: f64,
}

pub struct EnergyEstimate;

fn base_profile(x: f64) -> f64 {
    x.sin() + 0.5 * (2.0 * x).cos() + 0.3 * (3.0 * x).sin()
}

/// `sqrt(sum_k k^2 (1 + k^2)^-s / L)` over the grid band: `||u_x||_inf <= K ||u||_{H^s}`.
pub fn sobolev_embedding_constant(grid: &Grid1D, s: f64) -> f64 {
    let sum: f64 = (0..grid.len()).map(|i| grid.wavenumber(i)).map(|xi| xi * xi * (1.0 + xi * xi).powf(-s)).sum();
    (sum / grid.length()).sqrt()
}

struct Track {
    times: Vec<f64>,
    hs: Vec<f64>,
    grad: Vec<f64>,
}

fn track(u0: &Field1D, t_end: f64, m: usize, cfl: f64, s: f64) -> Result<Track> {
    let eq = EquationSpec::new(EquationKind::Burgers)?;
    let g = u0.grid();
    let kmax = g.max_wavenumber() * 2.0 / 3.0;
    let dt0 = cfl / (kmax * u0.max_abs().max(1e-300));
    let chunk = t_end / m as f64;
    let sub = (chunk / dt0).ceil().max(1.0) as usize;
    let st = StepperSpec::new(Scheme::parse("if-rk4")?, chunk / sub as f64).with_store_every(sub);
    let mut tr = Track { times: vec![], hs: vec![], grad: vec![] };
    evolve_observed(&eq, u0, t_end, &st, &mut |t, u| {
        tr.times.push(t);
        tr.hs.push(sobolev_norm(u, s));
        tr.grad.push(derivative(u, 1).max_abs());
        Ok(())
    })?;
    Ok(tr)
}

fn cumulative_trapezoid(t: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0];
    for i in 1..t.len() {
        out.push(out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]));
    }
    out
}

/// First time `y` reaches `level`, by linear interpolation.
fn crossing(t: &[f64], y: &[f64], level: f64) -> Option<f64> {
    (1..t.len()).find(|&i| y[i] >= level).map(|i| {
        let f = (level - y[i - 1]) / (y[i] - y[i - 1]);
        t[i - 1] + f * (t[i] - t[i - 1])
    })
}

impl Experiment for EnergyEstimate {
    type Params = EnergyEstimateParams;
    const NAME: &'static str = "energy-estimate";
    const DESCRIPTION: &'static str = "Burgers: Gronwall constant of the H^s energy estimate, a priori window and gradient-integral bounds";

    fn defaults(preset: Preset) -> EnergyEstimateParams {
        let (amps, n) = match preset {
            Preset::Quick => (vec![0.05, 0.5, 1.0, 2.0], 512),
            Preset::Full => (vec![0.05, 0.5, 1.0, 2.0, 4.0, 8.0], 1024),
        };
        EnergyEstimateParams {
            s_values: vec![1.6, 2.0],
            amplitudes: amps,
            n,
            window_constant: 1.0,
            time_samples: 64,
            cfl: 0.5,
            halving_tolerance: 0.05,
        }
    }

    fn validate(p: &EnergyEstimateParams) -> Result<()> {
        if p.s_values.is_empty() || p.s_values.iter().any(|&s| !(s > 1.5)) {
            return Err(Error::invalid("s_values", "need s > 3/2"));
        }
        if p.amplitudes.len() < 2 || p.amplitudes.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::invalid("amplitudes", "need at least two positive amplitudes"));
        }
        if p.n < 32 || !p.n.is_power_of_two() {
            return Err(Error::invalid("n", "need a power of two >= 32"));
        }
        if !(p.window_constant > 0.0) {
            return Err(Error::invalid("window_constant", "need c > 0"));
        }
        if p.time_samples < 8 {
            return Err(Error::invalid("time_samples", "need at least 8 samples"));
        }
        if !(p.cfl > 0.0 && p.cfl <= 2.0) {
            return Err(Error::invalid("cfl", "need 0 < cfl <= 2"));
        }
        Ok(())
    }

    fn run(_ctx: &RunContext, p: &EnergyEstimateParams) -> Result<Outcome> {
        let mut out = Outcome::default();
        let grid = make_grid(p.n, std::f64::consts::TAU)?;
        out.grids.insert("torus".into(), format!("N={} L=2pi", p.n));
        let v0 = Field1D::from_fn_real(&grid, base_profile);
        let mut amps = p.amplitudes.clone();
        amps.sort_by(f64::total_cmp);
        let jobs: Vec<(f64, f64)> = p.s_values.iter().flat_map(|&s| amps.iter().map(move |&a| (s, a))).collect();
        let rows: Vec<Vec<f64>> = jobs
            .par_iter()
            .map(|&(s, a)| {
                let u0 = v0.scale(a);
                let n0 = sobolev_norm(&u0, s);
                let t_end = p.window_constant / (1.0 + n0);
                let tr = track(&u0, t_end, p.time_samples, p.cfl, s)?;
                let integral = cumulative_trapezoid(&tr.times, &tr.grad);
                let c1 = (1..tr.times.len())
                    .filter(|&i| integral[i] > 0.0)
                    .map(|i| (tr.hs[i] / n0).ln() / integral[i])
                    .fold(0.0, f64::max);
                let sup_hs = tr.hs.iter().cloned().fold(0.0, f64::max);
                let key = *integral.last().expect("samples");
                let c2 = key / (t_end * sup_hs);
                Ok(vec![s, a, n0, t_end, c1, key, a * t_end, c2, sobolev_embedding_constant(&grid, s)])
            })
            .collect::<Result<_>>()?;
        let mut table = Series::new(
            "energy_estimate",
            &["s", "amplitude", "hs0", "window", "gronwall_c", "grad_integral", "rescaled_window", "kam2_c", "embedding_bound"],
        );
        for r in &rows {
            table.push(r.clone());
        }
        out.series.push(table);
        for &s in &p.s_values {
            let mine: Vec<&Vec<f64>> = rows.iter().filter(|r| r[0] == s).collect();
            let c2: Vec<f64> = mine.iter().map(|r| r[7]).collect();
            let bound = mine[0][8];
            out.checks.push(Check::at_most(&format!("kam2_below_embedding_s{s}"), c2.iter().cloned().fold(0.0, f64::max), bound));
            let spread = c2.iter().cloned().fold(0.0, f64::max) / c2.iter().cloned().fold(f64::INFINITY, f64::min);
            out.notes.push(format!("s = {s}: kam2 constant spread max/min = {spread:.4}"));
            let c1: Vec<f64> = mine.iter().map(|r| r[4]).collect();
            out.checks.push(Check::flag(&format!("gronwall_finite_s{s}"), c1.iter().all(|c| c.is_finite()), format!("{c1:?}")));
            let key: Vec<f64> = mine.iter().map(|r| r[5]).collect();
            let bounded = key.iter().zip(&mine).all(|(k, r)| *k <= r[8] * p.window_constant * r[2] / (1.0 + r[2]) * 1.5);
            out.checks.push(Check::flag(&format!("key_integral_bounded_s{s}"), bounded, format!("{key:?}")));
        }

        let m = derivative(&v0, 1).values().iter().map(|v| -v.re).fold(0.0, f64::max);
        let g0 = derivative(&v0, 1).max_abs();
        let adm: Vec<f64> = amps
            .par_iter()
            .map(|&a| {
                let u0 = v0.scale(a);
                let tr = track(&u0, 0.6 / (m * a), 4 * p.time_samples, p.cfl, p.s_values[0])?;
                crossing(&tr.times, &tr.grad, 2.0 * g0 * a)
                    .ok_or_else(|| Error::invalid("amplitudes", "gradient did not double inside the guard window"))
            })
            .collect::<Result<_>>()?;
        let mut sweep = Series::new("admissible_time", &["amplitude", "gradient_doubling_time", "ratio_to_previous"]).loglog();
        let mut worst: f64 = 0.0;
        for (i, &a) in amps.iter().enumerate() {
            let ratio = if i == 0 { f64::NAN } else { adm[i] / adm[i - 1] };
            if i > 0 {
                let expect = amps[i - 1] / a;
                worst = worst.max((ratio / expect - 1.0).abs());
            }
            sweep.push(vec![a, adm[i], ratio]);
        }
        out.series.push(sweep);
        out.checks.push(Check::at_most("admissible_time_scales_inversely", worst, p.halving_tolerance));
        Ok(out)
    }
}
