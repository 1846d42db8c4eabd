use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_power_law, SlopeRule};
use super::output::{Check, Outcome, Series};
use super::{Experiment, Preset, RunContext};
use crate::error::{Error, Result};
use crate::evolvers::{evolve_final, EquationKind, EquationSpec, Scheme, StepperSpec};
use crate::spectral_core::{derivative, l2_norm, make_grid, mollify, sobolev_norm, Field1D, Grid1D};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BonaSmithParams {
    pub s: f64,
    pub n: usize,
    /// coefficient decay `(1 + xi^2)^(-decay/2)`
    pub decay: f64,
    pub eps: Vec<f64>,
    pub dt: f64,
    /// evaluation time as a fraction of `1 / max(-u0_x)`
    pub time_fraction: f64,
    pub slope_tolerance: f64,
}

pub struct BonaSmith;

/// Real data with `|c_k| = (1 + k^2)^(-decay/2)` and seeded phases on the dealiased band,
/// scaled so that `sup |u_x| = 1`.
pub fn rough_data(grid: &Grid1D, decay: f64, seed: u64) -> Result<Field1D> {
    let n = grid.len();
    let kmax = n / 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..=kmax {
        let a = (1.0 + (k * k) as f64).powf(-0.5 * decay);
        let c = Complex64::from_polar(a, rng.random_range(0.0..std::f64::consts::TAU));
        spec[k] = c;
        spec[n - k] = c.conj();
    }
    let u = Field1D::from_spectrum(grid, spec, true)?;
    let g = derivative(&u, 1).max_abs();
    Ok(u.scale(1.0 / g))
}

impl Experiment for BonaSmith {
    type Params = BonaSmithParams;
    const NAME: &'static str = "bona-smith";
    const DESCRIPTION: &'static str = "Burgers: solutions from mollified rough data converge in H^s as the mollification scale shrinks";

    fn defaults(preset: Preset) -> BonaSmithParams {
        let n = match preset {
            Preset::Quick => 2048,
            Preset::Full => 4096,
        };
        BonaSmithParams {
            s: 2.0,
            n,
            decay: 2.51,
            eps: vec![1e-1, 3e-2, 1e-2, 3e-3],
            dt: 1e-3,
            time_fraction: 0.25,
            slope_tolerance: 0.2,
        }
    }

    fn validate(p: &BonaSmithParams) -> Result<()> {
        if !(p.s > 1.5) {
            return Err(Error::invalid("s", format!("need s > 3/2, got {}", p.s)));
        }
        if p.n < 64 || !p.n.is_power_of_two() {
            return Err(Error::invalid("n", "need a power of two >= 64"));
        }
        if !(p.decay > p.s + 0.5) {
            return Err(Error::invalid("decay", "data must lie in H^s: need decay > s + 1/2"));
        }
        if p.eps.len() < 3 || p.eps.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::invalid("eps", "need at least three positive scales"));
        }
        let cut = 3.0 / p.n as f64;
        if p.eps.iter().any(|&e| e < cut) {
            return Err(Error::invalid("eps", format!("scales below {cut:.2e} are not resolved at n = {}", p.n)));
        }
        if !(p.time_fraction > 0.0 && p.time_fraction < 1.0) {
            return Err(Error::invalid("time_fraction", "need 0 < fraction < 1 (shock at 1)"));
        }
        if !(p.dt > 0.0) {
            return Err(Error::invalid("dt", "need dt > 0"));
        }
        Ok(())
    }

    fn run(ctx: &RunContext, p: &BonaSmithParams) -> Result<Outcome> {
        let mut out = Outcome::default();
        let grid = make_grid(p.n, std::f64::consts::TAU)?;
        out.grids.insert("torus".into(), format!("N={} L=2pi", p.n));
        let u0 = rough_data(&grid, p.decay, ctx.seed)?;
        let steep = derivative(&u0, 1).values().iter().map(|v| -v.re).fold(0.0, f64::max);
        let t = p.time_fraction / steep;
        out.notes.push(format!("max(-u0_x) = {steep:.6}, evaluation time {t:.6}"));
        let mut eps = p.eps.clone();
        eps.sort_by(|a, b| b.total_cmp(a));
        let eq = EquationSpec::new(EquationKind::Burgers)?;
        let st = StepperSpec::new(Scheme::parse("if-rk4")?, p.dt);
        let mut data: Vec<Field1D> = eps.iter().map(|&e| mollify(&u0, e)).collect::<Result<_>>()?;
        data.push(u0.clone());
        let sols: Vec<Field1D> = data.par_iter().map(|d| evolve_final(&eq, d, t, &st)).collect::<Result<_>>()?;
        let reference = sols.last().expect("reference");
        let mut table = Series::new(
            "bona_smith",
            &["eps", "diff_to_reference", "diff_to_next", "cauchy_rate", "v0_l2", "v0_hs"],
        );
        let mut to_ref = Vec::new();
        let mut v0 = Vec::new();
        for (i, &e) in eps.iter().enumerate() {
            let r = sobolev_norm(&sols[i].sub(reference)?, p.s);
            let next = if i + 1 < eps.len() { sobolev_norm(&sols[i].sub(&sols[i + 1])?, p.s) } else { f64::NAN };
            let rate = to_ref.last().map_or(f64::NAN, |prev: &f64| r / prev);
            let d0 = data[i].sub(&u0)?;
            let l2 = l2_norm(&d0);
            table.push(vec![e, r, next, rate, l2, sobolev_norm(&d0, p.s)]);
            to_ref.push(r);
            v0.push(l2);
        }
        out.series.push(table);
        out.checks.push(Check::flag(
            "table_strictly_decreasing",
            to_ref.windows(2).all(|w| w[1] < w[0]),
            format!("{to_ref:?}"),
        ));
        out.fits.push(fit_power_law(&eps, &v0)?.against("v0_l2_vs_eps", p.s, p.slope_tolerance, SlopeRule::AtLeast));
        Ok(out)
    }
}
