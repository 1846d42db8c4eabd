use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::NLSConcentrationParams;
use crate::error::{Error, Result};
use crate::evolvers::{
    evolve_nls2d_observed, evolve_observed, nls_ode_solution, EquationKind, EquationSpec, NlsSign, StepperSpec,
};
use crate::spectral_core::{make_grid, sobolev_norm, Field1D, Field2D, Grid1D, Grid2D, Spectral};

/// Grid points per unit of `n` on the `2 pi` torus.
pub const NLS_POINTS_PER_N: usize = 32;

pub fn nls_grid_1d(p: &NLSConcentrationParams) -> Result<Grid1D> {
    make_grid((NLS_POINTS_PER_N * p.n as usize).next_power_of_two(), 2.0 * PI)
}

pub fn nls_grid_2d(p: &NLSConcentrationParams) -> Result<Grid2D> {
    Grid2D::new((NLS_POINTS_PER_N * p.n as usize).next_power_of_two(), 2.0 * PI)
}

fn check_dim(p: &NLSConcentrationParams, d: usize) -> Result<()> {
    if p.d != d {
        return Err(Error::invalid("d", format!("this sampler needs d = {d}, params have d = {}", p.d)));
    }
    Ok(())
}

/// `kappa_n n^(d/2-s) phi(n (x - pi))` on the circle.
pub fn nls_concentrating_data(p: &NLSConcentrationParams, grid: &Grid1D) -> Result<Field1D> {
    check_dim(p, 1)?;
    let (a, n) = (p.amplitude(), p.n as f64);
    Ok(Field1D::from_fn(grid, |x| Complex64::new(a * p.phi.eval(n * (x - PI)), 0.0)))
}

/// Radial profile `kappa_n n^(d/2-s) phi(n |x - (pi, pi)|)` on the square torus.
pub fn nls_concentrating_data_2d(p: &NLSConcentrationParams, grid: &Grid2D) -> Result<Field2D> {
    check_dim(p, 2)?;
    let (a, n) = (p.amplitude(), p.n as f64);
    Ok(Field2D::from_fn(grid, |x1, x2| {
        let r = ((x1 - PI).powi(2) + (x2 - PI).powi(2)).sqrt();
        Complex64::new(a * p.phi.eval(n * r), 0.0)
    }))
}

fn energy(n: u64, s: f64, l: u32, l2: f64, hl: f64) -> f64 {
    let n = n as f64;
    (n.powf(2.0 * s) * l2 * l2 + n.powf(-2.0 * (l as f64 - s)) * hl * hl).sqrt()
}

fn check_l(d: usize, l: u32) -> Result<()> {
    if 2 * l as usize <= d {
        return Err(Error::invalid("l", format!("need l > d/2, got l = {l} in d = {d}")));
    }
    Ok(())
}

/// `(n^(2s) ||u||^2_{L^2} + n^(-2(l-s)) ||u||^2_{H^l})^(1/2)`.
pub fn semiclassical_energy(u: &Field1D, n: u64, s: f64, l: u32) -> Result<f64> {
    check_l(1, l)?;
    Ok(energy(n, s, l, sobolev_norm(u, 0.0), sobolev_norm(u, l as f64)))
}

pub fn semiclassical_energy_2d(u: &Field2D, n: u64, s: f64, l: u32) -> Result<f64> {
    check_l(2, l)?;
    Ok(energy(n, s, l, u.hs_norm(0.0), u.hs_norm(l as f64)))
}

/// Distance between the evolved concentrating solution and its dispersionless model.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnsatzErrorSeries {
    pub times: Vec<f64>,
    /// `E_n(u_n(t) - v_n(t))`
    pub energy_error: Vec<f64>,
    /// `||u_n(t) - v_n(t)||_{H^s}`
    pub hs_error: Vec<f64>,
}

impl AnsatzErrorSeries {
    pub fn max_energy_error(&self) -> f64 {
        self.energy_error.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_hs_error(&self) -> f64 {
        self.hs_error.iter().copied().fold(0.0, f64::max)
    }
}

/// Sub-steps per sample keep the nonlinear phase advance per step at most 0.01.
fn stepper_for(p: &NLSConcentrationParams, t_end: f64, samples: usize) -> StepperSpec {
    let rate = p.amplitude().powi(2);
    let chunk = t_end / samples as f64;
    let sub = ((chunk * rate / 0.01).ceil() as usize).max(1);
    StepperSpec::etdrk4(chunk / sub as f64).with_dealias(false).with_store_every(sub)
}

/// Focusing cubic NLS from the concentrating data against `v_n(t) = u_n(0) e^{i t |u_n(0)|^2}` at
/// `samples + 1` equispaced times in `[0, t_end]`, `t_end <= t_n`.
pub fn nls_ansatz_error(p: &NLSConcentrationParams, t_end: f64, samples: usize) -> Result<AnsatzErrorSeries> {
    p.validate()?;
    let tn = p.t_n();
    if !(t_end >= 0.0 && t_end <= tn * (1.0 + 1e-12)) {
        return Err(Error::invalid("t", format!("need 0 <= t <= t_n = {tn:.6e}, got {t_end}")));
    }
    if samples == 0 {
        return Err(Error::invalid("samples", "need at least one sample"));
    }
    let stepper = stepper_for(p, t_end, samples);
    let sign = NlsSign::Focusing;
    let mut out = AnsatzErrorSeries::default();
    match p.d {
        1 => {
            let g = nls_grid_1d(p)?;
            let u0 = nls_concentrating_data(p, &g)?;
            let eq = EquationSpec::new(EquationKind::NlsTorus { d: 1, sign })?;
            evolve_observed(&eq, &u0, t_end, &stepper, &mut |t, u| {
                let diff = u.sub(&nls_ode_solution(&u0, t, sign))?;
                out.times.push(t);
                out.energy_error.push(semiclassical_energy(&diff, p.n, p.s, p.l)?);
                out.hs_error.push(sobolev_norm(&diff, p.s));
                Ok(())
            })?;
        }
        2 => {
            let g = nls_grid_2d(p)?;
            let u0 = nls_concentrating_data_2d(p, &g)?;
            let sigma = sign.sigma();
            evolve_nls2d_observed(&u0, t_end, &stepper, sign, true, &mut |t, u| {
                let v: Vec<Complex64> = u0
                    .values()
                    .iter()
                    .map(|a| a * Complex64::from_polar(1.0, sigma * t * a.norm_sqr()))
                    .collect();
                let diff = u.sub(&Field2D::new(&g, v)?)?;
                out.times.push(t);
                out.energy_error.push(semiclassical_energy_2d(&diff, p.n, p.s, p.l)?);
                out.hs_error.push(diff.hs_norm(p.s));
                Ok(())
            })?;
        }
        d => return Err(Error::invalid("d", format!("evolution runs only for d in {{1,2}}, got {d}"))),
    }
    Ok(out)
}

/// Predicted and measured `H^1` size of the dispersionless solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthPrediction {
    /// `t (kappa_n n^(d/2-s))^2`
    pub phase: f64,
    /// `kappa_n phase^s`
    pub predicted: f64,
    pub measured: f64,
    /// the lower bound is only asserted once the phase exceeds 10
    pub active: bool,
}

impl GrowthPrediction {
    pub fn holds(&self) -> bool {
        !self.active || self.measured >= self.predicted / 10.0
    }
}

fn spectral_grad(g: &Grid2D, f: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = g.n();
    let mut c = f.to_vec();
    g.forward(&mut c);
    let mut d1 = c.clone();
    let mut d2 = c;
    for i in 0..n {
        for j in 0..n {
            d1[i * n + j] *= Complex64::new(0.0, g.wavenumber(i));
            d2[i * n + j] *= Complex64::new(0.0, g.wavenumber(j));
        }
    }
    g.inverse(&mut d1);
    g.inverse(&mut d2);
    (d1, d2)
}

/// Growth of `v_n(t) = u_n(0) e^{i t |u_n(0)|^2}` in `H^1`; the gradient is taken in closed form
/// `e^{i theta} (grad u_0 + i t grad|u_0|^2 u_0)` so the fast phase needs no resolution.
pub fn nls_growth_prediction(p: &NLSConcentrationParams, t: f64) -> Result<GrowthPrediction> {
    if p.s != 1.0 {
        return Err(Error::invalid("s", format!("growth is measured for s = 1, got {}", p.s)));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", "need t >= 0"));
    }
    let phase = t * p.amplitude().powi(2);
    let predicted = p.kappa() * phase.powf(p.s);
    let measured = match p.d {
        1 => {
            let g = nls_grid_1d(p)?;
            let u0 = nls_concentrating_data(p, &g)?;
            let dens = Field1D::from_fn_real(&g, |x| p.amplitude().powi(2) * p.phi.eval(p.n as f64 * (x - PI)).powi(2));
            let du = crate::spectral_core::derivative(&u0, 1);
            let dd = crate::spectral_core::derivative(&dens, 1);
            let grad2: f64 = u0
                .values()
                .iter()
                .zip(du.values())
                .zip(dd.values())
                .map(|((u, a), b)| (a + Complex64::new(0.0, t) * b * u).norm_sqr())
                .sum::<f64>()
                * g.dx();
            let mass = sobolev_norm(&u0, 0.0).powi(2);
            (mass + grad2).sqrt()
        }
        2 => {
            let g = nls_grid_2d(p)?;
            let u0 = nls_concentrating_data_2d(p, &g)?;
            let dens: Vec<Complex64> = u0.values().iter().map(|v| Complex64::new(v.norm_sqr(), 0.0)).collect();
            let (u1, u2) = spectral_grad(&g, u0.values());
            let (r1, r2) = spectral_grad(&g, &dens);
            let it = Complex64::new(0.0, t);
            let mut grad2 = 0.0;
            for k in 0..u0.values().len() {
                let u = u0.values()[k];
                grad2 += (u1[k] + it * r1[k].re * u).norm_sqr() + (u2[k] + it * r2[k].re * u).norm_sqr();
            }
            grad2 *= g.cell_area();
            (u0.hs_norm(0.0).powi(2) + grad2).sqrt()
        }
        d => return Err(Error::invalid("d", format!("growth measured for d in {{1,2}}, got {d}"))),
    };
    Ok(GrowthPrediction { phase, predicted, measured, active: phase > 10.0 })
}
