use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sht::{HarmonicCoeffs, SphereField, SphereGrid};
use crate::error::{Error, GuardTrip, Result};

/// Sign of the cubic term in `i u_t + Delta u = sigma |u|^2 u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SphereSign {
    Defocusing,
    Focusing,
}

impl SphereSign {
    fn sigma(self) -> f64 {
        match self {
            SphereSign::Defocusing => 1.0,
            SphereSign::Focusing => -1.0,
        }
    }
}

/// Stored states of a sphere run.
#[derive(Clone, Debug)]
pub struct SphereTrajectory {
    pub grid: Arc<SphereGrid>,
    pub times: Vec<f64>,
    pub states: Vec<HarmonicCoeffs>,
    pub sign: SphereSign,
    pub nonlinear: bool,
}

impl SphereTrajectory {
    pub fn mass(&self, i: usize) -> f64 {
        self.states[i].l2_norm().powi(2)
    }

    pub fn energy(&self, i: usize) -> f64 {
        sphere_energy(&self.grid, &self.states[i], self.sign, self.nonlinear)
    }

    pub fn max_mass_drift(&self) -> f64 {
        let m0 = self.mass(0);
        (0..self.states.len()).map(|i| (self.mass(i) - m0).abs() / m0).fold(0.0, f64::max)
    }

    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.energy(0);
        (0..self.states.len()).map(|i| (self.energy(i) - e0).abs() / e0.abs().max(f64::MIN_POSITIVE)).fold(0.0, f64::max)
    }

    pub fn final_state(&self) -> &HarmonicCoeffs {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// `||grad u||^2 + (sigma / 2) ||u||_4^4`.
pub fn sphere_energy(grid: &Arc<SphereGrid>, c: &HarmonicCoeffs, sign: SphereSign, nonlinear: bool) -> f64 {
    let kin = c.dirichlet();
    if !nonlinear {
        return kin;
    }
    let u = grid.synthesise(c).expect("bandwidth checked at evolution start");
    kin + 0.5 * sign.sigma() * grid.integrate(|v| v.norm_sqr().powi(2), &u)
}

/// Options for [`evolve_sphere_nls`].
#[derive(Clone, Debug)]
pub struct SphereRunOptions {
    pub t_end: f64,
    pub dt: f64,
    pub sign: SphereSign,
    /// `false` drops the cubic term
    pub nonlinear: bool,
    /// store every `store_every` steps (the final state is always stored)
    pub store_every: usize,
    /// sup-norm growth factor that aborts the run
    pub blowup_factor: f64,
}

impl SphereRunOptions {
    pub fn new(t_end: f64, dt: f64) -> Self {
        SphereRunOptions { t_end, dt, sign: SphereSign::Defocusing, nonlinear: true, store_every: 1, blowup_factor: 1e3 }
    }
}

/// Galerkin right-hand side `-i sigma P_B(|u|^2 u)` in coefficient space.
fn cubic(grid: &SphereGrid, c: &HarmonicCoeffs, sigma: f64) -> HarmonicCoeffs {
    let u = grid.synthesise(c).expect("bandwidth checked at evolution start");
    let cube: Vec<Complex64> = u.iter().map(|v| v * v.norm_sqr()).collect();
    grid.analyse(&cube).expect("grid sized").scale(Complex64::new(0.0, -sigma))
}

fn linear(c: &HarmonicCoeffs, h: f64) -> HarmonicCoeffs {
    let mut out = c.clone();
    for (l, m, v) in c.iter() {
        out.set(l, m, v * Complex64::from_polar(1.0, -((l * (l + 1)) as f64) * h));
    }
    out
}

fn axpy(a: &HarmonicCoeffs, k: &HarmonicCoeffs, h: f64) -> HarmonicCoeffs {
    let mut out = a.clone();
    for (l, m, v) in k.iter() {
        out.set(l, m, a.get(l, m) + v * h);
    }
    out
}

/// Integrating-factor RK4 step for `c' = -i l(l+1) c - i sigma P_B(|u|^2 u)`.
fn step(grid: &SphereGrid, c: &HarmonicCoeffs, h: f64, sigma: f64) -> HarmonicCoeffs {
    let k1 = cubic(grid, c, sigma);
    let half = linear(c, 0.5 * h);
    let k1h = linear(&k1, 0.5 * h);
    let k2 = cubic(grid, &axpy(&half, &k1h, 0.5 * h), sigma);
    let k3 = cubic(grid, &axpy(&half, &k2, 0.5 * h), sigma);
    let k4 = cubic(grid, &linear(&axpy(&half, &k3, h), 0.5 * h), sigma);
    let full = linear(c, h);
    let mut out = full.clone();
    let k1f = linear(&k1, h);
    let k23 = linear(&axpy(&k2, &k3, 1.0), 0.5 * h);
    for (l, m, v) in full.iter() {
        let inc = k1f.get(l, m) + 2.0 * k23.get(l, m) + k4.get(l, m);
        out.set(l, m, v + inc * (h / 6.0));
    }
    out
}

/// Evolve `i u_t + Delta u = sigma |u|^2 u` on the sphere from `u0`.
pub fn evolve_sphere_nls(u0: &SphereField, opts: &SphereRunOptions) -> Result<SphereTrajectory> {
    evolve_sphere_coeffs(u0.grid(), &u0.coeffs(), opts)
}

pub fn evolve_sphere_coeffs(grid: &Arc<SphereGrid>, c0: &HarmonicCoeffs, opts: &SphereRunOptions) -> Result<SphereTrajectory> {
    if c0.bandwidth() != grid.bandwidth() {
        return Err(Error::GridMismatch(format!("bandwidth {} on grid {}", c0.bandwidth(), grid.bandwidth())));
    }
    if !(opts.t_end >= 0.0 && opts.t_end.is_finite()) {
        return Err(Error::invalid("t_end", "must be finite and non-negative"));
    }
    if !(opts.dt > 0.0) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    if opts.store_every == 0 {
        return Err(Error::invalid("store_every", "must be positive"));
    }
    let steps = (opts.t_end / opts.dt).ceil().max(if opts.t_end > 0.0 { 1.0 } else { 0.0 }) as usize;
    let h = if steps > 0 { opts.t_end / steps as f64 } else { 0.0 };
    let sigma = if opts.nonlinear { opts.sign.sigma() } else { 0.0 };
    let sup0 = grid.synthesise(c0)?.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut traj = SphereTrajectory {
        grid: grid.clone(),
        times: vec![0.0],
        states: vec![c0.clone()],
        sign: opts.sign,
        nonlinear: opts.nonlinear,
    };
    let mut c = c0.clone();
    for k in 1..=steps {
        c = if opts.nonlinear { step(grid, &c, h, sigma) } else { linear(&c, h) };
        let t = k as f64 * h;
        if k % opts.store_every == 0 || k == steps {
            let sup = grid.synthesise(&c)?.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if !sup.is_finite() || sup > opts.blowup_factor * sup0 {
                return Err(Error::Guard(GuardTrip::BlowUp { t, ratio: sup / sup0 }));
            }
            traj.times.push(t);
            traj.states.push(c.clone());
        }
    }
    Ok(traj)
}
