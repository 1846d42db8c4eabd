use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::{check_carrier, BOFamilyParams};
use super::report::ResidualReport;
use crate::error::{Error, Result};
use crate::evolvers::{evolve_observed, EquationKind, EquationSpec, RunStats, StepperSpec, Trajectory};
use crate::spectral_core::{derivative, l2_norm, Field1D, Grid1D, Modulated};

/// Time step of the low-frequency evolution.
pub const LOW_DT: f64 = 1.0 / 128.0;

/// Symbol of `H d_x^2`.
pub fn hilbert_dxx_symbol(xi: f64) -> Complex64 {
    Complex64::new(0.0, xi.signum() * xi * xi * (xi != 0.0) as i32 as f64)
}

fn hilbert_symbol(xi: f64) -> Complex64 {
    Complex64::new(0.0, -xi.signum() * (xi != 0.0) as i32 as f64)
}

fn json<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| Error::Format(e.to_string()))
}

/// `-omega lambda^-1 phi_tilde_lambda` on any grid of the box.
pub fn bo_low_data(p: &BOFamilyParams, grid: &Grid1D) -> Field1D {
    let sc = p.scale();
    let c = -(p.omega / p.lambda);
    let vals: Vec<f64> = grid.centered_nodes().iter().map(|&y| c * p.phi_tilde.eval(y / sc)).collect();
    Field1D::from_real(grid, &vals).expect("grid length")
}

/// Samples `phi(y / lambda^(1+delta))`.
pub fn bo_profile(p: &BOFamilyParams, grid: &Grid1D) -> Vec<f64> {
    let sc = p.scale();
    grid.centered_nodes().iter().map(|&y| p.phi.eval(y / sc)).collect()
}

/// Full-grid initial datum.
pub fn bo_initial_data(p: &BOFamilyParams, grid: &Grid1D) -> Result<Field1D> {
    check_carrier(grid, p.lambda, p.scale() * p.phi_tilde.radius())?;
    let a = p.amplitude();
    let low = bo_low_data(p, grid);
    let phi = bo_profile(p, grid);
    let vals: Vec<f64> = grid
        .centered_nodes()
        .iter()
        .zip(&phi)
        .zip(low.values())
        .map(|((&y, &f), l)| l.re - a * f * (p.lambda * y).cos())
        .collect();
    Field1D::from_real(grid, &vals)
}

pub fn bo_initial_modulated(p: &BOFamilyParams, env: &Grid1D) -> Result<Modulated> {
    let a = p.amplitude();
    let low = bo_low_data(p, env).real_parts();
    let amp: Vec<f64> = bo_profile(p, env).iter().map(|f| -a * f).collect();
    Modulated::low(env, p.lambda, &low)?.add(&Modulated::cos_wave(env, p.lambda, &amp, &vec![0.0; env.len()])?)
}

/// Full phase of the oscillating part, `lambda y - lambda^2 t - lambda t u_low(0, y)`.
pub fn bo_phase(p: &BOFamilyParams, t: f64, y: &[f64], u_low0: &[f64]) -> Vec<f64> {
    let l = p.lambda;
    y.iter().zip(u_low0).map(|(&y, &u)| l * y - l * l * t + -(l * t) * u).collect()
}

/// The same phase with the low part frozen to its plateau value, `lambda y - lambda^2 t + omega t`.
pub fn bo_plateau_phase(p: &BOFamilyParams, t: f64, y: &[f64]) -> Vec<f64> {
    let l = p.lambda;
    y.iter().map(|&y| l * y - l * l * t + p.omega * t).collect()
}

/// `u_low(t) - lambda^(-(1+delta)/2-s) phi_lambda cos(phase)` sampled on the grid of `u_low_t`.
pub fn bo_approx(p: &BOFamilyParams, t: f64, u_low_t: &Field1D, u_low0: &Field1D) -> Result<Field1D> {
    let g = u_low_t.grid();
    if g != u_low0.grid() {
        return Err(Error::GridMismatch("u_low(t) and u_low(0) on different grids".into()));
    }
    check_carrier(g, p.lambda, p.scale() * p.phi_tilde.radius())?;
    let a = p.amplitude();
    let ph = bo_phase(p, t, &g.centered_nodes(), &u_low0.real_parts());
    let vals: Vec<f64> = bo_profile(p, g)
        .iter()
        .zip(&ph)
        .zip(u_low_t.values())
        .map(|((f, th), l)| l.re - a * f * th.cos())
        .collect();
    Field1D::from_real(g, &vals)
}

/// Measured quantity against its bound with unit-free constant `C = 10`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub ok: bool,
}

impl BoundCheck {
    fn new(name: &str, measured: f64, bound: f64) -> Self {
        BoundCheck { name: name.to_string(), measured, bound, ok: measured <= bound }
    }
}

/// Low-frequency evolution on the envelope grid and the objects built on it.
#[derive(Clone, Debug)]
pub struct BoLowFamily {
    pub params: BOFamilyParams,
    pub traj: Trajectory,
    pub stats: RunStats,
    pub checks: Vec<BoundCheck>,
}

pub fn bo_low_family(p: &BOFamilyParams, t_end: f64, env: &Grid1D, dt: f64) -> Result<BoLowFamily> {
    p.validate()?;
    let eq = EquationSpec::new(EquationKind::Bo)?;
    let u0 = bo_low_data(p, env);
    let stepper = StepperSpec::etdrk4(dt);
    let mut traj = Trajectory::new();
    let stats = evolve_observed(&eq, &u0, t_end, &stepper, &mut |t, u| {
        traj.push(t, u.clone(), Default::default());
        Ok(())
    })?;
    let w = 10.0 * p.omega.abs();
    let (l, d) = (p.lambda, p.delta);
    let mut dk = [0.0f64; 3];
    let (mut grad_inf, mut drift) = (0.0f64, 0.0f64);
    for u in &traj.snapshots {
        for (k, m) in dk.iter_mut().enumerate() {
            *m = m.max(l2_norm(&derivative(u, k as u32)));
        }
        grad_inf = grad_inf.max(derivative(u, 1).max_abs());
        drift = drift.max(l2_norm(&u.sub(&u0)?));
    }
    let mut checks = vec![];
    for (k, m) in dk.iter().enumerate() {
        let b = w * l.powf(-0.5 * (1.0 - d) - k as f64 * (1.0 + d));
        checks.push(BoundCheck::new(&format!("dx{k}_l2"), *m, b));
    }
    checks.push(BoundCheck::new("dx1_linf", grad_inf, w * l.powf(-2.0 - d)));
    checks.push(BoundCheck::new("drift_l2", drift, w * l.powf(-2.0 - d)));
    Ok(BoLowFamily { params: *p, traj, stats, checks })
}

/// Low family on the default envelope grid over `[0, 1]`.
pub fn bo_low_family_default(p: &BOFamilyParams) -> Result<BoLowFamily> {
    bo_low_family(p, 1.0, &p.envelope_grid()?, LOW_DT)
}

impl BoLowFamily {
    pub fn grid(&self) -> &Grid1D {
        self.traj.snapshots[0].grid()
    }

    fn index(&self, t: f64) -> Result<usize> {
        let h = self.traj.times.get(1).copied().unwrap_or(1.0) - self.traj.times[0];
        self.traj
            .times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-9 * h.max(1e-300))
            .ok_or_else(|| Error::invalid("t", format!("{t} is not a stored time of the low family")))
    }

    pub fn low_at(&self, t: f64) -> Result<&Field1D> {
        Ok(&self.traj.snapshots[self.index(t)?])
    }

    /// Fourth-order finite difference in time, one-sided near the ends.
    fn low_dt(&self, k: usize) -> Result<Field1D> {
        let n = self.traj.len();
        if n < 5 {
            return Err(Error::invalid("trajectory", "need at least five stored times"));
        }
        let h = self.traj.times[1] - self.traj.times[0];
        let (idx, w): ([usize; 5], [f64; 5]) = if k >= 2 && k + 2 < n {
            ([k - 2, k - 1, k, k + 1, k + 2], [1.0, -8.0, 0.0, 8.0, -1.0])
        } else if k < 2 {
            ([k, k + 1, k + 2, k + 3, k + 4], [-25.0, 48.0, -36.0, 16.0, -3.0])
        } else {
            ([k, k - 1, k - 2, k - 3, k - 4], [25.0, -48.0, 36.0, -16.0, 3.0])
        };
        let g = self.grid();
        let mut acc = vec![0.0; g.len()];
        for (i, wi) in idx.iter().zip(w) {
            for (a, v) in acc.iter_mut().zip(self.traj.snapshots[*i].values()) {
                *a += wi * v.re;
            }
        }
        acc.iter_mut().for_each(|a| *a /= 12.0 * h);
        Field1D::from_real(g, &acc)
    }

    fn envelope_phase(&self, t: f64) -> Vec<f64> {
        let p = &self.params;
        let l = p.lambda;
        let u0 = self.traj.snapshots[0].real_parts();
        u0.iter().map(|&u| -l * l * t + -(l * t) * u).collect()
    }

    /// Oscillating part `-A phi_lambda cos(lambda y + theta)` with the phase taken from `u_low(0)`.
    pub fn high(&self, t: f64) -> Result<Modulated> {
        let p = &self.params;
        let g = self.grid();
        let amp: Vec<f64> = bo_profile(p, g).iter().map(|f| -p.amplitude() * f).collect();
        Modulated::cos_wave(g, p.lambda, &amp, &self.envelope_phase(t))
    }

    pub fn approx(&self, t: f64) -> Result<Modulated> {
        let low = Modulated::low(self.grid(), self.params.lambda, &self.low_at(t)?.real_parts())?;
        low.add(&self.high(t)?)
    }

    /// Pieces `F1..F5` and the total residual `(d_t + H d_x^2) u_ap + u_ap d_x u_ap`, all in `L^2`.
    pub fn residual(&self, t: f64) -> Result<ResidualReport> {
        let p = &self.params;
        let g = self.grid();
        let (lam, a) = (p.lambda, p.amplitude());
        let k = self.index(t)?;
        let ul = &self.traj.snapshots[k];
        let ul0 = &self.traj.snapshots[0];
        let low = Modulated::low(g, lam, &ul.real_parts())?;
        let low_t = Modulated::low(g, lam, &self.low_dt(k)?.real_parts())?;
        let phi = bo_profile(p, g);
        let n = g.len();
        let big_phase = vec![(-lam * lam + p.omega) * t; n];

        let f1 = low_t.add(&low.apply_symbol(hilbert_dxx_symbol)?)?.add(&low.mul(&low.dx())?)?;
        let prod = ul.mul(&Field1D::from_real(g, &phi)?)?;
        let f2_amp: Vec<f64> = derivative(&prod, 1).real_parts().iter().map(|v| -a * v).collect();
        let f2 = Modulated::cos_wave(g, lam, &f2_amp, &big_phase)?;
        let uh = self.high(t)?;
        let f3 = uh.mul(&uh.dx())?;
        let wave = Modulated::cos_wave(g, lam, &phi, &big_phase)?;
        let carrier = Modulated::cos_wave(g, lam, &vec![1.0; n], &big_phase)?;
        let f4 = wave
            .apply_symbol(hilbert_dxx_symbol)?
            .sub(&carrier.scale_harmonics(hilbert_dxx_symbol).mul_envelope(&phi)?)?
            .scale(-a);
        let f5_amp: Vec<f64> = ul
            .values()
            .iter()
            .zip(ul0.values())
            .zip(&phi)
            .map(|((u, u0), f)| a * lam * (u.re - u0.re) * f)
            .collect();
        let f5 = Modulated::sin_wave(g, lam, &f5_amp, &big_phase)?;

        let u0 = ul0.real_parts();
        let uh_t_amp: Vec<f64> = phi.iter().zip(&u0).map(|(f, u)| a * f * (-lam * lam - lam * u)).collect();
        let uh_t = Modulated::sin_wave(g, lam, &uh_t_amp, &self.envelope_phase(t))?;
        let u = low.add(&uh)?;
        let total = low_t.add(&uh_t)?.add(&u.apply_symbol(hilbert_dxx_symbol)?)?.add(&u.mul(&u.dx())?)?;

        let mut terms = BTreeMap::new();
        for (name, f) in [("F1", &f1), ("F2", &f2), ("F3", &f3), ("F4", &f4), ("F5", &f5)] {
            terms.insert(name.to_string(), f.l2_norm());
        }
        let e = Self::predicted_exponent(p);
        Ok(ResidualReport {
            param_block: json(p)?,
            lambda: lam,
            t,
            terms,
            total: total.l2_norm(),
            predicted_bound: lam.powf(e),
            predicted_exponent: e,
            fitted_exponent: None,
        })
    }

    /// `max(-delta - s, (1-delta)/2 - 2s)`.
    pub fn predicted_exponent(p: &BOFamilyParams) -> f64 {
        (-p.delta - p.s).max(0.5 * (1.0 - p.delta) - 2.0 * p.s)
    }
}

/// Exponents bounding each residual piece.
pub fn bo_term_exponents(p: &BOFamilyParams) -> BTreeMap<String, f64> {
    let (d, s) = (p.delta, p.s);
    [
        ("F2", -(3.0 + 3.0 * d) / 2.0 - s),
        ("F3", 0.5 * (1.0 - d) - 2.0 * s),
        ("F4", -d - s),
        ("F5", -1.0 - 2.0 * d - s),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

pub fn bo_residual_decomposition(p: &BOFamilyParams, t: f64) -> Result<ResidualReport> {
    bo_low_family_default(p)?.residual(t)
}

/// `||[H, phi_lambda] cos(lambda y)||_{L^2} / ||phi_lambda||_{L^2}`.
pub fn hilbert_commutator_ratio(p: &BOFamilyParams) -> Result<f64> {
    let g = p.envelope_grid()?;
    let phi = bo_profile(p, &g);
    let zero = vec![0.0; g.len()];
    let wave = Modulated::cos_wave(&g, p.lambda, &phi, &zero)?;
    let carrier = Modulated::cos_wave(&g, p.lambda, &vec![1.0; g.len()], &zero)?;
    let c = wave.apply_symbol(hilbert_symbol)?.sub(&carrier.scale_harmonics(hilbert_symbol).mul_envelope(&phi)?)?;
    let norm = Modulated::low(&g, p.lambda, &phi)?.l2_norm();
    if norm == 0.0 {
        return Err(Error::UndefinedRatio("phi vanishes".into()));
    }
    Ok(c.l2_norm() / norm)
}
