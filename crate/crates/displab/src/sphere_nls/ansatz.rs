use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use super::evolve::{evolve_sphere_coeffs, SphereRunOptions, SphereTrajectory};
use super::highest::{omega_n, phi_n_coeffs, HighestWeightParams};
use super::sht::{HarmonicCoeffs, SphereGrid};
use crate::error::{Error, Result};

/// `u(t) = kappa e^{-it(n(n+1) + kappa^2 omega_n)} ((1 + z(t)) phi_n + q(t))`, sampled.
#[derive(Clone, Debug)]
pub struct AnsatzSeries {
    pub n: usize,
    pub s: f64,
    pub kappa: f64,
    pub omega: f64,
    pub times: Vec<f64>,
    pub z: Vec<Complex64>,
    pub q_l2: Vec<f64>,
    pub q_h12: Vec<f64>,
    /// `|1 + z|^2 ||phi_n||^2 + ||q||^2 - ||phi_n||^2`, relative to `||phi_n||^2`
    pub mass_identity: Vec<f64>,
    /// `l(l+1) - n(n+1) >= l` for every degree `n < l <= B`
    pub coercive: bool,
    /// `||q||_{H^{1/2}}^2 <= sum (l(l+1) - n(n+1)) |q_l|^2 + ||q||^2` at every sample
    pub coercive_bound_ok: bool,
}

impl AnsatzSeries {
    pub fn max_abs_z(&self) -> f64 {
        self.z.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_q_l2(&self) -> f64 {
        self.q_l2.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_q_h12(&self) -> f64 {
        self.q_h12.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_mass_identity(&self) -> f64 {
        self.mass_identity.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// CSV rows `t, abs_z, arg_z, q_l2, q_h12, mass_identity`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["t", "abs_z", "arg_z", "q_l2", "q_h12", "mass_identity"])?;
        for i in 0..self.times.len() {
            w.write_record([
                format!("{:.16e}", self.times[i]),
                format!("{:.16e}", self.z[i].norm()),
                format!("{:.16e}", self.z[i].arg()),
                format!("{:.16e}", self.q_l2[i]),
                format!("{:.16e}", self.q_h12[i]),
                format!("{:.16e}", self.mass_identity[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `kappa phi_n` on bandwidth `B = 3n + 2`.
pub fn highest_weight_data(n: usize, s: f64, kappa: f64) -> Result<(Arc<SphereGrid>, HarmonicCoeffs)> {
    let grid = SphereGrid::new(3 * n + 2)?;
    let c = phi_n_coeffs(grid.bandwidth(), n, s)?.scale(Complex64::new(kappa, 0.0));
    Ok((grid, c))
}

/// Split each stored state into `z_n` and `q_n`.
pub fn ansatz_extract(traj: &SphereTrajectory, n: usize, s: f64, kappa: f64) -> Result<AnsatzSeries> {
    let b = traj.grid.bandwidth();
    let c0 = &traj.states[0];
    let off = c0.max_where(|_, m| m != n as i64);
    let scale = c0.l2_norm().max(f64::MIN_POSITIVE);
    if off > 1e-12 * scale {
        return Err(Error::invalid("data", format!("coefficients outside order {n} at t=0 ({off:.3e})")));
    }
    let omega = omega_n(n, s);
    let phi = phi_n_coeffs(b, n, s)?;
    let a = phi.get(n, n as i64);
    let phi_sq = phi.l2_norm().powi(2);
    let nn = (n * (n + 1)) as i64;
    let coercive = (n + 1..=b).all(|l| (l * (l + 1)) as i64 - nn >= l as i64);
    let mut out = AnsatzSeries {
        n,
        s,
        kappa,
        omega,
        times: traj.times.clone(),
        z: Vec::new(),
        q_l2: Vec::new(),
        q_h12: Vec::new(),
        mass_identity: Vec::new(),
        coercive,
        coercive_bound_ok: true,
    };
    for (&t, c) in traj.times.iter().zip(&traj.states) {
        let rot = Complex64::from_polar(1.0 / kappa, t * (nn as f64 + kappa * kappa * omega));
        let w = c.scale(rot);
        let one_z = w.get(n, n as i64) / a;
        let mut q = w.clone();
        q.set(n, n as i64, Complex64::new(0.0, 0.0));
        let ql2 = q.l2_norm();
        let qh = q.hs_norm(0.5);
        let gap: f64 = q.iter().map(|(l, _, v)| ((l * (l + 1)) as i64 - nn) as f64 * v.norm_sqr()).sum();
        if qh * qh > gap + ql2 * ql2 + 1e-12 * qh * qh {
            out.coercive_bound_ok = false;
        }
        out.z.push(one_z - 1.0);
        out.q_l2.push(ql2);
        out.q_h12.push(qh);
        out.mass_identity.push((one_z.norm_sqr() * phi_sq + ql2 * ql2 - phi_sq) / phi_sq);
    }
    Ok(out)
}

/// Evolve `kappa phi_n` and extract the ansatz variables.
pub fn highest_weight_run(n: usize, s: f64, kappa: f64, opts: &SphereRunOptions) -> Result<(SphereTrajectory, AnsatzSeries)> {
    let (grid, c0) = highest_weight_data(n, s, kappa)?;
    let traj = evolve_sphere_coeffs(&grid, &c0, opts)?;
    let series = ansatz_extract(&traj, n, s, kappa)?;
    Ok((traj, series))
}

/// Measured and predicted separation of the solutions from `kappa phi_n` and `kappa_n phi_n`.
#[derive(Clone, Debug)]
pub struct DecoherenceSeries {
    pub params: HighestWeightParams,
    pub kappa_n: f64,
    pub times: Vec<f64>,
    /// `||u - v||_{H^s} / (kappa ||phi_n||_{H^s})`
    pub measured: Vec<f64>,
    /// `|1 - (kappa_n / kappa) e^{i t n^beta}|`
    pub predicted: Vec<f64>,
}

impl DecoherenceSeries {
    /// Time of the first maximum of the prediction, `pi / n^beta`.
    pub fn first_peak_time(&self) -> f64 {
        std::f64::consts::PI / (self.params.n as f64).powf(self.params.beta)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["t", "measured", "predicted"])?;
        for i in 0..self.times.len() {
            w.write_record([
                format!("{:.16e}", self.times[i]),
                format!("{:.16e}", self.measured[i]),
                format!("{:.16e}", self.predicted[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn decoherence_pair(p: &HighestWeightParams, opts: &SphereRunOptions) -> Result<DecoherenceSeries> {
    p.validate()?;
    let kn2 = p.kappa_n_sq();
    if kn2 <= 0.0 {
        return Err(Error::invalid(
            "beta",
            format!("kappa_n^2 = {kn2:.4} <= 0 at n={}, kappa={}, beta={}", p.n, p.kappa, p.beta),
        ));
    }
    let kappa_n = kn2.sqrt();
    let (grid, c0) = highest_weight_data(p.n, p.s, p.kappa)?;
    let d0 = c0.scale(Complex64::new(kappa_n / p.kappa, 0.0));
    let (a, b) = rayon::join(|| evolve_sphere_coeffs(&grid, &c0, opts), || evolve_sphere_coeffs(&grid, &d0, opts));
    let (a, b) = (a?, b?);
    let norm = c0.hs_norm(p.s);
    let nb = (p.n as f64).powf(p.beta);
    let measured = a.states.iter().zip(&b.states).map(|(u, v)| u.sub(v).hs_norm(p.s) / norm).collect();
    let r = kappa_n / p.kappa;
    let predicted = a.times.iter().map(|&t| (Complex64::new(1.0, 0.0) - Complex64::from_polar(r, t * nb)).norm()).collect();
    Ok(DecoherenceSeries { params: p.clone(), kappa_n, times: a.times.clone(), measured, predicted })
}
