use num_complex::Complex64;

use super::conserved::conserved_quantities;
use super::equation::{EquationKind, EquationSpec};
use super::evolve::{linear_symbols, Rhs1D, Trajectory};
use crate::error::{Error, Result};
use crate::spectral_core::{hs_norm_from_spectrum, Field1D};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugeDirection {
    /// plain mKdV solution `v` to the gauged unknown `u(t,x) = v(t, x + c(t))`
    ToGauged,
    /// gauged `u` back to `v(t,x) = u(t, x - c(t))`
    FromGauged,
}

/// `c(t) = int_0^t int u^2`, trapezoid in time over the stored snapshots.
pub fn gauge_shift(traj: &Trajectory) -> Vec<f64> {
    let mut out = Vec::with_capacity(traj.len());
    let mut acc = 0.0;
    for k in 0..traj.len() {
        if k > 0 {
            let dt = traj.times[k] - traj.times[k - 1];
            acc += 0.5 * dt * (traj.diagnostics[k - 1].mass + traj.diagnostics[k].mass);
        }
        out.push(acc);
    }
    out
}

/// Translate by `a`: returns `x -> u(x + a)`.
pub fn translate(u: &Field1D, a: f64) -> Field1D {
    let g = u.grid();
    let nyq = g.nyquist_index();
    let mut c = u.spectrum();
    for (k, ck) in c.iter_mut().enumerate() {
        let xi = g.wavenumber(k);
        if k == nyq {
            *ck *= (xi * a).cos();
        } else {
            *ck *= Complex64::from_polar(1.0, xi * a);
        }
    }
    Field1D::from_spectrum(g, c, u.is_real()).expect("same grid")
}

pub fn gauge_transform_mkdv(traj: &Trajectory, dir: GaugeDirection) -> Result<Trajectory> {
    let Some(g) = traj.grid() else {
        return Ok(Trajectory::new());
    };
    if (g.length() - 1.0).abs() > 1e-14 {
        return Err(Error::invalid("length", format!("gauge transform lives on the unit torus, got L = {}", g.length())));
    }
    let shift = gauge_shift(traj);
    let target = EquationSpec::new(match dir {
        GaugeDirection::ToGauged => EquationKind::GaugedMkdv,
        GaugeDirection::FromGauged => EquationKind::Mkdv,
    })?;
    let sgn = match dir {
        GaugeDirection::ToGauged => 1.0,
        GaugeDirection::FromGauged => -1.0,
    };
    let mut out = Trajectory::new();
    for ((t, u), c) in traj.times.iter().zip(&traj.snapshots).zip(&shift) {
        let v = translate(u, sgn * c);
        let d = conserved_quantities(&target, &v);
        out.push(*t, v, d);
    }
    Ok(out)
}

/// Largest `L^2` residual of `u_t - L u - N(u)` over interior snapshots, with `u_t` by fourth-order
/// central differences; stored times must be equispaced.
pub fn pde_residual(eq: &EquationSpec, traj: &Trajectory) -> Result<f64> {
    let n = traj.len();
    if n < 5 {
        return Err(Error::invalid("trajectory", "need at least five snapshots"));
    }
    let h = traj.times[1] - traj.times[0];
    for w in traj.times.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h {
            return Err(Error::invalid("trajectory", "snapshots must be equispaced in time"));
        }
    }
    let g = traj.snapshots[0].grid();
    let lin = linear_symbols(eq, g);
    let mut rhs = Rhs1D::new(eq, g, false);
    let specs: Vec<Vec<Complex64>> = traj.snapshots.iter().map(|u| u.spectrum()).collect();
    let mut worst: f64 = 0.0;
    let mut nl = vec![Complex64::new(0.0, 0.0); g.len()];
    for k in 2..n - 2 {
        rhs.eval(&specs[k], &mut nl);
        let r: Vec<Complex64> = (0..g.len())
            .map(|j| {
                let dt = (-specs[k + 2][j] + 8.0 * specs[k + 1][j] - 8.0 * specs[k - 1][j] + specs[k - 2][j]) / (12.0 * h);
                dt - lin[j] * specs[k][j] - nl[j]
            })
            .collect();
        worst = worst.max(hs_norm_from_spectrum(g, &r, 0.0));
    }
    Ok(worst)
}
