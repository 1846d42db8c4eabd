use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sht::{gauss_legendre, HarmonicCoeffs, SphereField, SphereGrid};
use crate::error::{Error, Result};

/// Parameters of the highest-weight family `kappa * phi_n`, `phi_n = n^{1/4 - s} psi_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HighestWeightParams {
    pub n: usize,
    pub s: f64,
    pub kappa: f64,
    pub beta: f64,
}

impl HighestWeightParams {
    pub fn new(n: usize, s: f64, kappa: f64, beta: f64) -> Result<Self> {
        let p = HighestWeightParams { n, s, kappa, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::invalid("n", "must be at least 1"));
        }
        if !(self.s > 0.125 && self.s < 0.25) {
            return Err(Error::invalid("s", format!("{} outside (1/8, 1/4)", self.s)));
        }
        if !(self.kappa > 0.0 && self.kappa <= 1.0) {
            return Err(Error::invalid("kappa", format!("{} outside (0, 1]", self.kappa)));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::invalid("beta", format!("{} outside (0, 1)", self.beta)));
        }
        Ok(())
    }

    /// `B = 3n + 2`.
    pub fn bandwidth(&self) -> usize {
        3 * self.n + 2
    }

    pub fn omega(&self) -> f64 {
        omega_n(self.n, self.s)
    }

    /// `kappa_n^2 = kappa^2 - n^beta / omega_n`.
    pub fn kappa_n_sq(&self) -> f64 {
        self.kappa * self.kappa - (self.n as f64).powf(self.beta) / self.omega()
    }
}

/// `2 pi int_{-1}^{1} (1 - x^2)^k dx`, exact by Gauss-Legendre.
fn sin_power_integral(k: usize) -> f64 {
    let (x, w) = gauss_legendre(k + 1);
    2.0 * std::f64::consts::PI * x.iter().zip(&w).map(|(x, w)| w * (1.0 - x * x).powi(k as i32)).sum::<f64>()
}

/// `||psi_n||_{L^p}` for even `p`, `psi_n = sin^n(theta) e^{i n phi}`.
pub fn highest_weight_lp(n: usize, p: usize) -> Result<f64> {
    if p == 0 || p % 2 == 1 {
        return Err(Error::invalid("p", "closed quadrature needs an even exponent"));
    }
    Ok(sin_power_integral(n * p / 2).powf(1.0 / p as f64))
}

/// `omega_n = ||phi_n||_4^4 / ||phi_n||_2^2`.
pub fn omega_n(n: usize, s: f64) -> f64 {
    (n as f64).powf(0.5 - 2.0 * s) * sin_power_integral(2 * n) / sin_power_integral(n)
}

/// `psi_n` sampled on `grid`.
pub fn highest_weight(grid: &Arc<SphereGrid>, n: usize) -> Result<SphereField> {
    if 3 * n > grid.bandwidth() {
        return Err(Error::UnderResolved(format!("bandwidth {} below 3n = {}", grid.bandwidth(), 3 * n)));
    }
    Ok(SphereField::from_fn(grid, |x, phi| {
        Complex64::from_polar((1.0 - x * x).max(0.0).sqrt().powi(n as i32), n as f64 * phi)
    }))
}

/// `phi_n = n^{1/4 - s} psi_n` as coefficients: a single entry at `(n, n)`.
pub fn phi_n_coeffs(bandwidth: usize, n: usize, s: f64) -> Result<HarmonicCoeffs> {
    if n > bandwidth {
        return Err(Error::UnderResolved(format!("degree {n} above bandwidth {bandwidth}")));
    }
    let mut c = HarmonicCoeffs::zeros(bandwidth);
    let norm = sin_power_integral(n).sqrt();
    c.set(n, n as i64, Complex64::new((n as f64).powf(0.25 - s) * norm, 0.0));
    Ok(c)
}

/// `|phi_n|^2 phi_n = omega_n phi_n + r_n`.
#[derive(Clone, Debug)]
pub struct CubicDecomposition {
    pub n: usize,
    pub omega: f64,
    /// `omega_n` from the closed quadrature, for comparison
    pub omega_quadrature: f64,
    pub remainder: HarmonicCoeffs,
    /// largest `|r_{l,m}|`, `l <= n`, relative to `||r_n||`
    pub low_degree_residual: f64,
    /// largest coefficient of the cube at an order other than `n`
    pub off_order: f64,
}

impl CubicDecomposition {
    pub fn remainder_l2(&self) -> f64 {
        self.remainder.l2_norm()
    }
}

pub fn cubic_decompose(grid: &Arc<SphereGrid>, n: usize, s: f64) -> Result<CubicDecomposition> {
    let psi = highest_weight(grid, n)?;
    let a = (n as f64).powf(0.25 - s);
    let cube: Vec<Complex64> = psi.values().iter().map(|v| a * a * a * v.norm_sqr() * v).collect();
    let cc = grid.analyse(&cube)?;
    let phi = phi_n_coeffs(grid.bandwidth(), n, s)?;
    let omega = (cc.get(n, n as i64) / phi.get(n, n as i64)).re;
    let remainder = cc.sub(&phi.scale(Complex64::new(omega, 0.0)));
    let scale = remainder.l2_norm().max(f64::MIN_POSITIVE);
    let low_degree_residual = remainder.max_where(|l, _| l <= n) / scale;
    let off_order = cc.max_where(|_, m| m != n as i64);
    Ok(CubicDecomposition { n, omega, omega_quadrature: omega_n(n, s), remainder, low_degree_residual, off_order })
}
