use std::collections::BTreeMap;

use super::params::{check_carrier, BurgersFamilyParams};
use super::report::ResidualReport;
use crate::error::{Error, Result};
use crate::spectral_core::{Field1D, Grid1D, Modulated};

fn check_time(t: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::invalid("t", format!("need |t| <= 1, got {t}")));
    }
    Ok(())
}

/// Sampled on the box-centred coordinate `y = x - L/2`.
pub fn burgers_approx(p: &BurgersFamilyParams, t: f64, grid: &Grid1D) -> Result<Field1D> {
    check_time(t)?;
    let sc = p.scale();
    check_carrier(grid, p.lambda, sc * p.phi_tilde.radius())?;
    let a = p.amplitude();
    let y = grid.centered_nodes();
    let vals: Vec<f64> = y
        .iter()
        .map(|&y| {
            let z = y / sc;
            p.omega / p.lambda * p.phi_tilde.eval(z) + a * p.phi.eval(z) * (p.lambda * y - p.omega * t).cos()
        })
        .collect();
    Field1D::from_real(grid, &vals)
}

/// Low and oscillating parts on an envelope grid.
pub fn burgers_parts(p: &BurgersFamilyParams, t: f64, env: &Grid1D) -> Result<(Modulated, Modulated)> {
    check_time(t)?;
    let sc = p.scale();
    let a = p.amplitude();
    let y = env.centered_nodes();
    let low: Vec<f64> = y.iter().map(|&y| p.omega / p.lambda * p.phi_tilde.eval(y / sc)).collect();
    let amp: Vec<f64> = y.iter().map(|&y| a * p.phi.eval(y / sc)).collect();
    let phase = vec![-p.omega * t; y.len()];
    Ok((Modulated::low(env, p.lambda, &low)?, Modulated::cos_wave(env, p.lambda, &amp, &phase)?))
}

pub fn burgers_approx_modulated(p: &BurgersFamilyParams, t: f64, env: &Grid1D) -> Result<Modulated> {
    let (low, high) = burgers_parts(p, t, env)?;
    low.add(&high)
}

/// `L^2` norm of `d_t u_ap + u_ap d_x u_ap`, split into
/// `low_low = u_l d_x u_l`, `transport = d_t u_h + u_l d_x u_h`, `high_low = u_h d_x u_l`, `high_high = u_h d_x u_h`.
pub fn burgers_residual_on(p: &BurgersFamilyParams, t: f64, env: &Grid1D) -> Result<ResidualReport> {
    let (low, high) = burgers_parts(p, t, env)?;
    let sc = p.scale();
    let a = p.amplitude();
    let y = env.centered_nodes();
    let dt_amp: Vec<f64> = y.iter().map(|&y| p.omega * a * p.phi.eval(y / sc)).collect();
    let dt_high = Modulated::sin_wave(env, p.lambda, &dt_amp, &vec![-p.omega * t; y.len()])?;
    let (lx, hx) = (low.dx(), high.dx());
    let mut terms = BTreeMap::new();
    terms.insert("low_low".to_string(), low.mul(&lx)?.l2_norm());
    terms.insert("transport".to_string(), dt_high.add(&low.mul(&hx)?)?.l2_norm());
    terms.insert("high_low".to_string(), high.mul(&lx)?.l2_norm());
    terms.insert("high_high".to_string(), high.mul(&hx)?.l2_norm());
    let u = low.add(&high)?;
    let total = dt_high.add(&u.mul(&u.dx())?)?.l2_norm();
    Ok(ResidualReport {
        param_block: serde_json::to_value(p).map_err(|e| Error::Format(e.to_string()))?,
        lambda: p.lambda,
        t,
        terms,
        total,
        predicted_bound: p.lambda.powf(-p.s),
        predicted_exponent: -p.s,
        fitted_exponent: None,
    })
}

pub fn burgers_residual_norm(p: &BurgersFamilyParams, t: f64) -> Result<ResidualReport> {
    burgers_residual_on(p, t, &p.envelope_grid()?)
}
