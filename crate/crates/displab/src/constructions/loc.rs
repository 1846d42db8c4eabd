use super::params::{envelope_grid, ENVELOPE_POINTS_PER_UNIT};
use crate::error::{Error, Result};
use crate::spectral_core::{BumpProfile, Modulated};

/// `lambda^(-(1+delta)/2 - s) ||phi(x / lambda^(1+delta)) cos(lambda x + alpha)||_{H^s}`.
pub fn loc_ratio(phi: &BumpProfile, s: f64, delta: f64, alpha: f64, lambda: f64) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::invalid("s", format!("need s >= 0, got {s}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta", format!("need 0 < delta < 1, got {delta}")));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::invalid("lambda", "must be positive"));
    }
    if phi.amplitude == 0.0 {
        return Ok(0.0);
    }
    let scale = lambda.powf(1.0 + delta);
    let env = envelope_grid(16.0 * scale * phi.radius(), scale, lambda, ENVELOPE_POINTS_PER_UNIT)?;
    let amp: Vec<f64> = env.centered_nodes().iter().map(|&y| phi.eval(y / scale)).collect();
    let w = Modulated::cos_wave(&env, lambda, &amp, &vec![alpha; env.len()])?;
    Ok(lambda.powf(-0.5 * (1.0 + delta) - s) * w.hs_norm(s))
}

/// Limit value `||phi||_{L^2} / sqrt 2`.
pub fn loc_limit(phi: &BumpProfile) -> f64 {
    phi.l2_norm() / std::f64::consts::SQRT_2
}
