use super::field::Field1D;
use super::grid::Grid1D;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingMode {
    /// `u(x) = lambda^{-1} v(x / lambda)` on a box `lambda` times longer
    BoForward,
    /// `v(y) = lambda u(lambda y)` on a box `lambda` times shorter
    BoInverse,
}

/// Spatial part of the BO scaling `u(t,x) = lambda^{-1} v(lambda^{-2} t, lambda^{-1} x)`.
///
/// Node count is kept, so samples map one to one.
pub fn scaling_transform(u: &Field1D, lambda: f64, mode: ScalingMode) -> Result<Field1D> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid("lambda", format!("need lambda > 0, got {lambda}")));
    }
    let (len, amp) = match mode {
        ScalingMode::BoForward => (u.grid().length() * lambda, 1.0 / lambda),
        ScalingMode::BoInverse => (u.grid().length() / lambda, lambda),
    };
    let grid = Grid1D::new(u.grid().len(), len)?;
    let vals = u.values().iter().map(|v| v * amp).collect();
    let mut out = Field1D::new(&grid, vals)?;
    if u.is_real() {
        out = out.to_real();
    }
    Ok(out)
}

/// Factor by which `||u_x||_inf` changes under the transform.
pub fn gradient_factor(lambda: f64, mode: ScalingMode) -> f64 {
    match mode {
        ScalingMode::BoForward => lambda.powi(-2),
        ScalingMode::BoInverse => lambda.powi(2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::{derivative, make_grid};
    use std::f64::consts::PI;

    #[test]
    fn gradient_scales_by_chain_rule() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let v = Field1D::from_fn_real(&g, |x| x.sin() + 0.3 * (2.0 * x).cos());
        let lam = 3.5;
        let u = scaling_transform(&v, lam, ScalingMode::BoForward).unwrap();
        let r = derivative(&u, 1).max_abs() / derivative(&v, 1).max_abs();
        assert!((r - gradient_factor(lam, ScalingMode::BoForward)).abs() < 1e-13);
        let back = scaling_transform(&u, lam, ScalingMode::BoInverse).unwrap();
        assert!((back.grid().length() - v.grid().length()).abs() < 1e-14);
        for (a, b) in back.values().iter().zip(v.values()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(scaling_transform(&v, 0.0, ScalingMode::BoForward).is_err());
    }
}
