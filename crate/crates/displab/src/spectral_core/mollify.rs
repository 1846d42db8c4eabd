use super::field::Field1D;
use super::multiplier::{apply_multiplier, MultiplierSpec};
use super::norms::sobolev_norm;
use crate::error::{Error, Result};

/// Smooth spectral cutoff `rho_hat(eps xi)`; identity on `|xi| <= 1/eps`, zero beyond `2/eps`.
pub fn mollify(u: &Field1D, eps: f64) -> Result<Field1D> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid("eps", format!("need eps > 0, got {eps}")));
    }
    apply_multiplier(u, &MultiplierSpec::mollifier(eps))
}

/// Commutator `[D^s, f] g = D^s(f g) - f D^s g`.
pub fn commutator(f: &Field1D, g: &Field1D, s: f64) -> Result<Field1D> {
    let ds = MultiplierSpec::bessel(s);
    let fg = f.mul(g)?;
    let a = apply_multiplier(&fg, &ds)?;
    let b = f.mul(&apply_multiplier(g, &ds)?)?;
    a.sub(&b)
}

/// Left side over right side of the commutator estimate.
pub fn kato_ponce_ratio(f: &Field1D, g: &Field1D, s: f64) -> Result<f64> {
    if s < 1.0 {
        return Err(Error::invalid("s", format!("need s >= 1, got {s}")));
    }
    let fx = apply_multiplier(f, &MultiplierSpec::derivative(1))?;
    let den = fx.max_abs() * sobolev_norm(g, s - 1.0) + sobolev_norm(f, s) * g.max_abs();
    let num = super::norms::l2_norm(&commutator(f, g, s)?);
    if den == 0.0 || !den.is_finite() {
        return Err(Error::UndefinedRatio("commutator bound denominator vanishes".into()));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::{make_grid, norms::l2_norm};
    use std::f64::consts::PI;

    #[test]
    fn band_inside_cutoff_is_fixed() {
        let g = make_grid(128, 2.0 * PI).unwrap();
        let u = Field1D::from_fn_real(&g, |x| (3.0 * x).sin() + (5.0 * x).cos());
        let v = mollify(&u, 0.1).unwrap();
        assert!(v.sub(&u).unwrap().max_abs() < 1e-14);
        let hi = Field1D::from_fn_real(&g, |x| (40.0 * x).cos());
        assert!(mollify(&hi, 0.1).unwrap().max_abs() < 1e-13);
        assert!(mollify(&u, 0.0).is_err());
        assert!(l2_norm(&mollify(&hi.add(&u).unwrap(), 0.1).unwrap()) <= l2_norm(&hi.add(&u).unwrap()));
    }

    #[test]
    fn constant_f_and_zero_g() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let f = Field1D::from_fn_real(&g, |_| 2.0);
        let h = Field1D::from_fn_real(&g, |x| (x).sin() + 0.2 * (7.0 * x).cos());
        assert!(kato_ponce_ratio(&f, &h, 2.0).unwrap() < 1e-13);
        let z = Field1D::zeros(&g);
        assert!(matches!(kato_ponce_ratio(&h, &z, 2.0), Err(Error::UndefinedRatio(_))));
    }
}
