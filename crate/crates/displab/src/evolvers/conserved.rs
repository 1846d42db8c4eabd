use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::equation::{EquationKind, EquationSpec};
use crate::spectral_core::{derivative, Field1D, Field2D};

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Conserved {
    /// `int |u|^2`
    pub mass: f64,
    /// `int u^2 / 2` for real kinds
    pub momentum: Option<f64>,
    pub hamiltonian: Option<f64>,
}

fn integral(u: &Field1D, f: impl Fn(Complex64) -> f64) -> f64 {
    u.grid().dx() * u.values().iter().map(|&v| f(v)).sum::<f64>()
}

/// Mass, momentum and Hamiltonian (where the equation has one) of a 1-D state.
///
/// Hamiltonians: KdV `int u_x^2/2 - u^3/6`; BO `int u |D| u / 2 + u^3/6`; mKdV `int u_x^2/2 - u^4/12`;
/// NLS `int |u_x|^2 - sigma/2 int |u|^4`.
pub fn conserved_quantities(eq: &EquationSpec, u: &Field1D) -> Conserved {
    let mass = integral(u, |v| v.norm_sqr());
    let momentum = if eq.is_real() { Some(0.5 * integral(u, |v| v.re * v.re)) } else { None };
    let n = if eq.nonlinear { 1.0 } else { 0.0 };
    let grad2 = || {
        let ux = derivative(u, 1);
        integral(&ux, |v| v.norm_sqr())
    };
    let hamiltonian = match eq.kind {
        EquationKind::Kdv => Some(0.5 * grad2() - n * integral(u, |v| v.re.powi(3)) / 6.0),
        EquationKind::Mkdv => Some(0.5 * grad2() - n * integral(u, |v| v.re.powi(4)) / 12.0),
        EquationKind::Bo => {
            let c = u.spectrum();
            let g = u.grid();
            let quad: f64 = c.iter().enumerate().map(|(k, ck)| g.wavenumber(k).abs() * ck.norm_sqr()).sum();
            Some(0.5 * g.length() * quad + n * integral(u, |v| v.re.powi(3)) / 6.0)
        }
        EquationKind::NlsTorus { sign, .. } => {
            Some(grad2() - n * 0.5 * sign.sigma() * integral(u, |v| v.norm_sqr().powi(2)))
        }
        _ => None,
    };
    Conserved { mass, momentum, hamiltonian }
}

/// Mass and Hamiltonian of a 2-D NLS state.
pub fn nls2d_conserved(u: &Field2D, sigma: f64) -> Conserved {
    let g = u.grid();
    let area = g.cell_area();
    let mass = area * u.values().iter().map(|v| v.norm_sqr()).sum::<f64>();
    let c = u.spectrum();
    let k2 = g.xi_squared();
    let grad: f64 = g.length().powi(2) * c.iter().zip(&k2).map(|(v, q)| q * v.norm_sqr()).sum::<f64>();
    let quart = area * u.values().iter().map(|v| v.norm_sqr().powi(2)).sum::<f64>();
    Conserved { mass, momentum: None, hamiltonian: Some(grad - 0.5 * sigma * quart) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolvers::equation::NlsSign;
    use crate::spectral_core::{Field2D, Grid2D};
    use std::f64::consts::PI;

    #[test]
    fn constant_nls_2d() {
        let g = Grid2D::new(16, 2.0 * PI).unwrap();
        let u = Field2D::from_fn(&g, |_, _| Complex64::new(1.0, 0.0));
        let q = nls2d_conserved(&u, NlsSign::Defocusing.sigma());
        let area = (2.0 * PI).powi(2);
        assert!((q.mass - area).abs() < 1e-12);
        assert!((q.hamiltonian.unwrap() - 0.5 * area).abs() < 1e-12);
    }

    #[test]
    fn zero_field() {
        let g = crate::spectral_core::make_grid(32, 2.0 * PI).unwrap();
        let z = Field1D::zeros(&g);
        for k in [EquationKind::Kdv, EquationKind::Bo, EquationKind::Mkdv] {
            let q = conserved_quantities(&EquationSpec::new(k).unwrap(), &z);
            assert_eq!(q.mass, 0.0);
            assert_eq!(q.hamiltonian, Some(0.0));
        }
    }
}
