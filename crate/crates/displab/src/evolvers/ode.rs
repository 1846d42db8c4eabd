use num_complex::Complex64;

use super::equation::NlsSign;
use crate::spectral_core::Field1D;

/// Closed-form solution of `i v_t + sigma |v|^2 v = 0`: `A e^{i sigma t |A|^2}` pointwise.
pub fn nls_ode_solution(a: &Field1D, t: f64, sign: NlsSign) -> Field1D {
    let s = sign.sigma();
    a.map(|v| v * Complex64::from_polar(1.0, s * t * v.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::make_grid;

    #[test]
    fn modulus_is_preserved() {
        let g = make_grid(64, 3.0).unwrap();
        let a = Field1D::from_fn_real(&g, |x| (x - 1.5).cos() * 2.0);
        let v0 = nls_ode_solution(&a, 0.0, NlsSign::Focusing);
        assert!(v0.sub(&a).unwrap().max_abs() == 0.0);
        for t in [0.3, 1.0, 17.0] {
            let v = nls_ode_solution(&a, t, NlsSign::Focusing);
            for (x, y) in v.values().iter().zip(a.values()) {
                assert!((x.norm() - y.norm()).abs() < 1e-14);
            }
        }
    }
}
