//! Littlewood-Paley pieces and the smooth cutoff they are built from.

use super::field::Field1D;
use super::multiplier::{apply_multiplier, MultiplierSpec};
use crate::error::{Error, Result};

fn bump_tail(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// C-infinity step: 0 for `t <= 0`, 1 for `t >= 1`.
pub fn smooth_step(t: f64) -> f64 {
    let a = bump_tail(t);
    let b = bump_tail(1.0 - t);
    if a + b == 0.0 {
        return if t >= 1.0 { 1.0 } else { 0.0 };
    }
    a / (a + b)
}

/// Radial cutoff: 1 on `|xi| <= 1`, 0 on `|xi| >= 2`.
pub fn psi(xi: f64) -> f64 {
    smooth_step(2.0 - xi.abs())
}

/// Symbol of `Delta_N`: `psi` for `N = 1`, `psi(xi/N) - psi(2 xi/N)` otherwise.
pub fn lp_symbol(n: u64, xi: f64) -> f64 {
    if n == 1 {
        psi(xi)
    } else {
        let nf = n as f64;
        psi(xi / nf) - psi(2.0 * xi / nf)
    }
}

pub fn littlewood_paley_project(u: &Field1D, n: u64) -> Result<Field1D> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::invalid("N", format!("{n} is not dyadic")));
    }
    apply_multiplier(u, &MultiplierSpec::dyadic(n))
}

/// Dyadic scales `1, 2, 4, ...` whose pieces sum to the identity on this grid.
pub fn dyadic_range(u: &Field1D) -> Vec<u64> {
    let kmax = u.grid().max_wavenumber();
    let mut out = vec![1u64];
    let mut n = 1u64;
    while (n as f64) < kmax {
        n *= 2;
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::make_grid;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn partition_reconstructs() {
        let g = make_grid(128, 2.0 * PI).unwrap();
        let u = Field1D::from_fn_real(&g, |x| (x).sin() + 0.3 * (17.0 * x).cos() + 0.1 * (40.0 * x).sin());
        let mut acc = Field1D::zeros(&g);
        for n in dyadic_range(&u) {
            acc = acc.add(&littlewood_paley_project(&u, n).unwrap()).unwrap();
        }
        let err = acc.sub(&u).unwrap().max_abs();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn pure_mode_lands_in_one_annulus() {
        let g = make_grid(512, 2.0 * PI).unwrap();
        let u = Field1D::from_fn(&g, |x| Complex64::new(0.0, 64.0 * x).exp());
        let a = littlewood_paley_project(&u, 32).unwrap();
        let b = littlewood_paley_project(&u, 64).unwrap();
        let c = littlewood_paley_project(&u, 128).unwrap();
        let total = a.add(&b).unwrap().add(&c).unwrap();
        assert!(total.sub(&u).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn mean_only_passes_low_piece() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let u = Field1D::from_fn_real(&g, |_| 1.7);
        let v = littlewood_paley_project(&u, 1).unwrap();
        assert!(v.sub(&u).unwrap().max_abs() < 1e-15);
        assert!(littlewood_paley_project(&u, 3).is_err());
    }

    #[test]
    fn smooth_step_limits() {
        assert_eq!(smooth_step(-0.1), 0.0);
        assert_eq!(smooth_step(1.1), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    }
}
