use num_complex::Complex64;

use super::field::Field1D;
use super::grid::Grid1D;
use crate::error::{Error, Result};

/// `L * sum_k (1 + xi_k^2)^s |c_k|^2`, square-rooted, for spectra in FFT order.
pub fn hs_norm_from_spectrum(grid: &Grid1D, c: &[Complex64], s: f64) -> f64 {
    let mut acc = 0.0;
    for (i, ck) in c.iter().enumerate() {
        let xi = grid.wavenumber(i);
        acc += (1.0 + xi * xi).powf(s) * ck.norm_sqr();
    }
    (grid.length() * acc).sqrt()
}

pub fn sobolev_norm(u: &Field1D, s: f64) -> f64 {
    hs_norm_from_spectrum(u.grid(), &u.spectrum(), s)
}

/// Homogeneous seminorm `|| |D|^s u ||_{L^2}`.
pub fn homogeneous_norm(u: &Field1D, s: f64) -> f64 {
    let c = u.spectrum();
    let g = u.grid();
    let acc: f64 = c
        .iter()
        .enumerate()
        .map(|(i, ck)| {
            let xi = g.wavenumber(i).abs();
            if xi == 0.0 {
                0.0
            } else {
                xi.powf(2.0 * s) * ck.norm_sqr()
            }
        })
        .sum();
    (g.length() * acc).sqrt()
}

pub fn l2_norm(u: &Field1D) -> f64 {
    let dx = u.grid().dx();
    (dx * u.values().iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
}

/// Trapezoid quadrature for `p < inf`, max of moduli for `p = inf`.
pub fn lp_norm(u: &Field1D, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::invalid("p", format!("need p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(u.max_abs());
    }
    let dx = u.grid().dx();
    let peak = u.max_abs();
    if peak == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = u.values().iter().map(|v| (v.norm() / peak).powf(p)).sum();
    Ok(peak * (dx * sum).powf(1.0 / p))
}

/// Fraction of spectral mass in the outer tenth of the retained band, relative to the peak coefficient.
pub fn spectral_tail(grid: &Grid1D, c: &[Complex64], dealiased: bool) -> f64 {
    let n = grid.len() as i64;
    let band = if dealiased { n / 3 } else { n / 2 };
    let start = band - (band / 10).max(1);
    let mut peak: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for (i, ck) in c.iter().enumerate() {
        let a = ck.norm();
        peak = peak.max(a);
        let m = grid.mode(i).abs();
        if m > start && m <= band {
            tail = tail.max(a);
        }
    }
    if peak == 0.0 {
        0.0
    } else {
        tail / peak
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn constant_and_cosine() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let one = Field1D::from_fn_real(&g, |_| 1.0);
        for s in [0.0, 0.5, 3.0] {
            assert!((sobolev_norm(&one, s) - (2.0 * PI).sqrt()).abs() < 1e-13);
        }
        let c8 = Field1D::from_fn_real(&g, |x| (8.0 * x).cos());
        assert!((sobolev_norm(&c8, 1.0) - 14.289_979_792_964_598).abs() < 1e-11);
        assert!((lp_norm(&one, 4.0).unwrap() - 1.583_233_487_086_159_5).abs() < 1e-13);
        let c1 = Field1D::from_fn_real(&g, |x| x.cos());
        assert_eq!(lp_norm(&c1, f64::INFINITY).unwrap(), 1.0);
        assert!(lp_norm(&c1, 0.5).is_err());
        assert_eq!(sobolev_norm(&Field1D::zeros(&g), 2.0), 0.0);
    }

    #[test]
    fn parseval_matches_quadrature() {
        let g = make_grid(32, 5.0).unwrap();
        let u = Field1D::from_fn(&g, |x| Complex64::new((x * 1.3).sin().exp(), x.cos()));
        let a = sobolev_norm(&u, 0.0);
        let b = l2_norm(&u);
        assert!((a - b).abs() < 1e-12 * b);
    }
}
