use num_complex::Complex64;

use super::grid::{Grid1D, Spectral};
use crate::error::{Error, Result};

/// Sampled state on a [`Grid1D`].
#[derive(Clone, Debug)]
pub struct Field1D {
    grid: Grid1D,
    values: Vec<Complex64>,
    is_real: bool,
}

impl Field1D {
    pub fn new(grid: &Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Field1D { grid: grid.clone(), values, is_real: false })
    }

    pub fn zeros(grid: &Grid1D) -> Self {
        Field1D { grid: grid.clone(), values: vec![Complex64::new(0.0, 0.0); grid.len()], is_real: true }
    }

    pub fn from_real(grid: &Grid1D, values: &[f64]) -> Result<Self> {
        let mut f = Field1D::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())?;
        f.is_real = true;
        Ok(f)
    }

    pub fn from_fn_real(grid: &Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().into_iter().map(|x| Complex64::new(f(x), 0.0)).collect();
        Field1D { grid: grid.clone(), values, is_real: true }
    }

    pub fn from_fn(grid: &Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().into_iter().map(f).collect();
        Field1D { grid: grid.clone(), values, is_real: false }
    }

    /// Synthesize from normalized coefficients `c_k`.
    pub fn from_spectrum(grid: &Grid1D, mut spec: Vec<Complex64>, is_real: bool) -> Result<Self> {
        if spec.len() != grid.len() {
            return Err(Error::GridMismatch("spectrum length".into()));
        }
        grid.inverse(&mut spec);
        if is_real {
            for v in spec.iter_mut() {
                v.im = 0.0;
            }
        }
        Ok(Field1D { grid: grid.clone(), values: spec, is_real })
    }

    /// Normalized coefficients `c_k = (1/N) sum_j u_j e^{-i xi_k x_j}` in FFT order.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut buf = self.values.clone();
        self.grid.forward(&mut buf);
        buf
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        self.is_real = false;
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Force the real flag, dropping imaginary parts.
    pub fn to_real(&self) -> Field1D {
        let values = self.values.iter().map(|v| Complex64::new(v.re, 0.0)).collect();
        Field1D { grid: self.grid.clone(), values, is_real: true }
    }

    pub(crate) fn with_values(&self, values: Vec<Complex64>, is_real: bool) -> Field1D {
        debug_assert_eq!(values.len(), self.grid.len());
        let mut values = values;
        if is_real {
            for v in values.iter_mut() {
                v.im = 0.0;
            }
        }
        Field1D { grid: self.grid.clone(), values, is_real }
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn check_same(&self, other: &Field1D) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Field1D) -> Result<Field1D> {
        self.check_same(other)?;
        let v = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(self.with_values(v, self.is_real && other.is_real))
    }

    pub fn sub(&self, other: &Field1D) -> Result<Field1D> {
        self.check_same(other)?;
        let v = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(self.with_values(v, self.is_real && other.is_real))
    }

    pub fn mul(&self, other: &Field1D) -> Result<Field1D> {
        self.check_same(other)?;
        let v = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(self.with_values(v, self.is_real && other.is_real))
    }

    pub fn scale(&self, c: f64) -> Field1D {
        self.with_values(self.values.iter().map(|v| v * c).collect(), self.is_real)
    }

    pub fn scale_complex(&self, c: Complex64) -> Field1D {
        self.with_values(self.values.iter().map(|v| v * c).collect(), false)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Field1D {
        self.with_values(self.values.iter().map(|&v| f(v)).collect(), false)
    }

    /// Largest relative violation of `c_{-k} = conj(c_k)`.
    pub fn hermitian_defect(&self) -> f64 {
        let c = self.spectrum();
        let n = c.len();
        let peak = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for k in 1..n / 2 {
            worst = worst.max((c[k] - c[n - k].conj()).norm());
        }
        worst = worst.max(c[0].im.abs()).max(c[n / 2].im.abs());
        worst / peak
    }

    /// Spectral interpolation onto a grid of the same length (zero padding or truncation).
    pub fn resample(&self, target: &Grid1D) -> Result<Field1D> {
        if (target.length() - self.grid.length()).abs() > 1e-12 * self.grid.length() {
            return Err(Error::GridMismatch("resample needs equal box lengths".into()));
        }
        let c = self.spectrum();
        let mut out = vec![Complex64::new(0.0, 0.0); target.len()];
        let (n_src, n_dst) = (self.grid.len(), target.len());
        let half = (n_src.min(n_dst) / 2) as i64;
        for i in 0..n_src {
            let m = self.grid.mode(i);
            if m.abs() >= half {
                continue;
            }
            let j = if m >= 0 { m as usize } else { (n_dst as i64 + m) as usize };
            out[j] = c[i];
        }
        Field1D::from_spectrum(target, out, self.is_real)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn cosine_spectrum() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let u = Field1D::from_fn_real(&g, |x| (3.0 * x).cos());
        let c = u.spectrum();
        assert!((c[3].re - 0.5).abs() < 1e-15);
        assert!((c[13].re - 0.5).abs() < 1e-15);
        assert!(u.hermitian_defect() < 1e-15);
    }

    #[test]
    fn resample_preserves_band_limited() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let h = make_grid(64, 2.0 * PI).unwrap();
        let u = Field1D::from_fn_real(&g, |x| (3.0 * x).sin() + 0.5 * (x).cos());
        let v = u.resample(&h).unwrap();
        let w = Field1D::from_fn_real(&h, |x| (3.0 * x).sin() + 0.5 * (x).cos());
        for (a, b) in v.values().iter().zip(w.values()) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
