use std::f64::consts::PI;

use num_complex::Complex64;

use super::grid::{fft_plans, Plan, Spectral};
use crate::error::{Error, Result};

/// Square periodic grid `[0, L)^2`, `n x n` nodes, row-major storage (`idx = i * n + j`, `x1` along rows).
#[derive(Clone)]
pub struct Grid2D {
    n: usize,
    length: f64,
    fwd: Plan,
    inv: Plan,
}

impl std::fmt::Debug for Grid2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid2D").field("n", &self.n).field("length", &self.length).finish()
    }
}

impl PartialEq for Grid2D {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length
    }
}

impl Grid2D {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("N must be even and >= 8, got {n}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length must be positive, got {length}")));
        }
        let (fwd, inv) = fft_plans(n);
        Ok(Grid2D { n, length, fwd, inv })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn cell_area(&self) -> f64 {
        (self.length / self.n as f64).powi(2)
    }

    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.length / self.n as f64
    }

    pub fn mode(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    pub fn wavenumber(&self, i: usize) -> f64 {
        self.mode(i) as f64 * 2.0 * PI / self.length
    }

    /// `|xi|^2` for every slot in storage order.
    pub fn xi_squared(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            let a = self.wavenumber(i);
            for j in 0..self.n {
                let b = self.wavenumber(j);
                out.push(a * a + b * b);
            }
        }
        out
    }

    /// Two-thirds rule applied per axis.
    pub fn dealias_mask(&self) -> Vec<bool> {
        let cut = (self.n / 3) as i64;
        let mut out = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.push(self.mode(i).abs() <= cut && self.mode(j).abs() <= cut);
            }
        }
        out
    }

    fn pass(&self, buf: &mut [Complex64], plan: &Plan) {
        let n = self.n;
        for row in buf.chunks_mut(n) {
            plan.process(row);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = buf[i * n + j];
            }
            plan.process(&mut col);
            for i in 0..n {
                buf[i * n + j] = col[i];
            }
        }
    }
}

impl Spectral for Grid2D {
    fn size(&self) -> usize {
        self.n * self.n
    }

    fn forward(&self, buf: &mut [Complex64]) {
        self.pass(buf, &self.fwd);
        let s = 1.0 / (self.n * self.n) as f64;
        for v in buf.iter_mut() {
            *v *= s;
        }
    }

    fn inverse(&self, buf: &mut [Complex64]) {
        self.pass(buf, &self.inv);
    }
}

#[derive(Clone, Debug)]
pub struct Field2D {
    grid: Grid2D,
    values: Vec<Complex64>,
}

impl Field2D {
    pub fn new(grid: &Grid2D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::GridMismatch("2-D value count".into()));
        }
        Ok(Field2D { grid: grid.clone(), values })
    }

    pub fn from_fn(grid: &Grid2D, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.size());
        for i in 0..grid.n {
            for j in 0..grid.n {
                values.push(f(grid.coord(i), grid.coord(j)));
            }
        }
        Field2D { grid: grid.clone(), values }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut b = self.values.clone();
        self.grid.forward(&mut b);
        b
    }

    pub fn sub(&self, other: &Field2D) -> Result<Field2D> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("2-D grids differ".into()));
        }
        let v = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Field2D::new(&self.grid, v)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `L^2 * sum (1 + |xi|^2)^s |c_k|^2`, square-rooted.
    pub fn hs_norm(&self, s: f64) -> f64 {
        let c = self.spectrum();
        let k2 = self.grid.xi_squared();
        let acc: f64 = c.iter().zip(&k2).map(|(ck, &q)| (1.0 + q).powf(s) * ck.norm_sqr()).sum();
        (self.grid.length().powi(2) * acc).sqrt()
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::invalid("p", format!("need p >= 1, got {p}")));
        }
        if p.is_infinite() {
            return Ok(self.max_abs());
        }
        let s: f64 = self.values.iter().map(|v| v.norm().powf(p)).sum();
        Ok((self.grid.cell_area() * s).powf(1.0 / p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_wave_spectrum_and_norm() {
        let g = Grid2D::new(16, 2.0 * PI).unwrap();
        let u = Field2D::from_fn(&g, |x, y| Complex64::new(0.0, 3.0 * x - 2.0 * y).exp());
        let c = u.spectrum();
        assert!((c[3 * 16 + 14] - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        let want = (2.0 * PI) * 14f64.sqrt();
        assert!((u.hs_norm(1.0) - want).abs() < 1e-11);
        assert!((u.lp_norm(2.0).unwrap() - 2.0 * PI).abs() < 1e-12);
    }
}
