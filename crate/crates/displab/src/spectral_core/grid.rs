use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub(crate) type Plan = Arc<dyn Fft<f64>>;

/// Shared plan cache so that grids of equal size reuse twiddles.
pub(crate) fn fft_plans(n: usize) -> (Plan, Plan) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Plan, Plan)>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(|| Mutex::new(HashMap::new())).lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        })
        .clone()
}

/// Anything that maps samples to normalized Fourier coefficients and back.
///
/// `forward` produces `c_k = (1/N) sum_j u_j e^{-i xi_k x_j}`; `inverse` is the exact synthesis.
pub trait Spectral {
    fn size(&self) -> usize;
    fn forward(&self, buf: &mut [Complex64]);
    fn inverse(&self, buf: &mut [Complex64]);
}

/// Periodic grid on `[0, L)` with `N` equispaced nodes.
#[derive(Clone)]
pub struct Grid1D {
    n: usize,
    length: f64,
    fwd: Plan,
    inv: Plan,
}

impl fmt::Debug for Grid1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid1D").field("n", &self.n).field("length", &self.length).finish()
    }
}

impl PartialEq for Grid1D {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length
    }
}

/// Build a grid; `n` must be even and at least 8.
pub fn make_grid(n: usize, length: f64) -> Result<Grid1D> {
    Grid1D::new(n, length)
}

impl Grid1D {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("N must be even and >= 8, got {n}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length must be positive, got {length}")));
        }
        let (fwd, inv) = fft_plans(n);
        Ok(Grid1D { n, length, fwd, inv })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Spacing of the wavenumber lattice, `2 pi / L`.
    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.length
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.length / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Nodes measured from the box centre, `x_j - L/2`.
    pub fn centered_nodes(&self) -> Vec<f64> {
        let c = 0.5 * self.length;
        (0..self.n).map(|j| self.node(j) - c).collect()
    }

    /// Signed integer mode of FFT slot `idx`; the Nyquist slot maps to `+N/2`.
    pub fn mode(&self, idx: usize) -> i64 {
        if idx <= self.n / 2 {
            idx as i64
        } else {
            idx as i64 - self.n as i64
        }
    }

    pub fn wavenumber(&self, idx: usize) -> f64 {
        self.mode(idx) as f64 * self.dxi()
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    pub fn max_wavenumber(&self) -> f64 {
        self.wavenumber(self.n / 2)
    }

    /// Two-thirds rule: keep `|k| <= N/3`.
    pub fn dealias_mask(&self) -> Vec<bool> {
        let cut = (self.n / 3) as i64;
        (0..self.n).map(|i| self.mode(i).abs() <= cut).collect()
    }

    /// Same box with a different number of nodes.
    pub fn with_points(&self, n: usize) -> Result<Grid1D> {
        Grid1D::new(n, self.length)
    }
}

impl Spectral for Grid1D {
    fn size(&self) -> usize {
        self.n
    }

    fn forward(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        self.fwd.process(buf);
        let s = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= s;
        }
    }

    fn inverse(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        self.inv.process(buf);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_wavenumbers() {
        let g = make_grid(8, 2.0 * PI).unwrap();
        let mut ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i).round() as i64).collect();
        ks.sort();
        assert_eq!(ks, vec![-3, -2, -1, 0, 1, 2, 3, 4]);
        assert!((g.max_wavenumber() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn spacing() {
        let g = make_grid(16, 4.0 * PI).unwrap();
        assert!((g.dx() - PI / 4.0).abs() < 1e-15);
        let g = make_grid(1024, 256.0).unwrap();
        assert!((g.dxi() - 0.024543692606170259).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(make_grid(7, 1.0).is_err());
        assert!(make_grid(6, 1.0).is_err());
        assert!(make_grid(9, 1.0).is_err());
        assert!(make_grid(8, 0.0).is_err());
    }

    #[test]
    fn forward_inverse_roundtrip() {
        let g = make_grid(12, 3.0).unwrap();
        let orig: Vec<Complex64> =
            (0..12).map(|j| Complex64::new((j as f64).sin(), (j as f64 * 0.3).cos())).collect();
        let mut buf = orig.clone();
        g.forward(&mut buf);
        g.inverse(&mut buf);
        for (a, b) in buf.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
