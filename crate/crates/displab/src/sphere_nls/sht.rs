use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral_core::grid::{fft_plans, Plan};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Orthonormal associated Legendre values `Pbar_l^m(x)` for `m <= l <= b`, so that
/// `Pbar_l^m(cos theta) e^{i m phi}` has unit norm on the sphere. No Condon-Shortley phase.
pub fn legendre_column(b: usize, m: usize, x: f64) -> Vec<f64> {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=m {
        pmm *= ((2 * k + 1) as f64 / (2 * k) as f64).sqrt() * s;
    }
    let mut out = Vec::with_capacity(b + 1 - m);
    out.push(pmm);
    if m < b {
        out.push((2.0 * m as f64 + 3.0).sqrt() * x * pmm);
    }
    for l in m + 2..=b {
        let (lf, mf) = (l as f64, m as f64);
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let bb = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
        let k = out.len();
        out.push(a * (x * out[k - 1] - bb * out[k - 2]));
    }
    out
}

/// Gauss-Legendre latitudes by equispaced longitudes, with a precomputed Legendre table.
pub struct SphereGrid {
    b: usize,
    nlat: usize,
    nlon: usize,
    x: Vec<f64>,
    w: Vec<f64>,
    /// `table[m]` holds `Pbar_l^m(x_i)` at index `(l - m) * nlat + i`
    table: Vec<Vec<f64>>,
    fwd: Plan,
    inv: Plan,
}

impl std::fmt::Debug for SphereGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SphereGrid").field("b", &self.b).field("nlat", &self.nlat).field("nlon", &self.nlon).finish()
    }
}

impl SphereGrid {
    /// Bandwidth `b`, `2b + 2` latitudes and `4b + 2` longitudes: cubic products are analysed exactly.
    pub fn new(b: usize) -> Result<Arc<Self>> {
        Self::with_nodes(b, 2 * b + 2, 4 * b + 2)
    }

    pub fn with_nodes(b: usize, nlat: usize, nlon: usize) -> Result<Arc<Self>> {
        if nlat < b + 1 || nlon < 2 * b + 1 {
            return Err(Error::InvalidGrid(format!("{nlat} x {nlon} nodes cannot carry bandwidth {b}")));
        }
        let (x, w) = gauss_legendre(nlat);
        let table: Vec<Vec<f64>> = (0..=b)
            .into_par_iter()
            .map(|m| {
                let mut t = vec![0.0; (b + 1 - m) * nlat];
                for (i, &xi) in x.iter().enumerate() {
                    for (k, v) in legendre_column(b, m, xi).into_iter().enumerate() {
                        t[k * nlat + i] = v;
                    }
                }
                t
            })
            .collect();
        let (fwd, inv) = fft_plans(nlon);
        Ok(Arc::new(SphereGrid { b, nlat, nlon, x, w, table, fwd, inv }))
    }

    pub fn bandwidth(&self) -> usize {
        self.b
    }

    pub fn nlat(&self) -> usize {
        self.nlat
    }

    pub fn nlon(&self) -> usize {
        self.nlon
    }

    pub fn cos_theta(&self) -> &[f64] {
        &self.x
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn phi(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.nlon as f64
    }

    pub fn size(&self) -> usize {
        self.nlat * self.nlon
    }

    /// Area weight of node `(i, j)`.
    pub fn area(&self, i: usize) -> f64 {
        self.w[i] * 2.0 * PI / self.nlon as f64
    }

    /// `sum_nodes area * f`.
    pub fn integrate(&self, f: impl Fn(Complex64) -> f64, values: &[Complex64]) -> f64 {
        (0..self.nlat)
            .map(|i| self.area(i) * values[i * self.nlon..(i + 1) * self.nlon].iter().map(|&v| f(v)).sum::<f64>())
            .sum()
    }

    fn slot(&self, m: i64) -> usize {
        if m >= 0 {
            m as usize
        } else {
            (self.nlon as i64 + m) as usize
        }
    }

    /// Analysis: grid values to coefficients of degree `<= b`.
    pub fn analyse(&self, values: &[Complex64]) -> Result<HarmonicCoeffs> {
        if values.len() != self.size() {
            return Err(Error::GridMismatch(format!("{} samples for a {} node grid", values.len(), self.size())));
        }
        let rows: Vec<Vec<Complex64>> = values
            .par_chunks(self.nlon)
            .map(|r| {
                let mut r = r.to_vec();
                self.fwd.process(&mut r);
                let s = 2.0 * PI / self.nlon as f64;
                r.iter_mut().for_each(|v| *v *= s);
                r
            })
            .collect();
        let b = self.b as i64;
        let per_m: Vec<(i64, Vec<Complex64>)> = (-b..=b)
            .into_par_iter()
            .map(|m| {
                let am = m.unsigned_abs() as usize;
                let t = &self.table[am];
                let col = self.slot(m);
                let mut out = vec![Complex64::new(0.0, 0.0); self.b + 1 - am];
                for (k, o) in out.iter_mut().enumerate() {
                    let p = &t[k * self.nlat..(k + 1) * self.nlat];
                    *o = (0..self.nlat).map(|i| rows[i][col] * (self.w[i] * p[i])).sum();
                }
                (m, out)
            })
            .collect();
        let mut c = HarmonicCoeffs::zeros(self.b);
        for (m, col) in per_m {
            let am = m.unsigned_abs() as usize;
            for (k, v) in col.into_iter().enumerate() {
                c.set(am + k, m, v);
            }
        }
        Ok(c)
    }

    /// Synthesis on the grid.
    pub fn synthesise(&self, c: &HarmonicCoeffs) -> Result<Vec<Complex64>> {
        if c.bandwidth() != self.b {
            return Err(Error::GridMismatch(format!("bandwidth {} on a grid of bandwidth {}", c.bandwidth(), self.b)));
        }
        let b = self.b as i64;
        let cols: Vec<(usize, Vec<Complex64>)> = (-b..=b)
            .into_par_iter()
            .map(|m| {
                let am = m.unsigned_abs() as usize;
                let t = &self.table[am];
                let mut g = vec![Complex64::new(0.0, 0.0); self.nlat];
                for l in am..=self.b {
                    let v = c.get(l, m);
                    if v == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let p = &t[(l - am) * self.nlat..(l - am + 1) * self.nlat];
                    for (gi, pi) in g.iter_mut().zip(p) {
                        *gi += v * pi;
                    }
                }
                (self.slot(m), g)
            })
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); self.size()];
        out.par_chunks_mut(self.nlon).enumerate().for_each(|(i, row)| {
            for (col, g) in &cols {
                row[*col] = g[i];
            }
            self.inv.process(row);
        });
        Ok(out)
    }
}

/// Coefficients `c_{l,m}`, `0 <= l <= b`, `|m| <= l`, in the orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicCoeffs {
    b: usize,
    c: Vec<Complex64>,
}

impl HarmonicCoeffs {
    pub fn zeros(b: usize) -> Self {
        HarmonicCoeffs { b, c: vec![Complex64::new(0.0, 0.0); (b + 1) * (b + 1)] }
    }

    fn idx(l: usize, m: i64) -> usize {
        (l * l) + (m + l as i64) as usize
    }

    pub fn bandwidth(&self) -> usize {
        self.b
    }

    pub fn get(&self, l: usize, m: i64) -> Complex64 {
        if l > self.b || m.unsigned_abs() as usize > l {
            return Complex64::new(0.0, 0.0);
        }
        self.c[Self::idx(l, m)]
    }

    pub fn set(&mut self, l: usize, m: i64, v: Complex64) {
        assert!(l <= self.b && m.unsigned_abs() as usize <= l, "({l},{m}) outside bandwidth {}", self.b);
        self.c[Self::idx(l, m)] = v;
    }

    /// `(l, m, c)` in degree-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, Complex64)> + '_ {
        (0..=self.b).flat_map(move |l| (-(l as i64)..=l as i64).map(move |m| (l, m, self.c[Self::idx(l, m)])))
    }

    pub fn map_degree(&self, f: impl Fn(usize) -> f64) -> Self {
        let mut out = self.clone();
        for l in 0..=self.b {
            let s = f(l);
            for m in -(l as i64)..=l as i64 {
                out.c[Self::idx(l, m)] *= s;
            }
        }
        out
    }

    /// `c_{l,m} -> c_{l,m} e^{i m alpha}`, the coefficients of `u(theta, phi + alpha)`.
    pub fn rotate(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        for (l, m, v) in self.iter() {
            out.c[Self::idx(l, m)] = v * Complex64::from_polar(1.0, m as f64 * alpha);
        }
        out
    }

    pub fn scale(&self, a: Complex64) -> Self {
        HarmonicCoeffs { b: self.b, c: self.c.iter().map(|v| v * a).collect() }
    }

    pub fn sub(&self, o: &HarmonicCoeffs) -> Self {
        HarmonicCoeffs { b: self.b, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    /// `(sum (1 + l(l+1))^s |c_{l,m}|^2)^(1/2)`.
    pub fn hs_norm(&self, s: f64) -> f64 {
        self.iter().map(|(l, _, v)| (1.0 + (l * (l + 1)) as f64).powf(s) * v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.hs_norm(0.0)
    }

    /// `sum l(l+1) |c|^2 = ||grad u||^2`.
    pub fn dirichlet(&self) -> f64 {
        self.iter().map(|(l, _, v)| (l * (l + 1)) as f64 * v.norm_sqr()).sum()
    }

    /// Largest `|c_{l,m}|` over the coefficients selected by `keep`.
    pub fn max_where(&self, keep: impl Fn(usize, i64) -> bool) -> f64 {
        self.iter().filter(|(l, m, _)| keep(*l, *m)).map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    /// CSV rows `l, m, re, im`.
    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["l", "m", "re", "im"])?;
        for (l, m, v) in self.iter() {
            w.write_record([l.to_string(), m.to_string(), format!("{:.16e}", v.re), format!("{:.16e}", v.im)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Samples on a [`SphereGrid`], latitude-major.
#[derive(Clone, Debug)]
pub struct SphereField {
    grid: Arc<SphereGrid>,
    values: Vec<Complex64>,
}

impl SphereField {
    pub fn new(grid: &Arc<SphereGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::GridMismatch(format!("{} samples for {} nodes", values.len(), grid.size())));
        }
        Ok(SphereField { grid: grid.clone(), values })
    }

    /// `f(cos theta, phi)` at every node.
    pub fn from_fn(grid: &Arc<SphereGrid>, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.size());
        for i in 0..grid.nlat() {
            for j in 0..grid.nlon() {
                values.push(f(grid.x[i], grid.phi(j)));
            }
        }
        SphereField { grid: grid.clone(), values }
    }

    pub fn from_coeffs(grid: &Arc<SphereGrid>, c: &HarmonicCoeffs) -> Result<Self> {
        Ok(SphereField { grid: grid.clone(), values: grid.synthesise(c)? })
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn coeffs(&self) -> HarmonicCoeffs {
        self.grid.analyse(&self.values).expect("own grid")
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        self.grid.integrate(|v| v.norm().powf(p), &self.values).powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        self.lp_norm(2.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}
