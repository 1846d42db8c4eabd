//! Fields of the form `sum_m a_m(x) e^{i m lambda y}` with slowly varying envelopes `a_m`.
//!
//! `y = x - L/2` is measured from the box centre. Envelopes live on a coarse grid; multipliers act
//! through the shifted symbol `sigma(m lambda + xi)`, so high carriers cost nothing. Harmonics are
//! treated as mutually orthogonal, which is exact on the line once every envelope spectrum sits
//! inside `|xi| < lambda / 2`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::field::Field1D;
use super::grid::{Grid1D, Spectral};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Modulated {
    grid: Grid1D,
    lambda: f64,
    comps: BTreeMap<i32, Vec<Complex64>>,
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl Modulated {
    pub fn zero(grid: &Grid1D, lambda: f64) -> Self {
        Modulated { grid: grid.clone(), lambda, comps: BTreeMap::new() }
    }

    pub fn from_component(grid: &Grid1D, lambda: f64, m: i32, env: Vec<Complex64>) -> Result<Self> {
        if env.len() != grid.len() {
            return Err(Error::GridMismatch("envelope length".into()));
        }
        let mut out = Self::zero(grid, lambda);
        out.comps.insert(m, env);
        Ok(out)
    }

    /// Real field with no carrier.
    pub fn low(grid: &Grid1D, lambda: f64, values: &[f64]) -> Result<Self> {
        Self::from_component(grid, lambda, 0, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// `amp(y) cos(lambda y + phase(y))`.
    pub fn cos_wave(grid: &Grid1D, lambda: f64, amp: &[f64], phase: &[f64]) -> Result<Self> {
        if amp.len() != grid.len() || phase.len() != grid.len() {
            return Err(Error::GridMismatch("wave samples".into()));
        }
        let plus: Vec<Complex64> =
            amp.iter().zip(phase).map(|(&a, &p)| Complex64::from_polar(0.5 * a, p)).collect();
        let minus = plus.iter().map(|v| v.conj()).collect();
        let mut out = Self::zero(grid, lambda);
        out.comps.insert(1, plus);
        out.comps.insert(-1, minus);
        Ok(out)
    }

    /// `amp(y) sin(lambda y + phase(y))`.
    pub fn sin_wave(grid: &Grid1D, lambda: f64, amp: &[f64], phase: &[f64]) -> Result<Self> {
        let shifted: Vec<f64> = phase.iter().map(|p| p - 0.5 * std::f64::consts::PI).collect();
        Self::cos_wave(grid, lambda, amp, &shifted)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn harmonics(&self) -> Vec<i32> {
        self.comps.keys().copied().collect()
    }

    pub fn component(&self, m: i32) -> Option<&[Complex64]> {
        self.comps.get(&m).map(|v| v.as_slice())
    }

    fn check(&self, other: &Modulated) -> Result<()> {
        if self.grid != other.grid || self.lambda != other.lambda {
            return Err(Error::GridMismatch("modulated fields on different grids or carriers".into()));
        }
        Ok(())
    }

    fn combine(&self, other: &Modulated, sign: f64) -> Result<Modulated> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, b) in &other.comps {
            let e = out.comps.entry(*m).or_insert_with(|| vec![czero(); b.len()]);
            for (x, y) in e.iter_mut().zip(b) {
                *x += sign * y;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Modulated) -> Result<Modulated> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Modulated) -> Result<Modulated> {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, c: f64) -> Modulated {
        let mut out = self.clone();
        for v in out.comps.values_mut() {
            for x in v.iter_mut() {
                *x *= c;
            }
        }
        out
    }

    /// Pointwise product; carriers add.
    pub fn mul(&self, other: &Modulated) -> Result<Modulated> {
        self.check(other)?;
        let mut out = Self::zero(&self.grid, self.lambda);
        for (m, a) in &self.comps {
            for (k, b) in &other.comps {
                let e = out.comps.entry(m + k).or_insert_with(|| vec![czero(); a.len()]);
                for ((x, y), z) in e.iter_mut().zip(a).zip(b) {
                    *x += y * z;
                }
            }
        }
        Ok(out)
    }

    /// Multiply every envelope by a real function of `y` sampled on the envelope grid.
    pub fn mul_envelope(&self, w: &[f64]) -> Result<Modulated> {
        if w.len() != self.grid.len() {
            return Err(Error::GridMismatch("weight length".into()));
        }
        let mut out = self.clone();
        for v in out.comps.values_mut() {
            for (x, &y) in v.iter_mut().zip(w) {
                *x *= y;
            }
        }
        Ok(out)
    }

    /// `a_m -> f(m lambda) a_m`: the symbol frozen at each carrier.
    pub fn scale_harmonics(&self, f: impl Fn(f64) -> Complex64) -> Modulated {
        let mut out = self.clone();
        for (m, v) in out.comps.iter_mut() {
            let c = f(*m as f64 * self.lambda);
            for x in v.iter_mut() {
                *x *= c;
            }
        }
        out
    }

    /// Fourier multiplier with symbol `f`, exact through `f(m lambda + xi)` on each envelope.
    pub fn apply_symbol(&self, f: impl Fn(f64) -> Complex64) -> Result<Modulated> {
        let mut out = self.clone();
        for (m, v) in out.comps.iter_mut() {
            let shift = *m as f64 * self.lambda;
            self.grid.forward(v);
            for (i, c) in v.iter_mut().enumerate() {
                let s = f(shift + self.grid.wavenumber(i));
                if !(s.re.is_finite() && s.im.is_finite()) {
                    return Err(Error::NonFiniteSymbol { name: "modulated".into(), xi: shift });
                }
                *c *= s;
            }
            self.grid.inverse(v);
        }
        Ok(out)
    }

    pub fn dx(&self) -> Modulated {
        self.apply_symbol(|xi| Complex64::new(0.0, xi)).expect("finite symbol")
    }

    pub fn hilbert(&self) -> Modulated {
        self.apply_symbol(|xi| Complex64::new(0.0, -xi.signum() * (xi != 0.0) as i32 as f64))
            .expect("finite symbol")
    }

    pub fn hs_norm(&self, s: f64) -> f64 {
        let l = self.grid.length();
        let mut acc = 0.0;
        for (m, v) in &self.comps {
            let shift = *m as f64 * self.lambda;
            let mut c = v.clone();
            self.grid.forward(&mut c);
            for (i, ck) in c.iter().enumerate() {
                let xi = shift + self.grid.wavenumber(i);
                acc += (1.0 + xi * xi).powf(s) * ck.norm_sqr();
            }
        }
        (l * acc).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        let dx = self.grid.dx();
        let acc: f64 = self.comps.values().flat_map(|v| v.iter().map(|x| x.norm_sqr())).sum();
        (dx * acc).sqrt()
    }

    /// `max_y sum_m |a_m(y)|`, an upper bound for the sup norm.
    pub fn envelope_sup(&self) -> f64 {
        (0..self.grid.len())
            .map(|j| self.comps.values().map(|v| v[j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest envelope coefficient at `|xi| >= lambda/2`, relative to the peak.
    pub fn overlap_defect(&self) -> f64 {
        let mut peak: f64 = 0.0;
        let mut out: f64 = 0.0;
        for v in self.comps.values() {
            let mut c = v.clone();
            self.grid.forward(&mut c);
            for (i, ck) in c.iter().enumerate() {
                peak = peak.max(ck.norm());
                if self.grid.wavenumber(i).abs() >= 0.5 * self.lambda {
                    out = out.max(ck.norm());
                }
            }
        }
        if peak == 0.0 {
            0.0
        } else {
            out / peak
        }
    }

    /// Synthesize on a full grid of the same box.
    pub fn sample(&self, full: &Grid1D) -> Result<Field1D> {
        let y = full.centered_nodes();
        let mut acc = vec![czero(); full.len()];
        let mut real = true;
        for (m, v) in &self.comps {
            let env = Field1D::new(&self.grid, v.clone())?.resample(full)?;
            for ((a, e), &yy) in acc.iter_mut().zip(env.values()).zip(&y) {
                *a += e * Complex64::from_polar(1.0, *m as f64 * self.lambda * yy);
            }
            if let Some(w) = self.comps.get(&-m) {
                real &= v.iter().zip(w).all(|(a, b)| (a - b.conj()).norm() <= 1e-14 * (1.0 + a.norm()));
            }
        }
        let f = Field1D::new(full, acc)?;
        Ok(if real { f.to_real() } else { f })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::{derivative, hilbert_transform, make_grid, sobolev_norm};

    fn gauss(g: &Grid1D, w: f64) -> Vec<f64> {
        g.centered_nodes().iter().map(|y| (-(y / w).powi(2)).exp()).collect()
    }

    #[test]
    fn matches_full_grid() {
        let len = 200.0;
        let lam = 6.0;
        let env = make_grid(256, len).unwrap();
        let full = make_grid(4096, len).unwrap();
        let amp = gauss(&env, 15.0);
        let phase: Vec<f64> = env.centered_nodes().iter().map(|y| 0.3 + 0.2 * (-(y / 30.0).powi(2)).exp()).collect();
        let w = Modulated::cos_wave(&env, lam, &amp, &phase).unwrap();
        let low = Modulated::low(&env, lam, &gauss(&env, 12.0)).unwrap();
        let u = w.add(&low).unwrap();
        let uf = u.sample(&full).unwrap();
        for s in [0.0, 1.0, 2.5] {
            let a = u.hs_norm(s);
            let b = sobolev_norm(&uf, s);
            assert!((a - b).abs() < 1e-10 * b, "s={s}: {a} vs {b}");
        }
        let p = u.mul(&u.dx()).unwrap().sample(&full).unwrap();
        let q = uf.mul(&derivative(&uf, 1)).unwrap();
        assert!(p.sub(&q).unwrap().max_abs() < 1e-10 * q.max_abs());
        let h = w.hilbert().sample(&full).unwrap();
        let hf = hilbert_transform(&w.sample(&full).unwrap());
        assert!(h.sub(&hf).unwrap().max_abs() < 1e-10);
        assert!(u.overlap_defect() < 1e-12);
    }
}
