use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    EtdRk4,
    SplitStepStrang,
    IfRk4,
}

impl Scheme {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "etd-rk4" => Ok(Scheme::EtdRk4),
            "split-step-strang" => Ok(Scheme::SplitStepStrang),
            "if-rk4" => Ok(Scheme::IfRk4),
            other => Err(Error::invalid("scheme", format!("unknown scheme `{other}`"))),
        }
    }
}

/// Runtime guards; a trip aborts the run with [`crate::GuardTrip`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Guards {
    /// abort when the sup norm exceeds this multiple of its initial value
    pub blowup: f64,
    /// abort when the outer tenth of the retained band exceeds this fraction of the peak coefficient
    pub tail: f64,
    /// abort when `||u_x||_inf` exceeds this multiple of its initial value (Burgers only)
    pub gradient: f64,
    pub check_every: usize,
    pub enabled: bool,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { blowup: 1e6, tail: 1e-6, gradient: 4.0, check_every: 10, enabled: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepperSpec {
    pub scheme: Scheme,
    pub dt: f64,
    pub dealias: bool,
    /// keep every `store_every`-th step (the final time is always kept)
    pub store_every: usize,
    pub guards: Guards,
}

impl StepperSpec {
    pub fn new(scheme: Scheme, dt: f64) -> Self {
        StepperSpec { scheme, dt, dealias: true, store_every: 1, guards: Guards::default() }
    }

    pub fn etdrk4(dt: f64) -> Self {
        Self::new(Scheme::EtdRk4, dt)
    }

    pub fn with_dealias(mut self, on: bool) -> Self {
        self.dealias = on;
        self
    }

    pub fn with_store_every(mut self, k: usize) -> Self {
        self.store_every = k.max(1);
        self
    }

    pub fn with_guards(mut self, g: Guards) -> Self {
        self.guards = g;
        self
    }

    pub fn without_guards(mut self) -> Self {
        self.guards.enabled = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid("dt", format!("need dt > 0, got {}", self.dt)));
        }
        Ok(())
    }

    /// Step count and the uniform step that lands exactly on `t_end`.
    pub fn steps_for(&self, t_end: f64) -> (usize, f64) {
        if t_end <= 0.0 {
            return (0, self.dt);
        }
        let n = (t_end / self.dt - 1e-9).ceil().max(1.0) as usize;
        (n, t_end / n as f64)
    }
}

const CONTOUR_POINTS: usize = 32;

/// `phi`-type coefficients of ETDRK4 for one value `z = h L`.
fn etd_scalars(z: Complex64) -> [Complex64; 4] {
    if z.norm() < TAYLOR_RADIUS {
        etd_taylor(z)
    } else {
        etd_contour(z)
    }
}

const TAYLOR_RADIUS: f64 = 1e-4;

/// `Q/h, f1/h, f2/h, f3/h` by their cubic Taylor polynomials.
fn etd_taylor(z: Complex64) -> [Complex64; 4] {
    let z2 = z * z;
    let z3 = z2 * z;
    let q = 0.5 + z / 8.0 + z2 / 48.0 + z3 / 384.0;
    let f1 = 1.0 / 6.0 + z / 6.0 + z2 * (3.0 / 40.0) + z3 / 45.0;
    let f2 = 1.0 / 6.0 + z / 12.0 + z2 / 40.0 + z3 / 180.0;
    let f3 = 1.0 / 6.0 - z2 / 120.0 - z3 / 360.0;
    [q, f1, f2, f3]
}

/// Mean over a unit circle centred at `z`; the integrands are entire, so no cancellation.
fn etd_contour(z: Complex64) -> [Complex64; 4] {
    let mut acc = [Complex64::new(0.0, 0.0); 4];
    for j in 0..CONTOUR_POINTS {
        let th = std::f64::consts::PI * (j as f64 + 0.5) / CONTOUR_POINTS as f64;
        let r = z + Complex64::from_polar(1.0, th);
        let r2 = z + Complex64::from_polar(1.0, -th);
        for w in [r, r2] {
            let ew = w.exp();
            let w2 = w * w;
            let w3 = w2 * w;
            acc[0] += ((w / 2.0).exp() - 1.0) / w;
            acc[1] += (-4.0 - w + ew * (4.0 - 3.0 * w + w2)) / w3;
            acc[2] += (2.0 + w + ew * (w - 2.0)) / w3;
            acc[3] += (-4.0 - 3.0 * w - w2 + ew * (4.0 - w)) / w3;
        }
    }
    let m = 1.0 / (2 * CONTOUR_POINTS) as f64;
    acc.map(|a| a * m)
}

/// Precomputed exponential-integrator weights for a diagonal linear part.
pub(crate) struct LinearWeights {
    pub e: Vec<Complex64>,
    pub e2: Vec<Complex64>,
    pub q: Vec<Complex64>,
    pub f1: Vec<Complex64>,
    pub f2: Vec<Complex64>,
    pub f3: Vec<Complex64>,
}

impl LinearWeights {
    pub fn new(lin: &[Complex64], h: f64, scheme: Scheme) -> Self {
        let e: Vec<Complex64> = lin.par_iter().map(|l| (l * h).exp()).collect();
        let e2: Vec<Complex64> = lin.par_iter().map(|l| (l * (0.5 * h)).exp()).collect();
        if scheme != Scheme::EtdRk4 {
            return LinearWeights { e, e2, q: vec![], f1: vec![], f2: vec![], f3: vec![] };
        }
        let all: Vec<[Complex64; 4]> = lin.par_iter().map(|l| etd_scalars(l * h)).collect();
        let pick = |i: usize| all.iter().map(|a| a[i] * h).collect::<Vec<_>>();
        let (q, f1, f2, f3) = (pick(0), pick(1), pick(2), pick(3));
        LinearWeights { e, e2, q, f1, f2, f3 }
    }
}

/// Diagonal stiff part plus spectral nonlinearity; `c` holds normalized coefficients.
pub(crate) struct Integrator {
    scheme: Scheme,
    h: f64,
    w: LinearWeights,
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    a: Vec<Complex64>,
}

impl Integrator {
    pub fn new(lin: &[Complex64], h: f64, scheme: Scheme) -> Self {
        let n = lin.len();
        let z = || vec![Complex64::new(0.0, 0.0); n];
        Integrator { scheme, h, w: LinearWeights::new(lin, h, scheme), k1: z(), k2: z(), k3: z(), k4: z(), a: z() }
    }

    pub fn step(&mut self, c: &mut [Complex64], nl: &mut dyn FnMut(&[Complex64], &mut [Complex64])) {
        match self.scheme {
            Scheme::EtdRk4 => self.step_etd(c, nl),
            Scheme::IfRk4 => self.step_if(c, nl),
            Scheme::SplitStepStrang => unreachable!("split step is handled by the caller"),
        }
    }

    fn step_etd(&mut self, c: &mut [Complex64], nl: &mut dyn FnMut(&[Complex64], &mut [Complex64])) {
        let w = &self.w;
        nl(c, &mut self.k1);
        self.a.par_iter_mut().enumerate().for_each(|(i, a)| *a = w.e2[i] * c[i] + w.q[i] * self.k1[i]);
        nl(&self.a, &mut self.k2);
        // b overwrites a once Na is stored
        let mut b = std::mem::take(&mut self.a);
        b.par_iter_mut().enumerate().for_each(|(i, x)| *x = w.e2[i] * c[i] + w.q[i] * self.k2[i]);
        nl(&b, &mut self.k3);
        let k1 = &self.k1;
        b.par_iter_mut().enumerate().for_each(|(i, x)| {
            // x holds b_i; build the fourth stage from a_i = e2 c + q k1
            let ai = w.e2[i] * c[i] + w.q[i] * k1[i];
            *x = w.e2[i] * ai + w.q[i] * (2.0 * self.k3[i] - k1[i]);
        });
        nl(&b, &mut self.k4);
        self.a = b;
        let (k2, k3, k4) = (&self.k2, &self.k3, &self.k4);
        c.par_iter_mut().enumerate().for_each(|(i, x)| {
            *x = w.e[i] * *x + w.f1[i] * k1[i] + 2.0 * w.f2[i] * (k2[i] + k3[i]) + w.f3[i] * k4[i];
        });
    }

    fn step_if(&mut self, c: &mut [Complex64], nl: &mut dyn FnMut(&[Complex64], &mut [Complex64])) {
        let w = &self.w;
        let h = self.h;
        nl(c, &mut self.k1);
        self.a.par_iter_mut().enumerate().for_each(|(i, a)| *a = w.e2[i] * (c[i] + 0.5 * h * self.k1[i]));
        nl(&self.a, &mut self.k2);
        let mut b = std::mem::take(&mut self.a);
        b.par_iter_mut().enumerate().for_each(|(i, x)| *x = w.e2[i] * c[i] + 0.5 * h * self.k2[i]);
        nl(&b, &mut self.k3);
        b.par_iter_mut().enumerate().for_each(|(i, x)| *x = w.e[i] * c[i] + h * w.e2[i] * self.k3[i]);
        nl(&b, &mut self.k4);
        self.a = b;
        let (k1, k2, k3, k4) = (&self.k1, &self.k2, &self.k3, &self.k4);
        c.par_iter_mut().enumerate().for_each(|(i, x)| {
            *x = w.e[i] * *x + h / 6.0 * (w.e[i] * k1[i] + 2.0 * w.e2[i] * (k2[i] + k3[i]) + k4[i]);
        });
    }
}
