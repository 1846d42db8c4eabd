use num_complex::Complex64;
use rayon::prelude::*;

use super::conserved::{conserved_quantities, Conserved};
use super::equation::{EquationKind, EquationSpec};
use super::stepper::{Integrator, Scheme, StepperSpec};
use crate::error::{Error, GuardTrip, Result};
use crate::spectral_core::{spectral_tail, Field1D, Grid1D, Spectral};

/// Stored solution curve.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<Field1D>,
    pub diagnostics: Vec<Conserved>,
}

impl Trajectory {
    pub fn new() -> Self {
        Trajectory { times: vec![], snapshots: vec![], diagnostics: vec![] }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&Field1D> {
        self.snapshots.last()
    }

    pub fn grid(&self) -> Option<&Grid1D> {
        self.snapshots.first().map(|f| f.grid())
    }

    pub fn push(&mut self, t: f64, u: Field1D, d: Conserved) {
        self.times.push(t);
        self.snapshots.push(u);
        self.diagnostics.push(d);
    }
}

impl Default for Trajectory {
    fn default() -> Self {
        Self::new()
    }
}

/// Statistics of a finished run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    pub steps: usize,
    pub dt: f64,
    pub max_tail: f64,
}

/// Spectral right-hand side of one equation on one grid.
pub(crate) struct Rhs1D {
    kind: EquationKind,
    nonlinear: bool,
    real: bool,
    grid: Grid1D,
    xi: Vec<f64>,
    mask: Vec<bool>,
    nyq: usize,
    buf: Vec<Complex64>,
    pub last_sup: f64,
}

impl Rhs1D {
    pub fn new(eq: &EquationSpec, grid: &Grid1D, dealias: bool) -> Self {
        let mask = if dealias { grid.dealias_mask() } else { vec![true; grid.len()] };
        Rhs1D {
            kind: eq.kind,
            nonlinear: eq.nonlinear,
            real: eq.is_real(),
            grid: grid.clone(),
            xi: grid.wavenumbers(),
            mask,
            nyq: grid.nyquist_index(),
            buf: vec![Complex64::new(0.0, 0.0); grid.len()],
            last_sup: 0.0,
        }
    }

    pub fn eval(&mut self, c: &[Complex64], out: &mut [Complex64]) {
        if !self.nonlinear {
            out.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
            return;
        }
        let n = c.len();
        self.buf.copy_from_slice(c);
        self.grid.inverse(&mut self.buf);
        if self.real {
            self.buf.par_iter_mut().for_each(|v| v.im = 0.0);
        }
        self.last_sup = self.buf.par_iter().map(|v| v.norm()).reduce(|| 0.0, f64::max);
        let i = Complex64::new(0.0, 1.0);
        // flux or pointwise term in physical space
        let mut mass = 0.0;
        match self.kind {
            EquationKind::Burgers
            | EquationKind::BurgersBbm { .. }
            | EquationKind::BurgersParabolic { .. }
            | EquationKind::Bo
            | EquationKind::Kdv
            | EquationKind::DispersiveGamma { .. } => {
                self.buf.par_iter_mut().for_each(|v| *v = 0.5 * *v * *v);
            }
            EquationKind::Mkdv => self.buf.par_iter_mut().for_each(|v| *v = *v * *v * *v / 3.0),
            EquationKind::GaugedMkdv => {
                mass = self.grid.length() * c.iter().map(|v| v.norm_sqr()).sum::<f64>();
                self.buf.par_iter_mut().for_each(|v| *v = *v * *v * *v / 3.0);
            }
            EquationKind::NlsTorus { sign, .. } => {
                let s = sign.sigma();
                self.buf.par_iter_mut().for_each(|v| *v = i * s * v.norm_sqr() * *v);
            }
            EquationKind::OdeModel => self.buf.par_iter_mut().for_each(|v| *v = i * v.norm_sqr() * *v),
        }
        self.grid.forward(&mut self.buf);
        let (xi, mask, buf) = (&self.xi, &self.mask, &self.buf);
        let kind = self.kind;
        out.par_iter_mut().enumerate().for_each(|(k, o)| {
            if !mask[k] {
                *o = Complex64::new(0.0, 0.0);
                return;
            }
            let x = xi[k];
            *o = match kind {
                EquationKind::BurgersBbm { eps } => -i * x / (1.0 + eps * x * x) * buf[k],
                EquationKind::NlsTorus { .. } | EquationKind::OdeModel => buf[k],
                EquationKind::GaugedMkdv => -i * x * buf[k] + mass * i * x * c[k],
                _ => -i * x * buf[k],
            };
        });
        if !matches!(self.kind, EquationKind::NlsTorus { .. } | EquationKind::OdeModel) && n.is_multiple_of(2) {
            out[self.nyq] = Complex64::new(0.0, 0.0);
        }
    }
}

pub(crate) fn linear_symbols(eq: &EquationSpec, grid: &Grid1D) -> Vec<Complex64> {
    let nyq = grid.nyquist_index();
    (0..grid.len())
        .map(|k| {
            if k == nyq && eq.odd_symbol() && eq.is_real() {
                // odd symbol at Nyquist: keep the real mode stationary
                Complex64::new(0.0, 0.0)
            } else {
                eq.symbol(grid.wavenumber(k))
            }
        })
        .collect()
}

fn sup_gradient(grid: &Grid1D, c: &[Complex64]) -> f64 {
    let mut b: Vec<Complex64> =
        c.iter().enumerate().map(|(k, v)| Complex64::new(0.0, grid.wavenumber(k)) * v).collect();
    b[grid.nyquist_index()] = Complex64::new(0.0, 0.0);
    grid.inverse(&mut b);
    b.iter().map(|v| v.re.abs()).fold(0.0, f64::max)
}

fn sup_of(grid: &Grid1D, c: &[Complex64]) -> f64 {
    let mut b = c.to_vec();
    grid.inverse(&mut b);
    b.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Integrate `u_t = L u + N(u)` from `u0` to `t_end`, calling `observer(t, u)` at step 0, every
/// `store_every` steps and at the final time.
pub fn evolve_observed(
    eq: &EquationSpec,
    u0: &Field1D,
    t_end: f64,
    stepper: &StepperSpec,
    observer: &mut dyn FnMut(f64, &Field1D) -> Result<()>,
) -> Result<RunStats> {
    stepper.validate()?;
    if !t_end.is_finite() || t_end < 0.0 {
        return Err(Error::invalid("T", format!("need finite T >= 0, got {t_end}")));
    }
    if eq.dimension() != 1 {
        return Err(Error::invalid("d", "use the 2-D NLS driver for d = 2"));
    }
    if stepper.scheme == Scheme::SplitStepStrang && !matches!(eq.kind, EquationKind::NlsTorus { .. }) {
        return Err(Error::invalid("scheme", "split-step-strang is only valid for NLS kinds"));
    }
    if eq.is_real() && !u0.is_real() {
        let imag = u0.values().iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        if imag > 1e-12 * u0.max_abs().max(1e-300) {
            return Err(Error::invalid("u0", "real-valued equation needs real data"));
        }
    }
    let grid = u0.grid().clone();
    let real = eq.is_real();
    let (steps, h) = stepper.steps_for(t_end);
    let lin = linear_symbols(eq, &grid);
    let mut rhs = Rhs1D::new(eq, &grid, stepper.dealias);
    let mut c = u0.spectrum();
    let guards = stepper.guards;
    let sup0 = u0.max_abs();
    let grad0 = if matches!(eq.kind, EquationKind::Burgers) { sup_gradient(&grid, &c) } else { 0.0 };
    let mut max_tail = spectral_tail(&grid, &c, stepper.dealias);
    observer(0.0, u0)?;
    if steps == 0 {
        return Ok(RunStats { steps: 0, dt: h, max_tail });
    }
    let mut integ = if stepper.scheme == Scheme::SplitStepStrang {
        None
    } else {
        Some(Integrator::new(&lin, h, stepper.scheme))
    };
    let strang_half: Vec<Complex64> = if integ.is_none() { lin.iter().map(|l| (l * (0.5 * h)).exp()).collect() } else { vec![] };
    let sigma = match eq.kind {
        EquationKind::NlsTorus { sign, .. } => sign.sigma(),
        _ => 0.0,
    };
    let mut phys = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mask = if stepper.dealias { grid.dealias_mask() } else { vec![true; grid.len()] };
    for step in 1..=steps {
        match integ.as_mut() {
            Some(it) => it.step(&mut c, &mut |a, b| rhs.eval(a, b)),
            None => {
                c.iter_mut().zip(&strang_half).for_each(|(x, e)| *x *= e);
                if eq.nonlinear {
                    phys.copy_from_slice(&c);
                    grid.inverse(&mut phys);
                    phys.par_iter_mut().for_each(|v| *v *= Complex64::from_polar(1.0, sigma * v.norm_sqr() * h));
                    grid.forward(&mut phys);
                    c.copy_from_slice(&phys);
                    if stepper.dealias {
                        c.iter_mut().zip(&mask).for_each(|(x, &m)| {
                            if !m {
                                *x = Complex64::new(0.0, 0.0)
                            }
                        });
                    }
                }
                c.iter_mut().zip(&strang_half).for_each(|(x, e)| *x *= e);
            }
        }
        let t = step as f64 * h;
        if guards.enabled && (step % guards.check_every.max(1) == 0 || step == steps) {
            let tail = spectral_tail(&grid, &c, stepper.dealias);
            max_tail = max_tail.max(tail);
            if !tail.is_finite() || tail > guards.tail {
                return Err(Error::Guard(GuardTrip::Resolution { t, tail }));
            }
            let sup = if integ.is_some() && eq.nonlinear { rhs.last_sup } else { sup_of(&grid, &c) };
            if sup0 > 0.0 && (!sup.is_finite() || sup > guards.blowup * sup0) {
                return Err(Error::Guard(GuardTrip::BlowUp { t, ratio: sup / sup0 }));
            }
            if grad0 > 0.0 {
                let g = sup_gradient(&grid, &c);
                if g > guards.gradient * grad0 {
                    return Err(Error::Guard(GuardTrip::Gradient { t, ratio: g / grad0 }));
                }
            }
        }
        if step % stepper.store_every == 0 || step == steps {
            let u = Field1D::from_spectrum(&grid, c.clone(), real)?;
            observer(t, &u)?;
        }
    }
    Ok(RunStats { steps, dt: h, max_tail })
}

/// [`evolve_observed`] collecting snapshots and conserved quantities.
pub fn evolve(eq: &EquationSpec, u0: &Field1D, t_end: f64, stepper: &StepperSpec) -> Result<Trajectory> {
    let mut traj = Trajectory::new();
    evolve_observed(eq, u0, t_end, stepper, &mut |t, u| {
        let d = conserved_quantities(eq, u);
        traj.push(t, u.clone(), d);
        Ok(())
    })?;
    Ok(traj)
}

/// Final state only; memory stays at one field.
pub fn evolve_final(eq: &EquationSpec, u0: &Field1D, t_end: f64, stepper: &StepperSpec) -> Result<Field1D> {
    let mut last = u0.clone();
    let spec = StepperSpec { store_every: usize::MAX, ..*stepper };
    evolve_observed(eq, u0, t_end, &spec, &mut |_, u| {
        last = u.clone();
        Ok(())
    })?;
    Ok(last)
}
