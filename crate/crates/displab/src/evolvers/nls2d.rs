use num_complex::Complex64;
use rayon::prelude::*;

use super::conserved::{nls2d_conserved, Conserved};
use super::equation::NlsSign;
use super::stepper::{Integrator, Scheme, StepperSpec};
use crate::error::{Error, GuardTrip, Result};
use crate::spectral_core::{Field2D, Grid2D, Spectral};

#[derive(Clone, Debug, Default)]
pub struct Trajectory2D {
    pub times: Vec<f64>,
    pub snapshots: Vec<Field2D>,
    pub diagnostics: Vec<Conserved>,
}

struct Rhs2D {
    grid: Grid2D,
    sigma: f64,
    nonlinear: bool,
    mask: Vec<bool>,
    buf: Vec<Complex64>,
}

impl Rhs2D {
    fn eval(&mut self, c: &[Complex64], out: &mut [Complex64]) {
        if !self.nonlinear {
            out.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
            return;
        }
        self.buf.copy_from_slice(c);
        self.grid.inverse(&mut self.buf);
        let s = self.sigma;
        self.buf.par_iter_mut().for_each(|v| *v = Complex64::new(0.0, s) * v.norm_sqr() * *v);
        self.grid.forward(&mut self.buf);
        out.par_iter_mut().zip(&self.buf).zip(&self.mask).for_each(|((o, b), &m)| {
            *o = if m { *b } else { Complex64::new(0.0, 0.0) };
        });
    }
}

/// Cubic NLS `i u_t + Delta u + sigma |u|^2 u = 0` on the square torus.
pub fn evolve_nls2d_observed(
    u0: &Field2D,
    t_end: f64,
    stepper: &StepperSpec,
    sign: NlsSign,
    nonlinear: bool,
    observer: &mut dyn FnMut(f64, &Field2D) -> Result<()>,
) -> Result<()> {
    stepper.validate()?;
    let g = u0.grid().clone();
    let (steps, h) = stepper.steps_for(t_end);
    let lin: Vec<Complex64> = g.xi_squared().iter().map(|q| Complex64::new(0.0, -q)).collect();
    let mask = if stepper.dealias { g.dealias_mask() } else { vec![true; g.size()] };
    let mut rhs = Rhs2D { grid: g.clone(), sigma: sign.sigma(), nonlinear, mask: mask.clone(), buf: u0.spectrum() };
    let mut c = u0.spectrum();
    let sup0 = u0.max_abs();
    observer(0.0, u0)?;
    let mut integ = match stepper.scheme {
        Scheme::SplitStepStrang => None,
        s => Some(Integrator::new(&lin, h, s)),
    };
    let half: Vec<Complex64> = lin.iter().map(|l| (l * (0.5 * h)).exp()).collect();
    let mut phys = vec![Complex64::new(0.0, 0.0); g.size()];
    for step in 1..=steps {
        match integ.as_mut() {
            Some(it) => it.step(&mut c, &mut |a, b| rhs.eval(a, b)),
            None => {
                c.par_iter_mut().zip(&half).for_each(|(x, e)| *x *= e);
                if nonlinear {
                    phys.copy_from_slice(&c);
                    g.inverse(&mut phys);
                    let s = sign.sigma();
                    phys.par_iter_mut().for_each(|v| *v *= Complex64::from_polar(1.0, s * v.norm_sqr() * h));
                    g.forward(&mut phys);
                    c.par_iter_mut().zip(&phys).zip(&mask).for_each(|((x, p), &m)| {
                        *x = if m { *p } else { Complex64::new(0.0, 0.0) };
                    });
                }
                c.par_iter_mut().zip(&half).for_each(|(x, e)| *x *= e);
            }
        }
        let t = step as f64 * h;
        let keep = step % stepper.store_every == 0 || step == steps;
        let check = stepper.guards.enabled && (step % stepper.guards.check_every.max(1) == 0 || step == steps);
        if keep || check {
            let u = Field2D::new(&g, {
                let mut b = c.clone();
                g.inverse(&mut b);
                b
            })?;
            if check {
                let sup = u.max_abs();
                if sup0 > 0.0 && (!sup.is_finite() || sup > stepper.guards.blowup * sup0) {
                    return Err(Error::Guard(GuardTrip::BlowUp { t, ratio: sup / sup0 }));
                }
            }
            if keep {
                observer(t, &u)?;
            }
        }
    }
    Ok(())
}

pub fn evolve_nls2d(
    u0: &Field2D,
    t_end: f64,
    stepper: &StepperSpec,
    sign: NlsSign,
    nonlinear: bool,
) -> Result<Trajectory2D> {
    let mut out = Trajectory2D::default();
    evolve_nls2d_observed(u0, t_end, stepper, sign, nonlinear, &mut |t, u| {
        out.times.push(t);
        out.diagnostics.push(nls2d_conserved(u, sign.sigma()));
        out.snapshots.push(u.clone());
        Ok(())
    })?;
    Ok(out)
}
