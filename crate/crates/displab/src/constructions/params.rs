use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral_core::{make_grid, BumpKind, BumpProfile, Grid1D};

/// Envelope samples per unit of the profile variable `y / scale`.
pub const ENVELOPE_POINTS_PER_UNIT: f64 = 64.0;

fn finite(field: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite, got {v}")))
    }
}

/// `phi_tilde` must be identically one on the support of `phi`.
pub(crate) fn check_companion(phi: &BumpProfile, phi_tilde: &BumpProfile) -> Result<()> {
    let flat = phi_tilde.kind != BumpKind::GaussianTruncated
        && phi_tilde.amplitude == 1.0
        && phi_tilde.inner >= phi.radius();
    if flat {
        Ok(())
    } else {
        Err(Error::invalid("phi_tilde", "must equal 1 on the support of phi"))
    }
}

/// Power-of-two envelope grid on a box of `box_len`, resolving profiles stretched by `scale`.
pub fn envelope_grid(box_len: f64, scale: f64, lambda: f64, points_per_unit: f64) -> Result<Grid1D> {
    let want = (box_len / scale * points_per_unit).ceil() as usize;
    let mut n = want.next_power_of_two().max(16);
    // coarsen down to a quarter of the requested density to keep envelopes below lambda/2
    while n > 16 && n * 4 > want && std::f64::consts::PI * n as f64 / box_len >= 0.5 * lambda {
        n /= 2;
    }
    let g = make_grid(n, box_len)?;
    if g.max_wavenumber() >= 0.5 * lambda {
        return Err(Error::UnderResolved(format!(
            "envelope band {:.3e} reaches half the carrier {lambda}; lambda is too small for this scale",
            g.max_wavenumber()
        )));
    }
    Ok(g)
}

/// Full grid on `box_len` with at least `per_wave` points per carrier wavelength.
pub fn carrier_grid(box_len: f64, lambda: f64, per_wave: f64) -> Result<Grid1D> {
    let want = (per_wave * lambda * box_len / (2.0 * std::f64::consts::PI)).ceil() as usize;
    make_grid(want.next_power_of_two().max(16), box_len)
}

pub(crate) fn check_carrier(grid: &Grid1D, lambda: f64, support: f64) -> Result<()> {
    if grid.dx() > 2.0 * std::f64::consts::PI / (8.0 * lambda) * (1.0 + 1e-12) {
        return Err(Error::UnderResolved(format!(
            "need 8 points per wavelength 2pi/{lambda}, grid spacing is {:.3e}",
            grid.dx()
        )));
    }
    if grid.length() < 2.0 * support {
        return Err(Error::UnderResolved(format!(
            "box {} does not contain the support [-{support}, {support}]",
            grid.length()
        )));
    }
    Ok(())
}

/// `omega lambda^-1 phi_tilde(x/lambda^delta) + lambda^(-delta/2-s) phi(x/lambda^delta) cos(lambda x - omega t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BurgersFamilyParams {
    pub omega: f64,
    pub lambda: f64,
    pub delta: f64,
    pub s: f64,
    pub phi: BumpProfile,
    pub phi_tilde: BumpProfile,
}

impl BurgersFamilyParams {
    pub fn new(omega: f64, lambda: f64, delta: f64, s: f64) -> Result<Self> {
        let phi = BumpProfile::standard();
        let p = BurgersFamilyParams { omega, lambda, delta, s, phi, phi_tilde: phi.companion() };
        p.validate()?;
        Ok(p)
    }

    pub fn with_profile(mut self, phi: BumpProfile) -> Result<Self> {
        self.phi = phi;
        self.phi_tilde = phi.companion();
        self.validate()?;
        Ok(self)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        self.lambda = lambda;
        self.validate()?;
        Ok(self)
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (f, v) in [("omega", self.omega), ("lambda", self.lambda), ("delta", self.delta), ("s", self.s)] {
            finite(f, v)?;
        }
        if self.lambda < 8.0 {
            return Err(Error::invalid("lambda", format!("need lambda >= 8, got {}", self.lambda)));
        }
        if !(self.delta > 1.0 && self.delta < 2.0) {
            return Err(Error::invalid("delta", format!("need 1 < delta < 2, got {}", self.delta)));
        }
        if self.s <= 1.5 {
            return Err(Error::invalid("s", format!("need s > 3/2, got {}", self.s)));
        }
        check_companion(&self.phi, &self.phi_tilde)
    }

    /// Spatial stretch `lambda^delta`.
    pub fn scale(&self) -> f64 {
        self.lambda.powf(self.delta)
    }

    /// Amplitude `lambda^(-delta/2 - s)` of the oscillating part.
    pub fn amplitude(&self) -> f64 {
        self.lambda.powf(-0.5 * self.delta - self.s)
    }

    pub fn box_length(&self) -> f64 {
        16.0 * self.scale() * self.phi_tilde.radius()
    }

    pub fn envelope_grid(&self) -> Result<Grid1D> {
        envelope_grid(self.box_length(), self.scale(), self.lambda, ENVELOPE_POINTS_PER_UNIT)
    }
}

/// Benjamin-Ono data `-omega lambda^-1 phi_tilde_lambda - lambda^(-(1+delta)/2-s) phi_lambda cos(lambda x)`,
/// `phi_lambda(x) = phi(x / lambda^(1+delta))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BOFamilyParams {
    pub omega: f64,
    pub lambda: f64,
    pub delta: f64,
    pub s: f64,
    pub phi: BumpProfile,
    pub phi_tilde: BumpProfile,
}

impl BOFamilyParams {
    pub fn new(omega: f64, lambda: f64, delta: f64, s: f64) -> Result<Self> {
        let phi = BumpProfile::standard();
        let p = BOFamilyParams { omega, lambda, delta, s, phi, phi_tilde: phi.companion() };
        p.validate()?;
        Ok(p)
    }

    pub fn with_profile(mut self, phi: BumpProfile) -> Result<Self> {
        self.phi = phi;
        self.phi_tilde = phi.companion();
        self.validate()?;
        Ok(self)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        self.lambda = lambda;
        self.validate()?;
        Ok(self)
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    /// Hard constraints. The size condition on `omega` is checked by [`Self::regime_warnings`].
    pub fn validate(&self) -> Result<()> {
        for (f, v) in [("omega", self.omega), ("lambda", self.lambda), ("delta", self.delta), ("s", self.s)] {
            finite(f, v)?;
        }
        if self.lambda < 8.0 {
            return Err(Error::invalid("lambda", format!("need lambda >= 8, got {}", self.lambda)));
        }
        if self.s <= 0.0 {
            return Err(Error::invalid("s", format!("need s > 0, got {}", self.s)));
        }
        let lo = (1.0 - self.s).max(0.0);
        if !(self.delta > lo && self.delta < 1.0) {
            return Err(Error::invalid("delta", format!("need max(1-s,0) = {lo} < delta < 1, got {}", self.delta)));
        }
        check_companion(&self.phi, &self.phi_tilde)
    }

    /// Largest `|omega|` inside the asymptotic regime, `0.1 lambda^((1-delta)/2)`.
    pub fn omega_limit(&self) -> f64 {
        0.1 * self.lambda.powf(0.5 * (1.0 - self.delta))
    }

    pub fn regime_warnings(&self) -> Vec<String> {
        let lim = self.omega_limit();
        if self.omega.abs() > lim {
            vec![format!("|omega| = {} exceeds 0.1 lambda^((1-delta)/2) = {lim:.4}", self.omega.abs())]
        } else {
            vec![]
        }
    }

    pub fn validate_strict(&self) -> Result<()> {
        self.validate()?;
        match self.regime_warnings().pop() {
            Some(w) => Err(Error::invalid("omega", w)),
            None => Ok(()),
        }
    }

    /// Spatial stretch `lambda^(1+delta)`.
    pub fn scale(&self) -> f64 {
        self.lambda.powf(1.0 + self.delta)
    }

    /// `lambda^(-(1+delta)/2 - s)`.
    pub fn amplitude(&self) -> f64 {
        self.lambda.powf(-0.5 * (1.0 + self.delta) - self.s)
    }

    pub fn box_length(&self) -> f64 {
        16.0 * self.scale() * self.phi_tilde.radius()
    }

    pub fn envelope_grid(&self) -> Result<Grid1D> {
        envelope_grid(self.box_length(), self.scale(), self.lambda, ENVELOPE_POINTS_PER_UNIT)
    }

    /// Full grid with 8 points per carrier wavelength.
    pub fn carrier_grid(&self) -> Result<Grid1D> {
        carrier_grid(self.box_length(), self.lambda, 8.0)
    }
}

/// Concentrating NLS data `kappa_n n^(d/2-s) phi(n x)` on the `d`-torus of side `2 pi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NLSConcentrationParams {
    pub d: usize,
    pub s: f64,
    pub n: u64,
    pub delta1: f64,
    pub delta2: f64,
    pub l: u32,
    pub phi: BumpProfile,
}

impl NLSConcentrationParams {
    pub fn new(d: usize, s: f64, n: u64, delta1: f64, delta2: f64, l: u32) -> Result<Self> {
        let p = NLSConcentrationParams { d, s, n, delta1, delta2, l, phi: Self::default_profile() };
        p.validate()?;
        Ok(p)
    }

    /// Gaussian with unit width.
    pub fn default_profile() -> BumpProfile {
        let cut = (2.0 * 1e17f64.ln()).sqrt();
        BumpProfile { kind: BumpKind::GaussianTruncated, inner: 0.0, outer: cut, amplitude: 1.0 }
    }

    pub fn with_n(mut self, n: u64) -> Result<Self> {
        self.n = n;
        self.validate()?;
        Ok(self)
    }

    pub fn with_profile(mut self, phi: BumpProfile) -> Self {
        self.phi = phi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        finite("s", self.s)?;
        if !(1..=3).contains(&self.d) {
            return Err(Error::invalid("d", format!("need d in {{1,2,3}}, got {}", self.d)));
        }
        if self.n < 2 {
            return Err(Error::invalid("n", format!("need n >= 2, got {}", self.n)));
        }
        if 2 * self.l as usize <= self.d {
            return Err(Error::invalid("l", format!("need l > d/2, got l = {}", self.l)));
        }
        if !(self.delta2 > 0.0 && self.delta2 < 1.0 / (self.l as f64 + 1.0)) {
            return Err(Error::invalid("delta2", format!("need 0 < delta2 < 1/(l+1), got {}", self.delta2)));
        }
        if !(self.delta1 > 0.0) {
            return Err(Error::invalid("delta1", "must be positive"));
        }
        if self.s > 0.0 {
            let cap = (0.5 * self.delta2).min(self.s * self.delta2 / (1.0 + 2.0 * self.s));
            if self.delta1 >= cap {
                return Err(Error::invalid("delta1", format!("need delta1 < {cap:.6}, got {}", self.delta1)));
            }
        }
        Ok(())
    }

    /// `log(n)^(-delta1)`.
    pub fn kappa(&self) -> f64 {
        (self.n as f64).ln().powf(-self.delta1)
    }

    /// `log(n)^delta2 n^(-2(d/2 - s))`.
    pub fn t_n(&self) -> f64 {
        let n = self.n as f64;
        n.ln().powf(self.delta2) * n.powf(-2.0 * (0.5 * self.d as f64 - self.s))
    }

    /// Peak amplitude `kappa_n n^(d/2 - s)`.
    pub fn amplitude(&self) -> f64 {
        self.kappa() * (self.n as f64).powf(0.5 * self.d as f64 - self.s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burgers_ranges() {
        assert!(BurgersFamilyParams::new(1.0, 32.0, 1.2, 1.6).is_ok());
        assert!(BurgersFamilyParams::new(1.0, 32.0, 0.9, 1.6).is_err());
        assert!(BurgersFamilyParams::new(1.0, 32.0, 1.2, 1.5).is_err());
        assert!(BurgersFamilyParams::new(1.0, 4.0, 1.2, 1.6).is_err());
    }

    #[test]
    fn bo_ranges_and_regime() {
        let p = BOFamilyParams::new(1.0, 64.0, 0.5, 1.0).unwrap();
        assert_eq!(p.regime_warnings().len(), 1);
        assert!(p.validate_strict().is_err());
        assert!(p.with_omega(0.2).validate_strict().is_ok());
        assert!(BOFamilyParams::new(1.0, 64.0, 0.3, 0.5).is_err());
        assert!(BOFamilyParams::new(1.0, 64.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn companion_checked() {
        let mut p = BOFamilyParams::new(0.0, 64.0, 0.5, 1.0).unwrap();
        p.phi_tilde = BumpProfile::standard();
        assert!(p.validate().is_err());
    }

    #[test]
    fn nls_derived_fields() {
        let n = (10.0f64).exp().round() as u64;
        let p = NLSConcentrationParams::new(2, 0.5, n, 0.01, 0.25, 2).unwrap();
        let p2 = NLSConcentrationParams { delta1: 0.25, ..p };
        assert!((p2.kappa() - 0.562_341_325_190_349).abs() < 1e-6);
        assert!(NLSConcentrationParams::new(2, 0.5, 64, 0.2, 0.25, 2).is_err());
        assert!(NLSConcentrationParams::new(2, 0.5, 64, 0.01, 0.4, 2).is_err());
        assert!(NLSConcentrationParams::new(2, -0.1, 64, 0.3, 0.3, 2).is_ok());
        let q = NLSConcentrationParams::new(2, 1.0, 64, 0.01, 0.3, 2).unwrap();
        assert!((q.amplitude() - q.kappa()).abs() < 1e-15);
    }
}
