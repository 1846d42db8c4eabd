use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NlsSign {
    Focusing,
    Defocusing,
}

impl NlsSign {
    /// `sigma` in `i u_t + Delta u + sigma |u|^2 u = 0`.
    pub fn sigma(self) -> f64 {
        match self {
            NlsSign::Focusing => 1.0,
            NlsSign::Defocusing => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EquationKind {
    /// `u_t + u u_x = 0`
    Burgers,
    /// `u_t + u u_x - eps u_xxt = 0`
    BurgersBbm { eps: f64 },
    /// `u_t + u u_x + eps u_xxxx = 0`
    BurgersParabolic { eps: f64 },
    /// `u_t + H u_xx + u u_x = 0`
    Bo,
    /// `u_t + u_xxx + u u_x = 0`
    Kdv,
    /// `u_t - |D|^gamma u_x + u u_x = 0`; `gamma = 2` is KdV
    DispersiveGamma { gamma: f64 },
    /// `v_t + v_xxx + v^2 v_x = 0`
    Mkdv,
    /// `u_t + u_xxx + (u^2 - int u^2) u_x = 0`
    GaugedMkdv,
    /// `i u_t + Delta u + sigma |u|^2 u = 0`, `d` in {1, 2}
    NlsTorus { d: u8, sign: NlsSign },
    /// `i v_t + |v|^2 v = 0`, pointwise
    OdeModel,
}

/// Equation registry entry: linear symbol `L(xi)` and nonlinearity, switchable for linear tests.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationSpec {
    pub kind: EquationKind,
    pub nonlinear: bool,
}

impl EquationSpec {
    pub fn new(kind: EquationKind) -> Result<Self> {
        match kind {
            EquationKind::BurgersBbm { eps } | EquationKind::BurgersParabolic { eps } if !(eps > 0.0) => {
                return Err(Error::invalid("eps", "regularization parameter must be positive"));
            }
            EquationKind::DispersiveGamma { gamma } if !(1.0..=2.0).contains(&gamma) => {
                return Err(Error::invalid("gamma", format!("need 1 <= gamma <= 2, got {gamma}")));
            }
            EquationKind::NlsTorus { d, .. } if !(d == 1 || d == 2) => {
                return Err(Error::invalid("d", format!("torus dimension must be 1 or 2, got {d}")));
            }
            _ => {}
        }
        Ok(EquationSpec { kind, nonlinear: true })
    }

    pub fn linear(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn name(&self) -> String {
        match self.kind {
            EquationKind::Burgers => "burgers".into(),
            EquationKind::BurgersBbm { eps } => format!("burgers-bbm({eps})"),
            EquationKind::BurgersParabolic { eps } => format!("burgers-parabolic({eps})"),
            EquationKind::Bo => "bo".into(),
            EquationKind::Kdv => "kdv".into(),
            EquationKind::DispersiveGamma { gamma } => format!("dispersive-gamma({gamma})"),
            EquationKind::Mkdv => "mkdv".into(),
            EquationKind::GaugedMkdv => "gauged-mkdv".into(),
            EquationKind::NlsTorus { d, sign } => {
                format!("nls-torus(d={d},{})", if sign == NlsSign::Focusing { "focusing" } else { "defocusing" })
            }
            EquationKind::OdeModel => "ode-model".into(),
        }
    }

    /// Real-valued equations keep real data real.
    pub fn is_real(&self) -> bool {
        !matches!(self.kind, EquationKind::NlsTorus { .. } | EquationKind::OdeModel)
    }

    pub fn is_conservative(&self) -> bool {
        !matches!(self.kind, EquationKind::BurgersParabolic { .. })
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            EquationKind::NlsTorus { d, .. } => d as usize,
            _ => 1,
        }
    }

    /// Linear symbol in 1-D; for the 2-D torus pass `|xi|` (the NLS symbol is radial).
    pub fn symbol(&self, xi: f64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        match self.kind {
            EquationKind::Burgers | EquationKind::BurgersBbm { .. } | EquationKind::OdeModel => Complex64::new(0.0, 0.0),
            EquationKind::BurgersParabolic { eps } => Complex64::new(-eps * xi.powi(4), 0.0),
            EquationKind::Bo => -i * sign(xi) * xi * xi,
            EquationKind::Kdv | EquationKind::Mkdv | EquationKind::GaugedMkdv => i * xi.powi(3),
            EquationKind::DispersiveGamma { gamma } => i * xi.abs().powf(gamma) * xi,
            EquationKind::NlsTorus { .. } => -i * xi * xi,
        }
    }

    /// Whether the linear symbol is odd (so the Nyquist slot must be killed for real data).
    pub fn odd_symbol(&self) -> bool {
        matches!(
            self.kind,
            EquationKind::Bo | EquationKind::Kdv | EquationKind::Mkdv | EquationKind::GaugedMkdv | EquationKind::DispersiveGamma { .. }
        )
    }

    pub fn dealias_default(&self) -> bool {
        !matches!(self.kind, EquationKind::OdeModel)
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_are_imaginary_for_conservative_kinds() {
        let kinds = [
            EquationKind::Bo,
            EquationKind::Kdv,
            EquationKind::DispersiveGamma { gamma: 1.5 },
            EquationKind::Mkdv,
            EquationKind::NlsTorus { d: 1, sign: NlsSign::Focusing },
        ];
        for k in kinds {
            let e = EquationSpec::new(k).unwrap();
            for xi in [-3.0, -0.5, 0.0, 2.0, 7.5] {
                assert_eq!(e.symbol(xi).re, 0.0);
            }
        }
        let g2 = EquationSpec::new(EquationKind::DispersiveGamma { gamma: 2.0 }).unwrap();
        let kdv = EquationSpec::new(EquationKind::Kdv).unwrap();
        for xi in [-4.0, -1.0, 3.0] {
            assert_eq!(g2.symbol(xi), kdv.symbol(xi));
        }
        assert!(EquationSpec::new(EquationKind::DispersiveGamma { gamma: 2.5 }).is_err());
        assert!(EquationSpec::new(EquationKind::NlsTorus { d: 3, sign: NlsSign::Focusing }).is_err());
    }
}
