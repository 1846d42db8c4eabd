use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::field::Field1D;
use super::grid::Grid1D;
use super::lp::{lp_symbol, psi};
use crate::error::{Error, Result};

/// Symmetry class of a symbol; decides realness and Nyquist handling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    /// real and even: maps real fields to real fields
    Even,
    /// imaginary and odd: maps real fields to real fields, Nyquist mode dropped
    Odd,
    General,
}

impl Parity {
    pub fn product(self, other: Parity) -> Parity {
        use Parity::*;
        match (self, other) {
            (Even, Even) | (Odd, Odd) => Even,
            (Even, Odd) | (Odd, Even) => Odd,
            _ => General,
        }
    }
}

type SymbolFn = dyn Fn(f64) -> Complex64 + Send + Sync;

/// Fourier multiplier `u -> F^{-1}[m(xi) F u]`.
#[derive(Clone)]
pub struct MultiplierSpec {
    name: String,
    parity: Parity,
    symbol: Arc<SymbolFn>,
}

impl fmt::Debug for MultiplierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSpec").field("name", &self.name).field("parity", &self.parity).finish()
    }
}

/// Names accepted by [`MultiplierSpec::by_name`].
pub const NAMED_MULTIPLIERS: [&str; 5] = ["identity", "hilbert", "bessel_s", "dyadic_N", "semigroup"];

impl MultiplierSpec {
    pub fn new(
        name: impl Into<String>,
        parity: Parity,
        symbol: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        MultiplierSpec { name: name.into(), parity, symbol: Arc::new(symbol) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        (self.symbol)(xi)
    }

    pub fn identity() -> Self {
        MultiplierSpec::new("identity", Parity::Even, |_| Complex64::new(1.0, 0.0))
    }

    /// `D^s`, symbol `(1 + xi^2)^{s/2}`.
    pub fn bessel(s: f64) -> Self {
        MultiplierSpec::new(format!("bessel_{s}"), Parity::Even, move |xi| {
            Complex64::new((1.0 + xi * xi).powf(0.5 * s), 0.0)
        })
    }

    /// Symbol `-i sign(xi)` with `sign(0) = 0`.
    pub fn hilbert() -> Self {
        MultiplierSpec::new("hilbert", Parity::Odd, |xi| {
            let sg = if xi > 0.0 {
                1.0
            } else if xi < 0.0 {
                -1.0
            } else {
                0.0
            };
            Complex64::new(0.0, -sg)
        })
    }

    /// `d^k/dx^k`, symbol `(i xi)^k`.
    pub fn derivative(order: u32) -> Self {
        let parity = if order.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
        MultiplierSpec::new(format!("d{order}"), parity, move |xi| Complex64::new(0.0, xi).powu(order))
    }

    /// Littlewood-Paley piece `Delta_N`.
    pub fn dyadic(n: u64) -> Self {
        MultiplierSpec::new(format!("dyadic_{n}"), Parity::Even, move |xi| {
            Complex64::new(lp_symbol(n, xi), 0.0)
        })
    }

    /// Smooth spectral cutoff `rho_hat(eps xi)`.
    pub fn mollifier(eps: f64) -> Self {
        MultiplierSpec::new(format!("mollifier_{eps}"), Parity::Even, move |xi| {
            Complex64::new(psi(eps * xi), 0.0)
        })
    }

    /// `exp(t L(xi))` for a linear symbol `L`.
    pub fn semigroup(
        name: impl Into<String>,
        t: f64,
        symbol: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        MultiplierSpec::new(name, Parity::General, move |xi| (symbol(xi) * t).exp())
    }

    /// Registered constructor; `param` is `s`, `N` or `t` as appropriate.
    pub fn by_name(name: &str, param: f64) -> Result<Self> {
        match name {
            "identity" => Ok(Self::identity()),
            "hilbert" => Ok(Self::hilbert()),
            "bessel_s" => Ok(Self::bessel(param)),
            "dyadic_N" => {
                let n = param as u64;
                if param < 1.0 || n as f64 != param || !n.is_power_of_two() {
                    return Err(Error::invalid("N", format!("{param} is not dyadic")));
                }
                Ok(Self::dyadic(n))
            }
            "semigroup" => Ok(Self::semigroup("semigroup", param, |xi| Complex64::new(0.0, xi * xi * xi))),
            other => Err(Error::invalid("multiplier", format!("unknown name `{other}`"))),
        }
    }

    /// Pointwise product of symbols.
    pub fn product(&self, other: &MultiplierSpec) -> MultiplierSpec {
        let (a, b) = (self.symbol.clone(), other.symbol.clone());
        MultiplierSpec {
            name: format!("{}*{}", self.name, other.name),
            parity: self.parity.product(other.parity),
            symbol: Arc::new(move |xi| a(xi) * b(xi)),
        }
    }

    /// Symbol values on the grid in FFT order, checked for finiteness.
    pub fn on_grid(&self, grid: &Grid1D) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            let xi = grid.wavenumber(i);
            let v = self.eval(xi);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFiniteSymbol { name: self.name.clone(), xi });
            }
            out.push(v);
        }
        if self.parity == Parity::Odd {
            out[grid.nyquist_index()] = Complex64::new(0.0, 0.0);
        }
        Ok(out)
    }
}

pub fn apply_multiplier(u: &Field1D, m: &MultiplierSpec) -> Result<Field1D> {
    let sym = m.on_grid(u.grid())?;
    let mut c = u.spectrum();
    for (ck, s) in c.iter_mut().zip(&sym) {
        *ck *= s;
    }
    let real = u.is_real() && m.parity() != Parity::General;
    Field1D::from_spectrum(u.grid(), c, real)
}

pub fn hilbert_transform(u: &Field1D) -> Field1D {
    apply_multiplier(u, &MultiplierSpec::hilbert()).expect("hilbert symbol is finite")
}

pub fn derivative(u: &Field1D, order: u32) -> Field1D {
    apply_multiplier(u, &MultiplierSpec::derivative(order)).expect("derivative symbol is finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::make_grid;
    use std::f64::consts::PI;

    fn max_diff(a: &Field1D, f: impl Fn(f64) -> f64) -> f64 {
        a.grid()
            .nodes()
            .iter()
            .zip(a.values())
            .map(|(&x, v)| (v - Complex64::new(f(x), 0.0)).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn bessel_one_on_single_mode() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let u = Field1D::from_fn_real(&g, |x| (8.0 * x).cos());
        let v = apply_multiplier(&u, &MultiplierSpec::bessel(1.0)).unwrap();
        let r = 65f64.sqrt();
        assert!(max_diff(&v, |x| r * (8.0 * x).cos()) < 1e-12);
    }

    #[test]
    fn hilbert_maps_cos_to_sin() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let u = Field1D::from_fn_real(&g, |x| (3.0 * x).cos());
        let v = hilbert_transform(&u);
        assert!(max_diff(&v, |x| (3.0 * x).sin()) < 1e-14);
        let c = Field1D::from_fn_real(&g, |_| 2.5);
        assert!(hilbert_transform(&c).max_abs() < 1e-15);
    }

    #[test]
    fn non_finite_symbol_rejected() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let u = Field1D::from_fn_real(&g, |x| x.sin());
        let m = MultiplierSpec::new("inv", Parity::Even, |xi| Complex64::new(1.0 / xi, 0.0));
        assert!(matches!(apply_multiplier(&u, &m), Err(Error::NonFiniteSymbol { .. })));
    }

    #[test]
    fn odd_symbol_drops_nyquist() {
        let g = make_grid(8, 2.0 * PI).unwrap();
        let u = Field1D::from_fn_real(&g, |x| (4.0 * x).cos());
        let v = derivative(&u, 1);
        assert!(v.max_abs() < 1e-14);
    }

    #[test]
    fn registry_names_unique() {
        let mut names = NAMED_MULTIPLIERS.to_vec();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), NAMED_MULTIPLIERS.len());
        for n in NAMED_MULTIPLIERS {
            assert!(MultiplierSpec::by_name(n, 4.0).is_ok());
        }
        assert!(MultiplierSpec::by_name("dyadic_N", 3.0).is_err());
    }
}
