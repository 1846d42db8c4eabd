use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smoothness order of the compact polynomial taper.
pub const POLY_ORDER: u32 = 12;

const GAUSS_CUT: f64 = 1e-17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BumpKind {
    CosineTaper,
    CompactPolynomial,
    GaussianTruncated,
}

impl BumpKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cosine-taper" => Ok(BumpKind::CosineTaper),
            "compact-polynomial" => Ok(BumpKind::CompactPolynomial),
            "gaussian-truncated" => Ok(BumpKind::GaussianTruncated),
            other => Err(Error::invalid("profile", format!("unknown bump kind `{other}`"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BumpKind::CosineTaper => "cosine-taper",
            BumpKind::CompactPolynomial => "compact-polynomial",
            BumpKind::GaussianTruncated => "gaussian-truncated",
        }
    }
}

/// Even bump: flat at `amplitude` for `|x| <= inner`, zero for `|x| >= outer`.
///
/// The gaussian kind ignores `inner` and is cut where it drops below 1e-17 of its peak.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpProfile {
    pub kind: BumpKind,
    pub inner: f64,
    pub outer: f64,
    pub amplitude: f64,
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut r = 1.0;
    for j in 0..k {
        r = r * (n - j) as f64 / (j + 1) as f64;
    }
    r
}

/// `1 - I_tau(p+1, p+1)`: the Bernstein form is a sum of positive terms.
fn poly_taper(tau: f64) -> f64 {
    if tau <= 0.0 {
        return 1.0;
    }
    if tau >= 1.0 {
        return 0.0;
    }
    let p = POLY_ORDER;
    let n = 2 * p + 1;
    let mut acc = 0.0;
    for j in 0..=p {
        acc += binomial(n, j) * tau.powi(j as i32) * (1.0 - tau).powi((n - j) as i32);
    }
    acc
}

impl BumpProfile {
    pub fn new(kind: BumpKind, inner: f64, outer: f64) -> Result<Self> {
        if !(outer > 0.0 && outer.is_finite()) {
            return Err(Error::invalid("outer", "support radius must be positive"));
        }
        if kind != BumpKind::GaussianTruncated && !(inner >= 0.0 && inner < outer) {
            return Err(Error::invalid("inner", "need 0 <= inner < outer"));
        }
        Ok(BumpProfile { kind, inner, outer, amplitude: 1.0 })
    }

    /// Default profile: compact polynomial, plateau `[-1, 1]`, support `[-2, 2]`.
    pub fn standard() -> Self {
        BumpProfile { kind: BumpKind::CompactPolynomial, inner: 1.0, outer: 2.0, amplitude: 1.0 }
    }

    pub fn of_kind(kind: BumpKind) -> Self {
        match kind {
            BumpKind::GaussianTruncated => BumpProfile { kind, inner: 0.0, outer: 2.0, amplitude: 1.0 },
            _ => BumpProfile { kind, ..Self::standard() },
        }
    }

    pub fn zero() -> Self {
        BumpProfile { amplitude: 0.0, ..Self::standard() }
    }

    pub fn with_amplitude(mut self, a: f64) -> Self {
        self.amplitude = a;
        self
    }

    pub fn radius(&self) -> f64 {
        self.outer
    }

    fn sigma(&self) -> f64 {
        self.outer / (2.0 * (1.0 / GAUSS_CUT).ln()).sqrt()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let r = x.abs();
        if r >= self.outer || self.amplitude == 0.0 {
            return 0.0;
        }
        let shape = match self.kind {
            BumpKind::GaussianTruncated => {
                let sg = self.sigma();
                (-r * r / (2.0 * sg * sg)).exp()
            }
            BumpKind::CompactPolynomial => poly_taper((r - self.inner) / (self.outer - self.inner)),
            BumpKind::CosineTaper => {
                let tau = ((r - self.inner) / (self.outer - self.inner)).clamp(0.0, 1.0);
                0.5 * (1.0 + (std::f64::consts::PI * tau).cos())
            }
        };
        self.amplitude * shape
    }

    /// `int phi(x)^p dx` by composite Simpson on the support.
    pub fn power_integral(&self, p: i32) -> f64 {
        let m = 20_000usize;
        let a = -self.outer;
        let h = 2.0 * self.outer / m as f64;
        let mut acc = 0.0;
        for j in 0..=m {
            let w = if j == 0 || j == m {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * self.eval(a + j as f64 * h).powi(p);
        }
        acc * h / 3.0
    }

    pub fn l2_norm(&self) -> f64 {
        self.power_integral(2).sqrt()
    }

    /// Same shape rescaled to unit `L^2` norm.
    pub fn normalized(&self) -> Self {
        let n = self.l2_norm();
        if n == 0.0 {
            return *self;
        }
        BumpProfile { amplitude: self.amplitude / n, ..*self }
    }

    /// Profile equal to one on the support of `self`.
    pub fn companion(&self) -> Self {
        BumpProfile { kind: BumpKind::CompactPolynomial, inner: self.outer, outer: self.outer + 1.0, amplitude: 1.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taper_endpoints_and_symmetry() {
        assert_eq!(poly_taper(0.0), 1.0);
        assert_eq!(poly_taper(1.0), 0.0);
        assert!((poly_taper(0.5) - 0.5).abs() < 1e-14);
        for t in [0.1, 0.3, 0.77] {
            assert!((poly_taper(t) + poly_taper(1.0 - t) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn companion_is_one_on_support() {
        for kind in [BumpKind::CosineTaper, BumpKind::CompactPolynomial, BumpKind::GaussianTruncated] {
            let phi = BumpProfile::of_kind(kind);
            let tilde = phi.companion();
            for j in 0..=400 {
                let x = -phi.radius() + j as f64 * phi.radius() / 200.0;
                assert_eq!(tilde.eval(x), 1.0);
            }
            assert_eq!(phi.eval(phi.radius() + 1e-9), 0.0);
        }
    }

    #[test]
    fn normalization() {
        let phi = BumpProfile::standard().normalized();
        assert!((phi.l2_norm() - 1.0).abs() < 1e-12);
        let g = BumpProfile::of_kind(BumpKind::GaussianTruncated);
        let sg = g.sigma();
        let exact = (std::f64::consts::PI.sqrt() * sg).sqrt();
        assert!((g.l2_norm() - exact).abs() < 1e-12);
    }
}
