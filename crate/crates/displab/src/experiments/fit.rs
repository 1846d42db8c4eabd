use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a fitted slope is compared with its prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlopeRule {
    /// `|slope - predicted| <= tol`
    Within,
    /// `slope <= predicted + tol`
    AtMost,
    /// `slope >= predicted - tol`
    AtLeast,
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub name: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub log_x: Vec<f64>,
    pub log_y: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    /// half-width of the 95% interval on the slope (0 for exact fits or three points)
    pub slope_ci: f64,
    pub predicted: Option<f64>,
    pub tolerance: f64,
    pub rule: SlopeRule,
    pub pass: bool,
}

impl SlopeFit {
    /// Attach a prediction and recompute the pass flag.
    pub fn against(mut self, name: &str, predicted: f64, tolerance: f64, rule: SlopeRule) -> Self {
        self.name = name.to_string();
        self.predicted = Some(predicted);
        self.tolerance = tolerance;
        self.rule = rule;
        self.pass = match rule {
            SlopeRule::Within => (self.slope - predicted).abs() <= tolerance,
            SlopeRule::AtMost => self.slope <= predicted + tolerance,
            SlopeRule::AtLeast => self.slope >= predicted - tolerance,
        };
        self
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

/// Fit `y = C x^a` by least squares in log-log coordinates.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<SlopeFit> {
    if xs.len() != ys.len() {
        return Err(Error::invalid("ys", format!("{} x values but {} y values", xs.len(), ys.len())));
    }
    if xs.len() < 3 {
        return Err(Error::invalid("xs", format!("need at least 3 points, got {}", xs.len())));
    }
    if let Some(v) = xs.iter().chain(ys).find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::invalid("values", format!("log-log fit needs positive finite values, got {v}")));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("xs", "all x values coincide"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let residual_rms = (ss / n).sqrt();
    let dof = lx.len() - 2;
    let slope_ci = if dof > 0 { t95(dof) * (ss / dof as f64 / sxx).sqrt() } else { 0.0 };
    Ok(SlopeFit {
        name: String::new(),
        x: xs.to_vec(),
        y: ys.to_vec(),
        log_x: lx,
        log_y: ly,
        slope,
        intercept,
        residual_rms,
        slope_ci,
        predicted: None,
        tolerance: 0.0,
        rule: SlopeRule::Within,
        pass: true,
    })
}

/// Two-sided 95% Student-t quantile.
fn t95(dof: usize) -> f64 {
    const T: [f64; 10] = [12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228];
    if dof <= T.len() {
        T[dof - 1]
    } else {
        1.96 + 2.4 / dof as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_power() {
        let xs = [32.0, 64.0, 128.0, 256.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-1.5)).collect();
        let f = fit_power_law(&xs, &ys).unwrap();
        assert!((f.slope + 1.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-10);
        assert!(f.residual_rms < 1e-12);
    }

    #[test]
    fn constant_has_zero_slope() {
        let f = fit_power_law(&[1.0, 2.0, 4.0], &[5.0, 5.0, 5.0]).unwrap();
        assert!(f.slope.abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_power_law(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(fit_power_law(&[1.0, 2.0, 3.0], &[1.0, 0.0, 2.0]).is_err());
        assert!(fit_power_law(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn noisy_recovery_inside_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..8).map(|k| 2f64.powi(k + 3)).collect();
        let mut hits = 0;
        for _ in 0..200 {
            let ys: Vec<f64> = xs.iter().map(|x| x.powf(0.7) * (1.0 + 0.05 * rng.random_range(-1.0..1.0))).collect();
            let f = fit_power_law(&xs, &ys).unwrap();
            if (f.slope - 0.7).abs() <= f.slope_ci {
                hits += 1;
            }
        }
        assert!(hits >= 180, "{hits}");
    }

    #[test]
    fn rules() {
        let f = fit_power_law(&[1.0, 2.0, 4.0], &[1.0, 0.5, 0.25]).unwrap();
        assert!(f.clone().against("a", -1.1, 0.15, SlopeRule::Within).pass);
        assert!(f.clone().against("b", -1.5, 0.2, SlopeRule::AtMost).pass == false);
        assert!(f.against("c", -0.9, 0.05, SlopeRule::AtLeast).pass == false);
    }
}
