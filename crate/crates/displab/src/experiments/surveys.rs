use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{Check, Outcome, Series};
use super::{Experiment, Preset, RunContext};
use crate::error::{Error, Result};
use crate::evolvers::{EquationKind, EquationSpec};
use crate::spectral_core::{kato_ponce_ratio, lp_norm, make_grid, Field1D, Field2D, Grid1D, Grid2D, Spectral};

/// Sorted-sample quantile with linear interpolation.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let (i, f) = (pos.floor() as usize, pos.fract());
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - f) + sorted[i + 1] * f
    } else {
        sorted[i]
    }
}

/// Independent stream per sample under one seed.
fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn summary_row(lead: f64, mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    vec![lead, v.len() as f64, v[0], quantile(&v, 0.1), quantile(&v, 0.5), quantile(&v, 0.9), *v.last().expect("samples")]
}

const SUMMARY: [&str; 7] = ["key", "samples", "min", "q10", "median", "q90", "max"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KatoPonceParams {
    pub s_values: Vec<f64>,
    pub samples: usize,
    pub n: usize,
    /// each pair is band-limited to a random band in `[min_band, max_band]`
    pub min_band: usize,
    pub max_band: usize,
}

pub struct KatoPonce;

fn random_band_limited(grid: &Grid1D, band: usize, rng: &mut ChaCha8Rng) -> Result<Field1D> {
    let n = grid.len();
    let mut spec = vec![Complex64::new(0.0, 0.0); n];
    spec[0] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
    for k in 1..=band {
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        spec[k] = c;
        spec[n - k] = c.conj();
    }
    Field1D::from_spectrum(grid, spec, true)
}

impl Experiment for KatoPonce {
    type Params = KatoPonceParams;
    const NAME: &'static str = "kato-ponce";
    const DESCRIPTION: &'static str = "distribution of the commutator-estimate ratio over seeded random band-limited pairs";

    fn defaults(preset: Preset) -> KatoPonceParams {
        let samples = match preset {
            Preset::Quick => 40,
            Preset::Full => 400,
        };
        KatoPonceParams { s_values: vec![1.6, 2.0, 3.0], samples, n: 256, min_band: 2, max_band: 64 }
    }

    fn validate(p: &KatoPonceParams) -> Result<()> {
        if p.s_values.is_empty() || p.s_values.iter().any(|&s| !(s >= 1.0)) {
            return Err(Error::invalid("s_values", "need s >= 1"));
        }
        if p.samples < 2 {
            return Err(Error::invalid("samples", "need at least two samples"));
        }
        if p.n < 16 || !p.n.is_power_of_two() {
            return Err(Error::invalid("n", "need a power of two >= 16"));
        }
        if p.min_band < 1 || p.max_band < p.min_band || 3 * p.max_band > p.n {
            return Err(Error::invalid("max_band", "need 1 <= min_band <= max_band <= n/3"));
        }
        Ok(())
    }

    fn run(ctx: &RunContext, p: &KatoPonceParams) -> Result<Outcome> {
        let grid = make_grid(p.n, std::f64::consts::TAU)?;
        let mut out = Outcome::default();
        out.grids.insert("torus".into(), format!("N={} L=2pi", p.n));
        let mut table = Series::new("kato_ponce", &SUMMARY);
        for (si, &s) in p.s_values.iter().enumerate() {
            let ratios: Vec<f64> = (0..p.samples)
                .into_par_iter()
                .map(|k| {
                    let mut rng = sample_rng(ctx.seed, ((si as u64) << 32) | k as u64);
                    let b1 = rng.random_range(p.min_band..=p.max_band);
                    let b2 = rng.random_range(p.min_band..=p.max_band);
                    let f = random_band_limited(&grid, b1, &mut rng)?;
                    let g = random_band_limited(&grid, b2, &mut rng)?;
                    kato_ponce_ratio(&f, &g, s)
                })
                .collect::<Result<_>>()?;
            let row = summary_row(s, ratios);
            out.checks.push(Check::flag(&format!("max_finite_s{s}"), row[6].is_finite(), format!("max = {}", row[6])));
            table.push(row);
        }
        out.series.push(table);
        Ok(out)
    }
}

/// Linear group whose space-time norms are surveyed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrichartzGroup {
    /// free Benjamin-Ono, `2/p + 1/q = 1/2`, `p >= 4`
    Bo,
    /// `e^{it Delta}` on the plane, `2/p + 2/q = 1`, `p > 2`
    Schrodinger2d,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrichartzParams {
    pub group: StrichartzGroup,
    pub p: f64,
    pub q: f64,
    pub t: f64,
    pub time_samples: usize,
    pub samples: usize,
    pub n: usize,
    pub box_length: f64,
    /// highest carrier frequency in the random data
    pub band: usize,
    pub refinement_tolerance: f64,
}

pub struct Strichartz;

/// Random real trigonometric polynomial of degree `band` under a unit-width Gaussian window.
fn packet_coeffs(band: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    (0..=band).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

fn packet_eval(c: &[(f64, f64)], y: f64) -> f64 {
    let w = (-0.5 * y * y).exp();
    w * c.iter().enumerate().map(|(k, &(a, b))| a * (k as f64 * y).cos() + b * (k as f64 * y).sin()).sum::<f64>()
}

/// `(int_0^T ||S(t) u0||_q^p dt)^(1/p) / ||u0||_2` with the composite trapezoid rule.
fn ratio_1d(grid: &Grid1D, c: &[(f64, f64)], p: f64, q: f64, t_end: f64, m: usize) -> Result<f64> {
    let half = 0.5 * grid.length();
    let u0 = Field1D::from_fn_real(grid, |x| packet_eval(c, x - half));
    let l2 = lp_norm(&u0, 2.0)?;
    if l2 == 0.0 {
        return Err(Error::UndefinedRatio("zero data".into()));
    }
    let eq = EquationSpec::new(EquationKind::Bo)?.linear();
    let spec0 = u0.spectrum();
    let sym: Vec<Complex64> = (0..grid.len()).map(|i| eq.symbol(grid.wavenumber(i))).collect();
    let mut acc = 0.0;
    for j in 0..=m {
        let t = t_end * j as f64 / m as f64;
        let spec: Vec<Complex64> = spec0.iter().zip(&sym).map(|(c, l)| c * (l * t).exp()).collect();
        let u = Field1D::from_spectrum(grid, spec, false)?;
        let w = if j == 0 || j == m { 0.5 } else { 1.0 };
        acc += w * lp_norm(&u, q)?.powf(p);
    }
    Ok((acc * t_end / m as f64).powf(1.0 / p) / l2)
}

fn ratio_2d(grid: &Grid2D, c1: &[(f64, f64)], c2: &[(f64, f64)], p: f64, q: f64, t_end: f64, m: usize) -> Result<f64> {
    let half = 0.5 * grid.length();
    let u0 = Field2D::from_fn(grid, |x, y| Complex64::new(packet_eval(c1, x - half) * packet_eval(c2, y - half), 0.0));
    let l2 = u0.lp_norm(2.0)?;
    if l2 == 0.0 {
        return Err(Error::UndefinedRatio("zero data".into()));
    }
    let spec0 = u0.spectrum();
    let k2 = grid.xi_squared();
    let mut acc = 0.0;
    for j in 0..=m {
        let t = t_end * j as f64 / m as f64;
        let mut b: Vec<Complex64> = spec0.iter().zip(&k2).map(|(c, &k)| c * Complex64::from_polar(1.0, -k * t)).collect();
        grid.inverse(&mut b);
        let u = Field2D::new(grid, b)?;
        let w = if j == 0 || j == m { 0.5 } else { 1.0 };
        acc += w * u.lp_norm(q)?.powf(p);
    }
    Ok((acc * t_end / m as f64).powf(1.0 / p) / l2)
}

impl Experiment for Strichartz {
    type Params = StrichartzParams;
    const NAME: &'static str = "strichartz";
    const DESCRIPTION: &'static str = "space-time norm over L^2 norm for free dispersive flows on seeded random packets";

    fn defaults(preset: Preset) -> StrichartzParams {
        let samples = match preset {
            Preset::Quick => 10,
            Preset::Full => 50,
        };
        StrichartzParams {
            group: StrichartzGroup::Bo,
            p: 6.0,
            q: 6.0,
            t: 1.0,
            time_samples: 64,
            samples,
            n: 1024,
            box_length: 40.0 * std::f64::consts::PI,
            band: 4,
            refinement_tolerance: 0.05,
        }
    }

    fn validate(p: &StrichartzParams) -> Result<()> {
        let (ok, rule) = match p.group {
            StrichartzGroup::Bo => ((2.0 / p.p + 1.0 / p.q - 0.5).abs() < 1e-12 && p.p >= 4.0, "2/p + 1/q = 1/2, p >= 4"),
            StrichartzGroup::Schrodinger2d => ((2.0 / p.p + 2.0 / p.q - 1.0).abs() < 1e-12 && p.p > 2.0, "2/p + 2/q = 1, p > 2"),
        };
        if !ok || !p.q.is_finite() {
            return Err(Error::invalid("p", format!("(p, q) = ({}, {}) is not admissible: need {rule}", p.p, p.q)));
        }
        if !(p.t > 0.0) {
            return Err(Error::invalid("t", "need T > 0"));
        }
        if p.time_samples < 64 {
            return Err(Error::invalid("time_samples", "need at least 64 time samples"));
        }
        if p.samples < 1 {
            return Err(Error::invalid("samples", "need at least one sample"));
        }
        if p.n < 16 || !p.n.is_power_of_two() {
            return Err(Error::invalid("n", "need a power of two >= 16"));
        }
        if !(p.box_length > 0.0) {
            return Err(Error::invalid("box_length", "need a positive box"));
        }
        Ok(())
    }

    fn run(ctx: &RunContext, p: &StrichartzParams) -> Result<Outcome> {
        let mut out = Outcome::default();
        let eval = |n: usize, m: usize| -> Result<Vec<f64>> {
            match p.group {
                StrichartzGroup::Bo => {
                    let g = make_grid(n, p.box_length)?;
                    (0..p.samples)
                        .into_par_iter()
                        .map(|k| {
                            let mut rng = sample_rng(ctx.seed, k as u64);
                            ratio_1d(&g, &packet_coeffs(p.band, &mut rng), p.p, p.q, p.t, m)
                        })
                        .collect()
                }
                StrichartzGroup::Schrodinger2d => {
                    let g = Grid2D::new(n, p.box_length)?;
                    (0..p.samples)
                        .into_par_iter()
                        .map(|k| {
                            let mut rng = sample_rng(ctx.seed, k as u64);
                            let c1 = packet_coeffs(p.band, &mut rng);
                            let c2 = packet_coeffs(p.band, &mut rng);
                            ratio_2d(&g, &c1, &c2, p.p, p.q, p.t, m)
                        })
                        .collect()
                }
            }
        };
        let coarse = eval(p.n, p.time_samples)?;
        let fine = eval(2 * p.n, 2 * p.time_samples)?;
        out.grids.insert("coarse".into(), format!("N={} L={:.6} M={}", p.n, p.box_length, p.time_samples));
        out.grids.insert("fine".into(), format!("N={} L={:.6} M={}", 2 * p.n, p.box_length, 2 * p.time_samples));
        let mut per = Series::new("strichartz_samples", &["sample", "ratio_coarse", "ratio_fine"]);
        for (k, (a, b)) in coarse.iter().zip(&fine).enumerate() {
            per.push(vec![k as f64, *a, *b]);
        }
        out.series.push(per);
        let mut table = Series::new("strichartz", &SUMMARY);
        let rc = summary_row(0.0, coarse);
        let rf = summary_row(1.0, fine);
        let (mc, mf) = (rc[6], rf[6]);
        table.push(rc);
        table.push(rf);
        out.series.push(table);
        out.checks.push(Check::flag("max_finite", mc.is_finite() && mf.is_finite(), format!("coarse {mc}, fine {mf}")));
        out.checks.push(Check::at_most("refinement_change", (mc - mf).abs() / mf, p.refinement_tolerance));
        Ok(out)
    }
}
