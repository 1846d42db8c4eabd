use num_complex::Complex64;

use super::*;
use crate::spectral_core::{
    apply_multiplier, derivative, l2_norm, make_grid, sobolev_norm, BumpKind, BumpProfile, Field1D, MultiplierSpec,
    Parity,
};

fn hdxx() -> MultiplierSpec {
    MultiplierSpec::new("hdxx", Parity::Odd, bo::hilbert_dxx_symbol)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn burgers_omega_zero_is_pure_wave() {
    let p = BurgersFamilyParams::new(0.0, 16.0, 1.2, 1.6).unwrap();
    let g = carrier_grid(p.box_length(), p.lambda, 8.0).unwrap();
    let u = burgers_approx(&p, 0.4, &g).unwrap();
    let a = p.amplitude();
    let sc = p.scale();
    let err = g
        .centered_nodes()
        .iter()
        .zip(u.values())
        .map(|(&y, v)| (v.re - a * p.phi.eval(y / sc) * (p.lambda * y).cos()).abs())
        .fold(0.0, f64::max);
    assert_eq!(err, 0.0);
}

#[test]
fn burgers_rejects_coarse_grid_and_late_time() {
    let p = BurgersFamilyParams::new(1.0, 16.0, 1.2, 1.6).unwrap();
    let g = make_grid(256, p.box_length()).unwrap();
    assert!(matches!(burgers_approx(&p, 0.0, &g), Err(crate::Error::UnderResolved(_))));
    assert!(burgers_residual_norm(&p, 1.5).is_err());
}

#[test]
fn burgers_modulated_matches_full_grid() {
    let p = BurgersFamilyParams::new(1.0, 16.0, 1.2, 1.6).unwrap();
    let g = carrier_grid(p.box_length(), p.lambda, 16.0).unwrap();
    let t = 0.7;
    let u = burgers_approx(&p, t, &g).unwrap();
    let m = burgers_approx_modulated(&p, t, &p.envelope_grid().unwrap()).unwrap();
    assert!(rel(m.hs_norm(p.s), sobolev_norm(&u, p.s)) < 1e-9);

    // residual by plain spectral calculus on the full grid
    let a = p.amplitude();
    let sc = p.scale();
    let dt = Field1D::from_fn_real(&g, |x| {
        let y = x - 0.5 * g.length();
        p.omega * a * p.phi.eval(y / sc) * (p.lambda * y - p.omega * t).sin()
    });
    let r = dt.add(&u.mul(&derivative(&u, 1)).unwrap()).unwrap();
    let rep = burgers_residual_norm(&p, t).unwrap();
    assert!(rel(rep.total, l2_norm(&r)) < 1e-7, "{} vs {}", rep.total, l2_norm(&r));
    assert!(rep.triangle_ok());
}

#[test]
fn burgers_residual_vanishes_for_zero_family() {
    let p = BurgersFamilyParams::new(0.0, 32.0, 1.2, 1.6)
        .unwrap()
        .with_profile(BumpProfile::standard().with_amplitude(0.0))
        .unwrap();
    assert_eq!(burgers_residual_norm(&p, 0.5).unwrap().total, 0.0);
}

#[test]
fn burgers_high_self_interaction_scaling() {
    // omega = 0: only u_h d_x u_h survives, of size lambda^(1 - delta/2 - 2s)
    let mut prev = None;
    for lam in [32.0, 64.0] {
        let p = BurgersFamilyParams::new(0.0, lam, 1.2, 1.6).unwrap();
        let r = burgers_residual_norm(&p, 0.3).unwrap();
        assert!(rel(r.total, r.term("high_high").unwrap()) < 1e-12);
        if let Some(q) = prev {
            let slope = (r.total / q as f64).ln() / 2f64.ln();
            assert!((slope - (1.0 - 0.6 - 3.2)).abs() < 0.05, "slope {slope}");
        }
        prev = Some(r.total);
    }
}

#[test]
fn bo_initial_data_matches_envelope() {
    let p = BOFamilyParams::new(1.0, 16.0, 0.5, 1.0).unwrap();
    let g = p.carrier_grid().unwrap();
    let u = bo_initial_data(&p, &g).unwrap();
    let m = bo_initial_modulated(&p, &p.envelope_grid().unwrap()).unwrap();
    assert!(rel(m.hs_norm(1.0), sobolev_norm(&u, 1.0)) < 1e-9);
}

#[test]
fn bo_phase_identity_on_support() {
    let p = BOFamilyParams::new(1.0, 64.0, 0.5, 1.0).unwrap();
    let g = p.envelope_grid().unwrap();
    let y = g.centered_nodes();
    let u0 = bo_low_data(&p, &g).real_parts();
    for t in [0.0, 0.25, 0.7, 1.0] {
        let a = bo_phase(&p, t, &y, &u0);
        let b = bo_plateau_phase(&p, t, &y);
        for j in 0..y.len() {
            if p.phi.eval(y[j] / p.scale()) != 0.0 {
                assert_eq!(a[j].to_bits(), b[j].to_bits());
            }
        }
    }
}

#[test]
fn bo_zero_omega_keeps_only_f3_f4() {
    let p = BOFamilyParams::new(0.0, 32.0, 0.5, 1.0).unwrap();
    let fam = bo_low_family_default(&p).unwrap();
    assert!(fam.traj.snapshots.iter().all(|u| u.max_abs() == 0.0));
    let r = fam.residual(0.5).unwrap();
    for k in ["F1", "F2", "F5"] {
        assert_eq!(r.term(k), Some(0.0));
    }
    assert!(r.term("F3").unwrap() > 0.0 && r.term("F4").unwrap() > 0.0);
    assert!(r.triangle_ok());
}

#[test]
fn bo_residual_matches_full_grid() {
    let p = BOFamilyParams::new(1.0, 16.0, 0.5, 1.0).unwrap();
    let fam = bo_low_family_default(&p).unwrap();
    let t = 0.5;
    let rep = fam.residual(t).unwrap();
    assert!(rep.triangle_ok());

    let g = p.carrier_grid().unwrap();
    let h = fam.traj.times[1] - fam.traj.times[0];
    let k = fam.traj.times.iter().position(|&s| (s - t).abs() < 1e-12).unwrap();
    let up = |i: usize| fam.traj.snapshots[i].resample(&g).unwrap().to_real();
    let ul0 = up(0);
    let ul = up(k);
    let ul_t = up(k - 2)
        .sub(&up(k - 1).scale(8.0))
        .unwrap()
        .add(&up(k + 1).scale(8.0))
        .unwrap()
        .sub(&up(k + 2))
        .unwrap()
        .scale(1.0 / (12.0 * h));
    let u = bo_approx(&p, t, &ul, &ul0).unwrap();
    let a = p.amplitude();
    let lam = p.lambda;
    let ph = bo_phase(&p, t, &g.centered_nodes(), &ul0.real_parts());
    let prof = bo_profile(&p, &g);
    let uh_t: Vec<f64> = (0..g.len())
        .map(|j| a * prof[j] * (-lam * lam - lam * ul0.values()[j].re) * ph[j].sin())
        .collect();
    let f = ul_t
        .add(&Field1D::from_real(&g, &uh_t).unwrap())
        .unwrap()
        .add(&apply_multiplier(&u, &hdxx()).unwrap())
        .unwrap()
        .add(&u.mul(&derivative(&u, 1)).unwrap())
        .unwrap();
    let full = l2_norm(&f);
    assert!(rel(rep.total, full) < 1e-6, "{} vs {}", rep.total, full);
}

#[test]
fn bo_low_bounds_and_drift() {
    let fams: Vec<BoLowFamily> = [32.0, 64.0]
        .iter()
        .map(|&l| bo_low_family_default(&BOFamilyParams::new(1.0, l, 0.5, 1.0).unwrap()).unwrap())
        .collect();
    assert_eq!(fams[0].checks.len(), 5);
    for c in &fams[0].checks {
        assert!(c.ok || c.name == "dx2_l2", "{c:?}");
    }
    // constants are profile dependent; the exponents are not
    for (i, want) in [(0, -0.25), (1, -1.75), (2, -3.25), (3, -2.5)] {
        let slope = (fams[1].checks[i].measured / fams[0].checks[i].measured).log2();
        assert!((slope - want).abs() < 0.1, "{}: {slope}", fams[0].checks[i].name);
    }
}

#[test]
fn hilbert_commutator_is_negligible() {
    let p = BOFamilyParams::new(1.0, 64.0, 0.5, 1.0).unwrap();
    assert!(hilbert_commutator_ratio(&p).unwrap() < 1e-10);
}

#[test]
fn loc_ratio_matches_full_quadrature() {
    let phi = BumpProfile::standard().normalized();
    let (s, delta, lam) = (1.0, 0.6, 16.0f64);
    let scale: f64 = lam.powf(1.0 + delta);
    let g = carrier_grid(16.0 * scale * phi.radius(), lam, 16.0).unwrap();
    let u = Field1D::from_fn_real(&g, |x| {
        let y = x - 0.5 * g.length();
        phi.eval(y / scale) * (lam * y + 1.0).cos()
    });
    let direct = lam.powf(-0.5 * (1.0 + delta) - s) * sobolev_norm(&u, s);
    let r = loc_ratio(&phi, s, delta, 1.0, lam).unwrap();
    assert!(rel(r, direct) < 1e-9, "{r} vs {direct}");
}

#[test]
fn loc_ratio_limit_and_phase_invariance() {
    let phi = BumpProfile::standard().normalized();
    let lim = loc_limit(&phi);
    assert!((lim - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    let r: Vec<f64> = [0.0, std::f64::consts::PI / 3.0, 1.0]
        .iter()
        .map(|&a| loc_ratio(&phi, 1.0, 0.6, a, 256.0).unwrap())
        .collect();
    let spread = r.iter().fold(0.0f64, |m, x| m.max((x - r[0]).abs()));
    assert!(spread < 1e-3);
    assert!(rel(loc_ratio(&phi, 1.0, 0.6, 0.0, 512.0).unwrap(), lim) < 0.02);
    assert_eq!(loc_ratio(&BumpProfile::zero(), 1.0, 0.6, 0.0, 64.0).unwrap(), 0.0);
}

#[test]
fn loc_ratio_profile_kinds() {
    for kind in [BumpKind::CosineTaper, BumpKind::GaussianTruncated] {
        let phi = BumpProfile::of_kind(kind).normalized();
        assert!(rel(loc_ratio(&phi, 1.0, 0.6, 0.0, 256.0).unwrap(), loc_limit(&phi)) < 0.02);
    }
}

#[test]
fn semiclassical_energy_single_mode() {
    let g = make_grid(128, 2.0 * std::f64::consts::PI).unwrap();
    let n = 10u64;
    let u = Field1D::from_fn(&g, |x| Complex64::from_polar(1.0, n as f64 * x));
    let e = semiclassical_energy(&u, n, 1.0, 2).unwrap();
    let tp = 2.0 * std::f64::consts::PI;
    let nn = n as f64;
    let want = (nn * nn * tp + (1.0 + nn * nn).powi(2) / (nn * nn) * tp).sqrt();
    assert!(rel(e, want) < 1e-12);
    assert_eq!(semiclassical_energy(&Field1D::zeros(&g), n, 1.0, 2).unwrap(), 0.0);
    assert!(semiclassical_energy(&u, n, 1.0, 0).is_err());
}

#[test]
fn concentrating_data_norm_tracks_kappa() {
    let mut ratios = vec![];
    for n in [16u64, 32, 64] {
        let p = NLSConcentrationParams::new(1, 0.25, n, 0.01, 0.3, 1).unwrap();
        let g = nls_grid_1d(&p).unwrap();
        let u = nls_concentrating_data(&p, &g).unwrap();
        ratios.push(sobolev_norm(&u, p.s) / p.kappa());
    }
    for w in ratios.windows(2) {
        assert!(rel(w[1], w[0]) < 0.2, "{ratios:?}");
    }
}

#[test]
fn ansatz_error_starts_at_zero_and_rejects_late_times() {
    let p = NLSConcentrationParams::new(1, -0.25, 32, 0.1, 0.3, 1).unwrap();
    let s = nls_ansatz_error(&p, 0.5 * p.t_n(), 4).unwrap();
    assert_eq!(s.times.len(), 5);
    assert_eq!(s.energy_error[0], 0.0);
    assert!(nls_ansatz_error(&p, 2.0 * p.t_n(), 4).is_err());
}

#[test]
fn growth_gate_and_linear_growth() {
    let p = NLSConcentrationParams::new(2, 1.0, 16, 0.01, 0.3, 2).unwrap();
    let g0 = nls_growth_prediction(&p, 0.0).unwrap();
    assert_eq!(g0.predicted, 0.0);
    assert!(!g0.active && g0.holds());
    let t1 = 20.0 / p.amplitude().powi(2);
    let a = nls_growth_prediction(&p, t1).unwrap();
    let b = nls_growth_prediction(&p, 2.0 * t1).unwrap();
    assert!(a.active && a.holds() && b.holds());
    assert!((b.measured / a.measured - 2.0).abs() < 0.1, "{} {}", a.measured, b.measured);
}
