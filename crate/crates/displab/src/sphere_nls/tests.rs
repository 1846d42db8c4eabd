use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn random_coeffs(b: usize, seed: u64) -> HarmonicCoeffs {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = HarmonicCoeffs::zeros(b);
    for l in 0..=b {
        for m in -(l as i64)..=l as i64 {
            c.set(l, m, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        }
    }
    c
}

#[test]
fn gauss_legendre_integrates_monomials() {
    let (x, w) = gauss_legendre(7);
    for k in 0..14 {
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
        let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
        assert!((q - exact).abs() < 1e-14, "k={k}");
    }
}

#[test]
fn round_trip_and_parseval() {
    let g = SphereGrid::new(20).unwrap();
    let c = random_coeffs(20, 3);
    let f = SphereField::from_coeffs(&g, &c).unwrap();
    let back = f.coeffs();
    let err = back.sub(&c).l2_norm() / c.l2_norm();
    assert!(err < 1e-12, "{err}");
    let rel = (f.l2_norm().powi(2) - c.l2_norm().powi(2)).abs() / c.l2_norm().powi(2);
    assert!(rel < 1e-12, "{rel}");
}

#[test]
fn constant_field_is_degree_zero() {
    let g = SphereGrid::new(6).unwrap();
    let f = SphereField::from_fn(&g, |_, _| Complex64::new(2.0, 0.0));
    let c = f.coeffs();
    assert!((c.get(0, 0).re - 2.0 * (4.0 * PI).sqrt()).abs() < 1e-12);
    assert!(c.max_where(|l, _| l > 0) < 1e-13);
}

#[test]
fn psi_one_is_a_single_harmonic() {
    let g = SphereGrid::new(5).unwrap();
    let psi = highest_weight(&g, 1).unwrap();
    let c = psi.coeffs();
    assert!(c.max_where(|l, m| (l, m) != (1, 1)) < 1e-13);
    assert!((psi.l2_norm().powi(2) - 8.0 * PI / 3.0).abs() < 1e-12);
    assert!((highest_weight_lp(1, 2).unwrap().powi(2) - 8.0 * PI / 3.0).abs() < 1e-12);
}

#[test]
fn laplacian_is_diagonal() {
    let g = SphereGrid::new(12).unwrap();
    // -Delta of x3 = cos(theta) is 2 cos(theta); of sin^2 e^{2i phi} is 6 sin^2 e^{2i phi}
    let f = SphereField::from_fn(&g, |x, p| Complex64::new(x, 0.0) + Complex64::from_polar(1.0 - x * x, 2.0 * p));
    let c = f.coeffs();
    let lap = c.map_degree(|l| (l * (l + 1)) as f64);
    let direct = SphereField::from_fn(&g, |x, p| Complex64::new(2.0 * x, 0.0) + Complex64::from_polar(6.0 * (1.0 - x * x), 2.0 * p));
    assert!(lap.sub(&direct.coeffs()).l2_norm() < 1e-12);
}

#[test]
fn omega_one_wallis() {
    assert!((omega_n(1, 0.0) - 0.8).abs() < 1e-12);
    let g = SphereGrid::new(5).unwrap();
    let d = cubic_decompose(&g, 1, 0.0).unwrap();
    assert!((d.omega - 0.8).abs() < 1e-12);
}

#[test]
fn cubic_remainder_has_high_degrees_only() {
    for n in [4usize, 8] {
        let g = SphereGrid::new(3 * n + 2).unwrap();
        let d = cubic_decompose(&g, n, 0.2).unwrap();
        assert!(d.low_degree_residual < 1e-10, "n={n}: {}", d.low_degree_residual);
        assert!(d.off_order < 1e-12);
        assert!((d.omega - d.omega_quadrature).abs() < 1e-10 * d.omega);
    }
}

#[test]
fn cubic_decompose_needs_bandwidth() {
    let g = SphereGrid::new(10).unwrap();
    assert!(cubic_decompose(&g, 4, 0.2).is_err());
}

#[test]
fn constant_solution_phase() {
    let g = SphereGrid::new(6).unwrap();
    let c0 = 0.7;
    let f = SphereField::from_fn(&g, |_, _| Complex64::new(c0, 0.0));
    let traj = evolve_sphere_nls(&f, &SphereRunOptions::new(1.0, 0.01)).unwrap();
    let expect = HarmonicCoeffs::zeros(6);
    let mut e = expect.clone();
    e.set(0, 0, Complex64::from_polar(c0 * (4.0 * PI).sqrt(), -c0 * c0));
    assert!(traj.final_state().sub(&e).l2_norm() < 1e-10);
}

#[test]
fn eigenfunction_phase_when_linear() {
    let n = 3;
    let (g, c0) = highest_weight_data(n, 0.2, 0.5).unwrap();
    let mut opts = SphereRunOptions::new(1.0, 0.05);
    opts.nonlinear = false;
    let traj = evolve_sphere_coeffs(&g, &c0, &opts).unwrap();
    let want = c0.scale(Complex64::from_polar(1.0, -((n * (n + 1)) as f64)));
    assert!(traj.final_state().sub(&want).l2_norm() < 1e-13);
    let a = ansatz_extract(&traj, n, 0.2, 0.5).unwrap();
    let om = omega_n(n, 0.2);
    let z_expect = Complex64::from_polar(1.0, 0.25 * om) - 1.0;
    assert!((a.z.last().unwrap() - z_expect).norm() < 1e-12);
}

#[test]
fn conservation_and_rotation_equivariance() {
    let n = 4;
    let (g, c0) = highest_weight_data(n, 0.2, 0.8).unwrap();
    let opts = SphereRunOptions::new(0.5, 0.005);
    let traj = evolve_sphere_coeffs(&g, &c0, &opts).unwrap();
    assert!(traj.max_mass_drift() < 1e-9, "{}", traj.max_mass_drift());
    assert!(traj.max_energy_drift() < 1e-7, "{}", traj.max_energy_drift());
    let alpha = 2.0 * PI / 7.0;
    let rot = evolve_sphere_coeffs(&g, &c0.rotate(alpha), &opts).unwrap();
    let err = rot.final_state().sub(&traj.final_state().rotate(alpha)).l2_norm();
    assert!(err < 1e-8, "{err}");
    let phase = traj.final_state().rotate(alpha).sub(&traj.final_state().scale(Complex64::from_polar(1.0, n as f64 * alpha)));
    assert!(phase.l2_norm() < 1e-12);
}

#[test]
fn generic_data_conserves_mass_and_energy() {
    let g = SphereGrid::new(12).unwrap();
    let mut c = random_coeffs(12, 9).map_degree(|l| if l <= 4 { 0.3 / (1.0 + l as f64) } else { 0.0 });
    c.set(0, 0, Complex64::new(0.5, 0.0));
    let traj = evolve_sphere_coeffs(&g, &c, &SphereRunOptions::new(1.0, 0.002)).unwrap();
    assert!(traj.max_mass_drift() < 1e-6);
    assert!(traj.max_energy_drift() < 1e-5);
}

#[test]
fn ansatz_identities_hold() {
    let n = 6;
    let mut opts = SphereRunOptions::new(1.0, 0.01);
    opts.store_every = 10;
    let (_, a) = highest_weight_run(n, 0.2, 0.5, &opts).unwrap();
    assert_eq!(a.z[0], Complex64::new(0.0, 0.0));
    assert_eq!(a.q_l2[0], 0.0);
    assert!(a.max_mass_identity() < 1e-6);
    assert!(a.coercive && a.coercive_bound_ok);
    assert!(a.max_abs_z() > 0.0 && a.max_abs_z() < 0.5);
}

#[test]
fn ansatz_rejects_mixed_orders() {
    let g = SphereGrid::new(8).unwrap();
    let mut c = phi_n_coeffs(8, 2, 0.2).unwrap();
    c.set(3, 1, Complex64::new(0.1, 0.0));
    let traj = evolve_sphere_coeffs(&g, &c, &SphereRunOptions::new(0.0, 0.1)).unwrap();
    assert!(ansatz_extract(&traj, 2, 0.2, 1.0).is_err());
}

#[test]
fn decoherence_gate() {
    let p = HighestWeightParams::new(16, 0.2, 0.8, 0.3).unwrap();
    assert!(p.kappa_n_sq() < 0.0);
    assert!(decoherence_pair(&p, &SphereRunOptions::new(0.1, 0.01)).is_err());
    assert!(HighestWeightParams::new(16, 0.3, 0.8, 0.3).is_err());
}

#[test]
fn lp_norm_slope() {
    let ns = [8usize, 16, 32, 64, 128];
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = ns.iter().map(|&n| highest_weight_lp(n, 4).unwrap().ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope + 0.125).abs() < 0.02, "{slope}");
}
