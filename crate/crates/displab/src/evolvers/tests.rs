use std::f64::consts::PI;

use num_complex::Complex64;

use super::*;
use crate::spectral_core::{apply_multiplier, l2_norm, make_grid, Field1D, MultiplierSpec};

fn kdv() -> EquationSpec {
    EquationSpec::new(EquationKind::Kdv).unwrap()
}

#[test]
fn zero_data_stays_zero() {
    let g = make_grid(32, 2.0 * PI).unwrap();
    let z = Field1D::zeros(&g);
    let tr = evolve(&kdv(), &z, 0.5, &StepperSpec::etdrk4(0.1)).unwrap();
    assert!(tr.last().unwrap().max_abs() == 0.0);
}

#[test]
fn linear_kdv_single_mode() {
    let g = make_grid(32, 2.0 * PI).unwrap();
    let u0 = Field1D::from_fn_real(&g, |x| x.cos());
    let u = evolve_final(&kdv().linear(), &u0, 0.7, &StepperSpec::etdrk4(0.05)).unwrap();
    let want = Field1D::from_fn_real(&g, |x| (x + 0.7).cos());
    assert!(u.sub(&want).unwrap().max_abs() < 1e-13);
}

#[test]
fn semigroup_exact_for_every_kind() {
    let g = make_grid(64, 7.0).unwrap();
    let u0 = Field1D::from_fn_real(&g, |x| (2.0 * PI * x / 7.0).sin().exp() - 1.0);
    let kinds = [
        EquationKind::Bo,
        EquationKind::Kdv,
        EquationKind::DispersiveGamma { gamma: 1.3 },
        EquationKind::BurgersParabolic { eps: 1e-3 },
        EquationKind::NlsTorus { d: 1, sign: NlsSign::Focusing },
    ];
    for k in kinds {
        let eq = EquationSpec::new(k).unwrap().linear();
        for scheme in [Scheme::EtdRk4, Scheme::IfRk4] {
            let u = evolve_final(&eq, &u0, 0.9, &StepperSpec::new(scheme, 0.1).without_guards()).unwrap();
            let m = MultiplierSpec::semigroup("s", 0.9, move |xi| eq.symbol(xi));
            let mut want = apply_multiplier(&u0, &m).unwrap();
            if eq.is_real() {
                want = want.to_real();
            }
            let err = u.sub(&want).unwrap().max_abs();
            assert!(err < 1e-10, "{k:?} {scheme:?}: {err}");
        }
    }
}

#[test]
fn ode_model_matches_closed_form() {
    let g = make_grid(64, 2.0 * PI).unwrap();
    let a = Field1D::from_fn(&g, |x| Complex64::new(1.2 * (x - PI).cos().powi(2), 0.3 * x.sin()));
    let eq = EquationSpec::new(EquationKind::OdeModel).unwrap();
    let st = StepperSpec::etdrk4(1e-3).with_dealias(false).without_guards();
    let v = evolve_final(&eq, &a, 1.0, &st).unwrap();
    let w = nls_ode_solution(&a, 1.0, NlsSign::Focusing);
    assert!(v.sub(&w).unwrap().max_abs() < 1e-8);
}

fn soliton(g: &crate::spectral_core::Grid1D, shift: f64) -> Field1D {
    let l = g.length();
    Field1D::from_fn_real(g, |x| {
        (-3..=3)
            .map(|p| {
                let y = x - 0.5 * l - shift + p as f64 * l;
                3.0 / (0.5 * y).cosh().powi(2)
            })
            .sum()
    })
}

#[test]
fn kdv_soliton_translates() {
    let g = make_grid(512, 80.0).unwrap();
    let u0 = soliton(&g, 0.0);
    let u = evolve_final(&kdv(), &u0, 1.0, &StepperSpec::etdrk4(1e-3)).unwrap();
    let err = l2_norm(&u.sub(&soliton(&g, 1.0)).unwrap());
    assert!(err < 1e-6, "{err}");
}

#[test]
fn self_convergence_order() {
    let g = make_grid(128, 2.0 * PI).unwrap();
    let u0 = Field1D::from_fn_real(&g, |x| 0.5 * x.sin() + 0.2 * (2.0 * x).cos());
    let eq = kdv();
    let run = |dt: f64| evolve_final(&eq, &u0, 1.0, &StepperSpec::etdrk4(dt)).unwrap();
    let (a, b, c) = (run(0.01), run(0.005), run(0.0025));
    let e1 = l2_norm(&a.sub(&b).unwrap());
    let e2 = l2_norm(&b.sub(&c).unwrap());
    let order = (e1 / e2).log2();
    assert!(order >= 3.5, "order {order}");
}

#[test]
fn mass_conservation_and_realness() {
    let g = make_grid(256, 2.0 * PI).unwrap();
    let u0 = Field1D::from_fn_real(&g, |x| 0.3 * (x.sin() + 0.5 * (3.0 * x).cos()));
    for k in [EquationKind::Bo, EquationKind::Kdv, EquationKind::Mkdv] {
        let eq = EquationSpec::new(k).unwrap();
        let tr = evolve(&eq, &u0, 1.0, &StepperSpec::etdrk4(1e-3).with_store_every(100)).unwrap();
        let m0 = tr.diagnostics[0].mass;
        let drift = tr.diagnostics.iter().map(|d| (d.mass - m0).abs() / m0).fold(0.0, f64::max);
        assert!(drift < 1e-6, "{k:?}: {drift}");
        assert!(tr.last().unwrap().hermitian_defect() < 1e-10);
    }
}

#[test]
fn burgers_gradient_guard_trips() {
    let g = make_grid(256, 2.0 * PI).unwrap();
    let u0 = Field1D::from_fn_real(&g, |x| x.sin());
    let eq = EquationSpec::new(EquationKind::Burgers).unwrap();
    let r = evolve_final(&eq, &u0, 2.0, &StepperSpec::etdrk4(1e-3));
    assert!(matches!(r, Err(crate::Error::Guard(_))));
}

#[test]
fn split_step_rejected_for_kdv() {
    let g = make_grid(16, 2.0 * PI).unwrap();
    let u0 = Field1D::from_fn_real(&g, |x| x.sin());
    assert!(evolve(&kdv(), &u0, 0.1, &StepperSpec::new(Scheme::SplitStepStrang, 0.01)).is_err());
}

#[test]
fn gauge_roundtrip_and_residuals() {
    let g = make_grid(64, 1.0).unwrap();
    let v0 = Field1D::from_fn_real(&g, |x| 0.8 * (2.0 * PI * x).cos() + 0.3 * (4.0 * PI * x).sin());
    let eq = EquationSpec::new(EquationKind::Mkdv).unwrap();
    let st = StepperSpec::etdrk4(2e-6).with_store_every(50);
    let tr = evolve(&eq, &v0, 2e-3, &st).unwrap();
    let u = gauge_transform_mkdv(&tr, GaugeDirection::ToGauged).unwrap();
    let back = gauge_transform_mkdv(&u, GaugeDirection::FromGauged).unwrap();
    for (a, b) in back.snapshots.iter().zip(&tr.snapshots) {
        assert!(l2_norm(&a.sub(b).unwrap()) < 1e-8);
    }
    let src = pde_residual(&eq, &tr).unwrap();
    let tgt = pde_residual(&EquationSpec::new(EquationKind::GaugedMkdv).unwrap(), &u).unwrap();
    assert!(tgt <= 10.0 * src.max(1e-12), "{tgt} vs {src}");
    let wrong = make_grid(64, 2.0).unwrap();
    let w0 = Field1D::from_fn_real(&wrong, |x| (PI * x).sin());
    let tw = evolve(&eq, &w0, 1e-4, &StepperSpec::etdrk4(1e-5)).unwrap();
    assert!(gauge_transform_mkdv(&tw, GaugeDirection::ToGauged).is_err());
}
