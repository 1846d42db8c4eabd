//! Burgers: two members of the oscillating family start close and end apart.
use displab::constructions::{burgers_approx, burgers_residual_norm, carrier_grid, BurgersFamilyParams};
use displab::experiments::high_pass;
use displab::evolvers::{evolve_final, EquationKind, EquationSpec, Scheme, StepperSpec};
use displab::spectral_core::sobolev_norm;

fn main() -> displab::Result<()> {
    let (s, delta, lambda) = (1.6, 1.2, 16.0);
    let plus = BurgersFamilyParams::new(1.0, lambda, delta, s)?;
    let minus = plus.with_omega(-1.0);
    let g = carrier_grid(plus.box_length(), lambda, 16.0)?;
    let norm = plus.phi.l2_norm();

    let eq = EquationSpec::new(EquationKind::Burgers)?;
    let st = StepperSpec::new(Scheme::parse("if-rk4")?, 1.0 / 128.0);
    let u0 = burgers_approx(&plus, 0.0, &g)?;
    let v0 = burgers_approx(&minus, 0.0, &g)?;
    println!("t=0 separation {:.4}", sobolev_norm(&u0.sub(&v0)?, s) / norm);
    let u1 = evolve_final(&eq, &u0, 1.0, &st)?;
    let v1 = evolve_final(&eq, &v0, 1.0, &st)?;
    let d = u1.sub(&v1)?;
    println!("t=1 separation {:.4}", sobolev_norm(&d, s) / norm);
    // the low-frequency parts differ too; the carrier part alone tends to sqrt2 sin t
    let hp = sobolev_norm(&high_pass(&d, lambda)?, s) / norm;
    println!("t=1 carrier part {hp:.4} (sqrt2 sin 1 = {:.4})", 2f64.sqrt() * 1f64.sin());

    for l in [32.0, 64.0, 128.0] {
        let r = burgers_residual_norm(&plus.with_lambda(l)?, 1.0)?;
        println!("lambda={l:<4} residual {:.3e} (lambda^-s = {:.3e})", r.total, r.predicted_bound);
    }
    Ok(())
}
