//! KdV soliton on a long periodic box: the solver should just translate it.
use displab::evolvers::{evolve, EquationKind, EquationSpec, Scheme, StepperSpec};
use displab::spectral_core::{l2_norm, make_grid, Field1D, Grid1D};

fn soliton(g: &Grid1D, shift: f64) -> Field1D {
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

fn main() -> displab::Result<()> {
    let g = make_grid(512, 80.0)?;
    let eq = EquationSpec::new(EquationKind::Kdv)?;
    let u0 = soliton(&g, 0.0);
    for scheme in ["etd-rk4", "if-rk4"] {
        let st = StepperSpec::new(Scheme::parse(scheme)?, 1e-3).with_store_every(250);
        let traj = evolve(&eq, &u0, 1.0, &st)?;
        for (t, u) in traj.times.iter().zip(&traj.snapshots) {
            // speed c = 1 for amplitude 3
            let err = l2_norm(&u.sub(&soliton(&g, *t))?);
            println!("{scheme:8} t={t:.2} |u - soliton| = {err:.2e}");
        }
    }
    Ok(())
}
