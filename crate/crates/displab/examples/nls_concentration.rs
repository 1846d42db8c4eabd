//! Concentrating NLS data stays close to the dispersionless ODE solution up to t_n.
//!
//! The model only wins while t_n is short against the dispersive time n^-2, i.e. d/2 - s > 1,
//! so the runs are on the 2-torus.
use displab::constructions::{nls_ansatz_error, NLSConcentrationParams};

fn main() -> displab::Result<()> {
    let d = 2;
    for s in [-0.1] {
        for n in [16, 32] {
            let p = NLSConcentrationParams::new(d, s, n, 0.1, 0.2, 2)?;
            let e = nls_ansatz_error(&p, p.t_n(), 8)?;
            println!(
                "d={d} s={s} n={n:<3} t_n={:.3e} max E_n error={:.3e} max H^s error={:.3e}",
                p.t_n(),
                e.max_energy_error(),
                e.max_hs_error()
            );
        }
    }
    Ok(())
}
