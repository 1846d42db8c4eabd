//! Sobolev norms, the Hilbert transform and Littlewood-Paley pieces of a sampled field.
use std::f64::consts::PI;

use displab::spectral_core::{
    dyadic_range, hilbert_transform, littlewood_paley_project, make_grid, sobolev_norm, Field1D,
};

fn main() -> displab::Result<()> {
    let g = make_grid(256, 2.0 * PI)?;
    let u = Field1D::from_fn_real(&g, |x| x.cos() + 0.1 * (12.0 * x).sin());

    // H^s norm: L * sum (1 + xi^2)^s |c_xi|^2
    for s in [0.0, 0.5, 1.0, 2.0] {
        println!("||u||_H^{s} = {:.6}", sobolev_norm(&u, s));
    }

    // H cos = sin
    let h = hilbert_transform(&u);
    println!("max |H u| = {:.6}", h.max_abs());

    let mut total = Field1D::zeros(&g);
    for n in dyadic_range(&u) {
        let piece = littlewood_paley_project(&u, n)?;
        println!("Delta_{n:<4} L2 = {:.3e}", sobolev_norm(&piece, 0.0));
        total = total.add(&piece)?;
    }
    println!("sum of pieces - u = {:.2e}", total.sub(&u)?.max_abs());
    Ok(())
}
