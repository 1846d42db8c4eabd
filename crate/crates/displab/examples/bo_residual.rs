//! Residual of the Benjamin-Ono approximate solution, term by term, and its decay in lambda.
use displab::constructions::{bo_residual_decomposition, bo_term_exponents, BOFamilyParams};
use displab::experiments::fit_power_law;

fn main() -> displab::Result<()> {
    let lambdas = [32.0, 64.0, 128.0, 256.0];
    let mut totals = vec![];
    for &l in &lambdas {
        let p = BOFamilyParams::new(1.0, l, 0.5, 1.0)?;
        let r = bo_residual_decomposition(&p, 1.0)?;
        println!("lambda={l:<4} total={:.3e} terms={:?}", r.total, r.terms);
        totals.push(r.total);
    }
    let fit = fit_power_law(&lambdas, &totals)?;
    println!("total slope {:.3} (+/- {:.3})", fit.slope, fit.slope_ci);
    let p = BOFamilyParams::new(1.0, 32.0, 0.5, 1.0)?;
    println!("stated term exponents {:?}", bo_term_exponents(&p));
    Ok(())
}
