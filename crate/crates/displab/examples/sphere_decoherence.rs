//! Two nearby amplitudes of the same highest-weight harmonic drift out of phase.
use displab::sphere_nls::{decoherence_pair, HighestWeightParams, SphereRunOptions};

fn main() -> displab::Result<()> {
    // kappa_n^2 = kappa^2 - n^beta / omega_n must stay positive
    let p = HighestWeightParams::new(16, 0.13, 1.0, 0.1)?;
    println!("kappa_n^2 = {:.4}", p.kappa_n_sq());
    let mut opts = SphereRunOptions::new(3.0, 0.005);
    opts.store_every = 20;
    let d = decoherence_pair(&p, &opts)?;
    for i in 0..d.times.len() {
        println!("t={:.2} measured={:.4} predicted={:.4}", d.times[i], d.measured[i], d.predicted[i]);
    }
    println!("first predicted peak at t = {:.3}", d.first_peak_time());

    // inadmissible: kappa_n^2 < 0
    let bad = HighestWeightParams::new(16, 0.2, 0.8, 0.3)?;
    println!("n=16, kappa=0.8, beta=0.3: {}", decoherence_pair(&bad, &opts).unwrap_err());
    Ok(())
}
