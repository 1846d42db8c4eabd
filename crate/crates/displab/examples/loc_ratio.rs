//! H^s norm of a modulated packet approaches ||phi|| / sqrt2 as the carrier frequency grows.
use displab::constructions::{loc_limit, loc_ratio};
use displab::spectral_core::BumpProfile;

fn main() -> displab::Result<()> {
    let phi = BumpProfile::standard().normalized();
    let lim = loc_limit(&phi);
    for alpha in [0.0, 1.0] {
        for l in [64.0, 128.0, 256.0, 512.0] {
            let r = loc_ratio(&phi, 1.0, 0.6, alpha, l)?;
            println!("alpha={alpha} lambda={l:<4} ratio={r:.6} dev={:.2e}", (r - lim).abs() / lim);
        }
    }
    Ok(())
}
