//! Highest-weight harmonics on the sphere: cubic self-interaction and the modulation ansatz.
use displab::sphere_nls::{cubic_decompose, highest_weight_run, omega_n, SphereGrid, SphereRunOptions};

fn main() -> displab::Result<()> {
    let s = 0.2;
    for n in [4, 8, 16] {
        let grid = SphereGrid::new(3 * n + 2)?;
        let d = cubic_decompose(&grid, n, s)?;
        println!("n={n:<3} omega={:.6} quadrature={:.6} low-degree residual={:.1e}", d.omega, d.omega_quadrature, d.low_degree_residual);
    }
    println!("omega_1 at s=0: {}", omega_n(1, 0.0));

    let opts = SphereRunOptions::new(1.0, 0.005);
    let (traj, a) = highest_weight_run(8, s, 0.5, &opts)?;
    println!("max |z| = {:.3e}, max ||q||_L2 = {:.3e}, mass drift = {:.1e}", a.max_abs_z(), a.max_q_l2(), traj.max_mass_drift());
    Ok(())
}
