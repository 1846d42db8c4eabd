//! Spherical harmonics, the highest-weight family and cubic NLS on the sphere.

mod ansatz;
mod evolve;
mod highest;
mod sht;

#[cfg(test)]
mod tests;

pub use ansatz::{
    ansatz_extract, decoherence_pair, highest_weight_data, highest_weight_run, AnsatzSeries, DecoherenceSeries,
};
pub use evolve::{
    evolve_sphere_coeffs, evolve_sphere_nls, sphere_energy, SphereRunOptions, SphereSign, SphereTrajectory,
};
pub use highest::{
    cubic_decompose, highest_weight, highest_weight_lp, omega_n, phi_n_coeffs, CubicDecomposition,
    HighestWeightParams,
};
pub use sht::{gauss_legendre, legendre_column, HarmonicCoeffs, SphereField, SphereGrid};
