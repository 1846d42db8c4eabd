//! Approximate-solution families with their residual certificates: Burgers, Benjamin-Ono,
//! the localisation ratio and concentrating NLS data.

pub mod bo;
pub mod burgers;
pub mod loc;
pub mod nls;
pub mod params;
pub mod report;

#[cfg(test)]
mod tests;

pub use bo::{
    bo_approx, bo_initial_data, bo_initial_modulated, bo_low_data, bo_low_family, bo_low_family_default,
    bo_phase, bo_plateau_phase, bo_profile, bo_residual_decomposition, bo_term_exponents, hilbert_commutator_ratio,
    BoLowFamily, BoundCheck, LOW_DT,
};
pub use burgers::{burgers_approx, burgers_approx_modulated, burgers_parts, burgers_residual_norm, burgers_residual_on};
pub use loc::{loc_limit, loc_ratio};
pub use nls::{
    nls_ansatz_error, nls_concentrating_data, nls_concentrating_data_2d, nls_grid_1d, nls_grid_2d,
    nls_growth_prediction, semiclassical_energy, semiclassical_energy_2d, AnsatzErrorSeries, GrowthPrediction,
};
pub use params::{carrier_grid, envelope_grid, BOFamilyParams, BurgersFamilyParams, NLSConcentrationParams};
pub use report::ResidualReport;
