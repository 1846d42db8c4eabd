//! Time integration for the equation family, conservation diagnostics, the mKdV gauge and the ODE model.

pub mod conserved;
pub mod equation;
pub mod evolve;
pub mod export;
pub mod gauge;
pub mod nls2d;
pub mod ode;
pub mod stepper;

#[cfg(test)]
mod tests;

pub use conserved::{conserved_quantities, nls2d_conserved, Conserved};
pub use equation::{EquationKind, EquationSpec, NlsSign};
pub use evolve::{evolve, evolve_final, evolve_observed, RunStats, Trajectory};
pub use export::{read_snapshot, write_snapshot, write_trajectory_csv};
pub use gauge::{gauge_shift, gauge_transform_mkdv, pde_residual, translate, GaugeDirection};
pub use nls2d::{evolve_nls2d, evolve_nls2d_observed, Trajectory2D};
pub use ode::nls_ode_solution;
pub use stepper::{Guards, Scheme, StepperSpec};
