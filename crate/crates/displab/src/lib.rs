//! Spectral laboratory for flow-map instability of dispersive equations.
//!
//! Modules build on each other bottom-up: [`spectral_core`] supplies grids, multipliers and norms;
//! [`evolvers`] integrates the equations; [`constructions`] samples the approximate-solution families;
//! [`sphere_nls`] covers cubic NLS on the sphere; [`experiments`] turns all of it into reproducible runs.

pub mod cli;
pub mod constructions;
pub mod error;
pub mod evolvers;
pub mod experiments;
pub mod spectral_core;
pub mod sphere_nls;

pub use error::{Error, GuardTrip, Result};
