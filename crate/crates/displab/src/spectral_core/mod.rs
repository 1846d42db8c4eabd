//! Periodic grids, Fourier multipliers, norms and the profiles the constructions are built from.

pub mod bump;
pub mod field;
pub mod grid;
pub mod lp;
pub mod modulated;
pub mod mollify;
pub mod multiplier;
pub mod norms;
pub mod scaling;
pub mod torus2;

pub use bump::{BumpKind, BumpProfile};
pub use field::Field1D;
pub use grid::{make_grid, Grid1D, Spectral};
pub use lp::{dyadic_range, littlewood_paley_project, lp_symbol, psi};
pub use modulated::Modulated;
pub use mollify::{commutator, kato_ponce_ratio, mollify};
pub use multiplier::{apply_multiplier, derivative, hilbert_transform, MultiplierSpec, Parity, NAMED_MULTIPLIERS};
pub use norms::{homogeneous_norm, hs_norm_from_spectrum, l2_norm, lp_norm, sobolev_norm, spectral_tail};
pub use scaling::{gradient_factor, scaling_transform, ScalingMode};
pub use torus2::{Field2D, Grid2D};
