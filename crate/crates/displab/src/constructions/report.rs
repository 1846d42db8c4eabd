use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Residual certificate of one family member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub param_block: serde_json::Value,
    /// carrier `lambda` or concentration scale `n`
    pub lambda: f64,
    pub t: f64,
    /// `L^2` norms of the named pieces
    pub terms: BTreeMap<String, f64>,
    pub total: f64,
    /// bound `lambda^predicted_exponent` with unit constant
    pub predicted_bound: f64,
    pub predicted_exponent: f64,
    pub fitted_exponent: Option<f64>,
}

impl ResidualReport {
    pub fn parts_sum(&self) -> f64 {
        self.terms.values().sum()
    }

    /// Triangle inequality on the stored pieces.
    pub fn triangle_ok(&self) -> bool {
        self.total <= self.parts_sum() * (1.0 + 1e-9) + 1e-12
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.get(name).copied()
    }
}
