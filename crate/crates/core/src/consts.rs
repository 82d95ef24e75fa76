//! Gas constants shared by every module.

/// Gas constant. Fixed so that `p = (2/3)·ρθ` and `e = θ`.
pub const R_GAS: f64 = 2.0 / 3.0;

/// Constant in the state equation `p = k ρ^{5/3} e^S`, equal to `1/(2πe)`.
pub const STATE_K: f64 = 1.0 / (2.0 * core::f64::consts::PI * core::f64::consts::E);

pub const PI: f64 = core::f64::consts::PI;
