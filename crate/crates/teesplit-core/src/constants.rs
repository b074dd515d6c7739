//! Physical constants.
//!
//! Values follow the pre-2019 SI definitions: the vacuum permeability is the
//! exact `4 pi x 1e-7` and the free-space impedance is derived from it.

use std::f64::consts::PI;

/// Speed of light in vacuum, m/s (exact by definition).
pub const C0: f64 = 299_792_458.0;

/// Vacuum permeability, H/m.
pub const MU0: f64 = 4.0e-7 * PI;

/// Free-space wave impedance `mu0 * c0`, ohms (~376.73).
pub const ETA0: f64 = MU0 * C0;

/// Bulk conductivity of annealed copper, S/m.
pub const COPPER_CONDUCTIVITY: f64 = 5.8e7;
