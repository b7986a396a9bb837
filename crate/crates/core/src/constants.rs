//! Physical constants (CODATA 2018) and a few special-function values.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Vacuum permeability, H/m.
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// First zero of the Bessel function J₀.
pub const BESSEL_J0_ZERO: f64 = 2.404_825_557_695_773;

/// Metres per nanometre.
pub const NM: f64 = 1e-9;
