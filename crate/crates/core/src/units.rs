//! Physical constants and unit conversions used throughout the crate.

/// Reduced Planck constant in eV fs.
pub const HBAR_EV_FS: f64 = 0.6582119569;

/// One hartree in eV.
pub const HARTREE_EV: f64 = 27.211386245988;

/// Speed of light in atomic units.
pub const SPEED_OF_LIGHT_AU: f64 = 137.035999084;

/// One bohr in cm.
pub const BOHR_CM: f64 = 5.29177e-9;

/// One atomic unit of dipole moment (e bohr) in Debye.
pub const AU_DIPOLE_DEBYE: f64 = 2.541746;
