//! Order-of-magnitude feasibility numbers for a four-wave-mixing x-ray
//! experiment.
//!
//! The per-photon absorption probability uses the peak cross section of a
//! Lorentzian line, evaluated in atomic units (`hbar = 1`, `c = 137.036`):
//!
//! ```text
//! sigma = 4 pi (omega / c) mu^2 / Gamma        [bohr^2]
//! p_abs = sigma * surface_density              (sigma converted to cm^2)
//! signal_ratio = p_abs^3
//! ```
//!
//! The signal ratio counts one generated photon per `1 / p_abs^3` incoming
//! photons for the three field interactions.

use std::fmt;

use crate::error::{Error, Result};
use crate::units::{AU_DIPOLE_DEBYE, BOHR_CM, HARTREE_EV, SPEED_OF_LIGHT_AU};

pub const CROSS_SECTION_MODEL: &str =
    "sigma = 4 pi (omega/(hbar c)) mu^2 / (Gamma/hbar), atomic units, 1 bohr = 5.29177e-9 cm";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YieldEstimate {
    /// Transition dipole in a.u.
    pub dipole: f64,
    /// cm^2
    pub focal_area: f64,
    /// molecules per cm^2
    pub surface_density: f64,
    pub photons_per_pulse: f64,
    pub linewidth: f64,
    pub transition: f64,
    /// Peak absorption cross section in cm^2.
    pub cross_section: f64,
    pub p_abs: f64,
    pub signal_ratio: f64,
    pub photons_out_per_pulse: f64,
    /// Molecules inside the focal spot.
    pub molecules_in_focus: f64,
}

/// Peak cross section (cm^2) of a line at `transition` eV with half-width
/// `linewidth` eV and dipole `dipole` a.u.
pub fn peak_cross_section(dipole: f64, linewidth: f64, transition: f64) -> f64 {
    let omega = transition / HARTREE_EV;
    let gamma = linewidth / HARTREE_EV;
    let sigma_bohr2 =
        4.0 * std::f64::consts::PI * (omega / SPEED_OF_LIGHT_AU) * dipole * dipole / gamma;
    sigma_bohr2 * BOHR_CM * BOHR_CM
}

pub fn estimate_yield(
    dipole: f64,
    focal_area: f64,
    surface_density: f64,
    photons_per_pulse: f64,
    linewidth: f64,
    transition: f64,
) -> Result<YieldEstimate> {
    let inputs = [
        ("dipole", dipole),
        ("focal_area", focal_area),
        ("surface_density", surface_density),
        ("photons_per_pulse", photons_per_pulse),
        ("linewidth", linewidth),
        ("transition", transition),
    ];
    for (name, value) in inputs {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be positive, got {value}"
            )));
        }
    }
    let cross_section = peak_cross_section(dipole, linewidth, transition);
    let p_abs = cross_section * surface_density;
    let signal_ratio = signal_ratio(p_abs);
    Ok(YieldEstimate {
        dipole,
        focal_area,
        surface_density,
        photons_per_pulse,
        linewidth,
        transition,
        cross_section,
        p_abs,
        signal_ratio,
        photons_out_per_pulse: photons_per_pulse * signal_ratio,
        molecules_in_focus: surface_density * focal_area,
    })
}

/// Fraction of incoming photons converted into signal photons.
pub fn signal_ratio(p_abs: f64) -> f64 {
    p_abs * p_abs * p_abs
}

impl fmt::Display for YieldEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dipole_au = {:e}", self.dipole)?;
        writeln!(f, "dipole_debye = {:e}", self.dipole * AU_DIPOLE_DEBYE)?;
        writeln!(f, "focal_area_cm2 = {:e}", self.focal_area)?;
        writeln!(f, "surface_density_cm-2 = {:e}", self.surface_density)?;
        writeln!(f, "photons_per_pulse = {:e}", self.photons_per_pulse)?;
        writeln!(f, "linewidth_eV = {:e}", self.linewidth)?;
        writeln!(f, "transition_eV = {:e}", self.transition)?;
        writeln!(f, "molecules_in_focus = {:e}", self.molecules_in_focus)?;
        writeln!(f, "cross_section_cm2 = {:e}", self.cross_section)?;
        writeln!(f, "p_abs = {:e}", self.p_abs)?;
        writeln!(f, "signal_ratio = {:e}", self.signal_ratio)?;
        writeln!(
            f,
            "photons_out_per_pulse = {:e}",
            self.photons_out_per_pulse
        )?;
        writeln!(f, "model = {CROSS_SECTION_MODEL}")?;
        write!(
            f,
            "units = 1 a.u. dipole = {AU_DIPOLE_DEBYE} D, 1 bohr = {BOHR_CM:e} cm"
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_chain() {
        assert!((signal_ratio(1e-5) - 1e-15).abs() < 1e-30);
        let y = estimate_yield(0.1, 1e-10, 1e14, 1e13, 10.0, 401.0).unwrap();
        assert!((y.signal_ratio - y.p_abs.powi(3)).abs() <= 1e-15 * y.signal_ratio);
        assert_eq!(y.photons_out_per_pulse, 1e13 * y.signal_ratio);
        assert!((y.molecules_in_focus - 1e4).abs() < 1e-9);
    }

    #[test]
    fn cross_section_scaling() {
        let base = peak_cross_section(0.1, 1.0, 400.0);
        assert!((peak_cross_section(0.2, 1.0, 400.0) / base - 4.0).abs() < 1e-12);
        assert!((peak_cross_section(0.1, 2.0, 400.0) / base - 0.5).abs() < 1e-12);
        assert!((peak_cross_section(0.1, 1.0, 800.0) / base - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        assert!(estimate_yield(0.0, 1e-10, 1e14, 1e13, 10.0, 401.0).is_err());
        assert!(estimate_yield(0.1, 1e-10, -1.0, 1e13, 10.0, 401.0).is_err());
        assert!(estimate_yield(0.1, 1e-10, 1e14, 1e13, f64::NAN, 401.0).is_err());
    }
}
