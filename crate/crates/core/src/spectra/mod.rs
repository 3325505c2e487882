//! Frequency grids, spectrum containers and the spectrum generators.

mod cross_peak;
mod fft;
mod peaks;
mod xanes;

use std::collections::BTreeMap;
use std::fmt;

use ndarray::Array2;

use crate::error::{Error, Result};

pub use cross_peak::{cross_peak_direct, decompose_gsb_esa, gsb_factors, CrossPeak, PathwayTerm};
pub use fft::{fft_2d_spectrum, FftConfig};
pub use peaks::{find_peaks, Peak};
pub use xanes::xanes;

/// Ordered key/value metadata written into spectrum file headers.
pub type Metadata = BTreeMap<String, String>;

/// Uniform, strictly increasing frequency axis in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl FrequencyGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() || !(step > 0.0 && step.is_finite()) || count < 2 {
            return Err(Error::InvalidParameter(format!(
                "frequency grid needs finite start, step > 0 and count > 1 \
                 (got {start}, {step}, {count})"
            )));
        }
        Ok(Self { start, step, count })
    }

    /// Symmetric grid `[-half_range, half_range]` with the given step.
    pub fn centered(half_range: f64, step: f64) -> Result<Self> {
        let half = (half_range / step).round() as usize;
        Self::new(-(half as f64) * step, step, 2 * half + 1)
    }

    /// +-5 eV at 0.02 eV.
    pub fn default_2d() -> Self {
        Self::centered(5.0, 0.02).expect("valid default grid")
    }

    pub fn value(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.value(k)).collect()
    }

    pub fn end(&self) -> f64 {
        self.value(self.count - 1)
    }

    /// Nearest grid index to `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let k = ((x - self.start) / self.step).round();
        k.clamp(0.0, (self.count - 1) as f64) as usize
    }
}

impl fmt::Display for FrequencyGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.start, self.step, self.count)
    }
}

/// Which part of the cross-peak signal a spectrum holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Total,
    Gsb,
    Esa,
}

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::Total => "total",
            Component::Gsb => "gsb",
            Component::Esa => "esa",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "total" => Some(Component::Total),
            "gsb" => Some(Component::Gsb),
            "esa" => Some(Component::Esa),
            _ => None,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum1D {
    pub grid: FrequencyGrid,
    pub values: Vec<f64>,
    pub axis: String,
    pub metadata: Metadata,
}

/// Values on an `(Omega3, Omega1)` grid: row index runs over `grid3`,
/// column index over `grid1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2D<T = f64> {
    pub grid1: FrequencyGrid,
    pub grid3: FrequencyGrid,
    pub values: Array2<T>,
    pub component: Component,
    pub metadata: Metadata,
}

impl<T: Clone> Spectrum2D<T> {
    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Spectrum2D<U> {
        Spectrum2D {
            grid1: self.grid1,
            grid3: self.grid3,
            values: self.values.map(f),
            component: self.component,
            metadata: self.metadata.clone(),
        }
    }
}

impl Spectrum2D<f64> {
    /// Largest absolute value.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Value at the grid point nearest `(omega1, omega3)`.
    pub fn at(&self, omega1: f64, omega3: f64) -> f64 {
        self.values[[self.grid3.nearest(omega3), self.grid1.nearest(omega1)]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(FrequencyGrid::new(0.0, 0.0, 10).is_err());
        assert!(FrequencyGrid::new(0.0, 0.1, 1).is_err());
        assert!(FrequencyGrid::new(f64::NAN, 0.1, 4).is_err());
        let g = FrequencyGrid::default_2d();
        assert_eq!(g.count, 501);
        assert_eq!(g.start, -5.0);
        assert!((g.end() - 5.0).abs() < 1e-12);
        assert_eq!(g.nearest(0.0), 250);
        assert_eq!(g.nearest(100.0), 500);
    }
}
