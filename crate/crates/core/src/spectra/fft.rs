//! 2D spectrum from sampled time-domain signals.
//!
//! The complex heterodyne field `z(t3, t2, t1)` is sampled on uniform
//! `(t1, t3)` grids and transformed as
//! `int_0^inf dt1 dt3 z exp(i Omega3 t3 / hbar) exp(i Omega1 t1 / hbar)`
//! with trapezoidal end weights. The result is divided by `i hbar^2`, which
//! puts it on the same scale as the closed-form cross peak: its real part
//! is directly comparable to [`super::CrossPeak::total`].

use std::f64::consts::PI;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::cross_peak::sequence_metadata;
use super::{Component, FrequencyGrid, Spectrum2D};
use crate::error::{Error, Result};
use crate::manifold::ElectronicManifold;
use crate::pulse::PulseSequence;
use crate::response::{DecayConvention, ResponseFunction};
use crate::units::HBAR_EV_FS;

/// Residual decay at `t_max` above which a warning is recorded.
pub const DECAY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FftConfig {
    /// Length of the `t1` window in fs; the frequency step is `2 pi hbar / t_max1`.
    pub t_max1: f64,
    pub t_max3: f64,
    /// Number of samples along `t1`; a power of two, at least 64.
    pub n1: usize,
    pub n3: usize,
    pub t2: f64,
    pub convention: DecayConvention,
}

impl FftConfig {
    /// Window giving the frequency step `step` (eV) on both axes.
    pub fn with_step(step: f64, n: usize) -> Self {
        let t_max = 2.0 * PI * HBAR_EV_FS / step;
        Self {
            t_max1: t_max,
            t_max3: t_max,
            n1: n,
            n3: n,
            t2: 0.0,
            convention: DecayConvention::default(),
        }
    }

    fn check(&self) -> Result<()> {
        for (name, n) in [("n1", self.n1), ("n3", self.n3)] {
            if n < 64 || !n.is_power_of_two() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be a power of two >= 64, got {n}"
                )));
            }
        }
        for (name, t) in [("t_max1", self.t_max1), ("t_max3", self.t_max3)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {t}"
                )));
            }
        }
        if !(self.t2 >= 0.0 && self.t2.is_finite()) {
            return Err(Error::NegativeTime {
                name: "t2",
                value: self.t2,
            });
        }
        Ok(())
    }
}

fn frequency_grid(t_max: f64, n: usize) -> FrequencyGrid {
    let step = 2.0 * PI * HBAR_EV_FS / t_max;
    FrequencyGrid {
        start: -((n / 2) as f64) * step,
        step,
        count: n,
    }
}

fn trapezoid_weights(n: usize, dt: f64) -> Vec<f64> {
    let mut w = vec![dt; n];
    w[0] *= 0.5;
    w[n - 1] *= 0.5;
    w
}

/// In-place unnormalised `exp(+i 2 pi k n / N)` transform along `axis`,
/// followed by a shift that puts the zero frequency at index `N / 2`.
fn transform_axis(data: &mut Array2<Complex64>, axis: Axis, planner: &mut FftPlanner<f64>) {
    let n = data.len_of(axis);
    let fft = planner.plan_fft_inverse(n);
    let mut buffer = vec![Complex64::new(0.0, 0.0); n];
    for mut lane in data.lanes_mut(axis) {
        for (b, v) in buffer.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        fft.process(&mut buffer);
        for (k, v) in buffer.iter().enumerate() {
            lane[(k + n / 2) % n] = *v;
        }
    }
}

/// Samples the complex signal on the `(t1, t3)` grid at fixed `t2` and
/// Fourier transforms both delays.
///
/// Rows of the result run over `Omega3`, columns over `Omega1`. Windows too
/// short for the slowest dephasing rate (`exp(-Gamma t_max / hbar) >= 1e-6`)
/// are reported in the `warnings` metadata entry.
pub fn fft_2d_spectrum(
    manifold: &ElectronicManifold,
    sequence: &PulseSequence,
    config: &FftConfig,
) -> Result<Spectrum2D<Complex64>> {
    config.check()?;
    let rf = ResponseFunction::new(manifold, sequence, config.convention)?;
    let dt1 = config.t_max1 / config.n1 as f64;
    let dt3 = config.t_max3 / config.n3 as f64;
    let t1s: Vec<f64> = (0..config.n1).map(|k| k as f64 * dt1).collect();
    let t3s: Vec<f64> = (0..config.n3).map(|k| k as f64 * dt3).collect();

    let mut data = rf.complex_signal_grid(&t1s, config.t2, &t3s)?;
    if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("time-domain signal samples".into()));
    }

    let w1 = trapezoid_weights(config.n1, dt1);
    let w3 = trapezoid_weights(config.n3, dt3);
    for ((r, c), z) in data.indexed_iter_mut() {
        *z *= w3[r] * w1[c];
    }

    let mut planner = FftPlanner::new();
    transform_axis(&mut data, Axis(1), &mut planner);
    transform_axis(&mut data, Axis(0), &mut planner);
    let norm = Complex64::new(0.0, HBAR_EV_FS * HBAR_EV_FS).inv();
    data.mapv_inplace(|z| z * norm);

    let mut warnings = Vec::new();
    let slowest = |m: usize| {
        rf.pathways()
            .iter()
            .filter_map(|p| p.decay[m])
            .fold(f64::INFINITY, f64::min)
    };
    for (axis, m, t_max) in [("t1", 0, config.t_max1), ("t3", 2, config.t_max3)] {
        let gamma = slowest(m);
        if gamma.is_finite() {
            let residual = (-gamma * t_max / HBAR_EV_FS).exp();
            if residual >= DECAY_TOLERANCE {
                warnings.push(format!(
                    "{axis} window {t_max} fs leaves exp(-Gamma t/hbar) = {residual:.3e} for Gamma = {gamma} eV"
                ));
            }
        }
    }

    let grid1 = frequency_grid(config.t_max1, config.n1);
    let grid3 = frequency_grid(config.t_max3, config.n3);
    let mut metadata = sequence_metadata(sequence);
    metadata.insert("kind".into(), "spectrum2d".into());
    metadata.insert("method".into(), "fft of sampled complex signal".into());
    metadata.insert("decay_convention".into(), config.convention.name().into());
    metadata.insert("grid1".into(), grid1.to_string());
    metadata.insert("grid3".into(), grid3.to_string());
    metadata.insert(
        "time_grid".into(),
        format!(
            "t_max1={} fs, n1={}, t_max3={} fs, n3={}, t2={} fs",
            config.t_max1, config.n1, config.t_max3, config.n3, config.t2
        ),
    );
    metadata.insert("normalization".into(), "transform / (i hbar^2)".into());
    metadata.insert("component".into(), Component::Total.name().into());
    if !warnings.is_empty() {
        metadata.insert("warnings".into(), warnings.join("; "));
    }

    Ok(Spectrum2D {
        grid1,
        grid3,
        values: data,
        component: Component::Total,
        metadata,
    })
}
