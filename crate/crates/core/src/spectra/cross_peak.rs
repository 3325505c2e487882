//! Closed-form two-color cross peak at `t2 = 0`.
//!
//! With pulses 1, 2 at `w1` and 3, 4 at `w3` the signal is
//!
//! ```text
//! S(W3, W1) = Re[ sum_{g,e1,e3} a_gsb / ((W1 - w1 + w_e1g0 + iG_e1g0)(W3 + w3 - w_e3g + iG_e3g))
//!               - sum_{e1,f,e1'} a_esa / ((W1 - w1 + w_e1g0 + iG_e1g0)(W3 + w3 - w_fe1 + iG_fe1)) ]
//! ```
//!
//! where each amplitude is the product of four envelope weights and four
//! dipoles. The first sum is ground-state bleaching (GSB), the second
//! excited-state absorption (ESA).

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use super::{Component, FrequencyGrid, Metadata, Spectrum2D};
use crate::error::{Error, Result};
use crate::manifold::{ElectronicManifold, StateBlock, Topology};
use crate::pulse::{Pulse, PulseSequence};
use crate::units::HBAR_EV_FS;

/// One resolved term of the closed-form cross peak.
#[derive(Debug, Clone, PartialEq)]
pub struct PathwayTerm {
    pub component: Component,
    /// `[g, e1, e3]` for GSB, `[f, e1, e1']` for ESA (state ids).
    pub states: [usize; 3],
    pub amplitude: f64,
    /// `Omega1` at which the first denominator is purely imaginary.
    pub omega1_resonance: f64,
    /// `Omega3` at which the second denominator is purely imaginary.
    pub omega3_resonance: f64,
    pub gamma1: f64,
    pub gamma3: f64,
}

impl PathwayTerm {
    fn factor1(&self, omega1: f64) -> Complex64 {
        Complex64::new(omega1 - self.omega1_resonance, self.gamma1).inv()
    }

    fn factor3(&self, omega3: f64) -> Complex64 {
        Complex64::new(omega3 - self.omega3_resonance, self.gamma3).inv()
    }

    /// Complex value of this term at one grid point (before `Re`).
    pub fn value(&self, omega1: f64, omega3: f64) -> Complex64 {
        self.amplitude * self.factor1(omega1) * self.factor3(omega3)
    }
}

/// GSB and ESA complex sums on a grid, plus every contributing term.
#[derive(Debug, Clone)]
pub struct CrossPeak {
    pub grid1: FrequencyGrid,
    pub grid3: FrequencyGrid,
    pub terms: Vec<PathwayTerm>,
    /// First double sum, rows `Omega3`, columns `Omega1`.
    pub gsb_complex: Array2<Complex64>,
    /// Second double sum (entering with a minus sign).
    pub esa_complex: Array2<Complex64>,
    pub metadata: Metadata,
}

impl CrossPeak {
    fn spectrum(&self, component: Component, values: Array2<f64>) -> Spectrum2D {
        let mut metadata = self.metadata.clone();
        metadata.insert("component".into(), component.name().into());
        Spectrum2D {
            grid1: self.grid1,
            grid3: self.grid3,
            values,
            component,
            metadata,
        }
    }

    pub fn gsb(&self) -> Spectrum2D {
        self.spectrum(Component::Gsb, self.gsb_complex.map(|z| z.re))
    }

    pub fn esa(&self) -> Spectrum2D {
        self.spectrum(Component::Esa, self.esa_complex.map(|z| -z.re))
    }

    /// `GSB + ESA`.
    pub fn total(&self) -> Spectrum2D {
        let values = ndarray::Zip::from(&self.gsb_complex)
            .and(&self.esa_complex)
            .map_collect(|g, e| g.re + -e.re);
        self.spectrum(Component::Total, values)
    }

    pub fn component(&self, component: Component) -> Spectrum2D {
        match component {
            Component::Total => self.total(),
            Component::Gsb => self.gsb(),
            Component::Esa => self.esa(),
        }
    }

    pub fn terms_of(&self, component: Component) -> impl Iterator<Item = &PathwayTerm> {
        self.terms.iter().filter(move |t| t.component == component)
    }
}

fn check_configuration(sequence: &PulseSequence) -> Result<()> {
    if sequence.t2 != 0.0 {
        return Err(Error::Unsupported(format!(
            "the closed-form cross peak is defined at t2 = 0 only (got {} fs); \
             use the FFT route for t2 > 0",
            sequence.t2
        )));
    }
    let [p1, p2, p3, p4] = sequence.pulses;
    if p1 != p2 || p3 != p4 {
        return Err(Error::Unsupported(
            "the closed-form cross peak needs pulses 1 = 2 and 3 = 4 \
             (sequential two-color configuration)"
                .into(),
        ));
    }
    Ok(())
}

fn enumerate_terms(topo: &Topology<'_>, pump: &Pulse, probe: &Pulse) -> Vec<PathwayTerm> {
    let g0 = topo.ground;
    let singles: Vec<usize> = topo.links[g0].iter().map(|l| l.to).collect();
    let mut terms = Vec::new();

    // GSB: g0 -> e1 -> g (pump pair) and g0 -> e3 -> g (probe pair).
    for g in (0..topo.len()).filter(|&k| topo.block(k) == StateBlock::G) {
        for &e1 in &singles {
            let (Some(up), Some(down)) = (topo.link(g0, e1), topo.link(e1, g)) else {
                continue;
            };
            let pump_part = pump.weight_at(topo.energy(e1))
                * pump.weight_at(topo.energy(e1) - topo.energy(g))
                * up.dipole
                * down.dipole;
            if pump_part == 0.0 {
                continue;
            }
            for &e3 in &singles {
                let (Some(from_g), Some(to_g0)) = (topo.link(g, e3), topo.link(e3, g0)) else {
                    continue;
                };
                let w_e3g = topo.energy(e3) - topo.energy(g);
                let probe_part = probe.weight_at(w_e3g)
                    * probe.weight_at(topo.energy(e3))
                    * from_g.dipole
                    * to_g0.dipole;
                let amplitude = pump_part * probe_part;
                if amplitude == 0.0 {
                    continue;
                }
                terms.push(PathwayTerm {
                    component: Component::Gsb,
                    states: [topo.id(g), topo.id(e1), topo.id(e3)],
                    amplitude,
                    omega1_resonance: pump.carrier - topo.energy(e1),
                    omega3_resonance: w_e3g - probe.carrier,
                    gamma1: up.dephasing,
                    gamma3: from_g.dephasing,
                });
            }
        }
    }

    // ESA: g0 -> e1 -> f, then f -> e1' -> g0, full double sum over e1, e1'.
    for &e1 in &singles {
        let up = topo.link(g0, e1).expect("single linked to g0");
        for to_f in topo.links[e1]
            .iter()
            .filter(|l| topo.block(l.to) == StateBlock::F)
        {
            let f = to_f.to;
            let w_fe1 = topo.energy(f) - topo.energy(e1);
            let first =
                pump.weight_at(topo.energy(e1)) * probe.weight_at(w_fe1) * up.dipole * to_f.dipole;
            if first == 0.0 {
                continue;
            }
            for down in topo.links[f]
                .iter()
                .filter(|l| topo.block(l.to).core_holes() == 1)
            {
                let e1p = down.to;
                let Some(back) = topo.link(e1p, g0) else {
                    continue;
                };
                let second = probe.weight_at(topo.energy(f) - topo.energy(e1p))
                    * pump.weight_at(topo.energy(e1p))
                    * down.dipole
                    * back.dipole;
                let amplitude = first * second;
                if amplitude == 0.0 {
                    continue;
                }
                terms.push(PathwayTerm {
                    component: Component::Esa,
                    states: [topo.id(f), topo.id(e1), topo.id(e1p)],
                    amplitude,
                    omega1_resonance: pump.carrier - topo.energy(e1),
                    omega3_resonance: w_fe1 - probe.carrier,
                    gamma1: up.dephasing,
                    gamma3: to_f.dephasing,
                });
            }
        }
    }
    terms
}

/// `sum_t amplitude_t u_t(Omega1) v_t(Omega3)` with a fixed term order per
/// cell; rows in parallel.
fn accumulate(
    terms: &[&PathwayTerm],
    grid1: &FrequencyGrid,
    grid3: &FrequencyGrid,
) -> Array2<Complex64> {
    let w1 = grid1.points();
    let w3 = grid3.points();
    let u: Vec<Vec<Complex64>> = terms
        .iter()
        .map(|t| w1.iter().map(|&x| t.amplitude * t.factor1(x)).collect())
        .collect();
    let v: Vec<Vec<Complex64>> = terms
        .iter()
        .map(|t| w3.iter().map(|&x| t.factor3(x)).collect())
        .collect();
    let n1 = grid1.count;
    let mut out = Array2::<Complex64>::zeros((grid3.count, n1));
    out.as_slice_mut()
        .expect("standard layout")
        .par_chunks_mut(n1)
        .enumerate()
        .for_each(|(row, cells)| {
            for (col, cell) in cells.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (ut, vt) in u.iter().zip(&v) {
                    acc += ut[col] * vt[row];
                }
                *cell = acc;
            }
        });
    out
}

pub(crate) fn sequence_metadata(sequence: &PulseSequence) -> Metadata {
    let mut m = Metadata::new();
    m.insert(
        "software".into(),
        format!("xcs2d {}", env!("CARGO_PKG_VERSION")),
    );
    m.insert("hbar_eV_fs".into(), HBAR_EV_FS.to_string());
    for (j, p) in sequence.pulses.iter().enumerate() {
        m.insert(format!("carrier{}_eV", j + 1), p.carrier.to_string());
        m.insert(format!("envelope{}", j + 1), p.envelope.to_string());
    }
    m.insert("t2_fs".into(), sequence.t2.to_string());
    m
}

fn cross_peak_metadata(
    sequence: &PulseSequence,
    grid1: &FrequencyGrid,
    grid3: &FrequencyGrid,
) -> Metadata {
    let mut m = sequence_metadata(sequence);
    m.insert("kind".into(), "spectrum2d".into());
    m.insert("method".into(), "closed-form sum over states".into());
    m.insert("grid1".into(), grid1.to_string());
    m.insert("grid3".into(), grid3.to_string());
    m.insert(
        "axes".into(),
        "rows Omega3 (eV), columns Omega1 (eV); Omega1 - w1 + w_e1g0 and Omega3 + w3 - w_e3g vanish on resonance"
            .into(),
    );
    m
}

/// Evaluates both double sums on `grid1 x grid3`.
///
/// Requires `t2 = 0` and pulses 1, 2 and 3, 4 pairwise identical.
pub fn cross_peak_direct(
    manifold: &ElectronicManifold,
    sequence: &PulseSequence,
    grid1: &FrequencyGrid,
    grid3: &FrequencyGrid,
) -> Result<CrossPeak> {
    check_configuration(sequence)?;
    let topo = Topology::new(manifold)?;
    let terms = enumerate_terms(&topo, sequence.pulse(1), sequence.pulse(3));
    let gsb: Vec<&PathwayTerm> = terms
        .iter()
        .filter(|t| t.component == Component::Gsb)
        .collect();
    let esa: Vec<&PathwayTerm> = terms
        .iter()
        .filter(|t| t.component == Component::Esa)
        .collect();
    let gsb_complex = accumulate(&gsb, grid1, grid3);
    let esa_complex = accumulate(&esa, grid1, grid3);
    Ok(CrossPeak {
        grid1: *grid1,
        grid3: *grid3,
        metadata: cross_peak_metadata(sequence, grid1, grid3),
        terms,
        gsb_complex,
        esa_complex,
    })
}

/// `(GSB, ESA)` spectra; their sum is the total cross peak.
pub fn decompose_gsb_esa(
    manifold: &ElectronicManifold,
    sequence: &PulseSequence,
    grid1: &FrequencyGrid,
    grid3: &FrequencyGrid,
) -> Result<(Spectrum2D, Spectrum2D)> {
    let cp = cross_peak_direct(manifold, sequence, grid1, grid3)?;
    Ok((cp.gsb(), cp.esa()))
}

/// Complex one-edge line-shape sums `L_A(Omega1)` and `L_B(Omega3)`.
///
/// When `g0` is the only G-block state the complex GSB matrix equals the
/// outer product `L_B(Omega3) L_A(Omega1)`, and `-Im L` reproduces the
/// XANES of each edge (`L_A` on a reversed axis).
pub fn gsb_factors(
    manifold: &ElectronicManifold,
    sequence: &PulseSequence,
    grid1: &FrequencyGrid,
    grid3: &FrequencyGrid,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    check_configuration(sequence)?;
    let topo = Topology::new(manifold)?;
    let (pump, probe) = (sequence.pulse(1), sequence.pulse(3));
    let g0 = topo.ground;
    let line = |pulse: &Pulse, grid: &FrequencyGrid, pump_axis: bool| -> Vec<Complex64> {
        grid.points()
            .iter()
            .map(|&x| {
                let mut acc = Complex64::new(0.0, 0.0);
                for l in &topo.links[g0] {
                    let w = topo.energy(l.to);
                    let weight = pulse.weight_at(w);
                    let resonance = if pump_axis {
                        pulse.carrier - w
                    } else {
                        w - pulse.carrier
                    };
                    acc += weight * weight * l.dipole * l.dipole
                        / Complex64::new(x - resonance, l.dephasing);
                }
                acc
            })
            .collect()
    };
    Ok((line(pump, grid1, true), line(probe, grid3, false)))
}
