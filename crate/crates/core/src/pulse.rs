//! Pulses, spectral envelopes and the four-pulse sequence.

use std::fmt;

use crate::error::{Error, Result};
use crate::manifold::{ElectronicManifold, StateBlock, Topology};

/// Shape of a pulse spectrum as a function of detuning from its carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvelopeKind {
    /// Flat top: weight 1 for `|detuning| <= half_width`, 0 outside.
    Rectangular { half_width: f64 },
    /// `exp(-4 ln2 detuning^2 / fwhm^2)`.
    Gaussian { fwhm: f64 },
}

/// Real, even spectral envelope with peak value `amplitude` at zero detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub kind: EnvelopeKind,
    pub amplitude: f64,
}

impl Envelope {
    pub fn rectangular(half_width: f64) -> Self {
        Self {
            kind: EnvelopeKind::Rectangular { half_width },
            amplitude: 1.0,
        }
    }

    pub fn gaussian(fwhm: f64) -> Self {
        Self {
            kind: EnvelopeKind::Gaussian { fwhm },
            amplitude: 1.0,
        }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// Envelope value at `detuning` (eV).
    pub fn weight(&self, detuning: f64) -> f64 {
        match self.kind {
            EnvelopeKind::Rectangular { half_width } => {
                if detuning.abs() <= half_width {
                    self.amplitude
                } else {
                    0.0
                }
            }
            EnvelopeKind::Gaussian { fwhm } => {
                let x = detuning / fwhm;
                self.amplitude * (-4.0 * std::f64::consts::LN_2 * x * x).exp()
            }
        }
    }

    /// Short tag used in file metadata, e.g. `rectangular` or `gaussian`.
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            EnvelopeKind::Rectangular { .. } => "rectangular",
            EnvelopeKind::Gaussian { .. } => "gaussian",
        }
    }

    /// Half-width for rectangular envelopes, FWHM for Gaussian ones.
    pub fn width(&self) -> f64 {
        match self.kind {
            EnvelopeKind::Rectangular { half_width } => half_width,
            EnvelopeKind::Gaussian { fwhm } => fwhm,
        }
    }

    fn check(&self) -> Result<()> {
        let width = self.width();
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "envelope width must be positive, got {width}"
            )));
        }
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "envelope amplitude must be nonnegative, got {}",
                self.amplitude
            )));
        }
        Ok(())
    }
}

/// Rectangular, +-5 eV around the carrier.
impl Default for Envelope {
    fn default() -> Self {
        Envelope::rectangular(5.0)
    }
}

impl fmt::Display for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            EnvelopeKind::Rectangular { half_width } => write!(
                f,
                "rectangular(half_width={half_width} eV, amplitude={})",
                self.amplitude
            ),
            EnvelopeKind::Gaussian { fwhm } => {
                write!(f, "gaussian(fwhm={fwhm} eV, amplitude={})", self.amplitude)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    /// Carrier frequency in eV.
    pub carrier: f64,
    pub envelope: Envelope,
}

impl Pulse {
    pub fn new(carrier: f64, envelope: Envelope) -> Result<Self> {
        if !(carrier > 0.0 && carrier.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "carrier frequency must be positive, got {carrier}"
            )));
        }
        envelope.check()?;
        Ok(Self { carrier, envelope })
    }

    /// Envelope weight for a transition of frequency `transition` (eV),
    /// i.e. the envelope at `transition - carrier`.
    pub fn weight_at(&self, transition: f64) -> f64 {
        self.envelope.weight(transition - self.carrier)
    }
}

/// Envelope weight of `pulse` at `detuning` from its carrier.
pub fn envelope_weight(pulse: &Pulse, detuning: f64) -> f64 {
    pulse.envelope.weight(detuning)
}

/// Transitions `(from_id, to_id)` between two blocks whose frequency
/// `E_to - E_from` falls inside the pulse envelope (nonzero weight).
pub fn selects_block(
    pulse: &Pulse,
    manifold: &ElectronicManifold,
    from_block: StateBlock,
    to_block: StateBlock,
) -> Result<Vec<(usize, usize)>> {
    Topology::new(manifold)?;
    let mut out = Vec::new();
    for (i, j, _) in manifold.transitions().iter() {
        let (si, sj) = (manifold.state(i)?, manifold.state(j)?);
        let oriented = if si.block == from_block && sj.block == to_block {
            Some((si, sj))
        } else if sj.block == from_block && si.block == to_block {
            Some((sj, si))
        } else {
            None
        };
        if let Some((from, to)) = oriented {
            if pulse.weight_at(to.energy - from.energy) != 0.0 {
                out.push((from.id, to.id));
            }
        }
    }
    Ok(out)
}

/// Four pulses in interaction order plus nominal delays (fs) between them.
///
/// Pulses are treated as temporally well separated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSequence {
    pub pulses: [Pulse; 4],
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl PulseSequence {
    pub fn new(pulses: [Pulse; 4]) -> Self {
        Self {
            pulses,
            t1: 0.0,
            t2: 0.0,
            t3: 0.0,
        }
    }

    /// Sequential two-color configuration: pulses 1 and 2 at `carrier_a`,
    /// pulses 3 and 4 at `carrier_b`, all sharing one envelope.
    pub fn two_color(carrier_a: f64, carrier_b: f64, envelope: Envelope) -> Result<Self> {
        let a = Pulse::new(carrier_a, envelope)?;
        let b = Pulse::new(carrier_b, envelope)?;
        Ok(Self::new([a, a, b, b]))
    }

    /// All four pulses at one carrier.
    pub fn one_color(carrier: f64, envelope: Envelope) -> Result<Self> {
        let p = Pulse::new(carrier, envelope)?;
        Ok(Self::new([p; 4]))
    }

    pub fn with_delays(mut self, t1: f64, t2: f64, t3: f64) -> Result<Self> {
        for (name, value) in [("t1", t1), ("t2", t2), ("t3", t3)] {
            if !(value >= 0.0) {
                return Err(Error::NegativeTime { name, value });
            }
        }
        self.t1 = t1;
        self.t2 = t2;
        self.t3 = t3;
        Ok(self)
    }

    /// Pulse `j` with the 1-based numbering of the experiment.
    pub fn pulse(&self, j: usize) -> &Pulse {
        &self.pulses[j - 1]
    }

    pub fn carriers(&self) -> [f64; 4] {
        self.pulses.map(|p| p.carrier)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{ElectronicState, TransitionTable};

    #[test]
    fn rectangular_weights() {
        let p = Pulse::new(401.0, Envelope::rectangular(5.0)).unwrap();
        assert_eq!(envelope_weight(&p, 0.0), 1.0);
        assert_eq!(envelope_weight(&p, 5.0), 1.0);
        assert_eq!(envelope_weight(&p, 6.0), 0.0);
        assert_eq!(envelope_weight(&p, -6.0), 0.0);
    }

    #[test]
    fn gaussian_half_maximum() {
        let p = Pulse::new(401.0, Envelope::gaussian(10.0)).unwrap();
        assert!((envelope_weight(&p, 5.0) - 0.5).abs() < 1e-15);
        assert_eq!(envelope_weight(&p, 0.0), 1.0);
    }

    #[test]
    fn invalid_pulses_rejected() {
        assert!(Pulse::new(0.0, Envelope::default()).is_err());
        assert!(Pulse::new(400.0, Envelope::rectangular(0.0)).is_err());
        assert!(Pulse::new(400.0, Envelope::gaussian(-1.0)).is_err());
        assert!(Pulse::new(400.0, Envelope::default().with_amplitude(-1.0)).is_err());
    }

    #[test]
    fn negative_delay_rejected() {
        let s = PulseSequence::one_color(401.0, Envelope::default()).unwrap();
        assert!(matches!(
            s.with_delays(1.0, -0.5, 0.0),
            Err(Error::NegativeTime { name: "t2", .. })
        ));
    }

    fn o_edge_manifold() -> ElectronicManifold {
        let mut states = vec![ElectronicState::new(0, StateBlock::G, 0.0)];
        let mut t = TransitionTable::new();
        for (k, e) in [533.0, 535.5, 538.0, 546.0].into_iter().enumerate() {
            states.push(ElectronicState::new(k + 1, StateBlock::EB, e));
            t.insert(0, k + 1, 0.1, 0.1);
        }
        ElectronicManifold::new(states, t)
    }

    #[test]
    fn carrier_selects_its_edge() {
        let m = o_edge_manifold();
        let o = Pulse::new(535.0, Envelope::rectangular(5.0)).unwrap();
        assert_eq!(
            selects_block(&o, &m, StateBlock::G, StateBlock::EB).unwrap(),
            vec![(0, 1), (0, 2), (0, 3)]
        );
        let n = Pulse::new(401.0, Envelope::rectangular(5.0)).unwrap();
        assert!(selects_block(&n, &m, StateBlock::G, StateBlock::EB)
            .unwrap()
            .is_empty());
        let silent = Pulse::new(535.0, Envelope::rectangular(5.0).with_amplitude(0.0)).unwrap();
        assert!(selects_block(&silent, &m, StateBlock::G, StateBlock::EB)
            .unwrap()
            .is_empty());
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn envelopes_are_even_and_peak_at_zero(d in -50.0f64..50.0, w in 0.1f64..20.0, a in 0.0f64..3.0) {
            for env in [Envelope::rectangular(w).with_amplitude(a), Envelope::gaussian(w).with_amplitude(a)] {
                prop_assert_eq!(env.weight(d), env.weight(-d));
                prop_assert!(env.weight(d) <= env.weight(0.0));
                prop_assert!(env.weight(d) >= 0.0);
            }
        }
    }
}
