//! Third-order response function in the `k_I = -k1 + k2 + k3` direction.
//!
//! Each pulse `j` enters through an envelope-weighted exciton operator
//! `B_j^+` (raising) or `B_j^-` (lowering). The response is
//!
//! ```text
//! R(t3, t2, t1) = i^3 [ <B1-(0) B3+(t1+t2) B4-(t1+t2+t3) B2+(t1)>
//!                     + <B1-(0) B2+(t1) B4-(t1+t2+t3) B3+(t1+t2)>
//!                     - <B1-(0) B4-(t1+t2+t3) B3+(t1+t2) B2+(t1)> ]
//! ```
//!
//! with expectation values in the ground state. Products are applied right
//! to left onto `|g0>` through the sparse operator elements, which
//! enumerates every Liouville pathway once. A pathway contributes
//! `amplitude * exp(sum_m rate_m * t_m / hbar)`, so evaluation on time grids
//! is separable in `t1` and `t3`.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::manifold::{ElectronicManifold, Topology};
use crate::pulse::{Pulse, PulseSequence};
use crate::units::HBAR_EV_FS;

/// `B^+` raises the number of core holes by one, `B^-` lowers it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorSign {
    Raise,
    Lower,
}

/// One weighted element `|ket><bra|` of an exciton operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorElement {
    pub ket: usize,
    pub bra: usize,
    /// Envelope weight times transition dipole.
    pub amplitude: f64,
    /// `E_ket - E_bra` in eV.
    pub frequency: f64,
    pub dephasing: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcitonOperator {
    pub pulse_index: usize,
    pub sign: OperatorSign,
    pub elements: Vec<OperatorElement>,
}

/// How dephasing enters the time-domain pathways.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecayConvention {
    /// Each delay interval decays with the dephasing rate of the coherence
    /// (ket state, bra state) the density matrix is in during that interval.
    /// Lineshapes then match the closed-form cross-peak expression.
    #[default]
    Coherence,
    /// Each operator element decays as `exp(-Gamma tau / hbar)` at its own
    /// absolute interaction time `tau`.
    AbsoluteTime,
}

impl DecayConvention {
    pub fn name(self) -> &'static str {
        match self {
            DecayConvention::Coherence => "coherence",
            DecayConvention::AbsoluteTime => "absolute-time",
        }
    }
}

/// Index-based element used while enumerating pathways.
#[derive(Debug, Clone, Copy)]
struct Element {
    to: usize,
    amplitude: f64,
    frequency: f64,
    dephasing: f64,
}

/// Elements of one operator grouped by the state they act on.
struct SparseOperator {
    by_source: Vec<Vec<Element>>,
}

fn sparse_operator(topo: &Topology<'_>, pulse: &Pulse, sign: OperatorSign) -> SparseOperator {
    let mut by_source = vec![Vec::new(); topo.len()];
    for (from, row) in by_source.iter_mut().enumerate() {
        let holes = topo.block(from).core_holes();
        for link in &topo.links[from] {
            let target_holes = topo.block(link.to).core_holes();
            let allowed = match sign {
                OperatorSign::Raise => target_holes == holes + 1,
                OperatorSign::Lower => target_holes + 1 == holes,
            };
            if !allowed {
                continue;
            }
            let frequency = topo.energy(link.to) - topo.energy(from);
            let detuning = match sign {
                OperatorSign::Raise => frequency - pulse.carrier,
                OperatorSign::Lower => frequency + pulse.carrier,
            };
            let amplitude = pulse.envelope.weight(detuning) * link.dipole;
            if amplitude != 0.0 {
                row.push(Element {
                    to: link.to,
                    amplitude,
                    frequency,
                    dephasing: link.dephasing,
                });
            }
        }
    }
    SparseOperator { by_source }
}

/// Builds the exciton operator of `pulse` (numbered `pulse_index`).
///
/// Only dipole-allowed elements between adjacent blocks in the direction
/// given by `sign` with nonzero envelope weight are kept.
pub fn build_operator(
    pulse: &Pulse,
    pulse_index: usize,
    sign: OperatorSign,
    manifold: &ElectronicManifold,
) -> Result<ExcitonOperator> {
    let topo = Topology::new(manifold)?;
    let op = sparse_operator(&topo, pulse, sign);
    let mut elements = Vec::new();
    for (from, row) in op.by_source.iter().enumerate() {
        for e in row {
            elements.push(OperatorElement {
                ket: topo.id(e.to),
                bra: topo.id(from),
                amplitude: e.amplitude,
                frequency: e.frequency,
                dephasing: e.dephasing,
            });
        }
    }
    Ok(ExcitonOperator {
        pulse_index,
        sign,
        elements,
    })
}

/// Interaction time as coefficients of `(t1, t2, t3)`.
type TimeCoefficients = [u8; 3];

const TIME_ZERO: TimeCoefficients = [0, 0, 0];
const TIME_T1: TimeCoefficients = [1, 0, 0];
const TIME_T1_T2: TimeCoefficients = [1, 1, 0];
const TIME_T1_T2_T3: TimeCoefficients = [1, 1, 1];

/// Pulse number and time of each operator in the three correlation
/// functions, written left to right, with the sign of the term.
const TERMS: [([(usize, TimeCoefficients); 4], f64); 3] = [
    (
        [
            (1, TIME_ZERO),
            (3, TIME_T1_T2),
            (4, TIME_T1_T2_T3),
            (2, TIME_T1),
        ],
        1.0,
    ),
    (
        [
            (1, TIME_ZERO),
            (2, TIME_T1),
            (4, TIME_T1_T2_T3),
            (3, TIME_T1_T2),
        ],
        1.0,
    ),
    (
        [
            (1, TIME_ZERO),
            (4, TIME_T1_T2_T3),
            (3, TIME_T1_T2),
            (2, TIME_T1),
        ],
        -1.0,
    ),
];

fn sign_of_pulse(j: usize) -> OperatorSign {
    if j == 1 || j == 4 {
        OperatorSign::Lower
    } else {
        OperatorSign::Raise
    }
}

/// One resolved Liouville pathway of the response function.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponsePathway {
    /// Which of the three correlation functions (1-based).
    pub term: usize,
    /// State ids visited, starting and ending in `g0` (right to left).
    pub states: [usize; 5],
    /// Product of the four element amplitudes including the term sign.
    pub weight: f64,
    /// Oscillation frequency (eV) during `t1`, `t2`, `t3`.
    pub frequency: [f64; 3],
    /// Decay rate (eV) during each interval; `None` when the coherence has
    /// no stored dephasing rate (only an error if that interval is nonzero).
    pub decay: [Option<f64>; 3],
}

impl ResponsePathway {
    fn exponent(&self, times: [f64; 3], shift: [f64; 3]) -> Result<Complex64> {
        let mut z = Complex64::new(0.0, 0.0);
        for m in 0..3 {
            if times[m] == 0.0 {
                continue;
            }
            let decay = self.decay[m].ok_or_else(|| {
                Error::Unsupported(format!(
                    "pathway {:?} needs a dephasing rate for the coherence during t{} \
                     (store a zero-dipole TRANSITIONS row for that pair)",
                    self.states,
                    m + 1
                ))
            })?;
            z += Complex64::new(-decay, self.frequency[m] + shift[m]) * times[m];
        }
        Ok(z / HBAR_EV_FS)
    }
}

/// Precompiled response function for one manifold and pulse sequence.
#[derive(Debug, Clone)]
pub struct ResponseFunction {
    carriers: [f64; 4],
    convention: DecayConvention,
    pathways: Vec<ResponsePathway>,
}

impl ResponseFunction {
    pub fn new(
        manifold: &ElectronicManifold,
        sequence: &PulseSequence,
        convention: DecayConvention,
    ) -> Result<Self> {
        let topo = Topology::new(manifold)?;
        let ops: Vec<SparseOperator> = (1..=4)
            .map(|j| sparse_operator(&topo, sequence.pulse(j), sign_of_pulse(j)))
            .collect();

        let mut pathways = Vec::new();
        for (t, (order, term_sign)) in TERMS.iter().enumerate() {
            // Right-to-left application: position k acts k-th on |g0>.
            let chain: Vec<(usize, TimeCoefficients)> = order.iter().rev().copied().collect();
            let mut path = [topo.ground; 5];
            let mut picked = [Element {
                to: 0,
                amplitude: 0.0,
                frequency: 0.0,
                dephasing: 0.0,
            }; 4];
            enumerate(
                &topo,
                &ops,
                &chain,
                0,
                &mut path,
                &mut picked,
                &mut |path, picked| {
                    pathways.push(compile_pathway(
                        &topo,
                        t + 1,
                        *term_sign,
                        &chain,
                        path,
                        picked,
                        convention,
                    ));
                },
            );
        }

        Ok(Self {
            carriers: sequence.carriers(),
            convention,
            pathways,
        })
    }

    pub fn pathways(&self) -> &[ResponsePathway] {
        &self.pathways
    }

    pub fn convention(&self) -> DecayConvention {
        self.convention
    }

    /// `R(t3, t2, t1)`.
    pub fn response(&self, t3: f64, t2: f64, t1: f64) -> Result<Complex64> {
        let times = check_times(t1, t2, t3)?;
        self.sum(times, [0.0; 3])
    }

    /// `R(t3, t2, t1) exp(i[(w3 + w2 - w1) t3 + (w2 - w1) t2 - w1 t1] / hbar)`;
    /// the heterodyne-detected complex field whose imaginary part is the
    /// signal. Carrier phases are folded into each pathway before
    /// exponentiation.
    pub fn complex_signal(&self, t3: f64, t2: f64, t1: f64) -> Result<Complex64> {
        let times = check_times(t1, t2, t3)?;
        self.sum(times, self.rotating_frame())
    }

    /// `S(t3, t2, t1) = Im[complex_signal]`.
    pub fn signal(&self, t3: f64, t2: f64, t1: f64) -> Result<f64> {
        Ok(self.complex_signal(t3, t2, t1)?.im)
    }

    /// Frequencies (eV) subtracted from the pathway oscillations in the
    /// detected signal.
    pub fn rotating_frame(&self) -> [f64; 3] {
        let [w1, w2, w3, _] = self.carriers;
        [-w1, w2 - w1, w3 + w2 - w1]
    }

    fn sum(&self, times: [f64; 3], shift: [f64; 3]) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &self.pathways {
            acc += p.weight * p.exponent(times, shift)?.exp();
        }
        Ok(acc * I_CUBED)
    }

    /// Complex signal on the grid `t3s x t1s` (rows `t3`, columns `t1`) at
    /// fixed `t2`. Rows are evaluated in parallel; every cell sums the
    /// pathways in the same fixed order.
    pub fn complex_signal_grid(
        &self,
        t1s: &[f64],
        t2: f64,
        t3s: &[f64],
    ) -> Result<Array2<Complex64>> {
        for &t in t1s.iter().chain(t3s) {
            check_times(t, t2, 0.0)?;
        }
        check_times(0.0, t2, 0.0)?;
        let shift = self.rotating_frame();
        let mut factors1 = Vec::with_capacity(self.pathways.len());
        let mut factors3 = Vec::with_capacity(self.pathways.len());
        for p in &self.pathways {
            let middle = p.weight * p.exponent([0.0, t2, 0.0], shift)?.exp();
            let f1 = t1s
                .iter()
                .map(|&t| Ok(middle * p.exponent([t, 0.0, 0.0], shift)?.exp()))
                .collect::<Result<Vec<_>>>()?;
            let f3 = t3s
                .iter()
                .map(|&t| Ok(p.exponent([0.0, 0.0, t], shift)?.exp()))
                .collect::<Result<Vec<_>>>()?;
            factors1.push(f1);
            factors3.push(f3);
        }

        let n1 = t1s.len();
        let mut out = Array2::<Complex64>::zeros((t3s.len(), n1));
        out.as_slice_mut()
            .expect("standard layout")
            .par_chunks_mut(n1.max(1))
            .enumerate()
            .for_each(|(row, cells)| {
                for (col, cell) in cells.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (f1, f3) in factors1.iter().zip(&factors3) {
                        acc += f1[col] * f3[row];
                    }
                    *cell = acc * I_CUBED;
                }
            });
        Ok(out)
    }
}

const I_CUBED: Complex64 = Complex64::new(0.0, -1.0);

fn check_times(t1: f64, t2: f64, t3: f64) -> Result<[f64; 3]> {
    for (name, value) in [("t1", t1), ("t2", t2), ("t3", t3)] {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::NegativeTime { name, value });
        }
    }
    Ok([t1, t2, t3])
}

fn enumerate(
    topo: &Topology<'_>,
    ops: &[SparseOperator],
    chain: &[(usize, TimeCoefficients)],
    depth: usize,
    path: &mut [usize; 5],
    picked: &mut [Element; 4],
    emit: &mut dyn FnMut(&[usize; 5], &[Element; 4]),
) {
    if depth == 4 {
        if path[4] == topo.ground {
            emit(path, picked);
        }
        return;
    }
    let op = &ops[chain[depth].0 - 1];
    for e in &op.by_source[path[depth]] {
        path[depth + 1] = e.to;
        picked[depth] = *e;
        enumerate(topo, ops, chain, depth + 1, path, picked, emit);
    }
}

fn compile_pathway(
    topo: &Topology<'_>,
    term: usize,
    term_sign: f64,
    chain: &[(usize, TimeCoefficients)],
    path: &[usize; 5],
    picked: &[Element; 4],
    convention: DecayConvention,
) -> ResponsePathway {
    let weight = term_sign * picked.iter().map(|e| e.amplitude).product::<f64>();
    let mut frequency = [0.0; 3];
    let mut decay = [Some(0.0); 3];
    for m in 0..3 {
        // Elements whose interaction time includes interval m.
        let active: Vec<usize> = (0..4).filter(|&k| chain[k].1[m] == 1).collect();
        frequency[m] = active.iter().map(|&k| picked[k].frequency).sum();
        decay[m] = match convention {
            DecayConvention::AbsoluteTime => {
                Some(active.iter().map(|&k| picked[k].dephasing).sum())
            }
            DecayConvention::Coherence => {
                let (first, last) = (active[0], active[active.len() - 1]);
                debug_assert_eq!(
                    last - first + 1,
                    active.len(),
                    "interval elements are contiguous"
                );
                let (ket, bra) = (path[last + 1], path[first]);
                if ket == bra {
                    Some(0.0)
                } else {
                    topo.dephasing(ket, bra)
                }
            }
        };
    }
    ResponsePathway {
        term,
        states: path.map(|k| topo.id(k)),
        weight,
        frequency,
        decay,
    }
}

/// `R(t3, t2, t1)` with the default decay convention.
pub fn response_k1(
    manifold: &ElectronicManifold,
    sequence: &PulseSequence,
    t3: f64,
    t2: f64,
    t1: f64,
) -> Result<Complex64> {
    check_times(t1, t2, t3)?;
    ResponseFunction::new(manifold, sequence, DecayConvention::default())?.response(t3, t2, t1)
}

/// Detected signal `S(t3, t2, t1)` with the default decay convention.
pub fn signal_time_domain(
    manifold: &ElectronicManifold,
    sequence: &PulseSequence,
    t3: f64,
    t2: f64,
    t1: f64,
) -> Result<f64> {
    check_times(t1, t2, t3)?;
    ResponseFunction::new(manifold, sequence, DecayConvention::default())?.signal(t3, t2, t1)
}
