//! Sum-over-states simulation of linear x-ray absorption (XANES) and
//! two-dimensional coherent x-ray correlation spectra (2DXCS).
//!
//! The crate works from a user-supplied electronic-state manifold: a ground
//! state, two families of singly core-excited states (edges `A` and `B`),
//! and doubly core-excited states. From it we compute
//!
//! * the third-order response function in the `k_I = -k1 + k2 + k3`
//!   direction and the heterodyne-detected signal in the time domain
//!   ([`response`]),
//! * closed-form cross-peak spectra split into ground-state bleaching and
//!   excited-state absorption, linear XANES, and the FFT route from sampled
//!   time-domain signals ([`spectra`]),
//! * synthetic manifolds for decoupled and coupled core transitions
//!   ([`factory`]),
//! * text file formats and the `xcs2d` command line ([`io`], [`cli`]).
//!
//! Units: energies in eV, times in fs, dipoles in atomic units. Phases and
//! decays use `hbar = 0.6582119569 eV fs` (see [`units`]).

pub mod cli;
pub mod error;
pub mod factory;
pub mod io;
pub mod manifold;
pub mod pulse;
pub mod response;
pub mod spectra;
pub mod units;
pub mod yield_estimate;

pub use error::{Error, Result};
pub use factory::{
    build_coupled_manifold, build_product_manifold, random_manifold, CouplingSpec, EdgeLabel,
    EdgeSpec, EdgeTransition, RandomManifoldSpec,
};
pub use manifold::{
    validate, ElectronicManifold, ElectronicState, StateBlock, Transition, TransitionTable,
    Violation,
};
pub use pulse::{envelope_weight, selects_block, Envelope, EnvelopeKind, Pulse, PulseSequence};
pub use response::{
    build_operator, response_k1, signal_time_domain, DecayConvention, ExcitonOperator,
    OperatorSign, ResponseFunction,
};
pub use spectra::{
    cross_peak_direct, decompose_gsb_esa, fft_2d_spectrum, find_peaks, xanes, Component, CrossPeak,
    FftConfig, FrequencyGrid, PathwayTerm, Peak, Spectrum1D, Spectrum2D,
};
pub use yield_estimate::{estimate_yield, YieldEstimate};
