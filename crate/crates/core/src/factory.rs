//! Synthetic manifolds: decoupled direct-product models, coupling-shifted
//! models and seeded random models.
//!
//! State ids follow a fixed layout: `0` is `g0`, then the A-edge states,
//! then the B-edge states, then the doubly excited states `(a, b)` in
//! row-major order (`a` over the A edge, `b` over the B edge).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::manifold::{ElectronicManifold, ElectronicState, StateBlock, TransitionTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeLabel {
    A,
    B,
}

/// One core transition out of the ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeTransition {
    pub energy: f64,
    pub dipole: f64,
    pub dephasing: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec {
    pub label: EdgeLabel,
    pub transitions: Vec<EdgeTransition>,
}

impl EdgeSpec {
    pub fn new(label: EdgeLabel, transitions: Vec<EdgeTransition>) -> Self {
        Self { label, transitions }
    }

    /// Builds an edge from `(energy, dipole, dephasing)` triples.
    pub fn from_triples(label: EdgeLabel, triples: &[(f64, f64, f64)]) -> Self {
        Self::new(
            label,
            triples
                .iter()
                .map(|&(energy, dipole, dephasing)| EdgeTransition {
                    energy,
                    dipole,
                    dephasing,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    fn check(&self, expected: EdgeLabel) -> Result<()> {
        if self.label != expected {
            return Err(Error::InvalidParameter(format!(
                "expected a {expected:?} edge, got {:?}",
                self.label
            )));
        }
        if self.transitions.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "{:?} edge has no transitions",
                self.label
            )));
        }
        for t in &self.transitions {
            if !t.energy.is_finite()
                || !t.dipole.is_finite()
                || !(t.dephasing > 0.0 && t.dephasing.is_finite())
            {
                return Err(Error::InvalidParameter(format!(
                    "{:?} edge transition {t:?} needs finite values and dephasing > 0",
                    self.label
                )));
            }
        }
        Ok(())
    }
}

/// Per-pair energy shift `Delta(a, b)` (eV) of the doubly excited states
/// and scale `s(a, b)` of their dipoles to the singly excited states.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSpec {
    n_a: usize,
    n_b: usize,
    shift: Vec<f64>,
    scale: Vec<f64>,
}

impl CouplingSpec {
    /// `Delta = 0`, `s = 1`: reproduces the product manifold.
    pub fn identity(n_a: usize, n_b: usize) -> Self {
        Self::uniform(n_a, n_b, 0.0, 1.0)
    }

    pub fn uniform(n_a: usize, n_b: usize, shift: f64, scale: f64) -> Self {
        Self {
            n_a,
            n_b,
            shift: vec![shift; n_a * n_b],
            scale: vec![scale; n_a * n_b],
        }
    }

    pub fn set_shift(&mut self, a: usize, b: usize, shift: f64) -> Result<()> {
        let k = self.slot(a, b)?;
        self.shift[k] = shift;
        Ok(())
    }

    pub fn set_scale(&mut self, a: usize, b: usize, scale: f64) -> Result<()> {
        let k = self.slot(a, b)?;
        self.scale[k] = scale;
        Ok(())
    }

    pub fn shift(&self, a: usize, b: usize) -> f64 {
        self.shift[a * self.n_b + b]
    }

    pub fn scale(&self, a: usize, b: usize) -> f64 {
        self.scale[a * self.n_b + b]
    }

    fn slot(&self, a: usize, b: usize) -> Result<usize> {
        if a >= self.n_a || b >= self.n_b {
            return Err(Error::InvalidParameter(format!(
                "coupling pair ({a}, {b}) outside a {}x{} table",
                self.n_a, self.n_b
            )));
        }
        Ok(a * self.n_b + b)
    }

    fn check(&self, edge_a: &EdgeSpec, edge_b: &EdgeSpec) -> Result<()> {
        if (self.n_a, self.n_b) != (edge_a.len(), edge_b.len()) {
            return Err(Error::InvalidParameter(format!(
                "coupling table is {}x{} but the edges are {}x{}",
                self.n_a,
                self.n_b,
                edge_a.len(),
                edge_b.len()
            )));
        }
        if self.shift.iter().any(|d| !d.is_finite())
            || self.scale.iter().any(|s| !(*s >= 0.0 && s.is_finite()))
        {
            return Err(Error::InvalidParameter(
                "coupling shifts must be finite and scales finite and >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Id of the doubly excited state `(a, b)` in the factory layout.
pub fn product_state_id(n_a: usize, n_b: usize, a: usize, b: usize) -> usize {
    1 + n_a + n_b + a * n_b + b
}

/// Decoupled model: every doubly excited state is the direct product
/// `|e_a e_b>` with `E_f = E_a + E_b`; the `e_a -> f` transition copies
/// dipole and dephasing of `g0 -> e_b`, and symmetrically.
pub fn build_product_manifold(edge_a: &EdgeSpec, edge_b: &EdgeSpec) -> Result<ElectronicManifold> {
    edge_a.check(EdgeLabel::A)?;
    edge_b.check(EdgeLabel::B)?;
    let (n_a, n_b) = (edge_a.len(), edge_b.len());

    let mut states = Vec::with_capacity(1 + n_a + n_b + n_a * n_b);
    let mut table = TransitionTable::new();
    states.push(ElectronicState::new(0, StateBlock::G, 0.0));
    for (a, t) in edge_a.transitions.iter().enumerate() {
        states.push(ElectronicState::new(1 + a, StateBlock::EA, t.energy));
        table.insert(0, 1 + a, t.dipole, t.dephasing);
    }
    for (b, t) in edge_b.transitions.iter().enumerate() {
        states.push(ElectronicState::new(1 + n_a + b, StateBlock::EB, t.energy));
        table.insert(0, 1 + n_a + b, t.dipole, t.dephasing);
    }
    for (a, ta) in edge_a.transitions.iter().enumerate() {
        for (b, tb) in edge_b.transitions.iter().enumerate() {
            let f = product_state_id(n_a, n_b, a, b);
            states.push(ElectronicState::new(
                f,
                StateBlock::F,
                ta.energy + tb.energy,
            ));
            table.insert(1 + a, f, tb.dipole, tb.dephasing);
            table.insert(1 + n_a + b, f, ta.dipole, ta.dephasing);
        }
    }
    ElectronicManifold::new(states, table).validated()
}

/// Product model with `E_f += Delta(a, b)` and both `e -> f` dipoles of
/// each doubly excited state scaled by `s(a, b)`.
pub fn build_coupled_manifold(
    edge_a: &EdgeSpec,
    edge_b: &EdgeSpec,
    coupling: &CouplingSpec,
) -> Result<ElectronicManifold> {
    let product = build_product_manifold(edge_a, edge_b)?;
    coupling.check(edge_a, edge_b)?;
    let (n_a, n_b) = (edge_a.len(), edge_b.len());

    let mut states = product.states().to_vec();
    let mut table = product.transitions().clone();
    for a in 0..n_a {
        for b in 0..n_b {
            let f = product_state_id(n_a, n_b, a, b);
            states[f].energy += coupling.shift(a, b);
            let s = coupling.scale(a, b);
            for e in [1 + a, 1 + n_a + b] {
                let t = *table.get(e, f).expect("product transition");
                table.insert(e, f, t.dipole * s, t.dephasing);
            }
        }
    }
    ElectronicManifold::new(states, table).validated()
}

/// Parameters of [`random_manifold`]. Every dipole-allowed pair of states
/// gets a dipole and a dephasing rate drawn uniformly from the ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomManifoldSpec {
    /// G-block states besides `g0`.
    pub n_g: usize,
    pub n_ea: usize,
    pub n_eb: usize,
    pub n_f: usize,
    pub g_energy: (f64, f64),
    pub ea_energy: (f64, f64),
    pub eb_energy: (f64, f64),
    pub f_energy: (f64, f64),
    pub dephasing: (f64, f64),
    pub dipole: (f64, f64),
}

impl Default for RandomManifoldSpec {
    fn default() -> Self {
        Self {
            n_g: 0,
            n_ea: 2,
            n_eb: 2,
            n_f: 4,
            g_energy: (1.0, 4.0),
            ea_energy: (398.0, 404.0),
            eb_energy: (532.0, 538.0),
            f_energy: (930.0, 942.0),
            dephasing: (0.05, 0.5),
            dipole: (0.01, 0.3),
        }
    }
}

impl RandomManifoldSpec {
    fn check(&self) -> Result<()> {
        let ranges = [
            ("g_energy", self.g_energy),
            ("ea_energy", self.ea_energy),
            ("eb_energy", self.eb_energy),
            ("f_energy", self.f_energy),
            ("dephasing", self.dephasing),
            ("dipole", self.dipole),
        ];
        for (name, (lo, hi)) in ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidParameter(format!(
                    "{name} range ({lo}, {hi}) is not ordered"
                )));
            }
        }
        if !(self.g_energy.0 > 0.0) {
            return Err(Error::InvalidParameter(
                "excited G-block energies must be positive so g0 stays unique".into(),
            ));
        }
        if !(self.dephasing.0 > 0.0) {
            return Err(Error::InvalidParameter(
                "dephasing range must be positive".into(),
            ));
        }
        Ok(())
    }
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

/// Seeded random manifold; the same seed and spec always give the same
/// manifold, and the result always passes validation.
pub fn random_manifold(seed: u64, spec: &RandomManifoldSpec) -> Result<ElectronicManifold> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = vec![ElectronicState::new(0, StateBlock::G, 0.0)];
    let blocks = [
        (StateBlock::G, spec.n_g, spec.g_energy),
        (StateBlock::EA, spec.n_ea, spec.ea_energy),
        (StateBlock::EB, spec.n_eb, spec.eb_energy),
        (StateBlock::F, spec.n_f, spec.f_energy),
    ];
    for (block, n, range) in blocks {
        for _ in 0..n {
            let id = states.len();
            states.push(ElectronicState::new(id, block, draw(&mut rng, range)));
        }
    }
    let mut table = TransitionTable::new();
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            if states[i].block.couples_to(states[j].block) {
                let dipole = draw(&mut rng, spec.dipole);
                let dephasing = draw(&mut rng, spec.dephasing);
                table.insert(i, j, dipole, dephasing);
            }
        }
    }
    ElectronicManifold::new(states, table).validated()
}
