//! Electronic-state manifold: states grouped into core-excitation blocks,
//! and a symmetric table of transition dipoles and dephasing rates.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Core-excitation block a state belongs to.
///
/// `G` holds states with no core hole (including the ground state `g0`),
/// `EA` and `EB` hold states with one core electron of type A or B excited,
/// and `F` holds states with both core types excited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateBlock {
    G,
    EA,
    EB,
    F,
}

impl StateBlock {
    pub const ALL: [StateBlock; 4] = [StateBlock::G, StateBlock::EA, StateBlock::EB, StateBlock::F];

    /// Number of core holes in states of this block.
    pub fn core_holes(self) -> u8 {
        match self {
            StateBlock::G => 0,
            StateBlock::EA | StateBlock::EB => 1,
            StateBlock::F => 2,
        }
    }

    /// Whether a dipole may connect states of the two blocks
    /// (`G-EA`, `G-EB`, `EA-F`, `EB-F`).
    pub fn couples_to(self, other: StateBlock) -> bool {
        use StateBlock::*;
        matches!(
            (self, other),
            (G, EA) | (EA, G) | (G, EB) | (EB, G) | (EA, F) | (F, EA) | (EB, F) | (F, EB)
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            StateBlock::G => "G",
            StateBlock::EA => "EA",
            StateBlock::EB => "EB",
            StateBlock::F => "F",
        }
    }
}

impl fmt::Display for StateBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for StateBlock {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "G" => Ok(StateBlock::G),
            "EA" => Ok(StateBlock::EA),
            "EB" => Ok(StateBlock::EB),
            "F" => Ok(StateBlock::F),
            other => Err(format!("unknown block '{other}' (expected G, EA, EB or F)")),
        }
    }
}

/// A single electronic state. Energies are absolute in eV with `g0` at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectronicState {
    pub id: usize,
    pub block: StateBlock,
    pub energy: f64,
}

impl ElectronicState {
    pub fn new(id: usize, block: StateBlock, energy: f64) -> Self {
        Self { id, block, energy }
    }
}

/// Scalar transition dipole (a.u.) and dephasing rate (eV) of one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub dipole: f64,
    pub dephasing: f64,
}

/// Symmetric map `(i, j) -> Transition`. Keys are stored with `i <= j`, so
/// `get(i, j)` and `get(j, i)` always agree.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TransitionTable {
    entries: BTreeMap<(usize, usize), Transition>,
}

fn pair_key(i: usize, j: usize) -> (usize, usize) {
    if i <= j {
        (i, j)
    } else {
        (j, i)
    }
}

impl TransitionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a pair, returning the previous entry for that pair if any.
    pub fn insert(
        &mut self,
        i: usize,
        j: usize,
        dipole: f64,
        dephasing: f64,
    ) -> Option<Transition> {
        self.entries
            .insert(pair_key(i, j), Transition { dipole, dephasing })
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Transition> {
        self.entries.get(&pair_key(i, j))
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.entries.contains_key(&pair_key(i, j))
    }

    /// Entries in ascending `(i, j)` order with `i <= j`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Transition)> {
        self.entries.iter().map(|(&(i, j), t)| (i, j, t))
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = (usize, usize, &mut Transition)> {
        self.entries.iter_mut().map(|(&(i, j), t)| (i, j, t))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A breach of one of the manifold invariants.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DuplicateStateId(usize),
    NonFiniteEnergy(usize),
    MissingGroundState,
    AmbiguousGroundState(Vec<usize>),
    UnknownState {
        i: usize,
        j: usize,
        missing: usize,
    },
    DiagonalTransition(usize),
    NonFiniteTransition(usize, usize),
    NonPositiveDephasing(usize, usize),
    ForbiddenBlockCoupling {
        i: usize,
        j: usize,
        blocks: (StateBlock, StateBlock),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateStateId(id) => write!(f, "state id {id} is defined more than once"),
            Violation::NonFiniteEnergy(id) => write!(f, "state {id} has a non-finite energy"),
            Violation::MissingGroundState => {
                write!(f, "no ground state (a G-block state with energy 0)")
            }
            Violation::AmbiguousGroundState(ids) => {
                write!(f, "several G-block states with energy 0: {ids:?}")
            }
            Violation::UnknownState { i, j, missing } => {
                write!(
                    f,
                    "transition ({i}, {j}) references unknown state {missing}"
                )
            }
            Violation::DiagonalTransition(id) => write!(f, "diagonal transition ({id}, {id})"),
            Violation::NonFiniteTransition(i, j) => {
                write!(
                    f,
                    "transition ({i}, {j}) has a non-finite dipole or dephasing"
                )
            }
            Violation::NonPositiveDephasing(i, j) => {
                write!(f, "transition ({i}, {j}) has non-positive dephasing")
            }
            Violation::ForbiddenBlockCoupling { i, j, blocks } => write!(
                f,
                "nonzero dipole between {} state {i} and {} state {j}",
                blocks.0, blocks.1
            ),
        }
    }
}

/// Complete level scheme: states plus transition table.
///
/// Construction never fails; call [`validate`] (or any computation, which
/// validates first) to check the invariants.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ElectronicManifold {
    states: Vec<ElectronicState>,
    transitions: TransitionTable,
}

impl ElectronicManifold {
    pub fn new(states: Vec<ElectronicState>, transitions: TransitionTable) -> Self {
        Self {
            states,
            transitions,
        }
    }

    pub fn states(&self) -> &[ElectronicState] {
        &self.states
    }

    pub fn transitions(&self) -> &TransitionTable {
        &self.transitions
    }

    pub fn state(&self, id: usize) -> Result<&ElectronicState> {
        self.states
            .iter()
            .find(|s| s.id == id)
            .ok_or(Error::UnknownState(id))
    }

    /// Id of the ground state, if exactly one exists.
    pub fn ground_state(&self) -> Option<usize> {
        let mut ground = self
            .states
            .iter()
            .filter(|s| s.block == StateBlock::G && s.energy == 0.0);
        match (ground.next(), ground.next()) {
            (Some(g), None) => Some(g.id),
            _ => None,
        }
    }

    /// States of one block, in definition order.
    pub fn block(&self, block: StateBlock) -> impl Iterator<Item = &ElectronicState> {
        self.states.iter().filter(move |s| s.block == block)
    }

    /// Dipole of the pair, zero when the pair is not stored.
    pub fn dipole(&self, i: usize, j: usize) -> f64 {
        self.transitions.get(i, j).map_or(0.0, |t| t.dipole)
    }

    pub fn dephasing(&self, i: usize, j: usize) -> Option<f64> {
        self.transitions.get(i, j).map(|t| t.dephasing)
    }

    /// Transition frequency `E_i - E_j` in eV.
    pub fn transition_frequency(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.state(i)?.energy - self.state(j)?.energy)
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(self)
    }

    /// Returns `self` if valid, otherwise all violations as an error.
    pub fn validated(self) -> Result<Self> {
        let violations = validate(&self);
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidManifold(violations))
        }
    }

    /// Copy with every dipole multiplied by `factor`.
    pub fn with_scaled_dipoles(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for (_, _, t) in out.transitions.iter_mut() {
            t.dipole *= factor;
        }
        out
    }

    /// Copy with `shift` added to the energy of every state in `blocks`.
    pub fn with_shifted_blocks(&self, blocks: &[StateBlock], shift: f64) -> Self {
        let mut out = self.clone();
        for s in out.states.iter_mut().filter(|s| blocks.contains(&s.block)) {
            s.energy += shift;
        }
        out
    }
}

/// Checks every manifold invariant; returns one entry per breach.
pub fn validate(manifold: &ElectronicManifold) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut blocks: HashMap<usize, StateBlock> = HashMap::new();

    for s in &manifold.states {
        if blocks.insert(s.id, s.block).is_some() {
            violations.push(Violation::DuplicateStateId(s.id));
        }
        if !s.energy.is_finite() {
            violations.push(Violation::NonFiniteEnergy(s.id));
        }
    }

    let grounds: Vec<usize> = manifold
        .states
        .iter()
        .filter(|s| s.block == StateBlock::G && s.energy == 0.0)
        .map(|s| s.id)
        .collect();
    match grounds.len() {
        0 => violations.push(Violation::MissingGroundState),
        1 => {}
        _ => violations.push(Violation::AmbiguousGroundState(grounds)),
    }

    for (i, j, t) in manifold.transitions.iter() {
        if i == j {
            violations.push(Violation::DiagonalTransition(i));
            continue;
        }
        let (bi, bj) = match (blocks.get(&i), blocks.get(&j)) {
            (Some(&bi), Some(&bj)) => (bi, bj),
            (None, _) => {
                violations.push(Violation::UnknownState { i, j, missing: i });
                continue;
            }
            (_, None) => {
                violations.push(Violation::UnknownState { i, j, missing: j });
                continue;
            }
        };
        if !t.dipole.is_finite() || !t.dephasing.is_finite() {
            violations.push(Violation::NonFiniteTransition(i, j));
            continue;
        }
        if t.dephasing <= 0.0 {
            violations.push(Violation::NonPositiveDephasing(i, j));
        }
        if t.dipole != 0.0 && !bi.couples_to(bj) {
            violations.push(Violation::ForbiddenBlockCoupling {
                i,
                j,
                blocks: (bi, bj),
            });
        }
    }

    violations
}

/// A dipole-allowed link from one state to another, by state index.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Link {
    pub to: usize,
    pub dipole: f64,
    pub dephasing: f64,
}

/// Index-based view of a validated manifold used by the numerical kernels.
#[derive(Debug)]
pub(crate) struct Topology<'a> {
    pub manifold: &'a ElectronicManifold,
    pub ground: usize,
    /// Nonzero-dipole neighbours of each state, sorted by index.
    pub links: Vec<Vec<Link>>,
    index: HashMap<usize, usize>,
}

impl<'a> Topology<'a> {
    pub fn new(manifold: &'a ElectronicManifold) -> Result<Self> {
        let violations = validate(manifold);
        if !violations.is_empty() {
            return Err(Error::InvalidManifold(violations));
        }
        let index: HashMap<usize, usize> = manifold
            .states
            .iter()
            .enumerate()
            .map(|(k, s)| (s.id, k))
            .collect();
        let ground_id = manifold
            .ground_state()
            .expect("validated manifold has a ground state");
        let mut links = vec![Vec::new(); manifold.states.len()];
        for (i, j, t) in manifold.transitions.iter() {
            if t.dipole == 0.0 {
                continue;
            }
            let (a, b) = (index[&i], index[&j]);
            links[a].push(Link {
                to: b,
                dipole: t.dipole,
                dephasing: t.dephasing,
            });
            links[b].push(Link {
                to: a,
                dipole: t.dipole,
                dephasing: t.dephasing,
            });
        }
        for l in &mut links {
            l.sort_by_key(|link| link.to);
        }
        Ok(Self {
            manifold,
            ground: index[&ground_id],
            links,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.manifold.states.len()
    }

    pub fn energy(&self, k: usize) -> f64 {
        self.manifold.states[k].energy
    }

    pub fn block(&self, k: usize) -> StateBlock {
        self.manifold.states[k].block
    }

    pub fn id(&self, k: usize) -> usize {
        self.manifold.states[k].id
    }

    #[allow(dead_code)]
    pub fn index_of(&self, id: usize) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Stored dephasing between two states, by index.
    pub fn dephasing(&self, a: usize, b: usize) -> Option<f64> {
        self.manifold.dephasing(self.id(a), self.id(b))
    }

    /// Link from `a` to `b` if a nonzero dipole connects them.
    pub fn link(&self, a: usize, b: usize) -> Option<&Link> {
        let row = &self.links[a];
        row.binary_search_by_key(&b, |l| l.to).ok().map(|k| &row[k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_level(gamma: f64) -> ElectronicManifold {
        let mut t = TransitionTable::new();
        t.insert(0, 1, 0.1, gamma);
        ElectronicManifold::new(
            vec![
                ElectronicState::new(0, StateBlock::G, 0.0),
                ElectronicState::new(1, StateBlock::EA, 401.0),
            ],
            t,
        )
    }

    #[test]
    fn minimal_manifold_is_valid() {
        assert!(validate(&two_level(0.05)).is_empty());
    }

    #[test]
    fn zero_dephasing_is_reported() {
        assert_eq!(
            validate(&two_level(0.0)),
            vec![Violation::NonPositiveDephasing(0, 1)]
        );
    }

    #[test]
    fn ea_eb_dipole_is_forbidden() {
        let mut m = two_level(0.05);
        m.states
            .push(ElectronicState::new(2, StateBlock::EB, 535.0));
        m.transitions.insert(1, 2, 0.1, 0.05);
        let v = validate(&m);
        assert_eq!(v.len(), 1);
        assert!(matches!(
            v[0],
            Violation::ForbiddenBlockCoupling { i: 1, j: 2, .. }
        ));
    }

    #[test]
    fn zero_dipole_between_forbidden_blocks_is_allowed() {
        let mut m = two_level(0.05);
        m.states
            .push(ElectronicState::new(2, StateBlock::EB, 535.0));
        m.transitions.insert(1, 2, 0.0, 0.05);
        assert!(validate(&m).is_empty());
    }

    #[test]
    fn structural_violations() {
        let mut t = TransitionTable::new();
        t.insert(0, 7, 0.1, 0.1);
        t.insert(3, 3, 0.1, 0.1);
        t.insert(0, 1, f64::NAN, 0.1);
        let m = ElectronicManifold::new(
            vec![
                ElectronicState::new(0, StateBlock::G, 0.0),
                ElectronicState::new(0, StateBlock::EA, 1.0),
                ElectronicState::new(1, StateBlock::G, 0.0),
                ElectronicState::new(3, StateBlock::EA, f64::INFINITY),
            ],
            t,
        );
        let v = validate(&m);
        assert!(v.contains(&Violation::DuplicateStateId(0)));
        assert!(v.contains(&Violation::NonFiniteEnergy(3)));
        assert!(v.contains(&Violation::AmbiguousGroundState(vec![0, 1])));
        assert!(v.contains(&Violation::UnknownState {
            i: 0,
            j: 7,
            missing: 7
        }));
        assert!(v.contains(&Violation::DiagonalTransition(3)));
        assert!(v.contains(&Violation::NonFiniteTransition(0, 1)));
    }

    #[test]
    fn missing_ground_state() {
        let m = ElectronicManifold::new(
            vec![ElectronicState::new(0, StateBlock::G, 1.0)],
            TransitionTable::new(),
        );
        assert_eq!(validate(&m), vec![Violation::MissingGroundState]);
    }

    #[test]
    fn transition_frequency_is_antisymmetric() {
        let m = two_level(0.05);
        assert_eq!(m.transition_frequency(1, 0).unwrap(), 401.0);
        assert_eq!(m.transition_frequency(0, 1).unwrap(), -401.0);
        assert_eq!(m.transition_frequency(1, 1).unwrap(), 0.0);
        assert!(matches!(
            m.transition_frequency(0, 9),
            Err(Error::UnknownState(9))
        ));
    }

    #[test]
    fn table_is_symmetric() {
        let mut t = TransitionTable::new();
        assert!(t.insert(4, 2, 0.3, 0.2).is_none());
        assert_eq!(t.get(2, 4), t.get(4, 2));
        assert!(t.insert(2, 4, 0.1, 0.1).is_some());
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn validate_is_idempotent() {
        let m = two_level(-1.0);
        assert_eq!(validate(&m), validate(&m));
    }
}
