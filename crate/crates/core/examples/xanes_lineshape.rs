//! Single-edge absorption spectrum of a three-line manifold.
//!
//! cargo run --example xanes_lineshape

use xcs2d::{
    xanes, ElectronicManifold, ElectronicState, Envelope, FrequencyGrid, Pulse, StateBlock,
    TransitionTable,
};

fn main() -> xcs2d::Result<()> {
    let lines = [(399.5, 0.08, 0.1), (401.0, 0.1, 0.05), (402.2, 0.05, 0.2)];
    let mut states = vec![ElectronicState::new(0, StateBlock::G, 0.0)];
    let mut table = TransitionTable::new();
    for (k, &(energy, mu, gamma)) in lines.iter().enumerate() {
        states.push(ElectronicState::new(k + 1, StateBlock::EA, energy));
        table.insert(0, k + 1, mu, gamma);
    }
    let m = ElectronicManifold::new(states, table).validated()?;

    let pulse = Pulse::new(401.0, Envelope::rectangular(5.0))?;
    let grid = FrequencyGrid::new(-3.0, 0.1, 61)?;
    let s = xanes(&m, &pulse, &grid)?;
    let top = s.values.iter().cloned().fold(0.0, f64::max);
    println!("# {}", s.axis);
    for (k, v) in s.values.iter().enumerate() {
        let bar = "#".repeat((60.0 * v / top).round() as usize);
        println!("{:>6.2} {:>10.5} {bar}", grid.value(k), v);
    }
    Ok(())
}
