//! Cross peak of the minimal coupled model as the doubly excited state
//! moves away from `E_a + E_b`.
//!
//! cargo run --example coupled_cross_peak

use xcs2d::{
    build_coupled_manifold, cross_peak_direct, find_peaks, Component, CouplingSpec, EdgeLabel,
    EdgeSpec, Envelope, FrequencyGrid, PulseSequence,
};

fn main() -> xcs2d::Result<()> {
    let a = EdgeSpec::from_triples(EdgeLabel::A, &[(401.0, 0.1, 0.1)]);
    let b = EdgeSpec::from_triples(EdgeLabel::B, &[(535.0, 0.1, 0.1)]);
    let seq = PulseSequence::two_color(401.0, 535.0, Envelope::default())?;
    let grid = FrequencyGrid::default_2d();

    for delta in [0.0, 0.1, 0.25, 0.5, 1.0, 2.0] {
        let m = build_coupled_manifold(&a, &b, &CouplingSpec::uniform(1, 1, delta, 1.0))?;
        let cp = cross_peak_direct(&m, &seq, &grid, &grid)?;
        println!(
            "Delta = {delta:.2} eV: max|Total| = {:.4e}",
            cp.total().max_abs()
        );
        if delta == 1.0 {
            for c in [Component::Gsb, Component::Esa, Component::Total] {
                for p in find_peaks(&cp.component(c), 0.3) {
                    println!(
                        "    {:<5} peak at (Omega1, Omega3) = ({:+.3}, {:+.3}) eV, height {:+.4e}",
                        c.name(),
                        p.omega1,
                        p.omega3,
                        p.height
                    );
                }
            }
        }
    }
    Ok(())
}
