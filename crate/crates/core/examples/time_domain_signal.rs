//! Third-order response and detected signal along t1 for a coupled model,
//! in both decay conventions.
//!
//! cargo run --example time_domain_signal

use xcs2d::{
    build_coupled_manifold, CouplingSpec, DecayConvention, EdgeLabel, EdgeSpec, Envelope,
    PulseSequence, ResponseFunction,
};

fn main() -> xcs2d::Result<()> {
    let a = EdgeSpec::from_triples(EdgeLabel::A, &[(401.3, 0.1, 0.1)]);
    let b = EdgeSpec::from_triples(EdgeLabel::B, &[(535.0, 0.1, 0.1)]);
    let m = build_coupled_manifold(&a, &b, &CouplingSpec::uniform(1, 1, 1.0, 1.0))?;
    let seq = PulseSequence::two_color(401.0, 535.0, Envelope::default())?;

    let coherence = ResponseFunction::new(&m, &seq, DecayConvention::Coherence)?;
    let absolute = ResponseFunction::new(&m, &seq, DecayConvention::AbsoluteTime)?;
    println!("{} pathways", coherence.pathways().len());
    for p in coherence.pathways() {
        println!(
            "  term {} states {:?} weight {:+.2e}",
            p.term, p.states, p.weight
        );
    }
    println!("{:>6} {:>12} {:>12}", "t1/fs", "S coherence", "S absolute");
    for k in 0..=20 {
        let t1 = k as f64 * 1.0;
        println!(
            "{t1:>6.1} {:>12.4e} {:>12.4e}",
            coherence.signal(2.0, 0.0, t1)?,
            absolute.signal(2.0, 0.0, t1)?
        );
    }
    Ok(())
}
