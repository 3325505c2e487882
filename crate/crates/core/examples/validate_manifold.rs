//! Parse a manifold file and report every validation problem.
//!
//! cargo run --example validate_manifold

use xcs2d::io::parse_manifold;
use xcs2d::Error;

const GOOD: &str = "\
# g0, one state per edge, one doubly excited state
STATES
0 G  0.0
1 EA 401.0
2 EB 535.0
3 F  937.0
TRANSITIONS
0 1 0.1 0.1
0 2 0.1 0.1
1 3 0.1 0.1
2 3 0.1 0.1
";

const BAD: &str = "\
STATES
0 G  0.0
1 EA 401.0
2 EB 535.0
TRANSITIONS
0 1 0.1 0.0
1 2 0.1 0.1
";

fn main() {
    let m = parse_manifold(GOOD).expect("valid manifold");
    println!(
        "good: {} states, {} transitions",
        m.states().len(),
        m.transitions().len()
    );
    for s in m.states() {
        println!("  {:>2} {:<2} {:>8.3} eV", s.id, s.block, s.energy);
    }

    match parse_manifold(BAD) {
        Err(Error::InvalidManifold(violations)) => {
            println!("bad: {} violations", violations.len());
            for v in violations {
                println!("  {v}");
            }
        }
        other => println!("unexpected: {other:?}"),
    }

    match parse_manifold("STATES\n0 G 0\n1 XX 401\n") {
        Err(e) => println!("syntax: {e}"),
        Ok(_) => unreachable!(),
    }
}
