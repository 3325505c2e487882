//! Feasibility numbers for a four-wave-mixing experiment.
//!
//! cargo run --example yield_estimate

use xcs2d::estimate_yield;

fn main() -> xcs2d::Result<()> {
    let y = estimate_yield(0.1, 1e-10, 1e14, 1e13, 10.0, 401.0)?;
    println!("{y}");
    println!();
    println!("{:>12} {:>12} {:>12}", "Gamma/eV", "p_abs", "photons out");
    for gamma in [0.1, 1.0, 5.0, 10.0, 20.0] {
        let y = estimate_yield(0.1, 1e-10, 1e14, 1e13, gamma, 401.0)?;
        println!(
            "{gamma:>12} {:>12.3e} {:>12.3e}",
            y.p_abs, y.photons_out_per_pulse
        );
    }
    Ok(())
}
