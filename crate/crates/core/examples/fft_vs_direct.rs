//! The 2D spectrum obtained by Fourier transforming the time-domain
//! signal, compared with the closed-form expression on the same grid.
//!
//! cargo run --release --example fft_vs_direct

use xcs2d::{
    build_coupled_manifold, cross_peak_direct, fft_2d_spectrum, find_peaks, CouplingSpec,
    EdgeLabel, EdgeSpec, Envelope, FftConfig, PulseSequence,
};

fn main() -> xcs2d::Result<()> {
    let a = EdgeSpec::from_triples(EdgeLabel::A, &[(400.5, 0.1, 0.1), (402.0, 0.15, 0.2)]);
    let b = EdgeSpec::from_triples(EdgeLabel::B, &[(535.0, 0.1, 0.12)]);
    let m = build_coupled_manifold(&a, &b, &CouplingSpec::uniform(2, 1, 0.8, 0.9))?;
    let seq = PulseSequence::two_color(401.0, 535.0, Envelope::default())?;

    let config = FftConfig::with_step(0.02, 2048);
    let fft = fft_2d_spectrum(&m, &seq, &config)?;
    if let Some(w) = fft.metadata.get("warnings") {
        println!("warning: {w}");
    }
    let fft = fft.map(|z| z.re);
    let direct = cross_peak_direct(&m, &seq, &fft.grid1, &fft.grid3)?.total();
    println!(
        "t_max = {:.1} fs, n = {}, step = {:.4} eV",
        config.t_max1, config.n1, fft.grid1.step
    );
    println!(
        "{:>9} {:>9} {:>12} {:>12} {:>8}",
        "Omega1", "Omega3", "direct", "fft", "rel err"
    );
    for p in find_peaks(&direct, 0.2) {
        let f = fft.at(p.omega1, p.omega3);
        let d = direct.at(p.omega1, p.omega3);
        println!(
            "{:>9.3} {:>9.3} {:>12.4e} {:>12.4e} {:>8.2e}",
            p.omega1,
            p.omega3,
            d,
            f,
            ((f - d) / d).abs()
        );
    }
    Ok(())
}
